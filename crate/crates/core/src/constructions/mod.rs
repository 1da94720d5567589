//! Recursive constructions: block breaking, weighting, truncation and
//! adding or deleting a point. Every construction verifies its output.

mod breaking;
mod points;
mod provider;
mod truncate;
mod wfc;

use thiserror::Error;

use crate::designs::{verify_gdd, verify_pbd, DesignError, GroupDesign, PBDesign, Point};

pub use breaking::{break_blocks_gdd, break_blocks_pbd};
pub(crate) use provider::fmt_sizes;
pub use points::{add_point_fill, delete_point, relabel_pbd, FillPolicy, GroupFill};
pub use provider::{Generators, Provider, Request, Resolved};
pub use truncate::truncate;
pub use wfc::{wfc, CloneMap, Weights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("missing ingredient: {0}")]
    MissingIngredient(Request),
    #[error("{construction} produced an invalid design: {summary}")]
    Unverified {
        construction: &'static str,
        summary: String,
    },
    #[error("group index {index} out of range ({count} groups)")]
    BadGroup { index: usize, count: usize },
    #[error("cannot keep {keep} points of a group of size {size}")]
    BadKeep { keep: usize, size: usize },
    #[error("point {point} out of range for v = {v}")]
    UnknownPoint { point: Point, v: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("expected {expected} per-group fills, got {got}")]
    FillCount { expected: usize, got: usize },
    #[error("relabeling is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error(transparent)]
    Design(#[from] DesignError),
}

fn checked_pbd(construction: &'static str, design: PBDesign) -> Result<PBDesign, ConstructionError> {
    let report = verify_pbd(&design);
    if report.valid {
        Ok(design)
    } else {
        Err(ConstructionError::Unverified {
            construction,
            summary: report.summary(),
        })
    }
}

fn checked_gdd(construction: &'static str, design: GroupDesign) -> Result<GroupDesign, ConstructionError> {
    let report = verify_gdd(&design);
    if report.valid {
        Ok(design)
    } else {
        Err(ConstructionError::Unverified {
            construction,
            summary: report.summary(),
        })
    }
}

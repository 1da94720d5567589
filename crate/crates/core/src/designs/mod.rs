//! Pairwise balanced designs, group divisible designs and their verifiers.

mod blocks;
mod gdd;
mod overlap;
mod params;
mod pbd;
mod verify;

use thiserror::Error;

pub use blocks::{Blocks, Incidence, Point};
pub use gdd::{GroupDesign, GroupType};
pub use overlap::{overlap_threshold, solve_overlap, Overlap};
pub use params::{
    admissibility, admissible, admissible_by_replication, admissible_by_y, gcd, params,
    y_admissible, Admissibility, DesignParams,
};
pub use pbd::PBDesign;
pub use verify::{
    verify_gdd, verify_pbd, VerificationReport, Violation, ViolationKind, Witness,
    TRIANGULAR_LIMIT, WITNESS_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("point {point} out of range for v = {v}")]
    PointOutOfRange { point: Point, v: usize },
    #[error("point {point} repeated within a {what}")]
    RepeatedPoint { point: Point, what: &'static str },
    #[error("point {point} lies in more than one group")]
    OverlappingGroups { point: Point },
    #[error("empty group")]
    EmptyGroup,
    #[error("block size set K is empty")]
    EmptyK,
    #[error("block size {0} is below 2")]
    BlockSizeTooSmall(usize),
    #[error("y = {y} is below the overlap threshold for A = {a}, c = {c}")]
    BelowThreshold { y: u64, a: u64, c: u64 },
    #[error("overlap needs A >= 1 and c >= 1 (got A = {a}, c = {c})")]
    InvalidOverlap { a: u64, c: u64 },
}

/// A PBD read as a GDD of type `1^v`.
pub fn pbd_as_gdd(design: &PBDesign) -> GroupDesign {
    GroupDesign::from_pbd(design)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbd_as_gdd_keeps_pairs() {
        let fano = PBDesign::from_blocks(
            7,
            [
                [0u32, 1, 2],
                [0, 3, 4],
                [0, 5, 6],
                [1, 3, 5],
                [1, 4, 6],
                [2, 3, 6],
                [2, 4, 5],
            ],
        )
        .unwrap();
        let g = pbd_as_gdd(&fano);
        assert_eq!(g.group_type().to_string(), "1^7");
        assert_eq!(g.blocks(), fano.blocks());
        let r = verify_gdd(&g);
        assert!(r.valid);
        assert_eq!(r.pairs_checked, verify_pbd(&fano).pairs_checked);
    }
}

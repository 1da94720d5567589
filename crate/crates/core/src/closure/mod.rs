//! Generated subspaces, strong subspaces, and (strong) dimension.

mod search;
mod span;

use thiserror::Error;

pub use search::{
    binomial, dimension, dimension_at_least, pair_span_certificate, strong_dimension,
    strong_dimension_at_least, CertificateKind, Colex, DimensionCertificate, Method, SearchMode,
    DEFAULT_BUDGET, DEFAULT_SAMPLES,
};
pub use span::{is_strong_subspace, is_subspace, span, strong_span, Scratch, SpanIndex};

use crate::designs::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("point {point} is not a point of the design (v = {v})")]
    UnknownPoint { point: Point, v: usize },
}

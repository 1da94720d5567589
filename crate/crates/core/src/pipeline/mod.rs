//! Parameter planning and the staged construction of large PBDs from an
//! affine space, with every intermediate design verified.

mod execute;
mod plan;
mod registry;

use thiserror::Error;

use crate::constructions::Request;
use crate::designs::DesignError;

pub use execute::{execute, DimensionPolicy, PipelineOutput, StageRecord, StageTrace};
pub use plan::{plan, Binding, Blocked, BlockReason, Limits, Mode, PipelinePlan, PlanRequest};
pub use registry::{file_name, Registry, Stored};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("design does not answer {request}: {reason}")]
    VerificationFailed { request: Request, reason: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("target y = {y} is not admissible: y(alpha y + 1) = {residue} (mod gamma = {gamma})")]
    InadmissibleTarget { y: u64, gamma: u64, residue: u64 },
    #[error("no target: give y (or v), or fix q, n and x")]
    MissingTarget,
    #[error("v = {v} is not of the form alpha y + 1 with alpha = {alpha}")]
    BadV { v: u64, alpha: u64 },
    #[error("{}", no_parameters_message(.0))]
    NoParametersWithinLimits(Vec<Blocked>),
    #[error("stage '{stage}' failed: {message}")]
    StageFailed {
        stage: String,
        message: String,
        trace: Box<StageTrace>,
    },
}

fn no_parameters_message(blocked: &[Blocked]) -> String {
    match blocked.first() {
        None => "no parameters within limits: no candidate (r, q) exists below the limits".into(),
        Some(b) => format!(
            "no parameters within limits ({} candidates blocked); first: {b}",
            blocked.len()
        ),
    }
}

impl PipelineError {
    /// The first unresolved ingredient, if that is why planning failed.
    pub fn missing_request(&self) -> Option<&Request> {
        match self {
            PipelineError::NoParametersWithinLimits(blocked) => blocked.iter().find_map(|b| match &b.reason {
                BlockReason::Missing { request, .. } => Some(request),
                BlockReason::Inadmissible(_) => None,
            }),
            _ => None,
        }
    }
}

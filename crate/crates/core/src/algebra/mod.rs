//! Finite fields and the geometries and triple systems built from them.

mod field;
mod geometry;
mod sts;
mod transversal;

use thiserror::Error;

pub use field::{is_prime, prime_power, FiniteField, MAX_ORDER};
pub use geometry::{affine_space, projective_plane, AffineSpaceSpec, MAX_INCIDENCES};
pub use sts::steiner_triple_system;
pub use transversal::transversal_design;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1 (got {0})")]
    InvalidDegree(u32),
    #[error("field of order {p}^{m} exceeds the supported size")]
    TooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("geometry exceeds the incidence budget")]
    GeometryTooLarge,
    #[error("no field-based TD({k},{n}); supply it through the registry")]
    Unsupported { k: usize, n: usize },
    #[error("no Steiner triple system on {0} points (need v ≡ 1 or 3 mod 6)")]
    Inadmissible(usize),
}

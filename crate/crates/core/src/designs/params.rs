//! Divisibility conditions on the number of points of a PBD.

use std::collections::BTreeSet;

use serde::Serialize;

use super::DesignError;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The local and global moduli of a block-size set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignParams {
    /// gcd of `k - 1` over the block sizes.
    pub alpha: u64,
    /// gcd of `k (k - 1)` over the block sizes.
    pub beta: u64,
    /// `beta / alpha`.
    pub gamma: u64,
}

pub fn params(sizes: &BTreeSet<usize>) -> Result<DesignParams, DesignError> {
    if sizes.is_empty() {
        return Err(DesignError::EmptyK);
    }
    if let Some(&k) = sizes.iter().find(|&&k| k < 2) {
        return Err(DesignError::BlockSizeTooSmall(k));
    }
    let (alpha, beta) = sizes.iter().fold((0, 0), |(a, b), &k| {
        let k = k as u64;
        (gcd(a, k - 1), gcd(b, k * (k - 1)))
    });
    Ok(DesignParams {
        alpha,
        beta,
        gamma: beta / alpha,
    })
}

/// Outcome of the two necessary conditions for a PBD(v, K).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub params: DesignParams,
    /// `v - 1 ≡ 0 (mod alpha)`.
    pub local: bool,
    /// `v (v - 1) ≡ 0 (mod beta)`.
    pub global: bool,
}

impl Admissibility {
    pub fn holds(&self) -> bool {
        self.local && self.global
    }
}

pub fn admissibility(v: u64, sizes: &BTreeSet<usize>) -> Result<Admissibility, DesignError> {
    let p = params(sizes)?;
    let v1 = v.saturating_sub(1);
    Ok(Admissibility {
        params: p,
        local: v1.is_multiple_of(p.alpha),
        global: (v as u128 * v1 as u128).is_multiple_of(p.beta as u128),
    })
}

/// True iff `v` passes both the local and the global condition for `K`.
pub fn admissible(v: u64, sizes: &BTreeSet<usize>) -> Result<bool, DesignError> {
    Ok(admissibility(v, sizes)?.holds())
}

/// Single block size form: `r = (v-1)/(k-1)` is integral and
/// `r (r - 1) ≡ 0 (mod k)`.
pub fn admissible_by_replication(v: u64, k: u64) -> bool {
    assert!(k >= 2);
    let v1 = v.saturating_sub(1);
    if !v1.is_multiple_of(k - 1) {
        return false;
    }
    let r = (v1 / (k - 1)) as u128;
    (r * r.saturating_sub(1)).is_multiple_of(k as u128)
}

/// General form: `v = alpha y + 1` with `y (alpha y + 1) ≡ 0 (mod gamma)`.
pub fn admissible_by_y(v: u64, sizes: &BTreeSet<usize>) -> Result<bool, DesignError> {
    let p = params(sizes)?;
    let v1 = v.saturating_sub(1);
    if !v1.is_multiple_of(p.alpha) {
        return Ok(false);
    }
    let y = v1 / p.alpha;
    Ok(y_admissible(y, &p))
}

/// `y (alpha y + 1) ≡ 0 (mod gamma)`.
pub fn y_admissible(y: u64, p: &DesignParams) -> bool {
    (y as u128 * (p.alpha as u128 * y as u128 + 1)).is_multiple_of(p.gamma as u128)
}

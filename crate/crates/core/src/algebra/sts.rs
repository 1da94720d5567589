//! Steiner triple systems: Bose for `v ≡ 3 (mod 6)`, Skolem for `v ≡ 1 (mod 6)`.

use std::collections::BTreeSet;

use super::AlgebraError;
use crate::designs::{Blocks, PBDesign, Point};

/// A PBD(v, {3}).
pub fn steiner_triple_system(v: usize) -> Result<PBDesign, AlgebraError> {
    let blocks = match v % 6 {
        _ if v < 3 => return Err(AlgebraError::Inadmissible(v)),
        3 => bose(v / 3),
        1 => skolem((v - 1) / 6),
        _ => return Err(AlgebraError::Inadmissible(v)),
    };
    let design = PBDesign::new(v, Blocks::from_lists(blocks), Some(BTreeSet::from([3])))
        .expect("triple systems are well formed");
    Ok(design)
}

/// Points `(x, i)`, `x` in Z_m (m odd), `i` in Z_3, numbered `i m + x`.
/// Uses the idempotent commutative quasigroup `x o y = (x + y)(m + 1)/2`.
fn bose(m: usize) -> Vec<[Point; 3]> {
    let pt = |x: usize, i: usize| (i % 3 * m + x) as Point;
    let op = |x: usize, y: usize| (x + y) * (m + 1) / 2 % m;
    let mut out = Vec::with_capacity(m * (3 * m - 1) / 2);
    for x in 0..m {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Points `(x, i)`, `x` in Z_{2n}, `i` in Z_3, numbered `2 n i + x`, plus
/// infinity as `6n`. Uses the half-idempotent commutative quasigroup obtained
/// by relabeling `x + y (mod 2n)` with even `2j -> j`, odd `2j+1 -> n + j`.
fn skolem(n: usize) -> Vec<[Point; 3]> {
    let order = 2 * n;
    let inf = (3 * order) as Point;
    let pt = |x: usize, i: usize| (i % 3 * order + x) as Point;
    let op = |x: usize, y: usize| {
        let s = (x + y) % order;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            n + s / 2
        }
    };
    let mut out = Vec::with_capacity(n * (6 * n + 1));
    for x in 0..n {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            out.push([inf, pt(n + x, i), pt(x, i + 1)]);
        }
        for x in 0..order {
            for y in x + 1..order {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

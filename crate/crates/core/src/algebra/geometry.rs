//! Affine spaces and projective planes over finite fields.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{AlgebraError, FiniteField};
use crate::designs::{Blocks, PBDesign, Point};

/// Cap on point-block incidences of a generated geometry.
pub const MAX_INCIDENCES: u64 = 50_000_000;

/// Parameters of AG_d(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineSpaceSpec {
    pub q: u64,
    pub d: u32,
}

impl AffineSpaceSpec {
    pub fn new(q: u64, d: u32) -> Result<Self, AlgebraError> {
        if q < 2 || super::prime_power(q).is_none() {
            return Err(AlgebraError::NotPrimePower(q));
        }
        if d == 0 {
            return Err(AlgebraError::InvalidDegree(d));
        }
        let spec = AffineSpaceSpec { q, d };
        let fits = spec
            .try_line_count()
            .and_then(|l| l.checked_mul(q))
            .is_some_and(|inc| inc <= MAX_INCIDENCES);
        if !fits {
            return Err(AlgebraError::GeometryTooLarge);
        }
        Ok(spec)
    }

    pub fn point_count(&self) -> u64 {
        self.q.pow(self.d)
    }

    /// `q^{d-1} (q^d - 1) / (q - 1)`.
    pub fn line_count(&self) -> u64 {
        self.try_line_count().expect("checked at construction")
    }

    fn try_line_count(&self) -> Option<u64> {
        let qd = self.q.checked_pow(self.d)?;
        let directions = (qd - 1) / (self.q - 1);
        self.q.checked_pow(self.d - 1)?.checked_mul(directions)
    }
}

/// The lines of AG_d(q) as a PBD on `q^d` points.
///
/// A point `(x_0, ..., x_{d-1})` is numbered `sum x_i q^{d-1-i}` with field
/// elements in their integer encoding.
pub fn affine_space(q: u64, d: u32) -> Result<PBDesign, AlgebraError> {
    let spec = AffineSpaceSpec::new(q, d)?;
    let field = FiniteField::of_order(q)?;
    let q = q as usize;
    let d = d as usize;
    let v = spec.point_count() as usize;

    let decode = |mut p: usize| -> Vec<u32> {
        let mut c = vec![0u32; d];
        for slot in c.iter_mut().rev() {
            *slot = (p % q) as u32;
            p /= q;
        }
        c
    };
    let encode = |c: &[u32]| -> Point { c.iter().fold(0usize, |acc, &x| acc * q + x as usize) as Point };

    let mut blocks = Blocks::with_capacity(spec.line_count() as usize, spec.line_count() as usize * q);
    let mut seen = vec![false; v];
    let mut line = Vec::with_capacity(q);
    // Directions with first nonzero coordinate equal to 1.
    for dir_index in 1..v {
        let dir = decode(dir_index);
        if dir.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        for start in 0..v {
            if seen[start] {
                continue;
            }
            let base = decode(start);
            line.clear();
            for t in field.elements() {
                let pt: Vec<u32> = base
                    .iter()
                    .zip(&dir)
                    .map(|(&b, &u)| field.add(b, field.mul(t, u)))
                    .collect();
                let id = encode(&pt);
                seen[id as usize] = true;
                line.push(id);
            }
            blocks.push(&line);
        }
    }
    blocks.canonicalize();
    let design = PBDesign::new(v, blocks, Some(BTreeSet::from([q])))
        .expect("affine lines are well formed");
    Ok(design)
}

/// Index of a normalized homogeneous triple: `(0,0,1)` first, then
/// `(0,1,c)`, then `(1,b,c)`, each in increasing encoding order.
fn projective_index(q: usize, t: [u32; 3]) -> Point {
    let idx = match t {
        [0, 0, _] => 0,
        [0, _, c] => 1 + c as usize,
        [_, b, c] => 1 + q + b as usize * q + c as usize,
    };
    idx as Point
}

fn normalize(field: &FiniteField, t: [u32; 3]) -> [u32; 3] {
    let lead = *t.iter().find(|&&c| c != 0).expect("nonzero vector");
    let inv = field.inv(lead).expect("lead is nonzero");
    t.map(|c| field.mul(c, inv))
}

/// PG_2(q) as a PBD on `q^2 + q + 1` points with lines of size `q + 1`.
pub fn projective_plane(q: u64) -> Result<PBDesign, AlgebraError> {
    let field = FiniteField::of_order(q)?;
    let n = q * q + q + 1;
    if n * (q + 1) > MAX_INCIDENCES {
        return Err(AlgebraError::GeometryTooLarge);
    }
    let qs = q as usize;
    let n = n as usize;

    let mut triples = Vec::with_capacity(n);
    triples.push([0, 0, 1]);
    triples.extend((0..q as u32).map(|c| [0, 1, c]));
    for b in 0..q as u32 {
        triples.extend((0..q as u32).map(|c| [1, b, c]));
    }
    debug_assert_eq!(triples.len(), n);

    let mut blocks = Blocks::with_capacity(n, n * (qs + 1));
    let mut line = Vec::with_capacity(qs + 1);
    for l in &triples {
        // Basis of the plane l . x = 0, pivoting on the leading coordinate.
        let pivot = l.iter().position(|&c| c != 0).unwrap();
        let others: Vec<usize> = (0..3).filter(|&j| j != pivot).collect();
        let basis: Vec<[u32; 3]> = others
            .iter()
            .map(|&j| {
                let mut e = [0u32; 3];
                e[j] = 1;
                e[pivot] = field.neg(field.div(l[j], l[pivot]).unwrap());
                e
            })
            .collect();
        let (u, w) = (basis[0], basis[1]);
        line.clear();
        for t in field.elements() {
            let pt = [0, 1, 2].map(|i| field.add(u[i], field.mul(t, w[i])));
            line.push(projective_index(qs, normalize(&field, pt)));
        }
        line.push(projective_index(qs, normalize(&field, w)));
        blocks.push(&line);
    }
    blocks.canonicalize();
    let design = PBDesign::new(n, blocks, Some(BTreeSet::from([qs + 1])))
        .expect("projective lines are well formed");
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::verify_pbd;

    /// Independent oracle: brute-force collinearity in F_q^2 for prime q.
    fn affine_plane_lines_brute(q: u32) -> BTreeSet<Vec<Point>> {
        let mut lines = BTreeSet::new();
        let pts: Vec<(u32, u32)> = (0..q).flat_map(|a| (0..q).map(move |b| (a, b))).collect();
        for (i, &p) in pts.iter().enumerate() {
            for &r in &pts[i + 1..] {
                let mut line: Vec<Point> = pts
                    .iter()
                    .filter(|&&s| {
                        // (r - p) x (s - p) == 0 mod q
                        let (ux, uy) = ((r.0 + q - p.0) % q, (r.1 + q - p.1) % q);
                        let (wx, wy) = ((s.0 + q - p.0) % q, (s.1 + q - p.1) % q);
                        (ux * wy + q * q - uy * wx).is_multiple_of(q)
                    })
                    .map(|&(a, b)| a * q + b)
                    .collect();
                line.sort_unstable();
                lines.insert(line);
            }
        }
        lines
    }

    #[test]
    fn ag_3_2_matches_brute_force() {
        let d = affine_space(3, 2).unwrap();
        assert_eq!(d.v(), 9);
        assert_eq!(d.blocks().len(), 12);
        let got: BTreeSet<Vec<Point>> = d.blocks().to_vecs().into_iter().collect();
        assert_eq!(got, affine_plane_lines_brute(3));
        assert!(verify_pbd(&d).valid);
    }

    #[test]
    fn ag_small_cases() {
        let line = affine_space(5, 1).unwrap();
        assert_eq!(line.blocks().to_vecs(), vec![vec![0, 1, 2, 3, 4]]);
        let k4 = affine_space(2, 2).unwrap();
        assert_eq!(
            k4.blocks().to_vecs(),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn ag_counts_and_validity() {
        for (q, d) in [(2, 3), (3, 3), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2), (9, 2), (2, 5)] {
            let spec = AffineSpaceSpec::new(q, d).unwrap();
            let design = affine_space(q, d).unwrap();
            assert_eq!(design.v() as u64, spec.point_count());
            assert_eq!(design.blocks().len() as u64, spec.line_count(), "AG_{d}({q})");
            assert!(design.blocks().iter().all(|b| b.len() == q as usize));
            assert!(verify_pbd(&design).valid, "AG_{d}({q})");
        }
    }

    #[test]
    fn ag_errors() {
        assert_eq!(affine_space(6, 2), Err(AlgebraError::NotPrimePower(6)));
        assert_eq!(affine_space(1, 2), Err(AlgebraError::NotPrimePower(1)));
        assert_eq!(affine_space(3, 0), Err(AlgebraError::InvalidDegree(0)));
        assert_eq!(affine_space(3, 20), Err(AlgebraError::GeometryTooLarge));
    }

    /// Independent oracle: homogeneous coordinates over Z_p with a direct
    /// dot-product incidence test.
    fn plane_brute(p: u32) -> BTreeSet<Vec<Point>> {
        let norm: Vec<[u32; 3]> = (0..p * p * p)
            .map(|n| [n / (p * p), (n / p) % p, n % p])
            .filter(|t| t.iter().find(|&&c| c != 0) == Some(&1))
            .collect();
        norm.iter()
            .map(|l| {
                (0..norm.len() as Point)
                    .filter(|&i| {
                        let x = norm[i as usize];
                        (l[0] * x[0] + l[1] * x[1] + l[2] * x[2]).is_multiple_of(p)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn projective_planes() {
        for (q, n) in [(2u64, 7usize), (3, 13), (4, 21), (5, 31), (7, 57), (8, 73), (9, 91)] {
            let d = projective_plane(q).unwrap();
            assert_eq!(d.v(), n);
            assert_eq!(d.blocks().len(), n);
            assert!(d.blocks().iter().all(|b| b.len() == q as usize + 1));
            assert!(d.replication().iter().all(|&r| r == q as usize + 1));
            assert!(verify_pbd(&d).valid, "PG(2,{q})");
        }
        // For prime q the lexicographic triple order is exactly our numbering.
        for p in [2u32, 3, 5] {
            let got: BTreeSet<Vec<Point>> =
                projective_plane(p as u64).unwrap().blocks().to_vecs().into_iter().collect();
            assert_eq!(got, plane_brute(p));
        }
    }
}

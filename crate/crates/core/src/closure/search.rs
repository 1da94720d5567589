//! Dimension and strong dimension by closure search.
//!
//! Subsets are enumerated in colexicographic order and evaluated in chunks;
//! within a chunk the work may run on several threads, but the reported
//! witness is always the first spanning subset in enumeration order, so
//! certificates do not depend on scheduling.

use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::span::SpanIndex;
use crate::designs::{GroupDesign, PBDesign, Point, VerificationReport};

/// Default cap on subset closures per exhaustive level.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Default number of random subsets drawn in sample mode.
pub const DEFAULT_SAMPLES: u64 = 10_000;

const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// The dimension is exactly `d`.
    Exact,
    /// "Dimension at least `d`" is proven.
    Certified,
    /// "Dimension at least `d`" is false; the witness spans everything.
    Refuted,
    /// Nothing proven beyond `d` (exhaustive search hit its budget, or
    /// sampling found no spanning subset).
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    /// Two points of a verified PBD span exactly their block.
    PairSpan,
    Sampled,
    /// No subsets examined: `C(v, d)` exceeds the budget.
    OverBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionCertificate {
    pub kind: CertificateKind,
    /// For `Exact`: the dimension. For `dimension_at_least`: the claimed
    /// bound. For an inconclusive exhaustive search: the bound proven so far.
    pub d: usize,
    /// A spanning subset: of size `d + 1` for `Exact`, `d` for `Refuted`.
    pub witness: Option<Vec<Point>>,
    pub subsets_checked: u64,
    pub method: Method,
    /// Closures used the strong (group-completing) rule.
    pub strong: bool,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl DimensionCertificate {
    fn new(kind: CertificateKind, d: usize, method: Method, strong: bool) -> Self {
        DimensionCertificate {
            kind,
            d,
            witness: None,
            subsets_checked: 0,
            method,
            strong,
            samples: None,
            seed: None,
        }
    }

    /// Re-closes the witness and checks that it generates every point.
    pub fn witness_holds(&self, index: &SpanIndex<'_>) -> bool {
        match &self.witness {
            Some(w) => {
                let mut scratch = index.scratch();
                index.spans_all(&mut scratch, w)
            }
            None => true,
        }
    }
}

impl fmt::Display for DimensionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.strong { "strong dimension" } else { "dimension" };
        match self.kind {
            CertificateKind::Exact => write!(f, "exact: {what} = {}", self.d)?,
            CertificateKind::Certified => write!(f, "certified: {what} >= {}", self.d)?,
            CertificateKind::Refuted => write!(f, "refuted: {what} < {}", self.d)?,
            CertificateKind::Inconclusive => match self.method {
                Method::Sampled => write!(f, "inconclusive: {what} >= {} not refuted by sampling", self.d)?,
                Method::OverBudget => write!(f, "inconclusive: {what} >= {} not checked, too many subsets for the budget", self.d)?,
                _ => write!(f, "inconclusive: {what} >= {} proven, budget exhausted", self.d)?,
            },
        }
        if let Some(w) = &self.witness {
            let pts: Vec<String> = w.iter().map(Point::to_string).collect();
            write!(f, "; witness {{{}}} spans everything", pts.join(","))?;
        }
        write!(f, "; {} subsets checked", self.subsets_checked)?;
        if let (Some(n), Some(s)) = (self.samples, self.seed) {
            write!(f, " ({n} samples, seed {s})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive { budget: u64 },
    Sample { samples: u64, seed: u64 },
}

impl Default for SearchMode {
    fn default() -> Self {
        SearchMode::Exhaustive {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `k`-subsets of `0..n` in colexicographic order.
pub struct Colex {
    n: usize,
    current: Vec<Point>,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Colex {
            n,
            current: (0..k as Point).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Colex {
    type Item = Vec<Point>;

    fn next(&mut self) -> Option<Vec<Point>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k {
                self.current[i + 1]
            } else {
                self.n as Point
            };
            if self.current[i] + 1 < limit {
                self.current[i] += 1;
                for j in 0..i {
                    self.current[j] = j as Point;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Position of the first subset that spans everything, plus the number of
/// subsets examined up to and including it.
fn first_spanning<I>(index: &SpanIndex<'_>, subsets: I) -> (Option<Vec<Point>>, u64)
where
    I: Iterator<Item = Vec<Point>>,
{
    let mut subsets = subsets.peekable();
    let mut checked = 0u64;
    // chunks grow so an early witness on a large design stays cheap
    let mut size = 16;
    while subsets.peek().is_some() {
        let chunk: Vec<Vec<Point>> = subsets.by_ref().take(size).collect();
        size = (size * 2).min(CHUNK);
        let hit = chunk
            .par_iter()
            .enumerate()
            .map_init(|| index.scratch(), |scratch, (i, s)| index.spans_all(scratch, s).then_some(i))
            .flatten()
            .min();
        match hit {
            Some(i) => {
                checked += i as u64 + 1;
                return (Some(chunk[i].clone()), checked);
            }
            None => checked += chunk.len() as u64,
        }
    }
    (None, checked)
}

fn exact_search(index: &SpanIndex<'_>, budget: u64, strong: bool) -> DimensionCertificate {
    let v = index.v();
    let mut checked = 0;
    for d in 1..=v {
        if binomial(v as u64, d as u64) > budget {
            let mut cert = DimensionCertificate::new(CertificateKind::Inconclusive, d - 1, Method::Exhaustive, strong);
            cert.subsets_checked = checked;
            return cert;
        }
        let (witness, n) = first_spanning(index, Colex::new(v, d));
        checked += n;
        if let Some(w) = witness {
            let mut cert = DimensionCertificate::new(CertificateKind::Exact, d - 1, Method::Exhaustive, strong);
            cert.witness = Some(w);
            cert.subsets_checked = checked;
            return cert;
        }
    }
    // Only reachable for v = 0.
    DimensionCertificate::new(CertificateKind::Exact, 0, Method::Exhaustive, strong)
}

fn at_least_search(index: &SpanIndex<'_>, d: usize, mode: SearchMode, strong: bool) -> DimensionCertificate {
    let v = index.v();
    if d > v {
        // Any v points are the whole space.
        let mut cert = DimensionCertificate::new(CertificateKind::Refuted, d, Method::Exhaustive, strong);
        cert.witness = Some((0..v as Point).collect());
        return cert;
    }
    match mode {
        SearchMode::Exhaustive { budget } => {
            if binomial(v as u64, d as u64) > budget {
                return DimensionCertificate::new(CertificateKind::Inconclusive, d, Method::OverBudget, strong);
            }
            let (witness, checked) = first_spanning(index, Colex::new(v, d));
            let kind = if witness.is_some() {
                CertificateKind::Refuted
            } else {
                CertificateKind::Certified
            };
            let mut cert = DimensionCertificate::new(kind, d, Method::Exhaustive, strong);
            cert.witness = witness;
            cert.subsets_checked = checked;
            cert
        }
        SearchMode::Sample { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = (0..samples).map(move |_| {
                let mut s: Vec<Point> = index::sample(&mut rng, v, d)
                    .into_iter()
                    .map(|p| p as Point)
                    .collect();
                s.sort_unstable();
                s
            });
            let (witness, checked) = first_spanning(index, draws);
            let kind = if witness.is_some() {
                CertificateKind::Refuted
            } else {
                CertificateKind::Inconclusive
            };
            let mut cert = DimensionCertificate::new(kind, d, Method::Sampled, strong);
            cert.witness = witness;
            cert.subsets_checked = checked;
            cert.samples = Some(samples);
            cert.seed = Some(seed);
            cert
        }
    }
}

/// Exact dimension of a PBD, or the bound reached within `budget`.
pub fn dimension(design: &PBDesign, budget: u64) -> DimensionCertificate {
    exact_search(&SpanIndex::pbd(design), budget, false)
}

/// Proves or refutes "dimension >= d" (sampling can only refute).
pub fn dimension_at_least(design: &PBDesign, d: usize, mode: SearchMode) -> DimensionCertificate {
    at_least_search(&SpanIndex::pbd(design), d, mode, false)
}

/// Strong dimension of a GDD, or the bound reached within `budget`.
pub fn strong_dimension(design: &GroupDesign, budget: u64) -> DimensionCertificate {
    exact_search(&SpanIndex::strong(design), budget, true)
}

pub fn strong_dimension_at_least(design: &GroupDesign, d: usize, mode: SearchMode) -> DimensionCertificate {
    at_least_search(&SpanIndex::strong(design), d, mode, true)
}

/// "Dimension >= 2" for a PBD that has just verified: two points span
/// exactly their block, which is proper unless it holds every point.
/// Returns `None` when `report` is not a valid verification of `design`.
pub fn pair_span_certificate(design: &PBDesign, report: &VerificationReport) -> Option<DimensionCertificate> {
    if !report.valid || report.blocks_checked != design.blocks().len() {
        return None;
    }
    let v = design.v();
    let full = design.blocks().iter().position(|b| b.len() == v);
    let mut cert = match (v, full) {
        (0 | 1, _) => {
            let mut c = DimensionCertificate::new(CertificateKind::Refuted, 2, Method::PairSpan, false);
            c.witness = Some((0..v as Point).collect());
            c
        }
        (_, Some(i)) => {
            let b = design.blocks().get(i);
            let mut c = DimensionCertificate::new(CertificateKind::Refuted, 2, Method::PairSpan, false);
            c.witness = Some(vec![b[0], b[1]]);
            c
        }
        (_, None) => DimensionCertificate::new(CertificateKind::Certified, 2, Method::PairSpan, false),
    };
    cert.subsets_checked = design.blocks().len() as u64;
    Some(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{affine_space, projective_plane, transversal_design};
    use crate::designs::{pbd_as_gdd, verify_pbd};

    #[test]
    fn colex_order() {
        let all: Vec<Vec<Point>> = Colex::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Colex::new(5, 3).count(), 10);
        assert_eq!(Colex::new(3, 0).count(), 1);
        assert_eq!(Colex::new(2, 3).count(), 0);
        assert_eq!(binomial(27, 3), 2925);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn fano_dimension_two() {
        let fano = projective_plane(2).unwrap();
        let c = dimension(&fano, DEFAULT_BUDGET);
        assert_eq!(c.kind, CertificateKind::Exact);
        assert_eq!(c.d, 2);
        assert_eq!(c.witness.as_ref().unwrap().len(), 3);
        assert!(c.witness_holds(&SpanIndex::pbd(&fano)));
        let g = pbd_as_gdd(&fano);
        let s = strong_dimension(&g, DEFAULT_BUDGET);
        assert_eq!((s.kind, s.d), (CertificateKind::Exact, 2));
    }

    #[test]
    fn ag_3_3_is_three_dimensional() {
        let ag = affine_space(3, 3).unwrap();
        let c = dimension_at_least(&ag, 3, SearchMode::default());
        assert_eq!(c.kind, CertificateKind::Certified);
        assert_eq!(c.subsets_checked, 2925);
        let r = dimension_at_least(&ag, 4, SearchMode::default());
        assert_eq!(r.kind, CertificateKind::Refuted);
        assert_eq!(r.witness.as_ref().unwrap().len(), 4);
        assert!(r.witness_holds(&SpanIndex::pbd(&ag)));
        assert_eq!(dimension(&ag, DEFAULT_BUDGET).d, 3);
    }

    #[test]
    fn binary_affine_spaces_have_every_proper_subset_closed() {
        // Lines of AG_d(2) have two points, so nothing is ever added.
        for d in 2..=3 {
            let ag = affine_space(2, d).unwrap();
            let c = dimension(&ag, DEFAULT_BUDGET);
            assert_eq!(c.d, (1 << d) - 1);
        }
    }

    #[test]
    fn single_block_has_dimension_one() {
        let d = PBDesign::single_block(6);
        let c = dimension(&d, DEFAULT_BUDGET);
        assert_eq!((c.kind, c.d), (CertificateKind::Exact, 1));
    }

    #[test]
    fn sampling_cannot_certify() {
        let fano = projective_plane(2).unwrap();
        let c = dimension_at_least(&fano, 2, SearchMode::Sample { samples: 100, seed: 1 });
        assert_eq!(c.kind, CertificateKind::Inconclusive);
        assert!(c.witness.is_none());
        assert_eq!(c.subsets_checked, 100);
        let r = dimension_at_least(&fano, 3, SearchMode::Sample { samples: 100, seed: 1 });
        assert_eq!(r.kind, CertificateKind::Refuted);
    }

    #[test]
    fn td_strong_dimension_one() {
        for n in [3, 4, 5] {
            let td = transversal_design(3, n).unwrap();
            let c = strong_dimension(&td, DEFAULT_BUDGET);
            assert_eq!((c.kind, c.d), (CertificateKind::Exact, 1));
        }
    }

    #[test]
    fn budget_frontier() {
        let ag = affine_space(3, 3).unwrap();
        let c = dimension(&ag, 1000);
        assert_eq!(c.kind, CertificateKind::Inconclusive);
        assert_eq!(c.d, 2);
        assert_eq!(c.subsets_checked, 27 + 351);
        let c = dimension_at_least(&ag, 3, SearchMode::Exhaustive { budget: 1000 });
        assert_eq!((c.kind, c.method, c.subsets_checked), (CertificateKind::Inconclusive, Method::OverBudget, 0));
        assert!(c.to_string().starts_with("inconclusive: dimension >= 3 not checked"));
    }

    #[test]
    fn pair_span_shortcut() {
        let ag = affine_space(3, 2).unwrap();
        let c = pair_span_certificate(&ag, &verify_pbd(&ag)).unwrap();
        assert_eq!(c.kind, CertificateKind::Certified);
        let line = PBDesign::single_block(4);
        let c = pair_span_certificate(&line, &verify_pbd(&line)).unwrap();
        assert_eq!(c.kind, CertificateKind::Refuted);
        let bad = PBDesign::from_blocks(3, [[0u32, 1]]).unwrap();
        assert!(pair_span_certificate(&bad, &verify_pbd(&bad)).is_none());
    }
}

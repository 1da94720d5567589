//! Exact checks of the design axioms.
//!
//! Every pair of points is visited once in lexicographic order together with
//! the number of blocks covering it. Up to [`TRIANGULAR_LIMIT`] points the
//! counts come from a triangular array; above that a row-by-row sweep over
//! the incidence lists keeps memory linear in the design size. Both routes
//! produce the same visit order and therefore identical reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::blocks::{Blocks, Incidence, Point};
use super::{GroupDesign, PBDesign};

/// Largest `v` checked with the dense triangular pair counter.
pub const TRIANGULAR_LIMIT: usize = 20_000;

/// Witnesses kept per violation kind; totals stay exact.
pub const WITNESS_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UncoveredPair,
    DoublyCoveredPair,
    UndersizedBlock,
    GroupBlockClash,
    InGroupPairCovered,
    SizeNotDeclared,
    /// A point outside every group.
    NotPartitioned,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::UncoveredPair => "uncovered_pair",
            ViolationKind::DoublyCoveredPair => "doubly_covered_pair",
            ViolationKind::UndersizedBlock => "undersized_block",
            ViolationKind::GroupBlockClash => "group_block_clash",
            ViolationKind::InGroupPairCovered => "in_group_pair_covered",
            ViolationKind::SizeNotDeclared => "size_not_declared",
            ViolationKind::NotPartitioned => "not_partitioned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Pair(Point, Point),
    /// A pair together with the number of blocks covering it.
    CoveredPair(Point, Point, usize),
    Block(usize),
    BlockGroup { block: usize, group: usize },
    Point(Point),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair(a, b) => write!(f, "pair ({a},{b})"),
            Witness::CoveredPair(a, b, n) => write!(f, "pair ({a},{b}) in {n} blocks"),
            Witness::Block(i) => write!(f, "block #{i}"),
            Witness::BlockGroup { block, group } => write!(f, "block #{block} vs group #{group}"),
            Witness::Point(p) => write!(f, "point {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    /// Witnesses, at most [`WITNESS_CAP`] per kind, in canonical order.
    pub violations: Vec<Violation>,
    /// Exact violation count per kind.
    pub totals: BTreeMap<ViolationKind, usize>,
    /// Pairs whose coverage was checked: all pairs for a PBD, cross-group
    /// pairs for a GDD.
    pub pairs_checked: usize,
    pub blocks_checked: usize,
}

impl VerificationReport {
    pub fn total(&self, kind: ViolationKind) -> usize {
        self.totals.get(&kind).copied().unwrap_or(0)
    }

    pub fn witnesses(&self, kind: ViolationKind) -> impl Iterator<Item = &Witness> {
        self.violations
            .iter()
            .filter(move |v| v.kind == kind)
            .map(|v| &v.witness)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        if self.valid {
            return format!(
                "valid: {} blocks, {} pairs, each covered once",
                self.blocks_checked, self.pairs_checked
            );
        }
        let parts: Vec<String> = self
            .totals
            .iter()
            .map(|(k, n)| format!("{} {}", n, k.name()))
            .collect();
        format!("invalid: {}", parts.join(", "))
    }
}

#[derive(Default)]
struct Collector {
    violations: BTreeMap<ViolationKind, Vec<Witness>>,
    totals: BTreeMap<ViolationKind, usize>,
}

impl Collector {
    fn add(&mut self, kind: ViolationKind, witness: Witness) {
        *self.totals.entry(kind).or_default() += 1;
        let list = self.violations.entry(kind).or_default();
        if list.len() < WITNESS_CAP {
            list.push(witness);
        }
    }

    fn finish(self, pairs_checked: usize, blocks_checked: usize) -> VerificationReport {
        let violations = self
            .violations
            .into_iter()
            .flat_map(|(kind, ws)| ws.into_iter().map(move |witness| Violation { kind, witness }))
            .collect::<Vec<_>>();
        VerificationReport {
            valid: violations.is_empty(),
            violations,
            totals: self.totals,
            pairs_checked,
            blocks_checked,
        }
    }
}

/// Calls `visit(a, b, count)` for every pair `a < b` in lexicographic order.
fn for_each_pair(v: usize, blocks: &Blocks, visit: impl FnMut(Point, Point, usize)) {
    pair_counts(v, blocks, v <= TRIANGULAR_LIMIT, visit)
}

fn pair_counts(v: usize, blocks: &Blocks, dense: bool, mut visit: impl FnMut(Point, Point, usize)) {
    if dense {
        let row_start = |a: usize| a * (2 * v - a - 1) / 2;
        let mut counts = vec![0u8; v * v.saturating_sub(1) / 2];
        for b in blocks.iter() {
            for (i, &x) in b.iter().enumerate() {
                let (x, start) = (x as usize, row_start(x as usize));
                for &y in &b[i + 1..] {
                    let c = &mut counts[start + y as usize - x - 1];
                    *c = c.saturating_add(1);
                }
            }
        }
        let mut idx = 0;
        for a in 0..v {
            for b in a + 1..v {
                visit(a as Point, b as Point, counts[idx] as usize);
                idx += 1;
            }
        }
    } else {
        let inc = Incidence::new(v, blocks);
        let mut counts = vec![0usize; v];
        for a in 0..v {
            for &bi in inc.of(a as Point) {
                for &y in blocks.get(bi as usize) {
                    if y as usize > a {
                        counts[y as usize] += 1;
                    }
                }
            }
            for (b, c) in counts.iter_mut().enumerate().skip(a + 1) {
                visit(a as Point, b as Point, *c);
                *c = 0;
            }
        }
    }
}

fn check_sizes(blocks: &Blocks, declared: Option<&BTreeSet<usize>>, out: &mut Collector) {
    for (i, b) in blocks.iter().enumerate() {
        if b.len() < 2 {
            out.add(ViolationKind::UndersizedBlock, Witness::Block(i));
        }
        if let Some(k) = declared {
            if !k.contains(&b.len()) {
                out.add(ViolationKind::SizeNotDeclared, Witness::Block(i));
            }
        }
    }
}

/// Checks that every pair of distinct points lies in exactly one block.
pub fn verify_pbd(design: &PBDesign) -> VerificationReport {
    let v = design.v();
    let mut out = Collector::default();
    check_sizes(design.blocks(), design.declared_sizes(), &mut out);
    let mut pairs = 0;
    for_each_pair(v, design.blocks(), |a, b, c| {
        pairs += 1;
        match c {
            1 => {}
            0 => out.add(ViolationKind::UncoveredPair, Witness::Pair(a, b)),
            n => out.add(ViolationKind::DoublyCoveredPair, Witness::CoveredPair(a, b, n)),
        }
    });
    out.finish(pairs, design.blocks().len())
}

/// Checks the group partition, block/group intersections and exact coverage
/// of cross-group pairs.
pub fn verify_gdd(design: &GroupDesign) -> VerificationReport {
    let v = design.v();
    let mut out = Collector::default();
    for p in 0..v as Point {
        if design.group_of(p).is_none() {
            out.add(ViolationKind::NotPartitioned, Witness::Point(p));
        }
    }
    check_sizes(design.blocks(), design.declared_sizes(), &mut out);
    for (i, b) in design.blocks().iter().enumerate() {
        let mut seen: Vec<usize> = b.iter().filter_map(|&p| design.group_of(p)).collect();
        seen.sort_unstable();
        let mut clashes: Vec<usize> = seen.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
        clashes.dedup();
        for group in clashes {
            out.add(ViolationKind::GroupBlockClash, Witness::BlockGroup { block: i, group });
        }
    }
    let mut pairs = 0;
    for_each_pair(v, design.blocks(), |a, b, c| {
        let same = match (design.group_of(a), design.group_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        };
        if same {
            if c > 0 {
                out.add(ViolationKind::InGroupPairCovered, Witness::CoveredPair(a, b, c));
            }
            return;
        }
        pairs += 1;
        match c {
            1 => {}
            0 => out.add(ViolationKind::UncoveredPair, Witness::Pair(a, b)),
            n => out.add(ViolationKind::DoublyCoveredPair, Witness::CoveredPair(a, b, n)),
        }
    });
    out.finish(pairs, design.blocks().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::Blocks;

    fn fano() -> PBDesign {
        PBDesign::from_blocks(
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
        .unwrap()
    }

    #[test]
    fn fano_is_valid() {
        let r = verify_pbd(&fano());
        assert!(r.valid, "{:?}", r);
        assert_eq!(r.pairs_checked, 21);
        assert_eq!(r.blocks_checked, 7);
    }

    #[test]
    fn missing_pairs() {
        let d = PBDesign::from_blocks(3, [[0u32, 1]]).unwrap();
        let r = verify_pbd(&d);
        assert!(!r.valid);
        let w: Vec<_> = r.witnesses(ViolationKind::UncoveredPair).cloned().collect();
        assert_eq!(w, vec![Witness::Pair(0, 2), Witness::Pair(1, 2)]);
    }

    #[test]
    fn duplicated_block() {
        let mut blocks = fano().blocks().to_vecs();
        blocks.push(vec![0, 1, 2]);
        let d = PBDesign::from_blocks(7, blocks).unwrap();
        let r = verify_pbd(&d);
        assert_eq!(r.total(ViolationKind::DoublyCoveredPair), 3);
        assert_eq!(
            r.witnesses(ViolationKind::DoublyCoveredPair).next(),
            Some(&Witness::CoveredPair(0, 1, 2))
        );
    }

    #[test]
    fn undersized_and_undeclared() {
        let d = PBDesign::new(
            2,
            Blocks::from_lists([vec![0u32, 1], vec![0]]),
            Some(BTreeSet::from([3])),
        )
        .unwrap();
        let r = verify_pbd(&d);
        assert_eq!(r.total(ViolationKind::UndersizedBlock), 1);
        assert_eq!(r.total(ViolationKind::SizeNotDeclared), 2);
    }

    #[test]
    fn witness_cap_keeps_exact_totals() {
        let d = PBDesign::from_blocks(40, Vec::<Vec<Point>>::new()).unwrap();
        let r = verify_pbd(&d);
        assert_eq!(r.total(ViolationKind::UncoveredPair), 780);
        assert_eq!(r.witnesses(ViolationKind::UncoveredPair).count(), WITNESS_CAP);
    }

    #[test]
    fn gdd_checks() {
        // TD(3,2): groups {0,1},{2,3},{4,5}
        let groups = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let good = [[0u32, 2, 4], [0, 3, 5], [1, 2, 5], [1, 3, 4]];
        let g = GroupDesign::new(6, groups.clone(), Blocks::from_lists(good), None).unwrap();
        let r = verify_gdd(&g);
        assert!(r.valid, "{:?}", r);
        assert_eq!(r.pairs_checked, 12);

        let bad = [[0u32, 1, 4], [0, 3, 5], [1, 2, 5], [1, 3, 4]];
        let g = GroupDesign::new(6, groups, Blocks::from_lists(bad), None).unwrap();
        let r = verify_gdd(&g);
        assert_eq!(
            r.witnesses(ViolationKind::GroupBlockClash).next(),
            Some(&Witness::BlockGroup { block: 0, group: 0 })
        );
        assert_eq!(r.total(ViolationKind::InGroupPairCovered), 1);

        let partial = GroupDesign::new(3, vec![vec![0], vec![1]], Blocks::from_lists([[0u32, 1]]), None).unwrap();
        assert_eq!(verify_gdd(&partial).total(ViolationKind::NotPartitioned), 1);
    }

    #[test]
    fn sweep_matches_triangular_counter() {
        let mut blocks = fano().blocks().to_vecs();
        blocks.push(vec![0, 1, 2]);
        blocks.push(vec![5, 8]);
        let blocks = Blocks::from_lists(blocks);
        let mut dense = Vec::new();
        pair_counts(9, &blocks, true, |a, b, c| dense.push((a, b, c)));
        let mut sweep = Vec::new();
        pair_counts(9, &blocks, false, |a, b, c| sweep.push((a, b, c)));
        assert_eq!(dense.len(), 36);
        assert_eq!(dense, sweep);
        assert!(dense.contains(&(0, 1, 2)) && dense.contains(&(5, 8, 1)) && dense.contains(&(7, 8, 0)));
    }
}

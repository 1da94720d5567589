use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::blocks::{Blocks, Incidence, Point};
use super::pbd::{check_lists, PBDesign};
use super::DesignError;

/// Marker in the point-to-group table for points outside every group.
const NO_GROUP: u32 = u32::MAX;

/// Multiset of group sizes, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType(Vec<usize>);

impl GroupType {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable();
        GroupType(sizes)
    }

    /// `count` groups of size `size`.
    pub fn uniform(size: usize, count: usize) -> Self {
        GroupType(vec![size; count])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn group_count(&self) -> usize {
        self.0.len()
    }

    /// Exponential notation as `(size, multiplicity)`, largest size first.
    pub fn exponents(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &s in self.0.iter().rev() {
            match out.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    /// Parses `4^9`, `13^168 5^1` or a plain list such as `2,2,2`.
    pub fn parse(text: &str) -> Option<Self> {
        let mut sizes = Vec::new();
        for part in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if part.is_empty() {
                continue;
            }
            match part.split_once('^') {
                Some((s, c)) => {
                    let s: usize = s.parse().ok()?;
                    let c: usize = c.parse().ok()?;
                    sizes.extend(std::iter::repeat_n(s, c));
                }
                None => sizes.push(part.parse().ok()?),
            }
        }
        Some(GroupType::new(sizes))
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(s, c)| format!("{s}^{c}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GroupType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A group divisible design on points `0..v`.
///
/// Groups are stored sorted, ordered by their smallest point. Construction
/// rejects empty or overlapping groups; points left out of every group and
/// all block-level defects are reported by the verifier instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupDesign {
    v: usize,
    groups: Vec<Vec<Point>>,
    blocks: Blocks,
    declared_sizes: Option<BTreeSet<usize>>,
    #[serde(skip)]
    group_of: Vec<u32>,
}

impl GroupDesign {
    pub fn new(
        v: usize,
        mut groups: Vec<Vec<Point>>,
        mut blocks: Blocks,
        declared_sizes: Option<BTreeSet<usize>>,
    ) -> Result<Self, DesignError> {
        blocks.canonicalize();
        check_lists(v, blocks.iter(), "block")?;
        for g in groups.iter_mut() {
            g.sort_unstable();
        }
        check_lists(v, groups.iter().map(Vec::as_slice), "group")?;
        if groups.iter().any(Vec::is_empty) {
            return Err(DesignError::EmptyGroup);
        }
        groups.sort_unstable_by_key(|g| g[0]);
        let mut group_of = vec![NO_GROUP; v];
        for (gi, g) in groups.iter().enumerate() {
            for &p in g {
                if group_of[p as usize] != NO_GROUP {
                    return Err(DesignError::OverlappingGroups { point: p });
                }
                group_of[p as usize] = gi as u32;
            }
        }
        Ok(GroupDesign {
            v,
            groups,
            blocks,
            declared_sizes,
            group_of,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        &self.groups
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn declared_sizes(&self) -> Option<&BTreeSet<usize>> {
        self.declared_sizes.as_ref()
    }

    pub fn with_declared_sizes(mut self, sizes: Option<BTreeSet<usize>>) -> Self {
        self.declared_sizes = sizes;
        self
    }

    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(<[Point]>::len).collect()
    }

    pub fn sizes(&self) -> BTreeSet<usize> {
        self.declared_sizes
            .clone()
            .unwrap_or_else(|| self.block_sizes())
    }

    /// Index of the group holding `p`, if any.
    pub fn group_of(&self, p: Point) -> Option<usize> {
        match self.group_of.get(p as usize) {
            Some(&g) if g != NO_GROUP => Some(g as usize),
            _ => None,
        }
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::new(self.groups.iter().map(Vec::len).collect())
    }

    pub fn incidence(&self) -> Incidence {
        Incidence::new(self.v, &self.blocks)
    }

    /// Reads a PBD as a GDD whose groups are singletons.
    pub fn from_pbd(design: &PBDesign) -> Self {
        let groups = (0..design.v() as Point).map(|p| vec![p]).collect();
        GroupDesign::new(
            design.v(),
            groups,
            design.blocks().clone(),
            design.declared_sizes().cloned(),
        )
        .expect("singleton groups always partition the point set")
    }

    pub fn into_parts(self) -> (usize, Vec<Vec<Point>>, Blocks, Option<BTreeSet<usize>>) {
        (self.v, self.groups, self.blocks, self.declared_sizes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_notation() {
        let t = GroupType::new(vec![2, 4, 4, 4]);
        assert_eq!(t.to_string(), "4^3 2^1");
        assert_eq!(GroupType::parse("4^3 2^1"), Some(t.clone()));
        assert_eq!(GroupType::parse("4,2,4,4"), Some(t));
        assert_eq!(GroupType::parse("4^x"), None);
        assert_eq!(GroupType::uniform(13, 169).to_string(), "13^169");
    }

    #[test]
    fn groups_are_canonical() {
        let g = GroupDesign::new(4, vec![vec![3, 2], vec![1, 0]], Blocks::new(), None).unwrap();
        assert_eq!(g.groups(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(g.group_of(3), Some(1));
    }

    #[test]
    fn rejects_bad_groups() {
        assert_eq!(
            GroupDesign::new(3, vec![vec![0, 1], vec![1, 2]], Blocks::new(), None),
            Err(DesignError::OverlappingGroups { point: 1 })
        );
        assert_eq!(
            GroupDesign::new(3, vec![vec![0, 1, 2], vec![]], Blocks::new(), None),
            Err(DesignError::EmptyGroup)
        );
    }
}

use std::collections::BTreeSet;

use serde::Serialize;

use super::blocks::{Blocks, Incidence, Point};
use super::DesignError;

/// A pairwise balanced design on points `0..v`.
///
/// Construction only checks that the block lists are well formed (points in
/// range, no repeats inside a block). Whether the pair axiom holds is the
/// verifier's job, so malformed designs can be represented and diagnosed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PBDesign {
    v: usize,
    blocks: Blocks,
    declared_sizes: Option<BTreeSet<usize>>,
}

impl PBDesign {
    pub fn new(
        v: usize,
        mut blocks: Blocks,
        declared_sizes: Option<BTreeSet<usize>>,
    ) -> Result<Self, DesignError> {
        blocks.canonicalize();
        check_lists(v, blocks.iter(), "block")?;
        Ok(PBDesign {
            v,
            blocks,
            declared_sizes,
        })
    }

    pub fn from_blocks<I, B>(v: usize, blocks: I) -> Result<Self, DesignError>
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[Point]>,
    {
        Self::new(v, Blocks::from_lists(blocks), None)
    }

    /// The one-block design on `v` points.
    pub fn single_block(v: usize) -> Self {
        let all: Vec<Point> = (0..v as Point).collect();
        let mut blocks = Blocks::new();
        if v > 0 {
            blocks.push(&all);
        }
        PBDesign {
            v,
            blocks,
            declared_sizes: Some(BTreeSet::from([v])),
        }
    }

    pub fn v(&self) -> usize {
        self.v
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

    /// Block sizes that actually occur.
    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(<[Point]>::len).collect()
    }

    /// Declared sizes if present, otherwise the observed ones.
    pub fn sizes(&self) -> BTreeSet<usize> {
        self.declared_sizes
            .clone()
            .unwrap_or_else(|| self.block_sizes())
    }

    pub fn incidence(&self) -> Incidence {
        Incidence::new(self.v, &self.blocks)
    }

    /// Number of blocks through each point.
    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0; self.v];
        for b in self.blocks.iter() {
            for &p in b {
                r[p as usize] += 1;
            }
        }
        r
    }

    /// True when one block contains every point.
    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().any(|b| b.len() == self.v)
    }

    pub fn into_parts(self) -> (usize, Blocks, Option<BTreeSet<usize>>) {
        (self.v, self.blocks, self.declared_sizes)
    }
}

pub(crate) fn check_lists<'a>(
    v: usize,
    lists: impl Iterator<Item = &'a [Point]>,
    what: &'static str,
) -> Result<(), DesignError> {
    for list in lists {
        if let Some(&p) = list.iter().find(|&&p| p as usize >= v) {
            return Err(DesignError::PointOutOfRange { point: p, v });
        }
        // lists are sorted, so repeats are adjacent
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(DesignError::RepeatedPoint { point: w[0], what });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_lists() {
        assert_eq!(
            PBDesign::from_blocks(3, [[0u32, 3]]),
            Err(DesignError::PointOutOfRange { point: 3, v: 3 })
        );
        assert!(matches!(
            PBDesign::from_blocks(3, [[1u32, 1]]),
            Err(DesignError::RepeatedPoint { point: 1, .. })
        ));
    }

    #[test]
    fn single_block_is_trivial() {
        let d = PBDesign::single_block(5);
        assert!(d.is_trivial());
        assert_eq!(d.blocks().len(), 1);
        assert_eq!(d.replication(), vec![1; 5]);
    }
}

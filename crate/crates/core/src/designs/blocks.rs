use std::fmt;

use serde::{Serialize, Serializer};

/// A point index. Designs label their points `0..v`.
pub type Point = u32;

/// A multiset of blocks stored contiguously.
///
/// Each block is kept sorted ascending and the block list is kept in
/// lexicographic order, so two equal designs always have equal storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Blocks {
    offsets: Vec<usize>,
    points: Vec<Point>,
}

impl Blocks {
    pub fn new() -> Self {
        Blocks {
            offsets: vec![0],
            points: Vec::new(),
        }
    }

    pub fn with_capacity(blocks: usize, incidences: usize) -> Self {
        let mut offsets = Vec::with_capacity(blocks + 1);
        offsets.push(0);
        Blocks {
            offsets,
            points: Vec::with_capacity(incidences),
        }
    }

    /// Collects blocks and canonicalizes them.
    pub fn from_lists<I, B>(blocks: I) -> Self
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[Point]>,
    {
        let mut out = Blocks::new();
        for b in blocks {
            out.push(b.as_ref());
        }
        out.canonicalize();
        out
    }

    /// Appends a block without restoring canonical order; call
    /// [`Blocks::canonicalize`] when done.
    pub fn push(&mut self, block: &[Point]) {
        self.points.extend_from_slice(block);
        self.offsets.push(self.points.len());
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of point-block incidences.
    pub fn incidences(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, i: usize) -> &[Point] {
        &self.points[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Point]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Largest point mentioned by any block.
    pub fn max_point(&self) -> Option<Point> {
        self.points.iter().copied().max()
    }

    /// Sorts every block and then the block list.
    pub fn canonicalize(&mut self) {
        for i in 0..self.len() {
            let (s, e) = (self.offsets[i], self.offsets[i + 1]);
            self.points[s..e].sort_unstable();
        }
        let sorted = (0..self.len()).all(|i| i == 0 || self.get(i - 1) <= self.get(i));
        if sorted {
            return;
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.get(a).cmp(self.get(b)));
        let mut out = Blocks::with_capacity(self.len(), self.points.len());
        for i in order {
            out.push(self.get(i));
        }
        *self = out;
    }

    pub fn to_vecs(&self) -> Vec<Vec<Point>> {
        self.iter().map(<[Point]>::to_vec).collect()
    }
}

impl Default for Blocks {
    fn default() -> Self {
        Blocks::new()
    }
}

impl fmt::Debug for Blocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl Serialize for Blocks {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Point-to-block incidence lists, in block index order.
#[derive(Debug, Clone)]
pub struct Incidence {
    offsets: Vec<usize>,
    blocks: Vec<u32>,
}

impl Incidence {
    pub fn new(v: usize, blocks: &Blocks) -> Self {
        let mut degree = vec![0usize; v + 1];
        for b in blocks.iter() {
            for &p in b {
                degree[p as usize + 1] += 1;
            }
        }
        for i in 1..=v {
            degree[i] += degree[i - 1];
        }
        let offsets = degree.clone();
        let mut fill = degree;
        let mut out = vec![0u32; blocks.incidences()];
        for (bi, b) in blocks.iter().enumerate() {
            for &p in b {
                out[fill[p as usize]] = bi as u32;
                fill[p as usize] += 1;
            }
        }
        Incidence {
            offsets,
            blocks: out,
        }
    }

    /// Block indices through `p`.
    pub fn of(&self, p: Point) -> &[u32] {
        let p = p as usize;
        &self.blocks[self.offsets[p]..self.offsets[p + 1]]
    }

    pub fn degree(&self, p: Point) -> usize {
        self.of(p).len()
    }
}

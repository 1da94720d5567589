use crate::designs::{Blocks, GroupDesign, Incidence, PBDesign, Point};

use super::ClosureError;

/// Incidence data needed to close point sets, shared by many closures.
///
/// In strong mode every group touched by the set is added whole, and a block
/// fires as soon as it holds two points of the set. For a valid GDD those two
/// points always lie in distinct groups, so this is exactly the strong rule.
pub struct SpanIndex<'a> {
    v: usize,
    blocks: &'a Blocks,
    incidence: Incidence,
    groups: Option<(&'a [Vec<Point>], Vec<u32>)>,
}

/// Reusable scratch buffers for [`SpanIndex::close`].
pub struct Scratch {
    count: Vec<u32>,
    in_set: Vec<bool>,
    group_done: Vec<bool>,
    members: Vec<Point>,
    touched_blocks: Vec<u32>,
    touched_groups: Vec<u32>,
}

impl<'a> SpanIndex<'a> {
    pub fn pbd(design: &'a PBDesign) -> Self {
        SpanIndex {
            v: design.v(),
            blocks: design.blocks(),
            incidence: design.incidence(),
            groups: None,
        }
    }

    pub fn strong(design: &'a GroupDesign) -> Self {
        let group_of = (0..design.v() as Point)
            .map(|p| design.group_of(p).map_or(u32::MAX, |g| g as u32))
            .collect();
        SpanIndex {
            v: design.v(),
            blocks: design.blocks(),
            incidence: design.incidence(),
            groups: Some((design.groups(), group_of)),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn scratch(&self) -> Scratch {
        Scratch {
            count: vec![0; self.blocks.len()],
            in_set: vec![false; self.v],
            group_done: vec![false; self.groups.as_ref().map_or(0, |g| g.0.len())],
            members: Vec::new(),
            touched_blocks: Vec::new(),
            touched_groups: Vec::new(),
        }
    }

    pub fn check_points(&self, seeds: &[Point]) -> Result<(), ClosureError> {
        match seeds.iter().find(|&&p| p as usize >= self.v) {
            Some(&p) => Err(ClosureError::UnknownPoint { point: p, v: self.v }),
            None => Ok(()),
        }
    }

    /// Closes `seeds` and returns the size of the result; the members are
    /// left in `scratch.members()` (unsorted). With `stop_when_full` the
    /// search may return early once every point has been reached.
    pub fn close(&self, scratch: &mut Scratch, seeds: &[Point], stop_when_full: bool) -> usize {
        scratch.reset();
        for &p in seeds {
            scratch.add(p);
        }
        let mut next = 0;
        while next < scratch.members.len() {
            if stop_when_full && scratch.members.len() == self.v {
                break;
            }
            let p = scratch.members[next];
            next += 1;
            if let Some((groups, group_of)) = &self.groups {
                let g = group_of[p as usize];
                if g != u32::MAX && !scratch.group_done[g as usize] {
                    scratch.group_done[g as usize] = true;
                    scratch.touched_groups.push(g);
                    for &x in &groups[g as usize] {
                        scratch.add(x);
                    }
                }
            }
            for &b in self.incidence.of(p) {
                let c = &mut scratch.count[b as usize];
                if *c == 0 {
                    scratch.touched_blocks.push(b);
                }
                *c += 1;
                if *c == 2 {
                    for &x in self.blocks.get(b as usize) {
                        scratch.add(x);
                    }
                }
            }
        }
        scratch.members.len()
    }

    /// Sorted closure of `seeds`.
    pub fn span(&self, seeds: &[Point]) -> Result<Vec<Point>, ClosureError> {
        self.check_points(seeds)?;
        let mut scratch = self.scratch();
        self.close(&mut scratch, seeds, false);
        let mut out = scratch.members.clone();
        out.sort_unstable();
        Ok(out)
    }

    /// True when `seeds` generate every point.
    pub fn spans_all(&self, scratch: &mut Scratch, seeds: &[Point]) -> bool {
        self.close(scratch, seeds, true) == self.v
    }
}

impl Scratch {
    fn add(&mut self, p: Point) {
        let slot = &mut self.in_set[p as usize];
        if !*slot {
            *slot = true;
            self.members.push(p);
        }
    }

    fn reset(&mut self) {
        for &p in &self.members {
            self.in_set[p as usize] = false;
        }
        for &b in &self.touched_blocks {
            self.count[b as usize] = 0;
        }
        for &g in &self.touched_groups {
            self.group_done[g as usize] = false;
        }
        self.members.clear();
        self.touched_blocks.clear();
        self.touched_groups.clear();
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }
}

/// Smallest subspace of the PBD containing `seeds`.
pub fn span(design: &PBDesign, seeds: &[Point]) -> Result<Vec<Point>, ClosureError> {
    SpanIndex::pbd(design).span(seeds)
}

/// Smallest strong subspace of the GDD containing `seeds`.
pub fn strong_span(design: &GroupDesign, seeds: &[Point]) -> Result<Vec<Point>, ClosureError> {
    SpanIndex::strong(design).span(seeds)
}

/// True when every block meeting `set` in two or more points lies inside it.
pub fn is_subspace(design: &PBDesign, set: &[Point]) -> bool {
    let mut inside = vec![false; design.v()];
    for &p in set {
        inside[p as usize] = true;
    }
    design.blocks().iter().all(|b| {
        let hits = b.iter().filter(|&&p| inside[p as usize]).count();
        hits < 2 || hits == b.len()
    })
}

/// True when `set` is a subspace that meets every group fully or not at all.
pub fn is_strong_subspace(design: &GroupDesign, set: &[Point]) -> bool {
    let mut inside = vec![false; design.v()];
    for &p in set {
        inside[p as usize] = true;
    }
    let groups_ok = design.groups().iter().all(|g| {
        let hits = g.iter().filter(|&&p| inside[p as usize]).count();
        hits == 0 || hits == g.len()
    });
    groups_ok
        && design.blocks().iter().all(|b| {
            let hits = b.iter().filter(|&&p| inside[p as usize]).count();
            hits < 2 || hits == b.len()
        })
}

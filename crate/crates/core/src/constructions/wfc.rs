use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::designs::{Blocks, GroupDesign, GroupType, Point};

use super::{checked_gdd, ConstructionError, Provider, Request};

/// A weight for every master point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights(Vec<usize>);

impl Weights {
    pub fn uniform(v: usize, w: usize) -> Self {
        Weights(vec![w; v])
    }

    pub fn from_vec(w: Vec<usize>) -> Self {
        Weights(w)
    }

    pub fn get(&self, p: Point) -> usize {
        self.0[p as usize]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Numbering of clones: the clones of master point `x` are consecutive,
/// ordered by master point and then clone index.
#[derive(Debug, Clone)]
pub struct CloneMap {
    offsets: Vec<usize>,
}

impl CloneMap {
    pub fn new(weights: &Weights) -> Self {
        let mut offsets = Vec::with_capacity(weights.0.len() + 1);
        let mut total = 0;
        offsets.push(0);
        for &w in &weights.0 {
            total += w;
            offsets.push(total);
        }
        CloneMap { offsets }
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn id(&self, x: Point, clone: usize) -> Point {
        debug_assert!(clone < self.offsets[x as usize + 1] - self.offsets[x as usize]);
        (self.offsets[x as usize] + clone) as Point
    }

    /// Master point and clone index of an output point.
    pub fn origin(&self, id: Point) -> (Point, usize) {
        let id = id as usize;
        let x = self.offsets.partition_point(|&o| o <= id) - 1;
        (x as Point, id - self.offsets[x])
    }

    pub fn clones(&self, x: Point) -> std::ops::Range<usize> {
        self.offsets[x as usize]..self.offsets[x as usize + 1]
    }
}

/// An ingredient GDD with each point tagged by (group rank, position).
/// Groups are ranked by size and then smallest point.
struct Slotted {
    design: Arc<GroupDesign>,
    slots: Vec<(u32, u32)>,
}

impl Slotted {
    fn new(design: Arc<GroupDesign>) -> Self {
        let mut order: Vec<usize> = (0..design.groups().len()).collect();
        order.sort_by_key(|&g| (design.groups()[g].len(), design.groups()[g][0]));
        let mut slots = vec![(0, 0); design.v()];
        for (rank, &g) in order.iter().enumerate() {
            for (pos, &p) in design.groups()[g].iter().enumerate() {
                slots[p as usize] = (rank as u32, pos as u32);
            }
        }
        Slotted { design, slots }
    }
}

/// Weighting construction: inflates every master point `x` into `w(x)`
/// clones and replaces each master block by a K-GDD whose groups are the
/// clone sets of its points. Master groups become unions of clone sets.
///
/// Points of weight zero disappear; blocks left with fewer than two weighted
/// points contribute nothing.
pub fn wfc(
    master: &GroupDesign,
    weights: &Weights,
    sizes: &BTreeSet<usize>,
    provider: &mut Provider,
) -> Result<GroupDesign, ConstructionError> {
    if weights.0.len() != master.v() {
        return Err(ConstructionError::WeightCount {
            expected: master.v(),
            got: weights.0.len(),
        });
    }
    let map = CloneMap::new(weights);
    let mut cache: HashMap<Vec<usize>, Slotted> = HashMap::new();
    let mut blocks = Blocks::new();
    let mut members: Vec<Point> = Vec::new();
    let mut type_key: Vec<usize> = Vec::new();
    let mut image: Vec<Point> = Vec::new();

    for block in master.blocks().iter() {
        members.clear();
        members.extend(block.iter().copied().filter(|&x| weights.get(x) > 0));
        if members.len() < 2 {
            continue;
        }
        members.sort_by_key(|&x| (weights.get(x), x));
        type_key.clear();
        type_key.extend(members.iter().map(|&x| weights.get(x)));
        if !cache.contains_key(&type_key) {
            let group_type = GroupType::new(type_key.clone());
            let found = provider
                .gdd(sizes, &group_type)
                .ok_or_else(|| ConstructionError::MissingIngredient(Request::gdd(sizes, group_type)))?;
            cache.insert(type_key.clone(), Slotted::new(found.design));
        }
        let ingredient = &cache[&type_key];
        for sub in ingredient.design.blocks().iter() {
            image.clear();
            image.extend(sub.iter().map(|&i| {
                let (rank, pos) = ingredient.slots[i as usize];
                map.id(members[rank as usize], pos as usize)
            }));
            blocks.push(&image);
        }
    }

    let groups: Vec<Vec<Point>> = master
        .groups()
        .iter()
        .map(|g| {
            g.iter()
                .flat_map(|&x| map.clones(x).map(|c| c as Point))
                .collect::<Vec<_>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    let out = GroupDesign::new(map.total(), groups, blocks, Some(sizes.clone()))?;
    checked_gdd("weighting", out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{affine_space, projective_plane, transversal_design};
    use crate::designs::{pbd_as_gdd, verify_gdd};

    #[test]
    fn clone_map_is_a_bijection() {
        let w = Weights::from_vec(vec![2, 0, 3, 1]);
        let map = CloneMap::new(&w);
        assert_eq!(map.total(), 6);
        let mut seen = [false; 6];
        for x in 0..4u32 {
            for c in 0..w.get(x) {
                let id = map.id(x, c);
                assert_eq!(map.origin(id), (x, c));
                assert!(!seen[id as usize]);
                seen[id as usize] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn inflate_ag_2_3_by_three() {
        let master = pbd_as_gdd(&affine_space(3, 2).unwrap());
        let mut p = Provider::generators_only();
        let out = wfc(&master, &Weights::uniform(9, 3), &BTreeSet::from([3]), &mut p).unwrap();
        assert_eq!(out.group_type().to_string(), "3^9");
        assert_eq!(out.blocks().len(), 12 * 9);
    }

    #[test]
    fn uneven_weights_match_groups_by_size() {
        let master = pbd_as_gdd(&projective_plane(2).unwrap());
        let w = Weights::from_vec(vec![2, 1, 3, 1, 1, 1, 1]);
        let mut p = Provider::generators_only();
        let out = wfc(&master, &w, &BTreeSet::from([2]), &mut p).unwrap();
        assert_eq!(out.group_type().to_string(), "3^1 2^1 1^5");
        assert!(verify_gdd(&out).valid);
        assert!(matches!(
            wfc(&master, &w, &BTreeSet::from([3]), &mut p),
            Err(ConstructionError::MissingIngredient(_))
        ));
    }

    #[test]
    fn zero_weights_drop_points() {
        let master = transversal_design(4, 3).unwrap();
        let mut w = Weights::uniform(12, 1);
        for x in 9..12 {
            w.0[x] = 0;
        }
        let mut p = Provider::generators_only();
        let out = wfc(&master, &w, &BTreeSet::from([3]), &mut p).unwrap();
        assert_eq!(out.v(), 9);
        assert_eq!(out.group_type().to_string(), "3^3");
        assert!(verify_gdd(&out).valid);
    }

    #[test]
    fn wrong_weight_count() {
        let master = transversal_design(3, 3).unwrap();
        let mut p = Provider::generators_only();
        let err = wfc(&master, &Weights::uniform(8, 1), &BTreeSet::from([3]), &mut p).unwrap_err();
        assert_eq!(err, ConstructionError::WeightCount { expected: 9, got: 8 });
    }
}

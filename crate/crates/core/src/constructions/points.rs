use std::collections::BTreeSet;

use crate::designs::{Blocks, GroupDesign, PBDesign, Point};

use super::{checked_gdd, checked_pbd, ConstructionError, Provider, Request};

/// Deletes point `x` from a PBD. The punctured blocks through `x` become
/// the groups; points above `x` shift down by one.
pub fn delete_point(design: &PBDesign, x: Point) -> Result<GroupDesign, ConstructionError> {
    let v = design.v();
    if x as usize >= v {
        return Err(ConstructionError::UnknownPoint { point: x, v });
    }
    let shift = |p: Point| if p > x { p - 1 } else { p };
    let mut groups = Vec::new();
    let mut blocks = Blocks::with_capacity(design.blocks().len(), design.blocks().incidences());
    let mut image = Vec::new();
    for b in design.blocks().iter() {
        image.clear();
        image.extend(b.iter().filter(|&&p| p != x).map(|&p| shift(p)));
        if image.len() < b.len() {
            groups.push(image.clone());
        } else {
            blocks.push(&image);
        }
    }
    let out = GroupDesign::new(v - 1, groups, blocks, design.declared_sizes().cloned())?;
    checked_gdd("point deletion", out)
}

/// How one group is completed once the new point is added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupFill {
    /// The group plus the new point becomes one block.
    Single,
    /// The group plus the new point carries a PBD with these block sizes.
    Pbd(BTreeSet<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FillPolicy {
    /// Every group becomes a block with the new point.
    Single,
    /// Every group carries a PBD(|G| + 1, K).
    Pbd(BTreeSet<usize>),
    /// One fill per group, in group order.
    PerGroup(Vec<GroupFill>),
}

/// Adds a point `v` to a GDD and fills each group plus `v` with a block or
/// a PBD, giving a PBD on `v + 1` points.
pub fn add_point_fill(
    design: &GroupDesign,
    policy: &FillPolicy,
    provider: &mut Provider,
) -> Result<PBDesign, ConstructionError> {
    let groups = design.groups();
    let fills: Vec<GroupFill> = match policy {
        FillPolicy::Single => vec![GroupFill::Single; groups.len()],
        FillPolicy::Pbd(k) => vec![GroupFill::Pbd(k.clone()); groups.len()],
        FillPolicy::PerGroup(f) if f.len() == groups.len() => f.clone(),
        FillPolicy::PerGroup(f) => {
            return Err(ConstructionError::FillCount {
                expected: groups.len(),
                got: f.len(),
            })
        }
    };
    let inf = design.v() as Point;
    let mut blocks = design.blocks().clone();
    let mut sizes = design.sizes();
    let mut image = Vec::new();
    for (g, fill) in groups.iter().zip(&fills) {
        match fill {
            GroupFill::Single => {
                image.clear();
                image.extend_from_slice(g);
                image.push(inf);
                blocks.push(&image);
                sizes.insert(g.len() + 1);
            }
            GroupFill::Pbd(k) => {
                let s = g.len() + 1;
                let filler = provider
                    .pbd(s, k)
                    .ok_or_else(|| ConstructionError::MissingIngredient(Request::pbd(s, k)))?
                    .design;
                // ingredient point s - 1 plays the new point
                for b in filler.blocks().iter() {
                    image.clear();
                    image.extend(b.iter().map(|&i| if i as usize == g.len() { inf } else { g[i as usize] }));
                    blocks.push(&image);
                }
                sizes.extend(filler.block_sizes());
            }
        }
    }
    let out = PBDesign::new(design.v() + 1, blocks, Some(sizes))?;
    checked_pbd("adding a point", out)
}

/// Renames point `i` to `map[i]`; `map` must be a permutation of `0..v`.
pub fn relabel_pbd(design: &PBDesign, map: &[Point]) -> Result<PBDesign, ConstructionError> {
    let v = design.v();
    let mut seen = vec![false; v];
    for &p in map {
        if p as usize >= v || std::mem::replace(&mut seen[p as usize], true) {
            return Err(ConstructionError::NotAPermutation(v));
        }
    }
    if map.len() != v {
        return Err(ConstructionError::NotAPermutation(v));
    }
    let blocks = Blocks::from_lists(
        design
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&p| map[p as usize]).collect::<Vec<_>>()),
    );
    Ok(PBDesign::new(v, blocks, design.declared_sizes().cloned())?)
}

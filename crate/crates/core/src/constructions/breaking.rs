use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::designs::{Blocks, GroupDesign, PBDesign, Point};

use super::{checked_gdd, checked_pbd, ConstructionError, Provider, Request};

/// Replaces every block whose size is not in `sizes` by a PBD(|B|, sizes)
/// laid onto its points in sorted order.
fn break_all(blocks: &Blocks, sizes: &BTreeSet<usize>, provider: &mut Provider) -> Result<Blocks, ConstructionError> {
    let mut cache: HashMap<usize, Arc<PBDesign>> = HashMap::new();
    let mut out = Blocks::with_capacity(blocks.len(), blocks.incidences());
    let mut image: Vec<Point> = Vec::new();
    for block in blocks.iter() {
        let s = block.len();
        if sizes.contains(&s) {
            out.push(block);
            continue;
        }
        let ingredient = match cache.get(&s) {
            Some(d) => d.clone(),
            None => {
                let d = provider
                    .pbd(s, sizes)
                    .ok_or_else(|| ConstructionError::MissingIngredient(Request::pbd(s, sizes)))?
                    .design;
                cache.insert(s, d.clone());
                d
            }
        };
        for sub in ingredient.blocks().iter() {
            image.clear();
            image.extend(sub.iter().map(|&i| block[i as usize]));
            out.push(&image);
        }
    }
    Ok(out)
}

/// Breaks up the blocks of a PBD into PBDs with block sizes in `sizes`.
pub fn break_blocks_pbd(
    design: &PBDesign,
    sizes: &BTreeSet<usize>,
    provider: &mut Provider,
) -> Result<PBDesign, ConstructionError> {
    let blocks = break_all(design.blocks(), sizes, provider)?;
    let out = PBDesign::new(design.v(), blocks, Some(sizes.clone()))?;
    checked_pbd("block breaking", out)
}

/// Breaks up the blocks of a GDD, keeping its groups.
pub fn break_blocks_gdd(
    design: &GroupDesign,
    sizes: &BTreeSet<usize>,
    provider: &mut Provider,
) -> Result<GroupDesign, ConstructionError> {
    let blocks = break_all(design.blocks(), sizes, provider)?;
    let out = GroupDesign::new(design.v(), design.groups().to_vec(), blocks, Some(sizes.clone()))?;
    checked_gdd("block breaking", out)
}

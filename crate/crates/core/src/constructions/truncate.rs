use crate::designs::{Blocks, GroupDesign, Point};

use super::{checked_gdd, ConstructionError};

/// Keeps the `keep` smallest points of group `group` and deletes the rest.
/// Surviving points are renumbered in order; blocks shrink accordingly and
/// blocks left with at most one point are dropped. The declared sizes gain
/// `k - 1` for every declared `k >= 3`.
pub fn truncate(design: &GroupDesign, group: usize, keep: usize) -> Result<GroupDesign, ConstructionError> {
    let count = design.groups().len();
    let target = design
        .groups()
        .get(group)
        .ok_or(ConstructionError::BadGroup { index: group, count })?;
    if keep == 0 || keep > target.len() {
        return Err(ConstructionError::BadKeep {
            keep,
            size: target.len(),
        });
    }
    let mut label: Vec<Option<Point>> = vec![Some(0); design.v()];
    for &p in &target[keep..] {
        label[p as usize] = None;
    }
    let mut next = 0;
    for l in label.iter_mut().flatten() {
        *l = next;
        next += 1;
    }
    let relabel = |pts: &[Point]| -> Vec<Point> { pts.iter().filter_map(|&p| label[p as usize]).collect() };

    let mut blocks = Blocks::with_capacity(design.blocks().len(), design.blocks().incidences());
    for b in design.blocks().iter() {
        let image = relabel(b);
        if image.len() >= 2 {
            blocks.push(&image);
        }
    }
    let groups = design.groups().iter().map(|g| relabel(g)).collect();
    let mut sizes = design.sizes();
    sizes.extend(design.sizes().iter().filter(|&&k| k >= 3).map(|k| k - 1));
    let out = GroupDesign::new(next as usize, groups, blocks, Some(sizes))?;
    checked_gdd("truncation", out)
}

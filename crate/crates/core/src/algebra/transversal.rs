use std::collections::BTreeSet;

use super::{AlgebraError, FiniteField};
use crate::designs::{Blocks, GroupDesign, Point};

/// TD(k, n) from the field of order `n`, for `2 <= k <= n + 1`.
///
/// Group `i` holds points `i n .. (i + 1) n`. Block `(a, b)` meets group
/// `i < n` in the point encoding `a x_i + b`, where `x_i` is the field
/// element with encoding `i`, and meets group `n` (present only when
/// `k = n + 1`) in `a`. `n = 1` gives the single block on `k` points.
pub fn transversal_design(k: usize, n: usize) -> Result<GroupDesign, AlgebraError> {
    if k < 2 {
        return Err(AlgebraError::Unsupported { k, n });
    }
    let groups: Vec<Vec<Point>> = (0..k)
        .map(|i| ((i * n) as Point..((i + 1) * n) as Point).collect())
        .collect();
    let sizes = Some(BTreeSet::from([k]));
    if n == 1 {
        let block: Vec<Point> = (0..k as Point).collect();
        let design = GroupDesign::new(k, groups, Blocks::from_lists([block]), sizes)
            .expect("TD(k,1) is well formed");
        return Ok(design);
    }
    if k > n + 1 {
        return Err(AlgebraError::Unsupported { k, n });
    }
    let field = FiniteField::of_order(n as u64).map_err(|_| AlgebraError::Unsupported { k, n })?;

    let mut blocks = Blocks::with_capacity(n * n, n * n * k);
    let mut block = Vec::with_capacity(k);
    for a in field.elements() {
        for b in field.elements() {
            block.clear();
            for i in 0..k.min(n) {
                let y = field.add(field.mul(a, i as u32), b);
                block.push((i * n) as Point + y);
            }
            if k == n + 1 {
                block.push((n * n) as Point + a);
            }
            blocks.push(&block);
        }
    }
    blocks.canonicalize();
    Ok(GroupDesign::new(k * n, groups, blocks, sizes).expect("TD blocks are well formed"))
}

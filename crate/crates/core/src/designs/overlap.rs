//! Writing an integer as `n A + x` with `c <= x <= n`.

use serde::Serialize;

use super::DesignError;

/// Smallest `y` for which [`solve_overlap`] guarantees a representation:
/// `A (A + c + 1) + c`.
pub fn overlap_threshold(a: u64, c: u64) -> u64 {
    a * (a + c + 1) + c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub n: u64,
    pub x: u64,
}

/// Division-algorithm witness: `y - c = n A + m` with `0 <= m < A`, and
/// `x = m + c`. Past the threshold this always lands in `c <= x <= n`.
pub fn solve_overlap(y: u64, a: u64, c: u64) -> Result<Overlap, DesignError> {
    if a == 0 || c == 0 {
        return Err(DesignError::InvalidOverlap { a, c });
    }
    if y < overlap_threshold(a, c) {
        return Err(DesignError::BelowThreshold { y, a, c });
    }
    let n = (y - c) / a;
    let x = (y - c) % a + c;
    debug_assert!(y == n * a + x && c <= x && x <= n);
    Ok(Overlap { n, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Whether any `(n, x)` with `y = n A + x`, `c <= x <= n` exists.
    fn representable(y: u64, a: u64, c: u64) -> bool {
        (0..=y / a).any(|n| {
            let x = y - n * a;
            c <= x && x <= n
        })
    }

    #[test]
    fn examples() {
        assert_eq!(solve_overlap(23, 3, 2), Ok(Overlap { n: 7, x: 2 }));
        assert_eq!(solve_overlap(20, 3, 2), Ok(Overlap { n: 6, x: 2 }));
        assert_eq!(overlap_threshold(1, 1), 4);
        assert_eq!(solve_overlap(4, 1, 1), Ok(Overlap { n: 3, x: 1 }));
        // 3 = 2*1 + 1 is representable but sits below the threshold.
        assert!(representable(3, 1, 1));
        assert_eq!(
            solve_overlap(3, 1, 1),
            Err(DesignError::BelowThreshold { y: 3, a: 1, c: 1 })
        );
        assert_eq!(
            solve_overlap(100, 0, 1),
            Err(DesignError::InvalidOverlap { a: 0, c: 1 })
        );
    }

    #[test]
    fn agrees_with_brute_force() {
        for a in 1..=10 {
            for c in 1..=10 {
                let t = overlap_threshold(a, c);
                for y in t..=t + 200 {
                    let o = solve_overlap(y, a, c).unwrap();
                    assert_eq!(y, o.n * a + o.x);
                    assert!(c <= o.x && o.x <= o.n);
                    assert!(representable(y, a, c));
                }
            }
        }
    }
}

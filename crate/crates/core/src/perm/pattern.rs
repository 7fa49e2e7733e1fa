//! Pattern containment.
//!
//! [`contains_pattern`] is the naive subsequence search for arbitrary
//! patterns and doubles as the oracle. [`avoids`] is a single linear pass per
//! length-3 pattern; the six patterns reduce to two scans (for 123 and 132)
//! under reversal and complement:
//!
//! | pattern | reduction                     |
//! |---------|-------------------------------|
//! | 123     | direct                        |
//! | 321     | 123 on the complement         |
//! | 132     | direct (right-to-left stack)  |
//! | 231     | 132 on the reversal           |
//! | 312     | 132 on the complement         |
//! | 213     | 132 on the reverse-complement |

use super::Pattern3;

/// Whether `host` contains a subsequence order-isomorphic to `pattern`.
///
/// Runs in `O(C(n, m) · m)` in the worst case with early pruning. Returns
/// `false` whenever the pattern is longer than the host.
pub fn contains_pattern(host: &[u32], pattern: &[u32]) -> bool {
    let m = pattern.len();
    if m > host.len() {
        return false;
    }
    if m == 0 {
        return true;
    }
    let mut chosen = Vec::with_capacity(m);
    extend(host, pattern, 0, &mut chosen)
}

fn extend(host: &[u32], pattern: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
    let j = chosen.len();
    if j == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - j;
    for i in start..=host.len() - remaining {
        let v = host[i];
        // the new entry must compare with every earlier pick as in the pattern
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&c, &t)| (c < v) == (t < pattern[j]));
        if consistent {
            chosen.push(v);
            if extend(host, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Whether `host` avoids the length-3 `pattern`, in one linear pass.
pub fn avoids(host: &[u32], pattern: Pattern3) -> bool {
    let n = host.len() as u32;
    let complement = |v: u32| n + 1 - v;
    match pattern {
        Pattern3::P123 => !has_123(host.iter().copied()),
        Pattern3::P321 => !has_123(host.iter().map(|&v| complement(v))),
        Pattern3::P132 => !has_132(host.iter().rev().copied()),
        Pattern3::P231 => !has_132(host.iter().copied()),
        Pattern3::P312 => !has_132(host.iter().rev().map(|&v| complement(v))),
        Pattern3::P213 => !has_132(host.iter().map(|&v| complement(v))),
    }
}

/// Detects `a < b < c` at increasing positions.
fn has_123(values: impl Iterator<Item = u32>) -> bool {
    let mut min = u32::MAX;
    // smallest value seen so far that has a smaller value before it
    let mut mid = u32::MAX;
    for v in values {
        if v > mid {
            return true;
        }
        if v > min {
            mid = mid.min(v);
        }
        min = min.min(v);
    }
    false
}

/// Detects a 132 occurrence, reading the sequence from RIGHT to LEFT (the
/// iterator yields `σ_n, σ_{n-1}, …`).
///
/// The stack holds candidates for the `3`; `third` is the largest value
/// already popped by something bigger to its left, i.e. the best `2`.
fn has_132(right_to_left: impl Iterator<Item = u32>) -> bool {
    let mut stack: Vec<u32> = Vec::new();
    let mut third = 0u32;
    for v in right_to_left {
        if v < third {
            return true;
        }
        while let Some(&top) = stack.last() {
            if top < v {
                third = third.max(top);
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(v);
    }
    false
}

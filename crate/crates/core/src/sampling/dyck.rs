//! Dyck paths, their uniform generation, and the two bijections onto
//! pattern-avoiding permutations used by the uniform samplers.
//!
//! **321-avoiders.** Write the path as `U^{a_1} D^{b_1} ⋯ U^{a_r} D^{b_r}`
//! and let `x_i = a_1 + ⋯ + a_i`, `y_i = b_1 + ⋯ + b_i`. The i-th peak
//! places the left-to-right maximum `x_i` at position `y_{i−1} + 1`; the
//! remaining positions receive the remaining values in increasing order.
//! The Dyck condition `x_i ≥ y_i` is exactly what makes the filler entries
//! smaller than the preceding maximum, so the result is a union of two
//! increasing subsequences and avoids 321. The full `n = 4` correspondence is
//! tabulated in `docs/dyck-321-bijection.md` and checked by a test.
//!
//! **132-avoiders.** First-return decomposition `P = U A D B` with `A` of
//! semilength `i`: the permutation is `α n β`, where `α` (from `A`) uses the
//! `i` largest remaining values below `n` and `β` (from `B`) the smallest.

use std::fmt;
use std::str::FromStr;

use super::rng::RandomSource;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A lattice path of `2n` steps in `{+1, −1}` with non-negative prefix sums
/// and total zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<i8>,
}

impl DyckPath {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        if !is_dyck(&steps) {
            return Err(Error::InvalidParameter(format!(
                "{steps:?} is not a Dyck path"
            )));
        }
        Ok(DyckPath { steps })
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    /// All Dyck paths of semilength `n`, in lexicographic order with `U < D`.
    pub fn all(n: usize) -> Vec<DyckPath> {
        fn go(n: usize, ups: usize, downs: usize, cur: &mut Vec<i8>, out: &mut Vec<DyckPath>) {
            if ups == n && downs == n {
                out.push(DyckPath { steps: cur.clone() });
                return;
            }
            if ups < n {
                cur.push(1);
                go(n, ups + 1, downs, cur, out);
                cur.pop();
            }
            if downs < ups {
                cur.push(-1);
                go(n, ups, downs + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, 0, 0, &mut Vec::with_capacity(2 * n), &mut out);
        out
    }

    pub fn to_321_avoider(&self) -> Permutation {
        let mut perm = Vec::new();
        let mut used = Vec::new();
        dyck_to_321(&self.steps, &mut perm, &mut used);
        Permutation::from_entries_unchecked(perm)
    }

    pub fn to_132_avoider(&self) -> Permutation {
        let mut perm = Vec::new();
        let mut scratch = Scratch132::default();
        dyck_to_132(&self.steps, &mut perm, &mut scratch);
        Permutation::from_entries_unchecked(perm)
    }
}

impl fmt::Display for DyckPath {
    /// `U`/`D` word, e.g. `UUDD`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.steps {
            f.write_str(if s > 0 { "U" } else { "D" })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(1),
                'D' | 'd' => Ok(-1),
                _ => Err(Error::Parse {
                    what: "Dyck path",
                    input: s.to_string(),
                }),
            })
            .collect::<Result<Vec<i8>>>()?;
        DyckPath::new(steps)
    }
}

fn is_dyck(steps: &[i8]) -> bool {
    let mut h = 0i64;
    for &s in steps {
        match s {
            1 => h += 1,
            -1 => h -= 1,
            _ => return false,
        }
        if h < 0 {
            return false;
        }
    }
    h == 0
}

/// Uniform Dyck path of semilength `n` by the cycle lemma.
pub fn uniform_dyck(n: usize, rng: &mut RandomSource) -> DyckPath {
    let mut steps = Vec::new();
    let mut scratch = Vec::new();
    uniform_dyck_into(n, rng, &mut steps, &mut scratch);
    DyckPath { steps }
}

/// Draws a uniform arrangement of `n + 1` up-steps and `n` down-steps,
/// rotates it to the unique cyclic shift whose prefix sums are all positive
/// (starting right after the last minimum of the prefix sums), and drops the
/// leading up-step. Writes the `2n` steps into `out`.
pub(crate) fn uniform_dyck_into(
    n: usize,
    rng: &mut RandomSource,
    out: &mut Vec<i8>,
    scratch: &mut Vec<i8>,
) {
    let len = 2 * n + 1;
    scratch.clear();
    let mut ups = n as u64 + 1;
    let mut remaining = len as u64;
    for _ in 0..len {
        if rng.below(remaining) < ups {
            scratch.push(1);
            ups -= 1;
        } else {
            scratch.push(-1);
        }
        remaining -= 1;
    }
    // last index in 0..=2n where the prefix sum P_i is minimal
    let mut h = 0i64;
    let mut min = 0i64;
    let mut start = 0usize;
    for (i, &s) in scratch[..len - 1].iter().enumerate() {
        h += s as i64;
        if h <= min {
            min = h;
            start = i + 1;
        }
    }
    out.clear();
    out.extend(scratch[start..].iter().chain(&scratch[..start]).skip(1));
    debug_assert!(is_dyck(out));
}

pub(crate) fn dyck_to_321(steps: &[i8], perm: &mut Vec<u32>, used: &mut Vec<bool>) {
    let n = steps.len() / 2;
    perm.clear();
    perm.resize(n, 0);
    used.clear();
    used.resize(n + 1, false);
    let (mut ups, mut downs) = (0usize, 0usize);
    for (i, &s) in steps.iter().enumerate() {
        if s > 0 {
            ups += 1;
            if steps.get(i + 1) == Some(&-1) {
                perm[downs] = ups as u32;
                used[ups] = true;
            }
        } else {
            downs += 1;
        }
    }
    let mut v = 1usize;
    for slot in perm.iter_mut() {
        if *slot == 0 {
            while used[v] {
                v += 1;
            }
            *slot = v as u32;
            used[v] = true;
        }
    }
}

#[derive(Default, Debug, Clone)]
pub(crate) struct Scratch132 {
    matching: Vec<usize>,
    stack: Vec<usize>,
    tasks: Vec<(usize, usize, usize, u32)>,
}

pub(crate) fn dyck_to_132(steps: &[i8], perm: &mut Vec<u32>, scratch: &mut Scratch132) {
    let n = steps.len() / 2;
    perm.clear();
    perm.resize(n, 0);
    let Scratch132 {
        matching,
        stack,
        tasks,
    } = scratch;
    matching.clear();
    matching.resize(steps.len(), 0);
    stack.clear();
    for (i, &s) in steps.iter().enumerate() {
        if s > 0 {
            stack.push(i);
        } else {
            let open = stack.pop().expect("balanced path");
            matching[open] = i;
        }
    }
    // (path start, path end, first output position, smallest value)
    tasks.clear();
    tasks.push((0, steps.len(), 0, 1));
    while let Some((start, end, pos, lo)) = tasks.pop() {
        if start == end {
            continue;
        }
        let m = (end - start) / 2;
        let close = matching[start];
        let i = (close - start - 1) / 2;
        let beta_len = (m - 1 - i) as u32;
        perm[pos + i] = lo + m as u32 - 1;
        tasks.push((start + 1, close, pos, lo + beta_len));
        tasks.push((close + 1, end, pos + i + 1, lo));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::catalan_by_convolution;
    use crate::perm::{enumerate_avoiders, Pattern3};
    use std::collections::{BTreeSet, HashMap};

    #[test]
    fn counts_are_catalan() {
        let c = catalan_by_convolution(10);
        for (n, c) in c.iter().enumerate().take(11) {
            assert_eq!(*c, DyckPath::all(n).len().into());
        }
    }

    #[test]
    fn bijections_hit_every_avoider_once() {
        for n in 0..=9 {
            let paths = DyckPath::all(n);
            let want321: BTreeSet<_> = enumerate_avoiders(n, Some(Pattern3::P321))
                .unwrap()
                .collect();
            let got321: BTreeSet<_> = paths.iter().map(DyckPath::to_321_avoider).collect();
            assert_eq!(got321.len(), paths.len(), "321 map not injective at n={n}");
            assert_eq!(got321, want321, "n = {n}");

            let want132: BTreeSet<_> = enumerate_avoiders(n, Some(Pattern3::P132))
                .unwrap()
                .collect();
            let got132: BTreeSet<_> = paths.iter().map(DyckPath::to_132_avoider).collect();
            assert_eq!(got132.len(), paths.len(), "132 map not injective at n={n}");
            assert_eq!(got132, want132, "n = {n}");
        }
    }

    #[test]
    fn small_examples() {
        let p: DyckPath = "UDUD".parse().unwrap();
        assert_eq!(p.to_321_avoider().to_string(), "1 2");
        assert_eq!(p.to_132_avoider().to_string(), "2 1");
        let p: DyckPath = "UUDD".parse().unwrap();
        assert_eq!(p.to_321_avoider().to_string(), "2 1");
        assert_eq!(p.to_132_avoider().to_string(), "1 2");
        assert!("UDDU".parse::<DyckPath>().is_err());
        assert!("UUD".parse::<DyckPath>().is_err());
    }

    #[test]
    fn worked_table_in_docs_matches() {
        let doc = include_str!("../../../../docs/dyck-321-bijection.md");
        let mut rows = 0;
        for line in doc.lines() {
            let cells: Vec<&str> = line.split('|').map(str::trim).collect();
            if cells.len() < 4 || !cells[1].starts_with('U') {
                continue;
            }
            let path: DyckPath = cells[1].parse().unwrap();
            let perm: Permutation = cells[2].parse().unwrap();
            assert_eq!(path.to_321_avoider(), perm, "row {line}");
            rows += 1;
        }
        assert_eq!(rows, 14);
    }

    #[test]
    fn uniform_dyck_small() {
        let mut rng = RandomSource::new(11, 0);
        assert_eq!(uniform_dyck(1, &mut rng).to_string(), "UD");
        assert_eq!(uniform_dyck(0, &mut rng).steps().len(), 0);
        let draws = 100_000;
        let mut counts: HashMap<String, u32> = HashMap::new();
        for _ in 0..draws {
            *counts
                .entry(uniform_dyck(3, &mut rng).to_string())
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 5);
        let p = 0.2;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (path, c) in &counts {
            assert!(
                (*c as f64 - draws as f64 * p).abs() < 3.0 * sd,
                "{path}: {c}"
            );
        }
        let mut two: HashMap<String, u32> = HashMap::new();
        for _ in 0..20_000 {
            *two.entry(uniform_dyck(2, &mut rng).to_string())
                .or_default() += 1;
        }
        for c in two.values() {
            assert!((*c as f64 - 10_000.0).abs() < 3.0 * 70.8);
        }
    }

    #[test]
    fn uniform_dyck_is_always_valid() {
        let mut rng = RandomSource::new(2, 9);
        for n in [5, 17, 200] {
            for _ in 0..200 {
                let p = uniform_dyck(n, &mut rng);
                assert!(is_dyck(p.steps()));
                assert_eq!(p.semilength(), n);
            }
        }
    }
}

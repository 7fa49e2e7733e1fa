use super::{Pattern3, Permutation};
use crate::error::{Error, Result};

/// Length caps for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Maximum length when a pattern is avoided (`Catalan(12) = 208012`).
    pub avoiders: usize,
    /// Maximum length for all of `S_n` (`10! = 3628800`).
    pub unrestricted: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            avoiders: 12,
            unrestricted: 10,
        }
    }
}

/// Streams every permutation of length `n` (avoiding `pattern`, if given)
/// exactly once, in lexicographic order.
pub fn enumerate_avoiders(n: usize, pattern: Option<Pattern3>) -> Result<AvoiderIter> {
    AvoiderIter::with_caps(n, pattern, EnumerationCaps::default())
}

/// Depth-first generator over prefixes. A prefix is extended only if the new
/// last entry completes no occurrence of the pattern; since avoidance is
/// inherited by prefixes, this visits exactly the avoiders.
#[derive(Clone, Debug)]
pub struct AvoiderIter {
    n: usize,
    pattern: Option<[u32; 3]>,
    prefix: Vec<u32>,
    used: Vec<bool>,
    // next candidate value to try at each depth
    cursor: Vec<u32>,
    done: bool,
}

impl AvoiderIter {
    pub fn with_caps(n: usize, pattern: Option<Pattern3>, caps: EnumerationCaps) -> Result<Self> {
        let (cap, detail) = match pattern {
            Some(_) => (caps.avoiders, "pattern-avoiding enumeration"),
            None => (caps.unrestricted, "unrestricted enumeration of S_n"),
        };
        if n > cap {
            return Err(Error::EnumerationCap { n, cap, detail });
        }
        Ok(AvoiderIter {
            n,
            pattern: pattern.map(Pattern3::entries),
            prefix: Vec::with_capacity(n),
            used: vec![false; n + 1],
            cursor: vec![1; n + 1],
            done: false,
        })
    }

    fn pop(&mut self) {
        if let Some(v) = self.prefix.pop() {
            self.used[v as usize] = false;
        }
    }

    /// Whether the last prefix entry closes an occurrence of the pattern.
    fn closes_occurrence(&self) -> bool {
        let Some(t) = self.pattern else {
            return false;
        };
        let p = &self.prefix;
        let last = p.len() - 1;
        let c = p[last];
        for j in 1..last {
            let b = p[j];
            if (b < c) != (t[1] < t[2]) {
                continue;
            }
            for &a in &p[..j] {
                if (a < b) == (t[0] < t[1]) && (a < c) == (t[0] < t[2]) {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for AvoiderIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let n = self.n as u32;
        loop {
            let depth = self.prefix.len();
            if depth == self.n {
                let out = Permutation::from_entries_unchecked(self.prefix.clone());
                if self.n == 0 {
                    self.done = true;
                } else {
                    self.pop();
                }
                return Some(out);
            }
            let mut advanced = false;
            let mut v = self.cursor[depth];
            while v <= n {
                if !self.used[v as usize] {
                    self.cursor[depth] = v + 1;
                    self.prefix.push(v);
                    self.used[v as usize] = true;
                    if self.closes_occurrence() {
                        self.pop();
                    } else {
                        self.cursor[depth + 1] = 1;
                        advanced = true;
                        break;
                    }
                }
                v += 1;
            }
            if !advanced {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                self.cursor[depth] = n + 1;
                self.pop();
            }
        }
    }
}

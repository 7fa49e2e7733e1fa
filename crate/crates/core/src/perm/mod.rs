//! Permutations in one-line notation, length-3 pattern avoidance, symmetry
//! maps and exhaustive enumeration.

mod enumerate;
mod pattern;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{enumerate_avoiders, AvoiderIter, EnumerationCaps};
pub use pattern::{avoids, contains_pattern};

/// A permutation of `{1, …, n}` in one-line notation `σ_1 σ_2 ⋯ σ_n`.
///
/// The constructor checks the bijection invariant, so every value of this
/// type is a valid permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{entries:?} is not a bijection of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { entries })
    }

    /// Skips validation; callers guarantee the bijection invariant.
    pub(crate) fn from_entries_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    /// Number of indices `i` with `σ_i = i`.
    pub fn fixed_points(&self) -> usize {
        fixed_points(&self.entries)
    }

    pub fn contains(&self, pattern: &Permutation) -> bool {
        contains_pattern(&self.entries, &pattern.entries)
    }

    pub fn avoids(&self, pattern: Pattern3) -> bool {
        avoids(&self.entries, pattern)
    }

    pub fn apply(&self, kind: Symmetry) -> Permutation {
        let n = self.len() as u32;
        let entries = match kind {
            Symmetry::Reverse => self.entries.iter().rev().copied().collect(),
            Symmetry::Complement => self.entries.iter().map(|&v| n + 1 - v).collect(),
            Symmetry::Inverse => {
                let mut inv = vec![0u32; self.len()];
                for (i, &v) in self.entries.iter().enumerate() {
                    inv[v as usize - 1] = i as u32 + 1;
                }
                inv
            }
            Symmetry::ReverseComplement => self.entries.iter().rev().map(|&v| n + 1 - v).collect(),
        };
        Permutation { entries }
    }

    pub fn reverse(&self) -> Permutation {
        self.apply(Symmetry::Reverse)
    }

    pub fn complement(&self) -> Permutation {
        self.apply(Symmetry::Complement)
    }

    pub fn inverse(&self) -> Permutation {
        self.apply(Symmetry::Inverse)
    }

    pub fn reverse_complement(&self) -> Permutation {
        self.apply(Symmetry::ReverseComplement)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!(
                "cannot compose permutations of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let entries = other
            .entries
            .iter()
            .map(|&j| self.entries[j as usize - 1])
            .collect();
        Ok(Permutation { entries })
    }
}

/// Fixed-point count of a raw one-line sequence.
pub fn fixed_points(entries: &[u32]) -> usize {
    entries
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v as usize == i + 1)
        .count()
}

impl fmt::Display for Permutation {
    /// Space-separated decimal values, e.g. `3 1 2 4 5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts space-separated values (`"3 1 2 4 5"`) or, for `n ≤ 9`, the
    /// compact digit string (`"31245"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse {
            what: "permutation",
            input: s.to_string(),
        };
        let entries: Vec<u32> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| t.parse().map_err(|_| err()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(err))
                .collect::<Result<_>>()?
        };
        Permutation::new(entries)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        Permutation::new(entries)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.entries
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
    ReverseComplement,
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reverse" => Ok(Symmetry::Reverse),
            "complement" => Ok(Symmetry::Complement),
            "inverse" => Ok(Symmetry::Inverse),
            "reverse_complement" | "reverse-complement" => Ok(Symmetry::ReverseComplement),
            _ => Err(Error::Parse {
                what: "symmetry",
                input: s.to_string(),
            }),
        }
    }
}

/// One of the six permutations of length three, used as a forbidden pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern3 {
    P123,
    P132,
    P213,
    P231,
    P312,
    P321,
}

impl Pattern3 {
    pub const ALL: [Pattern3; 6] = [
        Pattern3::P123,
        Pattern3::P132,
        Pattern3::P213,
        Pattern3::P231,
        Pattern3::P312,
        Pattern3::P321,
    ];

    /// The class whose fixed-point generating function is known in closed form.
    pub const SERIES_CLASS: [Pattern3; 3] = [Pattern3::P132, Pattern3::P321, Pattern3::P213];

    pub fn entries(self) -> [u32; 3] {
        match self {
            Pattern3::P123 => [1, 2, 3],
            Pattern3::P132 => [1, 3, 2],
            Pattern3::P213 => [2, 1, 3],
            Pattern3::P231 => [2, 3, 1],
            Pattern3::P312 => [3, 1, 2],
            Pattern3::P321 => [3, 2, 1],
        }
    }

    pub fn as_permutation(self) -> Permutation {
        Permutation::from_entries_unchecked(self.entries().to_vec())
    }

    /// True for 132, 321 and 213.
    pub fn has_series(self) -> bool {
        Self::SERIES_CLASS.contains(&self)
    }

    /// True for the patterns with a uniform sampler (everything but 231, 312).
    pub fn has_sampler(self) -> bool {
        !matches!(self, Pattern3::P231 | Pattern3::P312)
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern3::P123 => "123",
            Pattern3::P132 => "132",
            Pattern3::P213 => "213",
            Pattern3::P231 => "231",
            Pattern3::P312 => "312",
            Pattern3::P321 => "321",
        }
    }
}

impl fmt::Display for Pattern3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern3::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                what: "length-3 pattern",
                input: s.to_string(),
            })
    }
}

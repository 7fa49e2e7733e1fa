use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::QPolynomial;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, rational_to_f64};

/// Which generating function a table holds coefficients of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum SeriesKind {
    /// `√(1 − 4z)`.
    Sqrt,
    /// The fixed-point generating function `G(z, q)`.
    FixedPoints,
    /// Unrestricted partition functions `Z_n(q)`.
    Unrestricted,
    /// `G_m(z, q)`, the m-th factorial-moment series.
    FactorialMoment { order: u32 },
    /// Column `A_k(z)`.
    Column { k: usize },
}

/// Coefficient values; the variant is the mode tag, so one table never mixes
/// representations.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValues {
    /// Full polynomials in `q`.
    Poly(Vec<QPolynomial>),
    /// Exact rationals at a fixed `q`.
    Exact(Vec<BigRational>),
    /// Floats holding `value_n / base^n`.
    Scaled { values: Vec<f64>, log_base: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub kind: SeriesKind,
    /// The bias parameter the table was evaluated at, as text.
    pub q: Option<String>,
    pub values: SeriesValues,
}

impl SeriesTable {
    pub fn mode(&self) -> &'static str {
        match self.values {
            SeriesValues::Poly(_) => "exact-poly",
            SeriesValues::Exact(_) => "exact-eval",
            SeriesValues::Scaled { .. } => "scaled-float",
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            SeriesValues::Poly(v) => v.len(),
            SeriesValues::Exact(v) => v.len(),
            SeriesValues::Scaled { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_max(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn polys(&self) -> Option<&[QPolynomial]> {
        match &self.values {
            SeriesValues::Poly(v) => Some(v),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        match &self.values {
            SeriesValues::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// Natural log of the n-th coefficient, for any mode (polynomials are
    /// evaluated at `q = 1`). `None` when the coefficient is not positive.
    pub fn ln_value(&self, n: usize) -> Option<f64> {
        match &self.values {
            SeriesValues::Poly(v) => {
                let s = v.get(n)?.sum();
                (s > 0.into()).then(|| crate::rational::ln_biguint(s.magnitude()))
            }
            SeriesValues::Exact(v) => {
                let x = v.get(n)?;
                (x > &BigRational::default()).then(|| crate::rational::ln_rational(x))
            }
            SeriesValues::Scaled { values, log_base } => {
                let x = *values.get(n)?;
                (x > 0.0).then(|| x.ln() + n as f64 * log_base)
            }
        }
    }

    /// Approximate value as a float (may overflow to infinity).
    pub fn value_f64(&self, n: usize) -> Option<f64> {
        match &self.values {
            SeriesValues::Exact(v) => v.get(n).map(rational_to_f64),
            _ => self.ln_value(n).map(f64::exp),
        }
    }

    /// CSV with header `n,k,value,mode` for polynomial tables (one row per
    /// non-trivial coefficient) and `n,value,mode` otherwise. Scaled tables
    /// report the stored scaled value; the base is in the JSON export.
    pub fn to_csv(&self) -> String {
        let mode = self.mode();
        let mut out = String::new();
        match &self.values {
            SeriesValues::Poly(polys) => {
                out.push_str("n,k,value,mode\n");
                for (n, p) in polys.iter().enumerate() {
                    for k in 0..=n.max(p.degree().unwrap_or(0)) {
                        let _ = writeln!(out, "{n},{k},{},{mode}", p.coeff(k));
                    }
                }
            }
            SeriesValues::Exact(v) => {
                out.push_str("n,value,mode\n");
                for (n, x) in v.iter().enumerate() {
                    let _ = writeln!(out, "{n},{x},{mode}");
                }
            }
            SeriesValues::Scaled { values, .. } => {
                out.push_str("n,value,mode\n");
                for (n, x) in values.iter().enumerate() {
                    let _ = writeln!(out, "{n},{},{mode}", fmt_f64(*x));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let record = SeriesTableJson::from(self);
        serde_json::to_string_pretty(&record).expect("series table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SeriesTableJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "series table JSON",
            input: e.to_string(),
        })?;
        record.try_into()
    }
}

/// Shortest round-trip decimal for a double.
pub fn fmt_f64(x: f64) -> String {
    let s = serde_json::to_string(&x).unwrap_or_else(|_| format!("{x}"));
    if s == "null" {
        format!("{x}")
    } else {
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonValues {
    Poly(Vec<Vec<String>>),
    Exact(Vec<String>),
    Scaled(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
struct SeriesTableJson {
    kind: SeriesKind,
    q: Option<String>,
    mode: String,
    n_max: usize,
    log_base: Option<f64>,
    values: JsonValues,
}

impl From<&SeriesTable> for SeriesTableJson {
    fn from(t: &SeriesTable) -> Self {
        let (values, log_base) = match &t.values {
            SeriesValues::Poly(v) => (
                JsonValues::Poly(
                    v.iter()
                        .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect())
                        .collect(),
                ),
                None,
            ),
            SeriesValues::Exact(v) => (
                JsonValues::Exact(v.iter().map(|x| x.to_string()).collect()),
                None,
            ),
            SeriesValues::Scaled { values, log_base } => {
                (JsonValues::Scaled(values.clone()), Some(*log_base))
            }
        };
        SeriesTableJson {
            kind: t.kind,
            q: t.q.clone(),
            mode: t.mode().to_string(),
            n_max: t.n_max(),
            log_base,
            values,
        }
    }
}

impl TryFrom<SeriesTableJson> for SeriesTable {
    type Error = Error;

    fn try_from(r: SeriesTableJson) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            what: "series table JSON",
            input: msg.to_string(),
        };
        let values = match (r.mode.as_str(), r.values) {
            ("exact-poly", JsonValues::Poly(v)) => SeriesValues::Poly(
                v.into_iter()
                    .map(|cs| {
                        cs.iter()
                            .map(|c| c.parse().map_err(|_| bad(c)))
                            .collect::<Result<Vec<_>>>()
                            .map(QPolynomial::new)
                    })
                    .collect::<Result<_>>()?,
            ),
            // an all-empty polynomial list deserializes as the first variant
            ("exact-poly", JsonValues::Exact(v)) if v.is_empty() => SeriesValues::Poly(Vec::new()),
            ("exact-eval", JsonValues::Exact(v)) => {
                SeriesValues::Exact(v.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?)
            }
            ("exact-eval", JsonValues::Poly(v)) if v.is_empty() => SeriesValues::Exact(Vec::new()),
            ("scaled-float", JsonValues::Scaled(values)) => SeriesValues::Scaled {
                values,
                log_base: r.log_base.ok_or_else(|| bad("missing log_base"))?,
            },
            ("scaled-float", JsonValues::Poly(v)) if v.is_empty() => SeriesValues::Scaled {
                values: Vec::new(),
                log_base: r.log_base.ok_or_else(|| bad("missing log_base"))?,
            },
            (mode, _) => return Err(bad(&format!("values do not match mode {mode}"))),
        };
        Ok(SeriesTable {
            kind: r.kind,
            q: r.q,
            values,
        })
    }
}

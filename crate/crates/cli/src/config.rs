use anyhow::{Context, Result};
use serde::Deserialize;

use fpbl_core::asymptotics::Regime;

const DEFAULTS: &str = include_str!("../config/tolerances.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct Tolerances {
    pub theorem: TheoremTolerances,
    pub lemma1: Lemma1Tolerances,
    pub monte_carlo: MonteCarloDefaults,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TheoremTolerances {
    pub poisson: f64,
    pub bernoulli_sum: f64,
    pub neg_bin: f64,
    pub rayleigh: f64,
    pub normal: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Lemma1Tolerances {
    pub subcritical: f64,
    pub critical: f64,
    pub supercritical: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MonteCarloDefaults {
    pub samples: u64,
}

impl Tolerances {
    pub fn load() -> Result<Self> {
        toml::from_str(DEFAULTS).context("parsing the bundled tolerances.toml")
    }

    /// Threshold for the limit law of `theorem` (1..=5).
    pub fn theorem(&self, theorem: u8) -> f64 {
        match theorem {
            1 => self.theorem.poisson,
            2 => self.theorem.bernoulli_sum,
            3 => self.theorem.neg_bin,
            4 => self.theorem.rayleigh,
            _ => self.theorem.normal,
        }
    }

    pub fn lemma1(&self, regime: Regime) -> f64 {
        match regime {
            Regime::Subcritical => self.lemma1.subcritical,
            Regime::Critical => self.lemma1.critical,
            Regime::Supercritical => self.lemma1.supercritical,
        }
    }
}

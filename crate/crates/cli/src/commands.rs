use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use fpbl_core::asymptotics::{convergence_table, limit_law, ConvergenceKind, Regime};
use fpbl_core::dist::{
    distances_csv, enumeration_counts, fp_pmf, fp_pmf_grid, DistanceRow, MeasureSpec, PmfMode,
};
use fpbl_core::perm::EnumerationCaps;
use fpbl_core::rational::{ln_rational, rational_to_f64};
use fpbl_core::sampling::{
    fp_count_pmf, sample_dump_csv, BiasedAvoiderSampler, BiasedUnrestrictedSampler, FpCountSampler,
    RandomSource, SampleRecord,
};
use fpbl_core::series::{fmt_f64, SeriesEngine};
use fpbl_core::Pattern3;

use crate::config::Tolerances;
use crate::table::Table;
use crate::{AsymKind, Emit, ExploreTable, Format, GlobalArgs, Mode};

/// A verdict printed on standard error.
pub struct Check {
    pub pass: bool,
    pub line: String,
}

/// What a command produced: the table text plus diagnostics for stderr.
pub struct Outcome {
    pub text: String,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Outcome {
    fn table(g: &GlobalArgs, table: Table) -> Self {
        Outcome::text(match g.format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        })
    }

    fn text(text: String) -> Self {
        Outcome {
            text,
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }
}

fn engine() -> Result<SeriesEngine> {
    SeriesEngine::from_env().context("reading FPBL_BUDGET")
}

fn tau_name(tau: Option<Pattern3>) -> &'static str {
    tau.map_or("none", Pattern3::name)
}

fn enumerable(n: usize, tau: Pattern3) -> Result<()> {
    let cap = EnumerationCaps::default().avoiders;
    if n > cap {
        bail!("tau = {tau} has no series; enumeration stops at n = {cap}, got n = {n}");
    }
    Ok(())
}

fn unsupported_mode(command: &str, mode: Mode, legal: &str) -> anyhow::Error {
    anyhow::anyhow!(
        "{command} has no {} mode; legal modes: {legal}",
        mode.name()
    )
}

/// `a_{k,n}` for one length.
pub fn count(g: &GlobalArgs, n: usize, tau: Option<Pattern3>) -> Result<Outcome> {
    let eng = engine()?;
    let mode = g.mode.unwrap_or(Mode::Exact);
    let (column, values, route): (&str, Vec<String>, &str) = match (mode, tau) {
        (Mode::Exact | Mode::Eval, Some(t)) if t.has_series() => {
            let cols = eng.column_series_exact(n, n)?;
            (
                "count",
                cols.row(n).iter().map(ToString::to_string).collect(),
                "series",
            )
        }
        (Mode::ScaledFloat, Some(t)) if t.has_series() => {
            let cols = eng.column_series_scaled(n, n)?;
            (
                "count_over_4_pow_n",
                cols.row(n).into_iter().map(fmt_f64).collect(),
                "scaled-float",
            )
        }
        (Mode::Exact | Mode::Eval, None) => {
            let (w, _) = eng.unrestricted_weights(&BigRational::one(), n)?;
            (
                "count",
                w.iter().map(ToString::to_string).collect(),
                "closed-form",
            )
        }
        (Mode::Exact | Mode::Eval, Some(t)) => {
            enumerable(n, t)?;
            let c = enumeration_counts(n, Some(t))?;
            (
                "count",
                c.iter().map(ToString::to_string).collect(),
                "enumeration",
            )
        }
        (m, _) => {
            return Err(unsupported_mode(
                "count",
                m,
                "exact for every pattern, scaled-float for 132, 321 and 213",
            ))
        }
    };
    let mut table = Table::new(&["k", column])
        .meta("n", n)
        .meta("tau", tau_name(tau))
        .meta("route", route);
    for (k, v) in values.into_iter().enumerate() {
        table.push(vec![k.to_string(), v]);
    }
    Ok(Outcome::table(g, table))
}

/// `Z_m` for every `m ≤ n`, as polynomials or at a fixed `q`.
pub fn zn(
    g: &GlobalArgs,
    n: usize,
    q: Option<BigRational>,
    tau: Option<Pattern3>,
) -> Result<Outcome> {
    let eng = engine()?;
    let mode = g.mode.unwrap_or(Mode::Exact);
    let tau_meta = tau_name(tau);
    let Some(q) = q else {
        if !matches!(mode, Mode::Exact) {
            bail!(
                "zn without --q emits exact polynomials; pass --q for the {} mode",
                mode.name()
            );
        }
        let mut table = Table::new(&["n", "k", "coefficient"]).meta("tau", tau_meta);
        let coeffs: Vec<Vec<String>> = match tau {
            Some(t) if t.has_series() => {
                let polys = eng.g_series_poly(n)?;
                let polys = polys.polys().expect("polynomial table");
                polys
                    .iter()
                    .enumerate()
                    .map(|(m, p)| (0..=m).map(|k| p.coeff(k).to_string()).collect())
                    .collect()
            }
            None => (0..=n)
                .map(|m| {
                    let (w, _) = eng.unrestricted_weights(&BigRational::one(), m)?;
                    Ok(w.iter().map(ToString::to_string).collect())
                })
                .collect::<Result<_>>()?,
            Some(t) => {
                enumerable(n, t)?;
                (0..=n)
                    .map(|m| {
                        Ok(enumeration_counts(m, Some(t))?
                            .iter()
                            .map(ToString::to_string)
                            .collect())
                    })
                    .collect::<Result<_>>()?
            }
        };
        for (m, row) in coeffs.into_iter().enumerate() {
            for (k, c) in row.into_iter().enumerate() {
                table.push(vec![m.to_string(), k.to_string(), c]);
            }
        }
        return Ok(Outcome::table(g, table));
    };
    let exact_values = |eng: &SeriesEngine| -> Result<Vec<BigRational>> {
        Ok(match tau {
            Some(t) if t.has_series() => eng
                .g_series_eval(&q, n)?
                .exact()
                .expect("exact table")
                .to_vec(),
            None => (0..=n)
                .map(|m| eng.unrestricted_z(&q, m))
                .collect::<fpbl_core::Result<_>>()?,
            Some(t) => {
                enumerable(n, t)?;
                (0..=n)
                    .map(|m| {
                        let counts = enumeration_counts(m, Some(t))?;
                        let mut z = BigRational::zero();
                        let mut power = BigRational::one();
                        for c in counts {
                            z += BigRational::from_integer(c.into()) * &power;
                            power *= &q;
                        }
                        Ok(z)
                    })
                    .collect::<Result<_>>()?
            }
        })
    };
    let table = match mode {
        Mode::Exact | Mode::Eval => {
            let mut table = Table::new(&["n", "value", "ln_value"])
                .meta("q", &q)
                .meta("tau", tau_meta);
            for (m, z) in exact_values(&eng)?.iter().enumerate() {
                table.push(vec![m.to_string(), z.to_string(), fmt_f64(ln_rational(z))]);
            }
            table
        }
        Mode::ScaledFloat => {
            let ln: Vec<f64> = match tau {
                Some(t) if t.has_series() => {
                    let s = eng.g_series_scaled(rational_to_f64(&q), n)?;
                    (0..=n).map(|m| s.ln_value(m).expect("in range")).collect()
                }
                _ => exact_values(&eng)?.iter().map(ln_rational).collect(),
            };
            let mut table = Table::new(&["n", "ln_value"])
                .meta("q", &q)
                .meta("tau", tau_meta);
            for (m, v) in ln.into_iter().enumerate() {
                table.push(vec![m.to_string(), fmt_f64(v)]);
            }
            table
        }
        Mode::MonteCarlo => return Err(unsupported_mode("zn", mode, "exact, eval, scaled-float")),
    };
    Ok(Outcome::table(g, table))
}

fn pmf_mode(g: &GlobalArgs, mode: Mode, samples: Option<u64>) -> Result<PmfMode> {
    Ok(match mode {
        Mode::Exact | Mode::Eval => PmfMode::Exact,
        Mode::ScaledFloat => PmfMode::ScaledFloat,
        Mode::MonteCarlo => PmfMode::MonteCarlo {
            samples: match samples {
                Some(s) => s,
                None => Tolerances::load()?.monte_carlo.samples,
            },
            seed: g.seed,
            stream_id: g.stream,
        },
    })
}

/// The fixed-point law of one biased measure.
pub fn pmf(
    g: &GlobalArgs,
    n: usize,
    q: BigRational,
    tau: Option<Pattern3>,
    samples: Option<u64>,
) -> Result<Outcome> {
    let eng = engine()?;
    let mode = pmf_mode(g, g.mode.unwrap_or(Mode::Exact), samples)?;
    let spec = MeasureSpec::new(n, q, tau)?;
    let pmf = fp_pmf(&eng, &spec, mode)?;
    Ok(Outcome::text(match g.format {
        Format::Csv => pmf.to_csv(),
        Format::Json => pmf.to_json(),
    }))
}

/// Seeded draws of fixed-point counts or whole permutations.
pub fn sample(
    g: &GlobalArgs,
    n: usize,
    q: BigRational,
    tau: Option<Pattern3>,
    count: u64,
    emit: Emit,
) -> Result<Outcome> {
    if let Some(mode) = g.mode {
        bail!(
            "sample always draws exactly; --mode {} does not apply",
            mode.name()
        );
    }
    let eng = engine()?;
    let spec = MeasureSpec::new(n, q.clone(), tau)?;
    let source = RandomSource::new(g.seed, g.stream);
    let mut rng = source.clone();
    let mut records = Vec::with_capacity(count as usize);
    let record = |index, permutation: Option<fpbl_core::Permutation>, fp| SampleRecord {
        index,
        fixed_points: fp,
        permutation,
    };
    match (tau, emit) {
        (None, _) => {
            let mut s = BiasedUnrestrictedSampler::new(n, &q)?;
            for i in 0..count {
                records.push(match emit {
                    Emit::Fp => record(i, None, s.sample_fixed_points(&mut rng)),
                    Emit::Perm => {
                        let p = s.sample(&mut rng);
                        let fp = p.fixed_points();
                        record(i, Some(p), fp)
                    }
                });
            }
        }
        (Some(t), Emit::Fp) if t.has_series() => {
            let s = FpCountSampler::new(&fp_count_pmf(&eng, n, &q, t)?);
            for i in 0..count {
                records.push(record(i, None, s.sample(&mut rng)));
            }
        }
        (Some(_), _) => {
            let mut s = BiasedAvoiderSampler::new(n, &q, tau)?;
            for i in 0..count {
                let p = s.sample(&mut rng);
                let fp = p.fixed_points();
                records.push(record(i, (emit == Emit::Perm).then_some(p), fp));
            }
        }
    }
    let text = match g.format {
        Format::Csv => sample_dump_csv(&source, &spec, &records),
        Format::Json => {
            let with_perm = emit == Emit::Perm;
            let columns: &[&str] = if with_perm {
                &["sample_index", "fp", "permutation"]
            } else {
                &["sample_index", "fp"]
            };
            let mut table = Table::new(columns)
                .meta("seed", g.seed)
                .meta("stream_id", g.stream)
                .meta("n", n)
                .meta("q", &q)
                .meta("tau", tau_name(tau));
            for r in &records {
                let mut row = vec![r.index.to_string(), r.fixed_points.to_string()];
                if with_perm {
                    row.push(
                        r.permutation
                            .as_ref()
                            .map(ToString::to_string)
                            .unwrap_or_default(),
                    );
                }
                table.push(row);
            }
            table.to_json()
        }
    };
    Ok(Outcome::text(text))
}

fn default_theorem_mode(theorem: u8) -> Mode {
    match theorem {
        1 => Mode::Exact,
        2 => Mode::MonteCarlo,
        _ => Mode::ScaledFloat,
    }
}

fn monotone_note(values: &[f64]) -> Option<String> {
    (values.len() > 1).then(|| {
        let monotone = values.windows(2).all(|w| w[1] <= w[0]);
        format!("monotone={monotone}")
    })
}

/// Distances to the limit law of a theorem, judged against a tolerance.
pub fn verify_theorem(
    g: &GlobalArgs,
    theorem: u8,
    q: BigRational,
    ns: &[usize],
    samples: Option<u64>,
    tolerance: Option<f64>,
) -> Result<Outcome> {
    let eng = engine()?;
    let tol = match tolerance {
        Some(t) => t,
        None => Tolerances::load()?.theorem(theorem),
    };
    let spec = limit_law(theorem, &q)?;
    let mode = pmf_mode(g, g.mode.unwrap_or(default_theorem_mode(theorem)), samples)?;
    let pmfs = fp_pmf_grid(&eng, &q, spec.tau, ns, mode)?;
    let law = spec.law.to_string();
    let mut rows = Vec::with_capacity(pmfs.len());
    let mut checks = Vec::with_capacity(pmfs.len());
    for pmf in &pmfs {
        let d = spec.distance(pmf)?;
        let pass = d < tol;
        checks.push(Check {
            pass,
            line: format!(
                "{} theorem={theorem} q={q} n={} metric={} distance={} tolerance={}",
                if pass { "PASS" } else { "FAIL" },
                pmf.n(),
                spec.metric(),
                fmt_f64(d),
                fmt_f64(tol)
            ),
        });
        rows.push(DistanceRow {
            n: pmf.n(),
            q: q.to_string(),
            tau: spec.tau.map(|t| t.name().to_string()),
            law: law.clone(),
            distance: d,
            mode: pmf.mode().to_string(),
        });
    }
    let text = match g.format {
        Format::Csv => distances_csv(&rows),
        Format::Json => {
            let mut table = Table::new(&["n", "q", "tau", "law", "distance", "mode"])
                .meta("theorem", theorem)
                .meta("metric", spec.metric());
            for r in &rows {
                table.push(vec![
                    r.n.to_string(),
                    r.q.clone(),
                    r.tau.clone().unwrap_or_else(|| "none".into()),
                    r.law.clone(),
                    fmt_f64(r.distance),
                    r.mode.clone(),
                ]);
            }
            table.to_json()
        }
    };
    let distances: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    Ok(Outcome {
        text,
        notes: monotone_note(&distances).into_iter().collect(),
        checks,
    })
}

fn convergence_output(g: &GlobalArgs, table: &fpbl_core::asymptotics::ConvergenceTable) -> String {
    match g.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut t = Table::new(&["n", "exact", "predicted", "ratio"]);
            for r in &table.rows {
                t.push(vec![
                    r.n.to_string(),
                    fmt_f64(r.exact),
                    fmt_f64(r.predicted),
                    fmt_f64(r.ratio),
                ]);
            }
            t.to_json()
        }
    }
}

/// `Z_n(q, 321)` against its asymptotic form, judged per regime.
pub fn verify_lemma1(
    g: &GlobalArgs,
    q: BigRational,
    ns: &[usize],
    tolerance: Option<f64>,
) -> Result<Outcome> {
    if let Some(mode) = g.mode.filter(|m| !matches!(m, Mode::Exact)) {
        bail!(
            "lemma1 is checked exactly; --mode {} does not apply",
            mode.name()
        );
    }
    let eng = engine()?;
    let regime = Regime::of(&q);
    let tol = match tolerance {
        Some(t) => t,
        None => Tolerances::load()?.lemma1(regime),
    };
    let table = convergence_table(&eng, ConvergenceKind::Lemma1 { q: q.clone() }, ns)?;
    let checks = table
        .rows
        .iter()
        .map(|r| {
            let err = (r.ratio - 1.0).abs();
            let pass = err <= tol;
            Check {
                pass,
                line: format!(
                    "{} lemma1 regime={} q={q} n={} ratio={} tolerance={}",
                    if pass { "PASS" } else { "FAIL" },
                    regime.name(),
                    r.n,
                    fmt_f64(r.ratio),
                    fmt_f64(tol)
                ),
            }
        })
        .collect();
    Ok(Outcome {
        text: convergence_output(g, &table),
        notes: vec![format!("monotone={}", table.monotone())],
        checks,
    })
}

/// Convergence tables; monotonicity is reported, not judged.
pub fn asym(
    g: &GlobalArgs,
    kind: AsymKind,
    q: BigRational,
    m: u32,
    theorem: Option<u8>,
    ns: &[usize],
) -> Result<Outcome> {
    let eng = engine()?;
    let kind = match kind {
        AsymKind::Lemma1 => ConvergenceKind::Lemma1 { q },
        AsymKind::Moments => ConvergenceKind::Moments { q, m },
        AsymKind::Distance => {
            let Some(theorem) = theorem else {
                bail!("--kind distance needs --theorem");
            };
            let mode = pmf_mode(g, g.mode.unwrap_or(default_theorem_mode(theorem)), None)?;
            ConvergenceKind::Distance { theorem, q, mode }
        }
    };
    let table = convergence_table(&eng, kind, ns)?;
    Ok(Outcome {
        text: convergence_output(g, &table),
        notes: vec![format!("monotone={}", table.monotone())],
        checks: Vec::new(),
    })
}

/// Brute-force laws for every length up to `n_max`.
pub fn explore(
    g: &GlobalArgs,
    tau: Pattern3,
    n_max: usize,
    qs: &[BigRational],
    kind: ExploreTable,
) -> Result<Outcome> {
    if let Some(mode) = g.mode.filter(|m| !matches!(m, Mode::Exact)) {
        bail!(
            "explore enumerates exactly; --mode {} does not apply",
            mode.name()
        );
    }
    enumerable(n_max, tau)?;
    let counts: Vec<Vec<BigUint>> = (0..=n_max)
        .map(|n| enumeration_counts(n, Some(tau)))
        .collect::<fpbl_core::Result<_>>()?;
    let mut table = match kind {
        ExploreTable::Moments => Table::new(&["n", "q", "mean", "variance", "mean_exact"]),
        ExploreTable::Pmf => Table::new(&["n", "q", "k", "probability"]),
    }
    .meta("tau", tau);
    for q in qs {
        for (n, c) in counts.iter().enumerate().skip(1) {
            let weights: Vec<BigRational> = c
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    BigRational::from_integer(x.clone().into()) * num_traits::pow(q.clone(), k)
                })
                .collect();
            let z: BigRational = weights.iter().sum();
            let probs: Vec<BigRational> = weights.iter().map(|w| w / &z).collect();
            match kind {
                ExploreTable::Moments => {
                    let k_of = |k: usize| BigRational::from_integer(k.into());
                    let mean: BigRational =
                        probs.iter().enumerate().map(|(k, p)| p * k_of(k)).sum();
                    let second: BigRational = probs
                        .iter()
                        .enumerate()
                        .map(|(k, p)| p * k_of(k) * k_of(k))
                        .sum();
                    let variance = second - &mean * &mean;
                    table.push(vec![
                        n.to_string(),
                        q.to_string(),
                        fmt_f64(rational_to_f64(&mean)),
                        fmt_f64(rational_to_f64(&variance)),
                        mean.to_string(),
                    ]);
                }
                ExploreTable::Pmf => {
                    for (k, p) in probs.iter().enumerate() {
                        table.push(vec![
                            n.to_string(),
                            q.to_string(),
                            k.to_string(),
                            p.to_string(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(Outcome::table(g, table))
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use fpbl_core::asymptotics::limit_law;
use fpbl_core::dist::{
    distances_csv, fp_pmf, kolmogorov_distance, tv_distance, DistanceRow, FixedPointPmf,
    MeasureSpec, MomentKind, MomentValue, PmfMode, ReferenceLaw,
};
use fpbl_core::rational::rational_from_u64;
use fpbl_core::series::SeriesEngine;
use fpbl_core::Pattern3;

fn q(a: u64, b: u64) -> BigRational {
    rational_from_u64(a, b)
}

fn exact(n: usize, qv: BigRational, tau: Option<Pattern3>) -> FixedPointPmf {
    let spec = MeasureSpec::new(n, qv, tau).unwrap();
    fp_pmf(&SeriesEngine::default(), &spec, PmfMode::Exact).unwrap()
}

fn probs(p: &FixedPointPmf) -> Vec<BigRational> {
    p.exact().unwrap().to_vec()
}

fn tau_strategy() -> impl Strategy<Value = Option<Pattern3>> {
    prop_oneof![
        Just(None),
        proptest::sample::select(Pattern3::ALL.to_vec()).prop_map(Some)
    ]
}

#[test]
fn pmf_examples() {
    assert_eq!(
        probs(&exact(3, q(1, 1), Some(Pattern3::P321))),
        [q(2, 5), q(2, 5), q(0, 1), q(1, 5)]
    );
    assert_eq!(
        probs(&exact(3, q(2, 1), Some(Pattern3::P321))),
        [q(1, 7), q(2, 7), q(0, 1), q(4, 7)]
    );
    assert_eq!(
        probs(&exact(2, q(5, 1), None)),
        [q(1, 26), q(0, 1), q(25, 26)]
    );
}

#[test]
fn law_examples() {
    let b = ReferenceLaw::bernoulli_sum(q(1, 4)).unwrap();
    let got: Vec<_> = (0..3).map(|k| b.pmf_exact(k).unwrap()).collect();
    assert_eq!(got, [q(9, 16), q(6, 16), q(1, 16)]);
    let nb = ReferenceLaw::neg_bin(2, q(1, 3)).unwrap();
    assert_eq!(nb.pmf_exact(0).unwrap(), q(1, 9));
    assert_eq!(nb.pmf_exact(1).unwrap(), q(4, 27));
    for k in 0..20u32 {
        let want = q(u64::from(k) + 1, 9) * num_traits::pow(q(2, 3), k as usize);
        assert_eq!(nb.pmf_exact(k as usize).unwrap(), want);
    }
    assert_eq!(ReferenceLaw::rayleigh(2.0).unwrap().cdf(0.0), 0.0);
    assert!(ReferenceLaw::poisson(0.0).is_err());
    assert!(ReferenceLaw::bernoulli_sum(q(3, 2)).is_err());
    assert!(ReferenceLaw::rayleigh(-1.0).is_err());
}

#[test]
fn distance_examples() {
    let law = ReferenceLaw::neg_bin(2, q(2, 3)).unwrap();
    let d: Vec<f64> = (8..=11)
        .map(|n| tv_distance(&exact(n, q(1, 1), Some(Pattern3::P321)), &law).unwrap())
        .collect();
    assert!(d[0] > 0.0 && d[0] < 0.2, "{d:?}");
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    let p200 = exact(200, q(2, 1), None);
    assert!(tv_distance(&p200, &ReferenceLaw::poisson(2.0).unwrap()).unwrap() < 0.01);
    assert!((p200.mean().to_f64() - 2.0).abs() < 0.02);

    let eng = SeriesEngine::default();
    let spec = MeasureSpec::new(1000, q(3, 1), Some(Pattern3::P321)).unwrap();
    let p = fp_pmf(&eng, &spec, PmfMode::ScaledFloat).unwrap();
    let ray = ReferenceLaw::rayleigh(3.0 / 2f64.sqrt()).unwrap();
    assert!(kolmogorov_distance(&p, &ray, 0.0, 1000f64.sqrt()).unwrap() < 0.08);
    let spec = MeasureSpec::new(2000, q(4, 1), Some(Pattern3::P321)).unwrap();
    let p = fp_pmf(&eng, &spec, PmfMode::ScaledFloat).unwrap();
    let (mu, s2) = (2.0 / 3.0 * 2000.0, 10.0 / 9.0 * 2000.0f64);
    let d = kolmogorov_distance(&p, &ReferenceLaw::standard_normal(), mu, s2.sqrt()).unwrap();
    assert!(d < 0.05, "{d}");
    let spec5 = limit_law(5, &q(4, 1)).unwrap();
    assert!((spec5.center(2000) - mu).abs() < 1e-9);
    assert!((spec5.scale(2000) - s2.sqrt()).abs() < 1e-9);
}

#[test]
fn moment_examples() {
    let p = exact(3, q(1, 1), Some(Pattern3::P321));
    assert_eq!(
        p.moment(1, MomentKind::Raw).unwrap(),
        MomentValue::Exact(BigRational::one())
    );
    let spec = MeasureSpec::uniform(2, None);
    let b = FixedPointPmf::from_integer_weights(
        spec,
        vec![9u32.into(), 6u32.into(), 1u32.into()],
        fpbl_core::dist::Provenance::Series,
    )
    .unwrap();
    assert_eq!(
        b.moment(2, MomentKind::Factorial).unwrap(),
        MomentValue::Exact(q(1, 8))
    );
}

#[test]
fn enumeration_supports_123_bound() {
    for n in 3..=12 {
        let p = exact(n, q(5, 2), Some(Pattern3::P123));
        assert_eq!(p.support_max(), if n == 3 { 1 } else { 2 }, "n={n}");
    }
}

#[test]
fn refusals_name_alternatives() {
    let eng = SeriesEngine::default();
    let spec = MeasureSpec::new(13, q(2, 1), Some(Pattern3::P231)).unwrap();
    let e = fp_pmf(&eng, &spec, PmfMode::Exact).unwrap_err().to_string();
    assert!(e.contains("12"), "{e}");
    let mc = PmfMode::MonteCarlo {
        samples: 10,
        seed: 1,
        stream_id: 0,
    };
    assert!(fp_pmf(&eng, &MeasureSpec::uniform(20, Some(Pattern3::P312)), mc).is_err());
    assert!(MeasureSpec::new(5, BigRational::zero(), None).is_err());
}

#[test]
fn distances_csv_format() {
    let rows = vec![DistanceRow {
        n: 10,
        q: "1/2".into(),
        tau: None,
        law: "Poisson(0.5)".into(),
        distance: 0.25,
        mode: "exact".into(),
    }];
    assert_eq!(
        distances_csv(&rows),
        "n,q,tau,law,distance,mode\n10,1/2,none,Poisson(0.5),0.25,exact\n"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_pmf_invariants(n in 0usize..=10, a in 1u64..9, b in 1u64..9, tau in tau_strategy()) {
        let p = exact(n, q(a, b), tau);
        let v = probs(&p);
        prop_assert_eq!(v.len(), n + 1);
        prop_assert_eq!(v.iter().fold(BigRational::zero(), |s, x| s + x), BigRational::one());
        prop_assert!(v.iter().all(|x| x >= &BigRational::zero()));
        if n >= 2 {
            prop_assert!(v[n - 1].is_zero());
        }
    }

    #[test]
    fn reweighting_moves_between_biases(n in 0usize..=10, a in 1u64..6, b in 1u64..6, c in 1u64..6, d in 1u64..6, tau in tau_strategy()) {
        let moved = exact(n, q(a, b), tau).reweight(&q(c, d)).unwrap();
        prop_assert_eq!(moved, exact(n, q(c, d), tau));
    }

    #[test]
    fn factorial_moments_via_pgf_derivatives(n in 0usize..=9, a in 1u64..6, b in 1u64..6, tau in tau_strategy()) {
        let p = exact(n, q(a, b), tau);
        let v = probs(&p);
        for m in 1..=3u32 {
            let direct = v.iter().enumerate().fold(BigRational::zero(), |s, (k, x)| {
                let ff: i64 = (0..m as i64).map(|i| k as i64 - i).product();
                s + x * BigRational::from_integer(BigInt::from(ff))
            });
            prop_assert_eq!(p.moment(m, MomentKind::Factorial).unwrap(), MomentValue::Exact(direct));
        }
    }

    #[test]
    fn scaled_float_tracks_exact(n in 1usize..=150, a in 1u64..12, b in 1u64..4) {
        let eng = SeriesEngine::default();
        let spec = MeasureSpec::new(n, q(a, b), Some(Pattern3::P321)).unwrap();
        let e = fp_pmf(&eng, &spec, PmfMode::Exact).unwrap();
        let f = fp_pmf(&eng, &spec, PmfMode::ScaledFloat).unwrap();
        prop_assert!((f.total_f64() - 1.0).abs() <= 1e-12);
        for k in 0..=n {
            prop_assert!((e.prob(k) - f.prob(k)).abs() <= 1e-10, "k={}", k);
        }
    }

    #[test]
    fn json_round_trips(n in 0usize..=40, a in 1u64..9, b in 1u64..9) {
        let p = exact(n, q(a, b), Some(Pattern3::P132));
        let text = p.to_json();
        let back = FixedPointPmf::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, p);
    }
}

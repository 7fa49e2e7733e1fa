use std::collections::HashSet;

use proptest::prelude::*;

use fpbl_core::numbers::catalan_by_convolution;
use fpbl_core::perm::{contains_pattern, enumerate_avoiders, AvoiderIter, EnumerationCaps};
use fpbl_core::{Pattern3, Permutation};

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_len)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn avoids_is_not_contains(sigma in permutation(8)) {
        for tau in Pattern3::ALL {
            let naive = contains_pattern(sigma.entries(), tau.as_permutation().entries());
            prop_assert_eq!(sigma.avoids(tau), !naive, "{} vs {}", sigma, tau);
        }
    }

    #[test]
    fn symmetries_preserving_fixed_points(sigma in permutation(8)) {
        prop_assert_eq!(sigma.inverse().fixed_points(), sigma.fixed_points());
        prop_assert_eq!(sigma.reverse_complement().fixed_points(), sigma.fixed_points());
        prop_assert_eq!(sigma.inverse().inverse(), sigma.clone());
        prop_assert_eq!(sigma.compose(&sigma.inverse()).unwrap(), Permutation::identity(sigma.len()));
    }

    #[test]
    fn entries_are_a_bijection(sigma in permutation(12)) {
        let mut sorted = sigma.entries().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=sigma.len() as u32).collect::<Vec<_>>());
        prop_assert!(sigma.fixed_points() <= sigma.len());
    }

    #[test]
    fn display_round_trips(sigma in permutation(12)) {
        prop_assert_eq!(sigma.to_string().parse::<Permutation>().unwrap(), sigma);
    }
}

#[test]
fn avoids_matches_naive_oracle_exhaustively() {
    for n in 0..=8 {
        for sigma in enumerate_avoiders(n, None).unwrap() {
            for tau in Pattern3::ALL {
                let naive = contains_pattern(sigma.entries(), tau.as_permutation().entries());
                assert_eq!(sigma.avoids(tau), !naive, "{sigma} vs {tau}");
            }
        }
    }
}

#[test]
fn avoider_counts_are_catalan() {
    let catalan = catalan_by_convolution(10);
    for tau in Pattern3::ALL {
        for (n, c) in catalan.iter().enumerate() {
            let count = enumerate_avoiders(n, Some(tau)).unwrap().count();
            assert_eq!(
                count,
                c.to_string().parse::<usize>().unwrap(),
                "n={n} tau={tau}"
            );
        }
    }
}

#[test]
fn symmetries_map_classes() {
    for n in 0..=8 {
        let set = |tau| {
            enumerate_avoiders(n, Some(tau))
                .unwrap()
                .collect::<HashSet<_>>()
        };
        let (s132, s213, s321) = (
            set(Pattern3::P132),
            set(Pattern3::P213),
            set(Pattern3::P321),
        );
        let mapped: HashSet<_> = s132.iter().map(Permutation::reverse_complement).collect();
        assert_eq!(mapped, s213, "n={n}");
        let inverted: HashSet<_> = s321.iter().map(Permutation::inverse).collect();
        assert_eq!(inverted, s321, "n={n}");
    }
}

#[test]
fn avoiders_of_123_have_at_most_two_fixed_points() {
    for n in 3..=10 {
        let max = enumerate_avoiders(n, Some(Pattern3::P123))
            .unwrap()
            .map(|p| p.fixed_points())
            .max();
        assert_eq!(max, Some(if n == 3 { 1 } else { 2 }), "n={n}");
    }
}

#[test]
fn examples() {
    let p = |s: &str| s.parse::<Permutation>().unwrap();
    assert_eq!(p("1 2 3").fixed_points(), 3);
    assert_eq!(p("2 3 1").fixed_points(), 0);
    assert_eq!(p("1 3 2").fixed_points(), 1);
    assert!(p("3 1 2 4 5").contains(&p("2 1 3")));
    assert!(!p("5 3 4 2 1").contains(&p("2 1 3")));
    assert!(!p("1 2").contains(&p("3 2 1")));
    assert!(p("1 2 3 4").avoids(Pattern3::P321));
    assert!(p("4 3 2 1").avoids(Pattern3::P123));
    assert!(!p("2 4 1 3").avoids(Pattern3::P231));
    assert_eq!(
        enumerate_avoiders(3, Some(Pattern3::P321)).unwrap().count(),
        5
    );
    assert_eq!(enumerate_avoiders(3, None).unwrap().count(), 6);
    assert_eq!(
        enumerate_avoiders(4, Some(Pattern3::P132)).unwrap().count(),
        14
    );
    assert_eq!(p("1 3 2").reverse(), p("2 3 1"));
    assert_eq!(p("2 4 1 3").inverse(), p("3 1 4 2"));
    let s = p("1 3 2 5 4");
    assert_eq!(s.reverse_complement().fixed_points(), 1);
    assert_eq!(s.fixed_points(), 1);
}

#[test]
fn enumeration_caps_refuse() {
    let err = enumerate_avoiders(13, Some(Pattern3::P321)).unwrap_err();
    assert!(err.to_string().contains("12"), "{err}");
    assert!(enumerate_avoiders(11, None).is_err());
    let caps = EnumerationCaps {
        avoiders: 5,
        unrestricted: 4,
    };
    assert!(AvoiderIter::with_caps(6, Some(Pattern3::P123), caps).is_err());
    assert_eq!(AvoiderIter::with_caps(4, None, caps).unwrap().count(), 24);
}

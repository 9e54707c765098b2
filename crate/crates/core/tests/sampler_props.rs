use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use thincubic::arith::q;
use thincubic::averages::{DiscSign, FamilySpec, LocalCondition};
use thincubic::forms::height;
use thincubic::local::{self, RamSide};
use thincubic::orbits;
use thincubic::poly::{count_real_roots, QPoly};
use thincubic::sampler::*;
use thincubic::{BinaryCubicForm, HeightKind};

fn spec(a: i64, d: i64, sign: DiscSign) -> FamilySpec {
    FamilySpec::maximal(a, d, sign).unwrap()
}

fn keys(s: &FamilySample) -> Vec<[i64; 4]> {
    s.forms.iter().map(|f| f.coeffs).collect()
}

/// Independent scan: c outer, b inner, full factorization of the discriminant.
fn slow_scan(sp: &FamilySpec, x: i64, kind: HeightKind) -> BTreeSet<[i64; 4]> {
    let xq = q(x, 1);
    let mut out = BTreeSet::new();
    let cr = match kind {
        HeightKind::Balanced => x,
        HeightKind::Weighted => x * x,
    };
    for c in -cr..=cr {
        for b in -x..=x {
            let f = BinaryCubicForm::new(sp.a, b, c, sp.d);
            if !height(&f, kind).less_than(&xq) {
                continue;
            }
            let disc = f.disc();
            if disc == 0.into() {
                continue;
            }
            let sign = if disc.is_positive() {
                DiscSign::Positive
            } else {
                DiscSign::Negative
            };
            if sign == sp.sign && local::is_maximal(&f).unwrap() {
                out.insert([sp.a, b, c, sp.d]);
            }
        }
    }
    out
}

#[test]
fn exhaustive_scan_matches_independent_scan() {
    for (a, d, sign, x, kind) in [
        (1, 1, DiscSign::Negative, 10, HeightKind::Balanced),
        (1, 1, DiscSign::Positive, 10, HeightKind::Balanced),
        (2, 9, DiscSign::Negative, 8, HeightKind::Balanced),
        (4, 3, DiscSign::Positive, 4, HeightKind::Weighted),
        (-12, 5, DiscSign::Negative, 4, HeightKind::Weighted),
    ] {
        let sp = spec(a, d, sign);
        let s = enumerate_family(&sp, x as f64, kind, SampleOptions::default()).unwrap();
        let listed: BTreeSet<_> = keys(&s).into_iter().collect();
        assert_eq!(listed.len(), s.forms.len(), "duplicates for {a},{d}");
        assert_eq!(listed, slow_scan(&sp, x, kind), "{a},{d},{sign:?},{kind:?}");
        assert_eq!(s.stats.maximal as usize, s.forms.len());
    }
}

#[test]
fn squarefree_discriminants_are_always_listed() {
    let sp = spec(1, 1, DiscSign::Negative);
    let s = enumerate_family(&sp, 10.0, HeightKind::Balanced, SampleOptions::default()).unwrap();
    let listed: BTreeSet<_> = keys(&s).into_iter().collect();
    for b in -9..=9 {
        for c in -9..=9 {
            let f = BinaryCubicForm::new(1, b, c, 1);
            let disc = f.disc();
            if disc.is_negative()
                && thincubic::forms::squarefree_split(&disc).unwrap().m == 1.into()
            {
                assert!(listed.contains(&[1, b, c, 1]), "({b},{c}) missing");
            }
        }
    }
}

#[test]
fn listed_forms_respect_height_and_order() {
    let sp = spec(3, -2, DiscSign::Positive);
    for (x, kind) in [
        (7.5, HeightKind::Balanced),
        (5.0, HeightKind::Weighted),
        (2.2, HeightKind::Weighted),
    ] {
        let s = enumerate_family(&sp, x, kind, SampleOptions::default()).unwrap();
        let xq = thincubic::arith::f64_to_q(x);
        let mut prev: Option<(i64, i64)> = None;
        for f in &s.forms {
            assert!(height(&f.form(), kind).less_than(&xq));
            assert!(f.disc.is_positive());
            let key = (f.coeffs[1], f.coeffs[2]);
            assert!(prev.map_or(true, |p| p < key));
            prev = Some(key);
        }
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let sp = spec(2, 3, DiscSign::Negative);
    let run = |n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap();
        pool.install(|| {
            let e = enumerate_family(
                &sp,
                40.0,
                HeightKind::Balanced,
                SampleOptions { with_delta: true },
            )
            .unwrap();
            let r = sample_family(
                &sp,
                100.0,
                HeightKind::Weighted,
                10_000,
                7,
                SampleOptions::default(),
            )
            .unwrap();
            (keys(&e), e.stats, keys(&r), r.stats)
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn real_root_counts_follow_the_sign() {
    for (a, d) in [(1, 1), (2, -3), (-5, 7)] {
        for sign in [DiscSign::Positive, DiscSign::Negative] {
            let s = enumerate_family(
                &spec(a, d, sign),
                9.0,
                HeightKind::Balanced,
                SampleOptions::default(),
            )
            .unwrap();
            assert!(!s.forms.is_empty());
            for f in &s.forms {
                let [a, b, c, d] = f.coeffs;
                let n = count_real_roots(&QPoly::from_ints(&[d, c, b, a]));
                let want = if sign == DiscSign::Positive { 3 } else { 1 };
                assert_eq!(n, want, "{:?}", f.coeffs);
            }
        }
    }
}

#[test]
fn selmer_and_residue_filters_are_exact() {
    let sp = FamilySpec::selmer(-7, DiscSign::Negative).unwrap();
    let s = enumerate_family(&sp, 60.0, HeightKind::Balanced, SampleOptions::default()).unwrap();
    assert!(!s.forms.is_empty());
    for f in &s.forms {
        assert_eq!(f.coeffs.map(|x| x.rem_euclid(8)), [1, 1, 0, 1]);
    }

    let mut sp = spec(1, 2, DiscSign::Negative);
    sp.local_conditions.insert(
        5,
        LocalCondition::ExplicitResidues {
            exponent: 1,
            residues: vec![(0, 1), (2, 3)],
        },
    );
    let s = enumerate_family(&sp, 30.0, HeightKind::Balanced, SampleOptions::default()).unwrap();
    assert!(!s.forms.is_empty());
    for f in &s.forms {
        let key = (f.coeffs[1].rem_euclid(5), f.coeffs[2].rem_euclid(5));
        assert!(key == (0, 1) || key == (2, 3));
        assert!(local::is_maximal(&f.form()).unwrap());
    }
}

#[test]
fn maximal_fraction_matches_euler_product() {
    let target = maximal_euler_product(1, 1, 10_000)
        .unwrap()
        .to_f64()
        .unwrap();
    let head = maximal_euler_product(1, 1, 50).unwrap().to_f64().unwrap();
    // the tail beyond 50 is at most Σ_{p>50} p⁻²
    assert!(head - target > 0.0 && head - target < 0.004);
    let sp = spec(1, 1, DiscSign::Positive);
    let s = sample_family(
        &sp,
        1e3,
        HeightKind::Balanced,
        60_000,
        1,
        SampleOptions::default(),
    )
    .unwrap();
    let est = DensityEstimate::new(s.stats.maximal, s.stats.in_sign);
    assert!(est.within(target, 3.0), "{est:?} vs {target}");
}

#[test]
fn ramified_fractions_match_local_densities() {
    assert_eq!(
        local::ram_density(2, 2, 1, RamSide::ASide).unwrap(),
        q(3, 7)
    );
    let cases = [
        (2, 1, RamSide::ASide, 2),
        (1, 3, RamSide::DSide, 3),
        (5, 2, RamSide::DSide, 2),
    ];
    for (i, (a, d, side, p)) in cases.into_iter().enumerate() {
        let target = local::ram_density(p, a, d, side).unwrap().to_f64().unwrap();
        let s = sample_family(
            &spec(a, d, DiscSign::Positive),
            1e3,
            HeightKind::Balanced,
            40_000,
            10 + i as u64,
            SampleOptions::default(),
        )
        .unwrap();
        let hits = match side {
            RamSide::ASide => s.stats.a_side_ram,
            RamSide::DSide => s.stats.d_side_ram,
        };
        let est = DensityEstimate::new(hits, s.stats.maximal);
        assert!(est.within(target, 3.0), "{a},{d}: {est:?} vs {target}");
    }
}

#[test]
fn delta_densities() {
    for (a, d, target, seed) in [(1, 1, 3.0 / 14.0, 3), (2, 2, 0.0, 4), (1, 4, 1.0 / 6.0, 5)] {
        let est = sampled_delta_density(
            &spec(a, d, DiscSign::Positive),
            1e3,
            HeightKind::Balanced,
            40_000,
            seed,
        )
        .unwrap();
        assert!(est.trials > 5_000, "{a},{d}: {est:?}");
        assert!(est.within(target, 3.0), "{a},{d}: {est:?} vs {target}");
    }
    let est = empirical_delta_density(&spec(1, 1, DiscSign::Positive), 60.0, HeightKind::Balanced)
        .unwrap();
    assert!(est.within(3.0 / 14.0, 3.0), "{est:?}");
}

#[test]
fn delta_flag_agrees_with_full_search() {
    for (a, d) in [(1, 1), (1, 4), (3, 5), (2, 9)] {
        let s = enumerate_family(
            &spec(a, d, DiscSign::Negative),
            6.0,
            HeightKind::Balanced,
            SampleOptions { with_delta: true },
        )
        .unwrap();
        for f in &s.forms {
            let full = orbits::delta_dist_integral_w(&f.form()).unwrap();
            assert_eq!(f.delta, Some(full.exists), "{:?}", f.coeffs);
        }
    }
}

#[test]
fn sample_sizes_grow_like_box_volume() {
    let cases = [
        (HeightKind::Balanced, 60.0, 4.0, DiscSign::Positive),
        (HeightKind::Weighted, 12.0, 8.0, DiscSign::Positive),
        (HeightKind::Weighted, 12.0, 8.0, DiscSign::Negative),
    ];
    for (kind, x, factor, sign) in cases {
        let sp = spec(1, 2, sign);
        let n1 = enumerate_family(&sp, x, kind, SampleOptions::default())
            .unwrap()
            .stats
            .maximal as f64;
        let n2 = enumerate_family(&sp, 2.0 * x, kind, SampleOptions::default())
            .unwrap()
            .stats
            .maximal as f64;
        let r = n2 / n1 / factor;
        assert!((r - 1.0).abs() < 0.1, "{kind:?} {sign:?}: ratio {r}");
    }
}

#[test]
fn oversized_boxes_are_refused() {
    let sp = spec(1, 1, DiscSign::Negative);
    assert!(matches!(
        enumerate_family(&sp, 1e7, HeightKind::Weighted, SampleOptions::default()),
        Err(thincubic::Error::RangeTooLarge(_))
    ));
    assert!(enumerate_family(&sp, -1.0, HeightKind::Balanced, SampleOptions::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_forms_satisfy_filters(a in -30i64..30, d in -30i64..30, neg in any::<bool>(), seed in any::<u64>()) {
        prop_assume!(a != 0 && d != 0);
        let sign = if neg { DiscSign::Negative } else { DiscSign::Positive };
        let sp = spec(a, d, sign);
        let s = sample_family(&sp, 50.0, HeightKind::Weighted, 300, seed, SampleOptions::default()).unwrap();
        prop_assert_eq!(s.stats.scanned, 300);
        let xq = q(50, 1);
        for f in &s.forms {
            let g = f.form();
            prop_assert!(height(&g, HeightKind::Weighted).less_than(&xq));
            prop_assert_eq!(g.disc().is_positive(), !neg);
            prop_assert!(local::is_maximal(&g).unwrap());
        }
    }

    #[test]
    fn squareful_primes_match_factorization(n in 1u64..u64::MAX, k in 1u64..5000) {
        let m = n as u128 * (k as u128).pow(2);
        let want: Vec<u64> = thincubic::arith::factorize(&m.into())
            .into_iter()
            .filter(|(_, e)| *e >= 2)
            .map(|(p, _)| p.to_u64().unwrap())
            .collect();
        for limit in [100, 1000] {
            prop_assert_eq!(SquarefulSieve::with_limit(limit).squareful_primes(m), want.clone());
        }
    }
}

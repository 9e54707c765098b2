use num_traits::{Signed, Zero};
use proptest::prelude::*;
use thincubic::arith::{qi, Q};
use thincubic::forms::{resolvent_q, Mat3};
use thincubic::local::{kappa_inf, Kappa};
use thincubic::orbits::*;
use thincubic::BinaryCubicForm;

fn nondegenerate(a: i64, b: i64, c: i64, d: i64) -> Option<BinaryCubicForm> {
    let f = BinaryCubicForm::new(a, b, c, d);
    (!f.disc().is_zero()).then_some(f)
}

/// Unimodular matrices as products of elementary shears.
fn unimodular() -> impl Strategy<Value = Mat3> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6).prop_map(|ops| {
        let mut m = Mat3::identity().0;
        for (i, j, t) in ops {
            if i == j {
                continue;
            }
            for k in 0..3 {
                m[i][k] += t * m[j][k];
            }
        }
        Mat3(m)
    })
}

#[test]
fn criterion_agrees_with_search_on_a_box() {
    let mut checked = 0;
    for a in [-3i64, -1, 1, 2, 3, 4, 5, 6, 8, 12] {
        for d in [-2i64, 1, 2, 3, 5, 7, 9, 18] {
            for b in -6..=6 {
                for c in -6..=6 {
                    let Some(f) = nondegenerate(a, b, c, d) else {
                        continue;
                    };
                    if !thincubic::local::is_maximal(&f).unwrap() {
                        continue;
                    }
                    for space in [Space::W, Space::Wvee] {
                        let by_rule = match space {
                            Space::W => delta_dist_integral_w(&f),
                            Space::Wvee => delta_dist_integral_wvee(&f),
                        }
                        .unwrap();
                        let by_search = delta_dist_search(&f, space).unwrap();
                        assert_eq!(
                            by_rule.exists, by_search.exists,
                            "{f} {space:?} {:?}",
                            by_rule.reason
                        );
                        assert!(by_search.verify(&f));
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 3000);
}

#[test]
fn quartic_solubility_matches_sign_rule_for_depressed_forms() {
    for c in -12..=12 {
        for d in [-7i64, -3, -1, 1, 2, 5] {
            let Some(f) = nondegenerate(1, 0, c, d) else {
                continue;
            };
            let g = delta_dist_quartic(&f).unwrap();
            let roots = count_real_roots(&g).unwrap();
            assert!(roots <= 2, "{f}");
            assert_eq!(roots == 2, f.disc().is_negative(), "{f}");
            let rule = f.disc().is_negative() || d > 0;
            assert_eq!(real_soluble_delta_dist(&f).unwrap(), rule, "{f}");
        }
    }
}

#[test]
fn sign_rule_fails_once_b_is_nonzero() {
    // x³ − 4x² + 4x − 1: disc > 0 and d < 0, yet the quartic has four real roots
    let f = BinaryCubicForm::new(1, -4, 4, -1);
    assert!(f.disc().is_positive());
    assert_eq!(
        count_real_roots(&delta_dist_quartic(&f).unwrap()).unwrap(),
        4
    );
    assert!(real_soluble_delta_dist(&f).unwrap());
    let p = delta_distinguished_rep(&f).unwrap();
    assert_eq!(
        real_splitting_type(&p.a, &p.b).unwrap(),
        RealSplittingType::S1111
    );
}

#[test]
fn archimedean_mass_matches_diagonal_representatives() {
    // the (22+) representative carries mass ¼ on (1, κ∞(B))
    for b in -3..=3 {
        for c in -7..=1 {
            for d in -4..=4 {
                let Some(f) = nondegenerate(1, b, c, d) else {
                    continue;
                };
                if d == 0 || !f.disc().is_positive() {
                    continue;
                }
                let reps = real_orbit_reps(&f).unwrap();
                let types: Vec<_> = reps
                    .iter()
                    .map(|r| real_splitting_type(&r.a, &r.b).unwrap())
                    .collect();
                assert_eq!(types[0], RealSplittingType::S1111);
                assert_eq!(types[3], RealSplittingType::S22sharp);
                let plus: Vec<_> = (0..4)
                    .filter(|&i| types[i] == RealSplittingType::S22plus)
                    .collect();
                assert_eq!(plus.len(), 1, "{f} {types:?}");
                let i = plus[0];
                assert_eq!(kappa_inf(&reps[i].a).unwrap(), Kappa::Plus);
                let eps2 = kappa_inf(&reps[i].b).unwrap();
                for e2 in [Kappa::Plus, Kappa::Minus] {
                    let expected = if e2 == eps2 {
                        Q::new(1.into(), 4.into())
                    } else {
                        Q::zero()
                    };
                    assert_eq!(
                        real_mass(&f, Kappa::Plus, e2, RealSplittingType::S22plus).unwrap(),
                        expected,
                        "{f}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representatives_have_resolvent_f(a in -9i64..=9, b in -20i64..=20, c in -20i64..=20, d in -9i64..=9) {
        prop_assume!(a != 0 && d != 0);
        let Some(f) = nondegenerate(a, b, c, d) else { return Ok(()) };
        prop_assert_eq!(distinguished_rep(&f).unwrap().resolvent, f.clone());
        let p = delta_distinguished_rep(&f).unwrap();
        prop_assert_eq!(&p.resolvent, &f);
        let (ma, mb) = delta_minors(&p);
        prop_assert!(ma.is_zero() && mb.is_zero());
    }

    #[test]
    fn quartic_invariants_match_cubic(b in -30i64..=30, c in -30i64..=30, d in -30i64..=30) {
        prop_assume!(d != 0);
        let Some(f) = nondegenerate(1, b, c, d) else { return Ok(()) };
        let g = delta_dist_quartic(&f).unwrap();
        prop_assert_eq!(g.invariant_i(), qi(b * b - 3 * c));
        prop_assert_eq!(g.invariant_j(), qi(-2 * b * b * b + 9 * b * c - 27 * d));
    }

    #[test]
    fn real_type_is_sl3_invariant(b in -6i64..=6, c in -8i64..=8, d in -6i64..=6, which in 0usize..4, g in unimodular()) {
        let Some(f) = nondegenerate(1, b, c, d) else { return Ok(()) };
        let (a0, b0) = if f.disc().is_positive() {
            let r = real_orbit_reps(&f).unwrap()[which].clone();
            (r.a, r.b)
        } else {
            let p = distinguished_rep(&f).unwrap();
            (p.a, p.b)
        };
        let gq = g.to_q();
        let (a1, b1) = (a0.transform(&gq), b0.transform(&gq));
        prop_assert_eq!(resolvent_q(&a1, &b1), resolvent_q(&a0, &b0));
        prop_assert_eq!(real_splitting_type(&a1, &b1).unwrap(), real_splitting_type(&a0, &b0).unwrap());
    }

    #[test]
    fn witnesses_are_integral_and_verified(a in 1i64..=5, d in 1i64..=5, b in -50i64..=50, c in -50i64..=50) {
        let Some(f) = nondegenerate(a, b, c, d) else { return Ok(()) };
        prop_assume!(thincubic::local::is_maximal(&f).unwrap());
        for space in [Space::W, Space::Wvee] {
            let r = delta_dist_search(&f, space).unwrap();
            prop_assert!(r.verify(&f));
            prop_assert_eq!(r.exists, r.witness.is_some());
        }
    }
}

#[test]
fn depressed_delta_dist_rep_has_at_most_two_intersections() {
    for c in -9..=9 {
        for d in [-5i64, -2, -1, 1, 3] {
            let Some(f) = nondegenerate(1, 0, c, d) else {
                continue;
            };
            let p = delta_distinguished_rep(&f).unwrap();
            assert_ne!(
                real_splitting_type(&p.a, &p.b).unwrap(),
                RealSplittingType::S1111,
                "{f}"
            );
        }
    }
}

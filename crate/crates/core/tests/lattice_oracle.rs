use proptest::prelude::*;
use thincubic::forms::Mat3;
use thincubic::lattice::*;
use thincubic::LatticeClass;

#[test]
fn five_loop_matches_six_loop_histogram() {
    let r = [3i64; 6];
    for (k, oracle) in four_det_histogram(r, 40) {
        if k == 0 {
            continue;
        }
        let fast = count_in_ranges(k, r, LatticeClass::HalfIntegral).unwrap();
        assert_eq!(fast, oracle, "k = {k}");
        assert!(fast.is_consistent());
    }
}

#[test]
fn diagonal_form_is_counted() {
    let c = count_in_ranges(4, [1; 6], LatticeClass::HalfIntegral).unwrap();
    assert_eq!(
        c,
        count_bruteforce(4, [1; 6], LatticeClass::HalfIntegral).unwrap()
    );
    assert!(c.total >= 1);
    assert_eq!(four_det(&[1, 0, 1, 0, 0, 1]), 4);
}

#[test]
fn integer_matrix_class() {
    for k in [4i64, -4, 8, 12, -16] {
        let r = [3, 4, 3, 4, 4, 3];
        let fast = count_in_ranges(k, r, LatticeClass::IntegerMatrix).unwrap();
        let slow = count_bruteforce(k, r, LatticeClass::IntegerMatrix).unwrap();
        assert_eq!(fast, slow, "k = {k}");
    }
    assert!(matches!(
        count_in_ranges(1, [2; 6], LatticeClass::IntegerMatrix),
        Err(thincubic::Error::InconsistentParity(_))
    ));
    assert!(matches!(
        growth_exponent(1, &[8.0, 16.0, 32.0], LatticeClass::IntegerMatrix),
        Err(thincubic::Error::InconsistentParity(_))
    ));
}

#[test]
fn empty_when_no_f_fits() {
    // with a = b = c = 0 the equation reads −k = 0·f + 0, so an odd k has no solutions
    assert_eq!(
        count_in_ranges(3, [0, 0, 0, 2, 2, 5], LatticeClass::HalfIntegral)
            .unwrap()
            .total,
        0
    );
}

#[test]
fn simultaneous_sign_flips_preserve_counts() {
    let r = [2i64; 6];
    for k in [-7i64, -4, 1, 4, 9] {
        let mut base = Vec::new();
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                for c in -2..=2i64 {
                    for d in -2..=2i64 {
                        for e in -2..=2i64 {
                            for f in -2..=2i64 {
                                let v = [a, b, c, d, e, f];
                                if four_det(&v) == k {
                                    base.push(v);
                                }
                            }
                        }
                    }
                }
            }
        }
        for v in &base {
            let [a, b, c, d, e, f] = *v;
            assert_eq!(four_det(&[a, -b, c, -d, e, f]), k);
            assert_eq!(four_det(&[a, -b, c, d, -e, f]), k);
            assert_eq!(four_det(&[a, b, c, -d, -e, f]), k);
        }
        assert_eq!(
            base.len() as u64,
            count_in_ranges(k, r, LatticeClass::HalfIntegral)
                .unwrap()
                .total
        );
    }
}

#[test]
fn shear_preserves_counts_exactly() {
    let g = Mat3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
    let r = [2i64; 6];
    for k in [4i64, -4, 3] {
        let plain = count_in_ranges(k, r, LatticeClass::HalfIntegral)
            .unwrap()
            .total;
        assert_eq!(count_sheared(k, r, &g).unwrap(), plain, "k = {k}");
    }
    let bad = Mat3([[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
    assert!(count_sheared(4, r, &bad).is_err());
}

#[test]
fn unskewed_ratio_is_one() {
    let t = skew_ratio(
        4,
        8.0,
        &[(1.0, 1.0), (2.0, 1.0)],
        LatticeClass::HalfIntegral,
    )
    .unwrap();
    assert_eq!(t.rows[0].ratio, 1.0);
    assert!(t.rows.iter().all(|r| r.counts.is_consistent()));
}

#[test]
fn skewed_counts_stay_in_envelope() {
    let y = 16.0;
    let t = skew_ratio(
        4,
        y,
        &[(1.0, 1.0), (2.0, 1.0), (4.0, 1.0)],
        LatticeClass::HalfIntegral,
    )
    .unwrap();
    let c = t.rows[0].vs_delta_nonzero;
    for r in &t.rows {
        let envelope = c * r.s1.powi(3) * y.powi(3) * y.sqrt();
        assert!((r.counts.n_delta_nonzero as f64) <= envelope, "{r:?}");
    }
}

#[test]
fn growth_exponent_near_three() {
    let fit = growth_exponent(4, &[8.0, 16.0, 32.0, 64.0], LatticeClass::HalfIntegral).unwrap();
    assert!((2.6..=3.4).contains(&fit.slope), "{fit:?}");
    let (n32, n64) = (fit.points[2].1 as f64, fit.points[3].1 as f64);
    assert!((n64 / n32 / 8.0 - 1.0).abs() < 0.3, "{n32} {n64}");
    assert!(growth_exponent(4, &[8.0, 16.0], LatticeClass::HalfIntegral).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn five_loop_matches_brute_force_on_random_boxes(
        r in prop::array::uniform6(0i64..=3),
        k in -40i64..=40,
    ) {
        prop_assume!(k != 0);
        let fast = count_in_ranges(k, r, LatticeClass::HalfIntegral).unwrap();
        prop_assert_eq!(fast, count_bruteforce(k, r, LatticeClass::HalfIntegral).unwrap());
    }

    #[test]
    fn unimodular_action_preserves_four_det(
        v in prop::array::uniform6(-20i64..=20),
        s in -3i64..=3, t in -3i64..=3,
    ) {
        let g = Mat3([[1, s, 0], [0, 1, 0], [t, 0, 1]]);
        prop_assert_eq!(four_det(&act(&g, &v)), four_det(&v));
    }
}

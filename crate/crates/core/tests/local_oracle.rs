use thincubic::arith::Q;
use thincubic::local::{
    averaged_mass_factor, density_oracle, is_maximal_at, local_mass, maximal_density, ram_density,
    splitting_counts, Kappa, RamSide,
};
use thincubic::BinaryCubicForm;

fn families(p: i64, max_val: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for &u in &[1i64, -1, 2, 3, -5, 7] {
        for &w in &[1i64, -1, 2, 3, -5, 7] {
            if u % p == 0 || w % p == 0 {
                continue;
            }
            for ea in 0..=max_val {
                for ed in 0..=max_val {
                    out.push((u * p.pow(ea), w * p.pow(ed)));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn closed_forms_match_enumeration() {
    for (p, max_val, stride) in [
        (2u64, 3, 1),
        (3, 3, 1),
        (5, 3, 3),
        (7, 2, 5),
        (11, 1, 13),
        (13, 1, 17),
    ] {
        for (a, d) in families(p as i64, max_val).into_iter().step_by(stride) {
            let r = density_oracle(p, a, d).unwrap();
            let tag = format!("p={p} a={a} d={d}");
            assert_eq!(
                r.maximal_density,
                maximal_density(p, a, d).unwrap(),
                "{tag}"
            );
            assert_eq!(
                r.aside_ram_density,
                ram_density(p, a, d, RamSide::ASide).unwrap(),
                "{tag}"
            );
            assert_eq!(
                r.dside_ram_density,
                ram_density(p, a, d, RamSide::DSide).unwrap(),
                "{tag}"
            );
            assert_eq!(
                r.splitting_histogram,
                splitting_counts(p, a, d).unwrap(),
                "{tag}"
            );
            assert_eq!(
                r.splitting_histogram.values().sum::<u64>(),
                r.maximal_count,
                "{tag}"
            );
        }
    }
}

/// A representative of the class of `(a, b, c, d)` mod `m` in `(b, c)` with nonzero discriminant.
fn nondegenerate_lift(a: i64, b: i64, c: i64, d: i64, m: i64) -> BinaryCubicForm {
    (0..)
        .map(|k| BinaryCubicForm::new(a, b, c + k * m, d))
        .find(|f| f.disc() != 0.into())
        .unwrap()
}

#[test]
fn averaged_mass_matches_average_of_local_masses() {
    for p in [2u64, 3, 5] {
        let m = (p * p) as i64;
        for (a, d) in families(p as i64, 2) {
            let maximal: Vec<BinaryCubicForm> = (0..m)
                .flat_map(|b| (0..m).map(move |c| nondegenerate_lift(a, b, c, d, m)))
                .filter(|f| is_maximal_at(f, p).unwrap())
                .collect();
            for e1 in Kappa::ALL {
                for e2 in Kappa::ALL {
                    let total: Q = maximal
                        .iter()
                        .map(|f| local_mass(f, p, e1, e2).unwrap())
                        .sum();
                    let avg = total / Q::from_integer((maximal.len() as i64).into());
                    assert_eq!(
                        avg,
                        averaged_mass_factor(p, a, d, e1, e2).unwrap(),
                        "p={p} a={a} d={d} eps=({e1:?},{e2:?})"
                    );
                }
            }
        }
    }
}

#[test]
fn cube_character_uses_ratio() {
    // with a ≠ 1 the counts depend on d/a, not on d alone
    let p = 7u64;
    let r = density_oracle(p, 2, 2).unwrap();
    assert_eq!(r.splitting_histogram, splitting_counts(p, 2, 2).unwrap());
    let r = density_oracle(p, 2, 1).unwrap();
    assert_eq!(r.splitting_histogram, splitting_counts(p, 2, 1).unwrap());
    assert_ne!(
        splitting_counts(p, 2, 2).unwrap(),
        splitting_counts(p, 2, 1).unwrap()
    );
}

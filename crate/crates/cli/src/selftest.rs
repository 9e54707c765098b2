use serde::Serialize;
use thincubic::averages::{self, DiscSign, FamilySpec, PiConfig};
use thincubic::lattice;
use thincubic::local::{self, RamSide};
use thincubic::orbits::{self, Space};
use thincubic::{BinaryCubicForm, HeightKind, LatticeClass, Q};

#[derive(Debug, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    /// The first few failures.
    pub examples: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    fn error(&mut self, e: thincubic::Error, ctx: impl std::fmt::Display) {
        self.check(false, || format!("{ctx}: {e}"));
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub passed: bool,
    pub suites: Vec<Suite>,
}

pub fn run(quick: bool) -> Report {
    let suites = vec![
        local_densities(quick),
        delta_dist(quick),
        lattice_counts(quick),
        averages_identities(),
    ];
    Report {
        passed: suites.iter().all(|s| s.failures == 0),
        suites,
    }
}

fn representatives(p: u64) -> Vec<(i64, i64)> {
    let p = p as i64;
    let units: Vec<i64> = [1i64, -1, 2, 3]
        .into_iter()
        .filter(|u| u % p != 0)
        .collect();
    let mut out = Vec::new();
    for &u in &units {
        for &w in &units {
            for ea in 0..=2 {
                for ed in 0..=2 {
                    out.push((u * p.pow(ea), w * p.pow(ed)));
                }
            }
        }
    }
    out
}

fn local_densities(quick: bool) -> Suite {
    let mut s = Suite::new("local-densities");
    let primes: &[u64] = if quick {
        &[2, 3, 5, 7]
    } else {
        &[2, 3, 5, 7, 11, 13]
    };
    for &p in primes {
        for (a, d) in representatives(p) {
            let ctx = format!("p={p} a={a} d={d}");
            let r = (|| -> thincubic::Result<_> {
                let rep = local::density_oracle(p, a, d)?;
                Ok((
                    rep,
                    local::maximal_density(p, a, d)?,
                    local::ram_density(p, a, d, RamSide::ASide)?,
                    local::ram_density(p, a, d, RamSide::DSide)?,
                    local::splitting_counts(p, a, d)?,
                ))
            })();
            match r {
                Ok((rep, mx, ra, rd, counts)) => {
                    s.check(rep.maximal_density == mx, || {
                        format!("{ctx}: maximal {mx} vs {}", rep.maximal_density)
                    });
                    s.check(rep.aside_ram_density == ra, || {
                        format!("{ctx}: a-side {ra} vs {}", rep.aside_ram_density)
                    });
                    s.check(rep.dside_ram_density == rd, || {
                        format!("{ctx}: d-side {rd} vs {}", rep.dside_ram_density)
                    });
                    s.check(rep.splitting_histogram == counts, || {
                        format!("{ctx}: splitting counts")
                    });
                }
                Err(e) => s.error(e, ctx),
            }
        }
    }
    s
}

fn delta_dist(quick: bool) -> Suite {
    let mut s = Suite::new("delta-dist");
    let (n, r) = if quick { (3, 4) } else { (5, 6) };
    for a in 1..=n {
        for d in 1..=n {
            for b in -r..=r {
                for c in -r..=r {
                    let f = BinaryCubicForm::new(a, b, c, d);
                    if f.disc() == 0.into() || !matches!(local::is_maximal(&f), Ok(true)) {
                        continue;
                    }
                    let ctx = format!("[{a},{b},{c},{d}]");
                    for space in [Space::W, Space::Wvee] {
                        let r = (|| -> thincubic::Result<_> {
                            let crit = match space {
                                Space::W => orbits::delta_dist_criterion_w(&f)?,
                                Space::Wvee => orbits::delta_dist_criterion_wvee(&f)?,
                            };
                            Ok((crit.is_ok(), orbits::delta_dist_search(&f, space)?))
                        })();
                        match r {
                            Ok((crit, found)) => {
                                s.check(crit == found.exists, || {
                                    format!(
                                        "{ctx} {space:?}: criterion {crit}, search {}",
                                        found.exists
                                    )
                                });
                                s.check(found.verify(&f), || {
                                    format!("{ctx} {space:?}: witness fails to verify")
                                });
                            }
                            Err(e) => s.error(e, format!("{ctx} {space:?}")),
                        }
                    }
                }
            }
        }
    }
    s
}

fn lattice_counts(quick: bool) -> Suite {
    let mut s = Suite::new("lattice-counts");
    let (r, kmax) = if quick {
        ([2i64; 6], 16)
    } else {
        ([3i64; 6], 40)
    };
    let hist = lattice::four_det_histogram(r, kmax);
    for (k, brute) in hist {
        if k == 0 {
            continue;
        }
        match lattice::count_in_ranges(k, r, LatticeClass::HalfIntegral) {
            Ok(fast) => s.check(fast == brute, || {
                format!("k={k}: {} vs {}", fast.total, brute.total)
            }),
            Err(e) => s.error(e, format!("k={k}")),
        }
    }
    s
}

fn averages_identities() -> Suite {
    let mut s = Suite::new("averages");
    match averages::hanke_identity_check(4, 100, 0) {
        Ok(ok) => s.check(ok, || "product identity".into()),
        Err(e) => s.error(e, "product identity"),
    }
    for a in 1..=5 {
        for d in 1..=5 {
            for sign in [DiscSign::Positive, DiscSign::Negative] {
                let r = FamilySpec::maximal(a, d, sign).and_then(|sp| averages::avg_cl2_bound(&sp));
                match r {
                    Ok(rep) => s.check(rep.recompute() == rep.bound, || {
                        format!("({a},{d}) {sign:?} recompute")
                    }),
                    Err(e) => s.error(e, format!("({a},{d})")),
                }
            }
        }
    }
    let cfg = PiConfig {
        ladder: vec![10.0, 100.0],
        samples: 2000,
        seed: 0,
    };
    for d in [1i64, 9, 17] {
        for kind in [HeightKind::Balanced, HeightKind::Weighted] {
            match averages::pi_d_estimate(d, kind, &cfg) {
                Ok(est) => s.check(
                    est.limit == Q::from_integer(1.into()) && est.value == 1.0,
                    || format!("Π_{d} = {}", est.value),
                ),
                Err(e) => s.error(e, format!("Π_{d}")),
            }
        }
    }
    s
}

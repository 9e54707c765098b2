use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use thincubic::averages::{self, CubicFamily, FamilySpec, PiConfig};
use thincubic::lattice::{self, SkewBox};
use thincubic::local::{self, RamSide};
use thincubic::orbits::{self, Space};
use thincubic::sampler::{self, SampleOptions};
use thincubic::{BinaryCubicForm, HeightKind, Q};

use crate::cli::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: Value,
    pub payload: Value,
    pub warnings: Vec<String>,
}

impl Envelope {
    pub fn new(
        command: &str,
        params: impl Serialize,
        payload: impl Serialize,
    ) -> Result<Self, Failure> {
        Ok(Self {
            command: command.to_string(),
            version: VERSION,
            seed: None,
            params: to_value(params)?,
            payload: to_value(payload)?,
            warnings: Vec::new(),
        })
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn warn(mut self, w: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(w);
        self
    }
}

/// What a command produced, before it is written out.
pub enum Output {
    Envelope(Envelope),
    /// Raw text, used for CSV.
    Text(String),
}

#[derive(Debug)]
pub enum Failure {
    Compute(String),
    Io(std::io::Error),
}

impl From<thincubic::Error> for Failure {
    fn from(e: thincubic::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn to_value(v: impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Compute(e.to_string()))
}

fn qs(x: &Q) -> String {
    x.to_string()
}

fn form_of(c: [i64; 4]) -> BinaryCubicForm {
    BinaryCubicForm::new(c[0], c[1], c[2], c[3])
}

pub fn avg(args: &AvgArgs) -> Result<Output, Failure> {
    match &args.sub {
        Some(AvgSub::Table2(t)) => table2(t),
        Some(AvgSub::Table1(t)) => table1(t),
        Some(AvgSub::Sel2(s)) => sel2(s),
        None => {
            let (Some(a), Some(d), Some(sign)) = (args.a, args.d, args.sign) else {
                unreachable!("clap enforces --a, --d and --sign")
            };
            let spec = FamilySpec::maximal(a, d, sign.into())?;
            let report = averages::avg_cl2_bound(&spec)?;
            Ok(Output::Envelope(Envelope::new("avg", args, report)?))
        }
    }
}

fn table2(args: &Table2Args) -> Result<Output, Failure> {
    let grid = averages::table2_grid();
    if args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "a",
            "d",
            "real",
            "real_rendered",
            "reference_real",
            "real_discrepancy",
            "complex",
            "complex_rendered",
            "reference_complex",
            "complex_discrepancy",
        ])
        .map_err(|e| Failure::Compute(e.to_string()))?;
        for c in &grid {
            w.write_record([
                c.a.to_string(),
                c.d.to_string(),
                qs(&c.real),
                c.real_rendered.clone(),
                c.reference_real.clone(),
                c.real_discrepancy.to_string(),
                qs(&c.complex),
                c.complex_rendered.clone(),
                c.reference_complex.clone(),
                c.complex_discrepancy.to_string(),
            ])
            .map_err(|e| Failure::Compute(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Failure::Compute(e.to_string()))?;
        return Ok(Output::Text(String::from_utf8_lossy(&bytes).into_owned()));
    }
    let warnings: Vec<String> = grid
        .iter()
        .flat_map(|c| {
            let mut w = Vec::new();
            if c.real_discrepancy {
                w.push(format!(
                    "real cell ({},{}): computed {} but reference {}",
                    c.a, c.d, c.real_rendered, c.reference_real
                ));
            }
            if c.complex_discrepancy {
                w.push(format!(
                    "complex cell ({},{}): computed {} but reference {}",
                    c.a, c.d, c.complex_rendered, c.reference_complex
                ));
            }
            w
        })
        .collect();
    Ok(Output::Envelope(
        Envelope::new("avg table2", args, grid)?.warn(warnings),
    ))
}

#[derive(Serialize)]
struct Table1Entry {
    family: FamilyArg,
    r1: u32,
    r2: u32,
    #[serde(with = "thincubic::arith::qser")]
    value: Q,
    rendered: String,
}

fn table1(args: &Table1Args) -> Result<Output, Failure> {
    let families = match args.family {
        Some(f) => vec![f],
        None => vec![FamilyArg::Full, FamilyArg::Mono, FamilyArg::Unit],
    };
    let mut rows = Vec::new();
    for f in families {
        for (r1, r2) in [(3, 0), (1, 1)] {
            let value = averages::table1_formula(CubicFamily::from(f), r1, r2)?;
            rows.push(Table1Entry {
                family: f,
                r1,
                r2,
                rendered: thincubic::arith::render3(&value),
                value,
            });
        }
    }
    Ok(Output::Envelope(Envelope::new("avg table1", args, rows)?))
}

fn sel2(args: &Sel2Args) -> Result<Output, Failure> {
    let spec = FamilySpec::selmer(args.d, args.sign.into())?;
    let kind: HeightKind = args.height.into();
    if args.estimate {
        let cfg = PiConfig {
            samples: args.samples,
            seed: args.seed,
            ..PiConfig::default()
        };
        let report = averages::avg_sel2_bound_with_estimate(&spec, kind, &cfg)?;
        Ok(Output::Envelope(
            Envelope::new("avg sel2", args, report)?.seeded(args.seed),
        ))
    } else {
        let report = averages::avg_sel2_bound(&spec, kind)?;
        Ok(Output::Envelope(Envelope::new("avg sel2", args, report)?))
    }
}

pub fn densities(args: &DensitiesArgs) -> Result<Output, Failure> {
    let (p, a, d) = (args.p, args.a, args.d);
    let closed = json!({
        "maximal_density": qs(&local::maximal_density(p, a, d)?),
        "aside_ram_density": qs(&local::ram_density(p, a, d, RamSide::ASide)?),
        "dside_ram_density": qs(&local::ram_density(p, a, d, RamSide::DSide)?),
        "splitting_counts": local::splitting_counts(p, a, d)?,
    });
    let mut payload = json!({ "p": p, "a": a, "d": d, "closed_form": closed });
    let mut warnings = Vec::new();
    if args.oracle {
        let report = local::density_oracle(p, a, d)?;
        let oracle = to_value(&report)?;
        let pairs = [
            ("maximal_density", "maximal_density"),
            ("aside_ram_density", "aside_ram_density"),
            ("dside_ram_density", "dside_ram_density"),
            ("splitting_counts", "splitting_histogram"),
        ];
        let mut agree = true;
        for (c, o) in pairs {
            if payload["closed_form"][c] != oracle[o] {
                agree = false;
                warnings.push(format!(
                    "{c}: closed form {} but enumeration {}",
                    payload["closed_form"][c], oracle[o]
                ));
            }
        }
        payload["oracle"] = oracle;
        payload["agree"] = json!(agree);
    }
    Ok(Output::Envelope(
        Envelope::new("densities", args, payload)?.warn(warnings),
    ))
}

pub fn delta_dist(args: &DeltaDistArgs) -> Result<Output, Failure> {
    let f = form_of(args.form);
    let space: Space = args.space.into();
    let result = match space {
        Space::W => orbits::delta_dist_integral_w(&f)?,
        Space::Wvee => orbits::delta_dist_integral_wvee(&f)?,
    };
    let verdict = match space {
        Space::W => orbits::delta_dist_criterion_w(&f)?,
        Space::Wvee => orbits::delta_dist_criterion_wvee(&f)?,
    };
    let criterion = json!({
        "exists": verdict.is_ok(),
        "reason": verdict.err(),
    });
    let mut payload = json!({
        "form": args.form,
        "criterion": criterion,
        "result": result,
        "verified": result.verify(&f),
    });
    let mut warnings = Vec::new();
    if args.search {
        let found = orbits::delta_dist_search(&f, space)?;
        let agree = found.exists == verdict.is_ok();
        if !agree {
            warnings.push("criterion and search disagree".to_string());
        }
        payload["search_verified"] = json!(found.verify(&f));
        payload["search"] = to_value(found)?;
        payload["agree"] = json!(agree);
    }
    Ok(Output::Envelope(
        Envelope::new("delta-dist", args, payload)?.warn(warnings),
    ))
}

pub fn maximality(args: &MaximalityArgs) -> Result<Output, Failure> {
    let f = form_of(args.form);
    let disc = f.disc();
    let payload = match args.p {
        Some(p) => json!({
            "form": args.form,
            "disc": disc.to_string(),
            "p": p,
            "maximal": local::is_maximal_at(&f, p)?,
        }),
        None => {
            let squareful: Vec<Value> = thincubic::arith::factorize(&disc)
                .into_iter()
                .filter(|(_, e)| *e >= 2)
                .map(|(p, e)| -> Result<Value, Failure> {
                    let p: u64 = p
                        .try_into()
                        .map_err(|_| Failure::Compute("prime exceeds 64 bits".into()))?;
                    Ok(json!({ "p": p, "exponent": e, "maximal": local::is_maximal_at(&f, p)? }))
                })
                .collect::<Result<_, _>>()?;
            let bad = local::nonmaximal_prime(&f)?;
            json!({
                "form": args.form,
                "disc": disc.to_string(),
                "maximal": bad.is_none(),
                "nonmaximal_prime": bad,
                "squareful_primes": squareful,
            })
        }
    };
    Ok(Output::Envelope(Envelope::new(
        "maximality",
        args,
        payload,
    )?))
}

pub fn splitting(args: &SplittingArgs) -> Result<Output, Failure> {
    let p = args.p;
    if let Some(c) = args.form {
        let t = local::splitting_type_mod_p(&form_of(c), p)?;
        let payload = json!({ "form": c, "p": p, "type": t, "label": t.label() });
        return Ok(Output::Envelope(Envelope::new("splitting", args, payload)?));
    }
    let (Some(a), Some(d)) = (args.a, args.d) else {
        return Err(Failure::Compute("give --form, or --a and --d".into()));
    };
    let counts = local::splitting_counts(p, a, d)?;
    let labelled: serde_json::Map<String, Value> = counts
        .iter()
        .map(|(t, n)| (t.label().to_string(), json!(n)))
        .collect();
    let mut payload = json!({ "p": p, "a": a, "d": d, "counts": counts, "labelled": labelled });
    let mut warnings = Vec::new();
    if args.oracle {
        let report = local::density_oracle(p, a, d)?;
        let agree = report.splitting_histogram == counts;
        if !agree {
            warnings.push("closed-form counts differ from enumeration".to_string());
        }
        payload["oracle"] = to_value(&report.splitting_histogram)?;
        payload["agree"] = json!(agree);
    }
    Ok(Output::Envelope(
        Envelope::new("splitting", args, payload)?.warn(warnings),
    ))
}

pub fn count_detk(args: &CountArgs) -> Result<Output, Failure> {
    match &args.sub {
        Some(CountSub::Fit(f)) => {
            let fit = lattice::growth_exponent(f.k, &f.ys, f.class.into())?;
            Ok(Output::Envelope(Envelope::new("count-detk fit", f, fit)?))
        }
        Some(CountSub::Skew(s)) => {
            let table = lattice::skew_ratio(s.k, s.y, &s.s, s.class.into())?;
            Ok(Output::Envelope(Envelope::new(
                "count-detk skew",
                s,
                table,
            )?))
        }
        None => {
            let (Some(k), Some(y)) = (args.k, args.y) else {
                unreachable!("clap enforces --k and --Y")
            };
            let bx = SkewBox::new(args.s1, args.s2, y)?;
            let ranges = bx.ranges()?;
            let counts = lattice::count_fixed_det(k, &bx, args.class.into())?;
            let mut payload = json!({ "k": k, "ranges": ranges, "counts": counts });
            let mut warnings = Vec::new();
            if args.oracle {
                let brute = lattice::count_bruteforce(k, ranges, args.class.into())?;
                if brute != counts {
                    warnings.push("five-loop and six-loop counts differ".to_string());
                }
                payload["oracle"] = to_value(brute)?;
                payload["agree"] = json!(brute == counts);
            }
            Ok(Output::Envelope(
                Envelope::new("count-detk", args, payload)?.warn(warnings),
            ))
        }
    }
}

pub fn pi(args: &PiArgs) -> Result<Output, Failure> {
    let cfg = PiConfig {
        ladder: args.ladder.clone(),
        samples: args.samples,
        seed: args.seed,
    };
    let est = averages::pi_d_estimate(args.d, args.height.into(), &cfg)?;
    Ok(Output::Envelope(
        Envelope::new("pi", args, est)?.seeded(args.seed),
    ))
}

pub fn sample(args: &SampleArgs, out: &mut dyn Write) -> Result<Output, Failure> {
    let spec = if args.selmer {
        if args.a != 1 {
            return Err(Failure::Compute("--selmer needs a = 1".into()));
        }
        FamilySpec::selmer(args.d, args.sign.into())?
    } else {
        FamilySpec::maximal(args.a, args.d, args.sign.into())?
    };
    let kind: HeightKind = args.height.into();
    let opts = SampleOptions {
        with_delta: args.delta,
    };
    let mut io_err: Option<std::io::Error> = None;
    let mut sink = |f: &sampler::SampledForm| {
        if args.stats_only || io_err.is_some() {
            return;
        }
        let line = serde_json::to_string(f).expect("forms serialize");
        if let Err(e) = writeln!(out, "{line}") {
            io_err = Some(e);
        }
    };
    let stats = match args.draws {
        Some(n) => sampler::sample_family_with(&spec, args.x, kind, n, args.seed, opts, &mut sink)?,
        None => sampler::enumerate_family_with(&spec, args.x, kind, opts, &mut sink)?,
    };
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let mut warnings = Vec::new();
    if stats.unresolved > 0 {
        warnings.push(format!(
            "{} forms left unresolved and excluded",
            stats.unresolved
        ));
    }
    let payload = json!({
        "stats": stats,
        "maximal_fraction": stats.maximal_fraction(),
        "a_ram_fraction": stats.a_ram_fraction(),
        "d_ram_fraction": stats.d_ram_fraction(),
        "delta_fraction": if args.delta { Some(stats.delta_fraction()) } else { None },
    });
    let mut env = Envelope::new("sample", args, payload)?.warn(warnings);
    if args.draws.is_some() {
        env = env.seeded(args.seed);
    }
    Ok(Output::Envelope(env))
}

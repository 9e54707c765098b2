//! Enumeration of `U_{a,d}(Z)` at bounded height with maximality and local filters.

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, f64_to_q, FastDiv, Q};
use crate::averages::{DiscSign, FamilySpec, LocalCondition};
use crate::error::{Error, Result};
use crate::forms::{self, BinaryCubicForm, HeightKind};
use crate::local::{self, RamSide};
use crate::orbits;

/// Largest box (number of `(b, c)` pairs) an exhaustive scan will visit.
pub const MAX_SCAN: u128 = 1 << 36;
const B_BLOCK: usize = 16;
const SAMPLE_CHUNK: usize = 4096;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    /// `(b, c)` pairs visited.
    pub scanned: u64,
    pub degenerate: u64,
    /// Nondegenerate forms of the requested sign.
    pub in_sign: u64,
    /// Forms passing every filter; these are the forms listed.
    pub maximal: u64,
    pub a_side_ram: u64,
    pub d_side_ram: u64,
    pub positive_disc: u64,
    pub negative_disc: u64,
    pub unresolved: u64,
    pub delta_checked: u64,
    pub delta_exists: u64,
}

impl SampleStats {
    fn add(&mut self, o: &SampleStats) {
        self.scanned += o.scanned;
        self.degenerate += o.degenerate;
        self.in_sign += o.in_sign;
        self.maximal += o.maximal;
        self.a_side_ram += o.a_side_ram;
        self.d_side_ram += o.d_side_ram;
        self.positive_disc += o.positive_disc;
        self.negative_disc += o.negative_disc;
        self.unresolved += o.unresolved;
        self.delta_checked += o.delta_checked;
        self.delta_exists += o.delta_exists;
    }

    pub fn maximal_fraction(&self) -> f64 {
        ratio(self.maximal, self.in_sign)
    }

    pub fn a_ram_fraction(&self) -> f64 {
        ratio(self.a_side_ram, self.maximal)
    }

    pub fn d_ram_fraction(&self) -> f64 {
        ratio(self.d_side_ram, self.maximal)
    }

    pub fn delta_fraction(&self) -> f64 {
        ratio(self.delta_exists, self.delta_checked)
    }
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledForm {
    pub coeffs: [i64; 4],
    #[serde(with = "arith::intser")]
    pub disc: num_bigint::BigInt,
    /// Sufficiently ramified at every prime of `a_k`.
    pub a_ram: bool,
    pub d_ram: bool,
    /// Whether the Δ-distinguished orbit has an integral representative in W, when checked.
    pub delta: Option<bool>,
}

impl SampledForm {
    pub fn form(&self) -> BinaryCubicForm {
        let [a, b, c, d] = self.coeffs;
        BinaryCubicForm::new(a, b, c, d)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub with_delta: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySample {
    pub spec: FamilySpec,
    pub x: f64,
    pub kind: HeightKind,
    /// Draws for a random sample, `None` for an exhaustive scan.
    pub draws: Option<u64>,
    pub seed: Option<u64>,
    pub forms: Vec<SampledForm>,
    pub stats: SampleStats,
}

/// Largest `|b|` and `|c|` with height strictly below `x`.
pub fn height_box(x: f64, kind: HeightKind) -> Result<(i64, i64)> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "height bound must be positive, got {x}"
        )));
    }
    let xq = f64_to_q(x);
    let below = |t: &Q| -> Result<i64> {
        let fl = t.floor();
        let n = if &fl == t {
            fl.to_integer() - 1
        } else {
            fl.to_integer()
        };
        n.to_i64()
            .ok_or_else(|| Error::RangeTooLarge(format!("height bound {x}")))
    };
    let bmax = below(&xq)?;
    let cmax = match kind {
        HeightKind::Balanced => bmax,
        HeightKind::Weighted => below(&(&xq * &xq))?,
    };
    Ok((bmax, cmax))
}

/// Trial division by primes up to a bound, with a fallback to full factorization.
#[derive(Clone, Debug)]
pub struct SquarefulSieve {
    odd: Vec<FastDiv>,
    limit: u64,
}

impl SquarefulSieve {
    /// Trial division bound chosen so that leftover cofactors of numbers up to `max_abs`
    /// have at most two prime factors whenever that is affordable.
    pub fn for_bound(max_abs: u128) -> Self {
        let cbrt = max_abs.cbrt() as u64 + 2;
        Self::with_limit(cbrt.clamp(100, 1 << 16))
    }

    pub fn with_limit(limit: u64) -> Self {
        let odd = arith::primes_up_to(limit)
            .into_iter()
            .filter(|&p| p > 2)
            .map(FastDiv::new)
            .collect();
        Self { odd, limit }
    }

    /// Primes `p` with `p² | n`, increasing.
    pub fn squareful_primes(&self, n: u128) -> Vec<u64> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let tz = n.trailing_zeros();
        if tz >= 2 {
            out.push(2);
        }
        let mut m = n >> tz;
        let Ok(mut m64) = u64::try_from(m) else {
            return self.fallback(m, out);
        };
        for fd in &self.odd {
            if fd.p.saturating_mul(fd.p) > m64 {
                return out;
            }
            if fd.divides(m64) {
                let mut e = 0;
                while fd.divides(m64) {
                    m64 = fd.exact_div(m64);
                    e += 1;
                }
                if e >= 2 {
                    out.push(fd.p);
                }
            }
        }
        m = m64 as u128;
        if m == 1 || m < (self.limit as u128).pow(2) || arith::is_prime(m64) {
            return out;
        }
        if m < (self.limit as u128).pow(3) {
            let r = arith::isqrt_u64(m64);
            if r * r == m64 {
                out.push(r);
            }
            return out;
        }
        self.fallback(m, out)
    }

    fn fallback(&self, m: u128, mut out: Vec<u64>) -> Vec<u64> {
        for (p, e) in num_prime::nt_funcs::factorize128(m) {
            if e >= 2 {
                out.push(p as u64);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Per-family constants shared by every `(b, c)`.
struct Classifier<'s> {
    spec: &'s FamilySpec,
    sieve: SquarefulSieve,
    a_primes: Vec<u64>,
    d_primes: Vec<u64>,
    opts: SampleOptions,
}

impl<'s> Classifier<'s> {
    fn new(spec: &'s FamilySpec, bmax: i64, cmax: i64, opts: SampleOptions) -> Result<Self> {
        if spec.a == 0 || spec.d == 0 {
            return Err(Error::InvalidArgument("a and d must be nonzero".into()));
        }
        for (p, cond) in &spec.local_conditions {
            if !arith::is_prime(*p) {
                return Err(Error::InvalidArgument(format!(
                    "local condition at non-prime {p}"
                )));
            }
            if let LocalCondition::ExplicitResidues { exponent, .. } = cond {
                if p.checked_pow(*exponent).is_none() || *exponent == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "bad exponent {exponent} at {p}"
                    )));
                }
            }
        }
        let (ak, dk) = crate::averages::kernels(spec.a, spec.d);
        let bound = {
            let (a, d) = (spec.a.unsigned_abs() as u128, spec.d.unsigned_abs() as u128);
            let (b, c) = (bmax.max(0) as u128, cmax.max(0) as u128);
            let terms = [
                18 * a * b * c * d,
                4 * b * b * b * d,
                b * b * c * c,
                4 * a * c * c * c,
                27 * a * a * d * d,
            ];
            terms.iter().fold(0u128, |s, t| s.saturating_add(*t))
        };
        Ok(Self {
            spec,
            sieve: SquarefulSieve::for_bound(bound),
            a_primes: arith::prime_divisors_i64(ak),
            d_primes: arith::prime_divisors_i64(dk),
            opts,
        })
    }

    fn classify(&self, b: i64, c: i64, st: &mut SampleStats) -> Result<Option<SampledForm>> {
        let (a, d) = (self.spec.a, self.spec.d);
        st.scanned += 1;
        let disc: num_bigint::BigInt = match forms::disc_i128(a, b, c, d) {
            Some(v) => v.into(),
            None => BinaryCubicForm::new(a, b, c, d).disc(),
        };
        if disc.is_zero() {
            st.degenerate += 1;
            return Ok(None);
        }
        let sign = if disc.is_positive() {
            DiscSign::Positive
        } else {
            DiscSign::Negative
        };
        if sign != self.spec.sign {
            return Ok(None);
        }
        st.in_sign += 1;
        if self.spec.selmer_sigma2 && [a, b, c, d].map(|x| x.rem_euclid(8)) != [1, 1, 0, 1] {
            return Ok(None);
        }
        for (&p, cond) in &self.spec.local_conditions {
            if let LocalCondition::ExplicitResidues { exponent, residues } = cond {
                let m = p.pow(*exponent);
                let key = (arith::rem_i64(b, m), arith::rem_i64(c, m));
                if !residues.contains(&key) {
                    return Ok(None);
                }
            }
        }
        let primes = match disc.magnitude().to_u128() {
            Some(n) => self.sieve.squareful_primes(n),
            None => arith::factorize(&disc)
                .into_iter()
                .filter(|(_, e)| *e >= 2)
                .map(|(p, _)| {
                    p.to_u64()
                        .ok_or_else(|| Error::RangeTooLarge("prime exceeds 64 bits".into()))
                })
                .collect::<Result<_>>()?,
        };
        if primes.iter().any(|&p| !local::maximal_small(a, b, c, d, p)) {
            return Ok(None);
        }
        st.maximal += 1;
        let co = |p: u64| [a, b, c, d].map(|x| arith::rem_i64(x, p));
        let a_ram = self
            .a_primes
            .iter()
            .all(|&p| local::suff_ramified_residues(co(p), p, RamSide::ASide, true));
        let d_ram = self
            .d_primes
            .iter()
            .all(|&p| local::suff_ramified_residues(co(p), p, RamSide::DSide, true));
        st.a_side_ram += u64::from(a_ram);
        st.d_side_ram += u64::from(d_ram);
        match sign {
            DiscSign::Positive => st.positive_disc += 1,
            DiscSign::Negative => st.negative_disc += 1,
        }
        let delta = if self.opts.with_delta {
            let ok = orbits::delta_dist_criterion_w(&BinaryCubicForm::new(a, b, c, d))?.is_ok();
            st.delta_checked += 1;
            st.delta_exists += u64::from(ok);
            Some(ok)
        } else {
            None
        };
        Ok(Some(SampledForm {
            coeffs: [a, b, c, d],
            disc,
            a_ram,
            d_ram,
            delta,
        }))
    }
}

/// Exhaustive scan in increasing `(b, c)` order, handing each surviving form to `sink`.
pub fn enumerate_family_with<F>(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
    opts: SampleOptions,
    mut sink: F,
) -> Result<SampleStats>
where
    F: FnMut(&SampledForm),
{
    let (bmax, cmax) = height_box(x, kind)?;
    let size = (2 * bmax as u128 + 1) * (2 * cmax as u128 + 1);
    if bmax < 0 || cmax < 0 {
        return Ok(SampleStats::default());
    }
    if size > MAX_SCAN {
        return Err(Error::RangeTooLarge(format!(
            "height box has {size} points"
        )));
    }
    let cl = Classifier::new(spec, bmax, cmax, opts)?;
    let bs: Vec<i64> = (-bmax..=bmax).collect();
    let mut stats = SampleStats::default();
    let workers = rayon::current_num_threads().max(1);
    for group in bs.chunks(B_BLOCK * workers) {
        let parts: Vec<Result<(Vec<SampledForm>, SampleStats)>> = group
            .par_chunks(B_BLOCK)
            .map(|block| {
                let mut st = SampleStats::default();
                let mut out = Vec::new();
                for &b in block {
                    for c in -cmax..=cmax {
                        if let Some(f) = cl.classify(b, c, &mut st)? {
                            out.push(f);
                        }
                    }
                }
                Ok((out, st))
            })
            .collect();
        for part in parts {
            let (forms, st) = part?;
            stats.add(&st);
            forms.iter().for_each(&mut sink);
        }
    }
    Ok(stats)
}

pub fn enumerate_family(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
    opts: SampleOptions,
) -> Result<FamilySample> {
    let mut forms = Vec::new();
    let stats = enumerate_family_with(spec, x, kind, opts, |f| forms.push(f.clone()))?;
    Ok(FamilySample {
        spec: spec.clone(),
        x,
        kind,
        draws: None,
        seed: None,
        forms,
        stats,
    })
}

/// Uniform draws (with replacement) from the height box; forms appear in draw order.
pub fn sample_family_with<F>(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
    draws: u64,
    seed: u64,
    opts: SampleOptions,
    mut sink: F,
) -> Result<SampleStats>
where
    F: FnMut(&SampledForm),
{
    let (bmax, cmax) = height_box(x, kind)?;
    if bmax < 0 || cmax < 0 || draws == 0 {
        return Ok(SampleStats::default());
    }
    let cl = Classifier::new(spec, bmax, cmax, opts)?;
    let chunks = draws.div_ceil(SAMPLE_CHUNK as u64);
    let mut stats = SampleStats::default();
    let workers = rayon::current_num_threads().max(1) as u64 * 4;
    let mut start = 0;
    while start < chunks {
        let end = (start + workers).min(chunks);
        let parts: Vec<Result<(Vec<SampledForm>, SampleStats)>> = (start..end)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk);
                let n = (draws - chunk * SAMPLE_CHUNK as u64).min(SAMPLE_CHUNK as u64);
                let mut st = SampleStats::default();
                let mut out = Vec::new();
                for _ in 0..n {
                    let b = rng.gen_range(-bmax..=bmax);
                    let c = rng.gen_range(-cmax..=cmax);
                    if let Some(f) = cl.classify(b, c, &mut st)? {
                        out.push(f);
                    }
                }
                Ok((out, st))
            })
            .collect();
        for part in parts {
            let (forms, st) = part?;
            stats.add(&st);
            forms.iter().for_each(&mut sink);
        }
        start = end;
    }
    Ok(stats)
}

pub fn sample_family(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
    draws: u64,
    seed: u64,
    opts: SampleOptions,
) -> Result<FamilySample> {
    let mut forms = Vec::new();
    let stats = sample_family_with(spec, x, kind, draws, seed, opts, |f| forms.push(f.clone()))?;
    Ok(FamilySample {
        spec: spec.clone(),
        x,
        kind,
        draws: Some(draws),
        seed: Some(seed),
        forms,
        stats,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    /// Binomial standard error of `fraction`.
    pub std_err: f64,
}

impl DensityEstimate {
    pub fn new(hits: u64, trials: u64) -> Self {
        let fraction = ratio(hits, trials);
        let std_err = if trials == 0 {
            0.0
        } else {
            (fraction * (1.0 - fraction) / trials as f64).sqrt()
        };
        Self {
            hits,
            trials,
            fraction,
            std_err,
        }
    }

    /// Whether `target` lies within `k` standard errors, with a floor for degenerate fractions.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let floor = if self.trials == 0 {
            0.0
        } else {
            1.0 / self.trials as f64
        };
        (self.fraction - target).abs() <= k * self.std_err.max(floor)
    }
}

/// Fraction of listed (maximal) forms whose Δ-distinguished orbit has an integral point in W.
pub fn empirical_delta_density(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
) -> Result<DensityEstimate> {
    let st = enumerate_family_with(spec, x, kind, SampleOptions { with_delta: true }, |_| {})?;
    Ok(DensityEstimate::new(st.delta_exists, st.delta_checked))
}

pub fn sampled_delta_density(
    spec: &FamilySpec,
    x: f64,
    kind: HeightKind,
    draws: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    let st = sample_family_with(
        spec,
        x,
        kind,
        draws,
        seed,
        SampleOptions { with_delta: true },
        |_| {},
    )?;
    Ok(DensityEstimate::new(st.delta_exists, st.delta_checked))
}

/// `∏_{p ≤ bound} maximal_density(p, a, d)`.
pub fn maximal_euler_product(a: i64, d: i64, bound: u64) -> Result<Q> {
    let mut out = Q::from_integer(1.into());
    for p in arith::primes_up_to(bound) {
        out *= local::maximal_density(p, a, d)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_is_strict() {
        assert_eq!(height_box(10.0, HeightKind::Balanced).unwrap(), (9, 9));
        assert_eq!(height_box(10.5, HeightKind::Weighted).unwrap(), (10, 110));
        assert_eq!(height_box(3.0, HeightKind::Weighted).unwrap(), (2, 8));
    }

    #[test]
    fn squareful_primes_small() {
        let s = SquarefulSieve::with_limit(100);
        assert_eq!(s.squareful_primes(4 * 9 * 5), vec![2, 3]);
        assert_eq!(s.squareful_primes(101 * 101 * 7), vec![101]);
        assert_eq!(s.squareful_primes(101 * 103), Vec::<u64>::new());
        assert_eq!(
            s.squareful_primes(1_000_003u128.pow(2) * 1_000_033),
            vec![1_000_003]
        );
    }
}

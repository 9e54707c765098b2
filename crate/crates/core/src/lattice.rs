//! Counting integral ternary quadratic forms of fixed determinant in skewed boxes.
//!
//! A form is stored as `(a, b, c, d, e, f)` with Gram rows `(a, b/2, d/2)`, `(b/2, c, e/2)`,
//! `(d/2, e/2, f)`, so that `k = 4·det` is an integer and
//! `−k = f(b² − 4ac) + (ae² − bed + cd²)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{LatticeClass, Mat3};

/// Torus weights `(s₁ exponent, s₂ exponent)` for the coefficient ranges a, b, c, d, e, f.
pub const SKEW_WEIGHTS: [(i32, i32); 6] = [(-4, -2), (-1, -2), (2, -2), (-1, 1), (2, 1), (2, 4)];

/// Largest coefficient range accepted by the counters.
pub const MAX_RANGE: i64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewBox {
    pub s1: f64,
    pub s2: f64,
    pub y: f64,
    /// Half-widths of the undilated box per coefficient.
    pub base: [f64; 6],
}

impl SkewBox {
    pub fn new(s1: f64, s2: f64, y: f64) -> Result<Self> {
        Self::with_base(s1, s2, y, [1.0; 6])
    }

    pub fn with_base(s1: f64, s2: f64, y: f64, base: [f64; 6]) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(s1) && ok(s2) && ok(y) && base.iter().all(|&b| ok(b))) {
            return Err(Error::InvalidArgument(
                "skew, dilation and base must be positive".into(),
            ));
        }
        Ok(Self { s1, s2, y, base })
    }

    /// Integer half-widths `R_α`.
    pub fn ranges(&self) -> Result<[i64; 6]> {
        let mut out = [0i64; 6];
        for (i, &(e1, e2)) in SKEW_WEIGHTS.iter().enumerate() {
            let r = (self.s1.powi(e1) * self.s2.powi(e2) * self.y * self.base[i] + 1e-9).floor();
            if r > MAX_RANGE as f64 {
                return Err(Error::RangeTooLarge(format!(
                    "range {r} exceeds {MAX_RANGE}"
                )));
            }
            out[i] = r as i64;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBreakdown {
    pub total: u64,
    pub n_star: u64,
    pub n_delta_zero: u64,
    pub n_delta_nonzero: u64,
    pub n_star_delta_zero: u64,
    pub n_star_delta_nonzero: u64,
}

impl CountBreakdown {
    fn add(mut self, o: Self) -> Self {
        self.total += o.total;
        self.n_star += o.n_star;
        self.n_delta_zero += o.n_delta_zero;
        self.n_delta_nonzero += o.n_delta_nonzero;
        self.n_star_delta_zero += o.n_star_delta_zero;
        self.n_star_delta_nonzero += o.n_star_delta_nonzero;
        self
    }

    fn record(&mut self, a: i64, delta_zero: bool, n: u64) {
        self.total += n;
        if delta_zero {
            self.n_delta_zero += n;
        } else {
            self.n_delta_nonzero += n;
        }
        if a != 0 {
            self.n_star += n;
            if delta_zero {
                self.n_star_delta_zero += n;
            } else {
                self.n_star_delta_nonzero += n;
            }
        }
    }

    fn scaled(mut self, w: u64) -> Self {
        self.total *= w;
        self.n_star *= w;
        self.n_delta_zero *= w;
        self.n_delta_nonzero *= w;
        self.n_star_delta_zero *= w;
        self.n_star_delta_nonzero *= w;
        self
    }

    pub fn is_consistent(&self) -> bool {
        self.total == self.n_delta_zero + self.n_delta_nonzero
            && self.n_star == self.n_star_delta_zero + self.n_star_delta_nonzero
            && self.n_star <= self.total
    }
}

/// Coordinate step for the off-diagonal coefficients b, d, e.
fn off_step(class: LatticeClass, k: i64) -> Result<i64> {
    match class {
        LatticeClass::HalfIntegral => Ok(1),
        LatticeClass::IntegerMatrix if k % 4 == 0 => Ok(2),
        LatticeClass::IntegerMatrix => Err(Error::InconsistentParity(format!(
            "4·det of an integer matrix is divisible by 4, k = {k}"
        ))),
        LatticeClass::General => Err(Error::InvalidArgument(
            "counting needs an integral class".into(),
        )),
    }
}

fn largest_multiple(r: i64, step: i64) -> i64 {
    r - r.rem_euclid(step)
}

/// Number of `e` in the progression `lo, lo+h, …, hi` with `n(e) ≡ 0 (mod Δ)` and `|n(e)/Δ| ≤ rf`,
/// where `n(e) = −k − (ae² − bde + cd²)`.
#[allow(clippy::too_many_arguments)]
fn count_e(
    k: i64,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    lo: i64,
    hi: i64,
    h: i64,
    delta: i64,
    rf: i64,
) -> u64 {
    let n = |e: i64| -> i128 {
        let (a, b, c, d, e) = (a as i128, b as i128, c as i128, d as i128, e as i128);
        -(k as i128) - (a * e * e - b * d * e + c * d * d)
    };
    if lo > hi {
        return 0;
    }
    if delta == 0 {
        let span = 2 * rf as u64 + 1;
        let mut hits = 0;
        let mut e = lo;
        while e <= hi {
            if n(e) == 0 {
                hits += span;
            }
            e += h;
        }
        return hits;
    }
    let m = delta.unsigned_abs() as i128;
    let md = |x: i128| x.rem_euclid(m) as i64;
    let (a1, b1, h1) = (a as i128, b as i128, h as i128);
    let d1 = d as i128;
    // residues stay below |Δ| < 2⁵¹, so the walk runs in 64-bit arithmetic
    let mut r = md(n(lo));
    // n(e + h) − n(e) = −(2ahe + ah² − bdh), whose own step is −2ah²
    let mut t = md(-(2 * a1 * h1 * lo as i128 + a1 * h1 * h1 - b1 * d1 * h1));
    let u = md(-2 * a1 * h1 * h1);
    let m = m as i64;
    let mut hits = 0;
    let mut e = lo;
    loop {
        if r == 0 {
            let f = n(e) / delta as i128;
            if f.abs() <= rf as i128 {
                hits += 1;
            }
        }
        e += h;
        if e > hi {
            break;
        }
        r += t;
        if r >= m {
            r -= m;
        }
        t += u;
        if t >= m {
            t -= m;
        }
    }
    hits
}

/// Five-loop count of forms with `4·det = k` and `|α| ≤ R_α` for each coefficient.
pub fn count_in_ranges(k: i64, r: [i64; 6], class: LatticeClass) -> Result<CountBreakdown> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be nonzero".into()));
    }
    if r.iter().any(|&x| !(0..=MAX_RANGE).contains(&x)) {
        return Err(Error::RangeTooLarge(format!(
            "ranges must lie in [0, {MAX_RANGE}]"
        )));
    }
    let h = off_step(class, k)?;
    // integer-matrix forms have even doubled off-diagonals; f stays unrestricted
    let [ra, rb, rc, rd, re, rf] = r;
    let (rb, rd, re) = (
        largest_multiple(rb, h),
        largest_multiple(rd, h),
        largest_multiple(re, h),
    );
    let out = (-ra..=ra)
        .into_par_iter()
        .map(|a| {
            let mut acc = CountBreakdown::default();
            let mut b = 0;
            while b <= rb {
                let wb = if b == 0 { 1 } else { 2 };
                for c in -rc..=rc {
                    let delta = b as i128 * b as i128 - 4 * a as i128 * c as i128;
                    let delta = i64::try_from(delta).expect("ranges keep Δ in 64 bits");
                    let mut d = 0;
                    while d <= rd {
                        let wd = if d == 0 { 1 } else { 2 };
                        let hits = count_e(k, a, b, c, d, -re, re, h, delta, rf);
                        if hits > 0 {
                            let mut part = CountBreakdown::default();
                            part.record(a, delta == 0, hits);
                            acc = acc.add(part.scaled(wb * wd));
                        }
                        d += h;
                    }
                }
                b += h;
            }
            acc
        })
        .reduce(CountBreakdown::default, CountBreakdown::add);
    Ok(out)
}

pub fn count_fixed_det(k: i64, bx: &SkewBox, class: LatticeClass) -> Result<CountBreakdown> {
    count_in_ranges(k, bx.ranges()?, class)
}

/// `4·det` of the form, computed from the doubled Gram matrix.
pub fn four_det(v: &[i64; 6]) -> i64 {
    let [a, b, c, d, e, f] = *v;
    let m = [[2 * a, b, d], [b, 2 * c, e], [d, e, 2 * f]];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    det / 2
}

fn classify_hit(v: &[i64; 6]) -> (i64, bool) {
    (v[0], v[1] * v[1] - 4 * v[0] * v[2] == 0)
}

/// Exhaustive six-loop count; only for tiny boxes.
pub fn count_bruteforce(k: i64, r: [i64; 6], class: LatticeClass) -> Result<CountBreakdown> {
    let work: u128 = r.iter().map(|&x| 2 * x as u128 + 1).product();
    if work > 5_000_000_000 || r.iter().any(|&x| x > 1 << 20) {
        return Err(Error::RangeTooLarge(
            "brute force is limited to tiny boxes".into(),
        ));
    }
    let even_only = match class {
        LatticeClass::HalfIntegral => false,
        LatticeClass::IntegerMatrix => true,
        LatticeClass::General => {
            return Err(Error::InvalidArgument(
                "counting needs an integral class".into(),
            ))
        }
    };
    let out = (-r[0]..=r[0])
        .into_par_iter()
        .map(|a| {
            let mut acc = CountBreakdown::default();
            for b in -r[1]..=r[1] {
                for c in -r[2]..=r[2] {
                    for d in -r[3]..=r[3] {
                        for e in -r[4]..=r[4] {
                            if even_only && (b % 2 != 0 || d % 2 != 0 || e % 2 != 0) {
                                continue;
                            }
                            for f in -r[5]..=r[5] {
                                let v = [a, b, c, d, e, f];
                                if four_det(&v) == k {
                                    let (a, dz) = classify_hit(&v);
                                    acc.record(a, dz, 1);
                                }
                            }
                        }
                    }
                }
            }
            acc
        })
        .reduce(CountBreakdown::default, CountBreakdown::add);
    Ok(out)
}

/// Histogram of `4·det` over a tiny box, keyed by `k` in `[-kmax, kmax]`.
pub fn four_det_histogram(r: [i64; 6], kmax: i64) -> Vec<(i64, CountBreakdown)> {
    let mut hist = vec![CountBreakdown::default(); (2 * kmax + 1) as usize];
    for a in -r[0]..=r[0] {
        for b in -r[1]..=r[1] {
            for c in -r[2]..=r[2] {
                for d in -r[3]..=r[3] {
                    for e in -r[4]..=r[4] {
                        for f in -r[5]..=r[5] {
                            let v = [a, b, c, d, e, f];
                            let k = four_det(&v);
                            if k.abs() <= kmax {
                                let (a, dz) = classify_hit(&v);
                                hist[(k + kmax) as usize].record(a, dz, 1);
                            }
                        }
                    }
                }
            }
        }
    }
    hist.into_iter()
        .enumerate()
        .map(|(i, c)| (i as i64 - kmax, c))
        .collect()
}

/// `g A gᵀ` on coefficient vectors.
pub fn act(g: &Mat3, v: &[i64; 6]) -> [i64; 6] {
    let [a, b, c, d, e, f] = *v;
    // doubled Gram matrix keeps everything integral
    let m = [[2 * a, b, d], [b, 2 * c, e], [d, e, 2 * f]];
    let g = g.0;
    let mut t = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = (0..3)
                .flat_map(|p| (0..3).map(move |q| (p, q)))
                .map(|(p, q)| g[i][p] * m[p][q] * g[j][q])
                .sum();
        }
    }
    [
        t[0][0] / 2,
        t[0][1],
        t[1][1] / 2,
        t[0][2],
        t[1][2],
        t[2][2] / 2,
    ]
}

fn inverse_unimodular(g: &Mat3) -> Result<Mat3> {
    if g.det() != 1 {
        return Err(Error::NotUnimodular(g.det().to_string()));
    }
    let m = g.0;
    let mut inv = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    Ok(Mat3(inv))
}

/// Count of forms with `4·det = k` in the image `g·box = {g A gᵀ : A ∈ box}`, by enumerating an
/// enclosing box and pulling each candidate back through `g⁻¹`.
pub fn count_sheared(k: i64, r: [i64; 6], g: &Mat3) -> Result<u64> {
    let ginv = inverse_unimodular(g)?;
    // image coordinates are linear in the source ones; bound each by the sum of absolute coefficients
    let mut hull = [0i64; 6];
    for (i, slot) in hull.iter_mut().enumerate() {
        let mut s = 0i64;
        for j in 0..6 {
            let mut unit = [0i64; 6];
            unit[j] = 1;
            let img = act(g, &unit);
            s += img[i].abs() * r[j];
        }
        *slot = s;
    }
    let work: u128 = hull.iter().take(5).map(|&x| 2 * x as u128 + 1).product();
    if work > 2_000_000_000 {
        return Err(Error::RangeTooLarge("sheared hull too large".into()));
    }
    let inside = |v: &[i64; 6]| {
        let w = act(&ginv, v);
        (0..6).all(|i| w[i].abs() <= r[i])
    };
    let total = (-hull[0]..=hull[0])
        .into_par_iter()
        .map(|a| {
            let mut n = 0u64;
            for b in -hull[1]..=hull[1] {
                for c in -hull[2]..=hull[2] {
                    let delta = b * b - 4 * a * c;
                    for d in -hull[3]..=hull[3] {
                        for e in -hull[4]..=hull[4] {
                            let rest = -k - (a * e * e - b * e * d + c * d * d);
                            if delta == 0 {
                                if rest == 0 {
                                    for f in -hull[5]..=hull[5] {
                                        n += u64::from(inside(&[a, b, c, d, e, f]));
                                    }
                                }
                            } else if rest % delta == 0 {
                                let f = rest / delta;
                                if f.abs() <= hull[5] {
                                    n += u64::from(inside(&[a, b, c, d, e, f]));
                                }
                            }
                        }
                    }
                }
            }
            n
        })
        .sum();
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewRow {
    pub s1: f64,
    pub s2: f64,
    pub counts: CountBreakdown,
    /// `N / N` at `s = (1, 1)`.
    pub ratio: f64,
    /// Observed counts over the bound shapes `s₁³Y³`, `s₂³Y³ + s₁⁴s₂⁵Y²`, `s₂³Y³`.
    pub vs_delta_nonzero: f64,
    pub vs_delta_zero: f64,
    pub vs_star_delta_zero: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewTable {
    pub k: i64,
    pub y: f64,
    pub rows: Vec<SkewRow>,
    /// Fitted envelope constants: the largest observed ratio per bound shape.
    pub c_delta_nonzero: f64,
    pub c_delta_zero: f64,
    pub c_star_delta_zero: f64,
}

pub fn skew_ratio(k: i64, y: f64, s_list: &[(f64, f64)], class: LatticeClass) -> Result<SkewTable> {
    let base = count_fixed_det(k, &SkewBox::new(1.0, 1.0, y)?, class)?;
    let mut rows = Vec::new();
    for &(s1, s2) in s_list {
        let c = count_fixed_det(k, &SkewBox::new(s1, s2, y)?, class)?;
        let y3 = y.powi(3);
        rows.push(SkewRow {
            s1,
            s2,
            counts: c,
            ratio: if base.total == 0 {
                f64::NAN
            } else {
                c.total as f64 / base.total as f64
            },
            vs_delta_nonzero: c.n_delta_nonzero as f64 / (s1.powi(3) * y3),
            vs_delta_zero: c.n_delta_zero as f64
                / (s2.powi(3) * y3 + s1.powi(4) * s2.powi(5) * y * y),
            vs_star_delta_zero: c.n_star_delta_zero as f64 / (s2.powi(3) * y3),
        });
    }
    let max = |f: fn(&SkewRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(SkewTable {
        k,
        y,
        c_delta_nonzero: max(|r| r.vs_delta_nonzero),
        c_delta_zero: max(|r| r.vs_delta_zero),
        c_star_delta_zero: max(|r| r.vs_star_delta_zero),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub k: i64,
    pub points: Vec<(f64, u64)>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares slope of `log N` against `log Y` on the unskewed unit box.
pub fn growth_exponent(k: i64, ys: &[f64], class: LatticeClass) -> Result<GrowthFit> {
    off_step(class, k)?;
    let mut sorted = ys.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    if sorted.len() < 3 || sorted[0] <= 1.0 {
        return Err(Error::InvalidArgument(
            "need at least three distinct dilations above 1".into(),
        ));
    }
    let mut points = Vec::new();
    for &y in &sorted {
        let n = count_fixed_det(k, &SkewBox::new(1.0, 1.0, y)?, class)?.total;
        if n == 0 {
            return Err(Error::InvalidArgument(format!("no forms at Y = {y}")));
        }
        points.push((y, n));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let zs: Vec<f64> = points.iter().map(|p| (p.1 as f64).ln()).collect();
    let m = xs.len() as f64;
    let (mx, mz) = (xs.iter().sum::<f64>() / m, zs.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxz: f64 = xs.iter().zip(&zs).map(|(x, z)| (x - mx) * (z - mz)).sum();
    let slope = sxz / sxx;
    Ok(GrowthFit {
        k,
        points,
        slope,
        intercept: mz - slope * mx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_det_of_diagonal() {
        assert_eq!(four_det(&[1, 0, 1, 0, 0, 1]), 4);
        assert_eq!(four_det(&[1, 1, 0, 0, 0, -1]), 1);
    }

    #[test]
    fn skew_ranges_at_identity() {
        assert_eq!(
            SkewBox::new(1.0, 1.0, 5.0).unwrap().ranges().unwrap(),
            [5; 6]
        );
        let r = SkewBox::new(2.0, 1.0, 32.0).unwrap().ranges().unwrap();
        assert_eq!(r, [2, 16, 128, 16, 128, 128]);
    }

    #[test]
    fn act_preserves_four_det() {
        let g = Mat3([[1, 2, 0], [0, 1, -1], [0, 0, 1]]);
        let v = [1, 3, -2, 1, 0, 5];
        assert_eq!(four_det(&act(&g, &v)), four_det(&v));
        let gi = inverse_unimodular(&g).unwrap();
        assert_eq!(act(&gi, &act(&g, &v)), v);
    }
}

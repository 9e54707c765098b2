//! Analysis of binary cubic forms modulo p and p²: splitting types, maximality,
//! sufficient ramification, κ-invariants, local densities and local masses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_cube, is_qr, mod_big, mulmod, q, qi, Q};
use crate::error::{Error, Result};
use crate::forms::{BinaryCubicForm, LatticeClass, TernaryQuadraticForm};
use crate::fp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplittingTypeP {
    T111,
    T12,
    T3,
    /// Double root away from (1,0).
    T11sq,
    /// Double root at (1,0).
    T1sq1,
    T1cube,
}

impl SplittingTypeP {
    pub const ALL: [SplittingTypeP; 6] = [
        SplittingTypeP::T111,
        SplittingTypeP::T12,
        SplittingTypeP::T3,
        SplittingTypeP::T11sq,
        SplittingTypeP::T1sq1,
        SplittingTypeP::T1cube,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SplittingTypeP::T111 => "(111)",
            SplittingTypeP::T12 => "(12)",
            SplittingTypeP::T3 => "(3)",
            SplittingTypeP::T11sq => "(11^2)",
            SplittingTypeP::T1sq1 => "(1^21)",
            SplittingTypeP::T1cube => "(1^3)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kappa {
    Minus,
    Zero,
    Plus,
}

impl Kappa {
    pub fn value(self) -> i32 {
        match self {
            Kappa::Minus => -1,
            Kappa::Zero => 0,
            Kappa::Plus => 1,
        }
    }

    pub fn from_value(v: i32) -> Option<Self> {
        match v {
            -1 => Some(Kappa::Minus),
            0 => Some(Kappa::Zero),
            1 => Some(Kappa::Plus),
            _ => None,
        }
    }

    pub const ALL: [Kappa; 3] = [Kappa::Minus, Kappa::Zero, Kappa::Plus];
}

impl Serialize for Kappa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.value())
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = i32::deserialize(d)?;
        Kappa::from_value(v).ok_or_else(|| D::Error::custom(format!("kappa out of range: {v}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RamSide {
    /// `f(x,1)` is a unit times a square mod p, with p | a_k.
    ASide,
    /// `f(1,y)` is a unit times a square mod p, with p | d_k.
    DSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDensityReport {
    pub p: u64,
    #[serde(with = "arith::qser")]
    pub maximal_density: Q,
    #[serde(with = "arith::qser")]
    pub aside_ram_density: Q,
    #[serde(with = "arith::qser")]
    pub dside_ram_density: Q,
    pub splitting_histogram: BTreeMap<SplittingTypeP, u64>,
    pub maximal_count: u64,
    pub total: u64,
}

fn residues(f: &BinaryCubicForm, m: u64) -> [u64; 4] {
    [
        mod_big(&f.a, m),
        mod_big(&f.b, m),
        mod_big(&f.c, m),
        mod_big(&f.d, m),
    ]
}

/// Multiplicity list `(degree, multiplicity, at_infinity)` of the factorization of
/// `a x³ + b x²y + c xy² + d y³` over F_p.
fn factor_pattern(co: [u64; 4], p: u64) -> Result<Vec<(u32, u32, bool)>> {
    if co.iter().all(|&x| x % p == 0) {
        return Err(Error::Imprimitive(p));
    }
    let f: fp::FpPoly = fp::trim(vec![co[3] % p, co[2] % p, co[1] % p, co[0] % p]);
    let n = fp::deg(&f) as u32;
    let mut out = Vec::new();
    if n < 3 {
        out.push((1, 3 - n, true));
    }
    if n == 0 {
        return Ok(out);
    }
    if p < 1000 {
        let mut g = f.clone();
        let mut r = 0;
        while r < p && fp::deg(&g) >= 1 {
            if fp::eval(&g, r, p) == 0 {
                let mut mult = 0;
                while fp::deg(&g) >= 1 && fp::eval(&g, r, p) == 0 {
                    g = divide_linear(&g, r, p);
                    mult += 1;
                }
                out.push((1, mult, false));
            }
            r += 1;
        }
        let rest = fp::deg(&g);
        if rest >= 2 {
            out.push((rest as u32, 1, false));
        }
        return Ok(out);
    }
    let h = fp::gcd(&f, &fp::derivative(&f, p), p);
    match fp::deg(&h) {
        0 => {
            let k = fp::count_roots(&f, p) as u32;
            for _ in 0..k {
                out.push((1, 1, false));
            }
            if n > k {
                out.push((n - k, 1, false));
            }
        }
        1 => {
            out.push((1, 2, false));
            if n == 3 {
                out.push((1, 1, false));
            }
        }
        _ => out.push((1, 3, false)),
    }
    Ok(out)
}

fn divide_linear(g: &fp::FpPoly, r: u64, p: u64) -> fp::FpPoly {
    // synthetic division by (x - r)
    let n = g.len();
    let mut out = vec![0u64; n - 1];
    let mut carry = 0u64;
    for i in (1..n).rev() {
        carry = (g[i] + mulmod(carry, r, p)) % p;
        out[i - 1] = carry;
    }
    fp::trim(out)
}

fn classify_pattern(pat: &[(u32, u32, bool)]) -> SplittingTypeP {
    if pat.iter().any(|&(_, m, _)| m == 3) {
        return SplittingTypeP::T1cube;
    }
    if let Some(&(_, _, inf)) = pat.iter().find(|&&(_, m, _)| m == 2) {
        return if inf {
            SplittingTypeP::T1sq1
        } else {
            SplittingTypeP::T11sq
        };
    }
    let mut degs: Vec<u32> = pat.iter().map(|&(d, _, _)| d).collect();
    degs.sort();
    match degs.as_slice() {
        [1, 1, 1] => SplittingTypeP::T111,
        [1, 2] => SplittingTypeP::T12,
        _ => SplittingTypeP::T3,
    }
}

pub fn splitting_type_residues(co: [u64; 4], p: u64) -> Result<SplittingTypeP> {
    Ok(classify_pattern(&factor_pattern(co, p)?))
}

pub fn splitting_type_mod_p(f: &BinaryCubicForm, p: u64) -> Result<SplittingTypeP> {
    check_prime(p)?;
    splitting_type_residues(residues(f, p), p)
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Affine roots `r` of `f(x,1)` mod p with `f'(r,1) ≡ 0`.
fn multiple_affine_roots(co: [u64; 4], p: u64) -> Vec<u64> {
    let f: fp::FpPoly = fp::trim(vec![co[3] % p, co[2] % p, co[1] % p, co[0] % p]);
    if fp::deg(&f) <= 0 {
        return Vec::new();
    }
    // formal derivative of the integer polynomial, reduced mod p
    let df: fp::FpPoly = fp::trim(vec![co[2] % p, mulmod(2, co[1], p), mulmod(3, co[0], p)]);
    if p < 1000 {
        return (0..p)
            .filter(|&r| fp::eval(&f, r, p) == 0 && fp::eval(&df, r, p) == 0)
            .collect();
    }
    let h = fp::gcd(&f, &df, p);
    fp::root_of_power(&h, p).into_iter().collect()
}

/// Dedekind's criterion on residues modulo p² (requires p < 2³¹).
pub fn maximal_residues(co: [u64; 4], p: u64) -> bool {
    let m = p * p;
    let [a, b, c, d] = co.map(|x| x % m);
    if [a, b, c, d].iter().all(|&x| x % p == 0) {
        return false;
    }
    if a == 0 && b % p == 0 {
        return false;
    }
    for r in multiple_affine_roots([a, b, c, d], p) {
        let r2 = mulmod(r, r, m);
        let v = (mulmod(a, mulmod(r2, r, m), m) + mulmod(b, r2, m) + mulmod(c, r, m) + d) % m;
        if v == 0 {
            return false;
        }
    }
    true
}

/// Dedekind's criterion for integer coefficients that fit in 64 bits.
pub fn maximal_small(a: i64, b: i64, c: i64, d: i64, p: u64) -> bool {
    if p < (1 << 31) {
        let m = p * p;
        return maximal_residues(
            [
                arith::rem_i64(a, m),
                arith::rem_i64(b, m),
                arith::rem_i64(c, m),
                arith::rem_i64(d, m),
            ],
            p,
        );
    }
    maximal_big(&BinaryCubicForm::new(a, b, c, d), p)
}

fn maximal_big(f: &BinaryCubicForm, p: u64) -> bool {
    if p < (1 << 31) {
        return maximal_residues(residues(f, p * p), p);
    }
    let co = residues(f, p);
    if co.iter().all(|&x| x == 0) {
        return false;
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    if co[0] == 0 && co[1] == 0 && (&f.a % &p2).is_zero() {
        return false;
    }
    for r in multiple_affine_roots(co, p) {
        let v = f.eval(&BigInt::from(r), &BigInt::one());
        if (&v % &p2).is_zero() {
            return false;
        }
    }
    true
}

pub fn is_maximal_at(f: &BinaryCubicForm, p: u64) -> Result<bool> {
    check_prime(p)?;
    if f.disc().is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(maximal_big(f, p))
}

/// Maximal at every prime: only primes with p² | disc need checking.
pub fn is_maximal(f: &BinaryCubicForm) -> Result<bool> {
    Ok(nonmaximal_prime(f)?.is_none())
}

/// The smallest prime at which `f` fails to be maximal, if any.
pub fn nonmaximal_prime(f: &BinaryCubicForm) -> Result<Option<u64>> {
    let disc = f.disc();
    if disc.is_zero() {
        return Err(Error::DegenerateForm);
    }
    for (p, e) in arith::factorize(&disc) {
        if e >= 2 {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::RangeTooLarge("prime exceeds 64 bits".into()))?;
            if !maximal_big(f, p) {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// `β x² + γ x + δ` (or lower degree) is a unit times a square mod p.
fn unit_times_square(co: [u64; 3], p: u64) -> bool {
    let [beta, gamma, delta] = co.map(|x| x % p);
    if beta != 0 {
        let disc = (mulmod(gamma, gamma, p) + p - mulmod(4 % p, mulmod(beta, delta, p), p)) % p;
        disc == 0
    } else if gamma != 0 {
        false
    } else {
        delta != 0
    }
}

/// Sufficient ramification from residues mod p and the parity of the relevant valuation.
pub fn suff_ramified_residues(co: [u64; 4], p: u64, side: RamSide, in_k: bool) -> bool {
    if !in_k {
        return false;
    }
    match side {
        RamSide::ASide => co[0] % p == 0 && unit_times_square([co[1], co[2], co[3]], p),
        RamSide::DSide => co[3] % p == 0 && unit_times_square([co[2], co[1], co[0]], p),
    }
}

pub fn is_suff_ramified(f: &BinaryCubicForm, p: u64, side: RamSide) -> bool {
    let outer = match side {
        RamSide::ASide => &f.a,
        RamSide::DSide => &f.d,
    };
    if outer.is_zero() {
        return false;
    }
    let in_k = arith::valuation_big(outer, p) % 2 == 1;
    suff_ramified_residues(residues(f, p), p, side, in_k)
}

fn q_mod_p(x: &Q, p: u64) -> Result<u64> {
    let den = mod_big(x.denom(), p);
    if den == 0 {
        return Err(Error::InvalidArgument(format!(
            "entry {x} is not {p}-integral"
        )));
    }
    Ok(mulmod(mod_big(x.numer(), p), arith::invmod(den, p), p))
}

pub fn kappa_p(a: &TernaryQuadraticForm, p: u64) -> Result<Kappa> {
    check_prime(p)?;
    if p == 2 {
        return kappa_2(a);
    }
    let mut g = [[0u64; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = q_mod_p(a.entry(i, j), p)?;
        }
    }
    let det = q_mod_p(&a.det(), p)?;
    if det != 0 {
        return Ok(Kappa::Zero);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m = (mulmod(g[i][i], g[j][j], p) + p - mulmod(g[i][j], g[i][j], p)) % p;
        if m != 0 {
            return Ok(if is_qr((p - m) % p, p) {
                Kappa::Plus
            } else {
                Kappa::Minus
            });
        }
    }
    Err(Error::UnsupportedReduction(p))
}

fn kappa_2(a: &TernaryQuadraticForm) -> Result<Kappa> {
    if a.lattice_class() == LatticeClass::General {
        return Err(Error::InvalidArgument("form is not 2-integral".into()));
    }
    let four_det = a.det() * qi(4);
    if mod_big(&four_det.to_integer(), 2) == 1 {
        return Ok(Kappa::Zero);
    }
    let co: Vec<u64> = a
        .coefficients()
        .iter()
        .map(|x| mod_big(&x.to_integer(), 2))
        .collect();
    let mut points = 0;
    for v in 1..8u64 {
        let (x, y, z) = (v & 1, (v >> 1) & 1, (v >> 2) & 1);
        let val = co[0] * x + co[1] * y + co[2] * z + co[3] * x * y + co[4] * x * z + co[5] * y * z;
        if val % 2 == 0 {
            points += 1;
        }
    }
    match points {
        5 => Ok(Kappa::Plus),
        1 => Ok(Kappa::Minus),
        _ => Err(Error::UnsupportedReduction(2)),
    }
}

pub fn kappa_inf(a: &TernaryQuadraticForm) -> Result<Kappa> {
    if a.det().is_zero() {
        return Err(Error::SingularForm);
    }
    let (pos, neg) = signature(a);
    Ok(if pos == 3 || neg == 3 {
        Kappa::Minus
    } else {
        Kappa::Plus
    })
}

/// Mutually orthogonal rational basis `u_i` with values `A(u_i, u_i)`.
pub fn orthogonal_basis(a: &TernaryQuadraticForm) -> Vec<([Q; 3], Q)> {
    let unit = |i: usize| {
        let mut v: [Q; 3] = Default::default();
        v[i] = Q::one();
        v
    };
    let mut rest: Vec<[Q; 3]> = (0..3).map(unit).collect();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let pivot = match rest.iter().position(|v| !a.value(v).is_zero()) {
            Some(i) => rest.remove(i),
            None => {
                let mut found = None;
                'outer: for i in 0..rest.len() {
                    for j in (i + 1)..rest.len() {
                        if !a.bilinear(&rest[i], &rest[j]).is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    None => {
                        for v in rest.drain(..) {
                            out.push((v, Q::zero()));
                        }
                        break;
                    }
                    Some((i, j)) => {
                        let s = [0, 1, 2].map(|k| &rest[i][k] + &rest[j][k]);
                        rest.remove(i);
                        s
                    }
                }
            }
        };
        let val = a.value(&pivot);
        rest = rest
            .into_iter()
            .map(|w| {
                let t = a.bilinear(&w, &pivot) / &val;
                [0, 1, 2].map(|k| &w[k] - &t * &pivot[k])
            })
            .collect();
        out.push((pivot, val));
    }
    out
}

/// Numbers of positive and negative squares.
pub fn signature(a: &TernaryQuadraticForm) -> (usize, usize) {
    let b = orthogonal_basis(a);
    let pos = b.iter().filter(|(_, v)| v.is_positive()).count();
    let neg = b.iter().filter(|(_, v)| v.is_negative()).count();
    (pos, neg)
}

/// Cube class of `d/a` mod p for `p ∤ ad`.
pub fn chi_p(p: u64, a: i64, d: i64) -> bool {
    let ar = arith::rem_i64(a, p);
    let dr = arith::rem_i64(d, p);
    is_cube(mulmod(dr, arith::invmod(ar, p), p), p)
}

fn pow_q(p: u64, e: i32) -> Q {
    let pb = BigInt::from(p);
    if e >= 0 {
        Q::from_integer(pb.pow(e as u32))
    } else {
        Q::new(BigInt::one(), pb.pow((-e) as u32))
    }
}

fn nu_pair(p: u64, a: i64, d: i64) -> Result<(u32, u32)> {
    if a == 0 || d == 0 {
        return Err(Error::InvalidArgument("a and d must be nonzero".into()));
    }
    check_prime(p)?;
    Ok((arith::valuation_i64(a, p), arith::valuation_i64(d, p)))
}

/// Density of maximal forms in `U_{a,d}(Z_p)`.
pub fn maximal_density(p: u64, a: i64, d: i64) -> Result<Q> {
    let (va, vd) = nu_pair(p, a, d)?;
    let one = Q::one();
    let pm1 = pow_q(p, -1);
    let pm2 = pow_q(p, -2);
    let pm3 = pow_q(p, -3);
    let cap = |v: u32| v.min(2);
    Ok(match (cap(va), cap(vd)) {
        (0, 0) | (1, 0) | (0, 1) => one - pm2 + pm3,
        (2, 0) | (0, 2) => (&one - &pm1) * (&one - &pm2),
        (1, 1) => one - pm2,
        (1, 2) | (2, 1) => one - pm1,
        _ => (&one - &pm1) * (&one - &pm1),
    })
}

/// Density of side-sufficiently-ramified forms among maximal forms of `U_{a,d}(Z_p)`.
pub fn ram_density(p: u64, a: i64, d: i64, side: RamSide) -> Result<Q> {
    let (va, vd) = nu_pair(p, a, d)?;
    let (v, w) = match side {
        RamSide::ASide => (va, vd),
        RamSide::DSide => (vd, va),
    };
    if v % 2 == 0 {
        return Ok(Q::zero());
    }
    let pi = p as i64;
    Ok(match (v, w.min(2)) {
        (1, 0) => q(pi * pi - pi + 1, pi * pi * pi - pi + 1),
        (1, 1) => q(1, pi + 1),
        (_, 0) => q(1, pi + 1),
        (_, 1) => q(1, pi),
        _ => Q::zero(),
    })
}

/// Closed-form splitting-type counts of maximal forms in `U_{a,d}(Z/p²Z)`.
pub fn splitting_counts(p: u64, a: i64, d: i64) -> Result<BTreeMap<SplittingTypeP, u64>> {
    use SplittingTypeP::*;
    let (va, vd) = nu_pair(p, a, d)?;
    let mut h = BTreeMap::new();
    match (va > 0, vd > 0) {
        (false, false) => {
            let one_mod3 = p % 3 == 1;
            let chi = if chi_p(p, a, d) { 1 } else { 0 };
            if one_mod3 {
                h.insert(T111, p * p * ((p - 1) * (p - 4) / 6 + chi));
                h.insert(T3, p * p * ((p * p + p + 1) / 3 - chi));
                h.insert(T11sq, p * (p - 1) * (p - 1 - 3 * chi));
                h.insert(T1cube, p * (p - 1) * 3 * chi);
            } else {
                h.insert(T111, p * p * (p - 2) * (p.saturating_sub(3)) / 6);
                h.insert(T3, p * p * p * (p + 1) / 3);
                h.insert(T11sq, p * (p - 1) * (p - 2));
                h.insert(T1cube, p * (p - 1));
            }
            h.insert(T12, p * p * p * (p - 1) / 2);
        }
        (true, false) | (false, true) => {
            let v1 = if va > 0 { va == 1 } else { vd == 1 };
            h.insert(T111, p * p * (p - 1) * (p - 2) / 2);
            h.insert(T12, p * p * p * (p - 1) / 2);
            // a double root at (1,0) or (0,1) needs ν = 1; only the former is labelled (1²1)
            let outer = if v1 { p * p * (p - 1) } else { 0 };
            let elsewhere = p * (p - 1) * (p - 1);
            if va > 0 {
                h.insert(T1sq1, outer);
                h.insert(T11sq, elsewhere);
            } else {
                h.insert(T11sq, outer + elsewhere);
            }
            h.insert(T1cube, if v1 { p * p } else { 0 });
        }
        (true, true) => {
            h.insert(T111, p * p * (p - 1) * (p - 1));
            h.insert(T1sq1, if va == 1 { p * p * (p - 1) } else { 0 });
            h.insert(T11sq, if vd == 1 { p * p * (p - 1) } else { 0 });
        }
    }
    for t in SplittingTypeP::ALL {
        h.entry(t).or_insert(0);
    }
    Ok(h)
}

pub const DEFAULT_ORACLE_BOUND: u64 = 13;

pub fn density_oracle(p: u64, a: i64, d: i64) -> Result<LocalDensityReport> {
    density_oracle_bounded(p, a, d, DEFAULT_ORACLE_BOUND)
}

/// Exhaustive enumeration of `(b, c) ∈ (Z/p²Z)²`.
pub fn density_oracle_bounded(p: u64, a: i64, d: i64, bound: u64) -> Result<LocalDensityReport> {
    let (va, vd) = nu_pair(p, a, d)?;
    if p > bound {
        return Err(Error::OracleBound { p, bound });
    }
    let m = p * p;
    let ar = arith::rem_i64(a, m);
    let dr = arith::rem_i64(d, m);
    let a_in_k = va % 2 == 1;
    let d_in_k = vd % 2 == 1;
    let per_b: Vec<([u64; 6], u64, u64, u64)> = (0..m)
        .into_par_iter()
        .map(|b| {
            let mut hist = [0u64; 6];
            let (mut mx, mut ra, mut rd) = (0, 0, 0);
            for c in 0..m {
                let co = [ar, b, c, dr];
                if !maximal_residues(co, p) {
                    continue;
                }
                mx += 1;
                let t = splitting_type_residues(co, p).expect("maximal forms are primitive");
                hist[SplittingTypeP::ALL.iter().position(|&x| x == t).unwrap()] += 1;
                if suff_ramified_residues(co, p, RamSide::ASide, a_in_k) {
                    ra += 1;
                }
                if suff_ramified_residues(co, p, RamSide::DSide, d_in_k) {
                    rd += 1;
                }
            }
            (hist, mx, ra, rd)
        })
        .collect();
    let mut hist = [0u64; 6];
    let (mut mx, mut ra, mut rd) = (0u64, 0u64, 0u64);
    for (h, x, y, z) in per_b {
        for i in 0..6 {
            hist[i] += h[i];
        }
        mx += x;
        ra += y;
        rd += z;
    }
    let total = m * m;
    let frac = |n: u64, d: u64| {
        if d == 0 {
            Q::zero()
        } else {
            Q::new(n.into(), d.into())
        }
    };
    Ok(LocalDensityReport {
        p,
        maximal_density: frac(mx, total),
        aside_ram_density: frac(ra, mx),
        dside_ram_density: frac(rd, mx),
        splitting_histogram: SplittingTypeP::ALL.iter().copied().zip(hist).collect(),
        maximal_count: mx,
        total,
    })
}

/// `Mass_p^{ε₁,ε₂}(f)` for f maximal at p.
pub fn local_mass(f: &BinaryCubicForm, p: u64, eps1: Kappa, eps2: Kappa) -> Result<Q> {
    if !is_maximal_at(f, p)? {
        return Err(Error::NotMaximal(p));
    }
    let pb = BigInt::from(p);
    let pa = (&f.a % &pb).is_zero();
    let pd = (&f.d % &pb).is_zero();
    let ra = pa && is_suff_ramified(f, p, RamSide::ASide);
    let rd = pd && is_suff_ramified(f, p, RamSide::DSide);
    Ok(mass_row(pa, pd, ra, rd, eps1, eps2))
}

fn mass_row(pa: bool, pd: bool, ra: bool, rd: bool, e1: Kappa, e2: Kappa) -> Q {
    use Kappa::*;
    let unit = |k: Kappa| k != Zero;
    match (pa, pd) {
        (false, false) => {
            if e1 == Zero && e2 == Zero {
                Q::one()
            } else {
                Q::zero()
            }
        }
        (true, false) => match (ra, e1, e2) {
            (true, Plus, Zero) => Q::one(),
            (false, k, Zero) if unit(k) => q(1, 2),
            _ => Q::zero(),
        },
        (false, true) => match (rd, e1, e2) {
            (true, Zero, Plus) => Q::one(),
            (false, Zero, k) if unit(k) => q(1, 2),
            _ => Q::zero(),
        },
        (true, true) => {
            if !unit(e1) || !unit(e2) {
                Q::zero()
            } else if ra {
                if e1 == Plus {
                    q(1, 2)
                } else {
                    Q::zero()
                }
            } else if rd {
                if e2 == Plus {
                    q(1, 2)
                } else {
                    Q::zero()
                }
            } else {
                q(1, 4)
            }
        }
    }
}

/// Average of `Mass_p^{ε₁,ε₂}` over the maximal forms of `U_{a,d}(Z_p)`.
pub fn averaged_mass_factor(p: u64, a: i64, d: i64, eps1: Kappa, eps2: Kappa) -> Result<Q> {
    let (va, vd) = nu_pair(p, a, d)?;
    let rho = ram_density(p, a, d, RamSide::ASide)?;
    let lambda = ram_density(p, a, d, RamSide::DSide)?;
    let e1 = qi(eps1.value());
    let e2 = qi(eps2.value());
    let half = q(1, 2);
    let quarter = q(1, 4);
    Ok(match (va > 0, vd > 0) {
        (false, false) => {
            if eps1 == Kappa::Zero && eps2 == Kappa::Zero {
                Q::one()
            } else {
                Q::zero()
            }
        }
        (true, false) => {
            if eps1 == Kappa::Zero || eps2 != Kappa::Zero {
                Q::zero()
            } else {
                &half + e1 * rho * &half
            }
        }
        (false, true) => {
            if eps2 == Kappa::Zero || eps1 != Kappa::Zero {
                Q::zero()
            } else {
                &half + e2 * lambda * &half
            }
        }
        (true, true) => {
            if eps1 == Kappa::Zero || eps2 == Kappa::Zero {
                Q::zero()
            } else {
                &quarter + e1 * rho * &quarter + e2 * lambda * &quarter
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64, d: i64) -> BinaryCubicForm {
        BinaryCubicForm::new(a, b, c, d)
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(
            splitting_type_mod_p(&f(1, 0, -1, 0), 5).unwrap(),
            SplittingTypeP::T111
        );
        assert_eq!(
            splitting_type_mod_p(&f(1, 1, 0, 1), 2).unwrap(),
            SplittingTypeP::T3
        );
        assert_eq!(
            splitting_type_mod_p(&f(1, 0, 0, -1), 3).unwrap(),
            SplittingTypeP::T1cube
        );
        assert_eq!(
            splitting_type_mod_p(&f(0, 1, 0, 1), 3).unwrap(),
            SplittingTypeP::T12
        );
        assert_eq!(
            splitting_type_mod_p(&f(0, 0, 1, 1), 5).unwrap(),
            SplittingTypeP::T1sq1
        );
        assert!(splitting_type_mod_p(&f(3, 3, 3, 3), 3).is_err());
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal_at(&f(1, 1, 0, 1), 2).unwrap());
        for p in [2u64, 3, 5, 7] {
            let pi = p as i64;
            assert!(!is_maximal_at(&f(pi, pi, pi, pi), p).unwrap());
        }
        assert!(!is_maximal_at(&f(1, 0, 0, 8), 2).unwrap());
        assert!(is_maximal_at(&f(1, 0, 0, 0), 2).is_err());
    }

    #[test]
    fn large_prime_dedekind() {
        // (x - 5y)²(x + y) + p² y³ is non-maximal at p; adding p y³ instead keeps it maximal
        let p: i64 = 1_000_003;
        let base = [1i64, -9, 15, 25];
        let g = f(base[0], base[1], base[2], base[3] + p * p);
        assert!(!is_maximal_at(&g, p as u64).unwrap());
        let h = f(base[0], base[1], base[2], base[3] + p);
        assert!(is_maximal_at(&h, p as u64).unwrap());
        let big = 4_294_967_311u64;
        let bi = big as i128;
        let gg = BinaryCubicForm::from_big(
            1.into(),
            (-9).into(),
            15.into(),
            BigInt::from(25i128 + bi * bi),
        );
        assert!(!is_maximal_at(&gg, big).unwrap());
    }

    #[test]
    fn ramification_examples() {
        assert!(is_suff_ramified(&f(2, 1, 0, 1), 2, RamSide::ASide));
        assert!(!is_suff_ramified(&f(2, 1, 1, 1), 2, RamSide::ASide));
        assert!(!is_suff_ramified(&f(1, 0, 0, 1), 2, RamSide::DSide));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(
            kappa_p(&TernaryQuadraticForm::diag(1, 1, 1), 3).unwrap(),
            Kappa::Zero
        );
        let h = q(1, 2);
        let z = Q::zero();
        let xy_plus = TernaryQuadraticForm::new([
            [z.clone(), h.clone(), z.clone()],
            [h, z.clone(), z.clone()],
            [z.clone(), z, qi(5)],
        ])
        .unwrap();
        assert_eq!(kappa_p(&xy_plus, 5).unwrap(), Kappa::Plus);
        assert_eq!(
            kappa_p(&TernaryQuadraticForm::diag(1, 1, 3), 3).unwrap(),
            Kappa::Minus
        );
        assert!(kappa_p(&TernaryQuadraticForm::diag(1, 3, 3), 3).is_err());
        assert_eq!(
            kappa_inf(&TernaryQuadraticForm::diag(1, 1, 1)).unwrap(),
            Kappa::Minus
        );
        assert_eq!(
            kappa_inf(&TernaryQuadraticForm::diag(1, -1, 1)).unwrap(),
            Kappa::Plus
        );
        assert_eq!(
            kappa_inf(&TernaryQuadraticForm::anti_diagonal()).unwrap(),
            Kappa::Plus
        );
    }

    #[test]
    fn density_examples() {
        assert_eq!(maximal_density(5, 1, 1).unwrap(), q(121, 125));
        assert_eq!(maximal_density(2, 2, 2).unwrap(), q(3, 4));
        assert_eq!(ram_density(2, 2, 1, RamSide::ASide).unwrap(), q(3, 7));
        assert_eq!(ram_density(5, 5, 5, RamSide::ASide).unwrap(), q(1, 6));
        assert_eq!(ram_density(2, 1, 2, RamSide::DSide).unwrap(), q(3, 7));
    }

    #[test]
    fn oracle_small_cases() {
        let r = density_oracle(3, 1, 1).unwrap();
        assert_eq!(r.maximal_density, q(25, 27));
        assert_eq!(r.splitting_histogram[&SplittingTypeP::T12], 27);
        assert_eq!(r.splitting_histogram[&SplittingTypeP::T1cube], 6);
        assert!(density_oracle(17, 1, 1).is_err());
    }

    #[test]
    fn averaged_mass_examples() {
        assert_eq!(
            averaged_mass_factor(7, 1, 1, Kappa::Zero, Kappa::Zero).unwrap(),
            Q::one()
        );
        assert_eq!(
            averaged_mass_factor(2, 2, 1, Kappa::Plus, Kappa::Zero).unwrap(),
            q(5, 7)
        );
        assert_eq!(
            averaged_mass_factor(2, 2, 2, Kappa::Minus, Kappa::Minus).unwrap(),
            q(1, 12)
        );
    }
}

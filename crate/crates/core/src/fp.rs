//! Polynomials over F_p for word-sized primes.

use crate::arith::{invmod, mulmod, powmod};

/// Ascending coefficients, trimmed.
pub type FpPoly = Vec<u64>;

pub fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &FpPoly) -> i32 {
    f.len() as i32 - 1
}

pub fn eval(f: &FpPoly, x: u64, p: u64) -> u64 {
    let mut acc = 0;
    for &a in f.iter().rev() {
        acc = (mulmod(acc, x, p) + a) % p;
    }
    acc
}

pub fn derivative(f: &FpPoly, p: u64) -> FpPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % p, p))
            .collect(),
    )
}

pub fn rem(f: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    assert!(!m.is_empty());
    let mut r = f.clone();
    let dm = m.len();
    let inv = invmod(*m.last().unwrap(), p);
    while r.len() >= dm {
        let k = r.len() - dm;
        let t = mulmod(*r.last().unwrap(), inv, p);
        for (i, &mc) in m.iter().enumerate() {
            r[k + i] = (r[k + i] + p - mulmod(t, mc, p)) % p;
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub fn monic(f: &FpPoly, p: u64) -> FpPoly {
    match f.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = invmod(l, p);
            f.iter().map(|&a| mulmod(a, inv, p)).collect()
        }
    }
}

pub fn gcd(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (trim(f.clone()), trim(g.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn mul_mod(f: &FpPoly, g: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
        }
    }
    rem(&trim(out), m, p)
}

/// `x^e mod m`.
pub fn x_pow_mod(e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = rem(&vec![1], m, p);
    let mut base: FpPoly = rem(&vec![0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

/// Number of distinct roots in F_p of a nonzero polynomial.
pub fn count_roots(f: &FpPoly, p: u64) -> usize {
    let f = trim(f.clone());
    if deg(&f) <= 0 {
        return 0;
    }
    let mut xp = x_pow_mod(p, &f, p);
    // x^p - x
    while xp.len() < 2 {
        xp.push(0);
    }
    xp[1] = (xp[1] + p - 1) % p;
    let g = gcd(&f, &trim(xp), p);
    deg(&g).max(0) as usize
}

/// Roots of a polynomial of degree at most two that splits with a repeated root,
/// or the root of a linear one.
pub fn root_of_power(h: &FpPoly, p: u64) -> Option<u64> {
    let h = monic(h, p);
    match deg(&h) {
        1 => Some((p - h[0]) % p),
        2 => {
            let half = invmod(2 % p, p);
            Some((p - mulmod(h[1], half, p)) % p)
        }
        _ => None,
    }
}

pub fn sqrt_exists(a: u64, p: u64) -> bool {
    let a = a % p;
    a == 0 || p == 2 || powmod(a, (p - 1) / 2, p) == 1
}

//! Integer and rational helpers shared by every module.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

/// Prime factorization of `|n|` as `(p, e)` pairs in increasing order.
pub fn factorize(n: &BigInt) -> Vec<(BigUint, u32)> {
    let m = n.magnitude();
    if m.is_zero() || m.is_one() {
        return Vec::new();
    }
    if let Some(v) = m.to_u128() {
        return num_prime::nt_funcs::factorize128(v)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e as u32))
            .collect();
    }
    let map: BTreeMap<BigUint, usize> = num_prime::nt_funcs::factorize(m.clone());
    map.into_iter().map(|(p, e)| (p, e as u32)).collect()
}

pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Distinct primes dividing `n` (sign ignored).
pub fn prime_divisors_i64(n: i64) -> Vec<u64> {
    factorize_u64(n.unsigned_abs())
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

pub fn valuation_i64(n: i64, p: u64) -> u32 {
    assert!(n != 0);
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

pub fn valuation_big(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (qq, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = qq;
        v += 1;
    }
}

/// Squarefree part and square root of the square part: `n = k m²` with the sign on `k`.
pub fn squarefree_i64(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let mut k: i64 = n.signum();
    let mut m: i64 = 1;
    for (p, e) in factorize_u64(n.unsigned_abs()) {
        let p = p as i64;
        if e % 2 == 1 {
            k *= p;
        }
        m *= p.pow(e / 2);
    }
    (k, m)
}

pub fn mod_big(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo prime `p`; `a` must be a unit.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

pub fn rem_i64(n: i64, m: u64) -> u64 {
    n.rem_euclid(m as i64) as u64
}

pub fn rem_i128(n: i128, m: u64) -> u64 {
    n.rem_euclid(m as i128) as u64
}

/// Whether `a` is a nonzero square modulo the odd prime `p`.
pub fn is_qr(a: u64, p: u64) -> bool {
    let a = a % p;
    a != 0 && powmod(a, (p - 1) / 2, p) == 1
}

/// Whether the unit `a` is a cube modulo `p`.
pub fn is_cube(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    if p % 3 != 1 {
        return true;
    }
    powmod(a, (p - 1) / 3, p) == 1
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    num_prime::nt_funcs::primes(n + 1)
        .into_iter()
        .filter(|&p| p <= n)
        .collect()
}

/// Divisibility test by a fixed odd divisor using a multiplicative inverse mod 2⁶⁴.
#[derive(Clone, Copy, Debug)]
pub struct FastDiv {
    pub p: u64,
    inv: u64,
    lim: u64,
}

impl FastDiv {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1);
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        Self {
            p,
            inv,
            lim: u64::MAX / p,
        }
    }

    #[inline]
    pub fn divides(&self, n: u64) -> bool {
        n.wrapping_mul(self.inv) <= self.lim
    }

    /// Exact quotient; only valid when `divides(n)`.
    #[inline]
    pub fn exact_div(&self, n: u64) -> u64 {
        n.wrapping_mul(self.inv)
    }
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Round to three decimals, ties away from zero.
pub fn render3(x: &Q) -> String {
    render_decimals(x, 3)
}

pub fn render_decimals(x: &Q, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let n = x.numer().abs() * &scale;
    let d = x.denom().clone();
    let r = (BigInt::from(2) * n + &d).div_floor(&(BigInt::from(2) * d));
    let (ip, fp) = r.div_rem(&scale);
    let neg = x.is_negative() && !r.is_zero();
    let frac = format!("{:0>width$}", fp.to_string(), width = places as usize);
    if places == 0 {
        format!("{}{}", if neg { "-" } else { "" }, ip)
    } else {
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, frac)
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    let shift = x.denom().bits().max(x.numer().bits()).saturating_sub(900);
    let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

/// Exact rational value of a finite double.
pub fn f64_to_q(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Serde adapters writing rationals as `"num/den"` strings.
pub mod qser {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod opt {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            x.as_ref().map(|v| v.to_string()).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            let s: Option<String> = Option::deserialize(d)?;
            match s {
                None => Ok(None),
                Some(s) => parse_q(&s)
                    .map(Some)
                    .ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
            x.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v: Vec<String> = Vec::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
                .collect()
        }
    }
}

/// Serde adapter for big integers: a JSON number when it fits in 64 bits, a string otherwise.
pub mod intser {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => Wire::Small(v).serialize(s),
            None => Wire::Big(x.to_string()).serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Wire::deserialize(d)? {
            Wire::Small(v) => Ok(BigInt::from(v)),
            Wire::Big(s) => s
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_rounds_half_away() {
        assert_eq!(render3(&q(45, 14)), "3.214");
        assert_eq!(render3(&q(12, 7)), "1.714");
        assert_eq!(render3(&q(1, 2000)), "0.001");
        assert_eq!(render3(&q(-1, 2000)), "-0.001");
        assert_eq!(render3(&q(-1, 3000)), "0.000");
        assert_eq!(render3(&q(2, 1)), "2.000");
    }

    #[test]
    fn fastdiv_matches_remainder() {
        for p in [3u64, 5, 7, 11, 101, 9973] {
            let f = FastDiv::new(p);
            for n in 0..5000u64 {
                assert_eq!(f.divides(n), n % p == 0);
                if n % p == 0 {
                    assert_eq!(f.exact_div(n), n / p);
                }
            }
        }
    }

    #[test]
    fn squarefree_sign_on_k() {
        assert_eq!(squarefree_i64(12), (3, 2));
        assert_eq!(squarefree_i64(-8), (-2, 2));
        assert_eq!(squarefree_i64(1), (1, 1));
        assert_eq!(squarefree_i64(-1), (-1, 1));
    }

    #[test]
    fn cubes_mod_seven() {
        let cubes: Vec<u64> = (1..7).filter(|&a| is_cube(a, 7)).collect();
        assert_eq!(cubes, vec![1, 6]);
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_q("45/14"), Some(q(45, 14)));
        assert_eq!(parse_q("-3"), Some(q(-3, 1)));
        assert_eq!(parse_q("1/0"), None);
    }
}

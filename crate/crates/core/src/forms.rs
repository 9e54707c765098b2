//! Binary cubic forms, ternary quadratic forms, pairs and the resolvent map.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, qi, Q};
use crate::error::{Error, Result};

/// `a x³ + b x²y + c xy² + d y³`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCubicForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl BinaryCubicForm {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_big(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Self { a, b, c, d }
    }

    pub fn coeffs(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn disc(&self) -> BigInt {
        disc(self)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x * x + &self.b * x * x * y + &self.c * x * y * y + &self.d * y * y * y
    }

    /// The form `f(y, x)`.
    pub fn reversed(&self) -> Self {
        Self::from_big(
            self.d.clone(),
            self.c.clone(),
            self.b.clone(),
            self.a.clone(),
        )
    }

    pub fn is_monic(&self) -> bool {
        self.a.is_one()
    }
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for BinaryCubicForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W<'a>(#[serde(with = "arith::intser")] &'a BigInt);
        [W(&self.a), W(&self.b), W(&self.c), W(&self.d)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryCubicForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "arith::intser")] BigInt);
        let [a, b, c, dd]: [W; 4] = Deserialize::deserialize(d)?;
        Ok(Self::from_big(a.0, b.0, c.0, dd.0))
    }
}

pub fn disc(f: &BinaryCubicForm) -> BigInt {
    let (a, b, c, d) = (&f.a, &f.b, &f.c, &f.d);
    BigInt::from(18) * a * b * c * d - BigInt::from(4) * b * b * b * d + b * b * c * c
        - BigInt::from(4) * a * c * c * c
        - BigInt::from(27) * a * a * d * d
}

/// Discriminant in 128-bit arithmetic; `None` on overflow.
pub fn disc_i128(a: i64, b: i64, c: i64, d: i64) -> Option<i128> {
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    let t1 = 18i128
        .checked_mul(a)?
        .checked_mul(b)?
        .checked_mul(c)?
        .checked_mul(d)?;
    let t2 = 4i128
        .checked_mul(b)?
        .checked_mul(b)?
        .checked_mul(b)?
        .checked_mul(d)?;
    let t3 = b.checked_mul(b)?.checked_mul(c)?.checked_mul(c)?;
    let t4 = 4i128
        .checked_mul(a)?
        .checked_mul(c)?
        .checked_mul(c)?
        .checked_mul(c)?;
    let t5 = 27i128
        .checked_mul(a)?
        .checked_mul(a)?
        .checked_mul(d)?
        .checked_mul(d)?;
    t1.checked_sub(t2)?
        .checked_add(t3)?
        .checked_sub(t4)?
        .checked_sub(t5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeightKind {
    Balanced,
    Weighted,
}

/// A height stored through its square, so comparisons stay in the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Height {
    pub kind: HeightKind,
    /// `max(b², c²)` for the balanced height, `max(b², |c|)` for the weighted one.
    pub squared: BigInt,
}

impl Height {
    /// The height itself when it is an integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.squared.sqrt();
        (&r * &r == self.squared).then_some(r)
    }

    pub fn to_f64(&self) -> f64 {
        self.squared.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// `height < x` for a nonnegative rational bound.
    pub fn less_than(&self, x: &Q) -> bool {
        let x2 = x * x;
        qi(self.squared.clone()) < x2
    }
}

pub fn height(f: &BinaryCubicForm, kind: HeightKind) -> Height {
    let b2 = &f.b * &f.b;
    let squared = match kind {
        HeightKind::Balanced => b2.max(&f.c * &f.c),
        HeightKind::Weighted => b2.max(f.c.abs()),
    };
    Height { kind, squared }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeSplit {
    #[serde(with = "arith::intser")]
    pub k: BigInt,
    #[serde(with = "arith::intser")]
    pub m: BigInt,
}

pub fn squarefree_split(n: &BigInt) -> Result<SquarefreeSplit> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut k = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut m = BigInt::one();
    for (p, e) in arith::factorize(n) {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            k *= &p;
        }
        m *= p.pow(e / 2);
    }
    Ok(SquarefreeSplit { k, m })
}

/// Integer 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// Coefficients (in x-degree descending order) of a product of binary forms.
fn bin_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// The twisted action `det(γ)⁻¹ f((x, y)γ)`.
pub fn gl2_act(g: &Mat2, f: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    let det = g.det();
    if det != 1 && det != -1 {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let m = g.0;
    let l1 = [BigInt::from(m[0][0]), BigInt::from(m[1][0])];
    let l2 = [BigInt::from(m[0][1]), BigInt::from(m[1][1])];
    let l1sq = bin_mul(&l1, &l1);
    let l2sq = bin_mul(&l2, &l2);
    let terms = [
        (&f.a, bin_mul(&l1sq, &l1)),
        (&f.b, bin_mul(&l1sq, &l2)),
        (&f.c, bin_mul(&l1, &l2sq)),
        (&f.d, bin_mul(&l2sq, &l2)),
    ];
    let mut out = vec![BigInt::zero(); 4];
    for (coef, poly) in terms.iter() {
        for (o, t) in out.iter_mut().zip(poly.iter()) {
            *o += *coef * t;
        }
    }
    let s = BigInt::from(det);
    Ok(BinaryCubicForm::from_big(
        &out[0] * &s,
        &out[1] * &s,
        &out[2] * &s,
        &out[3] * &s,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeClass {
    /// Integral diagonal, integral doubled off-diagonal.
    HalfIntegral,
    /// Every Gram entry integral.
    IntegerMatrix,
    General,
}

/// Symmetric 3×3 Gram matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryQuadraticForm {
    gram: [[Q; 3]; 3],
    lattice_class: LatticeClass,
}

fn classify(g: &[[Q; 3]; 3]) -> LatticeClass {
    let all_int = g.iter().flatten().all(arith::is_integral);
    if all_int {
        return LatticeClass::IntegerMatrix;
    }
    let two = qi(2);
    let half = (0..3).all(|i| {
        (0..3).all(|j| {
            if i == j {
                arith::is_integral(&g[i][i])
            } else {
                arith::is_integral(&(&g[i][j] * &two))
            }
        })
    });
    if half {
        LatticeClass::HalfIntegral
    } else {
        LatticeClass::General
    }
}

impl TernaryQuadraticForm {
    pub fn new(gram: [[Q; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument(
                        "Gram matrix is not symmetric".into(),
                    ));
                }
            }
        }
        let lattice_class = classify(&gram);
        Ok(Self {
            gram,
            lattice_class,
        })
    }

    pub fn from_ints(g: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(g.map(|r| r.map(qi)))
    }

    pub fn diag(a: i64, b: i64, c: i64) -> Self {
        Self::from_ints([[a, 0, 0], [0, b, 0], [0, 0, c]]).unwrap()
    }

    /// The anti-diagonal form with anti-diagonal entries 1, −1, 1.
    pub fn anti_diagonal() -> Self {
        Self::from_ints([[0, 0, 1], [0, -1, 0], [1, 0, 0]]).unwrap()
    }

    pub fn zero() -> Self {
        Self::diag(0, 0, 0)
    }

    pub fn gram(&self) -> &[[Q; 3]; 3] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.gram[i][j]
    }

    pub fn lattice_class(&self) -> LatticeClass {
        self.lattice_class
    }

    pub fn det(&self) -> Q {
        det3(&self.gram)
    }

    /// Value at a rational vector.
    pub fn value(&self, v: &[Q; 3]) -> Q {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[Q; 3], v: &[Q; 3]) -> Q {
        let mut s = Q::zero();
        for i in 0..3 {
            for j in 0..3 {
                s += &u[i] * &self.gram[i][j] * &v[j];
            }
        }
        s
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self::new(self.gram.clone().map(|r| r.map(|x| x * t))).unwrap()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut g = self.gram.clone();
        for (i, row) in g.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = &*x + &o.gram[i][j];
            }
        }
        Self::new(g).unwrap()
    }

    /// `g A gᵀ` for a rational matrix `g`.
    pub fn transform(&self, g: &[[Q; 3]; 3]) -> Self {
        let mut t: [[Q; 3]; 3] = Default::default();
        for (i, row) in t.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let mut s = Q::zero();
                for k in 0..3 {
                    for l in 0..3 {
                        s += &g[i][k] * &self.gram[k][l] * &g[j][l];
                    }
                }
                *x = s;
            }
        }
        Self::new(t).unwrap()
    }

    /// Homogeneous quadratic polynomial coefficients
    /// `[x², y², z², xy, xz, yz]` with doubled cross terms.
    pub fn coefficients(&self) -> [Q; 6] {
        let g = &self.gram;
        let two = qi(2);
        [
            g[0][0].clone(),
            g[1][1].clone(),
            g[2][2].clone(),
            &g[0][1] * &two,
            &g[0][2] * &two,
            &g[1][2] * &two,
        ]
    }
}

pub fn det3(m: &[[Q; 3]; 3]) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

impl Serialize for TernaryQuadraticForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W<'a> {
            gram: Vec<String>,
            lattice_class: &'a LatticeClass,
        }
        W {
            gram: self.gram.iter().flatten().map(|x| x.to_string()).collect(),
            lattice_class: &self.lattice_class,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TernaryQuadraticForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct W {
            gram: Vec<String>,
            #[allow(dead_code)]
            lattice_class: Option<LatticeClass>,
        }
        let w = W::deserialize(d)?;
        if w.gram.len() != 9 {
            return Err(D::Error::custom("gram needs 9 entries"));
        }
        let mut g: [[Q; 3]; 3] = Default::default();
        for (k, s) in w.gram.iter().enumerate() {
            g[k / 3][k % 3] =
                arith::parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))?;
        }
        Self::new(g).map_err(D::Error::custom)
    }
}

/// Integer 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat3(pub [[i64; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Mat3([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn to_q(&self) -> [[Q; 3]; 3] {
        self.0.map(|r| r.map(qi))
    }
}

/// The coefficients of `4·det(xA − yB)` as exact rationals.
pub fn resolvent_q(a: &TernaryQuadraticForm, b: &TernaryQuadraticForm) -> [Q; 4] {
    let four = qi(4);
    let alpha = a.det() * &four;
    let delta = -(b.det() * &four);
    let p11 = a.add(&b.scale(&qi(-1))).det() * &four;
    let p1m1 = a.add(b).det() * &four;
    let s1 = p11 - &alpha - &delta;
    let s2 = p1m1 - &alpha + &delta;
    let two = qi(2);
    let beta = (&s1 - &s2) / &two;
    let gamma = (s1 + s2) / two;
    [alpha, beta, gamma, delta]
}

/// The binary cubic form `4·det(xA − yB)`; integral for pairs of half-integral forms.
pub fn resolvent(a: &TernaryQuadraticForm, b: &TernaryQuadraticForm) -> Result<BinaryCubicForm> {
    let r = resolvent_q(a, b);
    if !r.iter().all(arith::is_integral) {
        return Err(Error::NonIntegralResolvent);
    }
    let [p, q, s, t] = r.map(|x| x.to_integer());
    Ok(BinaryCubicForm::from_big(p, q, s, t))
}

/// A pair of ternary quadratic forms with its cached resolvent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFPair {
    #[serde(rename = "A")]
    pub a: TernaryQuadraticForm,
    #[serde(rename = "B")]
    pub b: TernaryQuadraticForm,
    pub resolvent: BinaryCubicForm,
}

impl QFPair {
    pub fn new(a: TernaryQuadraticForm, b: TernaryQuadraticForm) -> Result<Self> {
        let resolvent = resolvent(&a, &b)?;
        Ok(Self { a, b, resolvent })
    }
}

pub fn sl3_act(g: &Mat3, p: &QFPair) -> Result<QFPair> {
    let det = g.det();
    if det != 1 {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let gq = g.to_q();
    QFPair::new(p.a.transform(&gq), p.b.transform(&gq))
}

/// Sign of a big integer as −1, 0, 1.
pub fn sign(x: &BigInt) -> i32 {
    arith::sign_of(x)
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_examples() {
        assert_eq!(disc(&BinaryCubicForm::new(1, 0, 1, 1)), BigInt::from(-31));
        assert_eq!(disc(&BinaryCubicForm::new(1, 0, 0, 0)), BigInt::from(0));
        assert_eq!(disc(&BinaryCubicForm::new(1, 0, -1, 0)), BigInt::from(4));
    }

    #[test]
    fn heights() {
        let f = BinaryCubicForm::new(1, 3, -5, 1);
        assert_eq!(
            height(&f, HeightKind::Balanced).as_integer(),
            Some(BigInt::from(5))
        );
        assert_eq!(
            height(&f, HeightKind::Weighted).as_integer(),
            Some(BigInt::from(3))
        );
        let g = BinaryCubicForm::new(1, 0, 9, 1);
        assert_eq!(
            height(&g, HeightKind::Weighted).as_integer(),
            Some(BigInt::from(3))
        );
        let h = BinaryCubicForm::new(1, 1, 5, 1);
        let hw = height(&h, HeightKind::Weighted);
        assert_eq!(hw.as_integer(), None);
        assert!(hw.less_than(&qi(3)) && !hw.less_than(&arith::q(11, 5)));
    }

    #[test]
    fn swap_action() {
        let f = BinaryCubicForm::new(2, -3, 5, 7);
        let g = gl2_act(&Mat2([[0, 1], [1, 0]]), &f).unwrap();
        assert_eq!(g, BinaryCubicForm::new(-7, -5, 3, -2));
        assert!(gl2_act(&Mat2([[2, 0], [0, 1]]), &f).is_err());
    }

    #[test]
    fn identity_resolvent() {
        let r = resolvent(
            &TernaryQuadraticForm::diag(1, 1, 1),
            &TernaryQuadraticForm::zero(),
        )
        .unwrap();
        assert_eq!(r, BinaryCubicForm::new(4, 0, 0, 0));
    }

    #[test]
    fn squarefree_examples() {
        let s = squarefree_split(&BigInt::from(-8)).unwrap();
        assert_eq!((s.k, s.m), (BigInt::from(-2), BigInt::from(2)));
        assert!(squarefree_split(&BigInt::zero()).is_err());
    }

    #[test]
    fn lattice_classes() {
        let h = arith::q(1, 2);
        let z = Q::zero();
        let w = TernaryQuadraticForm::new([
            [z.clone(), z.clone(), h.clone()],
            [z.clone(), qi(1), z.clone()],
            [h, z.clone(), z.clone()],
        ])
        .unwrap();
        assert_eq!(w.lattice_class(), LatticeClass::HalfIntegral);
        assert_eq!(
            TernaryQuadraticForm::diag(1, 2, 3).lattice_class(),
            LatticeClass::IntegerMatrix
        );
        let g = TernaryQuadraticForm::new([
            [arith::q(1, 3), z.clone(), z.clone()],
            [z.clone(), qi(1), z.clone()],
            [z.clone(), z.clone(), qi(1)],
        ])
        .unwrap();
        assert_eq!(g.lattice_class(), LatticeClass::General);
    }
}

//! Distinguished and Δ-distinguished orbit representatives, integrality criteria,
//! the representative search, associated binary quartics and real splitting types.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, q, qi, Q};
use crate::error::{Error, Result};
use crate::forms::{BinaryCubicForm, LatticeClass, QFPair, TernaryQuadraticForm};
use crate::local::{self, orthogonal_basis, signature};
use crate::poly::{self, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// Pairs of half-integral forms, resolvent `4·det(xA − yB)`.
    W,
    /// Pairs of integer matrices, attached to `f` through `det(xA − yB) = f`.
    Wvee,
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(Space::W),
            "Wvee" | "wvee" | "W^" => Ok(Space::Wvee),
            _ => Err(Error::InvalidArgument(format!("unknown space {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaDistReason {
    GcdFail,
    CongruenceFail,
    TableFail,
    Found,
    /// The conditions hold but the search found no integral representative.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaDistResult {
    pub space: Space,
    pub exists: bool,
    pub witness: Option<QFPair>,
    pub reason: DeltaDistReason,
}

impl DeltaDistResult {
    fn failed(space: Space, reason: DeltaDistReason) -> Self {
        Self {
            space,
            exists: false,
            witness: None,
            reason,
        }
    }

    /// Checks the witness: right resolvent, vanishing minors, integral entries.
    pub fn verify(&self, f: &BinaryCubicForm) -> bool {
        let Some(w) = &self.witness else {
            return !self.exists;
        };
        let target = match self.space {
            Space::W => f.clone(),
            Space::Wvee => scale_form(f, 4),
        };
        let class_ok = match self.space {
            Space::W => {
                w.a.lattice_class() != LatticeClass::General
                    && w.b.lattice_class() != LatticeClass::General
            }
            Space::Wvee => {
                w.a.lattice_class() == LatticeClass::IntegerMatrix
                    && w.b.lattice_class() == LatticeClass::IntegerMatrix
            }
        };
        let (ma, mb) = delta_minors(w);
        self.exists && w.resolvent == target && class_ok && ma.is_zero() && mb.is_zero()
    }
}

fn scale_form(f: &BinaryCubicForm, k: i64) -> BinaryCubicForm {
    let k = BigInt::from(k);
    BinaryCubicForm::from_big(&f.a * &k, &f.b * &k, &f.c * &k, &f.d * &k)
}

/// `m₁₁m₂₂ − m₁₂²` for A and B, with `m₁₂` twice the Gram entry.
pub fn delta_minors(p: &QFPair) -> (Q, Q) {
    let m = |t: &TernaryQuadraticForm| {
        let off = t.entry(0, 1) * qi(2);
        t.entry(0, 0) * t.entry(1, 1) - &off * &off
    };
    (m(&p.a), m(&p.b))
}

fn require_nondegenerate(f: &BinaryCubicForm) -> Result<()> {
    if f.disc().is_zero() {
        Err(Error::DegenerateForm)
    } else {
        Ok(())
    }
}

fn tqf(g: [[Q; 3]; 3]) -> TernaryQuadraticForm {
    TernaryQuadraticForm::new(g).expect("symmetric by construction")
}

pub fn distinguished_rep(f: &BinaryCubicForm) -> Result<QFPair> {
    require_nondegenerate(f)?;
    let z = Q::zero;
    let h = || q(1, 2);
    let a = tqf([
        [z(), z(), h()],
        [z(), -qi(f.a.clone()), z()],
        [h(), z(), -qi(f.c.clone())],
    ]);
    let b = tqf([
        [z(), h(), z()],
        [h(), qi(f.b.clone()), z()],
        [z(), z(), qi(f.d.clone())],
    ]);
    QFPair::new(a, b)
}

pub fn delta_distinguished_rep(f: &BinaryCubicForm) -> Result<QFPair> {
    if f.a.is_zero() || f.d.is_zero() {
        return Err(Error::InvalidArgument("a and d must be nonzero".into()));
    }
    require_nondegenerate(f)?;
    let four_ad = qi(BigInt::from(4) * &f.a * &f.d);
    let z = Q::zero;
    let h = || q(1, 2);
    let a = tqf([
        [-qi(f.a.clone()), z(), z()],
        [z(), z(), h()],
        [z(), h(), qi(f.b.clone()) / &four_ad],
    ]);
    let b = tqf([
        [z(), z(), h()],
        [z(), qi(f.d.clone()), z()],
        [h(), z(), -qi(f.c.clone()) / &four_ad],
    ]);
    QFPair::new(a, b)
}

fn small_coeffs(f: &BinaryCubicForm) -> Result<[i64; 4]> {
    f.to_i64()
        .ok_or_else(|| Error::RangeTooLarge("coefficients must fit in 64 bits".into()))
}

fn require_maximal(f: &BinaryCubicForm) -> Result<()> {
    match local::nonmaximal_prime(f)? {
        Some(p) => Err(Error::NotMaximal(p)),
        None => Ok(()),
    }
}

/// Allowed `(b, c) mod 4` keyed on `(a_k, d_k) mod 4`, then on `(a_m, d_m) mod 2`
/// in the order (0,0), (0,1), (1,0), (1,1).
const TABLE4: [((i64, i64), [&[(i64, i64)]; 4]); 3] = [
    (
        (1, 1),
        [&[(1, 1)], &[(1, 3)], &[(3, 1)], &[(0, 0), (1, 2), (2, 1)]],
    ),
    (
        (1, 3),
        [&[(3, 1)], &[(3, 3)], &[(1, 1)], &[(0, 0), (2, 1), (3, 2)]],
    ),
    (
        (3, 3),
        [&[(3, 3)], &[(3, 1)], &[(1, 3)], &[(0, 0), (2, 3), (3, 2)]],
    ),
];

/// Allowed `(b, c) mod 8` keyed on `(a_k, d_k) mod 8` with `2 | d_k`; columns
/// `(a_m, d_m) ≡ (1,0)` and `(1,1)` mod 2. Other columns admit nothing.
const TABLE8: [((i64, i64), [&[(i64, i64)]; 2]); 8] = [
    (
        (1, 2),
        [
            &[(0, 1), (4, 1)],
            &[(0, 0), (2, 1), (2, 4), (4, 4), (6, 0), (6, 1)],
        ],
    ),
    (
        (1, 6),
        [
            &[(0, 1), (4, 1)],
            &[(0, 0), (2, 0), (2, 1), (4, 4), (6, 1), (6, 4)],
        ],
    ),
    (
        (3, 2),
        [
            &[(0, 3), (4, 3)],
            &[(0, 0), (2, 3), (2, 4), (4, 4), (6, 0), (6, 3)],
        ],
    ),
    (
        (3, 6),
        [
            &[(0, 3), (4, 3)],
            &[(0, 0), (2, 0), (2, 3), (4, 4), (6, 3), (6, 4)],
        ],
    ),
    (
        (5, 2),
        [
            &[(0, 5), (4, 5)],
            &[(0, 0), (2, 4), (2, 5), (4, 4), (6, 0), (6, 5)],
        ],
    ),
    (
        (5, 6),
        [
            &[(0, 5), (4, 5)],
            &[(0, 0), (2, 0), (2, 5), (4, 4), (6, 4), (6, 5)],
        ],
    ),
    (
        (7, 2),
        [
            &[(0, 7), (4, 7)],
            &[(0, 0), (2, 4), (2, 7), (4, 4), (6, 0), (6, 7)],
        ],
    ),
    (
        (7, 6),
        [
            &[(0, 7), (4, 7)],
            &[(0, 0), (2, 0), (2, 7), (4, 4), (6, 4), (6, 7)],
        ],
    ),
];

fn table4(ak: i64, dk: i64, am: i64, dm: i64, b: i64, c: i64) -> bool {
    let key = (ak.rem_euclid(4), dk.rem_euclid(4));
    let col = (am.rem_euclid(2), dm.rem_euclid(2));
    let bc = (b.rem_euclid(4), c.rem_euclid(4));
    if let Some((_, cols)) = TABLE4.iter().find(|(k, _)| *k == key) {
        return cols[(col.0 * 2 + col.1) as usize].contains(&bc);
    }
    // (a, b, c, d) ↦ (d, c, b, a)
    let key = (key.1, key.0);
    let (_, cols) = TABLE4
        .iter()
        .find(|(k, _)| *k == key)
        .expect("odd keys are covered up to swap");
    cols[(col.1 * 2 + col.0) as usize].contains(&(bc.1, bc.0))
}

fn table8(ak: i64, dk: i64, am: i64, dm: i64, b: i64, c: i64) -> bool {
    let (ak, dk, am, dm, b, c) = if dk.rem_euclid(2) == 0 {
        (ak, dk, am, dm, b, c)
    } else {
        (dk, ak, dm, am, c, b)
    };
    let key = (ak.rem_euclid(8), dk.rem_euclid(8));
    let col = match (am.rem_euclid(2), dm.rem_euclid(2)) {
        (1, 0) => 0,
        (1, 1) => 1,
        _ => return false,
    };
    match TABLE8.iter().find(|(k, _)| *k == key) {
        Some((_, cols)) => cols[col].contains(&(b.rem_euclid(8), c.rem_euclid(8))),
        None => false,
    }
}

struct Split {
    ak: i64,
    am: i64,
    dk: i64,
    dm: i64,
}

fn split(a: i64, d: i64) -> Split {
    let (ak, am) = arith::squarefree_i64(a);
    let (dk, dm) = arith::squarefree_i64(d);
    Split { ak, am, dk, dm }
}

/// gcd and congruence conditions shared by both spaces.
fn common_conditions(c4: [i64; 4], s: &Split) -> Option<DeltaDistReason> {
    let [a, b, c, d] = c4;
    if s.ak.gcd(&d) != 1 || a.gcd(&s.dk) != 1 {
        return Some(DeltaDistReason::GcdFail);
    }
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    let r1 = (b * b - 4 * a * c).rem_euclid(s.dk.abs() as i128);
    let r2 = (c * c - 4 * b * d).rem_euclid(s.ak.abs() as i128);
    if r1 != 0 || r2 != 0 {
        return Some(DeltaDistReason::CongruenceFail);
    }
    None
}

/// Table criterion for an integral Δ-distinguished representative in W.
pub fn delta_dist_criterion_w(
    f: &BinaryCubicForm,
) -> Result<std::result::Result<(), DeltaDistReason>> {
    let c4 = small_coeffs(f)?;
    let [a, b, c, d] = c4;
    if a == 0 || d == 0 {
        return Err(Error::InvalidArgument("a and d must be nonzero".into()));
    }
    let s = split(a, d);
    if let Some(r) = common_conditions(c4, &s) {
        return Ok(Err(r));
    }
    let ok = if s.ak.rem_euclid(2) == 1 && s.dk.rem_euclid(2) == 1 {
        table4(s.ak, s.dk, s.am, s.dm, b, c)
    } else {
        table8(s.ak, s.dk, s.am, s.dm, b, c)
    };
    Ok(if ok {
        Ok(())
    } else {
        Err(DeltaDistReason::TableFail)
    })
}

pub fn delta_dist_criterion_wvee(
    f: &BinaryCubicForm,
) -> Result<std::result::Result<(), DeltaDistReason>> {
    let c4 = small_coeffs(f)?;
    if c4[0] == 0 || c4[3] == 0 {
        return Err(Error::InvalidArgument("a and d must be nonzero".into()));
    }
    let s = split(c4[0], c4[3]);
    Ok(match common_conditions(c4, &s) {
        Some(r) => Err(r),
        None => Ok(()),
    })
}

fn from_criterion(
    f: &BinaryCubicForm,
    space: Space,
    verdict: std::result::Result<(), DeltaDistReason>,
) -> Result<DeltaDistResult> {
    match verdict {
        Err(r) => Ok(DeltaDistResult::failed(space, r)),
        Ok(()) => {
            let found = delta_dist_search(f, space)?;
            if found.exists {
                Ok(found)
            } else {
                Ok(DeltaDistResult::failed(space, DeltaDistReason::NotFound))
            }
        }
    }
}

pub fn delta_dist_integral_w(f: &BinaryCubicForm) -> Result<DeltaDistResult> {
    require_maximal(f)?;
    let v = delta_dist_criterion_w(f)?;
    from_criterion(f, Space::W, v)
}

pub fn delta_dist_integral_wvee(f: &BinaryCubicForm) -> Result<DeltaDistResult> {
    require_maximal(f)?;
    let v = delta_dist_criterion_wvee(f)?;
    from_criterion(f, Space::Wvee, v)
}

/// Residue modulus used by the search for `a₁₃` and `b₂₃`.
pub fn search_modulus(a: i64, d: i64) -> i64 {
    let s = split(a, d);
    8 * (s.ak * s.dk).abs()
}

/// Exhaustive search for an integral pair of the shape
/// `A = [[−a₁₁,0,a₁₃/2],[0,0,a₂₃/2],[a₁₃/2,a₂₃/2,a₃₃]]`,
/// `B = [[0,0,b₁₃/2],[0,b₂₂,b₂₃/2],[b₁₃/2,b₂₃/2,b₃₃]]` (halves dropped in W∨),
/// with `a₁₁ = a_k`, `b₂₂ = d_k`, `|a₂₃| = a_m`, `|b₁₃| = d_m`.
pub fn delta_dist_search(f: &BinaryCubicForm, space: Space) -> Result<DeltaDistResult> {
    let [a, b, c, d] = small_coeffs(f)?;
    if a == 0 || d == 0 {
        return Err(Error::InvalidArgument("a and d must be nonzero".into()));
    }
    let s = split(a, d);
    let m = search_modulus(a, d);
    let den = match space {
        Space::W => 4 * s.ak * s.dk,
        Space::Wvee => s.ak * s.dk,
    } as i128;
    let signs = [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)];
    let hit = signs.par_iter().find_map_first(|&(s1, s2)| {
        let a23 = (s1 * s.am) as i128;
        let b13 = (s2 * s.dm) as i128;
        let (a11, b22) = (s.ak as i128, s.dk as i128);
        for a13 in 0..m as i128 {
            let base1 = b as i128 - a13 * a13 * b22;
            let lin1 = 2 * a11 * a23;
            let base2 = -2 * a13 * b13 * b22 - c as i128;
            for b23 in 0..m as i128 {
                let n1 = base1 + lin1 * b23;
                if n1 % den != 0 {
                    continue;
                }
                let n2 = a11 * b23 * b23 + base2;
                if n2 % den == 0 {
                    return Some((a23, b13, a13, b23, n1 / den, n2 / den));
                }
            }
        }
        None
    });
    let Some((a23, b13, a13, b23, a33, b33)) = hit else {
        return Ok(DeltaDistResult::failed(space, DeltaDistReason::NotFound));
    };
    let off = |x: i128| match space {
        Space::W => Q::new(BigInt::from(x), BigInt::from(2)),
        Space::Wvee => qi(BigInt::from(x)),
    };
    let z = Q::zero;
    let big = |x: i128| qi(BigInt::from(x));
    let am = tqf([
        [-big(s.ak as i128), z(), off(a13)],
        [z(), z(), off(a23)],
        [off(a13), off(a23), big(a33)],
    ]);
    let bm = tqf([
        [z(), z(), off(b13)],
        [z(), big(s.dk as i128), off(b23)],
        [off(b13), off(b23), big(b33)],
    ]);
    let pair = QFPair::new(am, bm)?;
    let res = DeltaDistResult {
        space,
        exists: true,
        witness: Some(pair),
        reason: DeltaDistReason::Found,
    };
    if !res.verify(f) {
        return Err(Error::InvalidArgument(format!(
            "search produced an invalid witness for {f}"
        )));
    }
    Ok(res)
}

/// `c₀ x⁴ + c₁ x³y + c₂ x²y² + c₃ xy³ + c₄ y⁴`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryQuarticForm {
    #[serde(with = "arith::qser::vec")]
    pub coeffs: Vec<Q>,
}

impl BinaryQuarticForm {
    pub fn new(c: [Q; 5]) -> Self {
        Self { coeffs: c.to_vec() }
    }

    pub fn from_ints(c: [i64; 5]) -> Self {
        Self::new(c.map(qi))
    }

    pub fn coeff(&self, i: usize) -> &Q {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let mut s = Q::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            s += c * pow(x, 4 - i as u32) * pow(y, i as u32);
        }
        s
    }

    /// `q(x, 1)` as a polynomial in x.
    pub fn dehomogenize(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `I = 12ae − 3bd + c²`.
    pub fn invariant_i(&self) -> Q {
        let [a, b, c, d, e] = self.five();
        qi(12) * a * e - qi(3) * b * d + c * c
    }

    /// `J = 72ace + 9bcd − 27ad² − 27eb² − 2c³`.
    pub fn invariant_j(&self) -> Q {
        let [a, b, c, d, e] = self.five();
        qi(72) * a * c * e + qi(9) * b * c * d
            - qi(27) * a * d * d
            - qi(27) * e * b * b
            - qi(2) * c * c * c
    }

    fn five(&self) -> [&Q; 5] {
        [
            &self.coeffs[0],
            &self.coeffs[1],
            &self.coeffs[2],
            &self.coeffs[3],
            &self.coeffs[4],
        ]
    }
}

impl fmt::Display for BinaryQuarticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn pow(x: &Q, e: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// The 2-cover quartic `b₁₁/4 x⁴ + b₁₂ x³y + b₂₂ x²y² + 2b₂₃ xy³ + b₃₃ y⁴` of a pair
/// whose first form is the anti-diagonal form, after clearing `b₁₃` with a multiple of it.
pub fn associated_quartic(p: &QFPair) -> Result<BinaryQuarticForm> {
    if p.a != TernaryQuadraticForm::anti_diagonal() {
        return Err(Error::NotNormalized(
            "first form must be the anti-diagonal form".into(),
        ));
    }
    let t = -p.b.entry(0, 2).clone();
    let b = p.b.add(&p.a.scale(&t));
    let g = |i: usize, j: usize| b.entry(i, j).clone();
    Ok(BinaryQuarticForm::new([
        g(0, 0) / qi(4),
        g(0, 1),
        g(1, 1),
        g(1, 2) * qi(2),
        g(2, 2),
    ]))
}

/// The Δ-distinguished pair of a monic form, moved into W∨ with first form equal to
/// the anti-diagonal form. Its resolvent is `4f`.
pub fn delta_dist_normalized(f: &BinaryCubicForm) -> Result<QFPair> {
    if !f.is_monic() {
        return Err(Error::InvalidArgument("form must be monic".into()));
    }
    let rep = delta_distinguished_rep(f)?;
    let z = Q::zero;
    let o = Q::one;
    let g0 = [[o(), z(), z()], [z(), qi(2), z()], [z(), z(), o()]];
    let beta = qi(f.b.clone()) / qi(BigInt::from(4) * &f.d);
    // inverse transpose of [[0,1,β/2],[−1,0,0],[0,0,1]]
    let g1 = [[z(), o(), z()], [-o(), z(), z()], [z(), -beta / qi(2), o()]];
    let a = rep.a.transform(&g0).transform(&g1);
    let b = rep.b.transform(&g0).transform(&g1);
    QFPair::new(a, b)
}

/// The quartic attached to the Δ-distinguished orbit of a monic form.
pub fn delta_dist_quartic(f: &BinaryCubicForm) -> Result<BinaryQuarticForm> {
    associated_quartic(&delta_dist_normalized(f)?)
}

/// Distinct real projective roots.
pub fn count_real_roots(q: &BinaryQuarticForm) -> Result<usize> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("zero quartic".into()));
    }
    let affine = q.dehomogenize();
    let at_infinity = usize::from(q.coeff(0).is_zero());
    Ok(poly::count_real_roots(&affine) + at_infinity)
}

/// Whether `z² = q(x, y)` has a real point with `(x, y) ≠ 0`.
pub fn quartic_real_soluble(q: &BinaryQuarticForm) -> Result<bool> {
    if count_real_roots(q)? > 0 {
        return Ok(true);
    }
    Ok(q.eval(&Q::one(), &Q::zero()).is_positive() || q.eval(&Q::zero(), &Q::one()).is_positive())
}

/// Real solubility of the Δ-distinguished orbit of a monic form, decided on its quartic.
/// For `b = 0` this is `disc < 0 or f(0,1) > 0`.
pub fn real_soluble_delta_dist(f: &BinaryCubicForm) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::InvalidArgument("form must be monic".into()));
    }
    quartic_real_soluble(&delta_dist_quartic(f)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RealSplittingType {
    S1111,
    S112,
    S22sharp,
    S22plus,
    S22minus,
}

const REFINE_STEPS: usize = 4000;

fn cubic_of_pencil(a: &TernaryQuadraticForm, b: &TernaryQuadraticForm) -> QPoly {
    // det(θA − B) by interpolation at θ = 0, 1, −1, 2
    let at = |t: i64| a.scale(&qi(t)).add(&b.scale(&qi(-1))).det();
    let (v0, v1, vm1, v2) = (at(0), at(1), at(-1), at(2));
    let d0 = v0.clone();
    let s = (&v1 + &vm1) / qi(2) - &d0; // c2
    let t = (&v1 - &vm1) / qi(2); // c1 + c3
                                  // v2 = d0 + 2c1 + 4c2 + 8c3
    let c3 = (&v2 - &d0 - qi(4) * &s - qi(2) * &t) / qi(6);
    let c1 = &t - &c3;
    QPoly::new(vec![d0, c1, s, c3])
}

fn e2_of_pencil(a: &TernaryQuadraticForm, b: &TernaryQuadraticForm) -> QPoly {
    let e2 = |t: i64| {
        let m = a.scale(&qi(t)).add(&b.scale(&qi(-1)));
        let g = m.gram();
        let minor = |i: usize, j: usize| &g[i][i] * &g[j][j] - &g[i][j] * &g[i][j];
        minor(0, 1) + minor(0, 2) + minor(1, 2)
    };
    let (v0, v1, vm1) = (e2(0), e2(1), e2(-1));
    let c2 = (&v1 + &vm1) / qi(2) - &v0;
    let c1 = (&v1 - &vm1) / qi(2);
    QPoly::new(vec![v0, c1, c2])
}

/// Sign of `r + q·√m` for `m > 0`.
fn sign_surd(r: &Q, qq: &Q, m: &Q) -> i32 {
    let sr = sign_q(r);
    let sq = sign_q(qq);
    if sq == 0 || sr == sq {
        return if sr != 0 { sr } else { sq };
    }
    if sr == 0 {
        return sq;
    }
    // opposite signs: compare r² with q²m
    let lhs = r * r;
    let rhs = qq * qq * m;
    if lhs > rhs {
        sr
    } else if lhs < rhs {
        sq
    } else {
        0
    }
}

fn sign_q(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Real intersection pattern of the conics `A = 0` and `B = 0`.
pub fn real_splitting_type(
    a: &TernaryQuadraticForm,
    b: &TernaryQuadraticForm,
) -> Result<RealSplittingType> {
    let res = crate::forms::resolvent_q(a, b);
    let disc = disc_q(&res);
    if disc.is_zero() {
        return Err(Error::DegenerateForm);
    }
    if disc.is_negative() {
        return Ok(RealSplittingType::S112);
    }
    // a pencil basis with invertible first member
    let mut a1 = a.clone();
    let mut s = 0i64;
    while a1.det().is_zero() {
        s += 1;
        a1 = a.add(&b.scale(&qi(s)));
    }
    let cubic = cubic_of_pencil(&a1, b);
    let e2 = e2_of_pencil(&a1, b);
    let roots = poly::isolate_roots(&cubic);
    let mut negatives = 0;
    for (lo, hi) in &roots {
        let sg = poly::sign_at_root(&cubic, lo, hi, &e2, REFINE_STEPS)
            .ok_or_else(|| Error::PrecisionExhausted("degenerate pencil member".into()))?;
        if sg < 0 {
            negatives += 1;
        }
    }
    if negatives == 3 {
        return Ok(RealSplittingType::S1111);
    }
    if negatives != 1 || roots.len() != 3 {
        return Err(Error::PrecisionExhausted(format!(
            "unexpected pencil pattern: {} real members, {negatives} real line pairs",
            roots.len()
        )));
    }
    let sign = sign_of_b_on_a(a, b)?;
    Ok(match sign {
        None => RealSplittingType::S22sharp,
        Some(1) => RealSplittingType::S22plus,
        _ => RealSplittingType::S22minus,
    })
}

pub fn real_splitting_type_pair(p: &QFPair) -> Result<RealSplittingType> {
    real_splitting_type(&p.a, &p.b)
}

/// Sign of B on the real points of `A = 0`; `None` when A is definite.
fn sign_of_b_on_a(a: &TernaryQuadraticForm, b: &TernaryQuadraticForm) -> Result<Option<i32>> {
    let basis = orthogonal_basis(a);
    if let Some((v, _)) = basis.iter().find(|(_, d)| d.is_zero()) {
        let s = sign_q(&b.value(v));
        return if s == 0 {
            Err(Error::DegenerateForm)
        } else {
            Ok(Some(s))
        };
    }
    let (pos, neg) = signature(a);
    if pos == 3 || neg == 3 {
        return Ok(None);
    }
    let (ui, di) = basis.iter().find(|(_, d)| d.is_positive()).unwrap();
    let (uj, dj) = basis.iter().find(|(_, d)| d.is_negative()).unwrap();
    // v = √(−d_j)·u_i + √(d_i)·u_j lies on A = 0
    let r = -dj * b.value(ui) + di * b.value(uj);
    let qq = qi(2) * b.bilinear(ui, uj);
    let m = -(di * dj);
    let s = sign_surd(&r, &qq, &m);
    if s == 0 {
        return Err(Error::DegenerateForm);
    }
    Ok(Some(s))
}

fn disc_q(c: &[Q; 4]) -> Q {
    let [a, b, cc, d] = c;
    qi(18) * a * b * cc * d - qi(4) * b * b * b * d + b * b * cc * cc
        - qi(4) * a * cc * cc * cc
        - qi(27) * a * a * d * d
}

/// A diagonal pair with `det(xA − B) = f(x, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealOrbitRep {
    #[serde(rename = "A")]
    pub a: TernaryQuadraticForm,
    #[serde(rename = "B")]
    pub b: TernaryQuadraticForm,
    /// True when the roots are rational and the pair is exact.
    pub exact: bool,
}

/// Real roots `r₁ < r₂ < r₃` of a monic cubic with positive discriminant, exact when
/// rational, otherwise to within `2^-bits`.
pub fn real_roots_monic(f: &BinaryCubicForm, bits: u32) -> Result<(Vec<Q>, bool)> {
    if !f.is_monic() {
        return Err(Error::InvalidArgument("form must be monic".into()));
    }
    if !f.disc().is_positive() {
        return Err(Error::InvalidArgument(
            "discriminant must be positive".into(),
        ));
    }
    let p = QPoly::new(vec![
        qi(f.d.clone()),
        qi(f.c.clone()),
        qi(f.b.clone()),
        Q::one(),
    ]);
    let seq = p.sturm();
    let tol = Q::new(BigInt::one(), BigInt::one() << bits);
    let mut out = Vec::new();
    let mut exact = true;
    for (lo, hi) in poly::isolate_roots(&p) {
        // integer roots of a monic integer cubic are its only rational roots
        let first = lo.floor().to_integer();
        let last = hi.ceil().to_integer();
        let mut found = None;
        let mut k = first.clone();
        while k <= last {
            let x = qi(k.clone());
            if x > lo && x <= hi && p.eval(&x).is_zero() {
                found = Some(x);
                break;
            }
            k += 1;
        }
        match found {
            Some(x) => out.push(x),
            None => {
                exact = false;
                let (mut l, mut h) = (lo, hi);
                while &h - &l > tol {
                    (l, h) = poly::bisect(&seq, &l, &h);
                }
                out.push((l + h) / qi(2));
            }
        }
    }
    Ok((out, exact))
}

pub fn real_orbit_reps(f: &BinaryCubicForm) -> Result<Vec<RealOrbitRep>> {
    let (r, exact) = real_roots_monic(f, 64)?;
    let signs: [[i64; 3]; 4] = [[-1, 1, -1], [1, -1, -1], [-1, -1, 1], [1, 1, 1]];
    Ok(signs
        .iter()
        .map(|s| {
            let diag = |v: [Q; 3]| {
                let z = Q::zero;
                let [x, y, w] = v;
                tqf([[x, z(), z()], [z(), y, z()], [z(), z(), w]])
            };
            RealOrbitRep {
                a: diag(s.map(qi)),
                b: diag([0, 1, 2].map(|i| &r[i] * qi(s[i]))),
                exact,
            }
        })
        .collect())
}

/// Archimedean mass of `f` with κ-signs `(ε₁, ε₂)` in splitting type `t`.
pub fn real_mass(
    f: &BinaryCubicForm,
    eps1: local::Kappa,
    eps2: local::Kappa,
    t: RealSplittingType,
) -> Result<Q> {
    use local::Kappa::{Minus, Plus};
    let disc = f.disc();
    if disc.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let positive = disc.is_positive();
    if positive == (t == RealSplittingType::S112) {
        return Err(Error::TypeMismatch);
    }
    Ok(match (t, eps1, eps2) {
        (RealSplittingType::S1111, Plus, Plus) => q(1, 4),
        (RealSplittingType::S112, Plus, Plus) => q(1, 2),
        (RealSplittingType::S22plus, Plus, e) if e == Plus || e == Minus => {
            let on_plus = middle_root_condition(f)?;
            if on_plus == (e == Plus) {
                q(1, 4)
            } else {
                Q::zero()
            }
        }
        _ => Q::zero(),
    })
}

/// `r₂ > 0 or r₃ < 0` for the real roots `r₁ < r₂ < r₃` of `f(x, 1)`.
pub fn middle_root_condition(f: &BinaryCubicForm) -> Result<bool> {
    if f.a.is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }
    let p = QPoly::new(vec![
        qi(f.d.clone()),
        qi(f.c.clone()),
        qi(f.b.clone()),
        qi(f.a.clone()),
    ]);
    let roots = poly::isolate_roots(&p);
    if roots.len() != 3 {
        return Err(Error::TypeMismatch);
    }
    let seq = p.sturm();
    let zero = Q::zero();
    // r₂ > 0 iff at most one root in (−∞, 0]; r₃ < 0 iff no root in (0, ∞)
    let bound = p.root_bound();
    let nonpositive = poly::count_roots_in(&seq, &-bound.clone(), &zero);
    let positive = poly::count_roots_in(&seq, &zero, &bound);
    Ok(nonpositive <= 1 || positive == 0)
}

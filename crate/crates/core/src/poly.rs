//! Univariate polynomials over Q with Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use crate::arith::{qi, Q};

/// Coefficients in increasing degree; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub c: Vec<Q>,
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.c.len() as i32 - 1
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * qi(i as i64))
                .collect(),
        )
    }

    pub fn rem(&self, m: &QPoly) -> QPoly {
        assert!(!m.is_zero());
        let mut r = self.c.clone();
        let dm = m.c.len();
        let lm = m.lead();
        while r.len() >= dm {
            let k = r.len() - dm;
            let f = r.last().unwrap() / &lm;
            for (i, mc) in m.c.iter().enumerate() {
                r[k + i] = &r[k + i] - &f * mc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        QPoly::new(r)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead();
        QPoly::new(a.c.iter().map(|x| x / &l).collect())
    }

    pub fn sturm(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Cauchy bound: every real root lies in (-B, B).
    pub fn root_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self
            .c
            .iter()
            .map(|a| a.abs() / &l)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }
}

fn sign_changes(seq: &[QPoly], x: &Q) -> usize {
    let mut last = 0i32;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct real roots in the half-open interval (lo, hi].
pub fn count_roots_in(seq: &[QPoly], lo: &Q, hi: &Q) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

pub fn count_real_roots(p: &QPoly) -> usize {
    if p.degree() <= 0 {
        return 0;
    }
    let seq = p.sturm();
    let b = p.root_bound();
    count_roots_in(&seq, &-b.clone(), &b)
}

/// Disjoint isolating intervals (lo, hi], in increasing order, one per distinct real root.
pub fn isolate_roots(p: &QPoly) -> Vec<(Q, Q)> {
    if p.degree() <= 0 {
        return Vec::new();
    }
    let seq = p.sturm();
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots_in(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / qi(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Halve an isolating interval of `p` (a single root in (lo, hi]).
pub fn bisect(seq: &[QPoly], lo: &Q, hi: &Q) -> (Q, Q) {
    let mid = (lo + hi) / qi(2);
    if count_roots_in(seq, lo, &mid) == 1 {
        (lo.clone(), mid)
    } else {
        (mid, hi.clone())
    }
}

/// Sign of `g` at the unique root of `p` in (lo, hi], assuming `g` does not vanish there.
/// Refines the interval until `g` has no root in it.
pub fn sign_at_root(p: &QPoly, lo: &Q, hi: &Q, g: &QPoly, max_steps: usize) -> Option<i32> {
    let seq = p.sturm();
    let gs = if g.degree() >= 1 {
        Some(g.sturm())
    } else {
        None
    };
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    for _ in 0..max_steps {
        let clear = match &gs {
            None => true,
            Some(s) => count_roots_in(s, &lo, &hi) == 0 && !g.eval(&hi).is_zero(),
        };
        if clear {
            let v = g.eval(&hi);
            return Some(if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            });
        }
        let (l, h) = bisect(&seq, &lo, &hi);
        lo = l;
        hi = h;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_simple_roots() {
        assert_eq!(count_real_roots(&QPoly::from_ints(&[-1, 0, 0, 0, 1])), 2);
        assert_eq!(count_real_roots(&QPoly::from_ints(&[1, 0, 0, 0, 1])), 0);
        assert_eq!(count_real_roots(&QPoly::from_ints(&[0, -1, 0, 1])), 3);
        assert_eq!(count_real_roots(&QPoly::from_ints(&[0, 0, 1])), 1);
    }

    #[test]
    fn isolation_orders_roots() {
        let p = QPoly::from_ints(&[6, -11, 6, -1]).neg(); // (x-1)(x-2)(x-3)
        let iv = isolate_roots(&p);
        assert_eq!(iv.len(), 3);
        for (k, (lo, hi)) in iv.iter().enumerate() {
            let r = qi(k as i64 + 1);
            assert!(lo < &r && &r <= hi);
        }
    }

    #[test]
    fn sign_at_irrational_root() {
        // x² - 2 at its positive root; g = x - 1 is positive there
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let iv = isolate_roots(&p);
        let (lo, hi) = &iv[1];
        let g = QPoly::from_ints(&[-1, 1]);
        assert_eq!(sign_at_root(&p, lo, hi, &g, 200), Some(1));
        let g2 = QPoly::from_ints(&[-3, 2]); // 2x - 3 < 0 at 1.414
        assert_eq!(sign_at_root(&p, lo, hi, &g2, 200), Some(-1));
    }
}

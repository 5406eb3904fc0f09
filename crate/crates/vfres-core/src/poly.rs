//! Sparse Laurent polynomials in x, y, z over Q.
//!
//! Exponents are signed so that the same type carries the logarithmic
//! coefficients f = A/x, g = B/y, h = C/z and the intermediate quotients of
//! blow-up substitutions. Zero coefficients are never stored.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
use num_traits::{One, Zero};

use crate::rat::{q, Q};

pub type Exp = [i64; 3];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exp, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    /// The coordinate function with index 0, 1 or 2.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Exp, Q)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    /// Multiplication by the monomial x^s.
    pub fn shift(&self, s: Exp) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, a)| ([e[0] + s[0], e[1] + s[1], e[2] + s[2]], a.clone())).collect(),
        }
    }

    pub fn min_exp(&self, i: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn max_exp(&self, i: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = &r * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = *e;
                f[i] -= 1;
                p.add_term(f, c * q(e[i]));
            }
        }
        p
    }

    /// Sets variable `i` to the constant `v` (exponent must be ≥ 0 when `v` = 0).
    pub fn eval_var(&self, i: usize, v: &Q) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f[i];
            f[i] = 0;
            if k == 0 {
                p.add_term(f, c.clone());
            } else if !v.is_zero() {
                p.add_term(f, c * pow_q(v, k));
            } else {
                assert!(k > 0, "negative power of zero");
            }
        }
        p
    }

    pub fn eval(&self, pt: &[Q; 3]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                if e[i] != 0 {
                    t *= pow_q(&pt[i], e[i]);
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes polynomials for x, y, z. Negative exponents are allowed
    /// only for variables whose image is a single monomial.
    pub fn compose(&self, im: [&Poly; 3]) -> Poly {
        let mut cache: [BTreeMap<i64, Poly>; 3] = Default::default();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for i in 0..3 {
                if e[i] == 0 {
                    continue;
                }
                let pw = cache[i].entry(e[i]).or_insert_with(|| power_any(im[i], e[i])).clone();
                t = &t * &pw;
            }
            out = &out + &t;
        }
        out
    }

    /// Terms whose exponent satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Exp) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (*e, c.clone())).collect() }
    }

    pub fn exponents(&self) -> Vec<Exp> {
        self.terms.keys().copied().collect()
    }
}

fn pow_q(v: &Q, k: i64) -> Q {
    if k >= 0 {
        num_traits::pow(v.clone(), k as usize)
    } else {
        num_traits::pow(v.recip(), (-k) as usize)
    }
}

fn power_any(p: &Poly, k: i64) -> Poly {
    if k >= 0 {
        return p.pow(k as u32);
    }
    assert!(p.len() == 1, "negative power of a non-monomial");
    let (e, c) = p.terms().next().unwrap();
    Poly::monomial([e[0] * k, e[1] * k, e[2] * k], pow_q(c, k))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut acc: BTreeMap<Exp, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                *acc.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

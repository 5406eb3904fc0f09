//! Dense univariate polynomials over Q: gcd, square-free parts, exact
//! rational roots, Sturm counts, interpolation and resultants of bivariate
//! polynomials.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::determinant;
use crate::poly::Poly;
use crate::rat::{q, sign, Q};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    c: Vec<Q>,
}

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().map_or(false, |a| a.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    /// t - r
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), Q::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, t: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * t + a;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Q::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, a) in o.c.iter().enumerate() {
            c[i] += a;
        }
        UPoly::new(c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, k: &Q) -> UPoly {
        UPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn deriv(&self) -> UPoly {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * q(i as i64)).collect())
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.c.len();
        if r.len() < dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd + 1];
        let lead = d.lead();
        for k in (0..quo.len()).rev() {
            let f = &r[k + dd - 1] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            quo[k] = f;
        }
        r.truncate(dd - 1);
        (UPoly::new(quo), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree() <= 0 {
            return self.monic();
        }
        let g = self.gcd(&self.deriv());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `t` as a root (0 when not a root); p must be nonzero.
    pub fn multiplicity(&self, t: &Q) -> usize {
        assert!(!self.is_zero());
        let lin = UPoly::linear_root(t);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (quo, r) = p.divrem(&lin);
            if !r.is_zero() {
                return k;
            }
            p = quo;
            k += 1;
        }
    }

    /// Scaled copy with coprime integer coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for a in &self.c {
            l = l.lcm(a.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = g.gcd(a);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|a| a / &g).collect()
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut ch = vec![self.clone(), self.deriv()];
        while !ch.last().unwrap().is_zero() {
            let n = ch.len();
            let (_, r) = ch[n - 2].divrem(&ch[n - 1]);
            ch.push(r.scale(&q(-1)));
        }
        ch.pop();
        ch
    }

    fn variations_at(chain: &[UPoly], t: &Q) -> usize {
        let signs: Vec<i32> = chain.iter().map(|p| sign(&p.eval(t))).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn variations_inf(chain: &[UPoly], pos: bool) -> usize {
        let signs: Vec<i32> = chain
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if pos || p.degree() % 2 == 0 { s } else { -s }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() <= 0 {
            return 0;
        }
        let ch = self.squarefree().sturm_chain();
        Self::variations_inf(&ch, false) - Self::variations_inf(&ch, true)
    }

    /// Distinct real roots in the half-open interval (a, b].
    pub fn count_roots_in(&self, a: &Q, b: &Q) -> usize {
        if self.degree() <= 0 {
            return 0;
        }
        let ch = self.squarefree().sturm_chain();
        Self::variations_at(&ch, a) - Self::variations_at(&ch, b)
    }

    /// Cauchy bound on |root|.
    pub fn root_bound(&self) -> Q {
        let lead = self.lead().abs();
        let m = self.c.iter().map(|a| a.abs() / &lead).fold(Q::zero(), |a, b| if b > a { b } else { a });
        m + Q::one()
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree() <= 0 {
            return Vec::new();
        }
        let sf = self.squarefree();
        let ints = sf.primitive_integer();
        let an = Q::from_integer(ints.last().unwrap().abs());
        let ch = sf.sturm_chain();
        let bound = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        // Candidates are k/a_n; two distinct ones are at least 1/a_n apart.
        let width = an.recip();
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::variations_at(&ch, &lo) - Self::variations_at(&ch, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 && &hi - &lo < width {
                let k0 = (&lo * &an).floor().to_integer();
                let k1 = (&hi * &an).ceil().to_integer();
                let mut k = k0;
                while k <= k1 {
                    let t = Q::from_integer(k.clone()) / &an;
                    if t > lo && t <= hi && sf.eval(&t).is_zero() {
                        out.push(t);
                        break;
                    }
                    k += 1;
                }
                continue;
            }
            let mid = (&lo + &hi) / q(2);
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort();
        out
    }

    /// Removes every rational root (with multiplicity).
    pub fn strip_rational_roots(&self) -> UPoly {
        let mut p = self.clone();
        for r in self.rational_roots() {
            let lin = UPoly::linear_root(&r);
            loop {
                let (quo, rem) = p.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                p = quo;
            }
        }
        p
    }

    /// Newton interpolation through the given nodes.
    pub fn interpolate(xs: &[Q], ys: &[Q]) -> UPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<Q> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut p = UPoly::constant(dd[n - 1].clone());
        for i in (0..n - 1).rev() {
            p = p.mul(&UPoly::linear_root(&xs[i])).add(&UPoly::constant(dd[i].clone()));
        }
        p
    }
}

/// Coefficient list of `p` in variable `v` after fixing the other variable
/// `u` to `t` (x is assumed absent).
fn coeffs_at(p: &Poly, u: usize, v: usize, t: &Q, deg: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); deg + 1];
    for (e, a) in p.terms() {
        let k = e[v] as usize;
        c[k] += a * num_traits::pow(t.clone(), e[u] as usize);
    }
    c
}

/// Resultant of two polynomials in variables (u, v) with respect to v, as a
/// univariate polynomial in u. Both must be polynomials with no x.
pub fn resultant(p: &Poly, r: &Poly, u: usize, v: usize) -> UPoly {
    let dp = p.max_exp(v).unwrap_or(0).max(0) as usize;
    let dr = r.max_exp(v).unwrap_or(0).max(0) as usize;
    let bu = (dp as i64 * r.max_exp(u).unwrap_or(0) + dr as i64 * p.max_exp(u).unwrap_or(0)) as usize;
    let n = dp + dr;
    let mut xs = Vec::with_capacity(bu + 1);
    let mut ys = Vec::with_capacity(bu + 1);
    for k in 0..=bu {
        let t = q(k as i64);
        let cp = coeffs_at(p, u, v, &t, dp);
        let cr = coeffs_at(r, u, v, &t, dr);
        let mut m = vec![vec![Q::zero(); n]; n];
        for i in 0..dr {
            for (j, a) in cp.iter().rev().enumerate() {
                m[i][i + j] = a.clone();
            }
        }
        for i in 0..dp {
            for (j, a) in cr.iter().rev().enumerate() {
                m[dr + i][i + j] = a.clone();
            }
        }
        xs.push(t);
        ys.push(if n == 0 { Q::one() } else { determinant(m) });
    }
    UPoly::interpolate(&xs, &ys)
}

/// The univariate polynomial carried by variable `v` of a Poly in one variable.
pub fn from_poly(p: &Poly, v: usize) -> UPoly {
    let d = p.max_exp(v).unwrap_or(0).max(0) as usize;
    let mut c = vec![Q::zero(); d + 1];
    for (e, a) in p.terms() {
        debug_assert!((0..3).all(|i| i == v || e[i] == 0));
        c[e[v] as usize] += a;
    }
    UPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&a| q(a)).collect())
    }

    #[test]
    fn gcd_and_roots() {
        // (t-1)^2 (t+2)(2t-3)
        let p = up(&[1, -2, 1]).mul(&up(&[2, 1])).mul(&up(&[-3, 2]));
        assert_eq!(p.rational_roots(), vec![q(-2), q(1), qf(3, 2)]);
        assert_eq!(p.multiplicity(&q(1)), 2);
        assert_eq!(p.count_real_roots(), 3);
    }

    #[test]
    fn irrational_roots_counted() {
        let p = up(&[-2, 0, 1]).mul(&up(&[1, 0, 1]));
        assert!(p.rational_roots().is_empty());
        assert_eq!(p.count_real_roots(), 2);
        assert_eq!(p.strip_rational_roots(), p);
    }

    #[test]
    fn roots_near_each_other() {
        let p = UPoly::linear_root(&qf(1, 1000)).mul(&UPoly::linear_root(&qf(1, 999)));
        assert_eq!(p.rational_roots(), vec![qf(1, 1000), qf(1, 999)]);
    }

    #[test]
    fn interpolation_exact() {
        let p = up(&[3, 0, -1, 2]);
        let xs: Vec<Q> = (0..4).map(q).collect();
        let ys: Vec<Q> = xs.iter().map(|t| p.eval(t)).collect();
        assert_eq!(UPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn resultant_of_lines() {
        // y - z and y + z - 2 meet at y = 1
        let a = Poly::from_terms([([0, 1, 0], q(1)), ([0, 0, 1], q(-1))]);
        let b = Poly::from_terms([([0, 1, 0], q(1)), ([0, 0, 1], q(1)), ([0, 0, 0], q(-2))]);
        let r = resultant(&a, &b, 1, 2);
        assert_eq!(r.rational_roots(), vec![q(1)]);
    }

    #[test]
    fn resultant_with_common_factor_is_zero() {
        let a = Poly::from_terms([([0, 1, 1], q(1)), ([0, 0, 1], q(1))]); // z(y+1)
        let b = Poly::from_terms([([0, 0, 2], q(1))]); // z^2
        assert!(resultant(&a, &b, 1, 2).is_zero());
    }
}

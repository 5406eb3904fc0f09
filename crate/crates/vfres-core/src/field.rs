//! Polynomial vector fields in the standard basis and their logarithmic
//! Newton maps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Exp, Poly};
use crate::rat::{q, Q};

/// χ = A ∂x + B ∂y + C ∂z with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyVectorField {
    pub c: [Poly; 3],
}

impl PolyVectorField {
    pub fn new(a: Poly, b: Poly, c: Poly) -> Self {
        PolyVectorField { c: [a, b, c] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `(component, exponent, coefficient)` triples.
    pub fn from_terms(it: impl IntoIterator<Item = (usize, Exp, Q)>) -> Self {
        let mut v = Self::zero();
        for (i, e, a) in it {
            v.c[i].add_term(e, a);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Poly::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.c.iter().all(Poly::is_polynomial)
    }

    pub fn degree(&self) -> i64 {
        self.c.iter().map(Poly::total_degree).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        PolyVectorField { c: [&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2]] }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyVectorField { c: [&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2]] }
    }

    pub fn scale(&self, k: &Q) -> Self {
        PolyVectorField { c: [self.c[0].scale(k), self.c[1].scale(k), self.c[2].scale(k)] }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        PolyVectorField { c: [&self.c[0] * p, &self.c[1] * p, &self.c[2] * p] }
    }

    /// χ(φ) for a function φ.
    pub fn apply(&self, phi: &Poly) -> Poly {
        let mut r = Poly::zero();
        for i in 0..3 {
            if !self.c[i].is_zero() {
                r = &r + &(&self.c[i] * &phi.deriv(i));
            }
        }
        r
    }

    pub fn value_at_origin(&self) -> [Q; 3] {
        [self.c[0].coeff(&[0, 0, 0]), self.c[1].coeff(&[0, 0, 0]), self.c[2].coeff(&[0, 0, 0])]
    }

    /// J[i][j] = ∂_j a_i at the origin.
    pub fn jacobian_at_origin(&self) -> [[Q; 3]; 3] {
        let mut j: [[Q; 3]; 3] = Default::default();
        for (i, row) in j.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                let mut e = [0; 3];
                e[k] = 1;
                *slot = self.c[i].coeff(&e);
            }
        }
        j
    }

    /// The same field in coordinates centered at `p` (x ↦ x + p).
    pub fn translate(&self, p: &[Q; 3]) -> Self {
        let im: Vec<Poly> = (0..3)
            .map(|i| {
                let mut e = [0; 3];
                e[i] = 1;
                Poly::from_terms([(e, q(1)), ([0, 0, 0], p[i].clone())])
            })
            .collect();
        let m = [&im[0], &im[1], &im[2]];
        PolyVectorField { c: [self.c[0].compose(m), self.c[1].compose(m), self.c[2].compose(m)] }
    }

    /// Renames coordinates: new variable k is old variable `perm[k]`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let mut out = Self::zero();
        for k in 0..3 {
            for (e, a) in self.c[perm[k]].terms() {
                out.c[k].add_term([e[perm[0]], e[perm[1]], e[perm[2]]], a.clone());
            }
        }
        out
    }

    /// Exponent of the largest monomial dividing all coefficients.
    pub fn monomial_content(&self) -> Exp {
        let mut m = [i64::MAX; 3];
        for p in &self.c {
            for e in p.exponents() {
                for i in 0..3 {
                    m[i] = m[i].min(e[i]);
                }
            }
        }
        if m[0] == i64::MAX {
            [0, 0, 0]
        } else {
            m
        }
    }
}

/// Log-basis Newton map: exponent ↦ (f, g, h) coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonMap {
    pub map: BTreeMap<Exp, [Q; 3]>,
}

impl NewtonMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(it: impl IntoIterator<Item = (Exp, [Q; 3])>) -> Self {
        let mut m = Self::new();
        for (e, t) in it {
            m.add(e, t);
        }
        m
    }

    pub fn add(&mut self, e: Exp, t: [Q; 3]) {
        let slot = self.map.entry(e).or_insert_with(|| [Q::zero(), Q::zero(), Q::zero()]);
        for i in 0..3 {
            slot[i] += &t[i];
        }
        if slot.iter().all(Zero::is_zero) {
            self.map.remove(&e);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn support(&self) -> Vec<Exp> {
        self.map.keys().copied().collect()
    }

    pub fn get(&self, e: &Exp) -> Option<&[Q; 3]> {
        self.map.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp, &[Q; 3])> {
        self.map.iter()
    }

    /// Checks the Laurent support constraints of a log-basis map.
    pub fn validate(&self) -> Result<()> {
        for (e, t) in &self.map {
            for i in 0..3 {
                if e[i] < -1 {
                    return Err(Error::MalformedSupport(format!("exponent {e:?}")));
                }
                if e[i] == -1 {
                    let bad = (0..3).any(|j| j != i && !t[j].is_zero()) || e.iter().filter(|&&k| k == -1).count() > 1;
                    if bad {
                        return Err(Error::MalformedSupport(format!("entry {e:?} mixes components")));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn to_log_basis(vf: &PolyVectorField) -> Result<NewtonMap> {
    if vf.is_zero() {
        return Err(Error::ZeroField);
    }
    let mut m = NewtonMap::new();
    for i in 0..3 {
        for (e, a) in vf.c[i].terms() {
            let mut v = *e;
            v[i] -= 1;
            let mut t = [Q::zero(), Q::zero(), Q::zero()];
            t[i] = a.clone();
            m.add(v, t);
        }
    }
    m.validate()?;
    Ok(m)
}

pub fn from_log_basis(m: &NewtonMap) -> Result<PolyVectorField> {
    if m.is_empty() {
        return Err(Error::ZeroField);
    }
    let mut vf = PolyVectorField::zero();
    for (v, t) in &m.map {
        for i in 0..3 {
            if !t[i].is_zero() {
                let mut e = *v;
                e[i] += 1;
                vf.c[i].add_term(e, t[i].clone());
            }
        }
    }
    Ok(vf)
}

pub fn dot(w: &[i64; 3], v: &Exp) -> i64 {
    w[0] * v[0] + w[1] * v[1] + w[2] * v[2]
}

pub fn mu_omega(m: &NewtonMap, w: &[i64; 3]) -> Result<i64> {
    m.map.keys().map(|v| dot(w, v)).min().ok_or(Error::ZeroField)
}

pub fn restrict_support(m: &NewtonMap, a: &BTreeSet<Exp>) -> NewtonMap {
    NewtonMap { map: m.map.iter().filter(|(e, _)| a.contains(*e)).map(|(e, t)| (*e, t.clone())).collect() }
}

pub fn lie_bracket(a: &PolyVectorField, b: &PolyVectorField) -> PolyVectorField {
    let mut out = PolyVectorField::zero();
    for i in 0..3 {
        out.c[i] = &a.apply(&b.c[i]) - &b.apply(&a.c[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn t(f: i64, g: i64, h: i64) -> [Q; 3] {
        [q(f), q(g), q(h)]
    }

    #[test]
    fn log_basis_example() {
        // (y² + x z³) ∂y + z³ ∂z
        let vf = PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [1, 0, 3], q(1)), (2, [0, 0, 3], q(1))]);
        let m = to_log_basis(&vf).unwrap();
        let want = NewtonMap::from_entries([([0, 1, 0], t(0, 1, 0)), ([1, -1, 3], t(0, 1, 0)), ([0, 0, 2], t(0, 0, 1))]);
        assert_eq!(m, want);
        assert_eq!(from_log_basis(&m).unwrap(), vf);
    }

    #[test]
    fn radial_and_single() {
        let vf = PolyVectorField::from_terms([(1, [0, 1, 0], q(1)), (2, [0, 0, 1], q(1))]);
        let m = to_log_basis(&vf).unwrap();
        assert_eq!(m, NewtonMap::from_entries([([0, 0, 0], t(0, 1, 1))]));
        assert_eq!(mu_omega(&m, &[0, 1, 1]).unwrap(), 0);
        let g = NewtonMap::from_entries([([0, -1, 4], t(0, 1, 0))]);
        assert_eq!(from_log_basis(&g).unwrap(), PolyVectorField::from_terms([(1, [0, 0, 4], q(1))]));
        assert_eq!(from_log_basis(&NewtonMap::new()), Err(Error::ZeroField));
        let xdx = PolyVectorField::from_terms([(0, [1, 0, 0], q(1))]);
        assert_eq!(to_log_basis(&xdx).unwrap(), NewtonMap::from_entries([([0, 0, 0], t(1, 0, 0))]));
    }

    #[test]
    fn brackets() {
        let dz = PolyVectorField::from_terms([(2, [0, 0, 0], q(1))]);
        let zdz = PolyVectorField::from_terms([(2, [0, 0, 1], q(1))]);
        let ydy = PolyVectorField::from_terms([(1, [0, 1, 0], q(1))]);
        assert_eq!(lie_bracket(&dz, &zdz), dz);
        assert!(lie_bracket(&dz, &ydy).is_zero());
        let ydz = PolyVectorField::from_terms([(2, [0, 1, 0], q(1))]);
        let zdy = PolyVectorField::from_terms([(1, [0, 0, 1], q(1))]);
        let want = PolyVectorField::from_terms([(1, [0, 1, 0], q(1)), (2, [0, 0, 1], q(-1))]);
        assert_eq!(lie_bracket(&ydz, &zdy), want);
    }

    #[test]
    fn malformed_rejected() {
        let m = NewtonMap::from_entries([([0, -1, 2], t(1, 1, 0))]);
        assert!(m.validate().is_err());
        let m = NewtonMap::from_entries([([0, -2, 2], t(0, 1, 0))]);
        assert!(m.validate().is_err());
    }

    #[test]
    fn restrict() {
        let m = NewtonMap::from_entries([([0, 0, 0], t(0, 1, 1)), ([1, 0, 0], t(1, 0, 0))]);
        assert_eq!(restrict_support(&m, &m.map.keys().copied().collect()), m);
        assert!(restrict_support(&m, &BTreeSet::new()).is_empty());
    }
}

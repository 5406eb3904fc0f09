//! Coordinate changes ỹ = y + g(x), z̃ = z + f(x, y) and their action on
//! vector fields.

use alloc::vec::Vec;
use num_traits::Zero;

use crate::field::PolyVectorField;
use crate::poly::Poly;
use crate::rat::{as_nat, q, Q};

/// `None` stands for C = ∞.
pub type Slope = Option<Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupClass {
    G1,
    G2,
    GDeltaC { delta: (Q, Q), c: Slope, i: u8 },
    GDelta { delta: (Q, Q) },
    GPlus { delta: (Q, Q), c: Slope, i: u8 },
    TranslX,
    TranslY,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    /// Polynomial in x and y.
    pub f: Poly,
    /// Polynomial in x.
    pub g: Poly,
    pub class: GroupClass,
}

impl GMap {
    pub fn identity() -> Self {
        GMap { f: Poly::zero(), g: Poly::zero(), class: GroupClass::G1 }
    }

    pub fn new(f: Poly, g: Poly, class: GroupClass) -> Self {
        GMap { f, g, class }
    }

    pub fn is_identity(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// z̃ = z + ξ x^a y^b.
    pub fn monomial(xi: Q, a: i64, b: i64, class: GroupClass) -> Self {
        GMap { f: Poly::monomial([a, b, 0], xi), g: Poly::zero(), class }
    }

    /// The map obtained by applying `self` first and then `next`.
    pub fn then(&self, next: &GMap) -> GMap {
        let x = Poly::var(0);
        let yy = &Poly::var(1) + &self.g;
        let f2 = next.f.compose([&x, &yy, &Poly::var(2)]);
        let class = if self.is_identity() {
            next.class.clone()
        } else if next.is_identity() || self.class == next.class {
            self.class.clone()
        } else {
            GroupClass::G1
        };
        GMap { f: &self.f + &f2, g: &self.g + &next.g, class }
    }

    /// Support constraint of the tagged class.
    pub fn respects_class(&self) -> bool {
        let g_zero = self.g.is_zero();
        let no_z = self.f.terms().all(|(e, _)| e[2] == 0) && self.g.terms().all(|(e, _)| e[1] == 0 && e[2] == 0);
        if !no_z || !self.f.is_polynomial() || !self.g.is_polynomial() {
            return false;
        }
        match &self.class {
            GroupClass::G1 => true,
            GroupClass::G2 => g_zero,
            GroupClass::TranslX => self.f.terms().all(|(e, _)| *e == [0, 0, 0]) && self.g.terms().all(|(e, _)| *e == [0, 0, 0]),
            GroupClass::TranslY => g_zero && self.f.terms().all(|(e, _)| *e == [0, 0, 0]),
            GroupClass::GDelta { delta } => {
                g_zero && self.f.terms().all(|(e, _)| q(e[0]) == delta.0 && q(e[1]) == delta.1)
            }
            GroupClass::GDeltaC { delta, c, i } => f_on_line(&self.f, delta, c, true) && g_ok(&self.g, delta, c, *i),
            GroupClass::GPlus { delta, c, i } => f_on_line(&self.f, delta, c, false) && g_ok(&self.g, delta, c, *i),
        }
    }
}

fn f_on_line(f: &Poly, delta: &(Q, Q), c: &Slope, allow_delta: bool) -> bool {
    f.terms().all(|(e, _)| {
        let (a, b) = (q(e[0]), q(e[1]));
        if a == delta.0 && b == delta.1 {
            return allow_delta;
        }
        if !delta.0.is_zero() {
            return false;
        }
        match c {
            None => false,
            Some(c) => {
                let s = &delta.1 - &b;
                s > Q::zero() && a == c * &s
            }
        }
    })
}

fn g_ok(g: &Poly, delta: &(Q, Q), c: &Slope, i: u8) -> bool {
    if g.is_zero() {
        return true;
    }
    if i != 1 || !delta.0.is_zero() {
        return false;
    }
    match c.as_ref().and_then(as_nat) {
        Some(k) => g.terms().all(|(e, _)| e[0] == k as i64),
        None => false,
    }
}

/// Pushforward of `vf` under the map, written in the new coordinates.
pub fn apply_gmap(vf: &PolyVectorField, m: &GMap) -> PolyVectorField {
    if m.is_identity() {
        return vf.clone();
    }
    let [a, b, c] = &vf.c;
    let b1 = b + &(&m.g.deriv(0) * a);
    let c1 = &(c + &(&m.f.deriv(0) * a)) + &(&m.f.deriv(1) * b);
    let x = Poly::var(0);
    let y_old = &Poly::var(1) - &m.g;
    let f_sub = m.f.compose([&x, &y_old, &Poly::var(2)]);
    let z_old = &Poly::var(2) - &f_sub;
    let im = [&x, &y_old, &z_old];
    PolyVectorField::new(a.compose(im), b1.compose(im), c1.compose(im))
}

/// Applies a sequence of maps in order.
pub fn apply_all(vf: &PolyVectorField, maps: &[GMap]) -> PolyVectorField {
    maps.iter().fold(vf.clone(), |v, m| apply_gmap(&v, m))
}

pub fn compose_all(maps: &[GMap]) -> GMap {
    maps.iter().fold(GMap::identity(), |acc, m| acc.then(m))
}

/// Chart translation moving the point (0, η, ξ) to the origin.
pub fn translation(eta: &Q, xi: &Q) -> GMap {
    let class = if eta.is_zero() { GroupClass::TranslY } else { GroupClass::TranslX };
    GMap { f: Poly::constant(-xi.clone()), g: Poly::constant(-eta.clone()), class }
}

/// Exponents of f paired with coefficients, for reporting.
pub fn f_terms(m: &GMap) -> Vec<([i64; 2], Q)> {
    m.f.terms().map(|(e, c)| ([e[0], e[1]], c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    #[test]
    fn identity_action() {
        let vf = PolyVectorField::from_terms([(1, [0, 0, 1], q(1))]);
        assert_eq!(apply_gmap(&vf, &GMap::identity()), vf);
    }

    #[test]
    fn shear_of_z_squared() {
        // z² ∂z under z̃ = z + y: (z̃ − y)² ∂z̃
        let vf = PolyVectorField::from_terms([(2, [0, 0, 2], q(1))]);
        let m = GMap::monomial(q(1), 0, 1, GroupClass::GDelta { delta: (q(0), q(1)) });
        let want = PolyVectorField::from_terms([(2, [0, 0, 2], q(1)), (2, [0, 1, 1], q(-2)), (2, [0, 2, 0], q(1))]);
        assert_eq!(apply_gmap(&vf, &m), want);
    }

    #[test]
    fn chain_rule_correction() {
        // x ∂x under z̃ = z + x: ż̃ = x
        let vf = PolyVectorField::from_terms([(0, [1, 0, 0], q(1))]);
        let m = GMap::monomial(q(1), 1, 0, GroupClass::G1);
        let want = PolyVectorField::from_terms([(0, [1, 0, 0], q(1)), (2, [1, 0, 0], q(1))]);
        assert_eq!(apply_gmap(&vf, &m), want);
    }

    #[test]
    fn composition_matches_sequential() {
        let vf = PolyVectorField::from_terms([(0, [2, 0, 0], q(1)), (1, [0, 0, 2], q(1)), (2, [1, 1, 0], qf(1, 2))]);
        let m1 = GMap::new(Poly::monomial([0, 1, 0], q(2)), Poly::monomial([1, 0, 0], q(3)), GroupClass::G1);
        let m2 = GMap::new(Poly::monomial([1, 1, 0], q(-1)), Poly::monomial([2, 0, 0], q(1)), GroupClass::G1);
        let seq = apply_gmap(&apply_gmap(&vf, &m1), &m2);
        assert_eq!(apply_gmap(&vf, &m1.then(&m2)), seq);
    }

    #[test]
    fn class_constraints() {
        let d = (q(0), q(2));
        let plus = GroupClass::GPlus { delta: d.clone(), c: Some(q(1)), i: 1 };
        assert!(GMap::new(Poly::monomial([1, 1, 0], q(1)), Poly::monomial([1, 0, 0], q(1)), plus.clone()).respects_class());
        assert!(!GMap::new(Poly::monomial([0, 2, 0], q(1)), Poly::zero(), plus).respects_class());
        let gd = GroupClass::GDelta { delta: d };
        assert!(GMap::monomial(q(5), 0, 2, gd.clone()).respects_class());
        assert!(!GMap::monomial(q(5), 1, 2, gd).respects_class());
    }
}

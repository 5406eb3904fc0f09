//! The lexicographic resolution invariant and the heights used off the
//! divisor.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::classify::{classify_configuration, ClassDescriptor, NewtonData};
use crate::error::{Error, Result};
use crate::field::{dot, PolyVectorField};
use crate::poly::{Exp, Poly};
use crate::polyhedron::GenericPolygon;
use crate::rat::{factorial, floor_i64, q, Q};

/// (𝔥, m2+1, m3, i−1, λΔ1, λ·max(0, Δ2)) with λ = 2(m3+1)!.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Invariant {
    pub v: [u128; 6],
}

impl Invariant {
    pub fn inv1(&self) -> [u128; 3] {
        [self.v[0], self.v[1], self.v[2]]
    }

    pub fn inv2(&self) -> [u128; 3] {
        [self.v[3], self.v[4], self.v[5]]
    }
}

pub fn compare_inv(a: &Invariant, b: &Invariant) -> Ordering {
    a.cmp(b)
}

/// Last two entries under both scale conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub inv: Invariant,
    /// Entries with λ = 2(m3+1)!.
    pub double: [Q; 6],
    /// Entries with λ = (m3+1)!.
    pub single: [Q; 6],
}

pub fn virtual_height(d: &ClassDescriptor) -> Result<u64> {
    let m = d.m;
    let h = if m[1] == -1 && d.delta.0.is_zero() {
        if d.delta.1.is_zero() {
            return Err(Error::MissingDisplacement);
        }
        floor_i64(&(q(m[2] + 1) - d.delta.1.recip()))
    } else {
        m[2]
    };
    u64::try_from(h).map_err(|_| Error::DegenerateResult(format!("virtual height {h}")))
}

fn nat(x: &Q, what: &str) -> Result<u128> {
    if !x.is_integer() || x < &Q::zero() {
        return Err(Error::NonIntegralResult(format!("{what} = {x}")));
    }
    x.to_integer().to_u128().ok_or_else(|| Error::CapExceeded(format!("{what} overflows")))
}

fn lambda(m3: i64) -> Q {
    Q::from_integer(BigInt::from(2) * factorial(m3.max(0) as u64 + 1))
}

pub fn invariant_of(d: &ClassDescriptor) -> Result<Invariant> {
    let h = virtual_height(d)?;
    let m = d.m;
    let l = lambda(m[2]);
    let d2 = if d.delta.1 > Q::zero() { d.delta.1.clone() } else { Q::zero() };
    Ok(Invariant {
        v: [
            h as u128,
            nat(&q(m[1] + 1), "m2+1")?,
            nat(&q(m[2]), "m3")?,
            nat(&q(d.i as i64 - 1), "i-1")?,
            nat(&(&l * &d.delta.0), "λΔ1")?,
            nat(&(&l * &d2), "λΔ2")?,
        ],
    })
}

pub fn newton_invariant(data: &NewtonData) -> Result<Invariant> {
    if !data.stable {
        return Err(Error::NotStable);
    }
    invariant_of(&classify_configuration(data)?)
}

pub fn invariant_report(d: &ClassDescriptor) -> Result<InvariantReport> {
    let inv = invariant_of(d)?;
    let double: Vec<Q> = inv.v.iter().map(|&a| Q::from_integer(BigInt::from(a))).collect();
    let mut single = double.clone();
    single[4] = &single[4] / q(2);
    single[5] = &single[5] / q(2);
    let arr = |v: Vec<Q>| -> [Q; 6] { v.try_into().unwrap() };
    Ok(InvariantReport { inv, double: arr(double), single: arr(single) })
}

pub fn generic_virtual_height(gp: &GenericPolygon) -> Result<u64> {
    let m = gp.main;
    let h = if m[0] == -1 {
        let d = gp.delta.as_ref().ok_or(Error::MissingEdge)?;
        if d.is_zero() {
            return Err(Error::MissingEdge);
        }
        floor_i64(&(q(m[1] + 1) - d.recip()))
    } else {
        m[1]
    };
    u64::try_from(h).map_err(|_| Error::DegenerateResult(format!("generic height {h}")))
}

/// Smallest k such that some coefficient contains the monomial z^k.
pub fn primitive_height(vf: &PolyVectorField) -> Option<u64> {
    vf.c.iter().flat_map(|p| p.terms().filter(|(e, _)| e[0] == 0 && e[1] == 0).map(|(e, _)| e[2] as u64)).min()
}

/// Strictly positive weight of least norm whose plane meets the support only
/// at `d`.
pub fn distinguished_weight(support: &[Exp], d: &Exp) -> Result<[i64; 3]> {
    if !support.contains(d) {
        return Err(Error::NoSupportingPlane);
    }
    let spread = support.iter().flat_map(|v| (0..3).map(move |i| (v[i] - d[i]).abs())).max().unwrap_or(0);
    let bound = 4 * (1 + spread);
    for n in 3..=bound {
        for a in 1..=n - 2 {
            for b in 1..=n - a - 1 {
                let w = [a, b, n - a - b];
                let level = dot(&w, d);
                if support.iter().all(|v| v == d || dot(&w, v) > level) {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::NoSupportingPlane)
}

/// x̃ = x + ξy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shear {
    pub xi: Q,
}

impl Shear {
    pub fn is_identity(&self) -> bool {
        self.xi.is_zero()
    }
}

fn has_pure_z(p: &Poly, h: i64) -> bool {
    !p.coeff(&[0, 0, h]).is_zero()
}

/// Shear making the x-coefficient contain z^H, preferring no change.
pub fn make_strongly_adapted(vf: &PolyVectorField) -> Result<Shear> {
    let h = primitive_height(vf).ok_or_else(|| Error::PreconditionViolated("primitive height is infinite".into()))? as i64;
    if has_pure_z(&vf.c[0], h) {
        return Ok(Shear { xi: Q::zero() });
    }
    if has_pure_z(&vf.c[1], h) {
        return Ok(Shear { xi: q(1) });
    }
    Err(Error::PreconditionViolated("no z^H term in the x- or y-coefficient".into()))
}

pub fn apply_shear(vf: &PolyVectorField, s: &Shear) -> PolyVectorField {
    if s.is_identity() {
        return vf.clone();
    }
    let a = &vf.c[0] + &vf.c[1].scale(&s.xi);
    let x_old = &Poly::var(0) - &Poly::var(1).scale(&s.xi);
    let im = [&x_old, &Poly::var(1), &Poly::var(2)];
    PolyVectorField::new(a.compose(im), vf.c[1].compose(im), vf.c[2].compose(im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::DivisorState;
    use crate::field::{lie_bracket, NewtonMap};
    use crate::polyhedron::generic_polygon;
    use crate::rat::qf;
    use proptest::prelude::*;

    fn data(entries: &[(Exp, [i64; 3])]) -> NewtonData {
        let theta = NewtonMap::from_entries(entries.iter().map(|(e, t)| (*e, [q(t[0]), q(t[1]), q(t[2])])));
        let mut d = NewtonData::new(theta, DivisorState::x_only(1));
        d.stable = true;
        d
    }

    #[test]
    fn regular_invariant_height_three() {
        let d = data(&[([0, 1, 1], [1, 0, 0]), ([0, 4, -1], [0, 0, 1]), ([1, -1, 1], [0, 1, 0]), ([0, -1, 4], [0, 1, 0])]);
        let inv = newton_invariant(&d).unwrap();
        assert_eq!(inv.v, [3, 0, 4, 0, 0, 160]);
        let r = invariant_report(&classify_configuration(&d).unwrap()).unwrap();
        assert_eq!(r.single[5], q(80));
    }

    #[test]
    fn vf_b_pair() {
        let before = newton_invariant(&data(&[([0, 1, 0], [0, 1, 0]), ([1, -1, 3], [0, 1, 0]), ([0, 0, 2], [0, 0, 1])])).unwrap();
        let after = newton_invariant(&data(&[([0, 1, 0], [0, 1, 0]), ([0, -1, 3], [0, 1, 0]), ([0, 0, 2], [0, 0, 1])])).unwrap();
        assert_eq!(before.v, [2, 1, 2, 0, 0, 6]);
        assert_eq!(after.inv1(), [2, 0, 3]);
        assert_eq!(compare_inv(&after, &before), Ordering::Less);
    }

    #[test]
    fn unstable_rejected() {
        let mut d = data(&[([0, 0, 2], [0, 0, 1]), ([1, 0, 0], [1, 0, 0])]);
        d.stable = false;
        assert_eq!(newton_invariant(&d), Err(Error::NotStable));
    }

    #[test]
    fn comparisons() {
        let a = Invariant { v: [3, 0, 4, 0, 0, 160] };
        let b = Invariant { v: [3, 0, 4, 0, 0, 159] };
        assert_eq!(compare_inv(&a, &b), Ordering::Greater);
        assert_eq!(compare_inv(&a, &a), Ordering::Equal);
    }

    #[test]
    fn generic_heights() {
        let gp = |main: [i64; 2], delta: Option<Q>| GenericPolygon {
            support: Vec::new(),
            vertices: Vec::new(),
            higher: main,
            main,
            nilpotent: false,
            delta,
            edge_end: None,
            final_situation: false,
        };
        assert_eq!(generic_virtual_height(&gp([-1, 3], Some(qf(1, 2)))).unwrap(), 2);
        assert_eq!(generic_virtual_height(&gp([0, 4], None)).unwrap(), 4);
        assert_eq!(generic_virtual_height(&gp([-1, 2], Some(qf(2, 3)))).unwrap(), 1);
        assert_eq!(generic_virtual_height(&gp([-1, 2], None)), Err(Error::MissingEdge));
        let real = generic_polygon(&[[0, -1, 3], [1, 1, 2], [0, 1, 2]]).unwrap();
        assert_eq!(generic_virtual_height(&real).unwrap(), 3);
    }

    fn bracket_height(vf: &PolyVectorField) -> Option<u64> {
        let dz = PolyVectorField::from_terms([(2, [0, 0, 0], q(1))]);
        let mut cur = vf.clone();
        for h in 0..12 {
            if cur.value_at_origin().iter().any(|a| !a.is_zero()) {
                return Some(h);
            }
            cur = lie_bracket(&dz, &cur);
        }
        None
    }

    #[test]
    fn primitive_heights() {
        let dx = PolyVectorField::from_terms([(0, [0, 0, 0], q(1))]);
        assert_eq!(primitive_height(&dx), Some(0));
        let v = PolyVectorField::from_terms([(1, [0, 0, 3], q(1)), (2, [1, 0, 0], q(1))]);
        assert_eq!(primitive_height(&v), Some(3));
        assert_eq!(bracket_height(&v), Some(3));
        let r = PolyVectorField::from_terms([(0, [1, 0, 0], q(1)), (1, [0, 1, 0], q(1))]);
        assert_eq!(primitive_height(&r), None);
    }

    #[test]
    fn distinguished_weights() {
        assert_eq!(distinguished_weight(&[[-1, 0, 2], [0, 0, 0]], &[-1, 0, 2]).unwrap(), [3, 1, 1]);
        let w = distinguished_weight(&[[-1, 0, 1], [1, 0, 0], [0, 1, 0]], &[-1, 0, 1]).unwrap();
        assert!(dot(&w, &[-1, 0, 1]) < dot(&w, &[1, 0, 0]) && dot(&w, &[-1, 0, 1]) < dot(&w, &[0, 1, 0]));
        assert_eq!(distinguished_weight(&[[1, 1, 1]], &[1, 1, 1]).unwrap(), [1, 1, 1]);
        assert_eq!(distinguished_weight(&[[0, 0, 0], [1, 1, 1]], &[1, 1, 1]), Err(Error::NoSupportingPlane));
    }

    #[test]
    fn shears() {
        let only_b = PolyVectorField::from_terms([(1, [0, 0, 2], q(1)), (2, [1, 0, 0], q(1))]);
        let s = make_strongly_adapted(&only_b).unwrap();
        assert_eq!(s.xi, q(1));
        let moved = apply_shear(&only_b, &s);
        assert_eq!(moved.c[0].coeff(&[0, 0, 2]), q(1));
        let both = PolyVectorField::from_terms([(0, [0, 0, 2], q(1)), (1, [0, 0, 2], q(1))]);
        assert!(make_strongly_adapted(&both).unwrap().is_identity());
    }

    proptest! {
        #[test]
        fn bracket_oracle_matches(ts in proptest::collection::vec((0usize..3, 0i64..3, 0i64..3, 0i64..5, 1i64..4), 1..6)) {
            let vf = PolyVectorField::from_terms(ts.into_iter().map(|(i, a, b, c, k)| (i, [a, b, c], q(k))));
            prop_assume!(!vf.is_zero());
            let p = primitive_height(&vf);
            prop_assume!(p.map_or(true, |h| h < 10));
            prop_assert_eq!(p, bracket_height(&vf));
        }
    }
}

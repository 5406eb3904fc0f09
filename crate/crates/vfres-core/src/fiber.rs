//! Nonelementary points on the exceptional divisor of a chart, found by
//! exact elimination.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use num_traits::Zero;

use crate::blowup::Direction;
use crate::classify::{is_elementary, trace_powers};
use crate::error::{Error, Result};
use crate::field::PolyVectorField;
use crate::poly::{Exp, Poly};
use crate::polyhedron::build_polyhedron;
use crate::rat::{q, Q};
use crate::upoly::{from_poly, resultant, UPoly};

/// Equations of the nonelementary locus restricted to {x = 0}.
fn locus_equations(vf: &PolyVectorField) -> Vec<Poly> {
    let zero = Q::zero();
    let mut out: Vec<Poly> = Vec::new();
    for p in [&vf.c[1], &vf.c[2], &vf.c[0]] {
        out.push(p.eval_var(0, &zero));
    }
    for t in trace_powers(vf) {
        out.push(t.eval_var(0, &zero));
    }
    out.retain(|p| !p.is_zero());
    out
}

fn gcd_all<'a>(it: impl IntoIterator<Item = &'a UPoly>) -> UPoly {
    it.into_iter().fold(UPoly::zero(), |g, p| g.gcd(p))
}

/// Rational roots of a nonzero polynomial, failing on irrational real ones.
fn rational_only(p: &UPoly) -> Result<Vec<Q>> {
    let n = p.strip_rational_roots().count_real_roots();
    if n > 0 {
        return Err(Error::IrrationalFiberPoint(n));
    }
    Ok(p.rational_roots())
}

/// Univariate polynomial in `keep` whose roots contain the `keep`-coordinate
/// of every common zero.
fn eliminant(eqs: &[Poly], keep: usize, drop: usize) -> UPoly {
    let mut free: Vec<UPoly> = Vec::new();
    let mut dep: Vec<&Poly> = Vec::new();
    for p in eqs {
        if p.max_exp(drop).unwrap_or(0) == 0 {
            free.push(from_poly(p, keep));
        } else {
            dep.push(p);
        }
    }
    let mut g = gcd_all(&free);
    if g.degree() == 0 {
        return g;
    }
    for i in 0..dep.len() {
        for j in i + 1..dep.len() {
            g = g.gcd(&resultant(dep[i], dep[j], keep, drop));
            if g.degree() == 0 {
                return g;
            }
        }
    }
    g
}

/// A line of nonelementary points on the exceptional divisor: coordinate
/// `fixed` equals `value` and coordinate `param` is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberLine {
    pub fixed: usize,
    pub value: Q,
    pub param: usize,
}

/// A chart point to analyze next.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiberPoint {
    pub eta: Q,
    pub xi: Q,
    /// Stands for all but finitely many points of a line.
    pub generic: bool,
}

impl FiberPoint {
    fn isolated(eta: Q, xi: Q) -> Self {
        FiberPoint { eta, xi, generic: false }
    }
}

/// Common univariate factor in `var` of all equations.
fn content_in(eqs: &[Poly], var: usize) -> UPoly {
    let other = 3 - var;
    let mut g = UPoly::zero();
    for p in eqs {
        let mut slices: BTreeMap<i64, Poly> = BTreeMap::new();
        for (e, a) in p.terms() {
            let mut f = *e;
            f[other] = 0;
            slices.entry(e[other]).or_default().add_term(f, a.clone());
        }
        for sl in slices.values() {
            g = g.gcd(&from_poly(sl, var));
            if g.degree() == 0 {
                return g;
            }
        }
    }
    g
}

/// Exact quotient of `p` by a univariate factor in `var`.
fn divide_by(p: &Poly, g: &UPoly, var: usize) -> Poly {
    let other = 3 - var;
    let mut slices: BTreeMap<i64, Poly> = BTreeMap::new();
    for (e, a) in p.terms() {
        let mut f = *e;
        f[other] = 0;
        slices.entry(e[other]).or_default().add_term(f, a.clone());
    }
    let mut out = Poly::zero();
    for (k, sl) in slices {
        let (quo, rem) = from_poly(&sl, var).divrem(g);
        debug_assert!(rem.is_zero());
        for (i, a) in quo.coeffs().iter().enumerate() {
            let mut e = [0; 3];
            e[var] = i as i64;
            e[other] = k;
            out.add_term(e, a.clone());
        }
    }
    out
}

fn isolated_points(eqs: &[Poly]) -> Result<Vec<(Q, Q)>> {
    if eqs.iter().all(|p| p.total_degree() == 0) {
        return Ok(Vec::new());
    }
    let (first, second) = {
        let r = eliminant(eqs, 1, 2);
        if r.is_zero() {
            return Err(Error::NonIsolatedFiber);
        }
        match rational_only(&r) {
            Ok(ys) => (1usize, ys),
            Err(e) => {
                let s = eliminant(eqs, 2, 1);
                if s.is_zero() {
                    return Err(Error::NonIsolatedFiber);
                }
                match rational_only(&s) {
                    Ok(zs) => (2usize, zs),
                    Err(_) => return Err(e),
                }
            }
        }
    };
    let other = 3 - first;
    let mut out = Vec::new();
    for a in second {
        let ps: Vec<UPoly> = eqs.iter().map(|p| from_poly(&p.eval_var(first, &a), other)).collect();
        let g = gcd_all(&ps);
        if g.is_zero() {
            return Err(Error::NonIsolatedFiber);
        }
        for b in rational_only(&g)? {
            out.push(if first == 1 { (a.clone(), b) } else { (b, a.clone()) });
        }
    }
    Ok(out)
}

/// Log-exponent ↦ polynomial in the line parameter giving its coefficients
/// at each point of the line.
fn coefficient_curves(vf: &PolyVectorField, param: usize) -> BTreeMap<Exp, [UPoly; 3]> {
    let mut acc: BTreeMap<Exp, [Vec<Q>; 3]> = BTreeMap::new();
    for i in 0..3 {
        for (e, a) in vf.c[i].terms() {
            let n = e[param];
            for k in 0..=n {
                let mut v = *e;
                v[param] = k;
                v[i] -= 1;
                let slot = &mut acc.entry(v).or_default()[i];
                let d = (n - k) as usize;
                if slot.len() <= d {
                    slot.resize(d + 1, Q::zero());
                }
                slot[d] += a * Q::from_integer(binomial(n as u64, k as u64));
            }
        }
    }
    acc.into_iter().map(|(v, [a, b, c])| (v, [UPoly::new(a), UPoly::new(b), UPoly::new(c)])).collect()
}

fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    crate::rat::factorial(n) / (crate::rat::factorial(k) * crate::rat::factorial(n - k))
}

/// Generic representative and special points of a line of nonelementary
/// points; parameters are positions along the line measured from the base.
fn line_points(vf: &PolyVectorField, line: &FiberLine) -> Result<(Q, Vec<Q>)> {
    let mut base = [Q::zero(), Q::zero(), Q::zero()];
    base[line.fixed] = line.value.clone();
    let at_base = vf.translate(&base);
    let curves = coefficient_curves(&at_base, line.param);
    let vanish: BTreeMap<Exp, UPoly> =
        curves.iter().map(|(v, ps)| (*v, ps[0].gcd(&ps[1]).gcd(&ps[2]))).filter(|(_, g)| g.degree() != 0).collect();
    let support: Vec<Exp> = curves.keys().copied().collect();
    let np = build_polyhedron(&support)?;
    let mut relevant: BTreeSet<Exp> = np.vertices.iter().copied().collect();
    for f in np.facets.iter().filter(|f| f.is_bounded()) {
        relevant.extend(f.points.iter().copied());
    }
    let mut special: BTreeSet<Q> = BTreeSet::new();
    for v in &relevant {
        if let Some(g) = vanish.get(v) {
            special.extend(rational_only(g)?);
        }
    }
    let mut avoid: BTreeSet<Q> = special.clone();
    for g in vanish.values() {
        avoid.extend(g.rational_roots());
    }
    let mut k = 1i64;
    while avoid.contains(&q(k)) {
        k += 1;
    }
    Ok((q(k), special.into_iter().collect()))
}

fn on_line(line: &FiberLine, t: &Q) -> (Q, Q) {
    // chart coordinates (η, ξ) of the point at parameter t
    let mut p = [Q::zero(), Q::zero(), Q::zero()];
    p[line.fixed] = line.value.clone();
    p[line.param] = t.clone();
    (p[1].clone(), p[2].clone())
}

fn points_with_lines(vf: &PolyVectorField, eqs: &[Poly], lines: &[FiberLine], isolated: Vec<(Q, Q)>) -> Result<Vec<FiberPoint>> {
    let mut out: BTreeSet<FiberPoint> = isolated.into_iter().map(|(a, b)| FiberPoint::isolated(a, b)).collect();
    let _ = eqs;
    for line in lines {
        let (g, special) = line_points(vf, line)?;
        for t in special {
            let (a, b) = on_line(line, &t);
            out.insert(FiberPoint::isolated(a, b));
        }
        let (a, b) = on_line(line, &g);
        if !out.iter().any(|p| p.eta == a && p.xi == b) {
            out.insert(FiberPoint { eta: a, xi: b, generic: true });
        }
    }
    Ok(out.into_iter().collect())
}

fn bivariate_points(vf: &PolyVectorField, eqs: &[Poly]) -> Result<Vec<FiberPoint>> {
    let gy = content_in(eqs, 1);
    let gz = content_in(eqs, 2);
    let mut lines = Vec::new();
    let mut rest: Vec<Poly> = eqs.to_vec();
    for (g, var) in [(&gy, 1usize), (&gz, 2usize)] {
        if g.degree() > 0 {
            for c in rational_only(g)? {
                lines.push(FiberLine { fixed: var, value: c, param: 3 - var });
            }
            rest = rest.iter().map(|p| divide_by(p, g, var)).collect();
        }
    }
    let iso = isolated_points(&rest)?;
    points_with_lines(vf, eqs, &lines, iso)
}

fn univariate_fiber(vf: &PolyVectorField, eqs: &[Poly]) -> Result<Vec<FiberPoint>> {
    let zero = Q::zero();
    let ps: Vec<UPoly> = eqs.iter().map(|p| from_poly(&p.eval_var(1, &zero), 2)).collect();
    let g = gcd_all(&ps);
    if g.is_zero() {
        let line = FiberLine { fixed: 1, value: zero, param: 2 };
        return points_with_lines(vf, eqs, &[line], Vec::new());
    }
    Ok(rational_only(&g)?.into_iter().map(|z| FiberPoint::isolated(Q::zero(), z)).collect())
}

/// Points (η, ξ) of the part of the exceptional divisor this chart covers at
/// which the field is singular with nilpotent linear part. Lines of such
/// points are represented by their special points and one generic point.
pub fn fiber_points(vf: &PolyVectorField, dir: Direction, omega: &[i64; 3]) -> Result<Vec<FiberPoint>> {
    let zero = Q::zero();
    let eqs = locus_equations(vf);
    let pts: Vec<FiberPoint> = match dir {
        Direction::Z => alloc::vec![FiberPoint::isolated(zero.clone(), zero.clone())],
        Direction::Y => univariate_fiber(vf, &eqs)?,
        Direction::X if omega[1] == 0 => univariate_fiber(vf, &eqs)?,
        Direction::X => {
            if eqs.is_empty() {
                return Err(Error::NonIsolatedFiber);
            }
            bivariate_points(vf, &eqs)?
        }
    };
    Ok(pts.into_iter().filter(|p| !is_elementary(&vf.translate(&[zero.clone(), p.eta.clone(), p.xi.clone()]))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::strict_transform_direct;
    use crate::rat::q;

    #[test]
    fn vf_b_origin_only() {
        let vf = PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [0, 0, 3], q(1)), (2, [0, 0, 3], q(1))]);
        assert_eq!(fiber_points(&vf, Direction::X, &[1, 2, 1]).unwrap(), alloc::vec![FiberPoint::isolated(q(0), q(0))]);
    }

    #[test]
    fn shifted_point_found() {
        // x∂x-free field vanishing nilpotently at (0, 1, −2)
        let y1 = &Poly::var(1) - &Poly::one();
        let z2 = &Poly::var(2) + &Poly::constant(q(2));
        let vf = PolyVectorField::new(&Poly::var(0) * &y1, &(&z2 * &z2) + &(&Poly::var(0) * &z2), &y1 * &y1);
        let pts = fiber_points(&vf, Direction::X, &[1, 1, 1]).unwrap();
        assert_eq!(pts, alloc::vec![FiberPoint::isolated(q(1), q(-2))]);
    }

    #[test]
    fn dicritical_chart_is_elementary() {
        let vf = PolyVectorField::from_terms([(1, [0, 1, 0], q(1)), (2, [0, 0, 1], q(1))]);
        let t = strict_transform_direct(&vf, &[0, 1, 1], 0, Direction::Y, 1).unwrap();
        assert_eq!(t, PolyVectorField::from_terms([(0, [1, 0, 0], q(1))]));
        assert!(fiber_points(&t, Direction::Y, &[0, 1, 1]).unwrap().is_empty());
    }

    #[test]
    fn irrational_point_reported() {
        // z² − 2 on the fiber of a y-chart
        let p = Poly::from_terms([([0, 0, 2], q(1)), ([0, 0, 0], q(-2))]);
        let vf = PolyVectorField::new(Poly::zero(), p.clone(), &p * &p);
        assert_eq!(fiber_points(&vf, Direction::Y, &[1, 1, 1]), Err(Error::IrrationalFiberPoint(2)));
    }

    #[test]
    fn line_gives_special_and_generic_points() {
        // y z²∂y is nonelementary along {z = 0}; only y = 0 is special
        let vf = PolyVectorField::from_terms([(1, [0, 1, 2], q(1))]);
        let pts = fiber_points(&vf, Direction::X, &[1, 1, 1]).unwrap();
        assert_eq!(pts, alloc::vec![FiberPoint::isolated(q(0), q(0)), FiberPoint { eta: q(1), xi: q(0), generic: true }]);
    }

    #[test]
    fn surface_is_not_isolated() {
        // vanishing identically on {x = 0}
        let vf = PolyVectorField::from_terms([(1, [1, 1, 2], q(1))]);
        assert_eq!(fiber_points(&vf, Direction::X, &[1, 1, 1]), Err(Error::NonIsolatedFiber));
    }

    #[test]
    fn line_content_splits_off() {
        let p = Poly::from_terms([([0, 2, 1], q(1)), ([0, 0, 2], q(1)), ([0, 1, 1], q(-1))]);
        let g = content_in(&[p.clone()], 2);
        assert_eq!(g.degree(), 1);
        let r = divide_by(&p, &g, 2);
        assert_eq!(&r * &Poly::var(2), p);
    }
}

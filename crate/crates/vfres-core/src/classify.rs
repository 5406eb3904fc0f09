//! Newton data at a chart origin and its pointwise classification.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::{Signed, Zero};

use crate::blowup::DivisorState;
use crate::error::{Error, Result};
use crate::field::{from_log_basis, restrict_support, to_log_basis, NewtonMap, PolyVectorField};
use crate::gmap::{apply_gmap, GMap, Slope};
use crate::linalg::solve;
use crate::poly::{Exp, Poly};
use crate::polyhedron::{build_polyhedron, displacements, higher_vertex, Displacements, NewtonPolyhedron};
use crate::rat::{q, Q};
use crate::upoly::{from_poly, UPoly};

/// Log-basis Newton map together with the divisor through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    pub theta: NewtonMap,
    pub divisor: DivisorState,
    /// Set by the stabilization loop.
    pub stable: bool,
}

impl NewtonData {
    pub fn new(theta: NewtonMap, divisor: DivisorState) -> Self {
        NewtonData { theta, divisor, stable: false }
    }

    pub fn from_field(vf: &PolyVectorField, divisor: DivisorState) -> Result<Self> {
        Ok(Self::new(to_log_basis(vf)?, divisor))
    }

    pub fn field(&self) -> PolyVectorField {
        from_log_basis(&self.theta).unwrap_or_default()
    }

    /// Number of divisor components through the origin.
    pub fn incidence(&self) -> usize {
        self.divisor.incidence()
    }

    pub fn support(&self) -> Vec<Exp> {
        self.theta.support()
    }

    pub fn polyhedron(&self) -> Result<NewtonPolyhedron> {
        build_polyhedron(&self.support())
    }

    /// Data of the pushed-forward field; the stability flag is cleared.
    pub fn with_map(&self, m: &GMap) -> Result<NewtonData> {
        let vf = apply_gmap(&self.field(), m);
        Ok(NewtonData::new(to_log_basis(&vf)?, self.divisor.clone()))
    }

    pub fn restricted(&self, pts: &[Exp]) -> NewtonData {
        let a: BTreeSet<Exp> = pts.iter().copied().collect();
        NewtonData::new(restrict_support(&self.theta, &a), self.divisor.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Configuration {
    Regular,
    Nilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDescriptor {
    pub i: usize,
    pub h: Exp,
    pub m: Exp,
    pub delta: (Q, Q),
    pub c: Slope,
    pub config: Configuration,
    pub disp: Displacements,
}

/// Orders slopes with `None` as +∞.
pub fn slope_cmp(a: &Slope, b: &Slope) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Lexicographic comparison of (Δ, C).
pub fn displacement_cmp(a: &((Q, Q), Slope), b: &((Q, Q), Slope)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| slope_cmp(&a.1, &b.1))
}

pub fn classify_configuration(data: &NewtonData) -> Result<ClassDescriptor> {
    let i = data.incidence();
    if i == 0 {
        return Err(Error::NotDivisorPoint);
    }
    let np = data.polyhedron()?;
    let h = higher_vertex(&np);
    let adapted = |m: &Exp| m[0] == 0 && (m[1] == -1 || m[1] == 0);
    if !adapted(&h) {
        return Err(Error::NotAdapted(alloc::format!("main vertex {h:?}")));
    }
    let dh = displacements(&np, &h)?;
    let end = dh.edge_end();
    let nilpotent = i == 1 && h[0] == 0 && h[1] == -1 && end[0] == 0 && end[1] == 0;
    let (m, disp, config) = if nilpotent {
        (end, displacements(&np, &end)?, Configuration::Nilpotent)
    } else {
        (h, dh, Configuration::Regular)
    };
    if !adapted(&m) {
        return Err(Error::NotAdapted(alloc::format!("main vertex {m:?}")));
    }
    Ok(ClassDescriptor { i, h, m, delta: disp.delta.clone(), c: disp.c.clone(), config, disp })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FinalSituationKind {
    Ia,
    Ib,
    Ic,
    II,
    III,
    IV,
    NotFinal,
}

pub fn final_situation(data: &NewtonData) -> Result<FinalSituationKind> {
    use FinalSituationKind::*;
    let np = data.polyhedron()?;
    let h = higher_vertex(&np);
    match h {
        [0, 0, 0] => return Ok(Ia),
        [0, -1, 0] => return Ok(Ib),
        [0, 0, -1] => return Ok(Ic),
        _ => {}
    }
    if h[0] != 0 || h[1] != -1 || h[2] < 1 {
        return Ok(NotFinal);
    }
    let Ok(d) = displacements(&np, &h) else { return Ok(NotFinal) };
    match d.edge_end() {
        [0, 0, -1] => Ok(II),
        [0, 0, 0] => Ok(III),
        [0, 1, -1] if h[2] == 1 => {
            if crate::prepare::edge_witness(data)?.is_none() {
                Ok(IV)
            } else {
                Ok(NotFinal)
            }
        }
        _ => Ok(NotFinal),
    }
}

/// J[i][j] = ∂_j a_i as polynomials.
pub fn jacobian(vf: &PolyVectorField) -> [[Poly; 3]; 3] {
    let mut j: [[Poly; 3]; 3] = Default::default();
    for (i, row) in j.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = vf.c[i].deriv(k);
        }
    }
    j
}

/// tr J, tr J², tr J³ as polynomials.
pub fn trace_powers(vf: &PolyVectorField) -> [Poly; 3] {
    let j = jacobian(vf);
    let mut t1 = Poly::zero();
    let mut t2 = Poly::zero();
    let mut t3 = Poly::zero();
    for a in 0..3 {
        t1 = &t1 + &j[a][a];
        for b in 0..3 {
            t2 = &t2 + &(&j[a][b] * &j[b][a]);
            for c in 0..3 {
                if j[a][b].is_zero() || j[b][c].is_zero() || j[c][a].is_zero() {
                    continue;
                }
                t3 = &t3 + &(&(&j[a][b] * &j[b][c]) * &j[c][a]);
            }
        }
    }
    [t1, t2, t3]
}

fn mat_traces(j: &[[Q; 3]; 3]) -> [Q; 3] {
    let mut t = [Q::zero(), Q::zero(), Q::zero()];
    for a in 0..3 {
        t[0] += &j[a][a];
        for b in 0..3 {
            t[1] += &j[a][b] * &j[b][a];
            for c in 0..3 {
                t[2] += &j[a][b] * &j[b][c] * &j[c][a];
            }
        }
    }
    t
}

/// Nonsingular, or singular with a non-nilpotent linear part.
pub fn is_elementary(vf: &PolyVectorField) -> bool {
    if vf.value_at_origin().iter().any(|a| !a.is_zero()) {
        return true;
    }
    mat_traces(&vf.jacobian_at_origin()).iter().any(|a| !a.is_zero())
}

fn divisible(p: &Poly, k: usize, n: i64) -> bool {
    p.terms().all(|(e, _)| e[k] >= n)
}

/// Nondegeneracy with respect to a divisor made of coordinate planes
/// (`divisor[k]` marks {x_k = 0}).
pub fn is_nondegenerate(vf: &PolyVectorField, divisor: [bool; 3]) -> bool {
    for k in 0..3 {
        if !divisor[k] {
            if vf.c.iter().all(|a| divisible(a, k, 1)) {
                return false;
            }
        } else if divisible(&vf.c[k], k, 2) && (0..3).filter(|&j| j != k).all(|j| divisible(&vf.c[j], k, 1)) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResonanceReport {
    None,
    CaseI { m: u32, lambda: Q, alpha: Q, beta: Q, gamma: Q },
    CaseII { m: u32, tau: u32, alpha: Q, beta: Q, gamma: Q },
}

/// Solves vf = Σ p_j b_j exactly.
fn fit(vf: &PolyVectorField, basis: &[PolyVectorField]) -> Option<Vec<Q>> {
    let mut keys: BTreeSet<(usize, Exp)> = BTreeSet::new();
    for f in basis.iter().chain(core::iter::once(vf)) {
        for i in 0..3 {
            for e in f.c[i].exponents() {
                keys.insert((i, e));
            }
        }
    }
    let a: Vec<Vec<Q>> = keys.iter().map(|(i, e)| basis.iter().map(|b| b.c[*i].coeff(e)).collect()).collect();
    let rhs: Vec<Q> = keys.iter().map(|(i, e)| vf.c[*i].coeff(e)).collect();
    solve(&a, &rhs)
}

fn yz_degree(p: &Poly) -> Option<i64> {
    p.terms().map(|(e, _)| e[1] + e[2]).max()
}

fn at_y1(p: &Poly) -> UPoly {
    let mut r = Poly::zero();
    for (e, a) in p.terms() {
        r.add_term([0, 0, e[2]], a.clone());
    }
    from_poly(&r, 2)
}

/// Matches an edge-restricted field against the two resonant templates.
pub fn match_resonance(vf: &PolyVectorField, c: &Q) -> ResonanceReport {
    if vf.is_zero() {
        return ResonanceReport::None;
    }
    let x = Poly::var(0);
    let y = Poly::var(1);
    let z = Poly::var(2);
    let [a, b, cc] = &vf.c;
    let a_over_x = Poly::from_terms(a.terms().map(|(e, k)| ([e[0] - 1, e[1], e[2]], k.clone())));
    let mut ms = BTreeSet::new();
    if let Some(d) = yz_degree(a) {
        ms.insert(d);
    }
    for p in [b, cc] {
        if let Some(d) = yz_degree(p) {
            ms.insert(d - 1);
        }
    }
    let mut lambdas: BTreeSet<Q> = BTreeSet::new();
    lambdas.insert(Q::zero());
    for p in [&a_over_x, b, cc] {
        if !p.is_zero() {
            for r in at_y1(p).rational_roots() {
                lambdas.insert(-r);
            }
        }
    }
    for &m in ms.iter().filter(|&&m| m >= 1) {
        for l in &lambdas {
            let lin = &z + &y.scale(l);
            let pw = lin.pow(m as u32);
            let ta = PolyVectorField::new(&x * &pw, (&y * &pw).scale(c), (&z * &pw).scale(c));
            let tb = PolyVectorField::new(Poly::zero(), &lin * &pw, Poly::zero());
            let tg = PolyVectorField::new(Poly::zero(), Poly::zero(), &lin * &pw);
            if let Some(p) = fit(vf, &[ta, tb, tg]) {
                let ok = !p[1].is_zero() && !(p[0].is_zero() && (&p[2] + l * &p[1]).is_zero());
                if ok {
                    return ResonanceReport::CaseI {
                        m: m as u32,
                        lambda: l.clone(),
                        alpha: p[0].clone(),
                        beta: p[1].clone(),
                        gamma: p[2].clone(),
                    };
                }
            }
        }
    }
    let deg = vf.degree().max(1);
    for tau in 2..=(deg + 1) {
        for m in 1..=deg {
            if tau * m > deg {
                break;
            }
            let pw = z.pow((tau * m) as u32);
            let ct = c / q(tau);
            let ta = PolyVectorField::new(&x * &pw, (&y * &pw).scale(c), (&z * &pw).scale(&ct));
            let tb = PolyVectorField::new(Poly::zero(), &pw * &z.pow(tau as u32), Poly::zero());
            let tg = PolyVectorField::new(Poly::zero(), Poly::zero(), &pw * &z);
            if let Some(p) = fit(vf, &[ta, tb, tg]) {
                if !p[1].is_zero() && !(p[0].is_zero() && p[2].is_zero()) {
                    return ResonanceReport::CaseII {
                        m: m as u32,
                        tau: tau as u32,
                        alpha: p[0].clone(),
                        beta: p[1].clone(),
                        gamma: p[2].clone(),
                    };
                }
            }
        }
    }
    ResonanceReport::None
}

/// Resonance test on the main-edge restriction of `data`.
pub fn detect_resonance(data: &NewtonData, c: &Q) -> Result<ResonanceReport> {
    let d = classify_configuration(data)?;
    let e = data.restricted(&d.disp.edge_points);
    Ok(match_resonance(&e.field(), c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionKind {
    Stable,
    DisplacementGrew,
    RegularNilpotentTransition,
}

pub fn nilpotency_transition(before: &ClassDescriptor, after: &ClassDescriptor) -> Result<TransitionKind> {
    let kb = (before.delta.clone(), before.c.clone());
    let ka = (after.delta.clone(), after.c.clone());
    if before.m == after.m && displacement_cmp(&ka, &kb) == Ordering::Equal {
        return Ok(TransitionKind::Stable);
    }
    if before.m == after.m && displacement_cmp(&ka, &kb) == Ordering::Greater {
        return Ok(TransitionKind::DisplacementGrew);
    }
    let m = before.m;
    if m[0] == 0
        && m[1] == -1
        && after.config == Configuration::Nilpotent
        && after.m == [0, 0, m[2] - 1]
        && after.delta > before.delta
    {
        return Ok(TransitionKind::RegularNilpotentTransition);
    }
    Err(Error::InconsistentPair)
}

/// Whether a rational number is a natural number.
pub(crate) fn is_nat(a: &Q) -> bool {
    a.is_integer() && !a.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    fn data(entries: &[(Exp, [i64; 3])], tags: &[u32]) -> NewtonData {
        let theta = NewtonMap::from_entries(entries.iter().map(|(e, t)| (*e, [q(t[0]), q(t[1]), q(t[2])])));
        NewtonData::new(theta, DivisorState::with_x_tags(tags))
    }

    fn regular_height_three() -> NewtonData {
        data(&[([0, 1, 1], [1, 0, 0]), ([0, 4, -1], [0, 0, 1]), ([1, -1, 1], [0, 1, 0]), ([0, -1, 4], [0, 1, 0])], &[1])
    }

    #[test]
    fn regular_class_with_fractional_shift() {
        let d = classify_configuration(&regular_height_three()).unwrap();
        assert_eq!(d.config, Configuration::Regular);
        assert_eq!(d.m, [0, -1, 4]);
        assert_eq!(d.delta, (q(0), qf(2, 3)));
        assert_eq!(final_situation(&regular_height_three()).unwrap(), FinalSituationKind::NotFinal);
    }

    #[test]
    fn nilpotent_configuration() {
        let d = classify_configuration(&data(&[([0, -1, 2], [0, 1, 0]), ([0, 0, 1], [0, 0, 1]), ([1, 0, 0], [1, 0, 0])], &[1]))
            .unwrap();
        assert_eq!(d.config, Configuration::Nilpotent);
        assert_eq!(d.m, [0, 0, 1]);
    }

    #[test]
    fn vf_b_class() {
        let d = classify_configuration(&data(&[([0, 1, 0], [0, 1, 0]), ([1, -1, 3], [0, 1, 0]), ([0, 0, 2], [0, 0, 1])], &[1]))
            .unwrap();
        assert_eq!(d.m, [0, 0, 2]);
        assert_eq!(d.delta, (q(0), qf(1, 2)));
        assert_eq!(d.c, Some(q(2)));
    }

    #[test]
    fn off_divisor_rejected() {
        assert_eq!(classify_configuration(&data(&[([0, 0, 0], [1, 0, 0])], &[])), Err(Error::NotDivisorPoint));
    }

    #[test]
    fn final_kinds() {
        assert_eq!(final_situation(&data(&[([0, 0, 0], [1, 0, 0])], &[1])).unwrap(), FinalSituationKind::Ia);
        let iv = data(&[([0, -1, 1], [0, 1, 0]), ([0, 1, -1], [0, 0, 1])], &[1]);
        assert_eq!(final_situation(&iv).unwrap(), FinalSituationKind::IV);
        let ii = data(&[([0, -1, 2], [0, 1, 0]), ([0, 0, -1], [0, 0, 1])], &[1]);
        assert_eq!(final_situation(&ii).unwrap(), FinalSituationKind::II);
    }

    #[test]
    fn elementary_examples() {
        let xy = PolyVectorField::from_terms([(0, [1, 0, 0], q(1)), (1, [0, 1, 0], q(1))]);
        assert!(is_elementary(&xy));
        let ydx = PolyVectorField::from_terms([(0, [0, 1, 0], q(1))]);
        assert!(!is_elementary(&ydx));
        let vfb = PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [1, 0, 3], q(1)), (2, [0, 0, 3], q(1))]);
        assert!(!is_elementary(&vfb));
    }

    #[test]
    fn nondegeneracy_examples() {
        let xdx = PolyVectorField::from_terms([(0, [1, 0, 0], q(1))]);
        assert!(is_nondegenerate(&xdx, [true, false, false]));
        let x2dx = PolyVectorField::from_terms([(0, [2, 0, 0], q(1))]);
        assert!(!is_nondegenerate(&x2dx, [true, false, false]));
        let xdy = PolyVectorField::from_terms([(1, [1, 0, 0], q(1))]);
        assert!(!is_nondegenerate(&xdy, [false, false, false]));
    }

    #[test]
    fn resonance_templates() {
        // (z+y)[x∂x + 2y∂y + 2z∂z + (z+y)∂y]
        let l = Poly::from_terms([([0, 0, 1], q(1)), ([0, 1, 0], q(1))]);
        let vf = PolyVectorField::new(
            &Poly::var(0) * &l,
            &(&Poly::var(1).scale(&q(2)) + &l) * &l,
            &Poly::var(2).scale(&q(2)) * &l,
        );
        assert_eq!(
            match_resonance(&vf, &q(2)),
            ResonanceReport::CaseI { m: 1, lambda: q(1), alpha: q(1), beta: q(1), gamma: q(0) }
        );
        let xz2 = PolyVectorField::from_terms([(0, [1, 0, 2], q(1))]);
        assert_eq!(match_resonance(&xz2, &q(1)), ResonanceReport::None);
        let two = PolyVectorField::from_terms([(1, [0, 0, 4], q(1)), (2, [0, 0, 3], q(1))]);
        assert_eq!(
            match_resonance(&two, &q(3)),
            ResonanceReport::CaseII { m: 1, tau: 2, alpha: q(0), beta: q(1), gamma: q(1) }
        );
    }

    fn desc(m: Exp, delta: (Q, Q), c: Slope, config: Configuration) -> ClassDescriptor {
        let disp = Displacements {
            m_prime: (q(0), q(0), q(0)),
            delta: delta.clone(),
            c: c.clone(),
            side: crate::polyhedron::MainSide::Horizontal,
            edge_points: alloc::vec![m],
            omega: [0, 1, 1],
            mu: 0,
            face_points: Vec::new(),
        };
        ClassDescriptor { i: 1, h: m, m, delta, c, config, disp }
    }

    #[test]
    fn transitions() {
        let a = desc([0, -1, 3], (q(0), q(1)), None, Configuration::Regular);
        let b = desc([0, 0, 2], (q(0), q(2)), None, Configuration::Nilpotent);
        assert_eq!(nilpotency_transition(&a, &b), Ok(TransitionKind::RegularNilpotentTransition));
        assert_eq!(nilpotency_transition(&a, &a), Ok(TransitionKind::Stable));
        let c1 = desc([0, 0, 2], (q(0), q(1)), Some(q(1)), Configuration::Regular);
        let c2 = desc([0, 0, 2], (q(0), q(1)), Some(q(2)), Configuration::Regular);
        assert_eq!(nilpotency_transition(&c1, &c2), Ok(TransitionKind::DisplacementGrew));
        assert_eq!(nilpotency_transition(&c2, &c1), Err(Error::InconsistentPair));
    }
}

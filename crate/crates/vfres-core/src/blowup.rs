//! Weighted blow-ups in directional charts, computed on Newton maps and,
//! independently, by substitution in the standard basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::classify::NewtonData;
use crate::error::{Error, Result};
use crate::field::{dot, from_log_basis, mu_omega, to_log_basis, NewtonMap, PolyVectorField};
use crate::gmap::{GMap, GroupClass};
use crate::poly::{Exp, Poly};
use crate::rat::{q, Q};

/// Divisor components through the current point.
///
/// `upsilon` lists every index created so far, newest first; `tags[k]`
/// names the component {x_k = 0} when it belongs to the divisor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DivisorState {
    pub upsilon: Vec<u32>,
    pub tags: [Option<u32>; 3],
}

impl DivisorState {
    pub fn none() -> Self {
        Self::default()
    }

    /// A single component {x = 0} with index `n`.
    pub fn x_only(n: u32) -> Self {
        DivisorState { upsilon: vec![n], tags: [Some(n), None, None] }
    }

    /// Builds from a list of x-tags; used for tests and fixtures.
    pub fn with_x_tags(tags: &[u32]) -> Self {
        match tags.first() {
            Some(&n) => Self::x_only(n),
            None => Self::none(),
        }
    }

    pub fn incidence(&self) -> usize {
        self.tags.iter().filter(|t| t.is_some()).count()
    }

    pub fn mask(&self) -> [bool; 3] {
        [self.tags[0].is_some(), self.tags[1].is_some(), self.tags[2].is_some()]
    }

    /// Indices of the components through the point, descending.
    pub fn local_indices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.tags.iter().flatten().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn next_index(&self) -> u32 {
        self.upsilon.iter().max().map_or(1, |m| m + 1)
    }

    /// Divisor after a blow-up in direction `dir`, at the chart point (0, η, ξ).
    pub fn after_blowup(&self, dir: Direction, eta: &Q, xi: &Q) -> DivisorState {
        let n = self.next_index();
        let mut upsilon = vec![n];
        upsilon.extend(self.upsilon.iter().copied());
        let [tx, ty, tz] = self.tags;
        let tags = match dir {
            Direction::X => [Some(n), if eta.is_zero() { ty } else { None }, if xi.is_zero() { tz } else { None }],
            Direction::Y => [Some(n), if eta.is_zero() { tx } else { None }, if xi.is_zero() { tz } else { None }],
            Direction::Z => [Some(n), tx, ty],
        };
        DivisorState { upsilon, tags }
    }

    pub fn permute(&self, perm: [usize; 3]) -> DivisorState {
        DivisorState { upsilon: self.upsilon.clone(), tags: [self.tags[perm[0]], self.tags[perm[1]], self.tags[perm[2]]] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    X,
    Y,
    Z,
}

impl Direction {
    pub fn index(self) -> usize {
        match self {
            Direction::X => 0,
            Direction::Y => 1,
            Direction::Z => 2,
        }
    }

    /// Chart coordinates in terms of the blown-up coordinate labels.
    fn perm(self) -> [usize; 3] {
        match self {
            Direction::X => [0, 1, 2],
            Direction::Y => [1, 0, 2],
            Direction::Z => [2, 0, 1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    Point,
    /// {x = z = 0}
    CurveXZ,
    /// {y = z = 0}
    CurveYZ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub omega: [i64; 3],
    pub mu: i64,
    pub dir: Direction,
    pub eps: i8,
    /// Chart translation to (0, η, ξ).
    pub eta: Q,
    pub xi: Q,
}

impl BlowupStep {
    pub fn new(omega: [i64; 3], mu: i64, dir: Direction, eps: i8) -> Self {
        BlowupStep { omega, mu, dir, eps, eta: Q::zero(), xi: Q::zero() }
    }

    pub fn at(mut self, eta: Q, xi: Q) -> Self {
        self.eta = eta;
        self.xi = xi;
        self
    }
}

/// Center and chart directions determined by a weight vector.
pub fn center_for_weight(omega: &[i64; 3]) -> Result<(Center, Vec<Direction>)> {
    if omega.iter().any(|&w| w < 0) {
        return Err(Error::PreconditionViolated(format!("negative weight {omega:?}")));
    }
    match omega {
        [a, b, c] if *a > 0 && *b > 0 && *c > 0 => Ok((Center::Point, vec![Direction::X, Direction::Y, Direction::Z])),
        [a, 0, c] if *a > 0 && *c > 0 => Ok((Center::CurveXZ, vec![Direction::X, Direction::Z])),
        [0, b, c] if *b > 0 && *c > 0 => Ok((Center::CurveYZ, vec![Direction::Y, Direction::Z])),
        _ => Err(Error::UnsupportedPattern(format!("weight {omega:?}"))),
    }
}

/// Signs needed to cover the chart: both when the weight is even.
pub fn chart_signs(omega: &[i64; 3], dir: Direction) -> Vec<i8> {
    if omega[dir.index()] % 2 == 0 {
        vec![1, -1]
    } else {
        vec![1]
    }
}

fn sign_pow(eps: i8, k: i64) -> Q {
    if eps < 0 && k.rem_euclid(2) == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Strict transform of a Newton map in the chart `dir`, untranslated.
pub fn blowup_newton_map(theta: &NewtonMap, omega: &[i64; 3], mu: i64, dir: Direction, eps: i8) -> Result<NewtonMap> {
    let r = dir.index();
    if omega[r] <= 0 {
        return Err(Error::PreconditionViolated(format!("chart {dir:?} needs a positive weight")));
    }
    let wr = q(omega[r]);
    let p = dir.perm();
    let mut out = NewtonMap::new();
    for (v, t) in theta.iter() {
        let k = dot(omega, v) - mu;
        if k < 0 {
            return Err(Error::DegenerateResult(format!("exponent {v:?} lies below the weight level {mu}")));
        }
        let s = sign_pow(eps, v[r]);
        let lead = &t[r] / &wr;
        let mut coef = [Q::zero(), Q::zero(), Q::zero()];
        let mut e = [k, 0, 0];
        for slot in 0..3 {
            let old = p[slot];
            if slot == 0 {
                coef[0] = &s * &lead;
            } else {
                e[slot] = v[old];
                coef[slot] = &s * &(&t[old] - &(&q(omega[old]) * &lead));
            }
        }
        out.add(e, coef);
    }
    if out.is_empty() {
        return Err(Error::DegenerateResult("blow-up produced the zero field".into()));
    }
    out.validate()?;
    Ok(out)
}

fn monomial_power(base: usize, k: i64, c: Q) -> Poly {
    let mut e = [0; 3];
    e[base] = k;
    Poly::monomial(e, c)
}

/// Strict transform by substitution x_r = εX_r^{ω_r}, x_i = X_r^{ω_i}X_i,
/// relabelled so that the exceptional coordinate comes first.
pub fn strict_transform_direct(vf: &PolyVectorField, omega: &[i64; 3], mu: i64, dir: Direction, eps: i8) -> Result<PolyVectorField> {
    let r = dir.index();
    if omega[r] <= 0 {
        return Err(Error::PreconditionViolated(format!("chart {dir:?} needs a positive weight")));
    }
    let e = q(i64::from(eps));
    let im: Vec<Poly> = (0..3)
        .map(|i| {
            if i == r {
                monomial_power(r, omega[r], e.clone())
            } else {
                let mut ex = [0; 3];
                ex[r] = omega[i];
                ex[i] = 1;
                Poly::monomial(ex, Q::one())
            }
        })
        .collect();
    let phi = [&im[0], &im[1], &im[2]];
    let pulled: Vec<Poly> = vf.c.iter().map(|a| a.compose(phi)).collect();
    let xr_dot = &pulled[r] * &monomial_power(r, 1 - omega[r], &e / &q(omega[r]));
    let mut out = PolyVectorField::zero();
    for i in 0..3 {
        out.c[i] = if i == r {
            xr_dot.clone()
        } else {
            let a = &pulled[i] * &monomial_power(r, -omega[i], Q::one());
            let mut xi = [0; 3];
            xi[i] = 1;
            xi[r] = -1;
            let corr = &xr_dot * &Poly::monomial(xi, q(omega[i]));
            &a - &corr
        };
        out.c[i] = out.c[i].shift({
            let mut s = [0; 3];
            s[r] = -mu;
            s
        });
        if !out.c[i].is_polynomial() {
            return Err(Error::NonIntegralResult(format!("component {i} has negative exponents")));
        }
    }
    if out.is_zero() {
        return Err(Error::DegenerateResult("blow-up produced the zero field".into()));
    }
    Ok(out.permute(dir.perm()))
}

/// One directional blow-up of `data` followed by the chart translation.
pub fn bl_directional(data: &NewtonData, step: &BlowupStep) -> Result<NewtonData> {
    let mu = mu_omega(&data.theta, &step.omega)?;
    if mu != step.mu {
        return Err(Error::DegenerateResult(format!("weight level is {mu}, step says {}", step.mu)));
    }
    if step.dir != Direction::X && !step.eta.is_zero() {
        return Err(Error::PreconditionViolated("only the x-chart admits a y-translation".into()));
    }
    let mut theta = blowup_newton_map(&data.theta, &step.omega, step.mu, step.dir, step.eps)?;
    if !step.eta.is_zero() || !step.xi.is_zero() {
        let vf = from_log_basis(&theta)?.translate(&[Q::zero(), step.eta.clone(), step.xi.clone()]);
        theta = to_log_basis(&vf)?;
    }
    theta.validate()?;
    let divisor = data.divisor.after_blowup(step.dir, &step.eta, &step.xi);
    Ok(NewtonData::new(theta, divisor))
}

/// Ramification x_r = X_r^k.
pub fn ramify(data: &NewtonData, r: usize, k: i64) -> Result<NewtonData> {
    if k < 1 || r > 2 {
        return Err(Error::PreconditionViolated(format!("ramification index {k} on axis {r}")));
    }
    let mut out = NewtonMap::new();
    for (v, t) in data.theta.iter() {
        let mut e = *v;
        e[r] *= k;
        let mut c = t.clone();
        c[r] = &c[r] / &q(k);
        out.add(e, c);
    }
    Ok(NewtonData::new(out, data.divisor.clone()))
}

/// Base coordinate change whose blow-up is the given chart change.
pub fn project_translation(chart: &GMap, dir: Direction, eps: i8, omega: &[i64; 3]) -> Result<GMap> {
    let mut f = Poly::zero();
    let mut g = Poly::zero();
    let neg = |k: i64| Error::NonIntegralResult(format!("projected exponent {k}"));
    match dir {
        Direction::X => {
            if omega[0] != 1 {
                return Err(Error::PreconditionViolated("x-chart projection needs ω1 = 1".into()));
            }
            for (e, c) in chart.f.terms() {
                let k = omega[2] + e[0] - e[1] * omega[1];
                if k < 0 {
                    return Err(neg(k));
                }
                f.add_term([k, e[1], 0], &sign_pow(eps, k) * c);
            }
            for (e, c) in chart.g.terms() {
                let k = omega[1] + e[0];
                if k < 0 {
                    return Err(neg(k));
                }
                g.add_term([k, 0, 0], &sign_pow(eps, k) * c);
            }
        }
        Direction::Y => {
            if omega[1] != 1 || !chart.g.is_zero() {
                return Err(Error::PreconditionViolated("y-chart projection needs ω2 = 1 and no y-part".into()));
            }
            for (e, c) in chart.f.terms() {
                let k = omega[2] + e[0] - e[1] * omega[0];
                if k < 0 {
                    return Err(neg(k));
                }
                f.add_term([e[1], k, 0], &sign_pow(eps, k) * c);
            }
        }
        Direction::Z => return Err(Error::UnsupportedPattern("z-chart projection".into())),
    }
    Ok(GMap::new(f, g, GroupClass::G1))
}

/// Exponents of the x-chart image of a support, for reporting.
pub fn chart_support(support: &[Exp], omega: &[i64; 3], mu: i64, dir: Direction) -> Vec<Exp> {
    let p = dir.perm();
    support.iter().map(|v| [dot(omega, v) - mu, v[p[1]], v[p[2]]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmap::apply_gmap;
    use crate::rat::qf;
    use proptest::prelude::*;

    fn vfb() -> PolyVectorField {
        PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [1, 0, 3], q(1)), (2, [0, 0, 3], q(1))])
    }

    #[test]
    fn vf_b_child() {
        let d = NewtonData::from_field(&vfb(), DivisorState::x_only(1)).unwrap();
        let c = bl_directional(&d, &BlowupStep::new([1, 2, 1], 2, Direction::X, 1)).unwrap();
        let want = PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [0, 0, 3], q(1)), (2, [0, 0, 3], q(1))]);
        assert_eq!(c.field(), want);
        assert_eq!(c.divisor.tags, [Some(2), None, None]);
        assert_eq!(c.divisor.upsilon, vec![2, 1]);
    }

    #[test]
    fn wrong_level_rejected() {
        let d = NewtonData::from_field(&vfb(), DivisorState::x_only(1)).unwrap();
        assert!(matches!(bl_directional(&d, &BlowupStep::new([1, 2, 1], 1, Direction::X, 1)), Err(Error::DegenerateResult(_))));
    }

    #[test]
    fn y_chart_sign() {
        // y∂y in the y-chart of the standard point blow-up: (1/1)X̃∂X̃ and nothing else
        let vf = PolyVectorField::from_terms([(1, [0, 1, 0], q(1))]);
        let out = strict_transform_direct(&vf, &[1, 1, 1], 0, Direction::Y, 1).unwrap();
        let want = PolyVectorField::from_terms([(0, [1, 0, 0], q(1)), (1, [0, 1, 0], q(-1)), (2, [0, 0, 1], q(-1))]);
        assert_eq!(out, want);
        let m = blowup_newton_map(&to_log_basis(&vf).unwrap(), &[1, 1, 1], 0, Direction::Y, 1).unwrap();
        assert_eq!(from_log_basis(&m).unwrap(), want);
    }

    #[test]
    fn centers() {
        assert_eq!(center_for_weight(&[1, 2, 3]).unwrap().0, Center::Point);
        assert_eq!(center_for_weight(&[2, 0, 1]).unwrap().1, vec![Direction::X, Direction::Z]);
        assert_eq!(center_for_weight(&[0, 1, 1]).unwrap().0, Center::CurveYZ);
        assert!(center_for_weight(&[1, 1, 0]).is_err());
    }

    #[test]
    fn ramification() {
        let d = NewtonData::new(NewtonMap::from_entries([([1, 0, 0], [q(2), q(0), q(1)])]), DivisorState::x_only(1));
        let r = ramify(&d, 0, 2).unwrap();
        assert_eq!(r.theta, NewtonMap::from_entries([([2, 0, 0], [q(1), q(0), q(1)])]));
    }

    fn check_projection(vf: &PolyVectorField, chart: &GMap, dir: Direction, eps: i8, w: [i64; 3]) {
        let base = project_translation(chart, dir, eps, &w).unwrap();
        let moved = apply_gmap(vf, &base);
        let mu1 = mu_omega(&to_log_basis(&moved).unwrap(), &w).unwrap();
        let mu0 = mu_omega(&to_log_basis(vf).unwrap(), &w).unwrap();
        assert_eq!(mu0, mu1);
        let lhs = strict_transform_direct(&moved, &w, mu0, dir, eps).unwrap();
        let rhs = apply_gmap(&strict_transform_direct(vf, &w, mu0, dir, eps).unwrap(), chart);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_examples() {
        let chart = GMap::new(Poly::monomial([0, 1, 0], q(3)), Poly::constant(q(5)), GroupClass::G1);
        let base = project_translation(&chart, Direction::X, 1, &[1, 2, 3]).unwrap();
        assert_eq!(base.f, Poly::monomial([1, 1, 0], q(3)));
        assert_eq!(base.g, Poly::monomial([2, 0, 0], q(5)));
        let yc = GMap::new(Poly::constant(q(7)), Poly::zero(), GroupClass::G1);
        assert_eq!(project_translation(&yc, Direction::Y, 1, &[1, 1, 2]).unwrap().f, Poly::monomial([0, 2, 0], q(7)));
        let vf = PolyVectorField::from_terms([(0, [2, 0, 0], q(1)), (1, [0, 2, 0], q(1)), (2, [0, 0, 2], qf(1, 2)), (2, [1, 1, 0], q(1))]);
        check_projection(&vf, &chart, Direction::X, 1, [1, 2, 3]);
        check_projection(&vf, &chart, Direction::X, -1, [1, 2, 3]);
        check_projection(&vf, &yc, Direction::Y, -1, [1, 1, 2]);
    }

    fn small_field() -> impl Strategy<Value = PolyVectorField> {
        proptest::collection::vec((0usize..3, 0i64..3, 0i64..3, 0i64..3, -3i64..4), 1..6).prop_map(|ts| {
            PolyVectorField::from_terms(ts.into_iter().map(|(i, a, b, c, k)| (i, [a, b, c], q(k))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn log_and_direct_routes_agree(
            vf in small_field(),
            w in (1i64..4, 0i64..4, 1i64..4),
            d in 0usize..3,
            eps in prop_oneof![Just(1i8), Just(-1i8)],
        ) {
            prop_assume!(!vf.is_zero());
            let omega = [w.0, w.1, w.2];
            let dir = [Direction::X, Direction::Y, Direction::Z][d];
            prop_assume!(omega[dir.index()] > 0);
            let theta = to_log_basis(&vf).unwrap();
            let mu = mu_omega(&theta, &omega).unwrap();
            let log = blowup_newton_map(&theta, &omega, mu, dir, eps);
            let direct = strict_transform_direct(&vf, &omega, mu, dir, eps);
            match (log, direct) {
                (Ok(a), Ok(b)) => prop_assert_eq!(from_log_basis(&a).unwrap(), b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "routes disagree: {:?} vs {:?}", a, b),
            }
        }
    }
}

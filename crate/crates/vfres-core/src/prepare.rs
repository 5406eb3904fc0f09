//! Edge and face preparation: coordinate changes that push the main edge
//! and main face of the Newton polyhedron as far as they go.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::classify::{classify_configuration, displacement_cmp, is_nat, ClassDescriptor, Configuration, NewtonData};
use crate::error::{Error, Result};
use crate::field::{to_log_basis, NewtonMap};
use crate::gmap::{apply_gmap, GMap, GroupClass};
use crate::linalg::solve;
use crate::poly::{Exp, Poly};
use crate::rat::{as_i64, floor_i64, q, show_q, Q};
use crate::upoly::UPoly;

pub const EDGE_CAP: usize = 64;
pub const FACE_CAP: usize = 64;
pub const DEGREE_CAP: i64 = 64;

fn edge_map(xi: Q, delta: &(Q, Q)) -> GMap {
    let a = as_i64(&delta.0).unwrap();
    let b = as_i64(&delta.1).unwrap();
    GMap::monomial(xi, a, b, GroupClass::GDelta { delta: delta.clone() })
}

fn coeff_at(m: &NewtonMap, e: &Exp) -> [Q; 3] {
    m.get(e).cloned().unwrap_or_else(|| [Q::zero(), Q::zero(), Q::zero()])
}

fn irrational_check(p: &UPoly, what: &str) -> Result<()> {
    if p.is_zero() || p.degree() <= 0 {
        return Ok(());
    }
    if p.strip_rational_roots().count_real_roots() > 0 {
        return Err(Error::IrrationalPreparation(format!("{what} has an irrational real root")));
    }
    Ok(())
}

/// Coordinate change z̃ = z + ξ x^{Δ1} y^{Δ2} that moves the main edge, if
/// one exists.
pub fn edge_witness(data: &NewtonData) -> Result<Option<GMap>> {
    let d = classify_configuration(data)?;
    if !is_nat(&d.delta.0) || !is_nat(&d.delta.1) || (d.delta.0.is_zero() && d.delta.1.is_zero()) {
        return Ok(None);
    }
    let m = d.m;
    let restricted = data.restricted(&d.disp.edge_points);
    let top = (m[2] + 1).max(1);
    let dx = as_i64(&d.delta.0).unwrap();
    let dy = as_i64(&d.delta.1).unwrap();
    let xs: Vec<Q> = (0..=top).map(q).collect();
    let mut samples: Vec<NewtonMap> = Vec::new();
    for x in &xs {
        let moved = restricted.with_map(&edge_map(x.clone(), &d.delta));
        samples.push(match moved {
            Ok(nd) => nd.theta,
            Err(Error::ZeroField) => NewtonMap::new(),
            Err(e) => return Err(e),
        });
    }
    // polynomial in ξ for each (t, component)
    let mut curves: Vec<(i64, UPoly)> = Vec::new();
    for t in 1..=top {
        let e = [m[0] + t * dx, m[1] + t * dy, m[2] - t];
        for comp in 0..3 {
            let ys: Vec<Q> = samples.iter().map(|s| coeff_at(s, &e)[comp].clone()).collect();
            let p = UPoly::interpolate(&xs, &ys);
            if !p.is_zero() {
                curves.push((t, p));
            }
        }
    }
    let gcd_from = |t0: i64| {
        curves.iter().filter(|(t, _)| *t >= t0).fold(UPoly::zero(), |g, (_, p)| g.gcd(p))
    };
    let mut polys = alloc::vec![gcd_from(1)];
    let wants_b = d.config == Configuration::Regular
        && d.i == 1
        && m[0] == 0
        && m[1] == -1
        && d.delta == (Q::zero(), Q::one());
    if wants_b {
        polys.push(gcd_from(2));
    }
    let mut cands: BTreeSet<Q> = BTreeSet::new();
    for p in &polys {
        if p.is_zero() {
            continue;
        }
        irrational_check(p, "edge polynomial")?;
        for r in p.rational_roots() {
            if !r.is_zero() {
                cands.insert(r);
            }
        }
    }
    let key = (d.m, d.delta.clone());
    for r in cands {
        let map = edge_map(r, &d.delta);
        let Ok(moved) = data.with_map(&map) else { continue };
        let Ok(nd) = classify_configuration(&moved) else { continue };
        if (nd.m, nd.delta) != key {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

pub fn basic_edge_preparation(data: &NewtonData) -> Result<(NewtonData, GMap)> {
    match edge_witness(data)? {
        Some(m) => Ok((data.with_map(&m)?, m)),
        None => Err(Error::AlreadyEdgeStable),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub edge_stable: bool,
    pub stable: bool,
    pub witness: Option<GMap>,
}

pub fn is_edge_stable(data: &NewtonData) -> Result<StabilityReport> {
    let w = edge_witness(data)?;
    if w.is_some() {
        return Ok(StabilityReport { edge_stable: false, stable: false, witness: w });
    }
    let f = face_map(data)?;
    Ok(StabilityReport { edge_stable: true, stable: f.is_none(), witness: f })
}

pub fn is_stable(data: &NewtonData) -> Result<bool> {
    Ok(is_edge_stable(data)?.stable)
}

/// Candidate unit maps on the main face with their layer.
fn face_parameters(d: &ClassDescriptor, c: &Q) -> Vec<(Q, GMap)> {
    let mut out = Vec::new();
    let class = GroupClass::GPlus { delta: d.delta.clone(), c: Some(c.clone()), i: d.i as u8 };
    let amax = floor_i64(&(c * &d.delta.1));
    for a in 1..=amax {
        let s = q(a) / c;
        let b = &d.delta.1 - &s;
        if let Some(b) = crate::rat::as_nat(&b) {
            out.push((s, GMap::monomial(Q::one(), a, b as i64, class.clone())));
        }
    }
    if d.i == 1 {
        if let Some(k) = crate::rat::as_nat(c) {
            out.push((Q::one(), GMap::new(Poly::zero(), Poly::monomial([k as i64, 0, 0], Q::one()), class)));
        }
    }
    out
}

fn layers(m: &NewtonMap, c: &Q) -> BTreeSet<Q> {
    m.support().iter().map(|v| q(v[0]) / c).collect()
}

fn layer_part(m: &NewtonMap, c: &Q, s: &Q) -> NewtonMap {
    NewtonMap { map: m.iter().filter(|(v, _)| &(q(v[0]) / c) == s).map(|(v, t)| (*v, t.clone())).collect() }
}

fn scaled(m: &GMap, p: &Q) -> GMap {
    GMap::new(m.f.scale(p), m.g.scale(p), m.class.clone())
}

/// Weighted-homogeneous coordinate change clearing the main face off the
/// plane v1 = 0, if one exists.
pub fn face_map(data: &NewtonData) -> Result<Option<GMap>> {
    let d = classify_configuration(data)?;
    let Some(c) = d.c.clone() else { return Ok(None) };
    if !d.delta.0.is_zero() || c <= Q::zero() {
        return Ok(None);
    }
    let params = face_parameters(&d, &c);
    if params.is_empty() {
        return Ok(None);
    }
    let mut face = data.restricted(&d.disp.face_points);
    let mut total = GMap::identity();
    let mut steps = 0;
    loop {
        let pos: Vec<Q> = layers(&face.theta, &c).into_iter().filter(|s| *s > Q::zero()).collect();
        let Some(s) = pos.first().cloned() else { break };
        steps += 1;
        if steps > FACE_CAP {
            return Err(Error::CapExceeded("face layers".into()));
        }
        let active: Vec<&GMap> = params.iter().filter(|(sj, _)| *sj == s).map(|(_, m)| m).collect();
        if active.is_empty() {
            return Ok(None);
        }
        let base = layer_part(&face.theta, &c, &s);
        let field = face.field();
        let mut cols: Vec<NewtonMap> = Vec::new();
        for m in &active {
            let moved = to_log_basis(&apply_gmap(&field, m)).unwrap_or_default();
            let mut diff = layer_part(&moved, &c, &s);
            for (v, t) in base.iter() {
                diff.add(*v, [-t[0].clone(), -t[1].clone(), -t[2].clone()]);
            }
            cols.push(diff);
        }
        let mut keys: BTreeSet<(Exp, usize)> = BTreeSet::new();
        for nm in cols.iter().chain(core::iter::once(&base)) {
            for (v, _) in nm.iter() {
                for k in 0..3 {
                    keys.insert((*v, k));
                }
            }
        }
        let a: Vec<Vec<Q>> = keys.iter().map(|(v, k)| cols.iter().map(|col| coeff_at(col, v)[*k].clone()).collect()).collect();
        let rhs: Vec<Q> = keys.iter().map(|(v, k)| -coeff_at(&base, v)[*k].clone()).collect();
        let Some(p) = solve(&a, &rhs) else { return Ok(None) };
        let mut step = GMap::identity();
        for (m, pj) in active.iter().zip(&p) {
            if !pj.is_zero() {
                step = step.then(&scaled(m, pj));
            }
        }
        if step.is_identity() {
            return Ok(None);
        }
        face = match face.with_map(&step) {
            Ok(f) => f,
            Err(Error::ZeroField) => break,
            Err(e) => return Err(e),
        };
        total = total.then(&step);
    }
    if total.is_identity() {
        return Ok(None);
    }
    let after = classify_configuration(&data.with_map(&total)?)?;
    let before_key = (d.delta.clone(), d.c.clone());
    if displacement_cmp(&(after.delta.clone(), after.c.clone()), &before_key) != core::cmp::Ordering::Greater {
        return Err(Error::DegenerateResult(format!("face map did not raise the slope {}", show_q(&c))));
    }
    total.class = GroupClass::GPlus { delta: d.delta, c: Some(c), i: d.i as u8 };
    Ok(Some(total))
}

pub fn basic_face_preparation(data: &NewtonData) -> Result<(NewtonData, GMap)> {
    if edge_witness(data)?.is_some() {
        return Err(Error::PreconditionViolated("face preparation needs an edge-stable chart".into()));
    }
    match face_map(data)? {
        Some(m) => Ok((data.with_map(&m)?, m)),
        None => Err(Error::AlreadyStable),
    }
}

/// Alternates edge and face steps until neither applies.
pub fn stabilize(data: &NewtonData) -> Result<(NewtonData, Vec<GMap>)> {
    let mut cur = data.clone();
    let mut maps = Vec::new();
    let (mut edges, mut faces) = (0, 0);
    loop {
        if cur.field().degree() > DEGREE_CAP {
            return Err(Error::CapExceeded(format!("degree above {DEGREE_CAP}")));
        }
        if let Some(m) = edge_witness(&cur)? {
            edges += 1;
            if edges > EDGE_CAP {
                return Err(Error::CapExceeded("edge preparation steps".into()));
            }
            cur = cur.with_map(&m)?;
            maps.push(m);
            continue;
        }
        if let Some(m) = face_map(&cur)? {
            faces += 1;
            if faces > FACE_CAP {
                return Err(Error::CapExceeded("face preparation steps".into()));
            }
            cur = cur.with_map(&m)?;
            maps.push(m);
            continue;
        }
        break;
    }
    cur.stable = true;
    Ok((cur, maps))
}

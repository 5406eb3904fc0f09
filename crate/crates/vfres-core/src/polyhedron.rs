//! Newton polyhedra conv(S) + R³₊, derived polygons and displacements.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::dot;
use crate::gmap::Slope;
use crate::linalg::cross;
use crate::poly::Exp;
use crate::rat::{q, qf, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive normal, componentwise ≥ 0.
    pub omega: [i64; 3],
    pub mu: i64,
    /// Support points lying on the facet.
    pub points: Vec<Exp>,
}

impl Facet {
    pub fn is_bounded(&self) -> bool {
        self.omega.iter().all(|&w| w > 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub support: Vec<Exp>,
    pub vertices: Vec<Exp>,
    /// Bounded edges as (start, end, end − start).
    pub edges: Vec<(Exp, Exp, Exp)>,
    pub facets: Vec<Facet>,
}

fn dominated(p: &Exp, by: &Exp) -> bool {
    p != by && (0..3).all(|i| by[i] <= p[i])
}

/// Support points not dominated componentwise by another support point.
pub fn minimal_points(support: &[Exp]) -> Vec<Exp> {
    let s: BTreeSet<Exp> = support.iter().copied().collect();
    s.iter().filter(|p| !s.iter().any(|w| dominated(p, w))).copied().collect()
}

fn to128(v: &Exp) -> [i128; 3] {
    [v[0] as i128, v[1] as i128, v[2] as i128]
}

fn sub(a: &Exp, b: &Exp) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn primitive_nonneg(n: [i128; 3]) -> Option<[i64; 3]> {
    let pos = n.iter().any(|&a| a > 0);
    let neg = n.iter().any(|&a| a < 0);
    if pos == neg {
        return None;
    }
    let s = if neg { -1 } else { 1 };
    let g = n.iter().fold(0i128, |g, &a| g.gcd(&a));
    Some([(s * n[0] / g) as i64, (s * n[1] / g) as i64, (s * n[2] / g) as i64])
}

fn rank(vs: &[[i64; 3]]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    for a in vs {
        for b in vs {
            let c = cross(to128(a), to128(b));
            if c != [0, 0, 0] {
                for d in vs {
                    let t = c[0] * d[0] as i128 + c[1] * d[1] as i128 + c[2] * d[2] as i128;
                    if t != 0 {
                        return 3;
                    }
                }
                return 2;
            }
        }
    }
    1
}

pub fn build_polyhedron(support: &[Exp]) -> Result<NewtonPolyhedron> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let full: Vec<Exp> = support.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let m = minimal_points(&full);
    let dirs: [[i128; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut planes: BTreeSet<([i64; 3], i64)> = BTreeSet::new();
    let consider = |n: [i128; 3], p: &Exp, planes: &mut BTreeSet<([i64; 3], i64)>| {
        if let Some(w) = primitive_nonneg(n) {
            let mu = dot(&w, p);
            if m.iter().all(|s| dot(&w, s) >= mu) {
                planes.insert((w, mu));
            }
        }
    };
    for (i, p) in m.iter().enumerate() {
        for a in 0..3 {
            for b in a + 1..3 {
                consider(cross(dirs[a], dirs[b]), p, &mut planes);
            }
        }
        for (j, qv) in m.iter().enumerate().skip(i + 1) {
            let u = sub(qv, p);
            for d in &dirs {
                consider(cross(u, *d), p, &mut planes);
            }
            for r in m.iter().skip(j + 1) {
                consider(cross(u, sub(r, p)), p, &mut planes);
            }
        }
    }
    let facets: Vec<Facet> = planes
        .into_iter()
        .map(|(w, mu)| Facet { omega: w, mu, points: full.iter().filter(|v| dot(&w, v) == mu).copied().collect() })
        .collect();
    let on = |v: &Exp| -> Vec<[i64; 3]> { facets.iter().filter(|f| dot(&f.omega, v) == f.mu).map(|f| f.omega).collect() };
    let vertices: Vec<Exp> = m.iter().filter(|v| rank(&on(v)) == 3).copied().collect();
    let mut edges = Vec::new();
    for (i, u) in vertices.iter().enumerate() {
        for v in vertices.iter().skip(i + 1) {
            let common: Vec<[i64; 3]> =
                facets.iter().filter(|f| dot(&f.omega, u) == f.mu && dot(&f.omega, v) == f.mu).map(|f| f.omega).collect();
            if rank(&common) < 2 {
                continue;
            }
            let between = vertices.iter().any(|w| w != u && w != v && strictly_between(u, v, w));
            if !between {
                edges.push((*u, *v, [v[0] - u[0], v[1] - u[1], v[2] - u[2]]));
            }
        }
    }
    Ok(NewtonPolyhedron { support: full, vertices, edges, facets })
}

fn strictly_between(u: &Exp, v: &Exp, w: &Exp) -> bool {
    let d = sub(v, u);
    let e = sub(w, u);
    if cross(d, e) != [0, 0, 0] {
        return false;
    }
    let dd: i128 = d.iter().map(|a| a * a).sum();
    let de: i128 = d.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
    de > 0 && de < dd
}

/// Lexicographically smallest vertex.
pub fn higher_vertex(np: &NewtonPolyhedron) -> Exp {
    *np.vertices.iter().min().expect("polyhedron has a vertex")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedPolygon {
    pub base: Exp,
    pub height: Q,
    /// From the top-left vertex (on the vertical side) to the bottom-right one.
    pub vertices: Vec<(Q, Q)>,
}

impl DerivedPolygon {
    /// Bounded sides e1..ek as direction vectors.
    pub fn bounded_sides(&self) -> Vec<(Q, Q)> {
        self.vertices.windows(2).map(|w| (&w[1].0 - &w[0].0, &w[1].1 - &w[0].1)).collect()
    }
}

fn cross2(o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Vertices of conv(P) + R²₊ ordered by increasing first coordinate.
pub fn staircase_hull(pts: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut s: Vec<(Q, Q)> = pts.to_vec();
    s.sort();
    s.dedup();
    let mut pareto: Vec<(Q, Q)> = Vec::new();
    for p in s {
        if pareto.last().map_or(true, |l| p.1 < l.1) {
            pareto.push(p);
        }
    }
    let mut hull: Vec<(Q, Q)> = Vec::new();
    for p in pareto {
        while hull.len() >= 2 && cross2(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Q::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Section of the polyhedron at v3 = c, projected to (v1, v2).
pub fn section(support: &[Exp], c: &Q) -> Vec<(Q, Q)> {
    let m = minimal_points(support);
    let mut pts = Vec::new();
    for p in &m {
        if q(p[2]) <= *c {
            pts.push((q(p[0]), q(p[1])));
        }
    }
    for p in &m {
        for r in &m {
            let (p3, r3) = (q(p[2]), q(r[2]));
            if p3 < *c && *c < r3 {
                let t = (c - &p3) / (&r3 - &p3);
                let a = q(p[0]) + &t * q(r[0] - p[0]);
                let b = q(p[1]) + &t * q(r[1] - p[1]);
                pts.push((a, b));
            }
        }
    }
    staircase_hull(&pts)
}

pub fn derived_polygon(np: &NewtonPolyhedron, n: &Exp) -> Result<DerivedPolygon> {
    let height = q(n[2]) - qf(1, 2);
    let vertices = section(&np.support, &height);
    if vertices.is_empty() {
        return Err(Error::EmptySection);
    }
    Ok(DerivedPolygon { base: *n, height, vertices })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MainSide {
    /// The vertical infinite side.
    Vertical,
    /// A bounded side.
    Bounded(usize),
    /// The horizontal infinite side.
    Horizontal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacements {
    pub m_prime: (Q, Q, Q),
    pub delta: (Q, Q),
    pub c: Slope,
    pub side: MainSide,
    /// Support points on the half-line n + t(Δ, −1), t ≥ 0, ordered by t.
    pub edge_points: Vec<Exp>,
    pub omega: [i64; 3],
    pub mu: i64,
    /// Support points on the main face.
    pub face_points: Vec<Exp>,
}

impl Displacements {
    pub fn edge_end(&self) -> Exp {
        *self.edge_points.last().unwrap()
    }
}

/// Primitive integer vector proportional to a positive rational one.
pub fn primitive_weight(w: [Q; 3]) -> [i64; 3] {
    let mut l = BigInt::one();
    for a in &w {
        l = l.lcm(a.denom());
    }
    let ints: Vec<BigInt> = w.iter().map(|a| (a * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    let out: Vec<i64> = ints.iter().map(|a| i64::try_from(a / &g).expect("weight overflow")).collect();
    [out[0], out[1], out[2]]
}

pub fn displacements(np: &NewtonPolyhedron, n: &Exp) -> Result<Displacements> {
    let dp = derived_polygon(np, n)?;
    let (a, b) = dp.vertices[0].clone();
    let delta = (q(2) * (&a - q(n[0])), q(2) * (&b - q(n[1])));
    let sides = dp.bounded_sides();
    let (c, side) = if delta.0.is_positive() {
        (Some(Q::zero()), MainSide::Vertical)
    } else if let Some((dx, dy)) = sides.first() {
        (Some(dx / -dy), MainSide::Bounded(0))
    } else {
        (None, MainSide::Horizontal)
    };
    let w = match &c {
        Some(c) if c.is_zero() => [Q::one(), Q::zero(), delta.0.clone()],
        None => [Q::zero(), Q::one(), delta.1.clone()],
        Some(c) => [Q::one(), c.clone(), c * &delta.1],
    };
    if w.iter().any(|x| x.is_negative()) {
        return Err(Error::DegenerateResult(alloc::format!("negative face weight at {n:?}")));
    }
    let omega = primitive_weight(w);
    let mu = dot(&omega, n);
    if np.support.iter().any(|v| dot(&omega, v) < mu) {
        return Err(Error::DegenerateResult(alloc::format!("face weight {omega:?} does not support at {n:?}")));
    }
    let mut edge: Vec<(Q, Exp)> = np
        .support
        .iter()
        .filter_map(|v| {
            let t = q(n[2] - v[2]);
            let ok = !t.is_negative() && q(v[0]) == q(n[0]) + &t * &delta.0 && q(v[1]) == q(n[1]) + &t * &delta.1;
            ok.then(|| (t, *v))
        })
        .collect();
    edge.sort();
    let face_points = np.support.iter().filter(|v| dot(&omega, v) == mu).copied().collect();
    Ok(Displacements {
        m_prime: (a, b, dp.height.clone()),
        delta,
        c,
        side,
        edge_points: edge.into_iter().map(|(_, v)| v).collect(),
        omega,
        mu,
        face_points,
    })
}

/// Projection of the support to (v2, v3) and the generic polygon data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericPolygon {
    pub support: Vec<[i64; 2]>,
    pub vertices: Vec<[i64; 2]>,
    pub higher: [i64; 2],
    pub main: [i64; 2],
    pub nilpotent: bool,
    /// Slope Δ of the generic main edge m + t(Δ, −1), if the edge exists.
    pub delta: Option<Q>,
    pub edge_end: Option<[i64; 2]>,
    pub final_situation: bool,
}

fn edge_below(verts: &[(Q, Q)], p: &[i64; 2]) -> Option<([i64; 2], Q)> {
    // vertices ordered by increasing v2; the edge from p goes to the next one
    let i = verts.iter().position(|v| v.0 == q(p[0]) && v.1 == q(p[1]))?;
    let nx = verts.get(i + 1)?;
    let d = (&nx.0 - q(p[0])) / (q(p[1]) - &nx.1);
    let to_i = |a: &Q| i64::try_from(a.to_integer()).unwrap();
    Some(([to_i(&nx.0), to_i(&nx.1)], d))
}

pub fn generic_polygon(support: &[Exp]) -> Result<GenericPolygon> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let proj: Vec<[i64; 2]> = support.iter().map(|v| [v[1], v[2]]).collect::<BTreeSet<_>>().into_iter().collect();
    let pts: Vec<(Q, Q)> = proj.iter().map(|p| (q(p[0]), q(p[1]))).collect();
    let hull = staircase_hull(&pts);
    let to_i = |a: &Q| i64::try_from(a.to_integer()).unwrap();
    let vertices: Vec<[i64; 2]> = hull.iter().map(|(a, b)| [to_i(a), to_i(b)]).collect();
    let higher = vertices[0];
    let first = edge_below(&hull, &higher);
    let nilpotent = higher[0] == -1 && matches!(first, Some((n, _)) if n[0] == 0);
    let main = if nilpotent { first.as_ref().unwrap().0 } else { higher };
    let me = edge_below(&hull, &main);
    let final_situation = main[1] == -1
        || main[1] == 0
        || (main == [-1, 1] && matches!(&me, Some((e, _)) if *e == [1, -1]));
    Ok(GenericPolygon {
        support: proj,
        vertices,
        higher,
        main,
        nilpotent,
        delta: me.as_ref().map(|(_, d)| d.clone()),
        edge_end: me.map(|(e, _)| e),
        final_situation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn orthant_corner() {
        let np = build_polyhedron(&[[0, 0, 0]]).unwrap();
        assert_eq!(np.vertices, vec![[0, 0, 0]]);
        assert_eq!(np.facets.len(), 3);
        assert!(np.facets.iter().all(|f| !f.is_bounded()));
    }

    #[test]
    fn empty_support_rejected() {
        assert_eq!(build_polyhedron(&[]), Err(Error::EmptySupport));
    }

    #[test]
    fn three_point_support() {
        let s = [[0, 1, 0], [1, -1, 3], [0, 0, 2]];
        let np = build_polyhedron(&s).unwrap();
        let mut v = np.vertices.clone();
        v.sort();
        assert_eq!(v, vec![[0, 0, 2], [0, 1, 0], [1, -1, 3]]);
        assert_eq!(higher_vertex(&np), [0, 0, 2]);
        let d = displacements(&np, &[0, 0, 2]).unwrap();
        assert_eq!(d.m_prime.1, qf(1, 4));
        assert_eq!(d.delta, (q(0), qf(1, 2)));
        assert_eq!(d.c, Some(q(2)));
        assert_eq!((d.omega, d.mu), ([1, 2, 1], 2));
    }

    #[test]
    fn dominated_points_are_not_vertices() {
        let np = build_polyhedron(&[[0, 0, 0], [1, 1, 1], [2, 0, 0]]).unwrap();
        assert_eq!(np.vertices, vec![[0, 0, 0]]);
    }

    #[test]
    fn collinear_edge_points() {
        let np = build_polyhedron(&[[0, 0, 2], [0, 1, 1], [0, 2, 0]]).unwrap();
        assert_eq!(np.vertices.len(), 2);
        assert_eq!(np.edges.len(), 1);
    }

    #[test]
    fn derived_empty_at_origin() {
        let np = build_polyhedron(&[[0, 0, 0]]).unwrap();
        assert_eq!(derived_polygon(&np, &[0, 0, 0]), Err(Error::EmptySection));
    }

    #[test]
    fn staircase() {
        let pts = [(q(0), q(3)), (q(1), q(1)), (q(3), q(0)), (q(2), q(2)), (q(1), q(2))];
        assert_eq!(staircase_hull(&pts), vec![(q(0), q(3)), (q(1), q(1)), (q(3), q(0))]);
    }

    #[test]
    fn generic_projection() {
        let g = generic_polygon(&[[5, -1, 2], [7, 1, 0]]).unwrap();
        assert_eq!(g.support, vec![[-1, 2], [1, 0]]);
        assert_eq!(g.higher, [-1, 2]);
        assert_eq!(g.delta, Some(q(1)));
        let g = generic_polygon(&[[3, -1, 1], [2, 1, -1]]).unwrap();
        assert!(g.final_situation);
        let g = generic_polygon(&[[0, 0, 0]]).unwrap();
        assert_eq!(g.main, [0, 0]);
        assert!(g.final_situation);
    }
}

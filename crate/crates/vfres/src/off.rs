//! OFF export of a Newton polyhedron clipped to a box.

use std::fmt::Write as _;

use num_traits::Zero;
use vfres_core::linalg::solve;
use vfres_core::polyhedron::NewtonPolyhedron;
use vfres_core::rat::q;
use vfres_core::Q;

use crate::report::decimal;

/// Plane ⟨n, v⟩ = b bounding the region ⟨n, v⟩ ≥ b.
#[derive(Clone, Debug)]
struct Plane {
    n: [Q; 3],
    b: Q,
}

impl Plane {
    fn value(&self, v: &[Q; 3]) -> Q {
        &self.n[0] * &v[0] + &self.n[1] * &v[1] + &self.n[2] * &v[2] - &self.b
    }
}

/// Clipped geometry: vertices and faces as index cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mesh {
    pub vertices: Vec<[Q; 3]>,
    pub faces: Vec<Vec<usize>>,
}

/// Default box: one unit beyond the largest support coordinate on each axis.
pub fn default_box(np: &NewtonPolyhedron) -> [Q; 3] {
    let mut b = [q(1), q(1), q(1)];
    for v in &np.support {
        for i in 0..3 {
            if q(v[i] + 1) > b[i] {
                b[i] = q(v[i] + 1);
            }
        }
    }
    b
}

fn planes(np: &NewtonPolyhedron, upper: &[Q; 3]) -> Vec<Plane> {
    let mut out: Vec<Plane> = np.facets.iter().map(|f| Plane { n: [q(f.omega[0]), q(f.omega[1]), q(f.omega[2])], b: q(f.mu) }).collect();
    for i in 0..3 {
        let mut n = [q(0), q(0), q(0)];
        n[i] = q(-1);
        out.push(Plane { n, b: -upper[i].clone() });
    }
    out
}

fn vertices_of(planes: &[Plane], extra: Option<&Plane>) -> Vec<[Q; 3]> {
    let mut pts: Vec<[Q; 3]> = Vec::new();
    let all: Vec<&Plane> = planes.iter().chain(extra).collect();
    let k = all.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                if let Some(e) = extra {
                    if !std::ptr::eq(all[c], e) {
                        continue;
                    }
                }
                let m: Vec<Vec<Q>> = [all[a], all[b], all[c]].iter().map(|p| p.n.to_vec()).collect();
                let rhs: Vec<Q> = [all[a], all[b], all[c]].iter().map(|p| p.b.clone()).collect();
                let Some(x) = solve(&m, &rhs) else { continue };
                let v = [x[0].clone(), x[1].clone(), x[2].clone()];
                if planes.iter().all(|p| p.value(&v) >= Q::zero()) && !pts.contains(&v) {
                    pts.push(v);
                }
            }
        }
    }
    pts
}

/// Orders the points of a planar convex polygon with normal `n` cyclically.
fn cycle(points: &[usize], verts: &[[Q; 3]], n: &[Q; 3]) -> Vec<usize> {
    if points.len() < 3 {
        return points.to_vec();
    }
    // project away the coordinate where the normal is largest
    let drop = (0..3).max_by_key(|&i| abs_key(&n[i])).unwrap();
    let (u, w) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let k = q(points.len() as i64);
    let cu: Q = points.iter().map(|&i| verts[i][u].clone()).sum::<Q>() / &k;
    let cw: Q = points.iter().map(|&i| verts[i][w].clone()).sum::<Q>() / &k;
    let mut sorted = points.to_vec();
    // sort by angle using exact half-plane + cross product comparison
    let key = |i: usize| (verts[i][u].clone() - &cu, verts[i][w].clone() - &cw);
    let half = |(a, b): &(Q, Q)| if b > &Q::zero() || (b.is_zero() && a > &Q::zero()) { 0 } else { 1 };
    sorted.sort_by(|&i, &j| {
        let (pi, pj) = (key(i), key(j));
        half(&pi).cmp(&half(&pj)).then_with(|| {
            let cross = &pi.0 * &pj.1 - &pi.1 * &pj.0;
            Q::zero().cmp(&cross)
        })
    });
    sorted
}

fn abs_key(x: &Q) -> Q {
    if x < &Q::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

/// conv(support) + R³₊ intersected with [.., upper]; optionally adds the
/// section at v3 = `section` as an extra face.
pub fn clip(np: &NewtonPolyhedron, upper: &[Q; 3], section: Option<&Q>) -> Mesh {
    let ps = planes(np, upper);
    let mut verts = vertices_of(&ps, None);
    let mut faces = Vec::new();
    for p in &ps {
        let on: Vec<usize> = (0..verts.len()).filter(|&i| p.value(&verts[i]).is_zero()).collect();
        if on.len() >= 3 {
            let f = cycle(&on, &verts, &p.n);
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
    }
    if let Some(c) = section {
        let cut = Plane { n: [q(0), q(0), q(1)], b: c.clone() };
        let pts = vertices_of(&ps, Some(&cut));
        let mut idx = Vec::new();
        for v in pts {
            if v[2] != *c {
                continue;
            }
            idx.push(verts.len());
            verts.push(v);
        }
        if idx.len() >= 3 {
            faces.push(cycle(&idx, &verts, &cut.n));
        }
    }
    Mesh { vertices: verts, faces }
}

pub fn to_off(mesh: &Mesh, digits: usize) -> String {
    let mut s = String::from("OFF\n");
    let _ = writeln!(s, "{} {} 0", mesh.vertices.len(), mesh.faces.len());
    for v in &mesh.vertices {
        let _ = writeln!(s, "{} {} {}", decimal(&v[0], digits), decimal(&v[1], digits), decimal(&v[2], digits));
    }
    for f in &mesh.faces {
        let idx: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "{} {}", f.len(), idx.join(" "));
    }
    s
}

pub fn export_polyhedron(np: &NewtonPolyhedron, upper: Option<[Q; 3]>, section: Option<&Q>, digits: usize) -> String {
    let upper = upper.unwrap_or_else(|| default_box(np));
    to_off(&clip(np, &upper, section), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use vfres_core::polyhedron::build_polyhedron;
    use vfres_core::rat::qf;

    #[test]
    fn single_vertex_is_a_box() {
        let np = build_polyhedron(&[[0, 0, 0]]).unwrap();
        let m = clip(&np, &[q(1), q(1), q(1)], None);
        assert_eq!(m.vertices.len(), 8);
        assert_eq!(m.faces.len(), 6);
        assert!(m.faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn support_vertices_present() {
        let sup = [[0, -1, 4], [1, 0, 1], [0, 3, 0], [1, 1, 0]];
        let np = build_polyhedron(&sup).unwrap();
        let m = clip(&np, &default_box(&np), None);
        for v in &np.vertices {
            assert!(m.vertices.contains(&[q(v[0]), q(v[1]), q(v[2])]), "{v:?}");
        }
        // Euler characteristic of a convex polytope surface
        let e: usize = m.faces.iter().map(|f| f.len()).sum::<usize>() / 2;
        assert_eq!(m.vertices.len() + m.faces.len(), e + 2);
    }

    #[test]
    fn section_overlay() {
        let np = build_polyhedron(&[[0, 0, 0]]).unwrap();
        let m = clip(&np, &[q(1), q(1), q(1)], Some(&qf(1, 2)));
        assert_eq!(m.vertices.len(), 12);
        assert_eq!(m.faces.last().unwrap().len(), 4);
        let off = to_off(&m, 12);
        assert!(off.starts_with("OFF\n12 7 0\n"));
    }
}

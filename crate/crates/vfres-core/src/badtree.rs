//! Bad trees over supplied stratum data and their multiplicity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::invariant::Invariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CenterKind {
    /// Extended center contained in the divisor.
    Divisorial,
    NonDivisorial,
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumPoint {
    pub id: String,
    /// Indices of the divisor components through the point.
    pub incidence: Vec<u32>,
    pub inv: Invariant,
    pub center: CenterKind,
}

/// (maximal length, maximal final invariant, size of the final locus),
/// ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mult {
    pub length: usize,
    pub inv: Invariant,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct BadTree {
    pub points: Vec<StratumPoint>,
    /// Index pairs into `points`.
    pub edges: Vec<(usize, usize)>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl BadTree {
    /// Validates the graph and the divisor-index law.
    pub fn new(points: Vec<StratumPoint>, edges: &[(String, String)]) -> Result<BadTree> {
        if points.is_empty() {
            return Err(Error::MalformedSupport("bad tree without points".into()));
        }
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.id.as_str(), i).is_some() {
                return Err(Error::MalformedSupport(format!("duplicate point id {}", p.id)));
            }
        }
        let n = points.len();
        let mut parent = alloc::vec![None; n];
        let mut children = alloc::vec![Vec::new(); n];
        let mut idx_edges = Vec::new();
        for (a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                return Err(Error::MalformedSupport(format!("edge {a} -> {b} names an unknown point")));
            };
            if i == j {
                return Err(Error::CycleDetected);
            }
            children[i].push(j);
            idx_edges.push((i, j));
        }
        // Kahn's algorithm; leftovers lie on or below a cycle
        let mut indeg: Vec<usize> = alloc::vec![0; n];
        for &(_, j) in &idx_edges {
            indeg[j] += 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut k = 0;
        while k < order.len() {
            let i = order[k];
            k += 1;
            for &j in &children[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    order.push(j);
                }
            }
        }
        if order.len() < n {
            return Err(Error::CycleDetected);
        }
        for &(i, j) in &idx_edges {
            if let Some(old) = parent[j] {
                if old != i {
                    return Err(Error::MalformedSupport(format!("point {} has two parents", points[j].id)));
                }
            }
            parent[j] = Some(i);
        }
        let mut depth = alloc::vec![0usize; n];
        for &i in &order {
            if let Some(p) = parent[i] {
                depth[i] = depth[p] + 1;
            }
        }
        let tree = BadTree { points, edges: idx_edges, parent, children, depth };
        tree.check_index_law()?;
        Ok(tree)
    }

    fn check_index_law(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            let d = self.depth[i];
            let k = p.incidence.len();
            if d >= 1 && p.center == CenterKind::NonDivisorial {
                return Err(Error::IndexLawViolation(format!("{} is below a root but its center is not divisorial", p.id)));
            }
            if d == 1 && k == 0 {
                return Err(Error::IndexLawViolation(format!("{} lies on no divisor", p.id)));
            }
            if d >= 2 && k != 2 {
                return Err(Error::IndexLawViolation(format!("{} should lie on exactly two divisors, found {k}", p.id)));
            }
            if d >= 3 {
                let q = &self.points[self.parent[i].unwrap()];
                let (lo, hi) = bounds(&p.incidence);
                let (plo, phi) = bounds(&q.incidence);
                if lo <= plo || hi <= phi {
                    return Err(Error::IndexLawViolation(format!(
                        "divisor indices do not increase from {} {:?} to {} {:?}",
                        q.id, q.incidence, p.id, p.incidence
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn roots(&self) -> impl Iterator<Item = &StratumPoint> {
        self.points.iter().enumerate().filter(|(i, _)| self.parent[*i].is_none()).map(|(_, p)| p)
    }

    pub fn terminals(&self) -> impl Iterator<Item = &StratumPoint> {
        self.points.iter().enumerate().filter(|(i, _)| self.children[*i].is_empty()).map(|(_, p)| p)
    }

    pub fn depth_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id).map(|i| self.depth[i])
    }

    /// Length of the longest branch.
    pub fn max_length(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn mult(&self) -> Mult {
        let length = self.max_length();
        let finals: Vec<&StratumPoint> = self.points.iter().enumerate().filter(|(i, _)| self.depth[*i] == length).map(|(_, p)| p).collect();
        let inv = finals.iter().map(|p| p.inv).max().expect("nonempty tree");
        let count = finals.iter().filter(|p| p.inv == inv).count();
        Mult { length, inv, count }
    }
}

fn bounds(v: &[u32]) -> (u32, u32) {
    (*v.iter().min().unwrap(), *v.iter().max().unwrap())
}

/// Requires the multiplicity to drop strictly across a blow-up.
pub fn verify_mult_decrease(before: &BadTree, after: &BadTree) -> Result<Ordering> {
    let (a, b) = (before.mult(), after.mult());
    match b.cmp(&a) {
        Ordering::Less => Ok(Ordering::Less),
        _ => Err(Error::DecreaseViolation(format!("{:?} then {:?}", a, b))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn pt(id: &str, inc: &[u32], inv: [u128; 6], center: CenterKind) -> StratumPoint {
        StratumPoint { id: id.to_string(), incidence: inc.to_vec(), inv: Invariant { v: inv }, center }
    }

    fn e(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn single_point() {
        let t = BadTree::new(vec![pt("p", &[], [2, 1, 2, 0, 0, 0], CenterKind::NonDivisorial)], &[]).unwrap();
        assert_eq!(t.mult(), Mult { length: 0, inv: Invariant { v: [2, 1, 2, 0, 0, 0] }, count: 1 });
    }

    #[test]
    fn chain_of_three() {
        use CenterKind::*;
        let pts = vec![
            pt("p0", &[], [3, 0, 0, 0, 0, 0], NonDivisorial),
            pt("p1", &[1], [2, 0, 0, 0, 0, 0], Divisorial),
            pt("p2", &[1, 2], [1, 0, 0, 0, 0, 0], Point),
        ];
        let t = BadTree::new(pts, &[e("p0", "p1"), e("p1", "p2")]).unwrap();
        assert_eq!(t.mult(), Mult { length: 2, inv: Invariant { v: [1, 0, 0, 0, 0, 0] }, count: 1 });
    }

    #[test]
    fn shared_final_invariant_is_counted() {
        use CenterKind::*;
        let i = [1, 0, 1, 0, 0, 0];
        let pts = vec![
            pt("a", &[], [3, 0, 0, 0, 0, 0], NonDivisorial),
            pt("b", &[1], [2, 0, 0, 0, 0, 0], Divisorial),
            pt("c", &[1, 2], i, Point),
            pt("d", &[1, 3], i, Point),
            pt("e", &[4], i, Point),
        ];
        let t = BadTree::new(pts, &[e("a", "b"), e("b", "c"), e("b", "d"), e("a", "e")]).unwrap();
        assert_eq!(t.mult().count, 2);
        assert_eq!(t.mult().length, 2);
    }

    #[test]
    fn cycles_rejected() {
        use CenterKind::*;
        let pts = vec![pt("a", &[1], [1; 6], Divisorial), pt("b", &[1, 2], [1; 6], Divisorial)];
        assert_eq!(BadTree::new(pts, &[e("a", "b"), e("b", "a")]).unwrap_err(), Error::CycleDetected);
    }

    #[test]
    fn index_law() {
        use CenterKind::*;
        let pts = vec![
            pt("p0", &[], [4; 6], NonDivisorial),
            pt("p1", &[1], [3; 6], Divisorial),
            pt("p2", &[1, 3], [2; 6], Divisorial),
            pt("p3", &[2, 3], [1; 6], Point),
        ];
        let err = BadTree::new(pts, &[e("p0", "p1"), e("p1", "p2"), e("p2", "p3")]).unwrap_err();
        assert!(matches!(err, Error::IndexLawViolation(_)));
    }

    #[test]
    fn mult_order() {
        use CenterKind::*;
        let before = BadTree::new(
            vec![pt("a", &[1], [2; 6], Divisorial), pt("b", &[1, 2], [1; 6], Point)],
            &[e("a", "b")],
        )
        .unwrap();
        let after = BadTree::new(vec![pt("a", &[1], [2; 6], Divisorial)], &[]).unwrap();
        assert_eq!(verify_mult_decrease(&before, &after), Ok(Ordering::Less));
        assert!(verify_mult_decrease(&after, &before).is_err());
    }
}

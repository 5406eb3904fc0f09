//! The resolution loop: prepare, pick the weighted center, blow up, find the
//! bad points of each chart and recurse, certifying that the invariant drops.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::Zero;

use crate::blowup::{bl_directional, center_for_weight, chart_signs, BlowupStep, Center, DivisorState};
use crate::classify::{classify_configuration, final_situation, is_elementary, trace_powers, ClassDescriptor, FinalSituationKind, NewtonData};
use crate::error::{Error, Result};
use crate::fiber::{fiber_points, FiberPoint};
use crate::field::{mu_omega, to_log_basis, NewtonMap, PolyVectorField};
use crate::gmap::{GMap, GroupClass};
use crate::invariant::{
    apply_shear, distinguished_weight, generic_virtual_height, invariant_of, make_strongly_adapted, primitive_height, Invariant, Shear,
};
use crate::poly::Poly;
use crate::polyhedron::generic_polygon;
use crate::prepare::stabilize;
use crate::rat::{as_i64, q, Q};
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_depth: 32, max_nodes: 100_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolveOptions {
    pub caps: Caps,
    /// Weight used at the root instead of the main-face weight.
    pub forced_weight: Option<[i64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeStatus {
    Elementary,
    NonElementary,
    FinalSituation(FinalSituationKind),
    Unresolved(String),
}

/// How an off-divisor root was blown up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffDivisor {
    Equireducible { height: u64 },
    Distinguished { height: u64, shear: Shear },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub vf: PolyVectorField,
    pub divisor: DivisorState,
    pub provenance: Option<BlowupStep>,
    /// Stands for the generic point of a line of nonelementary points.
    pub generic: bool,
    /// Coordinate relabelling applied before the analysis.
    pub relabel: Option<[usize; 3]>,
    pub preparation: Vec<GMap>,
    pub stable_data: Option<NewtonData>,
    pub class: Option<ClassDescriptor>,
    pub invariant: Option<Invariant>,
    pub off_divisor: Option<OffDivisor>,
    pub center: Option<(Center, [i64; 3], i64)>,
    pub status: NodeStatus,
    pub children: Vec<usize>,
}

impl ChartNode {
    fn new(id: usize, parent: Option<usize>, depth: usize, vf: PolyVectorField, divisor: DivisorState, provenance: Option<BlowupStep>) -> Self {
        ChartNode {
            id,
            parent,
            depth,
            vf,
            divisor,
            provenance,
            generic: false,
            relabel: None,
            preparation: Vec::new(),
            stable_data: None,
            class: None,
            invariant: None,
            off_divisor: None,
            center: None,
            status: NodeStatus::NonElementary,
            children: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionTree {
    pub nodes: Vec<ChartNode>,
}

impl ResolutionTree {
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ChartNode> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &ChartNode> {
        self.nodes.iter().filter(|n| matches!(n.status, NodeStatus::Unresolved(_)))
    }

    /// Every leaf is elementary or a final situation.
    pub fn is_resolved(&self) -> bool {
        self.leaves().all(|n| matches!(n.status, NodeStatus::Elementary | NodeStatus::FinalSituation(_)))
    }
}

/// One checked parent → child link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecreaseLink {
    pub parent: usize,
    pub child: usize,
    pub before: Invariant,
    pub after: Invariant,
    /// Off-divisor roots only bound the first entry.
    pub strict: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub links: Vec<DecreaseLink>,
}

/// Decrease required along one tree edge; below an off-divisor root only
/// the height is bounded.
pub fn link_decreases(off_divisor_parent: bool, before: &Invariant, after: &Invariant) -> bool {
    if off_divisor_parent {
        after.v[0] <= before.v[0]
    } else {
        after.cmp(before) == Ordering::Less
    }
}

pub fn verify_decrease(tree: &ResolutionTree) -> Result<Certificate> {
    let mut cert = Certificate::default();
    for n in &tree.nodes {
        let Some(pid) = n.parent else { continue };
        let p = &tree.nodes[pid];
        let (Some(before), Some(after)) = (p.invariant, n.invariant) else { continue };
        if !link_decreases(p.off_divisor.is_some(), &before, &after) {
            return Err(Error::DecreaseViolation(format!("node {pid} -> {}: {:?} then {:?}", n.id, before.v, after.v)));
        }
        cert.links.push(DecreaseLink { parent: pid, child: n.id, before, after, strict: p.off_divisor.is_none() });
    }
    Ok(cert)
}

fn unresolved(e: &Error) -> NodeStatus {
    NodeStatus::Unresolved(format!("{e}"))
}

/// The nonelementary locus contains the x-axis.
fn singular_along_x_axis(vf: &PolyVectorField) -> bool {
    let z = Q::zero();
    let on_axis = |p: &Poly| p.eval_var(1, &z).eval_var(2, &z).is_zero();
    vf.c.iter().all(on_axis) && trace_powers(vf).iter().all(on_axis)
}

/// Genericity and generic edge stability at an off-divisor point whose
/// nonelementary locus is the x-axis.
pub fn equireducibility(theta: &NewtonMap) -> Result<bool> {
    let np = crate::polyhedron::build_polyhedron(&theta.support())?;
    if np.vertices.iter().any(|v| v[0] != -1 && v[0] != 0) {
        return Ok(false);
    }
    Ok(generic_edge_witness(theta)?.is_none())
}

/// z̃ = z + ξ y^Δ moving the generic main edge, when Δ is a natural number.
pub fn generic_edge_witness(theta: &NewtonMap) -> Result<Option<Q>> {
    let gp = generic_polygon(&theta.support())?;
    let (Some(delta), Some(_)) = (gp.delta.clone(), gp.edge_end) else { return Ok(None) };
    let Some(k) = as_i64(&delta).filter(|k| *k >= 1) else { return Ok(None) };
    let m = gp.main;
    let on_edge = |v: &[i64; 3]| {
        let t = m[1] - v[2];
        t >= 0 && v[1] == m[0] + t * k
    };
    let restricted = NewtonMap { map: theta.iter().filter(|(v, _)| on_edge(v)).map(|(v, t)| (*v, t.clone())).collect() };
    let vf = crate::field::from_log_basis(&restricted)?;
    let top = (m[1] + 1).max(1);
    let xs: Vec<Q> = (0..=top).map(q).collect();
    let mut samples = Vec::new();
    for x in &xs {
        let mv = GMap::monomial(x.clone(), 0, k, GroupClass::GDelta { delta: (Q::zero(), delta.clone()) });
        samples.push(to_log_basis(&crate::gmap::apply_gmap(&vf, &mv)).unwrap_or_default());
    }
    let mut keys: BTreeSet<[i64; 3]> = BTreeSet::new();
    for s in &samples {
        for (v, _) in s.iter() {
            if v[2] < m[1] {
                keys.insert(*v);
            }
        }
    }
    let mut g = UPoly::zero();
    for v in &keys {
        for comp in 0..3 {
            let ys: Vec<Q> = samples.iter().map(|s| s.get(v).map_or(Q::zero(), |t| t[comp].clone())).collect();
            g = g.gcd(&UPoly::interpolate(&xs, &ys));
        }
    }
    if g.is_zero() || g.degree() <= 0 {
        return Ok(None);
    }
    if g.strip_rational_roots().count_real_roots() > 0 {
        return Err(Error::IrrationalPreparation("generic edge polynomial".into()));
    }
    Ok(g.rational_roots().into_iter().find(|r| !r.is_zero()))
}

const AXIS_PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

struct Driver<'a> {
    opts: &'a ResolveOptions,
    nodes: Vec<ChartNode>,
    queue: VecDeque<usize>,
}

impl<'a> Driver<'a> {
    fn push(&mut self, node: ChartNode) -> usize {
        let id = node.id;
        if let Some(p) = node.parent {
            self.nodes[p].children.push(id);
        }
        self.nodes.push(node);
        self.queue.push_back(id);
        id
    }

    fn next_id(&self) -> usize {
        self.nodes.len()
    }

    /// Blows up `data` with weight ω and attaches every chart point that
    /// needs attention, plus the elementary chart origins.
    fn expand(&mut self, id: usize, data: &NewtonData, omega: [i64; 3]) -> Result<()> {
        let mu = mu_omega(&data.theta, &omega)?;
        let (center, dirs) = center_for_weight(&omega)?;
        self.nodes[id].center = Some((center, omega, mu));
        let depth = self.nodes[id].depth + 1;
        let mut staged = Vec::new();
        for dir in dirs {
            for eps in chart_signs(&omega, dir) {
                let step = BlowupStep::new(omega, mu, dir, eps);
                let chart = bl_directional(data, &step)?;
                let vf = chart.field();
                let mut pts = fiber_points(&vf, dir, &omega)?;
                if !pts.iter().any(|p| p.eta.is_zero() && p.xi.is_zero()) {
                    pts.insert(0, FiberPoint { eta: Q::zero(), xi: Q::zero(), generic: false });
                }
                for p in pts {
                    let s = step.clone().at(p.eta, p.xi);
                    let child = bl_directional(data, &s)?;
                    staged.push((child.field(), child.divisor, s, p.generic));
                }
            }
        }
        for (vf, div, s, generic) in staged {
            if self.nodes.len() >= self.opts.caps.max_nodes {
                return Err(Error::CapExceeded(format!("more than {} nodes", self.opts.caps.max_nodes)));
            }
            let mut n = ChartNode::new(self.next_id(), Some(id), depth, vf, div, Some(s));
            n.generic = generic;
            self.push(n);
        }
        Ok(())
    }

    fn process(&mut self, id: usize) {
        let node = self.nodes[id].clone();
        if is_elementary(&node.vf) {
            self.nodes[id].status = NodeStatus::Elementary;
            return;
        }
        if node.depth >= self.opts.caps.max_depth {
            self.nodes[id].status = unresolved(&Error::CapExceeded(format!("depth {}", node.depth)));
            return;
        }
        let r = if node.divisor.incidence() == 0 {
            if node.parent.is_some() {
                Err(Error::NotDivisorPoint)
            } else {
                self.process_off_divisor(id)
            }
        } else {
            self.process_divisor(id)
        };
        if let Err(e) = r {
            self.nodes[id].status = unresolved(&e);
        }
    }

    fn process_divisor(&mut self, id: usize) -> Result<()> {
        let node = self.nodes[id].clone();
        let mut data = NewtonData::from_field(&node.vf, node.divisor.clone())?;
        if node.parent.is_none() {
            if let Err(Error::NotAdapted(_)) = classify_configuration(&data) {
                // exchange y and z when the main vertex sits above the plane v2 = 0
                let perm = [0, 2, 1];
                let alt = NewtonData::from_field(&node.vf.permute(perm), node.divisor.permute(perm))?;
                if classify_configuration(&alt).is_ok() {
                    data = alt;
                    self.nodes[id].relabel = Some(perm);
                }
            }
        }
        let kind = final_situation(&data)?;
        if kind != FinalSituationKind::NotFinal {
            self.nodes[id].status = NodeStatus::FinalSituation(kind);
            return Ok(());
        }
        let (sd, maps) = stabilize(&data)?;
        self.nodes[id].preparation = maps;
        let kind = final_situation(&sd)?;
        if kind != FinalSituationKind::NotFinal {
            self.nodes[id].stable_data = Some(sd);
            self.nodes[id].status = NodeStatus::FinalSituation(kind);
            return Ok(());
        }
        let class = classify_configuration(&sd)?;
        let inv = invariant_of(&class)?;
        self.nodes[id].stable_data = Some(sd.clone());
        self.nodes[id].class = Some(class.clone());
        self.nodes[id].invariant = Some(inv);
        if let Some(pid) = node.parent {
            let p = &self.nodes[pid];
            if let Some(before) = p.invariant {
                if !link_decreases(p.off_divisor.is_some(), &before, &inv) {
                    return Err(Error::DecreaseViolation(format!("{:?} is not below {:?}", inv.v, before.v)));
                }
            }
        }
        let omega = match (node.parent, self.opts.forced_weight) {
            (None, Some(w)) => w,
            _ => class.disp.omega,
        };
        self.expand(id, &sd, omega)
    }

    fn process_off_divisor(&mut self, id: usize) -> Result<()> {
        let node = self.nodes[id].clone();
        let mut vf = node.vf.clone();
        if primitive_height(&vf).is_none() {
            let perm = AXIS_PERMS
                .iter()
                .copied()
                .find(|p| primitive_height(&vf.permute(*p)).is_some())
                .ok_or_else(|| Error::UnsupportedPattern("no coordinate axis has finite primitive height".into()))?;
            vf = vf.permute(perm);
            self.nodes[id].relabel = Some(perm);
        }
        let theta = to_log_basis(&vf)?;
        if singular_along_x_axis(&vf) && equireducibility(&theta)? {
            let gp = generic_polygon(&theta.support())?;
            if let Some(delta) = gp.delta.clone() {
                let h = generic_virtual_height(&gp)?;
                let omega = [0, i64::try_from(delta.denom().clone()).unwrap(), i64::try_from(delta.numer().clone()).unwrap()];
                self.nodes[id].off_divisor = Some(OffDivisor::Equireducible { height: h });
                self.nodes[id].invariant = Some(Invariant { v: [h as u128, 0, 0, 0, 0, 0] });
                let data = NewtonData::new(theta, DivisorState::none());
                return self.expand(id, &data, omega);
            }
        }
        let shear = make_strongly_adapted(&vf)?;
        let moved = apply_shear(&vf, &shear);
        let h = primitive_height(&moved).unwrap_or(0);
        let theta = to_log_basis(&moved)?;
        let omega = match self.opts.forced_weight {
            Some(w) => w,
            None => distinguished_weight(&theta.support(), &[-1, 0, h as i64])?,
        };
        self.nodes[id].vf = moved.clone();
        self.nodes[id].off_divisor = Some(OffDivisor::Distinguished { height: h, shear });
        self.nodes[id].invariant = Some(Invariant { v: [h as u128, 0, 0, 0, 0, 0] });
        let data = NewtonData::new(theta, DivisorState::none());
        self.expand(id, &data, omega)
    }
}

/// Builds the resolution tree of `vf` at the origin.
pub fn resolve(vf: &PolyVectorField, divisor: DivisorState, opts: &ResolveOptions) -> Result<ResolutionTree> {
    if vf.is_zero() {
        return Err(Error::ZeroField);
    }
    if !vf.is_polynomial() {
        return Err(Error::MalformedSupport("negative exponent".into()));
    }
    if vf.monomial_content() != [0, 0, 0] {
        return Err(Error::PreconditionViolated("field is not reduced: a monomial divides every coefficient".into()));
    }
    if divisor.tags[2].is_some() {
        return Err(Error::UnsupportedPattern("divisor component {z = 0}".into()));
    }
    let mut d = Driver { opts, nodes: Vec::new(), queue: VecDeque::new() };
    d.push(ChartNode::new(0, None, 0, vf.clone(), divisor, None));
    while let Some(id) = d.queue.pop_front() {
        d.process(id);
    }
    Ok(ResolutionTree { nodes: d.nodes })
}

/// Chart-origin data after one blow-up with an explicit weight, used by the
/// command line and tests.
pub fn blowup_chart(
    vf: &PolyVectorField,
    divisor: DivisorState,
    step: &BlowupStep,
) -> Result<NewtonData> {
    let data = NewtonData::from_field(vf, divisor)?;
    bl_directional(&data, step)
}

/// Positions of nonzero entries, for reports.
pub fn weight_support(w: &[i64; 3]) -> Vec<usize> {
    (0..3).filter(|&i| w[i] != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::Direction;

    fn vfb() -> PolyVectorField {
        PolyVectorField::from_terms([(1, [0, 2, 0], q(1)), (1, [1, 0, 3], q(1)), (2, [0, 0, 3], q(1))])
    }

    #[test]
    fn vf_b_resolves() {
        let t = resolve(&vfb(), DivisorState::x_only(1), &ResolveOptions::default()).unwrap();
        assert!(t.is_resolved(), "{:#?}", t.unresolved().collect::<Vec<_>>());
        assert_eq!(t.nodes[0].invariant.unwrap().v, [2, 1, 2, 0, 0, 6]);
        assert_eq!(t.nodes[0].center.unwrap().1, [1, 2, 1]);
        let child = t.nodes.iter().find(|n| n.parent == Some(0) && n.provenance.as_ref().unwrap().dir == Direction::X).unwrap();
        assert_eq!(child.invariant.unwrap().inv1(), [2, 0, 3]);
        assert!(t.depth() <= 3);
        let c = verify_decrease(&t).unwrap();
        assert!(!c.links.is_empty());
    }

    #[test]
    fn elementary_root() {
        let vf = PolyVectorField::from_terms([(0, [1, 0, 0], q(1)), (1, [0, 1, 0], q(1)), (2, [0, 0, 1], q(1))]);
        let t = resolve(&vf, DivisorState::none(), &ResolveOptions::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.depth(), 0);
        assert!(verify_decrease(&t).unwrap().links.is_empty());
    }

    #[test]
    fn non_reduced_rejected() {
        let vf = PolyVectorField::from_terms([(0, [1, 0, 1], q(1)), (1, [0, 1, 1], q(1))]);
        assert!(resolve(&vf, DivisorState::none(), &ResolveOptions::default()).is_err());
    }

    #[test]
    fn equireducibility_examples() {
        let m = |es: &[([i64; 3], [i64; 3])]| NewtonMap::from_entries(es.iter().map(|(e, t)| (*e, [q(t[0]), q(t[1]), q(t[2])])));
        // x∂x + z³∂y + y²∂z: nilpotent generic configuration, edge stable
        let a = m(&[([0, -1, 3], [0, 1, 0]), ([0, 2, -1], [0, 0, 1]), ([0, 0, 0], [1, 0, 0])]);
        assert!(equireducibility(&a).unwrap());
        // x z²∂x + (z − y)²∂z: the generic edge collapses under z̃ = z − y
        let vf = PolyVectorField::from_terms([
            (0, [1, 0, 2], q(1)),
            (2, [0, 0, 2], q(1)),
            (2, [0, 1, 1], q(-2)),
            (2, [0, 2, 0], q(1)),
        ]);
        let b = to_log_basis(&vf).unwrap();
        assert_eq!(generic_edge_witness(&b).unwrap(), Some(q(-1)));
        assert!(!equireducibility(&b).unwrap());
        let c = m(&[([3, -1, 0], [0, 1, 0]), ([0, -1, 3], [0, 1, 0]), ([0, 0, 0], [1, 0, 0])]);
        assert!(!equireducibility(&c).unwrap());
    }
}

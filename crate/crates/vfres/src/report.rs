//! Analysis and resolution reports.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use vfres_core::blowup::{BlowupStep, Center, Direction, DivisorState};
use vfres_core::classify::{
    classify_configuration, final_situation, is_elementary, ClassDescriptor, Configuration, FinalSituationKind, NewtonData,
};
use vfres_core::driver::{verify_decrease, NodeStatus, OffDivisor, ResolutionTree};
use vfres_core::gmap::GMap;
use vfres_core::invariant::{invariant_report, InvariantReport};
use vfres_core::poly::Poly;
use vfres_core::prepare::{is_stable, stabilize};
use vfres_core::rat::show_q;
use vfres_core::{PolyVectorField, Q};

pub const DEFAULT_PRECISION: usize = 12;

/// Which scale the last two invariant entries are printed with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Lambda {
    /// λ = 2(m3+1)!, the scale used by every computation.
    #[default]
    Double,
    /// λ = (m3+1)!.
    Single,
}

/// A rational as an exact string and a rounded decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub exact: String,
    pub decimal: String,
}

impl Rational {
    pub fn new(x: &Q) -> Self {
        Rational { exact: show_q(x), decimal: decimal(x, DEFAULT_PRECISION) }
    }
}

/// Rounds half away from zero to `digits` fractional digits, dropping
/// trailing zeros.
pub fn decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = a.numer() * &scale * 2 + a.denom();
    let r: BigInt = scaled / (a.denom() * 2);
    let int = &r / &scale;
    let frac = &r % &scale;
    let mut s = String::new();
    if neg && !r.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 && !frac.is_zero() {
        let f = format!("{:0>width$}", frac.to_string(), width = digits);
        s.push('.');
        s.push_str(f.trim_end_matches('0'));
    }
    s
}

fn slope(c: &Option<Q>) -> Rational {
    match c {
        Some(c) => Rational::new(c),
        None => Rational { exact: "inf".into(), decimal: "inf".into() },
    }
}

pub fn field_string(vf: &PolyVectorField) -> String {
    let names = ["dx", "dy", "dz"];
    let parts: Vec<String> =
        (0..3).filter(|&k| !vf.c[k].is_zero()).map(|k| format!("({})·∂{}", poly_string(&vf.c[k]), &names[k][1..])).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn poly_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (e, a) in p.terms() {
        let mono: Vec<String> = ["x", "y", "z"]
            .iter()
            .zip(e.iter())
            .filter(|(_, &k)| k != 0)
            .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
            .collect();
        let neg = a.is_negative();
        let mag = a.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coef = show_q(&mag);
        if mono.is_empty() {
            s.push_str(&coef);
        } else {
            if coef != "1" {
                s.push_str(&coef);
                s.push('*');
            }
            s.push_str(&mono.join("*"));
        }
    }
    s
}

pub fn gmap_string(m: &GMap) -> String {
    format!("z -> z + ({}), y -> y + ({})", poly_string(&m.f), poly_string(&m.g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    /// Index of each coordinate hyperplane in the divisor, if any.
    pub tags: [Option<u32>; 3],
    pub indices: Vec<u32>,
}

impl DivisorReport {
    pub fn new(d: &DivisorState) -> Self {
        DivisorReport { tags: d.tags, indices: d.upsilon.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub configuration: String,
    pub incidence: usize,
    pub higher_vertex: [i64; 3],
    pub main_vertex: [i64; 3],
    pub delta: [Rational; 2],
    pub c: Rational,
    pub main_weight: [i64; 3],
    pub main_order: i64,
}

impl ClassReport {
    pub fn new(c: &ClassDescriptor) -> Self {
        ClassReport {
            configuration: match c.config {
                Configuration::Regular => "regular".into(),
                Configuration::Nilpotent => "nilpotent".into(),
            },
            incidence: c.i,
            higher_vertex: c.h,
            main_vertex: c.m,
            delta: [Rational::new(&c.delta.0), Rational::new(&c.delta.1)],
            c: slope(&c.c),
            main_weight: c.disp.omega,
            main_order: c.disp.mu,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantJson {
    pub virtual_height: u128,
    pub inv: [u128; 6],
    pub inv1: [u128; 3],
    pub inv2: [u128; 3],
    pub lambda: Lambda,
    /// Entries under the selected λ.
    pub scaled: Vec<Rational>,
}

impl InvariantJson {
    pub fn new(r: &InvariantReport, lambda: Lambda) -> Self {
        let scaled = match lambda {
            Lambda::Double => &r.double,
            Lambda::Single => &r.single,
        };
        InvariantJson {
            virtual_height: r.inv.v[0],
            inv: r.inv.v,
            inv1: r.inv.inv1(),
            inv2: r.inv.inv2(),
            lambda,
            scaled: scaled.iter().map(Rational::new).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub divisor: DivisorReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relabel: Option<[usize; 3]>,
    pub warnings: Vec<String>,
    pub elementary: bool,
    pub support: Vec<[i64; 3]>,
    pub vertices: Vec<[i64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassReport>,
    pub stable: Option<bool>,
    pub preparation: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_class: Option<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_situation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<InvariantJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn final_name(k: FinalSituationKind) -> Option<String> {
    match k {
        FinalSituationKind::NotFinal => None,
        k => Some(format!("{k:?}")),
    }
}

/// Newton data, classification, stabilization and invariant at the origin.
pub fn analyze(name: Option<String>, vf: &PolyVectorField, divisor: &DivisorState, lambda: Lambda) -> AnalysisReport {
    let mut r = AnalysisReport {
        name,
        field: field_string(vf),
        divisor: DivisorReport::new(divisor),
        relabel: None,
        warnings: Vec::new(),
        elementary: is_elementary(vf),
        support: Vec::new(),
        vertices: Vec::new(),
        class: None,
        stable: None,
        preparation: Vec::new(),
        stable_class: None,
        final_situation: None,
        invariant: None,
        error: None,
    };
    if let Err(e) = analyze_into(&mut r, vf, divisor, lambda) {
        r.error = Some(e.to_string());
    }
    r
}

fn analyze_into(r: &mut AnalysisReport, vf: &PolyVectorField, divisor: &DivisorState, lambda: Lambda) -> vfres_core::Result<()> {
    let data = NewtonData::from_field(vf, divisor.clone())?;
    let np = data.polyhedron()?;
    r.support = np.support.clone();
    r.vertices = np.vertices.clone();
    if divisor.incidence() == 0 {
        return Ok(());
    }
    r.class = Some(ClassReport::new(&classify_configuration(&data)?));
    let kind = final_situation(&data)?;
    if kind != FinalSituationKind::NotFinal {
        r.final_situation = final_name(kind);
        return Ok(());
    }
    let stable = is_stable(&data)?;
    r.stable = Some(stable);
    let sd = if stable {
        data
    } else {
        let (sd, maps) = stabilize(&data)?;
        r.preparation = maps.iter().map(gmap_string).collect();
        sd
    };
    let kind = final_situation(&sd)?;
    if kind != FinalSituationKind::NotFinal {
        r.final_situation = final_name(kind);
        return Ok(());
    }
    let class = classify_configuration(&sd)?;
    r.invariant = Some(InvariantJson::new(&invariant_report(&class)?, lambda));
    r.stable_class = Some(ClassReport::new(&class));
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub direction: String,
    pub sign: i8,
    pub weight: [i64; 3],
    pub order: i64,
    /// Chart point (y, z) the child is centered at.
    pub point: [Rational; 2],
}

impl StepReport {
    pub fn new(s: &BlowupStep) -> Self {
        StepReport {
            direction: dir_name(s.dir).into(),
            sign: s.eps,
            weight: s.omega,
            order: s.mu,
            point: [Rational::new(&s.eta), Rational::new(&s.xi)],
        }
    }
}

pub fn dir_name(d: Direction) -> &'static str {
    match d {
        Direction::X => "x",
        Direction::Y => "y",
        Direction::Z => "z",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub kind: String,
    pub weight: [i64; 3],
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub field: String,
    pub divisor: DivisorReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<StepReport>,
    pub generic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relabel: Option<[usize; 3]>,
    pub preparation: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<InvariantJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub off_divisor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterReport>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub parent: usize,
    pub child: usize,
    pub before: [u128; 6],
    pub after: [u128; 6],
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub ok: bool,
    pub links: Vec<LinkReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub nodes: Vec<NodeReport>,
    pub depth: usize,
    pub resolved: bool,
    pub transcript: Vec<String>,
    pub certificate: CertificateReport,
}

fn status_parts(s: &NodeStatus) -> (String, Option<String>) {
    match s {
        NodeStatus::Elementary => ("elementary".into(), None),
        NodeStatus::NonElementary => ("nonelementary".into(), None),
        NodeStatus::FinalSituation(k) => ("final".into(), Some(format!("{k:?}"))),
        NodeStatus::Unresolved(m) => ("unresolved".into(), Some(m.clone())),
    }
}

fn center_name(c: Center) -> &'static str {
    match c {
        Center::Point => "point",
        Center::CurveXZ => "curve {x = z = 0}",
        Center::CurveYZ => "curve {y = z = 0}",
    }
}

pub fn tree_report(name: Option<String>, tree: &ResolutionTree, lambda: Lambda) -> TreeReport {
    let mut nodes = Vec::new();
    let mut transcript = Vec::new();
    for n in &tree.nodes {
        let (status, reason) = status_parts(&n.status);
        let invariant = n.class.as_ref().and_then(|c| invariant_report(c).ok()).map(|r| InvariantJson::new(&r, lambda)).or_else(|| {
            n.invariant.map(|inv| InvariantJson {
                virtual_height: inv.v[0],
                inv: inv.v,
                inv1: inv.inv1(),
                inv2: inv.inv2(),
                lambda,
                scaled: inv.v.iter().map(|&a| Rational::new(&Q::from_integer(BigInt::from(a)))).collect(),
            })
        });
        let center = n.center.map(|(c, w, mu)| CenterReport { kind: center_name(c).into(), weight: w, order: mu });
        if let Some(c) = &center {
            transcript.push(format!("node {}: blow up the {} with weight {:?}, order {}", n.id, c.kind, c.weight, c.order));
        }
        nodes.push(NodeReport {
            id: n.id,
            parent: n.parent,
            depth: n.depth,
            field: field_string(&n.vf),
            divisor: DivisorReport::new(&n.divisor),
            step: n.provenance.as_ref().map(StepReport::new),
            generic: n.generic,
            relabel: n.relabel,
            preparation: n.preparation.iter().map(gmap_string).collect(),
            class: n.class.as_ref().map(ClassReport::new),
            invariant,
            off_divisor: n.off_divisor.as_ref().map(|o| match o {
                OffDivisor::Equireducible { height } => format!("equireducible, generic height {height}"),
                OffDivisor::Distinguished { height, shear } => {
                    format!("distinguished vertex, primitive height {height}, shear {}", show_q(&shear.xi))
                }
            }),
            center,
            status,
            reason,
            children: n.children.clone(),
        });
    }
    let certificate = match verify_decrease(tree) {
        Ok(c) => CertificateReport {
            ok: true,
            links: c
                .links
                .iter()
                .map(|l| LinkReport { parent: l.parent, child: l.child, before: l.before.v, after: l.after.v, strict: l.strict })
                .collect(),
            violation: None,
        },
        Err(e) => CertificateReport { ok: false, links: Vec::new(), violation: Some(e.to_string()) },
    };
    TreeReport { name, nodes, depth: tree.depth(), resolved: tree.is_resolved(), transcript, certificate }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn class_text(out: &mut String, label: &str, c: &ClassReport) {
    let _ = writeln!(
        out,
        "{label}: {} configuration, #i = {}, h = {:?}, m = {:?}, Δ = ({}, {}), C = {}, main face ω = {:?}, μ = {}",
        c.configuration, c.incidence, c.higher_vertex, c.main_vertex, c.delta[0].exact, c.delta[1].exact, c.c.exact, c.main_weight, c.main_order
    );
}

fn invariant_text(out: &mut String, i: &InvariantJson) {
    let scaled: Vec<&str> = i.scaled.iter().map(|r| r.exact.as_str()).collect();
    let _ = writeln!(out, "virtual height: {}", i.virtual_height);
    let _ = writeln!(out, "inv = {:?} (λ {:?}: [{}])", i.inv, i.lambda, scaled.join(", "));
}

pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    if let Some(n) = &r.name {
        let _ = writeln!(out, "{n}");
    }
    let _ = writeln!(out, "field: {}", r.field);
    let _ = writeln!(out, "divisor tags: {:?}", r.divisor.tags);
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "elementary: {}", r.elementary);
    let _ = writeln!(out, "vertices: {:?}", r.vertices);
    if let Some(c) = &r.class {
        class_text(&mut out, "class", c);
    }
    if let Some(s) = r.stable {
        let _ = writeln!(out, "stable: {s}");
    }
    for p in &r.preparation {
        let _ = writeln!(out, "preparation: {p}");
    }
    if let Some(c) = &r.stable_class {
        if Some(c) != r.class.as_ref() {
            class_text(&mut out, "stable class", c);
        }
    }
    if let Some(f) = &r.final_situation {
        let _ = writeln!(out, "final situation: {f}");
    }
    if let Some(i) = &r.invariant {
        invariant_text(&mut out, i);
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    out
}

pub fn tree_text(t: &TreeReport) -> String {
    let mut out = String::new();
    if let Some(n) = &t.name {
        let _ = writeln!(out, "{n}");
    }
    let _ = writeln!(out, "nodes: {}, depth: {}, resolved: {}", t.nodes.len(), t.depth, t.resolved);
    for n in &t.nodes {
        let indent = "  ".repeat(n.depth);
        let step = n
            .step
            .as_ref()
            .map(|s| format!(" [{}{} at ({}, {})]", s.direction, if s.sign > 0 { "+" } else { "-" }, s.point[0].exact, s.point[1].exact))
            .unwrap_or_default();
        let inv = n.invariant.as_ref().map(|i| format!(" inv {:?}", i.inv)).unwrap_or_default();
        let reason = n.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default();
        let generic = if n.generic { " generic" } else { "" };
        let _ = writeln!(out, "{indent}#{}{step}{generic} {}{inv}{reason}", n.id, n.status);
        if let Some(c) = &n.center {
            let _ = writeln!(out, "{indent}  blow up {} with ω = {:?}, μ = {}", c.kind, c.weight, c.order);
        }
    }
    match &t.certificate.violation {
        None => {
            let _ = writeln!(out, "certificate: {} decreasing links", t.certificate.links.len());
        }
        Some(v) => {
            let _ = writeln!(out, "certificate: FAILED, {v}");
        }
    }
    out
}

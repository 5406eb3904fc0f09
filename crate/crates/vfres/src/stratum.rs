//! Stratum files describing bad trees.
//!
//! ```json
//! {
//!   "name": "chain",
//!   "points": [
//!     { "id": "p0", "incidence": [], "inv": [3, 0, 0, 0, 0, 0], "center": "nondivisorial" },
//!     { "id": "p1", "incidence": [1], "inv": [2, 0, 0, 0, 0, 0], "center": "divisorial" }
//!   ],
//!   "edges": [["p0", "p1"]],
//!   "after": { "points": [...], "edges": [...] },
//!   "expect": { "mult": { "length": 1, "inv": [2, 0, 0, 0, 0, 0], "count": 1 } }
//! }
//! ```
//!
//! `after` optionally describes the tree after a blow-up, whose
//! multiplicity must be smaller. `expect` holds either the hand-computed
//! multiplicity or the expected rejection (`"cycle"` or `"index_law"`).

use serde::{Deserialize, Serialize};
use vfres_core::badtree::{verify_mult_decrease, BadTree, CenterKind, Mult, StratumPoint};
use vfres_core::invariant::Invariant;
use vfres_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterJson {
    Divisorial,
    Nondivisorial,
    Point,
}

impl From<CenterJson> for CenterKind {
    fn from(c: CenterJson) -> Self {
        match c {
            CenterJson::Divisorial => CenterKind::Divisorial,
            CenterJson::Nondivisorial => CenterKind::NonDivisorial,
            CenterJson::Point => CenterKind::Point,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub id: String,
    #[serde(default)]
    pub incidence: Vec<u32>,
    pub inv: [u128; 6],
    pub center: CenterJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub points: Vec<PointJson>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultJson {
    pub length: usize,
    pub inv: [u128; 6],
    pub count: usize,
}

impl From<Mult> for MultJson {
    fn from(m: Mult) -> Self {
        MultJson { length: m.length, inv: m.inv.v, count: m.count }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    Cycle,
    IndexLaw,
    Decrease,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Expectation {
    Mult(MultJson),
    Error(Rejection),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Vec<PointJson>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after: Option<TreeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

fn build(points: &[PointJson], edges: &[(String, String)]) -> Result<BadTree, Error> {
    let pts = points
        .iter()
        .map(|p| StratumPoint { id: p.id.clone(), incidence: p.incidence.clone(), inv: Invariant { v: p.inv }, center: p.center.into() })
        .collect();
    BadTree::new(pts, edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<MultJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_after: Option<MultJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decreases: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
    /// Whether the outcome agrees with `expect`, when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expectation: Option<bool>,
}

fn rejection(e: &Error) -> Option<Rejection> {
    match e {
        Error::CycleDetected => Some(Rejection::Cycle),
        Error::IndexLawViolation(_) => Some(Rejection::IndexLaw),
        Error::DecreaseViolation(_) => Some(Rejection::Decrease),
        _ => None,
    }
}

pub fn evaluate(doc: &StratumDocument) -> StratumReport {
    let mut r = StratumReport {
        name: doc.name.clone(),
        mult: None,
        mult_after: None,
        decreases: None,
        error: None,
        rejection: None,
        matches_expectation: None,
    };
    let outcome = (|| -> Result<(), Error> {
        let before = build(&doc.points, &doc.edges)?;
        r.mult = Some(before.mult().into());
        if let Some(a) = &doc.after {
            let after = build(&a.points, &a.edges)?;
            r.mult_after = Some(after.mult().into());
            let ok = verify_mult_decrease(&before, &after);
            r.decreases = Some(ok.is_ok());
            ok?;
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        r.rejection = rejection(&e);
        r.error = Some(e.to_string());
    }
    r.matches_expectation = doc.expect.as_ref().map(|x| match x {
        Expectation::Mult(m) => r.error.is_none() && r.mult.as_ref() == Some(m),
        Expectation::Error(k) => r.rejection == Some(*k),
    });
    r
}

pub fn parse_stratum(text: &str) -> Result<StratumDocument, crate::input::InputError> {
    serde_json::from_str(text).map_err(|e| crate::input::InputError::Parse { line: e.line(), column: e.column(), msg: e.to_string() })
}

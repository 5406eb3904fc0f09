//! The JSON input document.
//!
//! ```json
//! {
//!   "name": "vf-b",
//!   "vector_field": {
//!     "dx": [],
//!     "dy": [[0, 2, 0, 1], [1, 0, 3, 1]],
//!     "dz": [[0, 0, 3, 1, 1]]
//!   },
//!   "divisor": ["x"],
//!   "incidence_tags": [1],
//!   "options": { "max_depth": 32 }
//! }
//! ```
//!
//! A monomial is `[v1, v2, v3, numerator]` or `[v1, v2, v3, numerator,
//! denominator]`; numerators and denominators may be JSON integers or
//! decimal strings for large values.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use vfres_core::blowup::DivisorState;
use vfres_core::{PolyVectorField, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Num::Int(n) => Some(BigInt::from(*n)),
            Num::Text(s) => s.trim().parse().ok(),
        }
    }

    fn from_bigint(n: &BigInt) -> Num {
        match n.to_i64() {
            Some(v) => Num::Int(v),
            None => Num::Text(n.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default)]
    pub dx: Vec<Vec<Num>>,
    #[serde(default)]
    pub dy: Vec<Vec<Num>>,
    #[serde(default)]
    pub dz: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_weight: Option<[i64; 3]>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vector_field: FieldSpec,
    #[serde(default)]
    pub divisor: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence_tags: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    Parse { line: usize, column: usize, msg: String },
    Validation { field: String, msg: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse { line, column, msg } => write!(f, "parse error at line {line}, column {column}: {msg}"),
            InputError::Validation { field, msg } => write!(f, "invalid {field}: {msg}"),
        }
    }
}

impl std::error::Error for InputError {}

fn invalid(field: impl Into<String>, msg: impl Into<String>) -> InputError {
    InputError::Validation { field: field.into(), msg: msg.into() }
}

/// Parses and validates a document.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let doc: InputDocument =
        serde_json::from_str(text).map_err(|e| InputError::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
    doc.validate()?;
    Ok(doc)
}

pub fn emit_input(doc: &InputDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// A validated field together with its divisor, after any relabelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prepared {
    pub vf: PolyVectorField,
    pub divisor: DivisorState,
    /// New coordinate k is old coordinate `relabel[k]`.
    pub relabel: Option<[usize; 3]>,
    pub warnings: Vec<String>,
}

const COMPONENTS: [&str; 3] = ["dx", "dy", "dz"];
const AXES: [&str; 3] = ["x", "y", "z"];

impl InputDocument {
    pub fn validate(&self) -> Result<(), InputError> {
        self.field()?;
        self.axes()?;
        if let Some(w) = self.options.forced_weight {
            if w.iter().any(|&a| a < 0) || w.iter().all(|&a| a == 0) {
                return Err(invalid("options.forced_weight", "entries must be nonnegative and not all zero"));
            }
        }
        Ok(())
    }

    fn entries(&self) -> [&Vec<Vec<Num>>; 3] {
        [&self.vector_field.dx, &self.vector_field.dy, &self.vector_field.dz]
    }

    pub fn field(&self) -> Result<PolyVectorField, InputError> {
        let mut terms = Vec::new();
        for (k, list) in self.entries().into_iter().enumerate() {
            for (j, m) in list.iter().enumerate() {
                let at = format!("vector_field.{}[{j}]", COMPONENTS[k]);
                if m.len() != 4 && m.len() != 5 {
                    return Err(invalid(at, "expected [v1, v2, v3, numerator] or [v1, v2, v3, numerator, denominator]"));
                }
                let mut e = [0i64; 3];
                for i in 0..3 {
                    match &m[i] {
                        Num::Int(v) if *v >= 0 => e[i] = *v,
                        Num::Int(_) => return Err(invalid(at, "negative exponent")),
                        Num::Text(_) => return Err(invalid(at, "exponents must be integers")),
                    }
                }
                let num = m[3].to_bigint().ok_or_else(|| invalid(&at, "numerator is not an integer"))?;
                let den = match m.get(4) {
                    Some(d) => d.to_bigint().ok_or_else(|| invalid(&at, "denominator is not an integer"))?,
                    None => BigInt::one(),
                };
                if !den.is_positive() {
                    return Err(invalid(at, "denominator must be positive"));
                }
                terms.push((k, e, Q::new(num, den)));
            }
        }
        Ok(PolyVectorField::from_terms(terms))
    }

    /// Divisor axes with their tags.
    fn axes(&self) -> Result<Vec<(usize, u32)>, InputError> {
        let mut axes = Vec::new();
        for (j, d) in self.divisor.iter().enumerate() {
            let Some(k) = AXES.iter().position(|a| a == d) else {
                return Err(invalid(format!("divisor[{j}]"), format!("unknown component {d:?}")));
            };
            if axes.contains(&k) {
                return Err(invalid(format!("divisor[{j}]"), format!("component {d} listed twice")));
            }
            axes.push(k);
        }
        let tags: Vec<u32> = match &self.incidence_tags {
            Some(t) => {
                if t.len() != axes.len() {
                    return Err(invalid("incidence_tags", "needs one tag per divisor component"));
                }
                if t.iter().any(|&a| a == 0) {
                    return Err(invalid("incidence_tags", "tags start at 1"));
                }
                let mut s = t.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != t.len() {
                    return Err(invalid("incidence_tags", "tags must be distinct"));
                }
                t.clone()
            }
            None => (1..=axes.len() as u32).collect(),
        };
        Ok(axes.into_iter().zip(tags).collect())
    }

    /// Builds the field and divisor. A divisor {y = 0} alone is renamed to
    /// {x = 0}; a divisor component {z = 0} is rejected.
    pub fn prepare(&self) -> Result<Prepared, InputError> {
        self.validate()?;
        let mut vf = self.field()?;
        let axes = self.axes()?;
        if axes.iter().any(|(k, _)| *k == 2) {
            return Err(invalid("divisor", "a component {z = 0} is not supported; z is reserved for the axis"));
        }
        let mut relabel = None;
        let mut tags = [None; 3];
        for (k, t) in &axes {
            tags[*k] = Some(*t);
        }
        if tags[0].is_none() && tags[1].is_some() {
            let perm = [1, 0, 2];
            vf = vf.permute(perm);
            tags = [tags[1], None, None];
            relabel = Some(perm);
        }
        let mut upsilon: Vec<u32> = tags.iter().flatten().copied().collect();
        upsilon.sort_unstable_by(|a, b| b.cmp(a));
        let divisor = DivisorState { upsilon, tags };
        let mut warnings = Vec::new();
        if vf.is_zero() {
            warnings.push("the vector field is zero".to_string());
        } else if vf.monomial_content() != [0, 0, 0] {
            warnings.push(format!("the field is not reduced: x^a y^b z^c with (a, b, c) = {:?} divides every coefficient", vf.monomial_content()));
        }
        for (k, t) in tags.iter().enumerate() {
            if t.is_some() && vf.c[k].terms().any(|(e, _)| e[k] == 0) {
                warnings.push(format!("the divisor component {{{} = 0}} is not invariant", AXES[k]));
            }
        }
        Ok(Prepared { vf, divisor, relabel, warnings })
    }

    /// Document for a field; coefficients keep exact values.
    pub fn from_field(name: Option<&str>, vf: &PolyVectorField, divisor: &[&str]) -> InputDocument {
        let mut spec = FieldSpec::default();
        for k in 0..3 {
            let list: Vec<Vec<Num>> = vf.c[k]
                .terms()
                .map(|(e, a)| {
                    let mut m = vec![Num::Int(e[0]), Num::Int(e[1]), Num::Int(e[2]), Num::from_bigint(a.numer())];
                    if !a.denom().is_one() {
                        m.push(Num::from_bigint(a.denom()));
                    }
                    m
                })
                .collect();
            match k {
                0 => spec.dx = list,
                1 => spec.dy = list,
                _ => spec.dz = list,
            }
        }
        InputDocument {
            name: name.map(str::to_string),
            vector_field: spec,
            divisor: divisor.iter().map(|s| s.to_string()).collect(),
            incidence_tags: None,
            options: Options::default(),
        }
    }
}

//! Re-checks the decrease certificate stored in a tree report.

use std::collections::BTreeMap;

use vfres_core::driver::link_decreases;
use vfres_core::invariant::Invariant;

use crate::report::{NodeReport, TreeReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    Malformed(String),
    Decrease { parent: usize, child: usize, before: [u128; 6], after: [u128; 6] },
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Malformed(m) => write!(f, "malformed tree: {m}"),
            VerifyError::Decrease { parent, child, before, after } => {
                write!(f, "invariant did not decrease from node {parent} {before:?} to node {child} {after:?}")
            }
        }
    }
}

/// Number of checked links.
pub fn verify_report(t: &TreeReport) -> Result<usize, VerifyError> {
    let by_id: BTreeMap<usize, &NodeReport> = t.nodes.iter().map(|n| (n.id, n)).collect();
    if by_id.len() != t.nodes.len() {
        return Err(VerifyError::Malformed("duplicate node id".into()));
    }
    let mut links = 0;
    for n in &t.nodes {
        let Some(pid) = n.parent else { continue };
        let p = by_id.get(&pid).ok_or_else(|| VerifyError::Malformed(format!("node {} names a missing parent {pid}", n.id)))?;
        if !p.children.contains(&n.id) {
            return Err(VerifyError::Malformed(format!("node {pid} does not list child {}", n.id)));
        }
        if n.depth != p.depth + 1 {
            return Err(VerifyError::Malformed(format!("node {} has depth {} under depth {}", n.id, n.depth, p.depth)));
        }
        let (Some(a), Some(b)) = (&p.invariant, &n.invariant) else { continue };
        let (before, after) = (Invariant { v: a.inv }, Invariant { v: b.inv });
        if !link_decreases(p.off_divisor.is_some(), &before, &after) {
            return Err(VerifyError::Decrease { parent: pid, child: n.id, before: a.inv, after: b.inv });
        }
        links += 1;
    }
    Ok(links)
}

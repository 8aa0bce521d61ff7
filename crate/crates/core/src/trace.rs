//! Operation log emitted by the extension driver.
//!
//! Each step names the operation, the case that issued it, the edges it
//! touched and the colors it assigned (`0` means "uncolored"). Steps whose
//! `colors` is non-empty are assignments with one color per edge; steps with
//! empty `colors` only change bookkeeping (for example membership of the
//! reserved matching) and leave the coloring alone. Replaying the assignment
//! steps in order reproduces the emitted coloring.

use serde::{Deserialize, Serialize};

use crate::coloring::PartialEdgeColoring;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub op: String,
    pub case: Option<String>,
    pub edges: Vec<usize>,
    pub colors: Vec<u32>,
    pub e1_size: usize,
    pub e2_size: usize,
}

impl TraceStep {
    pub fn bookkeeping(op: &str, case: Option<&str>, edges: &[EdgeId]) -> Self {
        TraceStep {
            op: op.to_string(),
            case: case.map(str::to_string),
            edges: edges.iter().map(|e| e.0).collect(),
            colors: Vec::new(),
            e1_size: 0,
            e2_size: 0,
        }
    }

    pub fn is_assignment(&self) -> bool {
        !self.colors.is_empty()
    }
}

/// Assignment step recording every edge whose color differs between `before` and `after`.
pub fn diff_step(
    op: &str,
    case: Option<&str>,
    before: &PartialEdgeColoring,
    after: &PartialEdgeColoring,
) -> TraceStep {
    let slots = before.slots().max(after.slots());
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    for i in 0..slots {
        let e = EdgeId(i);
        let (old, new) = (before.get(e), after.get(e));
        if old != new {
            edges.push(i);
            colors.push(new.unwrap_or(0));
        }
    }
    TraceStep {
        op: op.to_string(),
        case: case.map(str::to_string),
        edges,
        colors,
        e1_size: 0,
        e2_size: 0,
    }
}

/// Replays the assignment steps of a trace onto an uncolored graph.
pub fn replay(g: &Multigraph, palette: u32, steps: &[TraceStep]) -> Result<PartialEdgeColoring> {
    let mut c = PartialEdgeColoring::new(palette, g.edge_slots());
    for (n, step) in steps.iter().enumerate() {
        if !step.is_assignment() {
            continue;
        }
        if step.colors.len() != step.edges.len() {
            return Err(Error::input(format!(
                "trace step {n} ({}) has {} edges but {} colors",
                step.op,
                step.edges.len(),
                step.colors.len()
            )));
        }
        for (&e, &col) in step.edges.iter().zip(&step.colors) {
            let e = EdgeId(e);
            if e.0 >= g.edge_slots() {
                return Err(Error::input(format!("trace step {n} names unknown edge {e}")));
            }
            if col > palette {
                return Err(Error::input(format!(
                    "trace step {n} uses color {col} outside palette 1..={palette}"
                )));
            }
            c.set(e, (col != 0).then_some(col));
        }
    }
    Ok(c)
}

pub fn to_json(steps: &[TraceStep]) -> String {
    serde_json::to_string_pretty(steps).expect("trace steps serialize")
}

pub fn from_json(text: &str) -> Result<Vec<TraceStep>> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("bad trace json: {e}")))
}

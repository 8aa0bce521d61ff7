//! Multi-fans, linear sequences and shifting.

use std::collections::{BTreeMap, VecDeque};

use crate::coloring::{missing_colors, Color, ColorSet, PartialEdgeColoring};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Multigraph, Vertex, VertexSet};

/// A multi-fan at `center`. `entries[0]` is the anchor `(e0, y0)`; every later
/// entry `(ei, yi)` has `c(ei)` missing at some earlier fan vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFan {
    pub center: Vertex,
    pub entries: Vec<(EdgeId, Vertex)>,
    pub forbidden: Option<Color>,
}

impl MultiFan {
    pub fn anchor(&self) -> EdgeId {
        self.entries[0].0
    }

    pub fn start(&self) -> Vertex {
        self.entries[0].1
    }

    /// Fan vertices other than the center, in order of first appearance.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut seen = VertexSet::new();
        self.entries
            .iter()
            .filter(|(_, y)| seen.insert(*y))
            .map(|&(_, y)| y)
            .collect()
    }

    /// `V(F)` including the center.
    pub fn vertex_set(&self) -> VertexSet {
        let mut vs: VertexSet = self.entries.iter().map(|&(_, y)| y).collect();
        vs.insert(self.center);
        vs
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        self.entries.iter().map(|&(e, _)| e).collect()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v == self.center || self.entries.iter().any(|&(_, y)| y == v)
    }

    /// Number of fan edges joining the center to `y`.
    pub fn edges_to(&self, y: Vertex) -> usize {
        self.entries.iter().filter(|&&(_, z)| z == y).count()
    }
}

/// Grows a maximal multi-fan at `x` from the anchor `e`, adding the smallest
/// eligible edge id first. With `forbidden = Some(i)` no `i`-edge is added.
pub fn build_multifan(
    g: &Multigraph,
    c: &PartialEdgeColoring,
    x: Vertex,
    e: EdgeId,
    forbidden: Option<Color>,
) -> Result<MultiFan> {
    let (a, b) = g
        .endpoints(e)
        .map_err(|_| Error::input(format!("anchor {e} is not an edge of the graph")))?;
    if a != x && b != x {
        return Err(Error::input(format!("anchor {e} is not incident to {x}")));
    }
    let mut fan = MultiFan {
        center: x,
        entries: vec![(e, g.other_end(e, x))],
        forbidden,
    };
    let mut available: ColorSet = missing_colors(g, c, fan.start());
    loop {
        let next = g.incident(x).iter().copied().find(|&f| {
            !fan.entries.iter().any(|&(h, _)| h == f)
                && c.get(f)
                    .is_some_and(|col| Some(col) != forbidden && available.contains(&col))
        });
        let Some(f) = next else { break };
        let y = g.other_end(f, x);
        available.extend(missing_colors(g, c, y));
        fan.entries.push((f, y));
    }
    Ok(fan)
}

/// `(y0, e1, y1, .., es, ys)` at `center`: distinct vertices and edges with
/// `c(et)` missing at `y(t-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSequence {
    pub center: Vertex,
    pub start: Vertex,
    pub steps: Vec<(EdgeId, Vertex)>,
}

impl LinearSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> Vertex {
        self.steps.last().map_or(self.start, |&(_, y)| y)
    }

    /// `V(S)` without the center.
    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|&(_, y)| y))
            .collect()
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        self.steps.iter().map(|&(e, _)| e).collect()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.start == v || self.steps.iter().any(|&(_, y)| y == v)
    }

    /// Position of `v` in the vertex list (`0` for the start).
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices().iter().position(|&w| w == v)
    }

    /// The initial part ending at `v`.
    pub fn prefix_to(&self, v: Vertex) -> Option<LinearSequence> {
        let p = self.position(v)?;
        Some(LinearSequence {
            center: self.center,
            start: self.start,
            steps: self.steps[..p].to_vec(),
        })
    }

    /// The final part starting at `v`.
    pub fn suffix_from(&self, v: Vertex) -> Option<LinearSequence> {
        let p = self.position(v)?;
        Some(LinearSequence {
            center: self.center,
            start: v,
            steps: self.steps[p..].to_vec(),
        })
    }

    /// Checks the defining property against `c` in `g`.
    pub fn is_valid(&self, g: &Multigraph, c: &PartialEdgeColoring) -> bool {
        let vs = self.vertices();
        let distinct_v = vs.iter().copied().collect::<VertexSet>().len() == vs.len();
        let es = self.edges();
        let distinct_e = es.iter().collect::<std::collections::BTreeSet<_>>().len() == es.len();
        distinct_v
            && distinct_e
            && self.steps.iter().enumerate().all(|(t, &(e, y))| {
                g.contains_edge(e)
                    && g.ends(e) == (self.center.min(y), self.center.max(y))
                    && c.get(e).is_some_and(|col| missing_colors(g, c, vs[t]).contains(&col))
            })
    }
}

/// Shortest linear sequence from the fan start to `target` using fan edges.
pub fn linear_sequence_to(
    g: &Multigraph,
    c: &PartialEdgeColoring,
    f: &MultiFan,
    target: Vertex,
) -> Result<LinearSequence> {
    if target == f.center || !f.contains_vertex(target) {
        return Err(Error::input(format!("vertex {target} is not on the fan")));
    }
    linear_sequence_filtered(g, c, f, target, |_| true, |_| true)
        .ok_or_else(|| Error::defect(format!("fan vertex {target} has no linear sequence")))
}

/// Shortest linear sequence to `target` whose edges satisfy `edge_ok` and
/// whose vertices (including the start) satisfy `vertex_ok`. Ties between
/// equally short sequences go to earlier fan entries.
pub fn linear_sequence_filtered(
    g: &Multigraph,
    c: &PartialEdgeColoring,
    f: &MultiFan,
    target: Vertex,
    edge_ok: impl Fn(EdgeId) -> bool,
    vertex_ok: impl Fn(Vertex) -> bool,
) -> Option<LinearSequence> {
    let start = f.start();
    if !vertex_ok(start) {
        return None;
    }
    let mut parent: BTreeMap<Vertex, (EdgeId, Vertex)> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut reached = VertexSet::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == target {
            break;
        }
        let miss = missing_colors(g, c, v);
        for &(e, y) in &f.entries[1..] {
            if reached.contains(&y) || !edge_ok(e) || !vertex_ok(y) {
                continue;
            }
            if c.get(e).is_some_and(|col| miss.contains(&col)) {
                reached.insert(y);
                parent.insert(y, (e, v));
                queue.push_back(y);
            }
        }
    }
    if !reached.contains(&target) {
        return None;
    }
    let mut steps = Vec::new();
    let mut at = target;
    while at != start {
        let (e, prev) = parent[&at];
        steps.push((e, at));
        at = prev;
    }
    steps.reverse();
    Some(LinearSequence {
        center: f.center,
        start,
        steps,
    })
}

/// For `from <= t < to` (1-based), `e_t` takes the prior color of `e_(t+1)`.
/// `e_to` keeps its color, so the result is flagged improper.
pub fn shift(
    c: &PartialEdgeColoring,
    s: &LinearSequence,
    from: usize,
    to: usize,
) -> Result<PartialEdgeColoring> {
    if from < 1 || from >= to || to > s.len() {
        return Err(Error::input(format!(
            "shift range {from}..{to} invalid for a sequence of length {}",
            s.len()
        )));
    }
    let mut out = c.clone();
    for t in from..to {
        let next = c.get(s.steps[t].0);
        out.set(s.steps[t - 1].0, next);
    }
    out.flag_improper();
    Ok(out)
}

/// Rotates colors toward the anchor: the anchor takes `c(e1)`, each `e_t`
/// takes `c(e_(t+1))` and the last edge is uncolored. An empty sequence
/// leaves `c` unchanged.
pub fn rotate_from_anchor(c: &PartialEdgeColoring, anchor: EdgeId, s: &LinearSequence) -> PartialEdgeColoring {
    let mut out = c.clone();
    let mut prev = anchor;
    for &(e, _) in &s.steps {
        out.set(prev, c.get(e));
        prev = e;
    }
    if !s.steps.is_empty() {
        out.uncolor(prev);
    }
    out
}

/// Distinct fan vertices `z` other than the center and `y0` with
/// `d_g(z) = delta` and `e_g(center, z) = mu`.
pub fn saturated_fan_vertices(g: &Multigraph, f: &MultiFan, delta: usize, mu: usize) -> Vec<Vertex> {
    f.vertices()
        .into_iter()
        .filter(|&z| z != f.start() && g.degree(z) == delta && g.multiplicity(f.center, z) == mu)
        .collect()
}

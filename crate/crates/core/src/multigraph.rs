//! Loop-free multigraphs with individually identified parallel edges.
//!
//! Edge ids are dense and assigned in insertion order. Removing an edge
//! tombstones its id; the id is never reused, and [`Multigraph::restore_edge`]
//! brings the same edge back. This keeps colorings (indexed by edge id)
//! and operation traces meaningful across subgraph views.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Path length between vertices or edges; `Infinite` when disconnected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct EdgeSlot {
    ends: (Vertex, Vertex),
    live: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Multigraph {
    slots: Vec<EdgeSlot>,
    // sorted by edge id
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            slots: Vec::new(),
            incidence: vec![Vec::new(); vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Number of ids ever handed out, live or not. Colorings are sized by this.
    pub fn edge_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn edge_count(&self) -> usize {
        self.slots.iter().filter(|s| s.live).count()
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::input(format!("loop at vertex {u}")));
        }
        let id = EdgeId(self.slots.len());
        self.slots.push(EdgeSlot {
            ends: (u.min(v), u.max(v)),
            live: true,
        });
        self.incidence[u].push(id);
        self.incidence[v].push(id);
        Ok(id)
    }

    pub fn add_parallel(&mut self, u: Vertex, v: Vertex, mult: usize) -> Result<Vec<EdgeId>> {
        (0..mult).map(|_| self.add_edge(u, v)).collect()
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(Vertex, Vertex)> {
        let (u, v) = self.endpoints(e)?;
        self.slots[e.0].live = false;
        self.incidence[u].retain(|&x| x != e);
        self.incidence[v].retain(|&x| x != e);
        Ok((u, v))
    }

    /// Re-inserts a previously removed edge under its original id.
    pub fn restore_edge(&mut self, e: EdgeId) -> Result<()> {
        let slot = self
            .slots
            .get_mut(e.0)
            .ok_or_else(|| Error::input(format!("unknown edge {e}")))?;
        if slot.live {
            return Ok(());
        }
        slot.live = true;
        let (u, v) = slot.ends;
        for w in [u, v] {
            let pos = self.incidence[w].partition_point(|&x| x < e);
            self.incidence[w].insert(pos, e);
        }
        Ok(())
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.slots.get(e.0).is_some_and(|s| s.live)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(Vertex, Vertex)> {
        match self.slots.get(e.0) {
            Some(s) if s.live => Ok(s.ends),
            _ => Err(Error::input(format!("unknown edge {e}"))),
        }
    }

    /// Endpoints of any edge id ever issued, live or tombstoned.
    ///
    /// Panics on an id that was never issued.
    pub fn ends(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.slots[e.0].ends
    }

    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.ends(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_incident(&self, e: EdgeId, v: Vertex) -> bool {
        let (a, b) = self.ends(e);
        a == v || b == v
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.live)
            .map(|(i, _)| EdgeId(i))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (Vertex, Vertex))> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.live)
            .map(|(i, s)| (EdgeId(i), s.ends))
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges_between(&self, u: Vertex, v: Vertex) -> Vec<EdgeId> {
        self.incidence[u]
            .iter()
            .copied()
            .filter(|&e| self.other_end(e, u) == v && u != v)
            .collect()
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        if u == v {
            return 0;
        }
        self.incidence[u]
            .iter()
            .filter(|&&e| self.other_end(e, u) == v)
            .count()
    }

    pub fn max_multiplicity(&self) -> usize {
        let mut best = 0;
        for u in self.vertices() {
            let mut counts = std::collections::BTreeMap::new();
            for &e in &self.incidence[u] {
                *counts.entry(self.other_end(e, u)).or_insert(0usize) += 1;
            }
            best = best.max(counts.values().copied().max().unwrap_or(0));
        }
        best
    }

    pub fn neighbors(&self, v: Vertex) -> VertexSet {
        self.incidence[v]
            .iter()
            .map(|&e| self.other_end(e, v))
            .collect()
    }

    /// Copy of the graph with the given edges tombstoned.
    pub fn without_edges<I: IntoIterator<Item = EdgeId>>(&self, removed: I) -> Multigraph {
        let mut g = self.clone();
        for e in removed {
            if g.contains_edge(e) {
                g.remove_edge(e).expect("edge is live");
            }
        }
        g
    }

    /// Copy of the graph keeping only edges with both ends in `x`. The vertex
    /// numbering is unchanged; vertices outside `x` become isolated.
    pub fn induced(&self, x: &VertexSet) -> Multigraph {
        let outside: Vec<EdgeId> = self
            .edges()
            .filter(|(_, (u, v))| !(x.contains(u) && x.contains(v)))
            .map(|(e, _)| e)
            .collect();
        self.without_edges(outside)
    }

    /// Edges of `self` with both ends in `x`, ascending.
    pub fn induced_edges(&self, x: &VertexSet) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, (u, v))| x.contains(u) && x.contains(v))
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_matching<'a, I: IntoIterator<Item = &'a EdgeId>>(&self, edges: I) -> bool {
        let mut seen = VertexSet::new();
        for &e in edges {
            let (u, v) = self.ends(e);
            if !seen.insert(u) || !seen.insert(v) {
                return false;
            }
        }
        true
    }

    /// Breadth-first distances from a set of sources.
    pub fn distances_from(&self, sources: &[Vertex]) -> Vec<Distance> {
        let mut dist = vec![Distance::Infinite; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == Distance::Infinite {
                dist[s] = Distance::Finite(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let Distance::Finite(d) = dist[v] else {
                unreachable!()
            };
            for &e in &self.incidence[v] {
                let w = self.other_end(e, v);
                if dist[w] == Distance::Infinite {
                    dist[w] = Distance::Finite(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {v} out of range 0..{}",
                self.vertex_count()
            )))
        }
    }
}

/// A set of edge ids known to exist in some host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    ids: BTreeSet<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(g: &Multigraph, ids: I) -> Result<Self> {
        let ids: BTreeSet<EdgeId> = ids.into_iter().collect();
        if let Some(bad) = ids.iter().find(|&&e| !g.contains_edge(e)) {
            return Err(Error::input(format!("unknown edge {bad}")));
        }
        Ok(EdgeSet { ids })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.ids.contains(&e)
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.ids.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.ids.remove(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ids.iter().copied()
    }

    pub fn ids(&self) -> &BTreeSet<EdgeId> {
        &self.ids
    }

    pub fn vertices(&self, g: &Multigraph) -> VertexSet {
        self.ids
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.ends(e);
                [u, v]
            })
            .collect()
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a EdgeId;
    type IntoIter = std::collections::btree_set::Iter<'a, EdgeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.ids.iter()
    }
}

/// Length of a shortest path joining an endvertex of `e` to an endvertex of `f`.
pub fn edge_distance(g: &Multigraph, e: EdgeId, f: EdgeId) -> Result<Distance> {
    let (a, b) = g.endpoints(e)?;
    let (c, d) = g.endpoints(f)?;
    if e == f {
        return Err(Error::input(format!("edge distance of {e} to itself")));
    }
    let dist = g.distances_from(&[a, b]);
    Ok(dist[c].min(dist[d]))
}

pub fn is_distance_t_matching(g: &Multigraph, m: &EdgeSet, t: usize) -> Result<bool> {
    let ids: Vec<EdgeId> = m.iter().collect();
    for &e in &ids {
        g.endpoints(e)?;
    }
    for (i, &e) in ids.iter().enumerate() {
        for &f in &ids[i + 1..] {
            if edge_distance(g, e, f)? < Distance::Finite(t) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Edges with exactly one endpoint in `x`.
pub fn boundary(g: &Multigraph, x: &VertexSet) -> EdgeSet {
    EdgeSet {
        ids: g
            .edges()
            .filter(|(_, (u, v))| x.contains(u) != x.contains(v))
            .map(|(e, _)| e)
            .collect(),
    }
}

/// Diameter of the subgraph induced by `x`.
pub fn diameter(g: &Multigraph, x: &VertexSet) -> Distance {
    let h = g.induced(x);
    let mut best = Distance::Finite(0);
    for &s in x {
        let dist = h.distances_from(&[s]);
        for &t in x {
            best = best.max(dist[t]);
        }
    }
    best
}

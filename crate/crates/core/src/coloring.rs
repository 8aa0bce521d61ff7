//! Partial edge colorings, present/missing color sets, Kempe chains and the
//! color-class renaming used to glue a coloring of a dense subgraph onto a
//! coloring of the rest of the graph.
//!
//! A [`PartialEdgeColoring`] is a plain edge-id indexed table. It knows
//! nothing about which graph it colors; every query takes the graph as an
//! argument, so the same table can be read through a subgraph view (which is
//! how restrictions such as "the coloring restricted to H" are expressed).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::multigraph::{boundary, EdgeId, Multigraph, Vertex, VertexSet};

pub type Color = u32;
pub type ColorSet = BTreeSet<Color>;

#[derive(Clone, Debug, Eq)]
pub struct PartialEdgeColoring {
    palette: u32,
    colors: Vec<Option<Color>>,
    flagged_improper: bool,
}

impl PartialEq for PartialEdgeColoring {
    fn eq(&self, other: &Self) -> bool {
        if self.palette != other.palette {
            return false;
        }
        let n = self.colors.len().max(other.colors.len());
        (0..n).all(|i| self.get(EdgeId(i)) == other.get(EdgeId(i)))
    }
}

impl PartialEdgeColoring {
    /// All edges uncolored; `slots` is normally [`Multigraph::edge_slots`].
    pub fn new(palette: u32, slots: usize) -> Self {
        PartialEdgeColoring {
            palette,
            colors: vec![None; slots],
            flagged_improper: false,
        }
    }

    pub fn for_graph(g: &Multigraph, palette: u32) -> Self {
        Self::new(palette, g.edge_slots())
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn with_palette(mut self, palette: u32) -> Self {
        self.palette = palette;
        self
    }

    pub fn slots(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors.get(e.0).copied().flatten()
    }

    /// Sets or clears the color of `e`.
    ///
    /// Panics when the color is `0` or above the palette.
    pub fn set(&mut self, e: EdgeId, c: Option<Color>) {
        if let Some(col) = c {
            assert!(
                (1..=self.palette).contains(&col),
                "color {col} outside palette 1..={}",
                self.palette
            );
        }
        if e.0 >= self.colors.len() {
            self.colors.resize(e.0 + 1, None);
        }
        self.colors[e.0] = c;
    }

    pub fn uncolor(&mut self, e: EdgeId) {
        self.set(e, None);
    }

    pub fn is_flagged_improper(&self) -> bool {
        self.flagged_improper
    }

    pub(crate) fn flag_improper(&mut self) {
        self.flagged_improper = true;
    }

    /// Recomputes the improper flag against `g`.
    pub fn revalidate(&mut self, g: &Multigraph) -> bool {
        let ok = verify_proper(g, self).proper;
        self.flagged_improper = !ok;
        ok
    }

    /// Colored live edges of `g`, ascending by id.
    pub fn colored_edges<'a>(
        &'a self,
        g: &'a Multigraph,
    ) -> impl Iterator<Item = (EdgeId, Color)> + 'a {
        g.edge_ids().filter_map(|e| self.get(e).map(|c| (e, c)))
    }

    pub fn is_total_on(&self, g: &Multigraph) -> bool {
        g.edge_ids().all(|e| self.get(e).is_some())
    }

    /// Colors actually used on live edges of `g`.
    pub fn used_colors(&self, g: &Multigraph) -> ColorSet {
        self.colored_edges(g).map(|(_, c)| c).collect()
    }

    /// Copy keeping only the colors of edges live in `g`.
    pub fn restricted_to(&self, g: &Multigraph) -> Self {
        let mut out = PartialEdgeColoring::new(self.palette, self.colors.len());
        for (e, c) in self.colored_edges(g) {
            out.colors[e.0] = Some(c);
        }
        out
    }
}

pub fn present_colors(g: &Multigraph, c: &PartialEdgeColoring, v: Vertex) -> ColorSet {
    g.incident(v).iter().filter_map(|&e| c.get(e)).collect()
}

pub fn missing_colors(g: &Multigraph, c: &PartialEdgeColoring, v: Vertex) -> ColorSet {
    let present = present_colors(g, c, v);
    (1..=c.palette())
        .filter(|col| !present.contains(col))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub proper: bool,
    /// Pairs `(e, f)` with `e < f`, sorted.
    pub conflicts: Vec<(EdgeId, EdgeId)>,
}

pub fn verify_proper(g: &Multigraph, c: &PartialEdgeColoring) -> ProperReport {
    let mut conflicts = BTreeSet::new();
    for v in g.vertices() {
        let mut by_color: BTreeMap<Color, Vec<EdgeId>> = BTreeMap::new();
        for &e in g.incident(v) {
            if let Some(col) = c.get(e) {
                by_color.entry(col).or_default().push(e);
            }
        }
        for edges in by_color.values() {
            for (i, &e) in edges.iter().enumerate() {
                for &f in &edges[i + 1..] {
                    conflicts.insert((e.min(f), e.max(f)));
                }
            }
        }
    }
    ProperReport {
        proper: conflicts.is_empty(),
        conflicts: conflicts.into_iter().collect(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSetFlags {
    pub elementary: bool,
    pub closed: bool,
    pub strongly_closed: bool,
    pub diagnostics: Vec<String>,
}

/// Elementary / closed / strongly closed status of `x` under `c`.
///
/// Missing sets are taken in `g` itself; to test elementarity of the
/// restriction to a subgraph, pass the subgraph view.
pub fn classify_vertex_set(g: &Multigraph, c: &PartialEdgeColoring, x: &VertexSet) -> VertexSetFlags {
    let mut flags = VertexSetFlags {
        elementary: true,
        closed: true,
        strongly_closed: true,
        diagnostics: Vec::new(),
    };

    let mut owner: BTreeMap<Color, Vertex> = BTreeMap::new();
    for &v in x {
        for col in missing_colors(g, c, v) {
            if let Some(&u) = owner.get(&col) {
                if flags.elementary {
                    flags
                        .diagnostics
                        .push(format!("color {col} missing at both {u} and {v}"));
                }
                flags.elementary = false;
            } else {
                owner.insert(col, v);
            }
        }
    }

    let mut seen: BTreeMap<Color, EdgeId> = BTreeMap::new();
    for e in boundary(g, x).iter() {
        let Some(col) = c.get(e) else {
            flags.closed = false;
            flags.diagnostics.push(format!("boundary edge {e} is uncolored"));
            continue;
        };
        if let Some(&v) = x.iter().find(|&&v| !present_colors(g, c, v).contains(&col)) {
            flags.closed = false;
            flags
                .diagnostics
                .push(format!("boundary color {col} (edge {e}) missing at {v}"));
        }
        if let Some(&f) = seen.get(&col) {
            flags.strongly_closed = false;
            flags
                .diagnostics
                .push(format!("boundary edges {f} and {e} share color {col}"));
        } else {
            seen.insert(col, e);
        }
    }
    flags.strongly_closed &= flags.closed;
    flags
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainShape {
    Path,
    Cycle,
}

/// A component of the subgraph formed by the edges colored with one of two colors.
///
/// For a path, `vertices` has one more entry than `edges` and `edges[i]`
/// joins `vertices[i]` and `vertices[i + 1]`. For a cycle the last edge
/// closes back onto `vertices[0]`. Paths start at their smaller endvertex;
/// cycles start at their smallest vertex and leave it along the smaller edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KempeChain {
    pub colors: (Color, Color),
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
    pub shape: ChainShape,
}

impl KempeChain {
    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn endvertices(&self) -> Option<(Vertex, Vertex)> {
        match self.shape {
            ChainShape::Path => Some((self.vertices[0], *self.vertices.last().unwrap())),
            ChainShape::Cycle => None,
        }
    }

    /// Of `first` and `second`, whichever is reached first when walking a
    /// path chain from endvertex `from`.
    pub fn meets_first(&self, from: Vertex, first: Vertex, second: Vertex) -> Option<Vertex> {
        let order: Vec<Vertex> = if self.vertices.first() == Some(&from) {
            self.vertices.clone()
        } else if self.vertices.last() == Some(&from) {
            self.vertices.iter().rev().copied().collect()
        } else {
            return None;
        };
        order.into_iter().find(|&v| v == first || v == second)
    }
}

fn chain_edge(g: &Multigraph, c: &PartialEdgeColoring, v: Vertex, col: Color) -> Result<Option<EdgeId>> {
    let mut hits = g.incident(v).iter().copied().filter(|&e| c.get(e) == Some(col));
    let first = hits.next();
    if hits.next().is_some() {
        return Err(Error::input(format!(
            "coloring is not proper at vertex {v} in color {col}"
        )));
    }
    Ok(first)
}

/// The (alpha, beta)-chain containing `v`.
pub fn kempe_chain(
    g: &Multigraph,
    c: &PartialEdgeColoring,
    v: Vertex,
    alpha: Color,
    beta: Color,
) -> Result<KempeChain> {
    if alpha == beta {
        return Err(Error::input("kempe chain needs two distinct colors"));
    }
    if v >= g.vertex_count() {
        return Err(Error::input(format!("unknown vertex {v}")));
    }
    let other = |col: Color| if col == alpha { beta } else { alpha };

    // Walk from v along alpha first; either close a cycle or stop at an end.
    let mut end = v;
    let mut cur = v;
    let mut want = alpha;
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut is_cycle = false;
    loop {
        let Some(e) = chain_edge(g, c, cur, want)? else {
            break;
        };
        if !used.insert(e) {
            is_cycle = true;
            break;
        }
        cur = g.other_end(e, cur);
        want = other(want);
        if cur == v && chain_edge(g, c, v, want)?.is_some_and(|f| used.contains(&f)) {
            is_cycle = true;
            break;
        }
        end = cur;
    }

    if is_cycle {
        let mut members = used.clone();
        // collect the full cycle from v
        let start = members
            .iter()
            .flat_map(|&e| {
                let (a, b) = g.ends(e);
                [a, b]
            })
            .min()
            .unwrap();
        let first_edge = g
            .incident(start)
            .iter()
            .copied()
            .filter(|e| members.contains(e))
            .min()
            .unwrap();
        let mut vertices = vec![start];
        let mut edges = vec![first_edge];
        members.remove(&first_edge);
        let mut at = g.other_end(first_edge, start);
        let mut want = other(c.get(first_edge).unwrap());
        while at != start {
            vertices.push(at);
            let e = chain_edge(g, c, at, want)?.expect("cycle continues");
            members.remove(&e);
            edges.push(e);
            at = g.other_end(e, at);
            want = other(want);
        }
        return Ok(KempeChain {
            colors: (alpha.min(beta), alpha.max(beta)),
            vertices,
            edges,
            shape: ChainShape::Cycle,
        });
    }

    // `end` is an endvertex unless v itself is one; walk the whole path from it.
    let walk = |from: Vertex| -> Result<(Vec<Vertex>, Vec<EdgeId>)> {
        let mut vertices = vec![from];
        let mut edges = Vec::new();
        let mut at = from;
        let mut next = [alpha, beta]
            .into_iter()
            .find_map(|col| chain_edge(g, c, from, col).ok().flatten());
        while let Some(e) = next {
            edges.push(e);
            let col = c.get(e).unwrap();
            at = g.other_end(e, at);
            vertices.push(at);
            next = chain_edge(g, c, at, other(col))?;
        }
        Ok((vertices, edges))
    };
    let start = if chain_edge(g, c, v, beta)?.is_none() || chain_edge(g, c, v, alpha)?.is_none() {
        v
    } else {
        end
    };
    let (mut vertices, mut edges) = walk(start)?;
    if vertices.last().unwrap() < vertices.first().unwrap() {
        vertices.reverse();
        edges.reverse();
    }
    Ok(KempeChain {
        colors: (alpha.min(beta), alpha.max(beta)),
        vertices,
        edges,
        shape: ChainShape::Path,
    })
}

/// Swaps the two chain colors on the part of `ch` between `a` and `b`.
///
/// On a path with `a`, `b` the two endvertices this is the ordinary Kempe
/// change. When either is interior the result is flagged improper. On a
/// cycle, `a == b` swaps the whole cycle; otherwise the arc from `a` to `b`
/// in chain order is swapped.
pub fn kempe_swap_subchain(
    c: &PartialEdgeColoring,
    ch: &KempeChain,
    a: Vertex,
    b: Vertex,
) -> Result<PartialEdgeColoring> {
    let pos = |v: Vertex| {
        ch.vertices
            .iter()
            .position(|&w| w == v)
            .ok_or_else(|| Error::input(format!("vertex {v} is not on the chain")))
    };
    let (pa, pb) = (pos(a)?, pos(b)?);
    let (lo, hi) = (pa.min(pb), pa.max(pb));
    let (alpha, beta) = ch.colors;
    let range: Vec<EdgeId> = match ch.shape {
        ChainShape::Cycle if a == b => ch.edges.clone(),
        _ => ch.edges[lo..hi].to_vec(),
    };
    let mut out = c.clone();
    for e in range {
        let col = c.get(e);
        let swapped = if col == Some(alpha) {
            beta
        } else if col == Some(beta) {
            alpha
        } else {
            return Err(Error::input(format!("edge {e} is not colored with a chain color")));
        };
        out.set(e, Some(swapped));
    }
    let full = match ch.shape {
        ChainShape::Path => lo == 0 && hi == ch.vertices.len() - 1,
        ChainShape::Cycle => a == b,
    };
    if !full && lo != hi {
        out.flag_improper();
    }
    Ok(out)
}

/// Full Kempe change on `ch`.
pub fn kempe_swap(c: &PartialEdgeColoring, ch: &KempeChain) -> PartialEdgeColoring {
    let (a, b) = match ch.shape {
        ChainShape::Path => ch.endvertices().unwrap(),
        ChainShape::Cycle => (ch.vertices[0], ch.vertices[0]),
    };
    kempe_swap_subchain(c, ch, a, b).expect("endvertices lie on the chain")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeMode {
    Plain,
    /// Keep color class `i` fixed; one `i`-conflict between an edge inside
    /// and an edge on the boundary is tolerated.
    ProtectColor(Color),
}

/// Combines `psi` (a coloring of the edges of `g` inside `h`) with `phi`
/// (a coloring of the remaining edges) by renaming the color classes of
/// `psi` so that every boundary color is missing under the renamed `psi`
/// at the inner endpoint of its boundary edge.
///
/// Among all admissible renamings the lexicographically least permutation
/// (compared as the sequence of images of classes `1, 2, ..`) is used.
pub fn merge_colorings(
    g: &Multigraph,
    h: &VertexSet,
    psi: &PartialEdgeColoring,
    phi: &PartialEdgeColoring,
    mode: MergeMode,
) -> Result<PartialEdgeColoring> {
    let k = psi.palette();
    let inner = g.induced(h);
    if let Some(e) = inner.edge_ids().find(|&e| psi.get(e).is_none()) {
        return Err(Error::input(format!("edge {e} inside the dense subgraph is uncolored")));
    }
    let protected = match mode {
        MergeMode::Plain => None,
        MergeMode::ProtectColor(i) => {
            if !(1..=k).contains(&i) {
                return Err(Error::input(format!("protected color {i} outside 1..={k}")));
            }
            Some(i)
        }
    };

    // boundary color -> inner endpoints that carry it
    let mut demands: BTreeMap<Color, Vec<Vertex>> = BTreeMap::new();
    for e in boundary(g, h).iter() {
        let Some(col) = phi.get(e) else {
            return Err(Error::input(format!("boundary edge {e} is uncolored")));
        };
        if col > k || Some(col) == protected {
            continue;
        }
        let (u, v) = g.ends(e);
        let inside = if h.contains(&u) { u } else { v };
        demands.entry(col).or_default().push(inside);
    }

    let psi_missing: BTreeMap<Vertex, ColorSet> = h
        .iter()
        .map(|&v| (v, missing_colors(&inner, psi, v)))
        .collect();
    // class -> target allowed?
    let allowed = |class: Color, target: Color| -> bool {
        if let Some(i) = protected {
            if (class == i) != (target == i) {
                return false;
            }
        }
        demands
            .get(&target)
            .is_none_or(|vs| vs.iter().all(|v| psi_missing[v].contains(&class)))
    };

    let Some(perm) = least_permutation(k, &allowed) else {
        // capacity failure: report the first vertex whose demand exceeds its supply
        let vertex = h
            .iter()
            .copied()
            .find(|&v| {
                let demand = demands.values().filter(|vs| vs.contains(&v)).count();
                let supply = psi_missing[&v]
                    .iter()
                    .filter(|&&col| Some(col) != protected)
                    .count();
                demand > supply
            })
            .or_else(|| demands.values().flatten().next().copied())
            .unwrap_or_else(|| *h.iter().next().unwrap());
        return Err(Error::Structural {
            vertex,
            reason: "no renaming of color classes matches the boundary colors".into(),
        });
    };

    let palette = psi.palette().max(phi.palette());
    let mut out = PartialEdgeColoring::new(palette, g.edge_slots().max(phi.slots()));
    for (e, col) in phi.colored_edges(g) {
        if !inner.contains_edge(e) {
            out.set(e, Some(col));
        }
    }
    for (e, col) in psi.colored_edges(&inner) {
        out.set(e, Some(perm[(col - 1) as usize]));
    }

    let report = verify_proper(g, &out);
    let tolerated = match protected {
        None => report.proper,
        Some(i) => {
            report.conflicts.len() <= 1
                && report.conflicts.iter().all(|&(e, f)| {
                    out.get(e) == Some(i) && (inner.contains_edge(e) != inner.contains_edge(f))
                })
        }
    };
    if !tolerated {
        let (e, _) = report.conflicts[0];
        let (u, _) = g.ends(e);
        return Err(Error::Structural {
            vertex: u,
            reason: format!("merged coloring has conflicts {:?}", report.conflicts),
        });
    }
    if !report.proper {
        out.flag_improper();
    }
    Ok(out)
}

/// Lexicographically least bijection `class -> target` on `1..=k` respecting `allowed`.
fn least_permutation(k: u32, allowed: &dyn Fn(Color, Color) -> bool) -> Option<Vec<Color>> {
    let k = k as usize;
    let mut perm = vec![0; k];
    let mut used = vec![false; k];
    for class in 0..k {
        let mut chosen = false;
        for target in 0..k {
            if used[target] || !allowed(class as Color + 1, target as Color + 1) {
                continue;
            }
            used[target] = true;
            if completes(k, class + 1, &used, allowed) {
                perm[class] = target as Color + 1;
                chosen = true;
                break;
            }
            used[target] = false;
        }
        if !chosen {
            return None;
        }
    }
    Some(perm)
}

/// Whether classes `from..k` can be matched into the unused targets (Kuhn's algorithm).
fn completes(k: usize, from: usize, used: &[bool], allowed: &dyn Fn(Color, Color) -> bool) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; k];
    fn augment(
        class: usize,
        k: usize,
        used: &[bool],
        allowed: &dyn Fn(Color, Color) -> bool,
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for t in 0..k {
            if used[t] || seen[t] || !allowed(class as Color + 1, t as Color + 1) {
                continue;
            }
            seen[t] = true;
            let free = match owner[t] {
                None => true,
                Some(other) => augment(other, k, used, allowed, owner, seen),
            };
            if free {
                owner[t] = Some(class);
                return true;
            }
        }
        false
    }
    (from..k).all(|class| {
        let mut seen = vec![false; k];
        augment(class, k, used, allowed, &mut owner, &mut seen)
    })
}

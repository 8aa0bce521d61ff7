//! Extending a precolored distance-3 matching `M` to a proper edge coloring
//! with colors `1..=Δ+μ`.
//!
//! With `k = Δ + μ - 1`, the driver first tries a `k`-coloring of `G - M`,
//! moving every edge that clashes with the precoloring to color `Δ + μ`.
//! When `G - M` needs all `Δ + μ` colors it works with a triple
//! `(M*, special, φ)`: a reserve matching `M*` disjoint from `V(M)`, a proper
//! coloring `φ` of `G - (M ∪ M*)` and the set of edges `φ` colors `Δ + μ`.
//! A precolored edge `f` clashes at an endvertex `u` with an edge `f1` of
//! the same color. The clash is of type 1 if `f1` avoids `V(M*)` and of type 2
//! otherwise. Type-1 clashes are cheap: the clashing edges form a matching and
//! can all move to color `Δ + μ` at the end. Type-2 clashes are removed one
//! target at a time by local recolorings inside the dense subgraph that holds
//! the offending reserve edge. Each local recoloring checks its own
//! precondition, and the resulting triple is re-certified. If no recoloring
//! applies, the driver falls back to the brute-force oracle, so an unverified
//! coloring is never returned.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::base_color::{
    is_fully_saturated, k_edge_color, saturated_matching, vizing_gupta_color, DEFAULT_BUDGET,
};
use crate::coloring::{
    kempe_chain, kempe_swap_subchain, merge_colorings, missing_colors, verify_proper, Color,
    MergeMode, PartialEdgeColoring,
};
use crate::density::{is_k_critical_edge, maximal_dense_containing, DenseSubgraph};
use crate::error::{Error, Result};
use crate::fans::{
    build_multifan, linear_sequence_filtered, linear_sequence_to, rotate_from_anchor,
    LinearSequence, MultiFan,
};
use crate::multigraph::{boundary, is_distance_t_matching, EdgeId, EdgeSet, Multigraph, Vertex, VertexSet};
use crate::oracle::{brute_force_extension, verify_extension, ORACLE_BUDGET};
use crate::trace::{diff_step, TraceStep};

/// Colors fixed in advance on a distance-3 matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precoloring {
    matching: EdgeSet,
    colors: BTreeMap<EdgeId, Color>,
    palette: Color,
}

impl Precoloring {
    /// Validates that the edges form a distance-3 matching of `g` and that every
    /// color lies in `1..=Δ+μ`.
    pub fn new<I: IntoIterator<Item = (EdgeId, Color)>>(g: &Multigraph, pairs: I) -> Result<Self> {
        let palette = (g.max_degree() + g.max_multiplicity()) as Color;
        let mut colors = BTreeMap::new();
        for (e, col) in pairs {
            if !g.contains_edge(e) {
                return Err(Error::input(format!("precolored edge {e} is not in the graph")));
            }
            if !(1..=palette).contains(&col) {
                return Err(Error::input(format!(
                    "edge {e} is precolored {col}, outside 1..={palette}"
                )));
            }
            if colors.insert(e, col).is_some() {
                return Err(Error::input(format!("edge {e} is precolored twice")));
            }
        }
        let matching = EdgeSet::from_ids(g, colors.keys().copied())?;
        if !is_distance_t_matching(g, &matching, 3)? {
            return Err(Error::input("precolored edges do not form a distance-3 matching"));
        }
        Ok(Precoloring {
            matching,
            colors,
            palette,
        })
    }

    pub fn matching(&self) -> &EdgeSet {
        &self.matching
    }

    pub fn colors(&self) -> &BTreeMap<EdgeId, Color> {
        &self.colors
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        self.colors.get(&e).copied()
    }

    /// `Δ + μ` of the graph the precoloring was validated against.
    pub fn palette(&self) -> Color {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// The working state `(M*, special, φ)` plus the operations log.
#[derive(Clone, Debug)]
pub struct ExtensionTriple {
    pub mstar: EdgeSet,
    /// Edges of `G - (M ∪ M*)` that `φ` colors `Δ + μ`.
    pub special: EdgeSet,
    pub phi: PartialEdgeColoring,
    pub trace: Vec<TraceStep>,
    recorded: PartialEdgeColoring,
}

impl ExtensionTriple {
    /// Starts a triple whose trace opens with one step assigning `phi`.
    pub fn new(mstar: EdgeSet, special: EdgeSet, phi: PartialEdgeColoring) -> Self {
        let mut t = ExtensionTriple {
            mstar,
            special,
            recorded: PartialEdgeColoring::new(phi.palette(), phi.slots()),
            phi,
            trace: Vec::new(),
        };
        t.commit("initial", None);
        t
    }

    /// Appends the coloring changes since the last commit as one trace step.
    fn commit(&mut self, op: &str, case: Option<&str>) {
        let step = diff_step(op, case, &self.recorded, &self.phi);
        if !step.edges.is_empty() {
            self.trace.push(step);
        }
        self.recorded = self.phi.clone();
    }

    fn note(&mut self, op: &str, case: Option<&str>, edges: &[EdgeId]) {
        self.trace.push(TraceStep::bookkeeping(op, case, edges));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ImproperTag {
    NotImproper,
    T1,
    T2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointStatus {
    pub edge: EdgeId,
    pub vertex: Vertex,
    pub tag: ImproperTag,
    pub colliding: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImproperReport {
    pub e1: EdgeSet,
    pub e2: EdgeSet,
    /// One entry per precolored edge and endvertex, ordered by edge then vertex.
    pub tags: Vec<EndpointStatus>,
}

impl ImproperReport {
    pub fn tag(&self, f: EdgeId, u: Vertex) -> ImproperTag {
        self.tags
            .iter()
            .find(|s| s.edge == f && s.vertex == u)
            .map_or(ImproperTag::NotImproper, |s| s.tag)
    }

    /// The first type-2 clash in `(edge, vertex)` order.
    pub fn first_t2(&self) -> Option<(EdgeId, Vertex)> {
        self.tags
            .iter()
            .find(|s| s.tag == ImproperTag::T2)
            .map(|s| (s.edge, s.vertex))
    }
}

fn rest_graph(g: &Multigraph, p: &Precoloring, t: &ExtensionTriple) -> Multigraph {
    g.without_edges(p.matching().iter().chain(t.mstar.iter()))
}

/// Clashes between the precoloring and `φ`. A clashing edge parallel to `f`
/// counts at both endvertices.
pub fn classify_improper(g: &Multigraph, p: &Precoloring, t: &ExtensionTriple) -> ImproperReport {
    let rest = rest_graph(g, p, t);
    let reserved = t.mstar.vertices(g);
    let mut e1 = EdgeSet::new();
    let mut e2 = EdgeSet::new();
    let mut tags = Vec::new();
    for (&f, &col) in p.colors() {
        let (a, b) = g.ends(f);
        for u in [a, b] {
            let colliding: Vec<EdgeId> = rest
                .incident(u)
                .iter()
                .copied()
                .filter(|&e| t.phi.get(e) == Some(col))
                .collect();
            let mut tag = ImproperTag::NotImproper;
            for &e in &colliding {
                let (x, y) = g.ends(e);
                if reserved.contains(&x) || reserved.contains(&y) {
                    e2.insert(e);
                    tag = ImproperTag::T2;
                } else {
                    e1.insert(e);
                    tag = tag.max(ImproperTag::T1);
                }
            }
            tags.push(EndpointStatus {
                edge: f,
                vertex: u,
                tag,
                colliding,
            });
        }
    }
    ImproperReport { e1, e2, tags }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleStatus {
    InfeasiblePrecondition(String),
    Prefeasible,
    Feasible,
}

impl TripleStatus {
    pub fn is_prefeasible(&self) -> bool {
        !matches!(self, TripleStatus::InfeasiblePrecondition(_))
    }
}

fn unique_dense(rest: &Multigraph, e: EdgeId, k: Color) -> Result<DenseSubgraph> {
    let (x, y) = rest.ends(e);
    let mut found = maximal_dense_containing(rest, k, &VertexSet::from([x, y]))?;
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(Error::precondition(format!(
            "no {k}-dense subgraph contains the ends of reserve edge {e}"
        ))),
        _ => Err(Error::precondition(format!(
            "several maximal {k}-dense subgraphs contain the ends of reserve edge {e}"
        ))),
    }
}

/// Checks the structural conditions on a triple and reports whether any
/// clash with the precoloring remains.
pub fn triple_status(g: &Multigraph, p: &Precoloring, t: &ExtensionTriple) -> TripleStatus {
    match status_inner(g, p, t) {
        Ok(s) => s,
        Err(e) => TripleStatus::InfeasiblePrecondition(e.to_string()),
    }
}

fn status_inner(g: &Multigraph, p: &Precoloring, t: &ExtensionTriple) -> Result<TripleStatus> {
    use TripleStatus::InfeasiblePrecondition as Bad;
    let delta = g.max_degree();
    let mu = g.max_multiplicity();
    let top = (delta + mu) as Color;
    let k = top - 1;
    let ms: Vec<EdgeId> = t.mstar.iter().collect();
    if ms.iter().any(|&e| !g.contains_edge(e) || p.matching().contains(e)) {
        return Ok(Bad("M* contains an edge outside G - M".into()));
    }
    let mv = p.matching().vertices(g);
    if !g.is_matching(ms.iter()) || ms.iter().any(|&e| g.is_incident(e, *mv.iter().find(|&&v| g.is_incident(e, v)).unwrap_or(&usize::MAX))) {
        return Ok(Bad("M* is not a matching avoiding V(M)".into()));
    }
    let rest = rest_graph(g, p, t);
    if !t.phi.is_total_on(&rest) {
        return Ok(Bad("φ is not total on G - (M ∪ M*)".into()));
    }
    if let Some((e, f)) = verify_proper(&rest, &t.phi).conflicts.first() {
        return Ok(Bad(format!("φ is improper: edges {e} and {f}")));
    }
    if let Some((e, col)) = t.phi.colored_edges(&rest).find(|&(_, col)| col > top) {
        return Ok(Bad(format!("edge {e} has color {col} above {top}")));
    }
    let top_class: BTreeSet<EdgeId> = t
        .phi
        .colored_edges(&rest)
        .filter(|&(_, col)| col == top)
        .map(|(e, _)| e)
        .collect();
    if &top_class != t.special.ids() {
        return Ok(Bad("special class differs from the Δ+μ color class".into()));
    }
    let m_top = p.colors().iter().filter(|&(_, &c)| c == top).map(|(&e, _)| e);
    let cond_a: Vec<EdgeId> = m_top.chain(ms.iter().copied()).chain(t.special.iter()).collect();
    if !g.is_matching(cond_a.iter()) {
        return Ok(Bad("condition (a): M_top ∪ M* ∪ special is not a matching".into()));
    }
    let report = classify_improper(g, p, t);
    let e2v = report.e2.vertices(g);
    for &e in &ms {
        let (x, y) = g.ends(e);
        if !e2v.contains(&x) && !e2v.contains(&y) {
            continue;
        }
        let h = match unique_dense(&rest, e, k) {
            Ok(h) => h,
            Err(err) => return Ok(Bad(format!("condition (b): {err}"))),
        };
        let mut he = rest.induced(&h.vertices);
        he.restore_edge(e)?;
        if !is_k_critical_edge(&he, e, k)? {
            return Ok(Bad(format!("condition (b): {e} is not {k}-critical in H + e")));
        }
        if !is_fully_saturated(&he, e, delta, mu) {
            return Ok(Bad(format!("condition (b): {e} is not fully saturated in H + e")));
        }
        let mut seen = BTreeSet::new();
        for b in boundary(&rest, &h.vertices).iter() {
            if !seen.insert(t.phi.get(b)) {
                return Ok(Bad(format!("condition (c): boundary colors of H for {e} repeat")));
            }
        }
    }
    if report.e1.is_empty() && report.e2.is_empty() {
        Ok(TripleStatus::Feasible)
    } else {
        Ok(TripleStatus::Prefeasible)
    }
}

/// The local recolorings, in dispatch order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    /// Move the reserve edge along an unobstructed linear sequence.
    OpI,
    /// Move the reserve edge onto the blocking vertex `w`.
    OpII,
    /// Recolor the blocking boundary edge to `Δ + μ`, then as `OpI`.
    OpIII,
    /// Clashes at both ends in different dense subgraphs.
    Case2,
    /// Type-1 clash at the other end inside the same dense subgraph.
    Case3Direct,
    /// Type-2 clash at both ends in one dense subgraph, with the fan at `a`
    /// offering a second Δ-vertex: handle the far end as a single clash.
    Case3Reduce,
    Case31,
    Case32,
    Case331,
    Case332,
}

impl CaseId {
    pub const ALL: [CaseId; 10] = [
        CaseId::OpI,
        CaseId::OpII,
        CaseId::OpIII,
        CaseId::Case2,
        CaseId::Case3Direct,
        CaseId::Case3Reduce,
        CaseId::Case31,
        CaseId::Case32,
        CaseId::Case331,
        CaseId::Case332,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::OpI => "Op-I",
            CaseId::OpII => "Op-II",
            CaseId::OpIII => "Op-III",
            CaseId::Case2 => "Case-2",
            CaseId::Case3Direct => "Case-3-direct",
            CaseId::Case3Reduce => "Case-3-reduce",
            CaseId::Case31 => "Case-3.1",
            CaseId::Case32 => "Case-3.2",
            CaseId::Case331 => "Case-3.3.1",
            CaseId::Case332 => "Case-3.3.2",
        }
    }

    /// How much `|E2|` must drop.
    pub fn drop(self) -> usize {
        match self {
            CaseId::OpI | CaseId::OpII | CaseId::OpIII | CaseId::Case3Direct => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Ctx<'a> {
    g: &'a Multigraph,
    p: &'a Precoloring,
    delta: usize,
    k: Color,
    top: Color,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Multigraph, p: &'a Precoloring) -> Self {
        let delta = g.max_degree();
        let top = (delta + g.max_multiplicity()) as Color;
        Ctx {
            g,
            p,
            delta,
            k: top - 1,
            top,
        }
    }

    fn rest(&self, t: &ExtensionTriple) -> Multigraph {
        rest_graph(self.g, self.p, t)
    }

    /// `G - (M ∪ M*)` without the special class: the part colored from `1..=k`.
    fn kview(&self, t: &ExtensionTriple) -> Multigraph {
        self.rest(t).without_edges(t.special.iter())
    }

    fn reserve_at(&self, t: &ExtensionTriple, v: Vertex) -> Option<EdgeId> {
        t.mstar.iter().find(|&e| self.g.is_incident(e, v))
    }

    fn local(&self, t: &ExtensionTriple) -> PartialEdgeColoring {
        t.phi.clone().with_palette(self.k)
    }

    fn store(&self, t: &mut ExtensionTriple, c: &PartialEdgeColoring, op: &str, case: &str) {
        t.phi = c.clone().with_palette(self.top);
        t.commit(op, Some(case));
    }

    fn set_top(&self, t: &mut ExtensionTriple, e: EdgeId) {
        t.phi.set(e, Some(self.top));
        t.special.insert(e);
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::precondition(msg)
}

/// A type-2 clash of `f` at `u`: `f1 = uy` carries `Φ(f)` and `y` is an end
/// of the reserve edge `xy`.
struct Clash {
    f1: EdgeId,
    y: Vertex,
    reserve: EdgeId,
    x: Vertex,
}

fn t2_clash(ctx: &Ctx, t: &ExtensionTriple, f: EdgeId, u: Vertex) -> Result<Clash> {
    let i = ctx.p.color(f).ok_or_else(|| Error::input(format!("edge {f} is not precolored")))?;
    let rest = ctx.rest(t);
    for &f1 in rest.incident(u) {
        if t.phi.get(f1) != Some(i) {
            continue;
        }
        let y = rest.other_end(f1, u);
        if let Some(reserve) = ctx.reserve_at(t, y) {
            let x = ctx.g.other_end(reserve, y);
            return Ok(Clash { f1, y, reserve, x });
        }
    }
    Err(fail(format!("edge {f} is not T2-improper at {u}")))
}

/// Inner endvertex -> boundary edge colored `i`.
fn boundary_i(kv: &Multigraph, hvs: &VertexSet, c: &PartialEdgeColoring, i: Color) -> BTreeMap<Vertex, EdgeId> {
    boundary(kv, hvs)
        .iter()
        .filter(|&e| c.get(e) == Some(i))
        .map(|e| {
            let (a, b) = kv.ends(e);
            (if hvs.contains(&a) { a } else { b }, e)
        })
        .collect()
}

fn delta_vertices(fan: &MultiFan, h: &Multigraph, delta: usize, skip: &[Vertex]) -> Vec<Vertex> {
    fan.vertices()
        .into_iter()
        .filter(|z| !skip.contains(z) && h.degree(*z) == delta)
        .collect()
}

fn last_edge(s: &LinearSequence) -> Option<EdgeId> {
    s.steps.last().map(|&(e, _)| e)
}

/// Replaces `old` by `new` in `M*` and renames the color classes inside `hvs`
/// to agree with the boundary, keeping class `i`. A leftover clash between an
/// inner `i`-edge and a boundary `i`-edge from `e1` is resolved by moving the
/// boundary edge to color `Δ + μ`.
fn finish_local(
    ctx: &Ctx,
    t: &mut ExtensionTriple,
    hvs: &VertexSet,
    old: EdgeId,
    new: Option<EdgeId>,
    i: Color,
    case: &str,
    e1: &EdgeSet,
) -> Result<()> {
    t.mstar.remove(old);
    if let Some(n) = new {
        if t.phi.get(n).is_some() {
            return Err(Error::defect(format!("new reserve edge {n} is still colored")));
        }
        t.mstar.insert(n);
    }
    let mut edges = vec![old];
    edges.extend(new);
    t.note("reserve_swap", Some(case), &edges);
    let kv = ctx.kview(t);
    let inner = kv.induced(hvs);
    let mut inside = PartialEdgeColoring::new(ctx.k, ctx.g.edge_slots());
    let mut outside = t.phi.clone();
    for e in inner.edge_ids() {
        match t.phi.get(e) {
            Some(col) if col <= ctx.k => inside.set(e, Some(col)),
            _ => return Err(Error::defect(format!("edge {e} inside the dense subgraph lacks a color"))),
        }
        outside.uncolor(e);
    }
    let mut merged = merge_colorings(&kv, hvs, &inside, &outside, MergeMode::ProtectColor(i))?
        .with_palette(ctx.top);
    for s in t.special.iter() {
        merged.set(s, Some(ctx.top));
    }
    t.phi = merged;
    let rim = boundary(&kv, hvs);
    let rest = ctx.rest(t);
    for (e, f) in verify_proper(&rest, &t.phi).conflicts {
        for h in [e, f] {
            if e1.contains(h) && rim.contains(h) && t.phi.get(h) == Some(i) {
                ctx.set_top(t, h);
            }
        }
    }
    t.commit("merge", Some(case));
    Ok(())
}

/// Operations I-III for a type-2 clash of `f` at `u`.
fn case_one(ctx: &Ctx, t: &ExtensionTriple, f: EdgeId, u: Vertex, op: CaseId, label: &str) -> Result<ExtensionTriple> {
    let i = ctx.p.color(f).expect("target is precolored");
    let clash = t2_clash(ctx, t, f, u)?;
    let (x, y, exy) = (clash.x, clash.y, clash.reserve);
    let rest = ctx.rest(t);
    let h = unique_dense(&rest, exy, ctx.k)?;
    if !h.vertices.contains(&u) {
        return Err(fail(format!("clashing edge {} leaves the dense subgraph", clash.f1)));
    }
    let kv = ctx.kview(t);
    let hv = kv.induced(&h.vertices);
    let mut hx = hv.clone();
    hx.restore_edge(exy)?;
    let c = ctx.local(t);
    let fan = build_multifan(&hx, &c, x, exy, None)?;
    let w = boundary_i(&kv, &h.vertices, &c, i);
    let e1 = classify_improper(ctx.g, ctx.p, t).e1;
    // a reserve edge ending at a type-1 clash would turn that clash into type 2
    let clash_ends = e1.vertices(ctx.g);
    let mut deltas = delta_vertices(&fan, &hv, ctx.delta, &[x, y]);
    deltas.sort_by_key(|z| clash_ends.contains(z));
    if deltas.is_empty() {
        return Err(fail(format!("fan at {x} has no Δ-vertex besides {x} and {y}")));
    }
    let no_i = |e: EdgeId| c.get(e) != Some(i);
    let off_w = |v: Vertex| !w.contains_key(&v);
    let unobstructed = deltas.iter().find_map(|&x1| {
        linear_sequence_filtered(&hx, &c, &fan, x1, no_i, |_| true)
            .or_else(|| linear_sequence_filtered(&hx, &c, &fan, x1, |_| true, off_w))
    });
    let mut out = t.clone();
    let s = match (op, unobstructed) {
        (CaseId::OpI, Some(s)) => s,
        (CaseId::OpI, None) => {
            return Err(fail("every linear sequence to a Δ-vertex uses an i-edge and a boundary i-vertex"))
        }
        (_, Some(_)) => return Err(fail("an unobstructed linear sequence exists")),
        (_, None) => {
            let s = linear_sequence_to(&hx, &c, &fan, deltas[0])?;
            let wv = s
                .vertices()
                .into_iter()
                .find(|v| w.contains_key(v))
                .ok_or_else(|| fail("sequence has no boundary i-vertex"))?;
            if hv.degree(wv) + 1 != ctx.delta {
                return Err(fail(format!("blocking vertex {wv} does not have degree Δ - 1 in H")));
            }
            let hb = w[&wv];
            match op {
                CaseId::OpII if e1.contains(hb) => {
                    return Err(fail(format!("boundary i-edge {hb} is in E1")))
                }
                CaseId::OpII => s.prefix_to(wv).expect("w lies on the sequence"),
                CaseId::OpIII if !e1.contains(hb) => {
                    return Err(fail(format!("boundary i-edge {hb} is not in E1")))
                }
                CaseId::OpIII => {
                    ctx.set_top(&mut out, hb);
                    out.commit("recolor_top", Some(label));
                    s
                }
                _ => unreachable!("case_one only runs Operations I-III"),
            }
        }
    };
    let new = last_edge(&s).ok_or_else(|| fail("linear sequence is empty"))?;
    let c = rotate_from_anchor(&ctx.local(&out), exy, &s);
    ctx.store(&mut out, &c, "shift", label);
    finish_local(ctx, &mut out, &h.vertices, exy, Some(new), i, label, &e1)?;
    Ok(out)
}

/// The first of Operations I-III that applies.
fn case_one_any(ctx: &Ctx, t: &ExtensionTriple, f: EdgeId, u: Vertex, label: &str) -> Result<ExtensionTriple> {
    let mut reasons = Vec::new();
    for op in [CaseId::OpI, CaseId::OpII, CaseId::OpIII] {
        match case_one(ctx, t, f, u, op, label) {
            Ok(out) => return Ok(out),
            Err(e) if e.is_resource() => return Err(e),
            Err(e) => reasons.push(format!("{op}: {e}")),
        }
    }
    Err(fail(reasons.join("; ")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    One,
    Two,
    ThreeT1,
    ThreeT2,
}

fn shape(ctx: &Ctx, t: &ExtensionTriple, f: EdgeId, u: Vertex) -> Result<Shape> {
    let clash = t2_clash(ctx, t, f, u)?;
    let rest = ctx.rest(t);
    let h = unique_dense(&rest, clash.reserve, ctx.k)?;
    let v = ctx.g.other_end(f, u);
    let report = classify_improper(ctx.g, ctx.p, t);
    Ok(match report.tag(f, v) {
        ImproperTag::NotImproper => Shape::One,
        ImproperTag::T1 if h.vertices.contains(&v) => Shape::ThreeT1,
        ImproperTag::T1 => Shape::One,
        ImproperTag::T2 if h.vertices.contains(&v) => Shape::ThreeT2,
        ImproperTag::T2 => {
            let other = t2_clash(ctx, t, f, v)?;
            let h2 = unique_dense(&rest, other.reserve, ctx.k)?;
            if h2.vertices.is_disjoint(&h.vertices) {
                Shape::Two
            } else {
                return Err(fail("dense subgraphs at the two ends overlap"));
            }
        }
    })
}

/// State after handling `u` in Case 3, when `f` is still type-2 at `v`.
struct Setup {
    t1: ExtensionTriple,
    i: Color,
    a: Vertex,
    b: Vertex,
    eab: EdgeId,
    v: Vertex,
    ebv: EdgeId,
    y: Vertex,
    eyu: EdgeId,
    hvs: VertexSet,
    hv: Multigraph,
    hx: Multigraph,
    fb: MultiFan,
    w: BTreeMap<Vertex, EdgeId>,
    e1: EdgeSet,
    assumptions: bool,
}

/// `t1` is the triple after handling `u`, with `f` type-2 at `v`.
fn case3_setup(ctx: &Ctx, t1: ExtensionTriple, f: EdgeId, u: Vertex) -> Result<Setup> {
    let i = ctx.p.color(f).expect("target is precolored");
    let v = ctx.g.other_end(f, u);
    let clash = t2_clash(ctx, &t1, f, v)?;
    let (a, b, eab, ebv) = (clash.x, clash.y, clash.reserve, clash.f1);
    let rest = ctx.rest(&t1);
    let eyu = rest
        .incident(u)
        .iter()
        .copied()
        .find(|&e| t1.phi.get(e) == Some(i))
        .ok_or_else(|| fail(format!("no {i}-edge at {u} after handling {u}")))?;
    let y = rest.other_end(eyu, u);
    let h1 = unique_dense(&rest, eab, ctx.k)?;
    if !h1.vertices.contains(&y) || !h1.vertices.contains(&v) {
        return Err(fail("y or v lies outside the dense subgraph of ab"));
    }
    let kv = ctx.kview(&t1);
    let hv = kv.induced(&h1.vertices);
    let mut hx = hv.clone();
    hx.restore_edge(eab)?;
    let c = ctx.local(&t1);
    let fa = build_multifan(&hx, &c, a, eab, None)?;
    let fb = build_multifan(&hx, &c, b, eab, None)?;
    let w = boundary_i(&kv, &h1.vertices, &c, i);
    let e1 = classify_improper(ctx.g, ctx.p, &t1).e1;
    let only_y = delta_vertices(&fa, &hv, ctx.delta, &[a, b]) == vec![y];
    let clean_path = if fa.contains_vertex(y) && y != a {
        linear_sequence_to(&hx, &c, &fa, y)?.vertices().iter().all(|z| {
            !(w.contains_key(z) && hv.degree(*z) + 1 == ctx.delta) || e1.contains(w[z])
        })
    } else {
        true
    };
    Ok(Setup {
        t1,
        i,
        a,
        b,
        eab,
        v,
        ebv,
        y,
        eyu,
        hvs: h1.vertices,
        hv,
        hx,
        fb,
        w,
        e1,
        assumptions: only_y && clean_path,
    })
}

fn case31(ctx: &Ctx, s: Setup, label: &str) -> Result<ExtensionTriple> {
    let c = ctx.local(&s.t1);
    if !s.fb.contains_vertex(s.y) || s.y == s.b {
        return Err(fail(format!("fan at {} does not reach {}", s.b, s.y)));
    }
    let seq = linear_sequence_filtered(&s.hx, &c, &s.fb, s.y, |e| c.get(e) != Some(s.i), |_| true)
        .ok_or_else(|| fail(format!("every linear sequence from {} to {} uses an i-edge", s.a, s.y)))?;
    let eby = last_edge(&seq).ok_or_else(|| fail("linear sequence is empty"))?;
    let mut t = s.t1.clone();
    let c = rotate_from_anchor(&c, s.eab, &seq);
    ctx.store(&mut t, &c, "shift", label);
    finish_local(ctx, &mut t, &s.hvs, s.eab, Some(eby), s.i, label, &s.e1)?;
    if t.phi.get(s.ebv) != Some(s.i) || t.phi.get(s.eyu) != Some(s.i) {
        return Err(fail("renaming moved the i-edges at u and v"));
    }
    t.mstar.remove(eby);
    t.note("reserve_swap", Some(label), &[eby]);
    t.phi.set(eby, Some(s.i));
    ctx.set_top(&mut t, s.ebv);
    ctx.set_top(&mut t, s.eyu);
    t.commit("close_cycle", Some(label));
    Ok(t)
}

/// Which vertex the second shifting should end at.
enum Tail {
    /// `w''` if the fan at `a` contains it, else a Δ-vertex.
    Toward(Vertex),
    /// A blocking vertex whose boundary `i`-edge is outside `E1`, else a Δ-vertex.
    Blocked,
}

/// The common Kempe-chain step of Subcases 3.2 and 3.3.2. `sz` is a linear
/// sequence at `b` from `a` to `z` and `gamma` is missing at `z`.
fn kempe_step(
    ctx: &Ctx,
    s: &Setup,
    z: Vertex,
    gamma: Color,
    sz: &LinearSequence,
    tail: Tail,
    label: &str,
) -> Result<ExtensionTriple> {
    let (a, b, i) = (s.a, s.b, s.i);
    let hv = &s.hv;
    let mut c = ctx.local(&s.t1);
    let e1 = hv
        .incident(a)
        .iter()
        .copied()
        .find(|&e| c.get(e) == Some(gamma))
        .ok_or_else(|| fail(format!("no {gamma}-edge at {a}")))?;
    let fan = build_multifan(hv, &c, a, e1, None)?;
    let deltas = delta_vertices(&fan, hv, ctx.delta, &[a, b]);
    let bt = match tail {
        Tail::Toward(w2) if fan.contains_vertex(w2) && w2 != a => Some(w2),
        Tail::Blocked => fan
            .vertices()
            .into_iter()
            .find(|z| s.w.get(z).is_some_and(|&h| !s.e1.contains(h)) && hv.degree(*z) + 1 == ctx.delta),
        _ => None,
    }
    .or_else(|| deltas.first().copied())
    .ok_or_else(|| fail(format!("fan at {a} from edge {e1} has no usable end vertex")))?;
    let seq = linear_sequence_filtered(hv, &c, &fan, bt, |e| c.get(e) != Some(i), |v| {
        v == bt || !s.w.contains_key(&v)
    })
    .map_or_else(|| linear_sequence_to(hv, &c, &fan, bt), Ok)?;
    let kv = ctx.kview(&s.t1);
    let beta = missing_colors(&kv, &c, b)
        .into_iter()
        .find(|&col| col != i)
        .ok_or_else(|| fail(format!("{b} misses no color besides {i}")))?;
    if beta == gamma {
        return Err(fail("β coincides with the fan color"));
    }
    let verts = seq.vertices();
    let bj = verts[..verts.len() - 1]
        .iter()
        .copied()
        .filter(|&v| v != a && sz.contains_vertex(v))
        .min_by_key(|&v| sz.position(v));
    // X: the second fan meets S at most in its last vertex.
    // Y: it meets S earlier, at b_j, and the shifting starts after b_j.
    let (pivot, next_v, next_e, col, shift_to) = match bj {
        None => (z, seq.start, e1, gamma, z),
        Some(bj) => {
            let p = seq.position(bj).expect("b_j lies on the sequence");
            let (e, nv) = seq.steps[p];
            let col = c.get(e).ok_or_else(|| fail(format!("fan edge {e} is uncolored")))?;
            (bj, nv, e, col, bj)
        }
    };
    let chain = kempe_chain(hv, &c, b, beta, col)?;
    let mut t = s.t1.clone();
    let from_b = chain.meets_first(b, next_v, a);
    if !chain.contains_edge(next_e) {
        if !chain.contains_vertex(pivot) {
            return Err(fail(format!("chain from {b} misses {pivot}")));
        }
        c = kempe_swap_subchain(&c, &chain, b, pivot)?;
        c.uncolor(next_e);
        c.set(s.eab, Some(col));
    } else if from_b == Some(next_v) {
        c = kempe_swap_subchain(&c, &chain, b, next_v)?;
        c.uncolor(next_e);
        c.set(s.eab, Some(col));
    } else if chain.meets_first(pivot, next_v, a) == Some(next_v) {
        c = kempe_swap_subchain(&c, &chain, pivot, next_v)?;
        c.uncolor(next_e);
        let part = sz
            .prefix_to(shift_to)
            .ok_or_else(|| fail(format!("{shift_to} is not on the sequence at {b}")))?;
        let ebz = last_edge(&part).ok_or_else(|| fail("sequence to the pivot is empty"))?;
        c = rotate_from_anchor(&c, s.eab, &part);
        c.set(ebz, Some(beta));
    } else {
        return Err(fail("chain meets a before the fan vertex from both ends"));
    }
    ctx.store(&mut t, &c, "kempe", label);
    let rest_seq = seq.suffix_from(next_v).expect("next vertex lies on the sequence");
    let new = last_edge(&rest_seq).unwrap_or(next_e);
    let c = rotate_from_anchor(&ctx.local(&t), next_e, &rest_seq);
    ctx.store(&mut t, &c, "shift", label);
    finish_local(ctx, &mut t, &s.hvs, s.eab, Some(new), i, label, &s.e1)?;
    Ok(t)
}

fn case32(ctx: &Ctx, s: Setup, label: &str) -> Result<ExtensionTriple> {
    let c = ctx.local(&s.t1);
    let i = s.i;
    let w2 = s
        .fb
        .vertices()
        .into_iter()
        .find(|&z| z != s.v && s.hv.degree(z) + 1 == ctx.delta && missing_colors(&s.hv, &c, z).contains(&i))
        .ok_or_else(|| fail(format!("fan at {} has no vertex of degree Δ - 1 missing {i}", s.b)))?;
    let s0 = linear_sequence_to(&s.hx, &c, &s.fb, w2)?;
    if s0.contains_vertex(s.v) || s0.edges().contains(&s.ebv) {
        return Err(fail("sequence to w'' already passes v"));
    }
    let mut seq = s0.clone();
    seq.steps.push((s.ebv, s.v));
    if !seq.is_valid(&s.hx, &c) {
        return Err(fail("sequence through w'' cannot continue to v"));
    }
    let kv = ctx.kview(&s.t1);
    let h2 = s.w.get(&w2).copied();
    let free = missing_colors(&kv, &c, w2).contains(&i);
    if free || h2.is_some_and(|h| s.e1.contains(h)) {
        let mut t = s.t1.clone();
        let c = rotate_from_anchor(&c, s.eab, &seq);
        ctx.store(&mut t, &c, "shift", label);
        if let Some(h) = h2 {
            ctx.set_top(&mut t, h);
        }
        ctx.set_top(&mut t, s.ebv);
        t.commit("recolor_top", Some(label));
        finish_local(ctx, &mut t, &s.hvs, s.eab, None, i, label, &s.e1)?;
        return Ok(t);
    }
    let alpha = missing_colors(&kv, &c, w2)
        .into_iter()
        .find(|&col| col != i)
        .ok_or_else(|| fail(format!("{w2} misses no color besides {i}")))?;
    kempe_step(ctx, &s, w2, alpha, &s0, Tail::Toward(w2), label)
}

/// `S*` and `y*` for Subcase 3.3, after checking that 3.1 and 3.2 do not apply.
fn case33_start(ctx: &Ctx, s: &Setup) -> Result<(LinearSequence, Vertex)> {
    let c = ctx.local(&s.t1);
    let i = s.i;
    let no_i = |e: EdgeId| c.get(e) != Some(i);
    if s.fb.contains_vertex(s.y) && linear_sequence_filtered(&s.hx, &c, &s.fb, s.y, no_i, |_| true).is_some() {
        return Err(fail("Subcase 3.1 applies"));
    }
    if s.fb.vertices().into_iter().any(|z| {
        z != s.v && s.hv.degree(z) + 1 == ctx.delta && missing_colors(&s.hv, &c, z).contains(&i)
    }) {
        return Err(fail("Subcase 3.2 applies"));
    }
    delta_vertices(&s.fb, &s.hv, ctx.delta, &[s.a, s.b, s.y])
        .into_iter()
        .find_map(|ys| linear_sequence_filtered(&s.hx, &c, &s.fb, ys, no_i, |_| true).map(|q| (q, ys)))
        .ok_or_else(|| fail(format!("no i-free sequence at {} to a Δ-vertex other than {}", s.b, s.y)))
}

fn case331(ctx: &Ctx, s: Setup, label: &str) -> Result<ExtensionTriple> {
    let (seq, ys) = case33_start(ctx, &s)?;
    let c = ctx.local(&s.t1);
    let kv = ctx.kview(&s.t1);
    if !missing_colors(&kv, &c, ys).contains(&s.i) {
        return Err(fail(format!("{ys} does not miss {}", s.i)));
    }
    let eby = last_edge(&seq).ok_or_else(|| fail("linear sequence is empty"))?;
    let mut t = s.t1.clone();
    let c = rotate_from_anchor(&c, s.eab, &seq);
    ctx.store(&mut t, &c, "shift", label);
    finish_local(ctx, &mut t, &s.hvs, s.eab, Some(eby), s.i, label, &s.e1)?;
    if t.phi.get(s.ebv) != Some(s.i) {
        return Err(fail("renaming moved the i-edge at v"));
    }
    t.mstar.remove(eby);
    t.note("reserve_swap", Some(label), &[eby]);
    t.phi.set(eby, Some(s.i));
    ctx.set_top(&mut t, s.ebv);
    t.commit("recolor_top", Some(label));
    Ok(t)
}

fn case332(ctx: &Ctx, s: Setup, label: &str) -> Result<ExtensionTriple> {
    let (seq, ys) = case33_start(ctx, &s)?;
    let c = ctx.local(&s.t1);
    let kv = ctx.kview(&s.t1);
    let miss = missing_colors(&kv, &c, ys);
    if miss.contains(&s.i) {
        return Err(fail(format!("{ys} misses {}, Subcase 3.3.1 applies", s.i)));
    }
    let theta = *miss
        .iter()
        .next()
        .ok_or_else(|| fail(format!("{ys} misses no color")))?;
    kempe_step(ctx, &s, ys, theta, &seq, Tail::Blocked, label)
}

fn run_case(ctx: &Ctx, t: &ExtensionTriple, f: EdgeId, u: Vertex, case: CaseId) -> Result<ExtensionTriple> {
    let label = case.name();
    let sh = shape(ctx, t, f, u)?;
    let need = match case {
        CaseId::OpI | CaseId::OpII | CaseId::OpIII => Shape::One,
        CaseId::Case2 => Shape::Two,
        CaseId::Case3Direct => Shape::ThreeT1,
        _ => Shape::ThreeT2,
    };
    if sh != need {
        return Err(fail(format!("{label} needs {need:?}, target is {sh:?}")));
    }
    let v = ctx.g.other_end(f, u);
    match case {
        CaseId::OpI | CaseId::OpII | CaseId::OpIII => case_one(ctx, t, f, u, case, label),
        CaseId::Case2 => {
            let t1 = case_one_any(ctx, t, f, u, label)?;
            case_one_any(ctx, &t1, f, v, label)
        }
        CaseId::Case3Direct => {
            let t1 = case_one_any(ctx, t, f, u, label)?;
            if classify_improper(ctx.g, ctx.p, &t1).tag(f, v) != ImproperTag::T2 {
                return Ok(t1);
            }
            // the new reserve edge ends at the far end of the i-edge at v, which
            // leaves the same configuration as a type-2 clash at both ends after
            // handling u
            let before = classify_improper(ctx.g, ctx.p, &t1).e2.len();
            let mut reasons = Vec::new();
            for sub in [CaseId::Case3Reduce, CaseId::Case31, CaseId::Case32, CaseId::Case331, CaseId::Case332] {
                let out = case3_setup(ctx, t1.clone(), f, u).and_then(|s| case3_tail(ctx, s, f, v, sub, label));
                match out {
                    Ok(o) if triple_status(ctx.g, ctx.p, &o).is_prefeasible()
                        && classify_improper(ctx.g, ctx.p, &o).e2.len() < before =>
                    {
                        return Ok(o)
                    }
                    Ok(_) => reasons.push(format!("{sub}: no progress")),
                    Err(e) if e.is_resource() => return Err(e),
                    Err(e) => reasons.push(format!("{sub}: {e}")),
                }
            }
            Err(fail(reasons.join("; ")))
        }
        _ => {
            let t1 = case_one_any(ctx, t, f, u, label)?;
            let s = case3_setup(ctx, t1, f, u)?;
            case3_tail(ctx, s, f, v, case, label)
        }
    }
}

fn case3_tail(ctx: &Ctx, s: Setup, f: EdgeId, v: Vertex, case: CaseId, label: &str) -> Result<ExtensionTriple> {
    match case {
        CaseId::Case3Reduce if s.assumptions => Err(fail("the fan at a has y as its only Δ-vertex")),
        CaseId::Case3Reduce => case_one_any(ctx, &s.t1, f, v, label),
        CaseId::Case31 => case31(ctx, s, label),
        CaseId::Case32 => case32(ctx, s, label),
        CaseId::Case331 => case331(ctx, s, label),
        CaseId::Case332 => case332(ctx, s, label),
        _ => unreachable!("only the type-2 subcases continue here"),
    }
}

/// Runs one local recoloring on the type-2 clash of `f` at `u` and
/// re-certifies the result.
pub fn apply_case_operation(
    g: &Multigraph,
    p: &Precoloring,
    t: &ExtensionTriple,
    target: (EdgeId, Vertex),
    case: CaseId,
) -> Result<ExtensionTriple> {
    let ctx = Ctx::new(g, p);
    let (f, u) = target;
    let before = classify_improper(g, p, t);
    if before.tag(f, u) != ImproperTag::T2 {
        return Err(fail(format!("edge {f} is not T2-improper at {u}")));
    }
    let out = run_case(&ctx, t, f, u, case)?;
    let defect = |reason: String| Error::Defect {
        reason,
        trace: out.trace[t.trace.len().min(out.trace.len())..].to_vec(),
    };
    let status = triple_status(g, p, &out);
    if let TripleStatus::InfeasiblePrecondition(why) = status {
        return Err(defect(format!("{case} left a triple that is not prefeasible: {why}")));
    }
    let after = classify_improper(g, p, &out);
    if after.e2.len() + case.drop() != before.e2.len() {
        return Err(defect(format!(
            "{case} changed |E2| from {} to {}",
            before.e2.len(),
            after.e2.len()
        )));
    }
    let both: Vec<EdgeId> = after.e1.iter().chain(after.e2.iter()).collect();
    if !g.is_matching(both.iter()) {
        return Err(defect(format!("{case} left E1 ∪ E2 not a matching")));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    PaperFirst,
    OracleOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub coloring: PartialEdgeColoring,
    pub trace: Vec<TraceStep>,
    pub fallback: bool,
    pub fallback_reason: Option<String>,
    /// Local recolorings applied, in order.
    pub cases: Vec<CaseId>,
}

fn full_step(op: &str, g: &Multigraph, c: &PartialEdgeColoring) -> TraceStep {
    let (edges, colors) = g
        .edge_ids()
        .map(|e| (e.0, c.get(e).unwrap_or(0)))
        .unzip();
    TraceStep {
        op: op.to_string(),
        case: None,
        edges,
        colors,
        e1_size: 0,
        e2_size: 0,
    }
}

fn precolor_step(p: &Precoloring) -> TraceStep {
    TraceStep {
        op: "precolor".into(),
        case: None,
        edges: p.colors().keys().map(|e| e.0).collect(),
        colors: p.colors().values().copied().collect(),
        e1_size: 0,
        e2_size: 0,
    }
}

/// Extends `p` to a proper coloring of `g` with colors `1..=Δ+μ`.
pub fn extend_precoloring(g: &Multigraph, p: &Precoloring, strategy: Strategy) -> Result<Extension> {
    let ctx = Ctx::new(g, p);
    if g.max_multiplicity() < 2 {
        return Err(Error::input("extension needs μ(G) >= 2"));
    }
    if p.palette() != ctx.top || p.colors().keys().any(|&e| !g.contains_edge(e)) {
        return Err(Error::input("precoloring was built for a different graph"));
    }
    let mut trace = vec![precolor_step(p)];
    let attempt = match strategy {
        Strategy::OracleOnly => Err("oracle-only strategy".to_string()),
        Strategy::PaperFirst => paper_route(&ctx, &mut trace),
    };
    let (coloring, cases, reason) = match attempt {
        Ok((c, cases)) => {
            let report = verify_extension(g, p, &c);
            if report.ok {
                (Some(c), cases, None)
            } else {
                (None, cases, Some(format!("final check failed: {}", report.diagnostics.join("; "))))
            }
        }
        Err(reason) => (None, Vec::new(), Some(reason)),
    };
    if let Some(c) = coloring {
        return Ok(Extension {
            coloring: c,
            trace,
            fallback: false,
            fallback_reason: None,
            cases,
        });
    }
    let reason = reason.expect("a failed attempt carries a reason");
    let c = brute_force_extension(g, p, ctx.top, ORACLE_BUDGET)?
        .ok_or_else(|| Error::defect("the oracle found no extension"))?;
    let report = verify_extension(g, p, &c);
    if !report.ok {
        return Err(Error::Defect {
            reason: format!("oracle witness rejected: {}", report.diagnostics.join("; ")),
            trace,
        });
    }
    trace.push(full_step("fallback", g, &c));
    Ok(Extension {
        coloring: c,
        trace,
        fallback: strategy == Strategy::PaperFirst,
        fallback_reason: Some(reason),
        cases,
    })
}

type Route = std::result::Result<(PartialEdgeColoring, Vec<CaseId>), String>;

fn paper_route(ctx: &Ctx, trace: &mut Vec<TraceStep>) -> Route {
    let (g, p) = (ctx.g, ctx.p);
    let err = |e: Error| e.to_string();
    if p.is_empty() {
        let c = vizing_gupta_color(g).map_err(err)?;
        trace.push(full_step("vizing", g, &c));
        return Ok((c, Vec::new()));
    }
    let gm = g.without_edges(p.matching().iter());
    if let Some(psi) = k_edge_color(&gm, ctx.k, DEFAULT_BUDGET).map_err(err)? {
        let mut t = ExtensionTriple::new(EdgeSet::new(), EdgeSet::new(), psi.with_palette(ctx.top));
        let e1 = classify_improper(g, p, &t).e1;
        for e in e1.iter() {
            ctx.set_top(&mut t, e);
        }
        t.commit("opening_recolor", None);
        let c = assemble(ctx, &mut t);
        trace.append(&mut t.trace);
        return Ok((c, Vec::new()));
    }
    let (sm, phi0) = saturated_matching(g, p.matching()).map_err(err)?;
    let mut t = ExtensionTriple::new(sm.matching.clone(), EdgeSet::new(), phi0.with_palette(ctx.top));
    let reserve: Vec<EdgeId> = sm.matching.iter().collect();
    t.note("reserve_init", None, &reserve);
    let mut cases = Vec::new();
    loop {
        if let TripleStatus::InfeasiblePrecondition(why) = triple_status(g, p, &t) {
            trace.append(&mut t.trace);
            return Err(format!("triple not prefeasible: {why}"));
        }
        let report = classify_improper(g, p, &t);
        let Some((f, u)) = report.first_t2() else {
            for e in report.e1.iter() {
                ctx.set_top(&mut t, e);
            }
            t.commit("finish_recolor", None);
            let c = assemble(ctx, &mut t);
            trace.append(&mut t.trace);
            return Ok((c, cases));
        };
        let mut start = TraceStep::bookkeeping("case_start", None, &[f]);
        start.e1_size = report.e1.len();
        start.e2_size = report.e2.len();
        let mut reasons = Vec::new();
        let mut next = None;
        for case in CaseId::ALL {
            match apply_case_operation(g, p, &t, (f, u), case) {
                Ok(out) => {
                    next = Some((case, out));
                    break;
                }
                Err(e) => reasons.push(format!("{case}: {e}")),
            }
        }
        let Some((case, out)) = next else {
            trace.append(&mut t.trace);
            return Err(format!(
                "no case applies to edge {f} at vertex {u}: {}",
                reasons.join(" | ")
            ));
        };
        let done_at = t.trace.len();
        t = out;
        let after = classify_improper(g, p, &t);
        let mut done = TraceStep::bookkeeping("case_done", Some(case.name()), &[f]);
        done.e1_size = after.e1.len();
        done.e2_size = after.e2.len();
        t.trace.insert(done_at, start);
        t.trace.push(done);
        cases.push(case);
    }
}

/// Final coloring: `φ`, plus `Δ + μ` on `M*` and `Φ` on `M`.
fn assemble(ctx: &Ctx, t: &mut ExtensionTriple) -> PartialEdgeColoring {
    for e in t.mstar.clone().iter() {
        t.phi.set(e, Some(ctx.top));
    }
    for (&e, &col) in ctx.p.colors() {
        t.phi.set(e, Some(col));
    }
    t.commit("assemble", None);
    t.phi.clone()
}

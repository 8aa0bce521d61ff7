//! Coloring constructors: an exact backtracking solver, the constructive
//! (Δ+μ)-coloring, and the saturated reserve matching used to open the
//! precoloring extension.

use crate::coloring::{kempe_chain, kempe_swap, missing_colors, Color, PartialEdgeColoring};
use crate::density::{gamma_ceil, is_k_critical_edge, maximal_dense_containing, DenseSubgraph};
use crate::error::{Error, Result};
use crate::fans::{build_multifan, linear_sequence_to, rotate_from_anchor};
use crate::multigraph::{EdgeId, EdgeSet, Multigraph, Vertex, VertexSet};

/// Node budget used when callers do not pass one.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Density bounds are only computed below this many vertices.
const GAMMA_VERTEX_LIMIT: usize = 16;

struct Search<'a> {
    ends: Vec<(Vertex, Vertex)>,
    degree_sum: Vec<usize>,
    used: Vec<u64>,
    color: Vec<Color>,
    k: u32,
    nodes: &'a mut u64,
    budget: u64,
}

impl Search<'_> {
    fn available(&self, i: usize) -> u64 {
        let (u, v) = self.ends[i];
        let full = if self.k >= 64 { u64::MAX } else { (1u64 << self.k) - 1 };
        !(self.used[u] | self.used[v]) & full
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<(u32, std::cmp::Reverse<usize>, usize)> = None;
        for i in 0..self.ends.len() {
            if self.color[i] != 0 {
                continue;
            }
            let key = (self.available(i).count_ones(), std::cmp::Reverse(self.degree_sum[i]), i);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        best.map(|(_, _, i)| i)
    }

    fn run(&mut self, max_used: u32) -> Result<bool> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(Error::Resource {
                context: format!("{}-coloring search", self.k),
                nodes: *self.nodes,
                lower: None,
                upper: None,
            });
        }
        let Some(i) = self.pick() else {
            return Ok(true);
        };
        let avail = self.available(i);
        // colors above max_used are interchangeable, so only the first is tried
        let limit = (max_used + 1).min(self.k);
        let (u, v) = self.ends[i];
        for col in 1..=limit {
            let bit = 1u64 << (col - 1);
            if avail & bit == 0 {
                continue;
            }
            self.color[i] = col;
            self.used[u] |= bit;
            self.used[v] |= bit;
            if self.run(max_used.max(col))? {
                return Ok(true);
            }
            self.used[u] &= !bit;
            self.used[v] &= !bit;
            self.color[i] = 0;
        }
        Ok(false)
    }
}

fn search_k(g: &Multigraph, k: u32, budget: u64, nodes: &mut u64) -> Result<Option<PartialEdgeColoring>> {
    assert!(k <= 64, "palettes above 64 colors are not supported by the exact solver");
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let ends: Vec<(Vertex, Vertex)> = ids.iter().map(|&e| g.ends(e)).collect();
    let degree_sum = ends.iter().map(|&(u, v)| g.degree(u) + g.degree(v)).collect();
    let mut s = Search {
        ends,
        degree_sum,
        used: vec![0; g.vertex_count()],
        color: vec![0; ids.len()],
        k,
        nodes,
        budget,
    };
    if !s.run(0)? {
        return Ok(None);
    }
    let mut c = PartialEdgeColoring::for_graph(g, k);
    for (idx, &e) in ids.iter().enumerate() {
        c.set(e, Some(s.color[idx]));
    }
    Ok(Some(c))
}

fn lower_bound(g: &Multigraph) -> Result<u32> {
    let delta = g.max_degree() as u32;
    if g.vertex_count() <= GAMMA_VERTEX_LIMIT {
        Ok(delta.max(gamma_ceil(g)?))
    } else {
        Ok(delta)
    }
}

/// Exact chromatic index with a witness coloring whose palette is `χ'`.
pub fn exact_chromatic_index(g: &Multigraph, budget: u64) -> Result<(u32, PartialEdgeColoring)> {
    if g.edge_count() == 0 {
        return Ok((0, PartialEdgeColoring::for_graph(g, 0)));
    }
    let lower = lower_bound(g)?;
    let upper = (g.max_degree() + g.max_multiplicity()) as u32;
    let mut nodes = 0;
    for k in lower..upper {
        match search_k(g, k, budget, &mut nodes) {
            Ok(Some(c)) => return Ok((k, c)),
            Ok(None) => {}
            Err(Error::Resource { context, nodes, .. }) => {
                return Err(Error::Resource {
                    context,
                    nodes,
                    lower: Some(k),
                    upper: Some(upper),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok((upper, vizing_gupta_color(g)?))
}

/// A proper coloring from palette `1..=k`, or `None` when `χ'(g) > k`.
pub fn k_edge_color(g: &Multigraph, k: u32, budget: u64) -> Result<Option<PartialEdgeColoring>> {
    if g.edge_count() == 0 {
        return Ok(Some(PartialEdgeColoring::for_graph(g, k)));
    }
    let delta_mu = (g.max_degree() + g.max_multiplicity()) as u32;
    if k >= delta_mu {
        return Ok(Some(vizing_gupta_color(g)?.with_palette(k)));
    }
    if k < lower_bound(g)? {
        return Ok(None);
    }
    let mut nodes = 0;
    search_k(g, k, budget, &mut nodes)
}

pub fn is_k_colorable(g: &Multigraph, k: u32, budget: u64) -> Result<bool> {
    Ok(k_edge_color(g, k, budget)?.is_some())
}

/// Colors `g` with at most `Δ + μ` colors, inserting edges by ascending id.
pub fn vizing_gupta_color(g: &Multigraph) -> Result<PartialEdgeColoring> {
    let palette = (g.max_degree() + g.max_multiplicity()) as u32;
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let mut h = g.without_edges(ids.iter().copied());
    let mut c = PartialEdgeColoring::for_graph(g, palette);
    for &e in &ids {
        h.restore_edge(e)?;
        color_edge(&h, &mut c, e)?;
    }
    Ok(c)
}

/// Colors the uncolored edge `e` of `h`, recoloring others as needed.
fn color_edge(h: &Multigraph, c: &mut PartialEdgeColoring, e: EdgeId) -> Result<()> {
    let (x, y) = h.ends(e);
    for _ in 0..4 {
        let mx = missing_colors(h, c, x);
        if let Some(&col) = mx.intersection(&missing_colors(h, c, y)).next() {
            c.set(e, Some(col));
            return Ok(());
        }
        let fan = build_multifan(h, c, x, e, None)?;
        let mut seen: Vec<(Vertex, crate::coloring::ColorSet)> = Vec::new();
        let mut swapped = false;
        for z in fan.vertices() {
            let mz = missing_colors(h, c, z);
            if let Some(&gamma) = mz.intersection(&mx).next() {
                let s = linear_sequence_to(h, c, &fan, z)?;
                let last = s.steps.last().map_or(e, |&(f, _)| f);
                *c = rotate_from_anchor(c, e, &s);
                c.set(last, Some(gamma));
                return Ok(());
            }
            if let Some((w, beta)) = seen
                .iter()
                .find_map(|(w, mw)| mw.intersection(&mz).next().map(|&b| (*w, b)))
            {
                let alpha = *mx.iter().next().expect("center misses a color");
                let px = kempe_chain(h, c, x, alpha, beta)?;
                let ends_at_z = px.endvertices().is_some_and(|(a, b)| a == z || b == z);
                let pivot = if ends_at_z { w } else { z };
                let ch = kempe_chain(h, c, pivot, alpha, beta)?;
                *c = kempe_swap(c, &ch);
                swapped = true;
                break;
            }
            seen.push((z, mz));
        }
        if !swapped {
            return Err(Error::defect(format!(
                "fan at {x} for edge {e} is elementary with no free color"
            )));
        }
    }
    Err(Error::defect(format!("edge {e} still uncolored after recoloring")))
}

/// `d(x) = d(y) = Δ` and `e(x, y) = μ` in `h`, for the given `Δ`, `μ`.
pub fn is_fully_saturated(h: &Multigraph, e: EdgeId, delta: usize, mu: usize) -> bool {
    let (x, y) = h.ends(e);
    h.degree(x) == delta && h.degree(y) == delta && h.multiplicity(x, y) == mu
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedEdge {
    pub edge: EdgeId,
    pub dense: DenseSubgraph,
    pub critical: bool,
    pub fully_saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedMatching {
    pub matching: EdgeSet,
    pub records: Vec<SaturatedEdge>,
}

fn unique_dense(r: &Multigraph, e: EdgeId, k: u32) -> Result<DenseSubgraph> {
    let (x, y) = r.ends(e);
    let mut found = maximal_dense_containing(r, k, &VertexSet::from([x, y]))?;
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(Error::defect(format!("no {k}-dense subgraph contains the ends of {e}"))),
        _ => Err(Error::defect(format!("ends of {e} lie in several maximal {k}-dense subgraphs"))),
    }
}

fn with_edge(r: &Multigraph, vs: &VertexSet, e: EdgeId) -> Result<Multigraph> {
    let mut he = r.induced(vs);
    he.restore_edge(e)?;
    Ok(he)
}

/// Finds an edge of `H_e + e` that can replace `e` and is fully saturated there.
fn replacement(r: &Multigraph, e: EdgeId, h: &DenseSubgraph, k: u32, delta: usize, mu: usize) -> Result<EdgeId> {
    let phi = k_edge_color(r, k, DEFAULT_BUDGET)?
        .ok_or_else(|| Error::defect("reserve matching left a graph that is not k-colorable"))?;
    let he = with_edge(r, &h.vertices, e)?;
    let (a, b) = he.ends(e);
    for x in [a, b] {
        let fan = build_multifan(&he, &phi, x, e, None)?;
        for x1 in fan.vertices().into_iter().skip(1) {
            if he.degree(x1) != delta {
                continue;
            }
            let s = linear_sequence_to(&he, &phi, &fan, x1)?;
            let pivot = s.steps.last().expect("x1 differs from the fan start").0;
            let psi = rotate_from_anchor(&phi, e, &s);
            let fan2 = build_multifan(&he, &psi, x1, pivot, None)?;
            let ok = |f: EdgeId| is_fully_saturated(&he, f, delta, mu);
            let pick = fan2
                .entries
                .iter()
                .skip(1)
                .find(|&&(f, z)| z != x && ok(f))
                .map(|&(f, _)| f)
                .or_else(|| ok(pivot).then_some(pivot));
            if let Some(f) = pick {
                return Ok(f);
            }
        }
    }
    Err(Error::defect(format!("no fully saturated replacement for {e}")))
}

/// A matching `M*` avoiding `V(M)` with `χ'(G - (M ∪ M*)) = Δ + μ - 1`, each of
/// whose edges is critical and fully saturated in its dense subgraph.
pub fn saturated_matching(g: &Multigraph, m: &EdgeSet) -> Result<(SaturatedMatching, PartialEdgeColoring)> {
    if !g.is_matching(m.iter().collect::<Vec<_>>().iter()) {
        return Err(Error::input("M is not a matching"));
    }
    let delta = g.max_degree();
    let mu = g.max_multiplicity();
    if mu < 2 {
        return Err(Error::input("saturated matching needs μ >= 2"));
    }
    let k = (delta + mu - 1) as u32;
    let rest = |ms: &[EdgeId]| g.without_edges(m.iter().chain(ms.iter().copied()));
    if is_k_colorable(&rest(&[]), k, DEFAULT_BUDGET)? {
        return Err(Error::input(format!("χ'(G - M) is below Δ + μ = {}", k + 1)));
    }

    let mut taken: VertexSet = m.vertices(g);
    let mut mstar: Vec<EdgeId> = Vec::new();
    for (e, (x, y)) in g.edges() {
        if m.contains(e) || taken.contains(&x) || taken.contains(&y) {
            continue;
        }
        if is_fully_saturated(g, e, delta, mu) {
            mstar.push(e);
            taken.insert(x);
            taken.insert(y);
        }
    }
    if !is_k_colorable(&rest(&mstar), k, DEFAULT_BUDGET)? {
        return Err(Error::defect("maximal saturated matching does not lower the chromatic index"));
    }
    for e in mstar.clone() {
        let fewer: Vec<EdgeId> = mstar.iter().copied().filter(|&f| f != e).collect();
        if is_k_colorable(&rest(&fewer), k, DEFAULT_BUDGET)? {
            mstar = fewer;
        }
    }

    let cap = g.edge_count();
    let mut rounds = 0;
    loop {
        let r = rest(&mstar);
        let mut bad = None;
        for &e in &mstar {
            let h = unique_dense(&r, e, k)?;
            if !is_fully_saturated(&with_edge(&r, &h.vertices, e)?, e, delta, mu) {
                bad = Some((e, h));
                break;
            }
        }
        let Some((e, h)) = bad else { break };
        rounds += 1;
        if rounds > cap {
            return Err(Error::defect(format!("replacement loop exceeded {cap} rounds")));
        }
        let f = replacement(&r, e, &h, k, delta, mu)?;
        mstar.retain(|&x| x != e);
        mstar.push(f);
        mstar.sort();
    }

    let r = rest(&mstar);
    let phi = k_edge_color(&r, k, DEFAULT_BUDGET)?
        .ok_or_else(|| Error::defect("final reserve matching is not certified"))?;
    let mut records = Vec::new();
    for &e in &mstar {
        let dense = unique_dense(&r, e, k)?;
        let he = with_edge(&r, &dense.vertices, e)?;
        let critical = is_k_critical_edge(&he, e, k)?;
        let fully_saturated = is_fully_saturated(&he, e, delta, mu);
        if !critical || !fully_saturated {
            return Err(Error::defect(format!("certificate for reserve edge {e} fails")));
        }
        records.push(SaturatedEdge {
            edge: e,
            dense,
            critical,
            fully_saturated,
        });
    }
    let both: Vec<EdgeId> = m.iter().chain(mstar.iter().copied()).collect();
    if !g.is_matching(both.iter()) {
        return Err(Error::defect("M ∪ M* is not a matching"));
    }
    let matching = EdgeSet::from_ids(g, mstar)?;
    Ok((SaturatedMatching { matching, records }, phi.with_palette(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_proper;

    fn fat_triangle() -> Multigraph {
        let mut g = Multigraph::new(3);
        g.add_parallel(0, 1, 2).unwrap();
        g.add_parallel(1, 2, 2).unwrap();
        g.add_parallel(2, 0, 2).unwrap();
        g
    }

    fn cycle(n: usize, mult: usize) -> Multigraph {
        let mut g = Multigraph::new(n);
        for v in 0..n {
            g.add_parallel(v, (v + 1) % n, mult).unwrap();
        }
        g
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_chromatic_index(&Multigraph::new(3), 10).unwrap().0, 0);
        let (chi, w) = exact_chromatic_index(&cycle(5, 1), DEFAULT_BUDGET).unwrap();
        assert_eq!(chi, 3);
        assert!(verify_proper(&cycle(5, 1), &w).proper);
        assert_eq!(exact_chromatic_index(&fat_triangle(), DEFAULT_BUDGET).unwrap().0, 6);
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        // Petersen-like hard instance is unnecessary: a tiny budget suffices
        let err = exact_chromatic_index(&cycle(5, 2), 1).unwrap_err();
        match err {
            Error::Resource { lower, upper, .. } => {
                assert_eq!(lower, Some(5));
                assert_eq!(upper, Some(6));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn k_edge_color_examples() {
        let mut star = Multigraph::new(4);
        for v in 1..4 {
            star.add_edge(0, v).unwrap();
        }
        assert!(k_edge_color(&star, 3, DEFAULT_BUDGET).unwrap().is_some());
        assert!(k_edge_color(&cycle(5, 1), 2, DEFAULT_BUDGET).unwrap().is_none());
        let c = k_edge_color(&cycle(5, 2), 5, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(verify_proper(&cycle(5, 2), &c).proper);
    }

    #[test]
    fn vizing_examples() {
        let c = vizing_gupta_color(&cycle(3, 1)).unwrap();
        assert!(verify_proper(&cycle(3, 1), &c).proper);
        let g = fat_triangle();
        let c = vizing_gupta_color(&g).unwrap();
        assert!(verify_proper(&g, &c).proper);
        assert!(c.is_total_on(&g));
        assert_eq!(c.used_colors(&g).len(), 6);
    }

    #[test]
    fn saturated_matching_fat_triangle() {
        let g = fat_triangle();
        let (sm, phi) = saturated_matching(&g, &EdgeSet::new()).unwrap();
        assert_eq!(sm.matching.len(), 1);
        let e = sm.matching.iter().next().unwrap();
        let r = g.without_edges([e]);
        assert_eq!(exact_chromatic_index(&r, DEFAULT_BUDGET).unwrap().0, 5);
        assert_eq!(sm.records[0].dense.edge_count, 5);
        assert!(verify_proper(&r, &phi).proper);
        assert!(phi.is_total_on(&r));
    }

    #[test]
    fn saturated_matching_rejects_doubled_c5() {
        assert!(matches!(
            saturated_matching(&cycle(5, 2), &EdgeSet::new()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn saturated_matching_two_triangles() {
        let mut g = Multigraph::new(6);
        for base in [0, 3] {
            g.add_parallel(base, base + 1, 2).unwrap();
            g.add_parallel(base + 1, base + 2, 2).unwrap();
            g.add_parallel(base + 2, base, 2).unwrap();
        }
        let (sm, _) = saturated_matching(&g, &EdgeSet::new()).unwrap();
        assert_eq!(sm.matching.len(), 2);
        let sides: Vec<bool> = sm.matching.iter().map(|e| g.ends(e).0 < 3).collect();
        assert_eq!(sides, vec![true, false]);
    }
}

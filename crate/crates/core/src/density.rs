//! Density `Γ(G)` and k-dense subgraphs.
//!
//! Everything here is exact enumeration over odd vertex subsets, so it is
//! meant for graphs with a few dozen vertices at most.

use num_rational::Ratio;

use crate::base_color::{exact_chromatic_index, is_k_colorable, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::multigraph::{boundary, diameter, Distance, EdgeId, EdgeSet, Multigraph, Vertex, VertexSet};

/// Largest vertex count for which subsets are enumerated.
pub const MAX_ENUM_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseSubgraph {
    pub vertices: VertexSet,
    pub k: u32,
    pub edge_count: usize,
    pub boundary: EdgeSet,
}

impl DenseSubgraph {
    pub fn least_vertex(&self) -> Vertex {
        *self.vertices.iter().next().expect("dense subgraphs are nonempty")
    }
}

/// Pairwise edge counts as a dense matrix.
struct Counts {
    n: usize,
    mult: Vec<u32>,
    degree: Vec<u32>,
}

impl Counts {
    fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let mut mult = vec![0; n * n];
        for (_, (u, v)) in g.edges() {
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
        }
        let degree = g.vertices().map(|v| g.degree(v) as u32).collect();
        Counts { n, mult, degree }
    }

    fn inner_edges(&self, members: &[Vertex]) -> u64 {
        let mut total = 0u64;
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                total += self.mult[u * self.n + v] as u64;
            }
        }
        total
    }
}

fn members(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn check_size(g: &Multigraph, context: &str) -> Result<()> {
    if g.vertex_count() > MAX_ENUM_VERTICES {
        return Err(Error::Resource {
            context: format!("{context}: {} vertices exceed subset enumeration", g.vertex_count()),
            nodes: 0,
            lower: None,
            upper: None,
        });
    }
    Ok(())
}

/// `max 2|E(G[X])| / (|X| - 1)` over odd `X` with `3 <= |X| <= max_subset`.
pub fn gamma(g: &Multigraph, max_subset: usize) -> Result<Ratio<u64>> {
    if max_subset < 3 {
        return Err(Error::input("subset bound must be at least 3"));
    }
    if g.vertex_count() < 3 {
        return Ok(Ratio::from_integer(0));
    }
    check_size(g, "gamma")?;
    let counts = Counts::new(g);
    let n = g.vertex_count();
    let mut best = Ratio::from_integer(0u64);
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size < 3 || size % 2 == 0 || size > max_subset {
            continue;
        }
        let vs = members(mask);
        let r = Ratio::new(2 * counts.inner_edges(&vs), (size - 1) as u64);
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

/// `⌈Γ(g)⌉` with no subset bound.
pub fn gamma_ceil(g: &Multigraph) -> Result<u32> {
    let r = gamma(g, g.vertex_count().max(3))?;
    Ok(r.ceil().to_integer() as u32)
}

/// All vertex sets `X` (odd, at least 3) with `|E(G[X])| = (|X| - 1) k / 2`,
/// ascending by bitmask.
pub fn k_dense_vertex_sets(g: &Multigraph, k: u32) -> Result<Vec<VertexSet>> {
    check_size(g, "k-dense search")?;
    let counts = Counts::new(g);
    let n = g.vertex_count();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size < 3 || size % 2 == 0 {
            continue;
        }
        let need = (size as u64 - 1) * k as u64;
        let vs = members(mask);
        // 2|E(X)| never exceeds the degree sum
        if vs.iter().map(|&v| counts.degree[v] as u64).sum::<u64>() < need {
            continue;
        }
        if 2 * counts.inner_edges(&vs) == need {
            out.push(vs.into_iter().collect());
        }
    }
    Ok(out)
}

fn dense(g: &Multigraph, vertices: VertexSet, k: u32) -> DenseSubgraph {
    let edge_count = g.induced_edges(&vertices).len();
    let boundary = boundary(g, &vertices);
    DenseSubgraph {
        vertices,
        k,
        edge_count,
        boundary,
    }
}

fn maximal_sets(sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect()
}

/// The maximal k-dense vertex sets of `g` that contain `required`, without
/// any chromatic-index precondition.
pub fn maximal_dense_containing(g: &Multigraph, k: u32, required: &VertexSet) -> Result<Vec<DenseSubgraph>> {
    let sets: Vec<VertexSet> = k_dense_vertex_sets(g, k)?
        .into_iter()
        .filter(|s| required.is_subset(s))
        .collect();
    Ok(maximal_sets(sets).into_iter().map(|s| dense(g, s, k)).collect())
}

/// `χ'(g) = k + 1` and `χ'(g - e) = k`.
pub fn is_k_critical_edge(g: &Multigraph, e: EdgeId, k: u32) -> Result<bool> {
    if !g.contains_edge(e) {
        return Err(Error::input(format!("unknown edge {e}")));
    }
    let ge = g.without_edges([e]);
    if !is_k_colorable(&ge, k, DEFAULT_BUDGET)? {
        return Ok(false);
    }
    Ok(!is_k_colorable(g, k, DEFAULT_BUDGET)? && is_k_colorable(g, k + 1, DEFAULT_BUDGET)?)
}

/// The unique maximal k-dense subgraph `H` of `g - e` containing both ends of `e`.
pub fn critical_dense_subgraph(g: &Multigraph, e: EdgeId, k: u32) -> Result<DenseSubgraph> {
    let (x, y) = g.endpoints(e)?;
    let delta = g.max_degree() as u32;
    let mu = g.max_multiplicity() as u32;
    let ge = g.without_edges([e]);
    // measured without e, so a pendant edge at an end of e does not block the search
    let delta_rest = ge.max_degree() as u32;
    if k < delta_rest + 1 {
        return Err(Error::input(format!("k = {k} is below Δ(G - e) + 1 = {}", delta_rest + 1)));
    }
    if !is_k_critical_edge(g, e, k)? {
        return Err(Error::input(format!("edge {e} is not {k}-critical")));
    }
    let mut found = maximal_dense_containing(&ge, k, &VertexSet::from([x, y]))?;
    let h = match found.len() {
        0 => return Err(Error::defect(format!("no {k}-dense subgraph of G - {e} contains {x} and {y}"))),
        1 => found.remove(0),
        _ => return Err(Error::defect(format!("several maximal {k}-dense subgraphs contain {x} and {y}"))),
    };

    let mut he = ge.induced(&h.vertices);
    he.restore_edge(e)?;
    if !is_k_critical_edge(&he, e, k)? {
        return Err(Error::defect(format!("edge {e} is not {k}-critical in H + e")));
    }
    if k + 1 == delta + mu {
        if he.max_degree() as u32 != delta || he.max_multiplicity() as u32 != mu {
            return Err(Error::defect("H + e does not keep Δ and μ"));
        }
        let d = diameter(&ge, &h.vertices);
        if d > Distance::Finite(2) || diameter(&he, &h.vertices) > d {
            return Err(Error::defect(format!("dense subgraph has diameter {d}")));
        }
    }
    Ok(h)
}

/// All maximal k-dense subgraphs, sorted by least vertex. Requires `χ'(g) = k >= Δ + 1`.
pub fn maximal_k_dense_subgraphs(g: &Multigraph, k: u32) -> Result<Vec<DenseSubgraph>> {
    let delta = g.max_degree() as u32;
    if k < delta + 1 {
        return Err(Error::input(format!("k = {k} is below Δ + 1 = {}", delta + 1)));
    }
    let (chi, _) = exact_chromatic_index(g, DEFAULT_BUDGET)?;
    if chi != k {
        return Err(Error::input(format!("chromatic index is {chi}, not {k}")));
    }
    let mut out: Vec<DenseSubgraph> = maximal_sets(k_dense_vertex_sets(g, k)?)
        .into_iter()
        .map(|s| dense(g, s, k))
        .collect();
    out.sort_by_key(|h| h.least_vertex());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fat_triangle() -> Multigraph {
        let mut g = Multigraph::new(3);
        g.add_parallel(0, 1, 2).unwrap();
        g.add_parallel(1, 2, 2).unwrap();
        g.add_parallel(2, 0, 2).unwrap();
        g
    }

    fn triangle() -> Multigraph {
        let mut g = Multigraph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 0).unwrap();
        g
    }

    #[test]
    fn gamma_examples() {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1).unwrap();
        assert_eq!(gamma(&g, 3).unwrap(), Ratio::from_integer(0));
        assert_eq!(gamma(&triangle(), 3).unwrap(), Ratio::from_integer(3));
        assert_eq!(gamma(&fat_triangle(), 3).unwrap(), Ratio::from_integer(6));
        assert!(gamma(&triangle(), 2).is_err());
    }

    #[test]
    fn gamma_is_a_fraction_on_c5() {
        let mut g = Multigraph::new(5);
        for v in 0..5 {
            g.add_edge(v, (v + 1) % 5).unwrap();
        }
        // 2*5/4 over the whole cycle
        assert_eq!(gamma(&g, 5).unwrap(), Ratio::new(5, 2));
        assert_eq!(gamma_ceil(&g).unwrap(), 3);
        assert_eq!(gamma(&g, 3).unwrap(), Ratio::from_integer(2));
    }

    #[test]
    fn critical_edge_examples() {
        assert!(is_k_critical_edge(&triangle(), EdgeId(0), 2).unwrap());
        let mut c4 = Multigraph::new(4);
        for v in 0..4 {
            c4.add_edge(v, (v + 1) % 4).unwrap();
        }
        assert!(!is_k_critical_edge(&c4, EdgeId(0), 2).unwrap());
        for e in 0..6 {
            assert!(is_k_critical_edge(&fat_triangle(), EdgeId(e), 5).unwrap());
        }
    }

    #[test]
    fn critical_dense_subgraph_examples() {
        let g = fat_triangle();
        let h = critical_dense_subgraph(&g, EdgeId(0), 5).unwrap();
        assert_eq!(h.vertices, VertexSet::from([0, 1, 2]));
        assert_eq!(h.edge_count, 5);

        let mut p = Multigraph::new(4);
        p.add_parallel(0, 1, 2).unwrap();
        p.add_parallel(1, 2, 2).unwrap();
        p.add_parallel(2, 0, 2).unwrap();
        p.add_edge(3, 0).unwrap();
        let h = critical_dense_subgraph(&p, EdgeId(0), 5).unwrap();
        assert_eq!(h.vertices, VertexSet::from([0, 1, 2]));
        assert_eq!(h.boundary.ids().iter().copied().collect::<Vec<_>>(), vec![EdgeId(6)]);
    }

    #[test]
    fn maximal_dense_examples() {
        let mut g = Multigraph::new(6);
        for base in [0, 3] {
            g.add_edge(base, base + 1).unwrap();
            g.add_parallel(base + 1, base + 2, 2).unwrap();
            g.add_parallel(base + 2, base, 2).unwrap();
        }
        let hs = maximal_k_dense_subgraphs(&g, 5).unwrap();
        assert_eq!(hs.len(), 2);
        assert_eq!(hs[0].vertices, VertexSet::from([0, 1, 2]));
        assert_eq!(hs[1].vertices, VertexSet::from([3, 4, 5]));

        let one = g.induced(&VertexSet::from([0, 1, 2]));
        assert_eq!(maximal_k_dense_subgraphs(&one, 5).unwrap().len(), 1);

        // χ' = Δ for a path, so k = Δ + 1 is rejected
        let mut p = Multigraph::new(3);
        p.add_edge(0, 1).unwrap();
        p.add_edge(1, 2).unwrap();
        assert!(maximal_k_dense_subgraphs(&p, 3).is_err());
    }
}

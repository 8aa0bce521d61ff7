//! Seeded random instances for the test harness and the `gen` subcommand.

use edgecolor_core::extend::Precoloring;
use edgecolor_core::multigraph::is_distance_t_matching;
use edgecolor_core::{Color, EdgeId, EdgeSet, Multigraph, PartialEdgeColoring, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected multigraph on `n` vertices with at most `max_edges` edges and
/// multiplicity at most `max_mu`. A random spanning tree comes first, then
/// extra edges are drawn uniformly among pairs that still have room.
pub fn random_multigraph<R: Rng>(r: &mut R, n: usize, max_edges: usize, max_mu: usize) -> Multigraph {
    assert!(n >= 1 && max_mu >= 1 && max_edges + 1 >= n);
    let mut g = Multigraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    for i in 1..n {
        let parent = order[r.gen_range(0..i)];
        g.add_edge(order[i], parent).expect("distinct vertices");
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let target = r.gen_range(n.saturating_sub(1)..=max_edges.min(pairs.len() * max_mu));
    while g.edge_count() < target {
        let open: Vec<_> = pairs
            .iter()
            .filter(|&&(u, v)| g.multiplicity(u, v) < max_mu)
            .collect();
        let Some(&&(u, v)) = open.choose(r) else { break };
        g.add_edge(u, v).expect("distinct vertices");
    }
    g
}

/// Like [`random_multigraph`] but with multiplicity exactly `mu`: one random
/// pair is raised to `mu` parallel edges before the extra edges are drawn.
pub fn random_multigraph_with_mu<R: Rng>(r: &mut R, n: usize, max_edges: usize, mu: usize) -> Multigraph {
    assert!(n >= 2 && max_edges >= n - 1 + mu - 1);
    let mut g = random_multigraph(r, n, max_edges - (mu - 1), mu);
    if g.max_multiplicity() < mu {
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        let pick = *ids.choose(r).expect("a connected graph on 2+ vertices has edges");
        let (u, v) = g.ends(pick);
        while g.multiplicity(u, v) < mu {
            g.add_edge(u, v).expect("distinct vertices");
        }
    }
    g
}

/// Every distance-3 matching with at most `max_size` edges, taking the
/// lowest id of each parallel class as its representative.
pub fn distance3_matchings(g: &Multigraph, max_size: usize) -> Result<Vec<EdgeSet>> {
    let reps: Vec<EdgeId> = g
        .edge_ids()
        .filter(|&e| {
            let (u, v) = g.ends(e);
            g.edges_between(u, v)[0] == e
        })
        .collect();
    let mut out = vec![EdgeSet::new()];
    let mut frontier = vec![(EdgeSet::new(), 0usize)];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for (m, from) in frontier {
            for (i, &e) in reps.iter().enumerate().skip(from) {
                let mut m2 = m.clone();
                m2.insert(e);
                if is_distance_t_matching(g, &m2, 3)? {
                    out.push(m2.clone());
                    next.push((m2, i + 1));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Independent uniform colors from `1..=Δ+μ` on the edges of `m`.
pub fn random_precoloring<R: Rng>(r: &mut R, g: &Multigraph, m: &EdgeSet) -> Result<Precoloring> {
    let top = (g.max_degree() + g.max_multiplicity()) as Color;
    let pairs: Vec<(EdgeId, Color)> = m.iter().map(|e| (e, r.gen_range(1..=top))).collect();
    Precoloring::new(g, pairs)
}

/// Greedy proper coloring over a shuffled edge order with palette `2Δ`.
pub fn random_proper_coloring<R: Rng>(r: &mut R, g: &Multigraph) -> PartialEdgeColoring {
    let palette = (2 * g.max_degree()).max(1) as Color;
    let mut c = PartialEdgeColoring::for_graph(g, palette);
    let mut ids: Vec<EdgeId> = g.edge_ids().collect();
    ids.shuffle(r);
    for e in ids {
        let (u, v) = g.ends(e);
        let used: Vec<Color> = g
            .incident(u)
            .iter()
            .chain(g.incident(v))
            .filter_map(|&f| c.get(f))
            .collect();
        let free: Vec<Color> = (1..=palette).filter(|col| !used.contains(col)).collect();
        c.set(e, Some(*free.choose(r).expect("2Δ colors leave one free")));
    }
    c
}

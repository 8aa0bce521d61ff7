//! Brute-force ground truth for precoloring extension.
//!
//! Nothing here calls into the constructive modules. The search colors edges
//! in ascending id order with plain backtracking so it can be audited by eye.

use std::collections::BTreeMap;

use crate::coloring::{Color, PartialEdgeColoring};
use crate::error::{Error, Result};
use crate::extend::Precoloring;
use crate::multigraph::{EdgeId, Multigraph};

/// Node budget for [`brute_force_extension`] when callers do not pass one.
pub const ORACLE_BUDGET: u64 = 50_000_000;

struct Naive<'a> {
    g: &'a Multigraph,
    order: Vec<EdgeId>,
    colors: Vec<Color>,
    k: u32,
    nodes: u64,
    budget: u64,
}

impl Naive<'_> {
    fn clashes(&self, e: EdgeId, col: Color) -> bool {
        let (u, v) = self.g.ends(e);
        [u, v].iter().any(|&w| {
            self.g
                .incident(w)
                .iter()
                .any(|&f| f != e && self.colors[f.0] == col)
        })
    }

    fn search(&mut self, at: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Resource {
                context: "brute-force extension".into(),
                nodes: self.nodes,
                lower: None,
                upper: None,
            });
        }
        let Some(&e) = self.order.get(at) else {
            return Ok(true);
        };
        for col in 1..=self.k {
            if self.clashes(e, col) {
                continue;
            }
            self.colors[e.0] = col;
            if self.search(at + 1)? {
                return Ok(true);
            }
            self.colors[e.0] = 0;
        }
        Ok(false)
    }
}

/// A proper `k`-coloring of `g` agreeing with `p`, or `None` if there is none.
pub fn brute_force_extension(
    g: &Multigraph,
    p: &Precoloring,
    k: u32,
    budget: u64,
) -> Result<Option<PartialEdgeColoring>> {
    let mut colors = vec![0; g.edge_slots()];
    for (&e, &col) in p.colors() {
        if !g.contains_edge(e) {
            return Err(Error::input(format!("precolored edge {e} is not in the graph")));
        }
        if col == 0 || col > k {
            return Ok(None);
        }
        colors[e.0] = col;
    }
    let mut naive = Naive {
        g,
        order: g.edge_ids().filter(|e| colors[e.0] == 0).collect(),
        colors,
        k,
        nodes: 0,
        budget,
    };
    // the fixed part must already be proper
    for (&e, &col) in p.colors() {
        if naive.clashes(e, col) {
            return Ok(None);
        }
    }
    if !naive.search(0)? {
        return Ok(None);
    }
    let mut out = PartialEdgeColoring::new(k, g.edge_slots());
    for e in g.edge_ids() {
        out.set(e, Some(naive.colors[e.0]));
    }
    Ok(Some(out))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionReport {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Checks that `c` is total on `g`, proper, within `1..=Δ+μ` and equal to the
/// precoloring on `M`.
pub fn verify_extension(g: &Multigraph, p: &Precoloring, c: &PartialEdgeColoring) -> ExtensionReport {
    let top = (g.max_degree() + g.max_multiplicity()) as Color;
    let mut diagnostics = Vec::new();
    for e in g.edge_ids() {
        match c.get(e) {
            None => diagnostics.push(format!("incomplete: edge {e} is uncolored")),
            Some(col) if col > top => {
                diagnostics.push(format!("palette: edge {e} has color {col} above {top}"))
            }
            Some(_) => {}
        }
    }
    for v in g.vertices() {
        let mut seen: BTreeMap<Color, EdgeId> = BTreeMap::new();
        for &e in g.incident(v) {
            let Some(col) = c.get(e) else { continue };
            if let Some(&f) = seen.get(&col) {
                diagnostics.push(format!(
                    "improper: edges {f} and {e} share color {col} at vertex {v}"
                ));
            } else {
                seen.insert(col, e);
            }
        }
    }
    for (&f, &want) in p.colors() {
        let got = c.get(f);
        if got != Some(want) {
            let shown = got.map_or("none".to_string(), |x| x.to_string());
            diagnostics.push(format!(
                "disagreement: edge {f} is precolored {want} but colored {shown}"
            ));
        }
    }
    ExtensionReport {
        ok: diagnostics.is_empty(),
        diagnostics,
    }
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

    fn c5() -> Multigraph {
        let mut g = Multigraph::new(5);
        for v in 0..5 {
            g.add_edge(v, (v + 1) % 5).unwrap();
        }
        g
    }

    #[test]
    fn fat_triangle_has_witness() {
        let g = fat_triangle();
        let p = Precoloring::new(&g, [(EdgeId(0), 1)]).unwrap();
        let c = brute_force_extension(&g, &p, 6, ORACLE_BUDGET).unwrap().unwrap();
        assert_eq!(c.get(EdgeId(0)), Some(1));
        let report = verify_extension(&g, &p, &c);
        assert!(report.ok, "{:?}", report.diagnostics);
    }

    #[test]
    fn c5_with_two_colors_is_absent() {
        let g = c5();
        let mut g2 = g.clone();
        // μ = 2 keeps the precoloring palette large enough for color 1
        g2.add_edge(0, 1).unwrap();
        let p = Precoloring::new(&g2, [(EdgeId(0), 1)]).unwrap();
        assert!(brute_force_extension(&g2, &p, 2, ORACLE_BUDGET).unwrap().is_none());
        let empty = Precoloring::new(&g, []).unwrap();
        assert!(brute_force_extension(&g, &empty, 2, ORACLE_BUDGET).unwrap().is_none());
        assert!(brute_force_extension(&g, &empty, 3, ORACLE_BUDGET).unwrap().is_some());
    }

    #[test]
    fn diagnostics_name_the_clause() {
        let g = fat_triangle();
        let p = Precoloring::new(&g, [(EdgeId(0), 1)]).unwrap();
        let mut c = brute_force_extension(&g, &p, 6, ORACLE_BUDGET).unwrap().unwrap();
        c.uncolor(EdgeId(3));
        let r = verify_extension(&g, &p, &c);
        assert!(!r.ok);
        assert!(r.diagnostics.iter().any(|d| d.starts_with("incomplete")));

        let mut c = brute_force_extension(&g, &p, 6, ORACLE_BUDGET).unwrap().unwrap();
        // swap two color classes: still proper, but edge 0 no longer shows 1
        let other = c.get(EdgeId(1)).unwrap();
        for e in g.edge_ids() {
            let col = c.get(e).unwrap();
            let swapped = if col == 1 { other } else if col == other { 1 } else { col };
            c.set(e, Some(swapped));
        }
        let r = verify_extension(&g, &p, &c);
        assert!(!r.ok);
        assert_eq!(r.diagnostics.len(), 1);
        assert!(r.diagnostics[0].starts_with("disagreement: edge 0"));
    }
}

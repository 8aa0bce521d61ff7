//! Text formats for graphs, precolorings and colorings.
//!
//! ```text
//! mgraph 3
//! # fat triangle
//! e 0 1 2
//! e 1 2 2
//! e 2 0 2
//! ```
//!
//! Precolorings are `p <edge-id> <color>` lines and colorings `c <edge-id> <color>`.

use edgecolor_core::extend::Precoloring;
use edgecolor_core::{Color, EdgeId, Error, Multigraph, PartialEdgeColoring, Result};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} '{tok}'")))
}

pub fn parse_graph_file(text: &str) -> Result<Multigraph> {
    let mut g: Option<Multigraph> = None;
    for (line, toks) in content_lines(text) {
        match (toks[0], &mut g) {
            ("mgraph", None) if toks.len() == 2 => {
                g = Some(Multigraph::new(number(toks[1], line, "vertex count")?));
            }
            ("mgraph", _) => return Err(parse_err(line, "malformed or repeated header")),
            ("e", Some(g)) if toks.len() == 3 || toks.len() == 4 => {
                let n = g.vertex_count();
                let u: usize = number(toks[1], line, "vertex label")?;
                let v: usize = number(toks[2], line, "vertex label")?;
                if u >= n || v >= n {
                    return Err(parse_err(line, format!("vertex label out of range 0..{n}")));
                }
                if u == v {
                    return Err(parse_err(line, format!("loop at vertex {u}")));
                }
                let mult = match toks.get(3) {
                    Some(t) => number(t, line, "multiplicity")?,
                    None => 1,
                };
                if mult == 0 {
                    return Err(parse_err(line, "multiplicity must be positive"));
                }
                g.add_parallel(u, v, mult).map_err(|e| parse_err(line, e.to_string()))?;
            }
            ("e", None) => return Err(parse_err(line, "edge before the 'mgraph' header")),
            _ => return Err(parse_err(line, format!("malformed line '{}'", toks.join(" ")))),
        }
    }
    g.ok_or_else(|| parse_err(0, "missing 'mgraph' header"))
}

/// Consecutive parallel edges are written as one line with a multiplicity.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("mgraph {}\n", g.vertex_count());
    let edges: Vec<(usize, usize)> = g.edges().map(|(_, ends)| ends).collect();
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        let (u, v) = edges[i];
        if j - i == 1 {
            out.push_str(&format!("e {u} {v}\n"));
        } else {
            out.push_str(&format!("e {u} {v} {}\n", j - i));
        }
        i = j;
    }
    out
}

fn parse_pairs(text: &str, tag: &str) -> Result<Vec<(usize, EdgeId, Color)>> {
    content_lines(text)
        .map(|(line, toks)| {
            if toks.len() != 3 || toks[0] != tag {
                return Err(parse_err(line, format!("expected '{tag} <edge-id> <color>'")));
            }
            Ok((line, EdgeId(number(toks[1], line, "edge id")?), number(toks[2], line, "color")?))
        })
        .collect()
}

pub fn parse_precoloring_file(g: &Multigraph, text: &str) -> Result<Precoloring> {
    let pairs = parse_pairs(text, "p")?;
    Precoloring::new(g, pairs.into_iter().map(|(_, e, c)| (e, c)))
}

pub fn write_precoloring(p: &Precoloring) -> String {
    p.colors().iter().map(|(e, c)| format!("p {e} {c}\n")).collect()
}

/// Reads a coloring; the palette is the largest color mentioned.
pub fn parse_coloring_file(g: &Multigraph, text: &str) -> Result<PartialEdgeColoring> {
    let pairs = parse_pairs(text, "c")?;
    let palette = pairs.iter().map(|&(_, _, c)| c).max().unwrap_or(0);
    let mut c = PartialEdgeColoring::new(palette, g.edge_slots());
    for (line, e, col) in pairs {
        if !g.contains_edge(e) {
            return Err(parse_err(line, format!("edge {e} is not in the graph")));
        }
        if col == 0 {
            return Err(parse_err(line, "colors start at 1"));
        }
        if c.get(e).is_some() {
            return Err(parse_err(line, format!("edge {e} colored twice")));
        }
        c.set(e, Some(col));
    }
    Ok(c)
}

pub fn write_coloring(g: &Multigraph, c: &PartialEdgeColoring) -> String {
    g.edge_ids()
        .filter_map(|e| c.get(e).map(|col| format!("c {e} {col}\n")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_multiplicity() {
        let g = parse_graph_file("mgraph 2\ne 0 1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges_between(0, 1), vec![EdgeId(0), EdgeId(1)]);
        let g = parse_graph_file("mgraph 3\ne 0 1 2\ne 1 2 2\ne 2 0 2\n").unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.max_multiplicity(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("mgraph 2\n\ne 0 0\n", 3),
            ("mgraph 2\ne 0 5\n", 2),
            ("# c\nmgraph 2\ne 0 x\n", 3),
            ("mgraph 2\nq 1\n", 2),
            ("e 0 1\n", 1),
        ];
        for (text, want) in cases {
            match parse_graph_file(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn graph_round_trip() {
        let text = "mgraph 4\ne 0 1 3\ne 1 2\ne 0 1\ne 2 3 2\n";
        let g = parse_graph_file(text).unwrap();
        assert_eq!(write_graph(&g), text);
    }

    #[test]
    fn coloring_round_trip() {
        let g = parse_graph_file("mgraph 3\ne 0 1 2\ne 1 2\n").unwrap();
        let text = "c 0 1\nc 1 2\nc 2 3\n";
        let c = parse_coloring_file(&g, text).unwrap();
        assert_eq!(write_coloring(&g, &c), text);
        assert!(parse_coloring_file(&g, "c 9 1\n").is_err());
    }
}

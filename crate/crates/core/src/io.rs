//! Plain-text graph files and DOT output.
//!
//! ```text
//! n m [loops]
//! u v          (m lines, 0-indexed)
//! label l v    (optional)
//! ```
//! Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} {tok:?}"),
    })
}

pub fn parse_graph(text: &str) -> Result<LabelledGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n = parse_num(toks.next(), hl, "vertex count")?;
    let m = parse_num(toks.next(), hl, "edge count")?;
    let loops = match toks.next() {
        None => false,
        Some("loops") => true,
        Some(t) => {
            return Err(Error::Parse {
                line: hl,
                msg: format!("unexpected {t:?}"),
            })
        }
    };
    let mut g = if loops {
        LabelledGraph::from_edges_looped(n, &[])?
    } else {
        LabelledGraph::empty(n)
    };
    let mut seen = 0;
    for (ln, l) in lines {
        let mut toks = l.split_whitespace();
        if l.starts_with("label") {
            toks.next();
            let lab = parse_num(toks.next(), ln, "label")?;
            let v = parse_num(toks.next(), ln, "vertex")?;
            g = g.set_label(lab, v).map_err(|e| Error::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
            continue;
        }
        let u = parse_num(toks.next(), ln, "endpoint")?;
        let v = parse_num(toks.next(), ln, "endpoint")?;
        g.add_edge(u, v).map_err(|e| Error::Parse {
            line: ln,
            msg: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header promises {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

pub fn write_graph(g: &LabelledGraph) -> String {
    let mut s = format!(
        "{} {}{}\n",
        g.n(),
        g.m(),
        if g.loops_allowed() { " loops" } else { "" }
    );
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    for (l, v) in g.labels() {
        let _ = writeln!(s, "label {l} {v}");
    }
    s
}

pub fn graph_to_dot(g: &LabelledGraph) -> String {
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        let ls = g.labels_of(v);
        if ls.is_empty() {
            let _ = writeln!(s, "  {v};");
        } else {
            let ls: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(s, "  {v} [xlabel=\"{}\"];", ls.join(","));
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

/// DOT for a rooted tree given by a parent array, with one caption per node.
pub fn tree_to_dot(parent: &[Option<usize>], captions: &[String]) -> String {
    let mut s = String::from("digraph T {\n  node [shape=box];\n");
    for (t, c) in captions.iter().enumerate() {
        let _ = writeln!(s, "  {t} [label=\"{}\"];", c.replace('"', "\\\""));
    }
    for (t, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            let _ = writeln!(s, "  {p} -> {t};");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = LabelledGraph::grid(2, 3).set_label(2, 4).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let l = LabelledGraph::path(2).with_loops().unwrap();
        assert_eq!(parse_graph(&write_graph(&l)).unwrap(), l);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            parse_graph("2 1\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("2 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let d = graph_to_dot(&LabelledGraph::path(3));
        assert!(d.contains("0 -- 1") && d.contains("1 -- 2"));
    }
}

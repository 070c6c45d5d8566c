//! Line-based text and JSON encodings of plumbing trees and contact surgery
//! diagrams. See `docs/schema.md`.
//!
//! Plumbing text:
//!
//! ```text
//! plumbing
//! vertex 0 -2
//! vertex 1 -2
//! edge 0 1
//! ```
//!
//! Diagram text (`component <framing> <rot> <+1|-1>`, then `link i j lk` for
//! every nonzero off-diagonal linking number):
//!
//! ```text
//! diagram
//! component 0 0 +1
//! component -3 1 -1
//! link 0 1 -1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rational::parse_big_int;
use crate::spinc::{ContactSign, DiagramComponent, PlumbingGraph, SurgeryDiagram};

/// Inputs with more vertices or components are rejected before allocating.
pub const MAX_SIZE: usize = 1024;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Numbered lines that carry content.
fn content_lines(s: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    s.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn int(line: usize, tok: &str) -> Result<BigInt> {
    parse_big_int(tok).ok_or_else(|| err(line, format!("expected an integer, got {tok:?}")))
}

fn index(line: usize, tok: &str) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, format!("expected an index, got {tok:?}")));
    }
    tok.parse().map_err(|_| err(line, format!("index {tok:?} is too large")))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>, want: &str) -> Result<()> {
    match lines.next() {
        Some((_, t)) if t == [want] => Ok(()),
        Some((n, _)) => Err(err(n, format!("expected the header line {want:?}"))),
        None => Err(err(1, format!("empty input; expected {want:?}"))),
    }
}

pub fn parse_plumbing_text(s: &str) -> Result<PlumbingGraph> {
    let mut lines = content_lines(s);
    header(&mut lines, "plumbing")?;
    let mut framings = Vec::new();
    let mut edges = Vec::new();
    for (n, t) in lines {
        match t.as_slice() {
            ["vertex", id, framing] => {
                let id = index(n, id)?;
                if id != framings.len() {
                    return Err(err(n, format!("vertex {id} out of order; expected {}", framings.len())));
                }
                if id >= MAX_SIZE {
                    return Err(err(n, format!("more than {MAX_SIZE} vertices")));
                }
                framings.push(int(n, framing)?);
            }
            ["edge", a, b] => edges.push((n, index(n, a)?, index(n, b)?)),
            _ => return Err(err(n, "expected `vertex <id> <framing>` or `edge <a> <b>`")),
        }
    }
    for &(n, a, b) in &edges {
        if a >= framings.len() || b >= framings.len() {
            return Err(err(n, format!("edge {a} {b} refers to a missing vertex")));
        }
    }
    let edges = edges.into_iter().map(|(_, a, b)| (a, b)).collect();
    PlumbingGraph::new(framings, edges).map_err(|e| err(0, e.to_string()))
}

pub fn plumbing_to_text(g: &PlumbingGraph) -> String {
    let mut out = String::from("plumbing\n");
    for (i, f) in g.framings.iter().enumerate() {
        writeln!(out, "vertex {i} {f}").unwrap();
    }
    for (a, b) in &g.edges {
        writeln!(out, "edge {a} {b}").unwrap();
    }
    out
}

pub fn parse_diagram_text(s: &str) -> Result<SurgeryDiagram> {
    let mut lines = content_lines(s);
    header(&mut lines, "diagram")?;
    let mut components = Vec::new();
    let mut links = Vec::new();
    for (n, t) in lines {
        match t.as_slice() {
            ["component", framing, rot, sign] => {
                if components.len() >= MAX_SIZE {
                    return Err(err(n, format!("more than {MAX_SIZE} components")));
                }
                let contact = match *sign {
                    "+1" | "1" => ContactSign::Plus,
                    "-1" => ContactSign::Minus,
                    _ => return Err(err(n, format!("contact coefficient must be +1 or -1, got {sign:?}"))),
                };
                components.push(DiagramComponent { framing: int(n, framing)?, rot: int(n, rot)?, contact });
            }
            ["link", a, b, lk] => links.push((n, index(n, a)?, index(n, b)?, int(n, lk)?)),
            _ => return Err(err(n, "expected `component <framing> <rot> <+1|-1>` or `link <i> <j> <lk>`")),
        }
    }
    let mut linking = IntMatrix::zeros(components.len(), components.len());
    for (i, c) in components.iter().enumerate() {
        linking[(i, i)] = c.framing.clone();
    }
    let mut seen = std::collections::BTreeSet::new();
    for (n, a, b, lk) in links {
        if a >= components.len() || b >= components.len() {
            return Err(err(n, format!("link {a} {b} refers to a missing component")));
        }
        if a == b {
            return Err(err(n, "a component does not link itself; framings go on the component line"));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(err(n, format!("link {a} {b} given twice")));
        }
        linking[(a, b)] = lk.clone();
        linking[(b, a)] = lk;
    }
    SurgeryDiagram::new(components, linking).map_err(|e| err(0, e.to_string()))
}

pub fn diagram_to_text(d: &SurgeryDiagram) -> String {
    let mut out = String::from("diagram\n");
    for c in d.components() {
        let sign = match c.contact {
            ContactSign::Plus => "+1",
            ContactSign::Minus => "-1",
        };
        writeln!(out, "component {} {} {sign}", c.framing, c.rot).unwrap();
    }
    let l = d.linking();
    for i in 0..l.rows() {
        for j in i + 1..l.cols() {
            if !l[(i, j)].is_zero() {
                writeln!(out, "link {i} {j} {}", l[(i, j)]).unwrap();
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkEntry {
    i: usize,
    j: usize,
    #[serde(with = "crate::serde_big::bigint")]
    lk: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    components: Vec<DiagramComponent>,
    links: Vec<LinkEntry>,
}

pub fn diagram_to_json(d: &SurgeryDiagram) -> String {
    let l = d.linking();
    let mut links = Vec::new();
    for i in 0..l.rows() {
        for j in i + 1..l.cols() {
            if !l[(i, j)].is_zero() {
                links.push(LinkEntry { i, j, lk: l[(i, j)].clone() });
            }
        }
    }
    serde_json::to_string_pretty(&DiagramJson { components: d.components().to_vec(), links }).unwrap()
}

pub fn parse_diagram_json(s: &str) -> Result<SurgeryDiagram> {
    let j: DiagramJson = serde_json::from_str(s).map_err(|e| err(e.line(), e.to_string()))?;
    // reuse the text path for validation
    let mut text = String::from("diagram\n");
    if j.components.len() > MAX_SIZE {
        return Err(err(1, format!("more than {MAX_SIZE} components")));
    }
    for c in &j.components {
        writeln!(text, "component {} {} {}", c.framing, c.rot, c.contact.as_i64()).unwrap();
    }
    for e in &j.links {
        writeln!(text, "link {} {} {}", e.i, e.j, e.lk).unwrap();
    }
    parse_diagram_text(&text).map_err(|e| match e {
        Error::Parse { msg, .. } => err(1, msg),
        other => other,
    })
}

pub fn plumbing_to_json(g: &PlumbingGraph) -> String {
    serde_json::to_string_pretty(g).unwrap()
}

pub fn parse_plumbing_json(s: &str) -> Result<PlumbingGraph> {
    let g: PlumbingGraph = serde_json::from_str(s).map_err(|e| err(e.line(), e.to_string()))?;
    if g.framings.len() > MAX_SIZE {
        return Err(err(1, format!("more than {MAX_SIZE} vertices")));
    }
    PlumbingGraph::new(g.framings, g.edges).map_err(|e| err(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinc::{d_plumbing_graph, xi_diagram};

    #[test]
    fn plumbing_round_trip() {
        let g = d_plumbing_graph(4).unwrap();
        let t = plumbing_to_text(&g);
        assert!(t.starts_with("plumbing\nvertex 0 -2\n"));
        assert_eq!(parse_plumbing_text(&t).unwrap(), g);
        assert_eq!(parse_plumbing_json(&plumbing_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn diagram_round_trip() {
        let d = xi_diagram(5, true).unwrap();
        assert_eq!(parse_diagram_text(&diagram_to_text(&d)).unwrap(), d);
        assert_eq!(parse_diagram_json(&diagram_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn comments_and_blanks() {
        let g = parse_plumbing_text("# a chain\n\nplumbing\n  vertex 0 -2\nvertex 1 -3\n# done\nedge 1 0\n").unwrap();
        assert_eq!(g.form(), IntMatrix::from_i64(&[&[-2, 1], &[1, -3]]));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            "",
            "vertex 0 -2",
            "plumbing\nvertex 1 -2",
            "plumbing\nvertex 0 x",
            "plumbing\nvertex 0 -2\nedge 0 1",
            "plumbing\nvertex 0 -2\nvertex 1 -2\nedge 0 1\nedge 1 0",
            "plumbing\nvertex 0 -2\nedge 0 0",
            "plumbing\nvertex 0 -2\nedge 0 99999999999999999999999",
            "plumbing\nvertex 0 -2 7",
        ];
        for s in bad {
            assert!(matches!(parse_plumbing_text(s), Err(Error::Parse { .. })), "{s:?}");
        }
        let bad = [
            "diagram\ncomponent 0 0 2",
            "diagram\ncomponent 0 0 +1\nlink 0 0 1",
            "diagram\ncomponent 0 0 +1\nlink 0 1 1",
            "diagram\ncomponent 0 0 +1\ncomponent 0 0 +1\nlink 0 1 1\nlink 1 0 1",
            "diagram\ncomponent 0 0",
        ];
        for s in bad {
            assert!(matches!(parse_diagram_text(s), Err(Error::Parse { .. })), "{s:?}");
        }
        assert!(parse_diagram_json("{}").is_err());
        assert!(parse_diagram_json(r#"{"components":[],"links":[{"i":0,"j":1,"lk":"1"}]}"#).is_err());
        assert!(parse_plumbing_json(r#"{"framings":["-2"],"edges":[[0,3]]}"#).is_err());
        assert!(parse_plumbing_json(r#"{"framings":[-2],"edges":[]}"#).is_err());
    }

    #[test]
    fn error_lines() {
        match parse_plumbing_text("plumbing\nvertex 0 -2\n\nbogus") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }
}

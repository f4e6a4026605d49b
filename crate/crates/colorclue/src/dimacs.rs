//! DIMACS `.col` reading and writing.
//!
//! Vertices are 1-based in the file and 0-based in [`Graph`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use colorclue_core::coloring::{Coloring, UNCOLORED};
use colorclue_core::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no `p edge` header")]
    MissingHeader,
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

pub fn parse(text: &[u8]) -> Result<Graph, ParseError> {
    let text = String::from_utf8_lossy(text);
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return Err(syntax(line, "second `p` line"));
                }
                let format = tok.next().ok_or_else(|| syntax(line, "malformed header"))?;
                if format != "edge" && format != "col" {
                    return Err(syntax(line, format!("unsupported format `{format}`")));
                }
                let n = number(tok.next(), line, "vertex count")?;
                number(tok.next(), line, "edge count")?;
                graph = Some(Graph::new(n));
            }
            Some("e") => {
                let g = graph.as_mut().ok_or_else(|| syntax(line, "`e` line before `p` line"))?;
                let u = number(tok.next(), line, "endpoint")?;
                let v = number(tok.next(), line, "endpoint")?;
                let n = g.n();
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(syntax(line, format!("vertex out of range 1..={n}")));
                }
                if u == v {
                    return Err(syntax(line, format!("self-loop on vertex {u}")));
                }
                g.add_edge(u - 1, v - 1).map_err(|e| syntax(line, e.to_string()))?;
            }
            // Other DIMACS line types (`n`, `x`, ...) carry nothing we use.
            Some(_) => {}
        }
    }
    graph.ok_or(ParseError::MissingHeader)
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

/// Reads a `.col` file; the graph is named after the file stem.
pub fn read(path: &Path) -> Result<Graph, ParseError> {
    let bytes = fs::read(path).map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    let mut g = parse(&bytes)?;
    if let Some(stem) = path.file_stem() {
        g.set_name(stem.to_string_lossy());
    }
    Ok(g)
}

pub fn to_string(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * g.m() + 32);
    if let Some(name) = g.name() {
        let _ = writeln!(out, "c {name}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn write(g: &Graph, path: &Path) -> std::io::Result<()> {
    fs::write(path, to_string(g))
}

/// The `s c0 c1 ...` solution line; uncolored vertices print as `-`.
pub fn solution_line(c: &Coloring) -> String {
    let mut out = String::from("s");
    for &cls in c.classes() {
        if cls == UNCOLORED {
            out.push_str(" -");
        } else {
            let _ = write!(out, " {cls}");
        }
    }
    out
}

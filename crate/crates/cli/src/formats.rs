//! Text formats: `.pcc` partial matrices, `bcp` biclique lists, `graph`
//! edge lists, `comm` communication matrices, `bf` truth tables, a JSON
//! matrix form, and DOT export.
//!
//! Every parser reports the 1-based line of the first problem.

use std::fmt::Write as _;

use pcc_core::comm::{BoolFunction, CommMatrix};
use pcc_core::graph::{LabeledGraph, OrientedBiclique};
use pcc_core::{Cell, PartialMatrix, TotalMatrix};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Body lines after a header, with trailing blank lines dropped once the
/// expected count is reached.
fn body(text: &str, expected: usize) -> Result<Vec<&str>, FormatError> {
    let mut lines: Vec<&str> = text.lines().skip(1).collect();
    while lines.len() > expected && lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.len() < expected {
        return err(
            lines.len() + 2,
            format!("expected {expected} lines after the header, found {}", lines.len()),
        );
    }
    if lines.len() > expected {
        return err(expected + 2, "unexpected content after the last row");
    }
    Ok(lines)
}

/// Parses `<magic> v1 <a> <b> ...` with `count` numeric fields.
fn header(text: &str, magic: &str, count: usize) -> Result<Vec<usize>, FormatError> {
    let first = text.lines().next().unwrap_or("");
    let fields: Vec<&str> = first.split_whitespace().collect();
    if fields.len() != count + 2 || fields[0] != magic || fields[1] != "v1" {
        let shape: String = (0..count).map(|i| format!(" <n{}>", i + 1)).collect();
        return err(1, format!("expected header `{magic} v1{shape}`, found {first:?}"));
    }
    fields[2..]
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .or_else(|_| err(1, format!("bad number {f:?} in header")))
        })
        .collect()
}

/// The first word of the first line, or `json` for JSON documents.
pub fn sniff(text: &str) -> &str {
    let t = text.trim_start();
    if t.starts_with('{') {
        return "json";
    }
    t.split_whitespace().next().unwrap_or("")
}

pub fn parse_pcc(text: &str) -> Result<PartialMatrix, FormatError> {
    let h = header(text, "pcc", 2)?;
    let (n, k) = (h[0], h[1]);
    let mut rows = Vec::with_capacity(k);
    for (i, line) in body(text, k)?.into_iter().enumerate() {
        let row = line.trim_end();
        let cells: Vec<Cell> = row
            .chars()
            .map(|c| Cell::from_char(c).ok_or(c))
            .collect::<Result<_, char>>()
            .or_else(|c| err(i + 2, format!("bad cell {c:?}; expected 0, 1 or *")))?;
        if cells.len() != n {
            return err(i + 2, format!("row has {} cells, expected {n}", cells.len()));
        }
        rows.push(cells);
    }
    PartialMatrix::new(n, rows).or_else(|e| err(1, e.to_string()))
}

pub fn parse_total(text: &str) -> Result<TotalMatrix, FormatError> {
    let m = parse_pcc(text)?;
    if let Some((i, _)) = m.rows().iter().enumerate().find(|(_, r)| r.iter().any(|c| c.is_star())) {
        return err(i + 2, "`*` is not allowed in a total matrix");
    }
    Ok(TotalMatrix::try_from(m).expect("checked"))
}

pub fn write_pcc(m: &PartialMatrix) -> String {
    format!("pcc v1 {} {}\n{m}", m.n_points(), m.n_concepts())
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph, FormatError> {
    let h = header(text, "graph", 2)?;
    let (n, m) = (h[0], h[1]);
    let mut g = LabeledGraph::new(n);
    for (i, line) in body(text, m)?.into_iter().enumerate() {
        let (u, v) = vertex_pair(line, n, i + 2)?;
        if u == v {
            return err(i + 2, format!("loop at vertex {}", u + 1));
        }
        if !g.add_edge(u, v).or_else(|e| err(i + 2, e.to_string()))? {
            return err(i + 2, format!("duplicate edge {} {}", u + 1, v + 1));
        }
    }
    Ok(g)
}

fn vertex(word: &str, n: usize, line: usize) -> Result<usize, FormatError> {
    match word.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        Ok(v) => err(line, format!("vertex {v} out of range 1..={n}")),
        Err(_) => err(line, format!("bad vertex {word:?}")),
    }
}

fn vertex_pair(line: &str, n: usize, no: usize) -> Result<(usize, usize), FormatError> {
    let words: Vec<&str> = line.split_whitespace().collect();
    if words.len() != 2 {
        return err(no, "expected `u v`");
    }
    Ok((vertex(words[0], n, no)?, vertex(words[1], n, no)?))
}

pub fn write_graph(g: &LabeledGraph) -> String {
    let mut s = format!("graph v1 {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

pub fn write_dot(g: &LabeledGraph) -> String {
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        match g.payloads.as_ref().map(|p| p[v]) {
            Some((x, y)) => {
                let _ = writeln!(s, "  {} [label=\"{} ({},{})\"];", v + 1, v + 1, x + 1, y + 1);
            }
            None => {
                let _ = writeln!(s, "  {};", v + 1);
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {} -- {};", u + 1, v + 1);
    }
    s.push_str("}\n");
    s
}

/// Parses a `bcp v1` file; vertex ranges are checked against `n` from the header.
pub fn parse_bcp(text: &str) -> Result<(usize, Vec<OrientedBiclique>), FormatError> {
    let h = header(text, "bcp", 2)?;
    let (n, k) = (h[0], h[1]);
    let mut out = Vec::with_capacity(k);
    for (i, line) in body(text, k)?.into_iter().enumerate() {
        let no = i + 2;
        let Some((l, r)) = line.split_once(';') else {
            return err(no, "expected `L: ... ; R: ...`");
        };
        let side = |part: &str, tag: &str| -> Result<Vec<usize>, FormatError> {
            let Some(rest) = part.trim().strip_prefix(tag) else {
                return err(no, format!("expected `{tag}`"));
            };
            rest.split_whitespace().map(|w| vertex(w, n, no)).collect()
        };
        let (left, right) = (side(l, "L:")?, side(r, "R:")?);
        if left.is_empty() || right.is_empty() {
            return err(no, "both sides of a biclique must be nonempty");
        }
        out.push(OrientedBiclique::new(left, right));
    }
    Ok((n, out))
}

pub fn write_bcp(n: usize, family: &[OrientedBiclique]) -> String {
    let mut s = format!("bcp v1 {n} {}\n", family.len());
    for b in family {
        let join = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "L: {} ; R: {}", join(&b.left), join(&b.right));
    }
    s
}

pub fn parse_comm(text: &str) -> Result<CommMatrix, FormatError> {
    let h = header(text, "comm", 2)?;
    let (rows, cols) = (h[0], h[1]);
    let mut cells = Vec::with_capacity(rows * cols);
    for (i, line) in body(text, rows)?.into_iter().enumerate() {
        let row = line.trim_end();
        if row.chars().count() != cols {
            return err(i + 2, format!("row has {} cells, expected {cols}", row.chars().count()));
        }
        for c in row.chars() {
            cells.push(match c {
                '0' => false,
                '1' => true,
                _ => return err(i + 2, format!("bad cell {c:?}; expected 0 or 1")),
            });
        }
    }
    CommMatrix::new(rows, cols, cells).or_else(|e| err(1, e.to_string()))
}

pub fn write_comm(h: &CommMatrix) -> String {
    format!("comm v1 {} {}\n{h}", h.rows(), h.cols())
}

pub fn parse_bf(text: &str) -> Result<BoolFunction, FormatError> {
    let h = header(text, "bf", 1)?;
    let n = h[0];
    if n > pcc_core::comm::MAX_ARITY {
        return err(1, format!("arity {n} exceeds {}", pcc_core::comm::MAX_ARITY));
    }
    let line = body(text, 1)?[0].trim_end();
    if line.len() != 1 << n {
        return err(
            2,
            format!("truth table has {} entries, expected {}", line.len(), 1usize << n),
        );
    }
    let table = line
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => err(2, format!("bad truth-table entry {c:?}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    BoolFunction::new(n, table).or_else(|e| err(1, e.to_string()))
}

pub fn write_bf(f: &BoolFunction) -> String {
    let t: String = f.table().iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("bf v1 {}\n{t}\n", f.n())
}

/// Any of the file types, as read from disk.
#[derive(Debug, Clone)]
pub enum Document {
    Pcc(PartialMatrix),
    Comm(CommMatrix),
    Graph(LabeledGraph),
    Bcp(usize, Vec<OrientedBiclique>),
    Bf(BoolFunction),
}

pub fn parse_any(text: &str) -> Result<Document, FormatError> {
    Ok(match sniff(text) {
        "pcc" => Document::Pcc(parse_pcc(text)?),
        "comm" => Document::Comm(parse_comm(text)?),
        "graph" => Document::Graph(parse_graph(text)?),
        "bcp" => {
            let (n, b) = parse_bcp(text)?;
            Document::Bcp(n, b)
        }
        "bf" => Document::Bf(parse_bf(text)?),
        "json" => from_json(text)?,
        other => return err(1, format!("unknown format {other:?}")),
    })
}

pub fn to_json(doc: &Document) -> Value {
    let rows_of = |s: String| s.lines().map(String::from).collect::<Vec<_>>();
    match doc {
        Document::Pcc(m) => json!({
            "format": "pcc",
            "n_points": m.n_points(),
            "rows": rows_of(m.to_string()),
        }),
        Document::Comm(h) => json!({
            "format": "comm",
            "rows": h.rows(),
            "cols": h.cols(),
            "cells": rows_of(h.to_string()),
        }),
        Document::Graph(g) => json!({
            "format": "graph",
            "n": g.n(),
            "edges": g.edges().map(|(u, v)| [u + 1, v + 1]).collect::<Vec<_>>(),
        }),
        Document::Bcp(n, family) => json!({
            "format": "bcp",
            "n": n,
            "bicliques": family.iter().map(biclique_json).collect::<Vec<_>>(),
        }),
        Document::Bf(f) => json!({
            "format": "bf",
            "n": f.n(),
            "table": f.table().iter().map(|&b| if b { '1' } else { '0' }).collect::<String>(),
        }),
    }
}

pub fn biclique_json(b: &OrientedBiclique) -> Value {
    json!({
        "L": b.left.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "R": b.right.iter().map(|v| v + 1).collect::<Vec<_>>(),
    })
}

/// Inverse of [`to_json`]: rebuilds the text form and parses it, so the
/// same checks and line numbers apply (line 1 for a malformed document).
pub fn from_json(text: &str) -> Result<Document, FormatError> {
    let v: Value = serde_json::from_str(text).or_else(|e| err(e.line(), format!("invalid JSON: {e}")))?;
    let bad = |what: &str| FormatError {
        line: 1,
        message: format!("JSON document: missing or invalid {what:?}"),
    };
    let num = |key: &str| {
        v.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| bad(key))
    };
    let strings = |key: &str| -> Result<Vec<String>, FormatError> {
        v.get(key)
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|s| s.as_str().map(String::from)).collect())
            .ok_or_else(|| bad(key))
    };
    let pairs = |key: &str| -> Result<Vec<Vec<u64>>, FormatError> {
        v.get(key)
            .and_then(Value::as_array)
            .and_then(|a| {
                a.iter()
                    .map(|e| e.as_array().and_then(|p| p.iter().map(Value::as_u64).collect()))
                    .collect()
            })
            .ok_or_else(|| bad(key))
    };
    let text = match v.get("format").and_then(Value::as_str) {
        Some("pcc") => {
            let rows = strings("rows")?;
            format!("pcc v1 {} {}\n{}", num("n_points")?, rows.len(), lines(&rows))
        }
        Some("comm") => format!(
            "comm v1 {} {}\n{}",
            num("rows")?,
            num("cols")?,
            lines(&strings("cells")?)
        ),
        Some("graph") => {
            let edges = pairs("edges")?;
            let body: Vec<String> = edges
                .iter()
                .map(|e| e.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            format!("graph v1 {} {}\n{}", num("n")?, edges.len(), lines(&body))
        }
        Some("bf") => format!(
            "bf v1 {}\n{}\n",
            num("n")?,
            v.get("table").and_then(Value::as_str).ok_or_else(|| bad("table"))?
        ),
        Some("bcp") => {
            let list = v
                .get("bicliques")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("bicliques"))?;
            let mut body = Vec::new();
            for b in list {
                let side = |k: &str| -> Result<String, FormatError> {
                    let vs: Vec<u64> = b
                        .get(k)
                        .and_then(Value::as_array)
                        .and_then(|a| a.iter().map(Value::as_u64).collect())
                        .ok_or_else(|| bad(k))?;
                    Ok(vs.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
                };
                body.push(format!("L: {} ; R: {}", side("L")?, side("R")?));
            }
            format!("bcp v1 {} {}\n{}", num("n")?, body.len(), lines(&body))
        }
        _ => return Err(bad("format")),
    };
    parse_any(&text).map_err(|e| FormatError {
        line: 1,
        message: format!("JSON document: {}", e.message),
    })
}

fn lines(rows: &[String]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

pub fn write_document(doc: &Document) -> String {
    match doc {
        Document::Pcc(m) => write_pcc(m),
        Document::Comm(h) => write_comm(h),
        Document::Graph(g) => write_graph(g),
        Document::Bcp(n, b) => write_bcp(*n, b),
        Document::Bf(f) => write_bf(f),
    }
}

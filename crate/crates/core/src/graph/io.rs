//! graph6, DIMACS and JSON graph formats.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn g6_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        message: message.into(),
    }
}

/// Decode one graph6 line. A leading `>>graph6<<` header and trailing
/// whitespace are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end().as_bytes();
    let mut pos = if bytes.starts_with(HEADER.as_bytes()) {
        HEADER.len()
    } else {
        0
    };
    let value = |pos: usize| -> Result<u64> {
        match bytes.get(pos) {
            None => Err(g6_err(pos, "unexpected end of input")),
            Some(&b) if (63..=126).contains(&b) => Ok(u64::from(b - 63)),
            Some(&b) => Err(g6_err(pos, format!("byte 0x{b:02x} outside the range 63..=126"))),
        }
    };
    match bytes.get(pos) {
        None => return Err(g6_err(pos, "empty input, missing vertex-count header")),
        Some(b':') => return Err(g6_err(pos, "sparse6 input is not supported")),
        Some(b'&') => return Err(g6_err(pos, "digraph6 input is not supported")),
        _ => {}
    }

    let n = if bytes[pos] != 126 {
        let n = value(pos)?;
        pos += 1;
        n
    } else if bytes.get(pos + 1) != Some(&126) {
        let mut n = 0;
        for k in 1..=3 {
            n = (n << 6) | value(pos + k).map_err(|_| header_err(pos + k, bytes))?;
        }
        pos += 4;
        n
    } else {
        let mut n = 0;
        for k in 2..=7 {
            n = (n << 6) | value(pos + k).map_err(|_| header_err(pos + k, bytes))?;
        }
        pos += 8;
        n
    };
    let n = usize::try_from(n).map_err(|_| g6_err(0, "vertex count overflows usize"))?;
    if n > 100_000 {
        return Err(g6_err(0, format!("vertex count {n} too large")));
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    let body_start = pos;
    if bytes.len() < body_start + nbytes {
        return Err(g6_err(
            bytes.len(),
            format!(
                "truncated bit stream: expected {nbytes} data bytes for {n} vertices, found {}",
                bytes.len() - body_start
            ),
        ));
    }
    if bytes.len() > body_start + nbytes {
        return Err(g6_err(body_start + nbytes, "trailing data after bit stream"));
    }

    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = value(body_start + k / 6)?;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge_unchecked(i, j);
            }
            k += 1;
        }
    }
    for idx in body_start..body_start + nbytes {
        value(idx)?;
    }
    Ok(g)
}

fn header_err(offset: usize, bytes: &[u8]) -> Error {
    if offset >= bytes.len() {
        g6_err(offset, "truncated vertex-count header")
    } else {
        g6_err(offset, "malformed vertex-count header")
    }
}

/// Encode in graph6 (no header, no newline).
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n() as u64;
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut fill = 0;
    for j in 1..g.n() {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            fill += 1;
            if fill == 6 {
                out.push(acc + 63);
                acc = 0;
                fill = 0;
            }
        }
    }
    if fill > 0 {
        out.push((acc << (6 - fill)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn dimacs_err(line: usize, message: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        message: message.into(),
    }
}

/// Parse DIMACS edge format, discarding warnings.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    parse_dimacs_with_warnings(text).map(|(g, _)| g)
}

/// Parse DIMACS edge format. Lines may also be separated by ` / `, so
/// one-line fixtures such as `"p edge 2 1 / e 1 2"` work. A declared edge
/// count that disagrees with the data produces a warning, not an error.
pub fn parse_dimacs_with_warnings(text: &str) -> Result<(Graph, Vec<String>)> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    let mut edge_lines = 0usize;
    let mut warnings = Vec::new();
    let lines = text.lines().enumerate().flat_map(|(k, l)| l.split(" / ").map(move |p| (k + 1, p)));
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if graph.is_some() {
                    return Err(dimacs_err(lineno, "duplicate problem line"));
                }
                if toks.len() != 4 || !matches!(toks[1], "edge" | "col") {
                    return Err(dimacs_err(lineno, "expected `p edge <n> <m>`"));
                }
                let n: usize = toks[2]
                    .parse()
                    .map_err(|_| dimacs_err(lineno, format!("bad vertex count `{}`", toks[2])))?;
                declared = toks[3]
                    .parse()
                    .map_err(|_| dimacs_err(lineno, format!("bad edge count `{}`", toks[3])))?;
                graph = Some(Graph::empty(n));
            }
            "e" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| dimacs_err(lineno, "edge line before problem line"))?;
                if toks.len() != 3 {
                    return Err(dimacs_err(lineno, "expected `e <u> <v>`"));
                }
                let mut ends = [0usize; 2];
                for (slot, tok) in ends.iter_mut().zip(&toks[1..]) {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| dimacs_err(lineno, format!("bad vertex `{tok}`")))?;
                    if v == 0 || v > g.n() {
                        return Err(dimacs_err(
                            lineno,
                            format!("vertex {v} outside 1..={}", g.n()),
                        ));
                    }
                    *slot = v - 1;
                }
                if ends[0] == ends[1] {
                    return Err(dimacs_err(lineno, format!("self-loop at vertex {}", ends[0] + 1)));
                }
                g.add_edge_unchecked(ends[0], ends[1]);
                edge_lines += 1;
            }
            other => return Err(dimacs_err(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let g = graph.ok_or_else(|| dimacs_err(0, "missing problem line"))?;
    if edge_lines != declared {
        warnings.push(format!(
            "problem line declares {declared} edges but {edge_lines} edge lines were read"
        ));
    }
    Ok((g, warnings))
}

/// JSON graph form `{name, n, edges: [[u, v], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(j.n, &edges)?;
        Ok(match j.name {
            Some(name) => g.with_name(name),
            None => g,
        })
    }
}

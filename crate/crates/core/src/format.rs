//! Text encodings for graphs: graph6 and a plain edge list (`n m` header
//! followed by one `u v` pair per line).

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

const HEADER: &str = ">>graph6<<";

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Decodes one graph6 line. Trailing `\r`/`\n` are ignored, as is the
/// optional `>>graph6<<` header.
pub fn parse_graph6(text: &str) -> Result<SimpleGraph> {
    let mut bytes = text.as_bytes();
    let mut base = 0;
    if bytes.starts_with(HEADER.as_bytes()) {
        bytes = &bytes[HEADER.len()..];
        base = HEADER.len();
    }
    while let [rest @ .., b'\n' | b'\r'] = bytes {
        bytes = rest;
    }
    let sextet = |i: usize| -> Result<u64> {
        match bytes.get(i) {
            None => Err(parse_err(base + i, "truncated input")),
            Some(&b) if (63..=126).contains(&b) => Ok(u64::from(b - 63)),
            Some(&b) => Err(parse_err(base + i, format!("byte {b:#04x} outside 63..=126"))),
        }
    };

    let (n, mut pos) = match bytes.first() {
        None => return Err(parse_err(base, "truncated input: empty graph6 string")),
        Some(126) => {
            if bytes.get(1) == Some(&126) {
                let mut n = 0u64;
                for i in 2..8 {
                    n = (n << 6) | sextet(i)?;
                }
                (n, 8)
            } else {
                let mut n = 0u64;
                for i in 1..4 {
                    n = (n << 6) | sextet(i)?;
                }
                (n, 4)
            }
        }
        Some(_) => {
            let v = sextet(0)?;
            if v == 63 {
                return Err(parse_err(base, "malformed header"));
            }
            (v, 1)
        }
    };
    if n == 0 {
        return Err(parse_err(base, "graph6 encodes zero vertices"));
    }
    let n = usize::try_from(n).map_err(|_| parse_err(base, "vertex count too large"))?;
    let bit_count = n * (n - 1) / 2;
    let byte_count = bit_count.div_ceil(6);
    if bytes.len() < pos + byte_count {
        return Err(parse_err(base + bytes.len(), "truncated bit stream"));
    }
    if bytes.len() > pos + byte_count {
        return Err(parse_err(base + pos + byte_count, "trailing data after bit stream"));
    }

    let mut edges = Vec::new();
    let mut bit = 0usize;
    let mut current = 0u64;
    for j in 1..n {
        for i in 0..j {
            if bit.is_multiple_of(6) {
                current = sextet(pos)?;
                pos += 1;
            }
            if current & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) && current & ((1 << (6 - bit % 6)) - 1) != 0 {
        return Err(parse_err(base + pos - 1, "nonzero padding bits"));
    }
    SimpleGraph::new(n, edges)
}

/// Encodes a graph in graph6 (no header, no newline).
pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    let n64 = n as u64;
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n64 >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n64 >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc <<= 1;
            if g.has_edge(i, j) {
                acc |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decodes every non-empty line of a graph6 corpus.
pub fn parse_graph6_stream(text: &str) -> Vec<Result<SimpleGraph>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(parse_graph6)
        .collect()
}

/// Parses `n m` followed by `m` lines `u v`. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let pair = |line: usize, l: &str| -> Result<(usize, usize)> {
        let nums: Vec<&str> = l.split_whitespace().collect();
        let err = |m: &str| Error::EdgeList {
            line,
            message: m.to_string(),
        };
        if nums.len() != 2 {
            return Err(err("expected two integers"));
        }
        let a = nums[0].parse().map_err(|_| err("not an integer"))?;
        let b = nums[1].parse().map_err(|_| err("not an integer"))?;
        Ok((a, b))
    };
    let (line, header) = lines.next().ok_or(Error::EdgeList {
        line: 1,
        message: "missing header".into(),
    })?;
    let (n, m) = pair(line, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        edges.push(pair(line, l)?);
    }
    if edges.len() != m {
        return Err(Error::EdgeList {
            line,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    SimpleGraph::new(n, edges)
}

pub fn to_edge_list(g: &SimpleGraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

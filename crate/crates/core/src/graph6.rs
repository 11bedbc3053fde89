//! graph6 encoding of unweighted simple graphs, as used by nauty's `geng`.
//!
//! The order is a single byte `n + 63` for `n <= 62`, or `~` followed by
//! three 6-bit bytes for `63 <= n <= 258047`. The upper triangle is then
//! packed column by column, `x(0,1) x(0,2) x(1,2) x(0,3) ...`, six bits per
//! byte, each byte offset by 63, padded with zero bits.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Largest order representable by the short and medium forms.
pub const MAX_ORDER: usize = 258_047;

const HEADER: &str = ">>graph6<<";

pub fn parse_graph6(line: &str) -> Result<WeightedGraph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::MalformedGraph6("empty string".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::MalformedGraph6(format!("byte {b} outside 63..=126")));
    }

    let (n, body) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        // 8-byte form; orders beyond MAX_ORDER are not supported.
        if bytes.len() < 8 {
            return Err(Error::MalformedGraph6("truncated order header".into()));
        }
        let n = bytes[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        return Err(Error::UnsupportedOrder(n));
    } else {
        if bytes.len() < 4 {
            return Err(Error::MalformedGraph6("truncated order header".into()));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    };
    if n == 0 {
        return Err(Error::UnsupportedOrder(0));
    }

    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::MalformedGraph6(format!(
            "order {n} needs {expected} data bytes, found {}",
            body.len()
        )));
    }

    let bit = |k: usize| -> bool {
        let byte = body[k / 6] - 63;
        (byte >> (5 - k % 6)) & 1 == 1
    };
    for k in nbits..expected * 6 {
        if bit(k) {
            return Err(Error::MalformedGraph6("nonzero padding bits".into()));
        }
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    WeightedGraph::unweighted(n, edges)
}

/// Encodes the edge set of `g`; weights are ignored.
pub fn encode_graph6(g: &WeightedGraph) -> Result<String> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }

    let mut adj = vec![false; n * n];
    for e in g.edges() {
        adj[e.u * n + e.v] = true;
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
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
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Reads one graph per non-empty line. Errors carry 1-based line numbers.
pub fn read_graph6<R: BufRead>(reader: R) -> impl Iterator<Item = Result<WeightedGraph>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::from(e).at_line(i + 1))),
            Ok(l) if l.trim().is_empty() => None,
            Ok(l) => Some(parse_graph6(l.trim()).map_err(|e| e.at_line(i + 1))),
        })
}

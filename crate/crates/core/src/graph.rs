//! Simple undirected graphs on v labeled vertices as edge-indicator
//! sequences of length C(v,2), in row-major upper-triangle order:
//! (1,2), (1,3), ..., (1,v), (2,3), ..., (v-1,v).
//!
//! Vertices are 1-based in this module's public surface.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bitio::{check_probability, BitSequence, Mode};
use crate::codec::{build_container, decompress_container, encode_payload};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    v: u64,
    edges: BTreeSet<(u64, u64)>,
}

/// C(v,2), the number of vertex pairs.
pub fn pair_count(v: u64) -> Result<u64> {
    if v < 2 {
        return Err(Error::InvalidGraph(format!("need at least 2 vertices, got {v}")));
    }
    u64::try_from(v as u128 * (v as u128 - 1) / 2).map_err(|_| Error::InvalidGraph(format!("v={v} too large")))
}

/// Zero-based index of pair (i, j), 1 ≤ i < j ≤ v.
pub fn pair_index(i: u64, j: u64, v: u64) -> u64 {
    debug_assert!(1 <= i && i < j && j <= v);
    let r = i - 1;
    r * v - r * (r + 1) / 2 + (j - i - 1)
}

impl GraphSpec {
    /// Builds a graph from 1-based pairs in either orientation.
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(v: u64, edges: I) -> Result<Self> {
        pair_count(v)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if a == 0 || b == 0 || a > v || b > v {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside 1..={v}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
        }
        Ok(GraphSpec { v, edges: set })
    }

    pub fn vertex_count(&self) -> u64 {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (i, j) with i < j, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

pub fn graph_to_bits(g: &GraphSpec) -> BitSequence {
    let n = pair_count(g.v).expect("validated graph");
    let mut bits = BitSequence::zeros(n as usize);
    for (i, j) in g.edges() {
        bits.set(pair_index(i, j, g.v) as usize, true);
    }
    bits
}

pub fn bits_to_graph(bits: &BitSequence, v: u64) -> Result<GraphSpec> {
    let n = pair_count(v)?;
    if bits.len() as u64 != n {
        return Err(Error::LengthMismatch { expected: n, actual: bits.len() as u64 });
    }
    let mut edges = BTreeSet::new();
    let mut it = bits.iter();
    for i in 1..v {
        for j in i + 1..=v {
            if it.next() == Some(true) {
                edges.insert((i, j));
            }
        }
    }
    Ok(GraphSpec { v, edges })
}

/// `block_len = 0` selects direct mode.
pub fn encode_graph(g: &GraphSpec, p: f64, block_len: u32) -> Result<Vec<u8>> {
    check_probability(p)?;
    let bits = graph_to_bits(g);
    let mode = if block_len == 0 { Mode::GraphDirect } else { Mode::GraphBlock };
    let payload = encode_payload(&bits, p, block_len)?;
    build_container(mode, g.v, p, block_len, payload)
}

pub fn decode_graph(bytes: &[u8]) -> Result<GraphSpec> {
    let (header, bits) = decompress_container(bytes)?;
    if !header.mode.is_graph() {
        return Err(Error::BadMode(header.mode as u8));
    }
    bits_to_graph(&bits, header.n_or_v)
}

/// Parses `v <count>` followed by one whitespace-separated `i j` pair per line.
pub fn parse_edge_list(text: &str) -> Result<GraphSpec> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let mut fields = head.split_whitespace();
    if fields.next() != Some("v") {
        return Err(Error::Parse(format!("expected `v <count>`, got {head:?}")));
    }
    let v = parse_u64(fields.next(), head)?;
    if fields.next().is_some() {
        return Err(Error::Parse(format!("trailing fields in {head:?}")));
    }
    let mut edges = Vec::new();
    for line in lines {
        let mut f = line.split_whitespace();
        let a = parse_u64(f.next(), line)?;
        let b = parse_u64(f.next(), line)?;
        if f.next().is_some() {
            return Err(Error::Parse(format!("trailing fields in {line:?}")));
        }
        edges.push((a, b));
    }
    GraphSpec::new(v, edges)
}

fn parse_u64(field: Option<&str>, line: &str) -> Result<u64> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad integer in {line:?}")))
}

/// Canonical edge-list text: header line, then edges in row-major order.
pub fn to_edge_list(g: &GraphSpec) -> String {
    let mut s = format!("v {}\n", g.v);
    for (i, j) in g.edges() {
        writeln!(s, "{i} {j}").unwrap();
    }
    s
}

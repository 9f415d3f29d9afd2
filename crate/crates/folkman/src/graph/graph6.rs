//! graph6 encoding and decoding.
//!
//! The format packs the strict upper triangle of the adjacency matrix in
//! column order — bit `(i, j)` for `j = 1..n`, `i = 0..j` — into 6-bit
//! groups, each printed as the byte `value + 63`.  Orders up to 62 use a
//! single leading byte `n + 63`; larger orders use `'~'` followed by three
//! bytes holding `n` in 18 bits (sufficient here, since [`MAX_VERTICES`]
//! caps the order at 128).

use super::{Graph, MAX_VERTICES};
use crate::{Error, Result};

/// Encode into graph6.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decode from graph6.  Accepts an optional `>>graph6<<` header and
/// surrounding whitespace; anything else malformed is an error.
pub fn from_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6("empty input".into()));
    }
    if let Some(&bad) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {bad:#04x} out of range")));
    }
    let (n, mut pos) = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(Error::Graph6("truncated order field".into()));
        }
        if bytes[1] == b'~' {
            // 36-bit orders are legal graph6 but far beyond this crate.
            return Err(Error::Graph6(format!(
                "order exceeds the representation limit {MAX_VERTICES}"
            )));
        }
        let n = ((bytes[1] - 63) as usize) << 12
            | ((bytes[2] - 63) as usize) << 6
            | (bytes[3] - 63) as usize;
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(Error::Graph6(format!(
            "order {n} exceeds the representation limit {MAX_VERTICES}"
        )));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expect = pos + bits.div_ceil(6);
    if bytes.len() != expect {
        return Err(Error::Graph6(format!(
            "bad length: got {} bytes, expected {expect} for order {n}",
            bytes.len()
        )));
    }
    let mut g = Graph::new(n)?;
    let mut group = 0u8;
    let mut left = 0;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                group = bytes[pos] - 63;
                pos += 1;
                left = 6;
            }
            if group & 0x20 != 0 {
                g.add_edge(i, j)?;
            }
            group <<= 1;
            left -= 1;
        }
    }
    let _ = (group, left); // padding bits are ignored, as most decoders do
    Ok(g)
}

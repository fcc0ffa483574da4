//! Transmission simulator over a two-colored network: data travels along one
//! color while every hop is cross-checked by a square closed through the
//! other color, and payloads can be dispersed as XOR shares, one per color.
//!
//! This is a demonstrator of how the square property can be used, not a
//! security artifact: the digest chain detects accidental corruption and
//! single edits, and makes no claim against an adversary who can recompute
//! it.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};
use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};
use thiserror::Error;

use crate::cayley::completions;
use crate::generators::SquareTable;
use crate::graph::{ColorLayer, ColoredGraph};

/// Output size of [`hash`].
pub const DIGEST_LEN: usize = 32;
pub type Digest = [u8; DIGEST_LEN];

/// The single hash used throughout: SHA-256 over the concatenated parts.
pub fn hash(parts: &[&[u8]]) -> Digest {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().into()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("no color labelled {0:?}")]
    UnknownColor(String),
    #[error("data and check channels must be different colors")]
    SameColor,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("no path from {src} to {dst} in color {color:?}")]
    Unreachable { src: usize, dst: usize, color: String },
    #[error("no square closes data edge {data} and check edge {check} at vertex {vertex}")]
    NoSquare { vertex: usize, data: usize, check: usize },
    #[error("square table is for colors ({0:?}, {1:?})")]
    TableColors(String, String),
    #[error("dispersal over {g} shares needs {g} colors, graph has {available}")]
    TooManyShares { g: usize, available: usize },
    #[error("share count must be positive")]
    NoShares,
    #[error("share for color {0:?} is missing")]
    MissingShare(String),
    #[error("share for color {color:?} has {found} bytes, expected {expected}")]
    ShareLength { color: String, expected: usize, found: usize },
}

/// Why a transmission was rejected.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    #[error("path does not run from {src} to {dst}")]
    Endpoints { src: usize, dst: usize },
    #[error("hop {hop} is not an edge of its color")]
    NotAnEdge { hop: usize },
    #[error("hop {hop} does not start where the previous one ended")]
    Discontinuous { hop: usize },
    #[error("hop {hop} names a color not in the graph")]
    UnknownColor { hop: usize },
    #[error("check square at hop {hop} does not close")]
    SquareMismatch { hop: usize },
    #[error("{found} digests for {expected} hops")]
    DigestCount { expected: usize, found: usize },
    #[error("digest {hop} differs from the replay")]
    DigestMismatch { hop: usize },
}

/// The companion square of one data hop `from → to`: the check edge
/// `from → via`, the data edge `via → corner`, and the closing check edge
/// `to → corner`. Generator indices are positions in the adjacency lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSquare {
    pub generator: usize,
    pub via: usize,
    pub via_generator: usize,
    pub closing_generator: usize,
    pub corner: usize,
}

/// One traversed edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub from: usize,
    pub to: usize,
    pub color: String,
    pub generator: usize,
    pub check: Option<CheckSquare>,
}

impl Hop {
    fn label(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64);
        for x in [self.from, self.to, self.generator] {
            out.extend_from_slice(&(x as u64).to_le_bytes());
        }
        out.extend_from_slice(&(self.color.len() as u64).to_le_bytes());
        out.extend_from_slice(self.color.as_bytes());
        if let Some(c) = &self.check {
            for x in [c.generator, c.via, c.via_generator, c.closing_generator, c.corner] {
                out.extend_from_slice(&(x as u64).to_le_bytes());
            }
        }
        out
    }
}

/// A payload, its route, and its digest chain (one digest per hop, or a
/// single digest for an empty route).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transmission {
    pub src: usize,
    pub dst: usize,
    #[serde(with = "hex::serde")]
    pub payload: Vec<u8>,
    pub path: Vec<Hop>,
    #[serde(with = "hex_digests")]
    pub digests: Vec<Digest>,
}

mod hex_digests {
    use super::Digest;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ds: &[Digest], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(ds.iter().map(hex::encode))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Digest>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|h| {
                let mut out = [0u8; super::DIGEST_LEN];
                hex::decode_to_slice(h, &mut out).map_err(D::Error::custom)?;
                Ok(out)
            })
            .collect()
    }
}

/// Payload chunk for hop `k` of `hops`: near-equal contiguous slices.
fn chunk(payload: &[u8], k: usize, hops: usize) -> &[u8] {
    let len = payload.len();
    &payload[k * len / hops..(k + 1) * len / hops]
}

/// `d₀ = H(src ‖ dst ‖ |payload|)`, then `dₖ = H(dₖ₋₁ ‖ chunkₖ ‖ labelₖ)`.
fn digest_chain(src: usize, dst: usize, payload: &[u8], path: &[Hop]) -> Vec<Digest> {
    let mut d = hash(&[
        b"ramanet transmission",
        &(src as u64).to_le_bytes(),
        &(dst as u64).to_le_bytes(),
        &(payload.len() as u64).to_le_bytes(),
    ]);
    let hops = path.len().max(1);
    let mut out = Vec::with_capacity(hops);
    for k in 0..hops {
        let label = path.get(k).map(Hop::label).unwrap_or_default();
        d = hash(&[&d, chunk(payload, k, hops), &label]);
        out.push(d);
    }
    out
}

fn layer_index(graph: &ColoredGraph, label: &str) -> Result<usize, ProtocolError> {
    graph
        .colors
        .iter()
        .position(|c| c.label == label)
        .ok_or_else(|| ProtocolError::UnknownColor(label.to_string()))
}

/// Shortest path in one color, returned as `(from, generator, to)` triples.
/// Among shortest paths, each step back from `dst` takes the smallest
/// predecessor, so the route is deterministic.
pub fn bfs_route(layer: &ColorLayer, src: usize, dst: usize) -> Option<Vec<(usize, usize, usize)>> {
    let dist = ColoredGraph::bfs(layer, src);
    if dist[dst] == u32::MAX {
        return None;
    }
    let mut route = Vec::with_capacity(dist[dst] as usize);
    let mut cur = dst;
    while cur != src {
        let prev = layer
            .neighbors(cur)
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| dist[u] != u32::MAX && dist[u] + 1 == dist[cur])
            .min()?;
        let g = layer.neighbors(prev).iter().position(|&w| w as usize == cur)?;
        route.push((prev, g, cur));
        cur = prev;
    }
    route.reverse();
    Some(route)
}

/// Square completions for a (data, check) color pair, from a table when one
/// is supplied and by adjacency search otherwise.
struct Completer<'a> {
    data: &'a ColorLayer,
    check: &'a ColorLayer,
    /// `(data gen, check gen) → (closing check gen, via data gen)`.
    table: Option<HashMap<(usize, usize), (usize, usize)>>,
}

impl<'a> Completer<'a> {
    fn new(data: &'a ColorLayer, check: &'a ColorLayer, table: Option<&SquareTable>) -> Result<Self, ProtocolError> {
        let table = match table {
            None => None,
            Some(t) => {
                let map = t.completion_index();
                if t.first_color == data.label && t.second_color == check.label {
                    Some(map)
                } else if t.first_color == check.label && t.second_color == data.label {
                    // first[i]·second[j] = second[j2]·first[i2]: with data in
                    // the second color the data edge is j2, the check edge i,
                    // the closing check edge i2 and the via data edge j
                    Some(map.into_iter().map(|((i, j2), (j, i2))| ((j2, i), (i2, j))).collect())
                } else {
                    return Err(ProtocolError::TableColors(t.first_color.clone(), t.second_color.clone()));
                }
            }
        };
        Ok(Completer { data, check, table })
    }

    /// The square on data edge `d` and check edge `c` at `v`.
    fn square(&self, v: usize, d: usize, c: usize) -> Option<CheckSquare> {
        let (closing, via_gen) = match &self.table {
            Some(map) => *map.get(&(d, c))?,
            None => *completions(self.data, self.check, v, d, c).first()?,
        };
        let via = *self.check.neighbors(v).get(c)? as usize;
        let corner = *self.data.neighbors(via).get(via_gen)? as usize;
        Some(CheckSquare { generator: c, via, via_generator: via_gen, closing_generator: closing, corner })
    }
}

/// Routes `payload` from `src` to `dst` along a BFS path in `data_color`,
/// attaching to every hop a square through a seeded random `check_color`
/// edge, and computes the digest chain.
#[allow(clippy::too_many_arguments)]
pub fn send_with_cross_check(
    graph: &ColoredGraph,
    payload: &[u8],
    src: usize,
    dst: usize,
    data_color: &str,
    check_color: &str,
    table: Option<&SquareTable>,
    rng_seed: u64,
) -> Result<Transmission, ProtocolError> {
    if data_color == check_color {
        return Err(ProtocolError::SameColor);
    }
    let data = &graph.colors[layer_index(graph, data_color)?];
    let check = &graph.colors[layer_index(graph, check_color)?];
    for v in [src, dst] {
        if v >= graph.n() {
            return Err(ProtocolError::VertexOutOfRange(v));
        }
    }
    let completer = Completer::new(data, check, table)?;
    let route = bfs_route(data, src, dst).ok_or_else(|| ProtocolError::Unreachable {
        src,
        dst,
        color: data_color.to_string(),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut path = Vec::with_capacity(route.len());
    for (from, g, to) in route {
        let degree = check.degree(from);
        if degree == 0 {
            return Err(ProtocolError::NoSquare { vertex: from, data: g, check: 0 });
        }
        let c = rng.gen_range(0..degree);
        let square = completer
            .square(from, g, c)
            .ok_or(ProtocolError::NoSquare { vertex: from, data: g, check: c })?;
        path.push(Hop { from, to, color: data_color.to_string(), generator: g, check: Some(square) });
    }
    let digests = digest_chain(src, dst, payload, &path);
    Ok(Transmission { src, dst, payload: payload.to_vec(), path, digests })
}

/// Replays a transmission: every hop must be an edge of its color that
/// continues the previous one, every check square must close in the graph
/// (and agree with the table when one is given), and the recomputed digest
/// chain must equal the transmitted one bit for bit.
pub fn verify(graph: &ColoredGraph, t: &Transmission, check_color: Option<&str>, table: Option<&SquareTable>) -> Result<(), Rejection> {
    let end = t.path.last().map_or(t.src, |h| h.to);
    if t.path.first().map_or(t.src, |h| h.from) != t.src || end != t.dst {
        return Err(Rejection::Endpoints { src: t.src, dst: t.dst });
    }
    let check = match check_color {
        Some(c) => Some(layer_index(graph, c).map_err(|_| Rejection::UnknownColor { hop: 0 })?),
        None => None,
    };
    let mut completers: HashMap<String, Completer> = HashMap::new();
    for (k, hop) in t.path.iter().enumerate() {
        if k > 0 && t.path[k - 1].to != hop.from {
            return Err(Rejection::Discontinuous { hop: k });
        }
        let li = layer_index(graph, &hop.color).map_err(|_| Rejection::UnknownColor { hop: k })?;
        let layer = &graph.colors[li];
        if hop.from >= layer.n() || layer.neighbors(hop.from).get(hop.generator).map(|&w| w as usize) != Some(hop.to) {
            return Err(Rejection::NotAnEdge { hop: k });
        }
        match (check, &hop.check) {
            (None, None) => {}
            (Some(ci), Some(sq)) if ci != li => {
                if !completers.contains_key(&hop.color) {
                    let c = Completer::new(layer, &graph.colors[ci], table)
                        .map_err(|_| Rejection::SquareMismatch { hop: k })?;
                    completers.insert(hop.color.clone(), c);
                }
                let expected = completers[&hop.color].square(hop.from, hop.generator, sq.generator);
                let closes = graph.colors[ci].neighbors(hop.to).get(sq.closing_generator).map(|&w| w as usize)
                    == Some(sq.corner);
                if expected.as_ref() != Some(sq) || !closes {
                    return Err(Rejection::SquareMismatch { hop: k });
                }
            }
            _ => return Err(Rejection::SquareMismatch { hop: k }),
        }
    }
    let replay = digest_chain(t.src, t.dst, &t.payload, &t.path);
    if replay.len() != t.digests.len() {
        return Err(Rejection::DigestCount { expected: replay.len(), found: t.digests.len() });
    }
    match replay.iter().zip(&t.digests).position(|(a, b)| a != b) {
        Some(hop) => Err(Rejection::DigestMismatch { hop }),
        None => Ok(()),
    }
}

/// JSON record of a transmission and its verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema_version: u32,
    pub data_color: String,
    pub check_color: Option<String>,
    pub transmission: Transmission,
    pub accepted: bool,
    pub rejection: Option<Rejection>,
}

impl Transcript {
    pub fn new(t: Transmission, data_color: &str, check_color: Option<&str>, verdict: Result<(), Rejection>) -> Self {
        Transcript {
            schema_version: crate::SCHEMA_VERSION,
            data_color: data_color.to_string(),
            check_color: check_color.map(str::to_string),
            transmission: t,
            accepted: verdict.is_ok(),
            rejection: verdict.err(),
        }
    }
}

/// A payload split into XOR shares, share `k` travelling on color `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispersalSet {
    pub g: usize,
    pub colors: Vec<String>,
    /// `None` marks a share that did not arrive.
    pub shares: Vec<Option<ShareBytes>>,
    pub routes: Vec<Transmission>,
}

/// Share contents, hex-encoded in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShareBytes(#[serde(with = "hex::serde")] pub Vec<u8>);

/// Splits `payload` into `g` XOR shares (`g − 1` uniformly random, the last
/// the XOR of the payload with the others) and sends share `k` along a
/// seeded random walk of `walk_len` steps in color `k`. With `g = 1` the
/// single share is the payload itself.
pub fn disperse(
    graph: &ColoredGraph,
    payload: &[u8],
    g: usize,
    walk_len: usize,
    rng_seed: u64,
) -> Result<DispersalSet, ProtocolError> {
    if g == 0 {
        return Err(ProtocolError::NoShares);
    }
    if g > graph.colors.len() {
        return Err(ProtocolError::TooManyShares { g, available: graph.colors.len() });
    }
    if graph.n() == 0 {
        return Err(ProtocolError::VertexOutOfRange(0));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    let mut shares: Vec<Vec<u8>> = Vec::with_capacity(g);
    let mut last = payload.to_vec();
    for _ in 1..g {
        let mut s = vec![0u8; payload.len()];
        rng.fill_bytes(&mut s);
        last.iter_mut().zip(&s).for_each(|(a, b)| *a ^= b);
        shares.push(s);
    }
    shares.push(last);
    let mut routes = Vec::with_capacity(g);
    for (k, share) in shares.iter().enumerate() {
        let layer = &graph.colors[k];
        let src = rng.gen_range(0..graph.n());
        let mut path = Vec::with_capacity(walk_len);
        let mut v = src;
        for _ in 0..walk_len {
            let d = layer.degree(v);
            if d == 0 {
                break;
            }
            let gen = rng.gen_range(0..d);
            let w = layer.neighbors(v)[gen] as usize;
            path.push(Hop { from: v, to: w, color: layer.label.clone(), generator: gen, check: None });
            v = w;
        }
        let digests = digest_chain(src, v, share, &path);
        routes.push(Transmission { src, dst: v, payload: share.clone(), path, digests });
    }
    Ok(DispersalSet {
        g,
        colors: graph.colors[..g].iter().map(|c| c.label.clone()).collect(),
        shares: shares.into_iter().map(|s| Some(ShareBytes(s))).collect(),
        routes,
    })
}

/// XOR of all shares; fails naming the color of the first missing share or
/// of a share whose length disagrees with the first.
pub fn reconstruct(set: &DispersalSet) -> Result<Vec<u8>, ProtocolError> {
    let mut out: Option<Vec<u8>> = None;
    for (k, share) in set.shares.iter().enumerate() {
        let color = set.colors.get(k).cloned().unwrap_or_else(|| format!("#{k}"));
        let s = share.as_ref().ok_or_else(|| ProtocolError::MissingShare(color.clone()))?;
        match &mut out {
            None => out = Some(s.0.clone()),
            Some(acc) => {
                if acc.len() != s.0.len() {
                    return Err(ProtocolError::ShareLength { color, expected: acc.len(), found: s.0.len() });
                }
                acc.iter_mut().zip(&s.0).for_each(|(a, b)| *a ^= b);
            }
        }
    }
    if set.shares.len() < set.g {
        let color = set.colors.get(set.shares.len()).cloned().unwrap_or_default();
        return Err(ProtocolError::MissingShare(color));
    }
    out.ok_or(ProtocolError::NoShares)
}

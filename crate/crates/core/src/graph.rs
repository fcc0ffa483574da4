//! Multi-colored undirected multigraphs on a shared vertex set: storage,
//! audits, traversal, and the edge-list / DOT / JSON formats.
//!
//! Each color is stored as adjacency lists in which an edge `u — v` appears
//! once in the list of `u` and once in the list of `v`; a self-loop appears
//! twice in the list of its vertex, so it adds 2 to the degree and to the
//! diagonal of the adjacency matrix. In a Cayley graph slot `k` of every list
//! is the edge along generator `k`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One color class of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorLayer {
    pub label: String,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl ColorLayer {
    /// A layer in which every vertex has exactly `r` slots, `flat[v*r + k]`.
    pub fn regular(label: impl Into<String>, r: usize, flat: Vec<u32>) -> Self {
        let n = flat.len().checked_div(r).unwrap_or(0);
        assert_eq!(n * r, flat.len(), "flat adjacency is not a multiple of r");
        ColorLayer {
            label: label.into(),
            offsets: (0..=n).map(|v| v * r).collect(),
            targets: flat,
        }
    }

    /// A layer with no edges on `n` vertices.
    pub fn empty(label: impl Into<String>, n: usize) -> Self {
        ColorLayer {
            label: label.into(),
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    fn from_lists(label: String, lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for l in lists {
            targets.extend(l);
            offsets.push(targets.len());
        }
        ColorLayer { label, offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// The common degree, if every vertex has the same one.
    pub fn regularity(&self) -> Option<usize> {
        let n = self.n();
        if n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (1..n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Whether every edge appears from both ends equally often.
    pub fn is_symmetric(&self) -> bool {
        let mut fwd: Vec<(u32, u32)> = Vec::with_capacity(self.targets.len());
        for v in 0..self.n() {
            for &w in self.neighbors(v) {
                fwd.push((v as u32, w));
            }
        }
        let mut rev: Vec<(u32, u32)> = fwd.iter().map(|&(a, b)| (b, a)).collect();
        fwd.sort_unstable();
        rev.sort_unstable();
        fwd == rev
    }

    pub fn self_loops(&self) -> usize {
        (0..self.n())
            .map(|v| self.neighbors(v).iter().filter(|&&w| w as usize == v).count())
            .sum::<usize>()
            / 2
    }

    /// Number of unordered pairs `{u, v}` joined by more than one edge.
    pub fn multi_edge_pairs(&self) -> usize {
        let mut count = 0;
        for v in 0..self.n() {
            let mut ns: Vec<u32> = self.neighbors(v).iter().copied().filter(|&w| w as usize > v).collect();
            ns.sort_unstable();
            count += ns.windows(2).filter(|w| w[0] == w[1]).count();
        }
        count
    }

    /// `y = A x` for the adjacency matrix of this layer.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&w| x[w as usize]).sum();
        }
    }

    /// Undirected edges `(u, v)` with `u ≤ v`, each once, in adjacency order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 0..self.n() {
            let mut loops = 0;
            for &w in self.neighbors(v) {
                if (w as usize) > v {
                    out.push((v as u32, w));
                } else if w as usize == v {
                    loops += 1;
                    if loops % 2 == 0 {
                        out.push((v as u32, w));
                    }
                }
            }
        }
        out
    }
}

/// Several color layers on one vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    pub colors: Vec<ColorLayer>,
}

/// Connected components of one color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub color: String,
    pub count: usize,
    pub sizes: Vec<usize>,
    /// 2-colorability of each component.
    pub bipartite: Vec<bool>,
    /// Eccentricity maximum per component (exact or sampled, see `diameter_exact`).
    pub diameters: Vec<u32>,
    pub diameter_exact: bool,
}

impl ComponentReport {
    pub fn connected(&self) -> bool {
        self.count == 1
    }

    pub fn all_bipartite(&self) -> bool {
        self.bipartite.iter().all(|&b| b)
    }
}

/// Vertex counts up to this size get exact diameters.
pub const EXACT_DIAMETER_LIMIT: usize = 5000;
/// Number of BFS roots used for a diameter lower bound on larger graphs.
pub const DIAMETER_SAMPLES: usize = 64;

impl ColoredGraph {
    pub fn new(n: usize, colors: Vec<ColorLayer>) -> Self {
        for c in &colors {
            assert_eq!(c.n(), n, "color {} has the wrong vertex count", c.label);
        }
        ColoredGraph { n, colors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, label: &str) -> Result<&ColorLayer, GraphError> {
        self.colors
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| GraphError::UnknownColor(label.to_string()))
    }

    /// BFS distances from `root` in one color; `u32::MAX` marks unreachable.
    pub fn bfs(layer: &ColorLayer, root: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; layer.n()];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for &w in layer.neighbors(v) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Components, bipartiteness and diameters of one color.
    pub fn parity_components(layer: &ColorLayer) -> ComponentReport {
        let n = layer.n();
        let mut comp = vec![usize::MAX; n];
        let mut side = vec![0u8; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut bipartite = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = members.len();
            let mut list = vec![root];
            let mut ok = true;
            comp[root] = id;
            let mut head = 0;
            while head < list.len() {
                let v = list[head];
                head += 1;
                for &w in layer.neighbors(v) {
                    let w = w as usize;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        side[w] = side[v] ^ 1;
                        list.push(w);
                    } else if side[w] == side[v] {
                        ok = false;
                    }
                }
            }
            members.push(list);
            bipartite.push(ok);
        }
        let exact = n <= EXACT_DIAMETER_LIMIT;
        let diameters = members
            .iter()
            .map(|list| {
                let roots: Vec<usize> = if exact {
                    list.clone()
                } else {
                    let step = (list.len() / DIAMETER_SAMPLES).max(1);
                    list.iter().copied().step_by(step).take(DIAMETER_SAMPLES).collect()
                };
                roots
                    .iter()
                    .map(|&r| {
                        Self::bfs(layer, r)
                            .into_iter()
                            .filter(|&d| d != u32::MAX)
                            .max()
                            .unwrap_or(0)
                    })
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        ComponentReport {
            color: layer.label.clone(),
            count: members.len(),
            sizes: members.iter().map(Vec::len).collect(),
            bipartite,
            diameters,
            diameter_exact: exact,
        }
    }

    /// Lines `u v color`, one per undirected edge, preceded by `#` headers
    /// giving the vertex count and the colors in order.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# vertices {}", self.n)?;
        for c in &self.colors {
            writeln!(w, "# color {}", c.label)?;
        }
        for c in &self.colors {
            for (u, v) in c.edges() {
                writeln!(w, "{u} {v} {}", c.label)?;
            }
        }
        Ok(())
    }

    /// Reads the edge-list format. Without a `# vertices` header the vertex
    /// count is one more than the largest index; colors without a `# color`
    /// header are added in order of first appearance.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut declared_n: Option<usize> = None;
        let mut labels: Vec<String> = Vec::new();
        let mut edges: Vec<(u64, u64, usize)> = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                match (parts.next(), parts.next()) {
                    (Some("vertices"), Some(v)) => {
                        declared_n = Some(v.parse().map_err(|_| GraphError::Parse {
                            line: lineno,
                            msg: format!("bad vertex count {v:?}"),
                        })?);
                    }
                    (Some("color"), Some(c)) if !labels.iter().any(|l| l == c) => {
                        labels.push(c.to_string())
                    }
                    _ => {}
                }
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "expected `u v color`".into(),
                });
            }
            let parse = |s: &str| {
                s.parse::<u64>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("bad vertex index {s:?}"),
                })
            };
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            let ci = match labels.iter().position(|l| l == parts[2]) {
                Some(i) => i,
                None => {
                    labels.push(parts[2].to_string());
                    labels.len() - 1
                }
            };
            edges.push((u, v, ci));
        }
        let n = declared_n.unwrap_or_else(|| {
            edges.iter().map(|&(u, v, _)| u.max(v) as usize + 1).max().unwrap_or(0)
        });
        let mut lists: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; labels.len()];
        for (u, v, c) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            lists[c][u as usize].push(v as u32);
            lists[c][v as usize].push(u as u32);
        }
        let colors = labels
            .into_iter()
            .zip(lists)
            .map(|(l, ls)| ColorLayer::from_lists(l, ls))
            .collect();
        Ok(ColoredGraph::new(n, colors))
    }

    /// Graphviz `graph` with one `color` attribute per color layer.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut s = String::from("graph X {\n  node [shape=point];\n");
        for (ci, c) in self.colors.iter().enumerate() {
            let col = PALETTE[ci % PALETTE.len()];
            for (u, v) in c.edges() {
                let _ = writeln!(s, "  {u} -- {v} [color={col}, label=\"{}\"];", c.label);
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn summary(&self, modulus: Option<u64>) -> GraphSummary {
        GraphSummary {
            schema_version: crate::SCHEMA_VERSION,
            modulus,
            vertices: self.n,
            colors: self
                .colors
                .iter()
                .map(|c| {
                    let comps = Self::parity_components(c);
                    ColorSummary {
                        label: c.label.clone(),
                        regularity: c.regularity(),
                        symmetric: c.is_symmetric(),
                        self_loops: c.self_loops(),
                        multi_edge_pairs: c.multi_edge_pairs(),
                        components: comps.count,
                        bipartite: comps.all_bipartite(),
                    }
                })
                .collect(),
        }
    }

    /// Edge multiset per color, sorted; equal for isomorphic-by-identity graphs.
    pub fn sorted_edges(&self) -> BTreeMap<String, Vec<(u32, u32)>> {
        self.colors
            .iter()
            .map(|c| {
                let mut e = c.edges();
                e.sort_unstable();
                (c.label.clone(), e)
            })
            .collect()
    }
}

/// JSON summary of a colored graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub schema_version: u32,
    /// The prime `N` for Cayley graphs on `PSL(2, F_N)`.
    pub modulus: Option<u64>,
    pub vertices: usize,
    pub colors: Vec<ColorSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSummary {
    pub label: String,
    /// `None` when the degree audit fails.
    pub regularity: Option<usize>,
    pub symmetric: bool,
    pub self_loops: usize,
    pub multi_edge_pairs: usize,
    pub components: usize,
    pub bipartite: bool,
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn cycle_audit() {
        let c = cycle(6);
        assert_eq!(c.regularity(), Some(2));
        assert!(c.is_symmetric());
        let r = ColoredGraph::parity_components(&c);
        assert_eq!((r.count, r.diameters[0]), (1, 3));
        assert!(r.all_bipartite());
        assert!(!ColoredGraph::parity_components(&cycle(5)).all_bipartite());
    }

    #[test]
    fn empty_color_has_singleton_components() {
        let r = ColoredGraph::parity_components(&ColorLayer::empty("x", 4));
        assert_eq!(r.count, 4);
        assert_eq!(r.sizes, vec![1; 4]);
    }

    #[test]
    fn edge_list_round_trip_with_loops_and_multi_edges() {
        let layer = simple(3, "a", &[(0, 1), (0, 1), (2, 2), (1, 2)]);
        assert_eq!(layer.self_loops(), 1);
        assert_eq!(layer.multi_edge_pairs(), 1);
        let g = ColoredGraph::new(3, vec![layer, complete(3)]);
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = ColoredGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.sorted_edges(), g.sorted_edges());
        assert_eq!(back.n(), 3);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            ColoredGraph::read_edge_list("0 1".as_bytes()),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ColoredGraph::read_edge_list("# vertices 2\n0 5 a\n".as_bytes()),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 2 })
        ));
    }

    #[test]
    fn irregular_graph_fails_audit() {
        let g = ColoredGraph::read_edge_list("0 1 a\n1 2 a\n2 0 a\n0 3 a\n".as_bytes()).unwrap();
        assert_eq!(g.colors[0].regularity(), None);
        assert_eq!(g.summary(None).colors[0].regularity, None);
    }

    #[test]
    fn dot_mentions_every_edge() {
        let g = ColoredGraph::new(4, vec![complete(4)]);
        let dot = g.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.starts_with("graph X {"));
    }

    #[test]
    fn apply_matches_degrees() {
        let c = complete(5);
        let mut y = vec![0.0; 5];
        c.apply(&[1.0; 5], &mut y);
        assert!(y.iter().all(|&v| v == 4.0));
    }
}

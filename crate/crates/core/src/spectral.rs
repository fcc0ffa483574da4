//! Adjacency spectra of graph colors and the checks built on them: the
//! Ramanujan bound, girth, diameter, and spectral and exact expansion.

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColorLayer, ColoredGraph, DIAMETER_SAMPLES, EXACT_DIAMETER_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("{n} vertices exceed the dense cap {cap}; use the iterative path")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("Lanczos did not converge in {iterations} steps (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("graph has no vertices")]
    Empty,
}

/// Default vertex limit for full spectra.
pub const DENSE_CAP: usize = 4000;
/// Absolute slack in the Ramanujan comparison.
pub const RAMANUJAN_TOL: f64 = 1e-6;

/// Dense adjacency matrix of one color, multiplicities included.
pub fn adjacency_matrix(layer: &ColorLayer) -> DMatrix<f64> {
    let n = layer.n();
    let mut a = DMatrix::zeros(n, n);
    for v in 0..n {
        for &w in layer.neighbors(v) {
            a[(v, w as usize)] += 1.0;
        }
    }
    a
}

/// Every eigenvalue of the adjacency matrix, descending.
///
/// Householder reduction to tridiagonal form followed by implicit QR sweeps
/// of Givens rotations, iterated until the off-diagonal is negligible at
/// machine precision (far below `10⁻¹⁰·‖A‖`).
pub fn spectrum_dense(layer: &ColorLayer, cap: usize) -> Result<Vec<f64>, SpectralError> {
    let n = layer.n();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    if n > cap {
        return Err(SpectralError::DenseCapExceeded { n, cap });
    }
    let a = adjacency_matrix(layer);
    let mut evs: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    evs.sort_by(|x, y| y.total_cmp(x));
    Ok(evs)
}

/// Extremal eigenvalues from the Krylov iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    /// Largest Ritz values, descending.
    pub top: Vec<f64>,
    /// Smallest Ritz values, ascending.
    pub bottom: Vec<f64>,
    /// Largest residual `‖Av − θv‖` among the reported values.
    pub residual: f64,
    pub iterations: usize,
}

/// Settings for [`spectrum_extremes`].
#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub max_iterations: usize,
    /// Required residual, relative to the regularity.
    pub relative_tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig { max_iterations: 1500, relative_tol: 1e-8, seed: 0x5eed }
    }
}

/// The `k` largest and `k` smallest eigenvalues by Lanczos with full
/// reorthogonalization on the sparse adjacency operator.
///
/// In exact arithmetic the Krylov space sees each distinct eigenvalue once,
/// so a repeated eigenvalue is reported once. A Cayley graph has few
/// distinct eigenvalues (at most the sum of the irreducible degrees), so the
/// iteration usually terminates with an invariant subspace.
pub fn spectrum_extremes(layer: &ColorLayer, k: usize, cfg: LanczosConfig) -> Result<Extremes, SpectralError> {
    let n = layer.n();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let scale = layer.regularity().unwrap_or_else(|| (0..n).map(|v| layer.degree(v)).max().unwrap_or(1)).max(1) as f64;
    let tol = cfg.relative_tol * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let max_it = cfg.max_iterations.min(n);
    let mut best = f64::INFINITY;
    for it in 0..max_it {
        layer.apply(&q, &mut w);
        let a = dot(&q, &w);
        basis.push(q.clone());
        alpha.push(a);
        // w ← w − a q − β q_prev, then twice against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let bnorm = dot(&w, &w).sqrt();
        let invariant = bnorm <= 1e-10 * scale;
        let check = invariant || it + 1 == max_it || (it + 1) % 20 == 0;
        if invariant || (check && alpha.len() >= 2 * k) {
            let (ritz, res) = ritz_pairs(&alpha, &beta, bnorm);
            let m = ritz.len();
            let kk = k.min(m);
            let wanted: Vec<usize> = (0..kk).chain(m - kk..m).collect();
            let worst = wanted.iter().map(|&i| res[i]).fold(0.0, f64::max);
            best = best.min(worst);
            if worst <= tol || invariant {
                let mut top: Vec<f64> = ritz[m - kk..].to_vec();
                top.reverse();
                return Ok(Extremes {
                    top,
                    bottom: ritz[..kk].to_vec(),
                    residual: worst,
                    iterations: it + 1,
                });
            }
        }
        beta.push(bnorm);
        q = w.iter().map(|x| x / bnorm).collect();
    }
    Err(SpectralError::NoConvergence { iterations: max_it, residual: best })
}

/// Ritz values of the tridiagonal matrix (ascending) and their residual
/// bounds `|β_m · s_m|`, which equal `‖Av − θv‖` for the Ritz vectors.
fn ritz_pairs(alpha: &[f64], beta: &[f64], next_beta: f64) -> (Vec<f64>, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], (next_beta * eig.eigenvectors[(m - 1, i)]).abs()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Outcome of the Ramanujan comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub ramanujan: bool,
    pub bound: f64,
    /// Largest `|λ|` over the nontrivial eigenvalues supplied.
    pub worst_nontrivial: f64,
    /// Largest nontrivial eigenvalue `λ₂`.
    pub lambda2: f64,
    /// Smallest nontrivial eigenvalue.
    pub lambda_min: f64,
}

/// Drops one copy of `r` (and one of `−r` if `bipartite`) and tests
/// `|λ| ≤ 2√(r−1) + tol` on the rest.
pub fn ramanujan_verdict(evs: &[f64], r: f64, bipartite: bool, tol: f64) -> Verdict {
    let mut rest: Vec<f64> = evs.to_vec();
    let mut drop_near = |target: f64| {
        if let Some((i, _)) = rest
            .iter()
            .enumerate()
            .filter(|(_, &x)| (x - target).abs() <= 1e-6 * r.max(1.0))
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        {
            rest.swap_remove(i);
        }
    };
    drop_near(r);
    if bipartite {
        drop_near(-r);
    }
    let bound = 2.0 * (r - 1.0).max(0.0).sqrt();
    let worst = rest.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Verdict {
        ramanujan: worst <= bound + tol,
        bound,
        worst_nontrivial: worst,
        lambda2: rest.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        lambda_min: rest.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// Girth and diameter of one color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthDiameter {
    /// `None` for an acyclic color.
    pub girth: Option<u32>,
    /// Largest finite distance found.
    pub diameter: u32,
    pub diameter_exact: bool,
}

/// Shortest cycle through `root`, searching only up to length `cutoff`.
/// The edge a vertex was reached by is skipped once, so a doubled edge
/// closes a 2-cycle and a self-loop a 1-cycle.
fn shortest_cycle_from(layer: &ColorLayer, root: usize, cutoff: u32) -> Option<u32> {
    let n = layer.n();
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    let mut best: Option<u32> = None;
    while let Some(v) = queue.pop_front() {
        if 2 * dist[v] + 1 >= best.unwrap_or(cutoff + 1) {
            break;
        }
        let mut skipped = false;
        for &w in layer.neighbors(v) {
            let w = w as usize;
            if w == v {
                best = Some(best.map_or(1, |b| b.min(1)));
                continue;
            }
            if w == parent[v] && !skipped {
                skipped = true;
                continue;
            }
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            } else {
                let len = dist[v] + dist[w] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best.filter(|&b| b <= cutoff)
}

/// Girth via BFS from every vertex (or one vertex when `vertex_transitive`),
/// with early cutoff at the best cycle so far; diameter exact up to
/// [`EXACT_DIAMETER_LIMIT`] vertices (or always when vertex-transitive),
/// otherwise a lower bound from sampled roots.
pub fn girth_and_diameter(layer: &ColorLayer, vertex_transitive: bool) -> GirthDiameter {
    let n = layer.n();
    let roots: Vec<usize> = if vertex_transitive { vec![0] } else { (0..n).collect() };
    let mut girth: Option<u32> = None;
    for &r in roots.iter().filter(|_| n > 0) {
        let cutoff = girth.map_or(u32::MAX - 1, |g| g - 1);
        if let Some(c) = shortest_cycle_from(layer, r, cutoff) {
            girth = Some(c);
        }
    }
    let exact = vertex_transitive || n <= EXACT_DIAMETER_LIMIT;
    let diam_roots: Vec<usize> = if vertex_transitive {
        vec![0]
    } else if exact {
        (0..n).collect()
    } else {
        let step = (n / DIAMETER_SAMPLES).max(1);
        (0..n).step_by(step).take(DIAMETER_SAMPLES).collect()
    };
    let diameter = diam_roots
        .iter()
        .filter(|_| n > 0)
        .map(|&r| ColoredGraph::bfs(layer, r).into_iter().filter(|&d| d != u32::MAX).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    GirthDiameter { girth, diameter, diameter_exact: exact }
}

/// Largest graph for exact expansion by subset enumeration.
pub const EXACT_EXPANSION_LIMIT: usize = 24;

/// Exact expansion constants over nonempty `S` with `|S| ≤ n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// `min |E(S, S̄)| / |S|`, edges counted with multiplicity.
    pub edge: f64,
    /// `min |N(S) \ S| / |S|`.
    pub vertex: f64,
}

/// Exact edge and vertex expansion by enumerating every subset; `None`
/// above [`EXACT_EXPANSION_LIMIT`] vertices.
pub fn exact_expansion(layer: &ColorLayer) -> Option<Expansion> {
    let n = layer.n();
    if n == 0 || n > EXACT_EXPANSION_LIMIT {
        return None;
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| layer.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut best = Expansion { edge: f64::INFINITY, vertex: f64::INFINITY };
    for s in 1u32..(1u32 << n) {
        let size = s.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let mut boundary_edges = 0usize;
        let mut nbhd = 0u32;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            nbhd |= masks[v];
            boundary_edges += layer.neighbors(v).iter().filter(|&&w| s & (1 << w) == 0).count();
        }
        let outside = (nbhd & !s).count_ones() as f64;
        best.edge = best.edge.min(boundary_edges as f64 / size as f64);
        best.vertex = best.vertex.min(outside / size as f64);
    }
    Some(best)
}

/// `(trace A, trace A²)` straight from the adjacency lists.
pub fn trace_moments(layer: &ColorLayer) -> (f64, f64) {
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for v in 0..layer.n() {
        let mut ns: Vec<u32> = layer.neighbors(v).to_vec();
        ns.sort_unstable();
        for chunk in ns.chunk_by(|a, b| a == b) {
            let m = chunk.len() as f64;
            if chunk[0] as usize == v {
                t1 += m;
            }
            t2 += m * m;
        }
    }
    (t1, t2)
}

/// How the spectral data was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

/// Spectral and combinatorial summary of one color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub schema_version: u32,
    pub color: String,
    pub r: usize,
    pub n: usize,
    pub lambda_max_nontrivial: f64,
    pub lambda_min: f64,
    pub ramanujan_bound: f64,
    pub verdict: bool,
    pub bipartite: bool,
    pub connected: bool,
    pub girth: Option<u32>,
    pub diameter: u32,
    pub diameter_exact: bool,
    /// `(r − λ₂)/2`, a lower bound on the edge expansion.
    pub cheeger_lower: f64,
    pub exact_expansion: Option<Expansion>,
    pub method: Method,
    /// Lanczos residual; 0 for the dense path.
    pub residual: f64,
    /// `|Σλ − trace A|` and `|Σλ² − trace A²|` on the dense path.
    pub trace_error: Option<(f64, f64)>,
}

/// Settings for [`analyze`].
#[derive(Debug, Clone, Copy)]
pub struct AnalyzeConfig {
    /// Largest vertex count for the full dense spectrum.
    pub dense_cap: usize,
    /// Slack in the Ramanujan comparison.
    pub tol: f64,
    /// Lets girth and diameter use a single BFS root.
    pub vertex_transitive: bool,
    pub lanczos: LanczosConfig,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            dense_cap: DENSE_CAP,
            tol: RAMANUJAN_TOL,
            vertex_transitive: false,
            lanczos: LanczosConfig::default(),
        }
    }
}

/// Full spectral report for one color, with the dense spectrum when it was
/// computed. Uses the dense path up to `dense_cap` vertices and Lanczos
/// above it. An irregular color never passes.
pub fn analyze(layer: &ColorLayer, cfg: AnalyzeConfig) -> Result<(SpectralReport, Option<Vec<f64>>), SpectralError> {
    let n = layer.n();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let r = layer.regularity().unwrap_or_else(|| (0..n).map(|v| layer.degree(v)).max().unwrap_or(0));
    let comps = ColoredGraph::parity_components(layer);
    let bipartite = comps.all_bipartite();
    let (evs, method, residual, trace_error, full) = if n <= cfg.dense_cap {
        let evs = spectrum_dense(layer, cfg.dense_cap)?;
        let (t1, t2) = trace_moments(layer);
        let s1: f64 = evs.iter().sum();
        let s2: f64 = evs.iter().map(|x| x * x).sum();
        (evs.clone(), Method::Dense, 0.0, Some(((s1 - t1).abs(), (s2 - t2).abs())), Some(evs))
    } else {
        let ex = spectrum_extremes(layer, 3, cfg.lanczos)?;
        let mut evs = ex.top.clone();
        evs.extend(&ex.bottom);
        // Krylov sees each distinct eigenvalue once; a disconnected graph
        // repeats r, which the component count reveals
        for _ in 1..comps.count {
            evs.push(r as f64);
        }
        (evs, Method::Iterative, ex.residual, None, None)
    };
    let v = ramanujan_verdict(&evs, r as f64, bipartite, cfg.tol);
    let gd = girth_and_diameter(layer, cfg.vertex_transitive);
    Ok((
        SpectralReport {
            schema_version: crate::SCHEMA_VERSION,
            color: layer.label.clone(),
            r,
            n,
            lambda_max_nontrivial: v.lambda2,
            lambda_min: v.lambda_min,
            ramanujan_bound: v.bound,
            verdict: v.ramanujan && layer.regularity().is_some(),
            bipartite,
            connected: comps.connected(),
            girth: gd.girth,
            diameter: gd.diameter,
            diameter_exact: gd.diameter_exact,
            cheeger_lower: (r as f64 - v.lambda2) / 2.0,
            exact_expansion: exact_expansion(layer),
            method,
            residual,
            trace_error,
        },
        full,
    ))
}

/// CSV `index,eigenvalue` of a spectrum.
pub fn spectrum_csv(evs: &[f64]) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (i, x) in evs.iter().enumerate() {
        let _ = writeln!(s, "{i},{x:.12}");
    }
    s
}

/// Number of eigenvalues below `x`, by the inertia of `A − xI` (Sylvester):
/// the count of negative pivots in symmetric Gaussian elimination.
#[cfg(test)]
pub(crate) fn count_below(a: &DMatrix<f64>, x: f64) -> usize {
    let n = a.nrows();
    let mut m = a.clone() - DMatrix::identity(n, n) * x;
    let mut neg = 0;
    for k in 0..n {
        // symmetric pivoting on the largest remaining diagonal keeps it stable enough
        let p = (k..n).max_by(|&i, &j| m[(i, i)].abs().total_cmp(&m[(j, j)].abs())).unwrap();
        if p != k {
            m.swap_rows(p, k);
            m.swap_columns(p, k);
        }
        let mut piv = m[(k, k)];
        if piv.abs() < 1e-300 {
            piv = 1e-300;
        }
        if piv < 0.0 {
            neg += 1;
        }
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
            }
        }
    }
    neg
}

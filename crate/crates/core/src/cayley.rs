//! Multi-colored Cayley graphs on `PSL(2, F_N)` and graph-level checks of
//! the square property.
//!
//! Vertices are matrices of determinant 1 modulo `±1`, each stored in the
//! canonical form whose first nonzero entry (row-major) lies in
//! `1..=(N−1)/2`, sorted lexicographically; the index of a vertex is its
//! rank. Color `c` joins `v` to `v·s` for every reduced generator `s`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Mat2, ModNEmbedding, ReduceModN};
use crate::generators::{GeneratorSet, SquareTable};
use crate::graph::{ColorLayer, ColoredGraph};
use crate::numbertheory::{inv_mod, is_prime, sqrt_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("N = {0} must be a prime congruent to 1 mod 4")]
    BadModulus(u64),
    #[error("only the PSL(2, F_N) realization is supported, not {0:?}")]
    UnsupportedQuotient(Quotient),
    #[error("PSL(2, F_{n}) has {size} elements, more than the limit {limit}")]
    TooLarge { n: u64, size: u64, limit: u64 },
    #[error("color {color}: norm of generator {index} is not a square mod {n}")]
    NonResidueNorm { color: String, index: usize, n: u64 },
    #[error("color {color}: generator {index} reduces to a scalar mod {n}")]
    ScalarGenerator { color: String, index: usize, n: u64 },
    #[error("color {color}: generator {index} has norm divisible by {n}")]
    SingularGenerator { color: String, index: usize, n: u64 },
}

/// Which group the vertex set realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quotient {
    PSL2,
    PGL2,
    SL2,
}

/// The prime `N`, the chosen roots, and the group realized on the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupContext {
    pub embedding: ModNEmbedding,
    pub quotient: Quotient,
}

/// Largest vertex count `build_group` will enumerate.
pub const MAX_VERTICES: u64 = 5_000_000;

impl GroupContext {
    /// Context for the `Q` networks: `√−1` only.
    pub fn rational(n: u64) -> Result<Self, CayleyError> {
        Self::with_roots(n, false)
    }

    /// Context for the `Q(√5)` networks: `√−1` and `√5`.
    pub fn real_quadratic(n: u64) -> Result<Self, CayleyError> {
        Self::with_roots(n, true)
    }

    fn with_roots(n: u64, need_sqrt5: bool) -> Result<Self, CayleyError> {
        if n % 4 != 1 || !is_prime(n) || n >= 1 << 31 {
            return Err(CayleyError::BadModulus(n));
        }
        let sqrt_m1 = sqrt_mod(n - 1, n).expect("−1 is a square mod N ≡ 1 (mod 4)");
        let sqrt5 = if need_sqrt5 {
            Some(sqrt_mod(5 % n, n).ok_or(AlgebraError::MissingSqrt5(n))?)
        } else {
            None
        };
        Ok(GroupContext {
            embedding: ModNEmbedding::new(n, sqrt_m1, sqrt5)?,
            quotient: Quotient::PSL2,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.embedding.modulus()
    }

    /// `|PSL(2, F_N)| = N(N² − 1)/2`.
    pub fn group_order(&self) -> u64 {
        let n = self.modulus();
        n * (n * n - 1) / 2
    }

    /// Representative of `±m` whose first nonzero entry is at most `(N−1)/2`.
    pub fn canonical(&self, m: &Mat2) -> Mat2 {
        let n = self.modulus();
        let first = m.0.iter().copied().find(|&x| x != 0).unwrap_or(0);
        if first > (n - 1) / 2 {
            Mat2(m.0.map(|x| (n - x) % n))
        } else {
            *m
        }
    }
}

/// The vertex set of `PSL(2, F_N)` with index lookup.
#[derive(Debug, Clone)]
pub struct Group {
    pub ctx: GroupContext,
    pub elements: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
}

impl Group {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the class of `m` (any representative of determinant 1).
    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        self.index.get(&self.ctx.canonical(m)).copied()
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&Mat2::identity()).expect("identity is a vertex")
    }
}

/// Enumerates `PSL(2, F_N)` in canonical form, sorted.
pub fn build_group(ctx: &GroupContext) -> Result<Group, CayleyError> {
    if ctx.quotient != Quotient::PSL2 {
        return Err(CayleyError::UnsupportedQuotient(ctx.quotient));
    }
    let n = ctx.modulus();
    if ctx.group_order() > MAX_VERTICES {
        return Err(CayleyError::TooLarge { n, size: ctx.group_order(), limit: MAX_VERTICES });
    }
    // every (a, c) ≠ 0 completes to N matrices of determinant 1; keep the
    // canonical member of each ±pair
    let mut elements: Vec<Mat2> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            for c in 0..n {
                if a == 0 && c == 0 {
                    continue;
                }
                for t in 0..n {
                    // a ≠ 0: b = t, d = (1 + bc)/a;  a = 0: d = t, b = −1/c
                    let m = if a != 0 {
                        let d = (1 + t * c) % n * inv_mod(a, n).expect("a ≠ 0") % n;
                        Mat2([a, t, c, d])
                    } else {
                        let b = (n - inv_mod(c, n).expect("c ≠ 0")) % n;
                        Mat2([0, b, c, t])
                    };
                    if ctx.canonical(&m) == m {
                        out.push(m);
                    }
                }
            }
            out
        })
        .collect();
    elements.par_sort_unstable();
    debug_assert_eq!(elements.len() as u64, ctx.group_order());
    let index = elements.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
    Ok(Group { ctx: *ctx, elements, index })
}

/// Reduces a generator set into `PSL(2, F_N)`: each image is divided by a
/// square root of its determinant and canonicalized.
pub fn reduce_generators<R: ReduceModN>(
    ctx: &GroupContext,
    set: &GeneratorSet<R>,
) -> Result<Vec<Mat2>, CayleyError> {
    let n = ctx.modulus();
    set.gens
        .iter()
        .enumerate()
        .map(|(index, g)| {
            let m = ctx.embedding.reduce(g)?;
            let det = m.det_mod(n);
            if det == 0 {
                return Err(CayleyError::SingularGenerator { color: set.color.clone(), index, n });
            }
            let root = sqrt_mod(det, n).ok_or_else(|| CayleyError::NonResidueNorm {
                color: set.color.clone(),
                index,
                n,
            })?;
            let s = ctx.canonical(&m.scale_mod(inv_mod(root, n).expect("root ≠ 0"), n));
            if s.is_scalar() {
                return Err(CayleyError::ScalarGenerator { color: set.color.clone(), index, n });
            }
            Ok(s)
        })
        .collect()
}

/// A multi-colored Cayley graph on `PSL(2, F_N)`.
#[derive(Debug, Clone)]
pub struct ColoredCayleyGraph {
    pub group: Group,
    /// Reduced generators per color, in generator-set order.
    pub generators: Vec<Vec<Mat2>>,
    pub graph: ColoredGraph,
}

impl ColoredCayleyGraph {
    pub fn ctx(&self) -> &GroupContext {
        &self.group.ctx
    }
}

/// Builds one color per generator set: `v — v·s` for every reduced `s`.
pub fn build_colored_cayley<R: ReduceModN>(
    ctx: &GroupContext,
    sets: &[&GeneratorSet<R>],
) -> Result<ColoredCayleyGraph, CayleyError> {
    // validate every generator before the enumeration
    let generators = sets
        .iter()
        .map(|s| reduce_generators(ctx, s))
        .collect::<Result<Vec<_>, _>>()?;
    let group = build_group(ctx)?;
    Ok(assemble(group, sets.iter().map(|s| s.color.clone()).collect(), generators))
}

/// Builds the graph from already-reduced generators.
pub fn assemble(group: Group, labels: Vec<String>, generators: Vec<Vec<Mat2>>) -> ColoredCayleyGraph {
    let n = group.ctx.modulus();
    let colors = labels
        .into_iter()
        .zip(&generators)
        .map(|(label, gens)| {
            let r = gens.len();
            let flat: Vec<u32> = group
                .elements
                .par_iter()
                .flat_map_iter(|v| {
                    gens.iter()
                        .map(|s| group.index_of(&v.mul_mod(s, n)).expect("closed under products"))
                        .collect::<Vec<_>>()
                })
                .collect();
            if r == 0 {
                ColorLayer::empty(label, group.len())
            } else {
                ColorLayer::regular(label, r, flat)
            }
        })
        .collect();
    let graph = ColoredGraph::new(group.len(), colors);
    ColoredCayleyGraph { group, generators, graph }
}

/// Which vertices a square-property audit visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditMode {
    Exhaustive,
    /// `k` vertices drawn with a seeded generator.
    Sample { k: usize, seed: u64 },
}

/// Outcome of a square-property audit between two colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareReport {
    pub schema_version: u32,
    pub first_color: String,
    pub second_color: String,
    pub vertices_checked: usize,
    pub pairs_checked: usize,
    /// Pairs with no completing square.
    pub missing: usize,
    /// Pairs with more than one completing square.
    pub ambiguous: usize,
    /// Pairs whose table completion is not a square in the graph, if a table
    /// was supplied.
    pub table_mismatches: Option<usize>,
}

impl SquareReport {
    pub fn failures(&self) -> usize {
        self.missing + self.ambiguous + self.table_mismatches.unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SquareAuditError {
    #[error("the square property needs two distinct colors")]
    SameColor,
    #[error("color index {0} out of range")]
    NoSuchColor(usize),
}

/// Completions at `v` of the first-color edge `i` and the second-color edge
/// `j2`: all `(j, i2)` with `v·s_i·t_j = v·t_{j2}·s_{i2}`, read off the
/// adjacency lists.
pub fn completions(first: &ColorLayer, second: &ColorLayer, v: usize, i: usize, j2: usize) -> Vec<(usize, usize)> {
    let a = first.neighbors(v)[i] as usize;
    let b = second.neighbors(v)[j2] as usize;
    let mut out = Vec::new();
    for (j, &x) in second.neighbors(a).iter().enumerate() {
        for (i2, &y) in first.neighbors(b).iter().enumerate() {
            if x == y {
                out.push((j, i2));
            }
        }
    }
    out
}

/// Checks, at each audited vertex and for every pair of a `first`-color and
/// a `second`-color edge leaving it, that exactly one pair of edges
/// completes them to a square. With a table, also checks that its entry
/// names a completing square.
///
/// Uniqueness is a property of the finite graph, not only of the generators:
/// when `N` is small next to the product of the regularities, products of
/// generators collide by chance in `PSL(2, F_N)` and close extra 4-cycles,
/// which are counted as `ambiguous`.
pub fn verify_square_property(
    g: &ColoredCayleyGraph,
    first: usize,
    second: usize,
    mode: AuditMode,
    table: Option<&SquareTable>,
) -> Result<SquareReport, SquareAuditError> {
    if first == second {
        return Err(SquareAuditError::SameColor);
    }
    let colors = &g.graph.colors;
    let (fl, sl) = (
        colors.get(first).ok_or(SquareAuditError::NoSuchColor(first))?,
        colors.get(second).ok_or(SquareAuditError::NoSuchColor(second))?,
    );
    let n = g.graph.n();
    let vertices: Vec<usize> = match mode {
        AuditMode::Exhaustive => (0..n).collect(),
        AuditMode::Sample { k, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(&mut rng);
            all.truncate(k.min(n));
            all
        }
    };
    let lookup = table.map(|t| t.completion_index());
    let (r1, r2) = (g.generators[first].len(), g.generators[second].len());
    let (missing, ambiguous, mismatches) = vertices
        .par_iter()
        .map(|&v| {
            let mut tally = (0, 0, 0);
            for i in 0..r1 {
                for j2 in 0..r2 {
                    let found = completions(fl, sl, v, i, j2);
                    match found.len() {
                        0 => tally.0 += 1,
                        1 => {}
                        _ => tally.1 += 1,
                    }
                    if let Some(map) = &lookup {
                        if !map.get(&(i, j2)).is_some_and(|c| found.contains(c)) {
                            tally.2 += 1;
                        }
                    }
                }
            }
            tally
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(SquareReport {
        schema_version: crate::SCHEMA_VERSION,
        first_color: fl.label.clone(),
        second_color: sl.label.clone(),
        vertices_checked: vertices.len(),
        pairs_checked: vertices.len() * r1 * r2,
        missing,
        ambiguous,
        table_mismatches: lookup.map(|_| mismatches),
    })
}

/// Square completions found in the group itself, at the identity: every
/// `(j, i2)` with `s_i·t_j = t_{j2}·s_{i2}` in `PSL(2, F_N)`. By left
/// invariance this is the completion at every vertex.
pub fn group_completions(g: &ColoredCayleyGraph, first: usize, second: usize, i: usize, j2: usize) -> Vec<(usize, usize)> {
    let ctx = g.ctx();
    let n = ctx.modulus();
    let (s, t) = (&g.generators[first], &g.generators[second]);
    let lhs: Vec<Mat2> = t.iter().map(|tj| ctx.canonical(&s[i].mul_mod(tj, n))).collect();
    let mut out = Vec::new();
    for (i2, si2) in s.iter().enumerate() {
        let rhs = ctx.canonical(&t[j2].mul_mod(si2, n));
        for (j, l) in lhs.iter().enumerate() {
            if *l == rhs {
                out.push((j, i2));
            }
        }
    }
    out
}

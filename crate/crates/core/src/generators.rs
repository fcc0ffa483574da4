//! Generator sets for each color of a network, and the square-property
//! factorization tables between two colors.
//!
//! Over `Z` the generators of a color with norm `p ≡ 1 (mod 4)` are the
//! `p + 1` quaternions `a + bî + cĵ + dk̂` of norm `p` with `a > 0` odd and
//! `b, c, d` even. Over `Z[τ]` they are the `p + 1` elements `x` of
//! `Z[τ][î, ĵ]` in normal form generating the ideals of norm `π`:
//! `x ≡ 1 (mod 2M)` in the icosian order `M`, `Tr x` totally positive with
//! `τ⁻³ < Tr x ≤ τ³`, and `Nm(x) = π·τ^{6m}`. Ideals whose generators are
//! pure quaternions get a sign rule instead of the trace conditions.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Coeff, Embedding, MaximalOrder, OFElem, Quaternion};
use crate::numbertheory::{is_prime, NumberTheoryError, SplitPrime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{0} is not a prime congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error("found {found} generators of norm {norm}, expected {expected}")]
    CountMismatch { norm: String, expected: usize, found: usize },
    #[error("pair ({i}, {j}) has {completions} square completions, expected exactly one")]
    SquareCompletion { i: usize, j: usize, completions: usize },
    #[error("square completion of ({i}, {j}) needs a unit on the edge of the search window")]
    UnitWindow { i: usize, j: usize },
    #[error("square table maps two pairs to the same completion")]
    NotBijective,
    #[error("square table needs distinct norms on the two colors")]
    SameNorm,
}

/// The generators of one color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet<R: Coeff> {
    pub color: String,
    /// `p`, `π` or `π̄`. Over `Z[τ]` each generator's reduced norm is this
    /// times a unit square `τ^{6m}`.
    pub norm: R,
    /// The rational prime below `norm`; the set has `prime + 1` elements.
    pub prime: u64,
    pub gens: Vec<Quaternion<R>>,
}

impl<R: Coeff> GeneratorSet<R> {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Position of the generator proportional to `conj(g)`, i.e. `g⁻¹` up to
    /// the norm. Every generator set built here has one for each element.
    pub fn inverse_index(&self, idx: usize) -> Option<usize> {
        let c = self.gens[idx].conj();
        self.gens.iter().position(|g| *g == c)
    }

    pub fn to_document(&self) -> GeneratorSetDoc {
        GeneratorSetDoc {
            schema_version: crate::SCHEMA_VERSION,
            color: self.color.clone(),
            ring: R::RING.to_string(),
            norm: self.norm.coords(),
            prime: self.prime,
            count: self.gens.len(),
            generators: self
                .gens
                .iter()
                .map(|g| QuaternionDoc {
                    coords: g.numer().iter().map(|c| c.coords()).collect(),
                    den: g.den(),
                })
                .collect(),
        }
    }
}

/// JSON form of a generator set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSetDoc {
    pub schema_version: u32,
    pub color: String,
    /// `"Z"` or `"Z[tau]"`; ring elements are integer tuples in the basis
    /// `1` resp. `1, τ`.
    pub ring: String,
    pub norm: Vec<i64>,
    pub prime: u64,
    pub count: usize,
    pub generators: Vec<QuaternionDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionDoc {
    /// Numerators of the `1, î, ĵ, k̂` coordinates.
    pub coords: Vec<Vec<i64>>,
    pub den: i64,
}

fn sort_generators<R: Coeff>(gens: &mut [Quaternion<R>]) {
    gens.sort_by_key(|g| g.flat_coords());
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The `p + 1` integral quaternions of norm `p` with `a > 0` odd and
/// `b, c, d` even, in lexicographic order.
pub fn lps_generators(p: u64) -> Result<GeneratorSet<i64>, GeneratorError> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(GeneratorError::NotOneModFour(p));
    }
    let p_i = p as i64;
    let m = isqrt(p_i);
    let evens: Vec<i64> = (-m..=m).filter(|x| x % 2 == 0).collect();
    let mut gens = Vec::new();
    for a in (1..=m).step_by(2) {
        for &b in &evens {
            for &c in &evens {
                let rest = p_i - a * a - b * b - c * c;
                if rest < 0 {
                    continue;
                }
                let d = isqrt(rest);
                if d * d != rest || d % 2 != 0 {
                    continue;
                }
                gens.push(Quaternion::new(a, b, c, d));
                if d != 0 {
                    gens.push(Quaternion::new(a, b, c, -d));
                }
            }
        }
    }
    sort_generators(&mut gens);
    if gens.len() != p as usize + 1 {
        return Err(GeneratorError::CountMismatch {
            norm: p.to_string(),
            expected: p as usize + 1,
            found: gens.len(),
        });
    }
    Ok(GeneratorSet {
        color: format!("p{p}"),
        norm: p_i,
        prime: p,
        gens,
    })
}

/// `τ⁻³ < t ≤ τ³` at the identity embedding.
pub fn in_trace_window(t: OFElem) -> bool {
    let lo = OFElem::tau_pow(-3);
    let hi = OFElem::tau_pow(3);
    t.cmp_at(lo, Embedding::Identity) == Ordering::Greater
        && t.cmp_at(hi, Embedding::Identity) != Ordering::Greater
}

/// Whether `x` is the chosen normal-form generator of an ideal of norm
/// `prime`: `x ≡ 1 (mod 2M)` and either
///
/// * `Tr x` is totally positive with `τ⁻³ < Tr x ≤ τ³` and
///   `Nm(x) = prime · τ^{6m}`, or
/// * `Tr x = 0` (no unit can make the trace positive), `Nm(x) = prime`, and
///   the first nonzero vector coordinate is positive at the identity
///   embedding.
pub fn is_normal_form(x: &Quaternion<OFElem>, prime: OFElem, order: &MaximalOrder) -> bool {
    let Some(nm) = x.norm().filter(|_| x.is_integral()) else { return false };
    let Some(unit) = nm.div_exact(prime) else { return false };
    if !order.congruent_to_one(x) {
        return false;
    }
    let tr = x.trace().expect("integral");
    if tr.is_zero() {
        return unit == OFElem::ONE && pure_sign_ok(x);
    }
    matches!(unit.as_signed_tau_power(6 * MAX_NORM_SHIFT), Some((1, k)) if k % 6 == 0)
        && tr.is_totally_positive()
        && in_trace_window(tr)
}

/// The normal-form generator of the ideal `x·M`, found among the unit
/// multiples `±τ^{3k}·x`, if `x ≡ 1 (mod 2M)` generates an ideal of norm
/// `prime`.
pub fn normalize(x: &Quaternion<OFElem>, prime: OFElem, order: &MaximalOrder) -> Option<Quaternion<OFElem>> {
    (-MAX_NORM_SHIFT..=MAX_NORM_SHIFT)
        .flat_map(|k| {
            let t = OFElem::tau_pow(3 * k);
            [t, -t]
        })
        .map(|u| x.scale(u))
        .find(|y| is_normal_form(y, prime, order))
}

/// The Galois conjugate `√5 ↦ −√5` of every coordinate, with `ĵ` and `k̂`
/// swapped. Coordinatewise conjugation alone does not preserve the icosian
/// order; the swap repairs that. The map preserves reduced norm and trace up
/// to Galois conjugation, so it carries generators of norm `π` to
/// generators of norm `π̄`.
pub fn galois_twist(x: &Quaternion<OFElem>) -> Quaternion<OFElem> {
    let [a, b, c, d] = x.numer();
    Quaternion::with_den(a.conj(), b.conj(), d.conj(), c.conj(), x.den())
}

/// Bound on `|m|` in the norm shift `τ^{6m}`; the enumeration asserts the
/// admissible range lies well inside it.
const MAX_NORM_SHIFT: i32 = 8;

/// Every normal-form element of `Z[τ][î, ĵ]` generating an ideal of norm
/// `prime`, one per ideal (see [`is_normal_form`]).
///
/// Each such ideal has exactly two generators `±x ≡ 1 (mod 2M)` of norm
/// `prime`, and the normal form pins the remaining unit `±τ^{3k}` down via
/// the trace, so its reduced norm is `prime · τ^{6m}`. A trace in the window has
/// `σ₁(a) ≤ τ³/2`, and `a` totally positive with `N(a) ≥ 1` forces
/// `σ₂(a) ≥ 2τ⁻³`; together with `σₖ(a)² ≤ σₖ(Nm x)` this leaves finitely
/// many `m`. For each one, total definiteness gives
/// `σₖ(Nm x) = Σ σₖ(coeff)²`, so every coordinate lies in the box
/// `|σₖ(coeff)| ≤ √σₖ(Nm x)`.
pub fn normal_form_elements(prime: OFElem, order: &MaximalOrder) -> Vec<Quaternion<OFElem>> {
    assert!(prime.is_totally_positive(), "norm {prime} is not totally positive");
    let tau = OFElem::TAU.embed(Embedding::Identity);
    let a1_min = tau.powi(-3) / 2.0;
    let a2_min = 2.0 * tau.powi(-3);
    let mut gens = Vec::new();
    for m in -MAX_NORM_SHIFT..=MAX_NORM_SHIFT {
        let norm = prime * OFElem::tau_pow(6 * m);
        let (n1, n2) = (norm.embed(Embedding::Identity), norm.embed(Embedding::Conjugate));
        if m != 0 && (n1 < a1_min * a1_min * 0.99 || n2 < a2_min * a2_min * 0.99) {
            continue;
        }
        assert!(m.abs() < MAX_NORM_SHIFT, "norm shift range too small for {prime}");
        gens.extend(elements_of_norm(norm, order, m == 0));
    }
    sort_generators(&mut gens);
    gens
}

/// Elements `≡ 1 (mod 2M)` of reduced norm exactly `norm` whose trace is in
/// the window, plus (if `pure`) the trace-zero ones with the sign rule.
fn elements_of_norm(norm: OFElem, order: &MaximalOrder, pure: bool) -> Vec<Quaternion<OFElem>> {
    let b1 = norm.embed(Embedding::Identity).sqrt();
    let b2 = norm.embed(Embedding::Conjugate).sqrt();
    let candidates = OFElem::bounded_box(b1, b2);
    let mut by_square: HashMap<OFElem, Vec<OFElem>> = HashMap::new();
    for &x in &candidates {
        by_square.entry(x * x).or_default().push(x);
    }
    let scalars: Vec<OFElem> = candidates
        .iter()
        .copied()
        .filter(|&a| {
            let tr = a + a;
            (tr.is_totally_positive() && in_trace_window(tr)) || (pure && a.is_zero())
        })
        .collect();
    scalars
        .par_iter()
        .flat_map_iter(|&a| {
            let mut found = Vec::new();
            let r1 = norm - a * a;
            for &b in &candidates {
                let r2 = r1 - b * b;
                if !nonnegative(r2) {
                    continue;
                }
                for &c in &candidates {
                    let r3 = r2 - c * c;
                    let Some(ds) = by_square.get(&r3) else { continue };
                    for &d in ds {
                        let x = Quaternion::new(a, b, c, d);
                        if order.congruent_to_one(&x) && (!a.is_zero() || pure_sign_ok(&x)) {
                            found.push(x);
                        }
                    }
                }
            }
            found
        })
        .collect()
}

/// Sign rule for trace-zero generators: the first nonzero vector
/// coordinate is positive at the identity embedding.
fn pure_sign_ok(x: &Quaternion<OFElem>) -> bool {
    let [_, b, c, d] = x.numer();
    [b, c, d]
        .into_iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.sign_at(Embedding::Identity) == Ordering::Greater)
}

fn nonnegative(x: OFElem) -> bool {
    x.sign_at(Embedding::Identity) != Ordering::Less
        && x.sign_at(Embedding::Conjugate) != Ordering::Less
}

/// The two colors of the `Q(√5)` network for `p ≡ 1, 9 (mod 20)`: the
/// normal-form elements generating the ideals of norm `π` and of norm `π̄`.
pub fn hilbert_generators(
    p: u64,
) -> Result<(GeneratorSet<OFElem>, GeneratorSet<OFElem>), GeneratorError> {
    let split = SplitPrime::new(p)?;
    let order = MaximalOrder::icosian();
    let make = |norm: OFElem, color: String| {
        let gens = normal_form_elements(norm, &order);
        if gens.len() != p as usize + 1 {
            return Err(GeneratorError::CountMismatch {
                norm: norm.to_string(),
                expected: p as usize + 1,
                found: gens.len(),
            });
        }
        Ok(GeneratorSet { color, norm, prime: p, gens })
    };
    Ok((
        make(split.pi(), format!("pi{p}"))?,
        make(split.pi_bar(), format!("pibar{p}"))?,
    ))
}

/// A unit `sign · τ^tau_exponent` of the coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitDescriptor {
    pub sign: i8,
    pub tau_exponent: i32,
}

/// Coefficient rings whose unit group the square tables search.
pub trait UnitFamily: Coeff {
    /// Units `≡ 1 (mod 2)` in the searched window, paired with descriptors.
    /// Listed by increasing size so that the first hit is the unique one.
    fn unit_window() -> Vec<(Self, UnitDescriptor)>;
    /// Whether the descriptor lies on the boundary of the searched window.
    fn on_window_edge(u: &UnitDescriptor) -> bool;
}

impl UnitFamily for i64 {
    fn unit_window() -> Vec<(Self, UnitDescriptor)> {
        vec![
            (1, UnitDescriptor { sign: 1, tau_exponent: 0 }),
            (-1, UnitDescriptor { sign: -1, tau_exponent: 0 }),
        ]
    }
    fn on_window_edge(_: &UnitDescriptor) -> bool {
        false
    }
}

/// Units `±τ^{3k}` with `|k| ≤ 8` are searched: these are exactly the units
/// `≡ 1 (mod 2)`, and both sides of a square identity have norms within a
/// few `τ⁶` of each other.
pub const UNIT_WINDOW: i32 = 8;

impl UnitFamily for OFElem {
    fn unit_window() -> Vec<(Self, UnitDescriptor)> {
        let mut out = Vec::new();
        for k in -UNIT_WINDOW..=UNIT_WINDOW {
            let t = OFElem::tau_pow(3 * k);
            out.push((t, UnitDescriptor { sign: 1, tau_exponent: 3 * k }));
            out.push((-t, UnitDescriptor { sign: -1, tau_exponent: 3 * k }));
        }
        out
    }
    fn on_window_edge(u: &UnitDescriptor) -> bool {
        u.tau_exponent.abs() >= 3 * UNIT_WINDOW
    }
}

/// One factorization `first[i] · second[j] = second[j2] · first[i2] · u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareEntry {
    pub i: usize,
    pub j: usize,
    pub i2: usize,
    pub j2: usize,
    pub unit: UnitDescriptor,
}

/// The square-property table between two colors: every product of a
/// `first` generator followed by a `second` generator refactors uniquely in
/// the opposite order.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareTable {
    pub first_color: String,
    pub second_color: String,
    pub first_len: usize,
    pub second_len: usize,
    /// Indexed by `i * second_len + j`.
    pub entries: Vec<SquareEntry>,
}

impl SquareTable {
    pub fn get(&self, i: usize, j: usize) -> &SquareEntry {
        &self.entries[i * self.second_len + j]
    }

    /// For a `first` index `i` and a `second` index `j2`, the pair `(j, i2)`
    /// with `first[i]·second[j] = second[j2]·first[i2]·u`.
    pub fn completion_index(&self) -> HashMap<(usize, usize), (usize, usize)> {
        self.entries
            .iter()
            .map(|e| ((e.i, e.j2), (e.j, e.i2)))
            .collect()
    }

    pub fn to_document(&self) -> SquareTableDoc {
        SquareTableDoc {
            schema_version: crate::SCHEMA_VERSION,
            first_color: self.first_color.clone(),
            second_color: self.second_color.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| [e.i as i64, e.j as i64, e.i2 as i64, e.j2 as i64,
                          e.unit.tau_exponent as i64, e.unit.sign as i64])
                .collect(),
        }
    }
}

/// JSON form: rows `(i, j, i′, j′, unit exponent of τ, unit sign)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareTableDoc {
    pub schema_version: u32,
    pub first_color: String,
    pub second_color: String,
    pub entries: Vec<[i64; 6]>,
}

fn left_divide<R: Coeff>(by: &Quaternion<R>, x: &Quaternion<R>) -> Option<Quaternion<R>> {
    let norm = by.norm()?;
    by.conj().mul(x).map_numer(|c| c.checked_div(&norm))
}

/// Builds the table `first[i]·second[j] = second[j′]·first[i′]·u`.
///
/// For each pair the product is left-divided by every `second[j′]`; an
/// exact quotient is then matched against `first` up to every unit in the
/// searched window. Exactly one completion must exist.
pub fn square_table<R: UnitFamily>(
    first: &GeneratorSet<R>,
    second: &GeneratorSet<R>,
) -> Result<SquareTable, GeneratorError> {
    if first.norm == second.norm {
        return Err(GeneratorError::SameNorm);
    }
    let lookup: HashMap<Quaternion<R>, usize> =
        first.gens.iter().enumerate().map(|(k, g)| (*g, k)).collect();
    let units = R::unit_window();
    let (r1, r2) = (first.len(), second.len());
    let rows: Result<Vec<Vec<SquareEntry>>, GeneratorError> = (0..r1)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(r2);
            for j in 0..r2 {
                let prod = first.gens[i].mul(&second.gens[j]);
                let mut hits = Vec::new();
                for (j2, s) in second.gens.iter().enumerate() {
                    let Some(q) = left_divide(s, &prod) else { continue };
                    for (u, desc) in &units {
                        // u is central, so q = first[i2]·u ⇔ q/u = first[i2]
                        let Some(cand) = q.map_numer(|c| c.checked_div(u)) else { continue };
                        if let Some(&i2) = lookup.get(&cand) {
                            hits.push(SquareEntry { i, j, i2, j2, unit: *desc });
                        }
                    }
                }
                if hits.len() != 1 {
                    return Err(GeneratorError::SquareCompletion { i, j, completions: hits.len() });
                }
                if R::on_window_edge(&hits[0].unit) {
                    return Err(GeneratorError::UnitWindow { i, j });
                }
                row.push(hits[0]);
            }
            Ok(row)
        })
        .collect();
    let entries: Vec<SquareEntry> = rows?.into_iter().flatten().collect();
    let mut seen = vec![false; r1 * r2];
    for e in &entries {
        let slot = &mut seen[e.i2 * r2 + e.j2];
        if *slot {
            return Err(GeneratorError::NotBijective);
        }
        *slot = true;
    }
    Ok(SquareTable {
        first_color: first.color.clone(),
        second_color: second.color.clone(),
        first_len: r1,
        second_len: r2,
        entries,
    })
}

/// Re-checks every identity of a table by fresh multiplication.
pub fn verify_square_table<R: UnitFamily>(
    table: &SquareTable,
    first: &GeneratorSet<R>,
    second: &GeneratorSet<R>,
) -> bool {
    let units: HashMap<UnitDescriptor, R> =
        R::unit_window().into_iter().map(|(u, d)| (d, u)).collect();
    table.entries.len() == first.len() * second.len()
        && table.entries.iter().all(|e| {
            let Some(u) = units.get(&e.unit) else { return false };
            let lhs = first.gens[e.i].mul(&second.gens[e.j]);
            let rhs = second.gens[e.j2].mul(&first.gens[e.i2]).scale(*u);
            lhs == rhs
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lps_p5() {
        let s = lps_generators(5).unwrap();
        let want: Vec<Quaternion<i64>> = [
            (1, -2, 0, 0),
            (1, 0, -2, 0),
            (1, 0, 0, -2),
            (1, 0, 0, 2),
            (1, 0, 2, 0),
            (1, 2, 0, 0),
        ]
        .iter()
        .map(|&(a, b, c, d)| Quaternion::new(a, b, c, d))
        .collect();
        assert_eq!(s.gens, want);
    }

    #[test]
    fn lps_rejects_three_mod_four() {
        assert_eq!(lps_generators(7), Err(GeneratorError::NotOneModFour(7)));
        assert_eq!(lps_generators(9), Err(GeneratorError::NotOneModFour(9)));
    }

    #[test]
    fn lps_sets_are_closed_under_conjugation() {
        for p in [5, 13, 17, 29] {
            let s = lps_generators(p).unwrap();
            for k in 0..s.len() {
                assert!(s.inverse_index(k).is_some());
            }
        }
    }

    #[test]
    fn trace_window_edges() {
        assert!(in_trace_window(OFElem::tau_pow(3)));
        assert!(!in_trace_window(OFElem::tau_pow(-3)));
        assert!(in_trace_window(OFElem::from_int(2)));
        assert!(!in_trace_window(OFElem::from_int(5)));
    }

    #[test]
    fn hilbert_p29_counts_and_normal_form() {
        let (red, blue) = hilbert_generators(29).unwrap();
        assert_eq!(red.len(), 30);
        assert_eq!(blue.len(), 30);
        let order = MaximalOrder::icosian();
        for g in &red.gens {
            assert!(is_normal_form(g, red.norm, &order));
            assert_eq!(g.norm().unwrap().norm(), 29);
        }
        for g in &blue.gens {
            assert!(is_normal_form(g, blue.norm, &order));
        }
    }

    #[test]
    fn hilbert_p41_includes_pure_generators() {
        let (red, blue) = hilbert_generators(41).unwrap();
        assert_eq!((red.len(), blue.len()), (42, 42));
        let pure = red.gens.iter().filter(|g| g.trace() == Some(OFElem::ZERO)).count();
        assert_eq!(pure, 30);
        let order = MaximalOrder::icosian();
        assert!(red.gens.iter().all(|g| is_normal_form(g, red.norm, &order)));
    }

    #[test]
    fn galois_twist_preserves_the_order() {
        let order = MaximalOrder::icosian();
        for e in order.basis() {
            assert!(order.contains(&galois_twist(e)));
        }
    }

    #[test]
    fn galois_twist_pairs_the_colors() {
        let order = MaximalOrder::icosian();
        for p in [29, 41, 89] {
            let (red, blue) = hilbert_generators(p).unwrap();
            let mut image: Vec<_> = red
                .gens
                .iter()
                .map(|g| normalize(&galois_twist(g), blue.norm, &order).expect("pairs"))
                .collect();
            image.sort_by_key(|g| g.flat_coords());
            assert_eq!(image, blue.gens, "p = {p}");
        }
    }

    #[test]
    fn normalize_recovers_scaled_generators() {
        let order = MaximalOrder::icosian();
        let (red, _) = hilbert_generators(89).unwrap();
        for g in &red.gens {
            for u in [OFElem::tau_pow(3), -OFElem::tau_pow(-6), -OFElem::ONE] {
                assert_eq!(normalize(&g.scale(u), red.norm, &order), Some(*g));
            }
        }
    }

    #[test]
    fn square_table_rejects_equal_norms() {
        let s = lps_generators(5).unwrap();
        assert_eq!(square_table(&s, &s), Err(GeneratorError::SameNorm));
    }

    #[test]
    fn square_table_5_13() {
        let red = lps_generators(5).unwrap();
        let blue = lps_generators(13).unwrap();
        let t = square_table(&red, &blue).unwrap();
        assert_eq!(t.entries.len(), 84);
        assert!(verify_square_table(&t, &red, &blue));
    }
}

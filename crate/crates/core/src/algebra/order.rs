use std::collections::{HashMap, HashSet};

use super::{Coeff, OFElem, Quaternion};

type QF = Quaternion<OFElem>;

/// The icosian maximal order `M` of the quaternions over `Q(√5)`, spanned
/// over `Z[τ]` by
///
/// ```text
/// e₁ = (1 + τ⁻¹î + τĵ)/2      e₂ = (τ⁻¹î + ĵ + τk̂)/2
/// e₃ = (τî + τ⁻¹ĵ + k̂)/2      e₄ = (î + τĵ + τ⁻¹k̂)/2
/// ```
#[derive(Debug, Clone)]
pub struct MaximalOrder {
    basis: [QF; 4],
    /// Adjugate of the matrix whose columns are the numerators of `2eᵢ`.
    adj: [[OFElem; 4]; 4],
    det: OFElem,
}

/// Projective class of an element of `M/2M ≅ Mat₂(F₄)`: its `e`-coordinates
/// mod 2, normalized over the scalars `F₄^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod2Class(pub [u8; 4]);

impl Default for MaximalOrder {
    fn default() -> Self {
        Self::icosian()
    }
}

impl MaximalOrder {
    pub fn icosian() -> Self {
        let (o, z, t, ti) = (OFElem::ONE, OFElem::ZERO, OFElem::TAU, OFElem::TAU_INV);
        let cols = [[o, ti, t, z], [z, ti, o, t], [z, t, ti, o], [z, o, t, ti]];
        let basis = cols.map(|[a, b, c, d]| Quaternion::with_den(a, b, c, d, 2));
        let mut e = [[OFElem::ZERO; 4]; 4];
        for (col, v) in cols.iter().enumerate() {
            for row in 0..4 {
                e[row][col] = v[row];
            }
        }
        let det = det4(&e);
        assert!(!det.is_zero(), "icosian basis is degenerate");
        MaximalOrder {
            basis,
            adj: adjugate4(&e),
            det,
        }
    }

    pub fn basis(&self) -> &[QF; 4] {
        &self.basis
    }

    /// Coordinates of `q` in the basis `e₁…e₄`, if `q ∈ M`.
    pub fn coords(&self, q: &QF) -> Option<[OFElem; 4]> {
        let num = q.numer();
        let divisor = self.det * OFElem::from_int(q.den());
        let mut out = [OFElem::ZERO; 4];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = OFElem::ZERO;
            for (c, x) in num.iter().enumerate() {
                acc = acc + self.adj[r][c] * *x;
            }
            *slot = (acc + acc).div_exact(divisor)?;
        }
        Some(out)
    }

    pub fn contains(&self, q: &QF) -> bool {
        self.coords(q).is_some()
    }

    pub fn from_coords(&self, c: &[OFElem; 4]) -> QF {
        c.iter()
            .zip(&self.basis)
            .fold(QF::scalar(OFElem::ZERO), |acc, (s, e)| acc.add(&e.scale(*s)))
    }

    /// `x ≡ 1 (mod 2M)`.
    pub fn congruent_to_one(&self, q: &QF) -> bool {
        self.contains(&q.sub(&QF::one()).div_int(2))
    }

    /// Membership in the suborder `Z[τ] + 2M` by its linear description
    /// `{a + bî + cĵ + dk̂ : a..d ∈ Z[τ], b + τc + τ⁻¹d ∈ 2Z[τ]}`.
    pub fn in_suborder(&self, q: &QF) -> bool {
        if !q.is_integral() {
            return false;
        }
        let [_, b, c, d] = q.numer();
        (b + OFElem::TAU * c + OFElem::TAU_INV * d).is_even()
    }

    /// Membership in `Z[τ] + 2M` straight from the definition: some scalar
    /// `s` (only its class mod 2 matters) has `(q − s)/2 ∈ M`.
    pub fn in_suborder_by_definition(&self, q: &QF) -> bool {
        [(0, 0), (1, 0), (0, 1), (1, 1)].iter().any(|&(x, y)| {
            let s = QF::scalar(OFElem::new(x, y));
            self.contains(&q.sub(&s).div_int(2))
        })
    }

    /// All norm-one elements of `M`. Total definiteness bounds every
    /// coordinate of `2q` by 2 at both real embeddings, so a finite box
    /// holds them all.
    pub fn unit_group(&self) -> Vec<QF> {
        let target = OFElem::from_int(4);
        let mut found: Vec<QF> = sum_of_four_squares(target, &OFElem::bounded_box(2.0, 2.0))
            .into_iter()
            .map(|[a, b, c, d]| Quaternion::with_den(a, b, c, d, 2))
            .filter(|q| self.contains(q))
            .collect();
        found.sort_by_key(|q| q.flat_coords());
        found.dedup();
        found
    }

    /// Image of `q ∈ M` in `M/2M` modulo scalars.
    pub fn mod2_class(&self, q: &QF) -> Option<Mod2Class> {
        let c = self.coords(q)?;
        let v = c.map(|x| x.mod2());
        let best = (0..3)
            .map(|k| {
                let t = OFElem::tau_pow(k).mod2();
                v.map(|x| f4_mul(x, t))
            })
            .min()
            .expect("three scalings");
        Some(Mod2Class(best))
    }
}

fn f4_from_code(c: u8) -> OFElem {
    OFElem::new((c & 1) as i64, (c >> 1) as i64)
}

fn f4_mul(a: u8, b: u8) -> u8 {
    (f4_from_code(a) * f4_from_code(b)).mod2()
}

/// Every `(a, b, c, d)` from `candidates` with `a² + b² + c² + d² = target`.
pub(crate) fn sum_of_four_squares(target: OFElem, candidates: &[OFElem]) -> Vec<[OFElem; 4]> {
    let mut by_square: HashMap<OFElem, Vec<OFElem>> = HashMap::new();
    for &x in candidates {
        by_square.entry(x * x).or_default().push(x);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for &a in candidates {
        let r1 = target - a * a;
        if !nonneg_at_both(r1) {
            continue;
        }
        for &b in candidates {
            let r2 = r1 - b * b;
            if !nonneg_at_both(r2) {
                continue;
            }
            for &c in candidates {
                let r3 = r2 - c * c;
                if let Some(ds) = by_square.get(&r3) {
                    for &d in ds {
                        if seen.insert([a, b, c, d]) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    out
}

fn nonneg_at_both(x: OFElem) -> bool {
    use super::Embedding::*;
    use std::cmp::Ordering::Less;
    x.sign_at(Identity) != Less && x.sign_at(Conjugate) != Less
}

fn det3(m: [[OFElem; 3]; 3]) -> OFElem {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(m: &[[OFElem; 4]; 4], skip_r: usize, skip_c: usize) -> OFElem {
    let mut s = [[OFElem::ZERO; 3]; 3];
    for (ri, r) in (0..4).filter(|&r| r != skip_r).enumerate() {
        for (ci, c) in (0..4).filter(|&c| c != skip_c).enumerate() {
            s[ri][ci] = m[r][c];
        }
    }
    det3(s)
}

fn det4(m: &[[OFElem; 4]; 4]) -> OFElem {
    (0..4).fold(OFElem::ZERO, |acc, c| {
        let term = m[0][c] * minor(m, 0, c);
        if c % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

fn adjugate4(m: &[[OFElem; 4]; 4]) -> [[OFElem; 4]; 4] {
    let mut adj = [[OFElem::ZERO; 4]; 4];
    for (r, row) in adj.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let cof = minor(m, c, r);
            *slot = if (r + c) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

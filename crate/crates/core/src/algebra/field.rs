//! The ring of integers `Z[τ]` of `Q(√5)`, with `τ = (1 + √5)/2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Coeff;

/// The two real embeddings of `Q(√5)`. `Identity` sends `√5` to the
/// positive root, `Conjugate` to the negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Embedding {
    Identity,
    Conjugate,
}

/// An element `x + yτ` of `Z[τ]`, stored in the `1, τ` basis so that all
/// coordinates stay integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OFElem {
    pub x: i64,
    pub y: i64,
}

impl OFElem {
    pub const ZERO: OFElem = OFElem { x: 0, y: 0 };
    pub const ONE: OFElem = OFElem { x: 1, y: 0 };
    pub const TAU: OFElem = OFElem { x: 0, y: 1 };
    /// `τ⁻¹ = τ − 1`.
    pub const TAU_INV: OFElem = OFElem { x: -1, y: 1 };
    /// `√5 = 2τ − 1`.
    pub const SQRT5: OFElem = OFElem { x: -1, y: 2 };

    pub const fn new(x: i64, y: i64) -> Self {
        OFElem { x, y }
    }

    /// `a + b√5`, which lies in `Z[τ]` for all integers `a, b`.
    pub fn from_sqrt5_coords(a: i64, b: i64) -> Self {
        OFElem::new(a - b, 2 * b)
    }

    /// `(a + b√5)/2`, if it is integral.
    pub fn from_half_sqrt5_coords(a: i64, b: i64) -> Option<Self> {
        if (a - b).rem_euclid(2) != 0 {
            return None;
        }
        Some(OFElem::new((a - b) / 2, b))
    }

    /// Galois conjugate: `√5 ↦ −√5`, i.e. `τ ↦ 1 − τ`.
    pub fn conj(self) -> Self {
        OFElem::new(self.x + self.y, -self.y)
    }

    /// Field norm `x² + xy − y²`, multiplicative.
    pub fn norm(self) -> i64 {
        i64::try_from(self.norm_wide()).expect("field norm overflows i64")
    }

    fn norm_wide(self) -> i128 {
        let (x, y) = (self.x as i128, self.y as i128);
        x * x + x * y - y * y
    }

    /// Trace to `Q`: `2x + y`.
    pub fn trace(self) -> i64 {
        2 * self.x + self.y
    }

    /// `τᵏ` for any integer `k`.
    pub fn tau_pow(k: i32) -> Self {
        let base = if k >= 0 { OFElem::TAU } else { OFElem::TAU_INV };
        let mut acc = OFElem::ONE;
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    pub fn pow(self, k: u32) -> Self {
        let mut acc = OFElem::ONE;
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    pub fn embed(self, which: Embedding) -> f64 {
        let s5 = 5f64.sqrt();
        let t = match which {
            Embedding::Identity => (1.0 + s5) / 2.0,
            Embedding::Conjugate => (1.0 - s5) / 2.0,
        };
        self.x as f64 + self.y as f64 * t
    }

    /// Exact sign under the given real embedding.
    pub fn sign_at(self, which: Embedding) -> Ordering {
        // x + yτ = ((2x + y) ± y√5) / 2
        let u = 2 * self.x + self.y;
        let v = match which {
            Embedding::Identity => self.y,
            Embedding::Conjugate => -self.y,
        };
        sign_of_surd(u, v)
    }

    pub fn is_totally_positive(self) -> bool {
        self.sign_at(Embedding::Identity) == Ordering::Greater
            && self.sign_at(Embedding::Conjugate) == Ordering::Greater
    }

    /// Exact comparison of `self` and `other` at one embedding.
    pub fn cmp_at(self, other: OFElem, which: Embedding) -> Ordering {
        (self - other).sign_at(which)
    }

    /// `self / other` when the quotient lies in `Z[τ]`.
    pub fn div_exact(self, other: OFElem) -> Option<OFElem> {
        let (ox, oy) = (other.x as i128, other.y as i128);
        let n = ox * ox + ox * oy - oy * oy;
        if n == 0 {
            return None;
        }
        // self · conj(other), with conj(other) = (ox + oy) − oy·τ
        let (sx, sy) = (self.x as i128, self.y as i128);
        let (cx, cy) = (ox + oy, -oy);
        let bd = sy * cy;
        let (nx, ny) = (sx * cx + bd, sx * cy + sy * cx + bd);
        if nx % n != 0 || ny % n != 0 {
            return None;
        }
        Some(OFElem::new(
            i64::try_from(nx / n).ok()?,
            i64::try_from(ny / n).ok()?,
        ))
    }

    pub fn is_unit(self) -> bool {
        self.norm_wide().abs() == 1
    }

    /// Whether `self ∈ 2Z[τ]`.
    pub fn is_even(self) -> bool {
        self.x % 2 == 0 && self.y % 2 == 0
    }

    /// Residue class in `Z[τ]/2 ≅ F₄`, encoded as `x mod 2 + 2·(y mod 2)`.
    pub fn mod2(self) -> u8 {
        (self.x.rem_euclid(2) + 2 * self.y.rem_euclid(2)) as u8
    }

    /// If `self = ±τᵏ`, returns `(sign, k)`.
    pub fn as_signed_tau_power(self, max_exp: i32) -> Option<(i8, i32)> {
        if !self.is_unit() {
            return None;
        }
        for k in -max_exp..=max_exp {
            let t = OFElem::tau_pow(k);
            if t == self {
                return Some((1, k));
            }
            if -t == self {
                return Some((-1, k));
            }
        }
        None
    }

    /// Every element whose two embeddings are bounded in absolute value by
    /// `bound_id` and `bound_conj`, sorted in coordinate order.
    pub fn bounded_box(bound_id: f64, bound_conj: f64) -> Vec<OFElem> {
        // y√5 = σ₁ − σ₂ and x = σ₁ − yτ
        let s5 = 5f64.sqrt();
        let ymax = ((bound_id + bound_conj) / s5).floor() as i64 + 1;
        let tau = (1.0 + s5) / 2.0;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let xmax = (bound_id + (y as f64).abs() * tau).ceil() as i64 + 1;
            for x in -xmax..=xmax {
                let e = OFElem::new(x, y);
                if e.embed(Embedding::Identity).abs() <= bound_id + 1e-9
                    && e.embed(Embedding::Conjugate).abs() <= bound_conj + 1e-9
                {
                    out.push(e);
                }
            }
        }
        out.sort();
        out
    }
}

/// Sign of `u + v√5`.
fn sign_of_surd(u: i64, v: i64) -> Ordering {
    let su = u.cmp(&0);
    let sv = v.cmp(&0);
    if su == sv || sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal {
        return sv;
    }
    // opposite signs: compare u² with 5v²
    let lhs = (u as i128) * (u as i128);
    let rhs = 5 * (v as i128) * (v as i128);
    match lhs.cmp(&rhs) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Add for OFElem {
    type Output = OFElem;
    fn add(self, o: OFElem) -> OFElem {
        OFElem::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for OFElem {
    type Output = OFElem;
    fn sub(self, o: OFElem) -> OFElem {
        OFElem::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for OFElem {
    type Output = OFElem;
    fn neg(self) -> OFElem {
        OFElem::new(-self.x, -self.y)
    }
}

impl Mul for OFElem {
    type Output = OFElem;
    fn mul(self, o: OFElem) -> OFElem {
        // τ² = τ + 1
        let bd = self.y * o.y;
        OFElem::new(self.x * o.x + bd, self.x * o.y + self.y * o.x + bd)
    }
}

impl fmt::Display for OFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}τ"),
            (x, y) if y < 0 => write!(f, "{x}-{}τ", -y),
            (x, y) => write!(f, "{x}+{y}τ"),
        }
    }
}

impl Coeff for OFElem {
    const RING: &'static str = "Z[tau]";

    fn zero() -> Self {
        OFElem::ZERO
    }
    fn one() -> Self {
        OFElem::ONE
    }
    fn from_int(n: i64) -> Self {
        OFElem::new(n, 0)
    }
    fn content(&self) -> i64 {
        gcd(self.x, self.y)
    }
    fn div_int(&self, k: i64) -> Option<Self> {
        if k == 0 || self.x % k != 0 || self.y % k != 0 {
            return None;
        }
        Some(OFElem::new(self.x / k, self.y / k))
    }
    fn coords(&self) -> Vec<i64> {
        vec![self.x, self.y]
    }
    fn checked_div(&self, d: &Self) -> Option<Self> {
        self.div_exact(*d)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

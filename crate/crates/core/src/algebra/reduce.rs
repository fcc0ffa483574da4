use serde::{Deserialize, Serialize};

use super::{AlgebraError, Coeff, OFElem, Quaternion};
use crate::numbertheory::{inv_mod, is_prime};

/// A 2×2 matrix over `F_N`, entries row-major and reduced into `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [u64; 4]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([1, 0, 0, 1])
    }

    pub fn mul_mod(&self, o: &Mat2, n: u64) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([
            (a * e + b * g) % n,
            (a * f + b * h) % n,
            (c * e + d * g) % n,
            (c * f + d * h) % n,
        ])
    }

    pub fn det_mod(&self, n: u64) -> u64 {
        let [a, b, c, d] = self.0;
        (a * d % n + n - b * c % n) % n
    }

    pub fn scale_mod(&self, s: u64, n: u64) -> Mat2 {
        Mat2(self.0.map(|x| x * s % n))
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = self.0;
        b == 0 && c == 0 && a == d
    }
}

/// The homomorphism `M → Mat₂(F_N)` fixed by a choice of `√−1` and `√5`
/// in `F_N`:
///
/// ```text
/// √5 ↦ √5·I,   î ↦ diag(√−1, −√−1),   ĵ ↦ [[0, −1], [1, 0]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModNEmbedding {
    modulus: u64,
    sqrt_m1: u64,
    sqrt5: Option<u64>,
}

impl ModNEmbedding {
    pub fn new(modulus: u64, sqrt_m1: u64, sqrt5: Option<u64>) -> Result<Self, AlgebraError> {
        if modulus <= 2 || modulus >= 1 << 31 || !is_prime(modulus) {
            return Err(AlgebraError::BadModulus(modulus));
        }
        let check = |root: u64, target: i64| {
            if root >= modulus || (root * root) % modulus != target.rem_euclid(modulus as i64) as u64 {
                Err(AlgebraError::BadRoot { root, target, modulus })
            } else {
                Ok(())
            }
        };
        check(sqrt_m1, -1)?;
        if let Some(s) = sqrt5 {
            check(s, 5)?;
        }
        Ok(ModNEmbedding { modulus, sqrt_m1, sqrt5 })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sqrt_m1(&self) -> u64 {
        self.sqrt_m1
    }

    pub fn sqrt5(&self) -> Option<u64> {
        self.sqrt5
    }

    /// Image of `q`; the denominator is inverted mod `N`.
    pub fn reduce<R: ReduceModN>(&self, q: &Quaternion<R>) -> Result<Mat2, AlgebraError> {
        let n = self.modulus;
        let den = q.den().rem_euclid(n as i64) as u64;
        let inv_den = inv_mod(den, n).ok_or(AlgebraError::DenominatorNotInvertible {
            den: q.den(),
            modulus: n,
        })?;
        let [a, b, c, d] = q.numer().map(|x| x.residue(self));
        let (a, b, c, d) = (a?, b?, c?, d?);
        let i = self.sqrt_m1;
        let neg = |x: u64| (n - x % n) % n;
        // a + bî + cĵ + dk̂ ↦ [[a + bi, −c − di], [c − di, a − bi]]
        let m = Mat2([
            (a + b * i) % n,
            neg((c + d * i) % n),
            (c + neg(d * i % n)) % n,
            (a + neg(b * i % n)) % n,
        ]);
        Ok(m.scale_mod(inv_den, n))
    }

    pub fn reduce_scalar<R: ReduceModN>(&self, x: &R) -> Result<u64, AlgebraError> {
        x.residue(self)
    }
}

/// Coefficient rings that reduce into `F_N`.
pub trait ReduceModN: Coeff {
    fn residue(&self, emb: &ModNEmbedding) -> Result<u64, AlgebraError>;
}

impl ReduceModN for i64 {
    fn residue(&self, emb: &ModNEmbedding) -> Result<u64, AlgebraError> {
        Ok(self.rem_euclid(emb.modulus as i64) as u64)
    }
}

impl ReduceModN for OFElem {
    fn residue(&self, emb: &ModNEmbedding) -> Result<u64, AlgebraError> {
        let n = emb.modulus;
        if self.y == 0 {
            return Ok(self.x.rem_euclid(n as i64) as u64);
        }
        let s5 = emb.sqrt5.ok_or(AlgebraError::MissingSqrt5(n))?;
        // τ = (1 + √5)/2
        let tau = (1 + s5) % n * ((n + 1) / 2) % n;
        let x = self.x.rem_euclid(n as i64) as u64;
        let y = self.y.rem_euclid(n as i64) as u64;
        Ok((x + y * tau) % n)
    }
}

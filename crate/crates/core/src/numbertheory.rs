//! Modular arithmetic, Legendre symbols and square roots mod primes, the
//! representations `N = a² − 20b²` and `4p = a² − 20b²`, and the prime
//! selection criteria for the `Q(√5)` networks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberTheoryError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a prime congruent to 1 or 9 mod 20")]
    NotSplitClass(u64),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("no representation {scale}*{target} = a^2 - 20 b^2 within the search bound")]
    NoRepresentation { target: u64, scale: u64 },
    #[error("density report needs limit >= 10^4, got {0}")]
    LimitTooSmall(u64),
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn require_odd_prime(n: u64) -> Result<(), NumberTheoryError> {
    if n % 2 == 0 || !is_prime(n) {
        return Err(NumberTheoryError::NotOddPrime(n));
    }
    Ok(())
}

/// Legendre symbol `(a / n)` by Euler's criterion.
pub fn legendre(a: i64, n: u64) -> Result<i8, NumberTheoryError> {
    require_odd_prime(n)?;
    Ok(legendre_unchecked(a.rem_euclid(n as i64) as u64, n))
}

pub(crate) fn legendre_unchecked(a: u64, n: u64) -> i8 {
    match pow_mod(a, (n - 1) / 2, n) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Square root of `a` modulo the odd prime `n` by Tonelli–Shanks; returns
/// the smaller of the two roots.
pub fn sqrt_mod(a: u64, n: u64) -> Option<u64> {
    let a = a % n;
    if a == 0 {
        return Some(0);
    }
    if legendre_unchecked(a, n) != 1 {
        return None;
    }
    let r = if n % 4 == 3 {
        pow_mod(a, (n + 1) / 4, n)
    } else {
        let s = (n - 1).trailing_zeros();
        let q = (n - 1) >> s;
        let z = (2..n)
            .find(|&z| legendre_unchecked(z, n) == -1)
            .expect("a non-residue exists mod an odd prime");
        let mut m = s;
        let mut c = pow_mod(z, q, n);
        let mut t = pow_mod(a, q, n);
        let mut r = pow_mod(a, (q + 1) / 2, n);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, n);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), n);
            m = i;
            c = mul_mod(b, b, n);
            t = mul_mod(t, c, n);
            r = mul_mod(r, b, n);
        }
        r
    };
    Some(r.min(n - r))
}

/// Which multiple of the prime is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    One,
    Four,
}

impl Scale {
    pub fn factor(self) -> u64 {
        match self {
            Scale::One => 1,
            Scale::Four => 4,
        }
    }
}

/// `scale · target = a² − 20b²` with `a > 0`, `b ≥ 0` minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellRep {
    pub a: u64,
    pub b: i64,
    pub target: u64,
    pub scale: Scale,
}

impl PellRep {
    pub fn holds(&self) -> bool {
        let lhs = (self.a as i128).pow(2) - 20 * (self.b as i128).pow(2);
        lhs == (self.scale.factor() as i128) * self.target as i128
    }
}

const PELL_ITERATION_CAP: u64 = 1_000_000;

fn split_class(n: u64) -> bool {
    n % 20 == 1 || n % 20 == 9
}

/// Minimal-`b` representation of `scale · target` as `a² − 20b²`. For
/// `Scale::One`, `a` is odd; for `Scale::Four`, `a` and `b` have the same
/// parity.
pub fn pell_rep(target: u64, scale: Scale) -> Result<PellRep, NumberTheoryError> {
    if !is_prime(target) || !split_class(target) {
        return Err(NumberTheoryError::NotSplitClass(target));
    }
    let m = scale.factor() * target;
    let bound = (m as f64).sqrt() as u64 + 1;
    for b in 0..=bound.min(PELL_ITERATION_CAP) {
        let a2 = m as u128 + 20 * (b as u128).pow(2);
        let a = isqrt(a2);
        if a * a != a2 {
            continue;
        }
        let a = a as u64;
        let ok = match scale {
            Scale::One => a % 2 == 1,
            Scale::Four => a % 2 == b % 2,
        };
        if ok {
            let rep = PellRep { a, b: b as i64, target, scale };
            debug_assert!(rep.holds());
            return Ok(rep);
        }
    }
    Err(NumberTheoryError::NoRepresentation { target, scale: scale.factor() })
}

fn isqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Whether `τ` is a square mod `N`, decided by `a + 2b ≡ 1 (mod 4)` for
/// `N = a² − 20b²`.
pub fn tau_square_criterion(n: u64) -> Result<bool, NumberTheoryError> {
    let rep = pell_rep(n, Scale::One)?;
    Ok((rep.a as i64 + 2 * rep.b).rem_euclid(4) == 1)
}

/// `τ = (1 + √5)/2` reduced mod `N` with the given root of 5.
pub fn tau_mod(sqrt5: u64, n: u64) -> u64 {
    mul_mod((1 + sqrt5) % n, (n + 1) / 2, n)
}

/// The split of `p` as `π·π̄` in `Z[τ]`, with `π = (a + 2b√5)/2` from the
/// minimal representation `4p = a² − 20b²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPrime {
    pub p: u64,
    pub rep: PellRep,
}

impl SplitPrime {
    pub fn new(p: u64) -> Result<Self, NumberTheoryError> {
        Ok(SplitPrime { p, rep: pell_rep(p, Scale::Four)? })
    }

    /// `π` in the `1, τ` basis.
    pub fn pi(&self) -> crate::algebra::OFElem {
        let (a, b) = (self.rep.a as i64, self.rep.b);
        crate::algebra::OFElem::from_half_sqrt5_coords(a, 2 * b).expect("a is even")
    }

    pub fn pi_bar(&self) -> crate::algebra::OFElem {
        self.pi().conj()
    }

    /// Residues of `π` and `π̄` mod `N` for the chosen `√5`.
    pub fn residues(&self, sqrt5: u64, n: u64) -> (u64, u64) {
        let a = self.rep.a % n;
        let tb = mul_mod(2 * self.rep.b.unsigned_abs() % n, sqrt5, n);
        let tb = if self.rep.b < 0 { (n - tb) % n } else { tb };
        let inv2 = (n + 1) / 2;
        (mul_mod((a + tb) % n, inv2, n), mul_mod((a + n - tb) % n, inv2, n))
    }
}

/// Witnesses that `N` supports the `Q(√5)` networks for a given `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCertificate {
    pub n: u64,
    pub sqrt_m1: u64,
    pub sqrt_5: u64,
    pub pell: PellRep,
    pub tau_is_square: bool,
    pub pi_split_ok: bool,
    /// Residues of `π`, `π̄` mod `N` under `sqrt_5`.
    pub pi_residues: (u64, u64),
}

/// Evaluates every criterion for one candidate `N`, whether or not it passes.
pub fn certify(split: &SplitPrime, n: u64) -> Result<PrimeCertificate, NumberTheoryError> {
    if !is_prime(n) || !split_class(n) {
        return Err(NumberTheoryError::NotSplitClass(n));
    }
    let sqrt_m1 = sqrt_mod(n - 1, n).expect("-1 is a square for N = 1 mod 4");
    let sqrt_5 = sqrt_mod(5, n).expect("5 is a square for N = 1, 9 mod 20");
    let pell = pell_rep(n, Scale::One)?;
    let tau_is_square = (pell.a as i64 + 2 * pell.b).rem_euclid(4) == 1;
    let (r, rb) = split.residues(sqrt_5, n);
    let pi_split_ok =
        n != split.p && legendre_unchecked(r, n) == 1 && legendre_unchecked(rb, n) == 1;
    Ok(PrimeCertificate {
        n,
        sqrt_m1,
        sqrt_5,
        pell,
        tau_is_square,
        pi_split_ok,
        pi_residues: (r, rb),
    })
}

impl PrimeCertificate {
    pub fn is_valid(&self) -> bool {
        self.tau_is_square && self.pi_split_ok
    }
}

/// All `N ≤ limit`, `N ≠ p`, in the split class, with `τ` a square and both
/// `π`, `π̄` squares mod `N`. Ascending.
pub fn scan_valid_n(p: u64, limit: u64) -> Result<Vec<PrimeCertificate>, NumberTheoryError> {
    let split = SplitPrime::new(p)?;
    let candidates: Vec<u64> = (3..=limit).filter(|&n| split_class(n)).collect();
    let certs: Result<Vec<Option<PrimeCertificate>>, _> = candidates
        .par_iter()
        .map(|&n| {
            if n == p || !is_prime(n) {
                return Ok(None);
            }
            let cert = certify(&split, n)?;
            Ok(cert.is_valid().then_some(cert))
        })
        .collect();
    Ok(certs?.into_iter().flatten().collect())
}

/// Primes `N ≤ limit`, `N ≡ 1 (mod 4)`, distinct from every given norm prime,
/// with each of them a square mod `N`: the `Q` networks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCertificate {
    pub n: u64,
    pub sqrt_m1: u64,
    pub primes: Vec<u64>,
}

pub fn scan_rational(primes: &[u64], limit: u64) -> Result<Vec<RationalCertificate>, NumberTheoryError> {
    for &p in primes {
        if !is_prime(p) || p % 4 != 1 {
            return Err(NumberTheoryError::NotOneModFour(p));
        }
    }
    let out = (5..=limit)
        .into_par_iter()
        .filter(|&n| n % 4 == 1 && is_prime(n))
        .filter(|&n| {
            primes
                .iter()
                .all(|&p| p != n && legendre_unchecked(p % n, n) == 1)
        })
        .map(|n| RationalCertificate {
            n,
            sqrt_m1: sqrt_mod(n - 1, n).expect("N = 1 mod 4"),
            primes: primes.to_vec(),
        })
        .collect();
    Ok(out)
}

/// Empirical densities among all primes up to `limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub limit: u64,
    pub p: u64,
    pub primes: u64,
    pub split_class: u64,
    pub tau_square: u64,
    pub fully_valid: u64,
    pub split_class_fraction: f64,
    pub tau_square_fraction: f64,
    pub fully_valid_fraction: f64,
}

pub fn density_report(limit: u64, p: u64) -> Result<DensityReport, NumberTheoryError> {
    if limit < 10_000 {
        return Err(NumberTheoryError::LimitTooSmall(limit));
    }
    let split = SplitPrime::new(p)?;
    let primes = sieve(limit);
    let counts = primes
        .par_iter()
        .map(|&n| {
            if !split_class(n) {
                return Ok((0u64, 0u64, 0u64));
            }
            let cert = certify(&split, n)?;
            Ok((1, cert.tau_is_square as u64, cert.is_valid() as u64))
        })
        .try_reduce(|| (0, 0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1, x.2 + y.2)))?;
    let total = primes.len() as u64;
    let frac = |k: u64| k as f64 / total as f64;
    Ok(DensityReport {
        limit,
        p,
        primes: total,
        split_class: counts.0,
        tau_square: counts.1,
        fully_valid: counts.2,
        split_class_fraction: frac(counts.0),
        tau_square_fraction: frac(counts.1),
        fully_valid_fraction: frac(counts.2),
    })
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

use std::fmt;

use super::{gcd, Coeff};

/// `(a + bî + cĵ + dk̂) / den` with `î² = ĵ² = −1`, `îĵ = −ĵî = k̂`.
///
/// The denominator is a positive integer kept coprime to the content of the
/// numerator, so equal quaternions have equal representations. Elements of
/// the orders used here only ever need `den ∈ {1, 2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion<R> {
    den: i64,
    a: R,
    b: R,
    c: R,
    d: R,
}

impl<R: Coeff> Quaternion<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Quaternion { a, b, c, d, den: 1 }
    }

    pub fn with_den(a: R, b: R, c: R, d: R, den: i64) -> Self {
        assert!(den != 0, "zero quaternion denominator");
        let (a, b, c, d, den) = if den < 0 {
            (-a, -b, -c, -d, -den)
        } else {
            (a, b, c, d, den)
        };
        let g = [a, b, c, d]
            .iter()
            .fold(den, |g, x| gcd(g, x.content()));
        if g == 1 {
            return Quaternion { a, b, c, d, den };
        }
        let div = |x: R| x.div_int(g).expect("content divides every coordinate");
        Quaternion {
            a: div(a),
            b: div(b),
            c: div(c),
            d: div(d),
            den: den / g,
        }
    }

    pub fn scalar(s: R) -> Self {
        Self::new(s, R::zero(), R::zero(), R::zero())
    }

    pub fn one() -> Self {
        Self::scalar(R::one())
    }

    pub fn i() -> Self {
        Self::new(R::zero(), R::one(), R::zero(), R::zero())
    }

    pub fn j() -> Self {
        Self::new(R::zero(), R::zero(), R::one(), R::zero())
    }

    pub fn k() -> Self {
        Self::new(R::zero(), R::zero(), R::zero(), R::one())
    }

    /// Numerator coordinates in the basis `1, î, ĵ, k̂`.
    pub fn numer(&self) -> [R; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn conj(&self) -> Self {
        Quaternion {
            a: self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
            den: self.den,
        }
    }

    /// `a² + b² + c² + d²` of the numerator, i.e. `den² · Nm`.
    pub fn norm_numer(&self) -> R {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Reduced norm, when it lies in the coefficient ring.
    pub fn norm(&self) -> Option<R> {
        self.norm_numer().div_int(self.den * self.den)
    }

    /// Reduced trace `2a / den`, when it lies in the coefficient ring.
    pub fn trace(&self) -> Option<R> {
        (self.a + self.a).div_int(self.den)
    }

    pub fn scale(&self, s: R) -> Self {
        Self::with_den(self.a * s, self.b * s, self.c * s, self.d * s, self.den)
    }

    /// Applies `f` to every numerator coordinate, keeping the denominator.
    pub fn map_numer(&self, f: impl Fn(R) -> Option<R>) -> Option<Self> {
        Some(Self::with_den(
            f(self.a)?,
            f(self.b)?,
            f(self.c)?,
            f(self.d)?,
            self.den,
        ))
    }

    /// `self / k` for a rational integer `k`.
    pub fn div_int(&self, k: i64) -> Self {
        Self::with_den(self.a, self.b, self.c, self.d, self.den * k)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (s, t) = (R::from_int(o.den), R::from_int(self.den));
        Self::with_den(
            self.a * s + o.a * t,
            self.b * s + o.b * t,
            self.c * s + o.c * t,
            self.d * s + o.d * t,
            self.den * o.den,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Quaternion {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
            den: self.den,
        }
    }

    /// Hamilton product.
    pub fn mul(&self, o: &Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        Self::with_den(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            self.den * o.den,
        )
    }

    /// Integer coordinates of the numerator followed by the denominator;
    /// the ordering key for generator lists.
    pub fn flat_coords(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.numer().iter().flat_map(|x| x.coords()).collect();
        v.push(self.den);
        v
    }
}

impl<R: Coeff + fmt::Display> fmt::Debug for Quaternion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<R: Coeff + fmt::Display> fmt::Display for Quaternion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)?;
        if self.den != 1 {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

//! Scalar domains.
//!
//! Arithmetic goes through method-style traits rather than the `std::ops`
//! family so that generic code stays free of reference-lifetime bounds.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// Commutative ring with exact equality. Implementors are integral domains.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Quotient `q` with `q * other == self`, if one exists.
    fn try_div_exact(&self, other: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A field, either exact or floating.
pub trait Field: Ring {
    /// True when equality tests are exact.
    const EXACT: bool;

    /// Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    fn from_rational(q: &Rational) -> Self;

    fn to_complex(&self) -> Complex64;

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Compare `|self|` with 1. Floating domains treat values within `1e-12` as equal.
    fn modulus_cmp_one(&self) -> Ordering {
        let m = self.magnitude();
        if (m - 1.0).abs() <= 1e-12 {
            Ordering::Equal
        } else if m > 1.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Bit size used to witness height growth along exact orbits.
    fn height_bits(&self) -> u64 {
        0
    }

    /// Scalar by which a coefficient vector is divided to bring it to normal form.
    fn normalizer(coeffs: &[Self]) -> Self {
        coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(Self::one)
    }

    /// Zero for exact domains; below `1e-12 * scale` for floating ones.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
        }
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn modulus_cmp_one(&self) -> Ordering {
        self.abs().cmp(&One::one())
    }
    fn height_bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }
    /// Integer content with the sign of the leading coefficient, so the
    /// normalized vector is primitive with positive leading term.
    fn normalizer(coeffs: &[Self]) -> Self {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs.iter().filter(|c| !Zero::is_zero(*c)) {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return One::one();
        }
        let lead = coeffs.iter().rev().find(|c| !Zero::is_zero(*c)).unwrap();
        let content = Rational::new(num_gcd, den_lcm);
        if lead.is_negative() {
            -content
        } else {
            content
        }
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        if Ring::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn inv(&self) -> Self {
        assert!(!Ring::is_zero(self), "inverse of zero");
        self.finv()
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Nearest `f64`, saturating to infinity for huge values.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Rescale by powers of two when numerator or denominator overflow.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        q / Rational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * Rational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let m = scaled.to_f64().unwrap_or(0.0);
    m * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

/// `p/q` as a rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// only if it lies within `tol` of `x`.
pub fn recognize_rational(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction convergents.
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

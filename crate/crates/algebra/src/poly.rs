//! Dense univariate polynomials with ascending coefficients.

use std::fmt;

use num_complex::Complex64;

use crate::scalar::{Field, Ring};

/// `coeffs[i]` is the coefficient of `z^i`. Trailing zeros are trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

/// Polynomials in `z` whose coefficients are polynomials in a parameter `c`.
pub type BiPoly<R> = Poly<Poly<R>>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| R::from_i64(c)).collect())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The variable `z`.
    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    /// Multiplicity of `z = 0` as a root.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: &R) -> (R, R) {
        let mut p = R::zero();
        let mut dp = R::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp.mul(x).add(&p);
            p = p.mul(x).add(c);
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&R::from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self(g(z))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero_poly(), |acc, c| {
            Ring::add(&Ring::mul(&acc, g), &Self::constant(c.clone()))
        })
    }

    /// `sum_i c_i a^i b^(deg - i)`: the degree-`deg` homogenization of `self`
    /// evaluated at the pair `(a, b)`.
    pub fn homogeneous_substitute(&self, deg: usize, a: &Self, b: &Self) -> Self {
        debug_assert!(self.degree().is_none_or(|d| d <= deg));
        let mut a_pows = Vec::with_capacity(deg + 1);
        a_pows.push(Self::one_poly());
        for i in 1..=deg {
            a_pows.push(Ring::mul(&a_pows[i - 1], a));
        }
        let mut acc = Self::zero_poly();
        let mut b_pow = Self::one_poly();
        for i in (0..=deg).rev() {
            let c = self.coeff(i);
            if !c.is_zero() {
                acc = Ring::add(&acc, &Ring::mul(&a_pows[i], &b_pow).scale(&c));
            }
            if i > 0 {
                b_pow = Ring::mul(&b_pow, b);
            }
        }
        acc
    }

    /// Scalar version of [`Poly::homogeneous_substitute`].
    pub fn homogeneous_eval(&self, deg: usize, x: &R, z: &R) -> R {
        let mut acc = R::zero();
        let mut z_pow = R::one();
        // Horner in x/z without dividing: sum c_i x^i z^(deg-i).
        let mut x_pows = Vec::with_capacity(deg + 1);
        x_pows.push(R::one());
        for i in 1..=deg {
            x_pows.push(x_pows[i - 1].mul(x));
        }
        for i in (0..=deg).rev() {
            let c = self.coeff(i);
            if !c.is_zero() {
                acc = acc.add(&c.mul(&x_pows[i]).mul(&z_pow));
            }
            if i > 0 {
                z_pow = z_pow.mul(z);
            }
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    fn zero_poly() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn one_poly() -> Self {
        Poly {
            coeffs: vec![R::one()],
        }
    }

    /// Exact quotient, if `other` divides `self` in `R[z]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let dd = other.degree()?;
        let lead = other.leading()?.clone();
        if self.coeffs.is_empty() {
            return Some(self.clone());
        }
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![R::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top.try_div_exact(&lead)?;
            for (j, oc) in other.coeffs.iter().enumerate() {
                if !oc.is_zero() {
                    rem[k + j] = rem[k + j].sub(&q.mul(oc));
                }
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(quot))
        } else {
            None
        }
    }
}

impl<F: Field> Poly<F> {
    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        let dd = other.degree().expect("division by the zero polynomial");
        let inv_lead = other.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Self::zero_poly(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].mul(&inv_lead);
            if !q.is_zero() {
                for (j, oc) in other.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&q.mul(oc));
                }
            }
            rem[k + dd] = F::zero();
            quot[k] = q;
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv()),
            None => self.clone(),
        }
    }

    /// Divide by [`Field::normalizer`]: primitive integer content over the
    /// rationals, monic otherwise.
    pub fn normalized(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        self.scale(&F::normalizer(&self.coeffs).inv())
    }

    /// Monic greatest common divisor. Exact domains only.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.coeffs.is_empty() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one_poly(), Self::zero_poly());
        let (mut t0, mut t1) = (Self::zero_poly(), Self::one_poly());
        while !r1.coeffs.is_empty() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = Ring::sub(&s0, &Ring::mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = Ring::sub(&t0, &Ring::mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            Some(l) => {
                let li = l.inv();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
            None => (r0, s0, t0),
        }
    }

    /// Yun's square-free decomposition: `(g_k, k)` with `self = lead * prod g_k^k`.
    /// Exact domains only.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = Ring::sub(&c, &b.derivative());
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, k));
            }
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            d = Ring::sub(&c, &b.derivative());
            k += 1;
        }
        out
    }

    /// True if the two polynomials differ by a nonzero scalar factor.
    pub fn is_associate(&self, other: &Self) -> bool {
        match (self.leading(), other.leading()) {
            (None, None) => true,
            (Some(a), Some(b)) => self.scale(b) == other.scale(a),
            _ => false,
        }
    }

    pub fn to_complex(&self) -> Poly<Complex64> {
        self.map(|c| c.to_complex())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Self::zero_poly()
    }
    fn one() -> Self {
        Self::one_poly()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.sub(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.neg(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_poly();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(R::from_i64(n))
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
}

impl<R: Ring> BiPoly<R> {
    /// Build from `(coefficient, c-exponent, z-exponent)` triples.
    pub fn from_terms(terms: &[(R, usize, usize)]) -> Self {
        let mut acc = Self::zero();
        for (coef, ce, ze) in terms {
            let inner = Poly::monomial(coef.clone(), *ce);
            acc = Ring::add(&acc, &Poly::monomial(inner, *ze));
        }
        acc
    }

    /// Partial derivative in the outer variable `z`.
    pub fn partial_z(&self) -> Self {
        self.derivative()
    }

    /// Partial derivative in the inner variable `c`.
    pub fn partial_c(&self) -> Self {
        Self::new(self.coeffs.iter().map(|p| p.derivative()).collect())
    }

    /// Substitute `c = c0`, leaving a polynomial in `z`.
    pub fn specialize_c(&self, c0: &R) -> Poly<R> {
        Poly::new(self.coeffs.iter().map(|p| p.eval(c0)).collect())
    }

    pub fn eval_bi(&self, c0: &R, z0: &R) -> R {
        self.specialize_c(c0).eval(z0)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

//! Cyclotomic fields `Q(zeta_n)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::poly::Poly;
use crate::scalar::{rational_to_f64, Field, Rational, Ring};

/// The `n`-th cyclotomic polynomial, by dividing `z^n - 1` by `Phi_d` for proper divisors `d`.
pub fn cyclotomic_polynomial(n: u32) -> Poly<Rational> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut num = Poly::<Rational>::monomial(Rational::one(), n as usize);
    num = Ring::sub(&num, &Poly::one());
    for d in 1..n {
        if n % d == 0 {
            num = num
                .div_exact(&cyclotomic_polynomial(d))
                .expect("cyclotomic polynomials divide z^n - 1");
        }
    }
    num
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Element of `Q(zeta_n)` written in the power basis `1, zeta, ..., zeta^(phi(n)-1)`
/// and reduced modulo `Phi_n`. Elements of different orders are combined in
/// `Q(zeta_lcm)`.
#[derive(Clone)]
pub struct CycloScalar {
    order: u32,
    coeffs: Vec<Rational>,
    modulus: Arc<Vec<Rational>>,
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloScalar({self})")
    }
}

impl CycloScalar {
    fn modulus_for(order: u32) -> Arc<Vec<Rational>> {
        Arc::new(cyclotomic_polynomial(order).into_coeffs())
    }

    fn with_modulus(order: u32, modulus: Arc<Vec<Rational>>, coeffs: Vec<Rational>) -> Self {
        let mut s = CycloScalar {
            order,
            coeffs,
            modulus,
        };
        s.reduce();
        s
    }

    /// Build from power-basis coefficients (any length; reduced modulo `Phi_n`).
    pub fn new(order: u32, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self::with_modulus(order, Self::modulus_for(order), coeffs)
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::new(1, vec![q])
    }

    /// A primitive `n`-th root of unity, `e^(2 pi i / n)` under [`Field::to_complex`].
    pub fn zeta(n: u32) -> Self {
        Self::new(n, vec![Rational::zero(), Rational::one()])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients, length `phi(order)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&mut self) {
        let deg = self.degree();
        let m = self.modulus.clone();
        // Phi_n is monic.
        while self.coeffs.len() > deg {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = self.coeffs.len() - deg;
            for (j, mc) in m[..deg].iter().enumerate() {
                if !mc.is_zero() {
                    self.coeffs[base + j] = self.coeffs[base + j].sub(&top.mul(mc));
                }
            }
        }
        self.coeffs.resize(deg, Rational::zero());
    }

    /// Re-express in `Q(zeta_target)`; `order` must divide `target`.
    fn promote(&self, target: u32, modulus: &Arc<Vec<Rational>>) -> Self {
        if self.order == target {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::with_modulus(target, modulus.clone(), v)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = self.order.lcm(&other.order);
        let modulus = if l == self.order {
            self.modulus.clone()
        } else if l == other.order {
            other.modulus.clone()
        } else {
            Self::modulus_for(l)
        };
        (self.promote(l, &modulus), other.promote(l, &modulus))
    }

    /// Complex conjugate: `zeta -> zeta^(-1)`.
    pub fn conjugate(&self) -> Self {
        let n = self.order as usize;
        let mut v = vec![Rational::zero(); n.max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(n - k) % n] = v[(n - k) % n].add(c);
        }
        Self::with_modulus(self.order, self.modulus.clone(), v)
    }

    fn as_poly(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.clone())
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.unify(other);
        a.coeffs == b.coeffs
    }
}

impl Ring for CycloScalar {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.add(y))
            .collect();
        CycloScalar { coeffs, ..a }
    }
    fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.sub(y))
            .collect();
        CycloScalar { coeffs, ..a }
    }
    fn mul(&self, other: &Self) -> Self {
        // Rational scalars skip the polynomial product.
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (a, b) = self.unify(other);
        let mut prod = vec![Rational::zero(); 2 * a.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].add(&x.mul(y));
                }
            }
        }
        Self::with_modulus(a.order, a.modulus.clone(), prod)
    }
    fn neg(&self) -> Self {
        CycloScalar {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            ..self.clone()
        }
    }
    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_i64(n))
    }
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.mul(&other.inv()))
        }
    }
}

impl CycloScalar {
    fn scale(&self, q: &Rational) -> Self {
        CycloScalar {
            coeffs: self.coeffs.iter().map(|c| c.mul(q)).collect(),
            ..self.clone()
        }
    }
}

impl Field for CycloScalar {
    const EXACT: bool = true;

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.order == 1 {
            return Self::from_rational(self.coeffs[0].inv());
        }
        let m = Poly::new((*self.modulus).clone());
        let (g, s, _) = self.as_poly().ext_gcd(&m);
        debug_assert_eq!(g, Poly::one());
        Self::with_modulus(self.order, self.modulus.clone(), s.into_coeffs())
    }

    fn from_rational(q: &Rational) -> Self {
        CycloScalar::from_rational(q.clone())
    }

    fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n)
                    * rational_to_f64(c)
            })
            .sum()
    }

    /// `|x|^2 = x * conj(x)` is computed exactly; only its sign against 1 uses floats.
    fn modulus_cmp_one(&self) -> Ordering {
        let norm2 = self.mul(&self.conjugate()).sub(&Self::one());
        if norm2.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = norm2.as_rational() {
            return q.cmp(&Rational::zero());
        }
        let v = norm2.to_complex().re;
        if v > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.height_bits())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*zeta{}", self.order)?,
                _ => write!(f, "{c}*zeta{}^{k}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

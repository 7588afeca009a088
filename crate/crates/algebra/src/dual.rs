//! Dual numbers `a + b*eps` with `eps^2 = 0`, for exact forward-mode derivatives.

use crate::scalar::Ring;

#[derive(Clone, PartialEq, Debug)]
pub struct Dual<R: Ring> {
    pub re: R,
    pub eps: R,
}

impl<R: Ring> Dual<R> {
    pub fn new(re: R, eps: R) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: R) -> Self {
        Dual { re, eps: R::zero() }
    }

    /// `re + eps`.
    pub fn variable(re: R) -> Self {
        Dual { re, eps: R::one() }
    }
}

impl<R: Ring> Ring for Dual<R> {
    fn zero() -> Self {
        Self::constant(R::zero())
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Dual::new(self.re.add(&o.re), self.eps.add(&o.eps))
    }
    fn sub(&self, o: &Self) -> Self {
        Dual::new(self.re.sub(&o.re), self.eps.sub(&o.eps))
    }
    fn mul(&self, o: &Self) -> Self {
        Dual::new(
            self.re.mul(&o.re),
            self.re.mul(&o.eps).add(&self.eps.mul(&o.re)),
        )
    }
    fn neg(&self) -> Self {
        Dual::new(self.re.neg(), self.eps.neg())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(R::from_i64(n))
    }
    /// Requires an invertible real part in the divisor.
    fn try_div_exact(&self, o: &Self) -> Option<Self> {
        if o.re.is_zero() {
            return None;
        }
        let q0 = self.re.try_div_exact(&o.re)?;
        let q1 = self.eps.sub(&o.eps.mul(&q0)).try_div_exact(&o.re)?;
        Some(Dual::new(q0, q1))
    }
}

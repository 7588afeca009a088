//! Dynatomic and preperiod polynomials, computed over any coefficient ring so
//! that the same code serves fixed maps and parameter families.

use preper_algebra::{AlgebraError, Field, Poly, Ring};

use crate::error::{DynError, DynResult};
use crate::family::ParamFamily;
use crate::projective::RationalMap;

/// Root-count budget: `d^n` may not exceed this.
pub const DEFAULT_ROOT_BUDGET: u64 = 100_000;

/// Largest `n <= 8` with `d^n <= budget`.
pub fn default_max_n(degree: usize, budget: u64) -> usize {
    let mut n = 0;
    while n < 8
        && (degree as u64)
            .checked_pow(n as u32 + 1)
            .is_some_and(|v| v <= budget)
    {
        n += 1;
    }
    n
}

pub fn check_budget(degree: usize, n: usize, budget: u64) -> DynResult<()> {
    match (degree as u64).checked_pow(n as u32) {
        Some(v) if v <= budget => Ok(()),
        _ => Err(DynError::BudgetExceeded {
            degree,
            n,
            limit: budget,
        }),
    }
}

/// Homogeneous iterates `(X_k, Z_k)` for `k = 0..=n`, dehomogenized at `Z = 1`;
/// the pair has homogeneous degree `d^k`.
pub fn homogeneous_iterates<R: Ring>(
    num: &Poly<R>,
    den: &Poly<R>,
    degree: usize,
    n: usize,
) -> Vec<(Poly<R>, Poly<R>)> {
    let mut out = Vec::with_capacity(n + 1);
    out.push((Poly::x(), Poly::one()));
    for k in 0..n {
        let (x, z) = &out[k];
        let nx = num.homogeneous_substitute(degree, x, z);
        let nz = den.homogeneous_substitute(degree, x, z);
        out.push((nx, nz));
    }
    out
}

/// A polynomial in `z` with its homogeneous degree; the gap to the affine
/// degree is the multiplicity of the root at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoly<R: Ring> {
    pub poly: Poly<R>,
    pub hdeg: usize,
}

impl<R: Ring> HomogeneousPoly<R> {
    pub fn infinity_multiplicity(&self) -> usize {
        self.hdeg - self.poly.degree().unwrap_or(0)
    }
}

fn mobius_mu(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn dynatomic_from_iterates<R: Ring>(
    its: &[(Poly<R>, Poly<R>)],
    degree: usize,
    p: usize,
) -> DynResult<HomogeneousPoly<R>> {
    let mut top = Poly::one();
    let mut bottom = Poly::one();
    let mut hdeg: i64 = 0;
    for k in (1..=p).filter(|k| p % k == 0) {
        let mu = mobius_mu(p / k);
        if mu == 0 {
            continue;
        }
        let (x, z) = &its[k];
        let delta = Ring::sub(x, &Ring::mul(&Poly::x(), z));
        let h = degree.pow(k as u32) as i64 + 1;
        if mu > 0 {
            top = Ring::mul(&top, &delta);
            hdeg += h;
        } else {
            bottom = Ring::mul(&bottom, &delta);
            hdeg -= h;
        }
    }
    let poly = top
        .div_exact(&bottom)
        .ok_or(DynError::Algebra(AlgebraError::NonExactDivision))?;
    Ok(HomogeneousPoly {
        poly,
        hdeg: hdeg as usize,
    })
}

/// Dynatomic polynomial: the product over `k | p` of `(X_k - z Z_k)^mu(p/k)`.
/// Its roots are the points of exact period `p` (generically).
pub fn dynatomic<R: Ring>(
    num: &Poly<R>,
    den: &Poly<R>,
    degree: usize,
    p: usize,
) -> DynResult<HomogeneousPoly<R>> {
    assert!(p >= 1, "period must be positive");
    let its = homogeneous_iterates(num, den, degree, p);
    dynatomic_from_iterates(&its, degree, p)
}

/// Points of exact preperiod `k` onto a cycle of exact period `p`:
/// `Phi_p(f^k) / Phi_p(f^(k-1))`, or `Phi_p` itself when `k = 0`.
pub fn preperiod_polynomial<R: Ring>(
    num: &Poly<R>,
    den: &Poly<R>,
    degree: usize,
    k: usize,
    p: usize,
) -> DynResult<HomogeneousPoly<R>> {
    let its = homogeneous_iterates(num, den, degree, k.max(p));
    let phi = dynatomic_from_iterates(&its, degree, p)?;
    if k == 0 {
        return Ok(phi);
    }
    let compose = |j: usize| {
        let (x, z) = &its[j];
        phi.poly.homogeneous_substitute(phi.hdeg, x, z)
    };
    let poly = compose(k)
        .div_exact(&compose(k - 1))
        .ok_or(DynError::Algebra(AlgebraError::NonExactDivision))?;
    let dk = degree.pow(k as u32);
    Ok(HomogeneousPoly {
        poly,
        hdeg: phi.hdeg * (dk - dk / degree),
    })
}

/// Defining polynomial for the class `(k, p)` of a parameter family.
pub fn family_class_polynomial(
    fam: &ParamFamily,
    k: usize,
    p: usize,
) -> DynResult<HomogeneousPoly<preper_algebra::MPoly<preper_algebra::Rational>>> {
    preperiod_polynomial(fam.num(), fam.den(), fam.degree(), k, p)
}

/// `X_n Z_m - X_m Z_n` for `n > m >= 0`: its zeros are the points with
/// `f^n = f^m`, infinity included through the homogeneous degree `d^n + d^m`.
/// Normalized by [`Field::normalizer`].
pub fn preperiodic_equation<F: Field>(
    f: &RationalMap<F>,
    n: usize,
    m: usize,
    budget: u64,
) -> DynResult<HomogeneousPoly<F>> {
    if n <= m {
        return Err(DynError::InvalidInput(format!(
            "need n > m, got n={n}, m={m}"
        )));
    }
    let d = f.degree();
    check_budget(d, n, budget)?;
    let its = homogeneous_iterates(f.num(), f.den(), d, n);
    let (xn, zn) = &its[n];
    let (xm, zm) = &its[m];
    let h = Ring::sub(&Ring::mul(xn, zm), &Ring::mul(xm, zn));
    Ok(HomogeneousPoly {
        poly: h.normalized(),
        hdeg: d.pow(n as u32) + d.pow(m as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use preper_algebra::{rat, MPoly, Rational};

    type Q = Poly<Rational>;

    fn cpoly(terms: &[(i64, u32, usize)]) -> Poly<MPoly<Rational>> {
        // (coefficient, c-exponent, z-exponent)
        let mut acc = Poly::zero();
        for &(a, ce, ze) in terms {
            let coef = MPoly::term(rat(a, 1), vec![ce]);
            acc = Ring::add(&acc, &Poly::monomial(coef, ze));
        }
        acc
    }

    fn quad() -> ParamFamily {
        ParamFamily::quadratic()
    }

    #[test]
    fn quadratic_dynatomic_polynomials() {
        let f = quad();
        let phi1 = dynatomic(f.num(), f.den(), 2, 1).unwrap();
        assert_eq!(phi1.poly, cpoly(&[(1, 0, 2), (-1, 0, 1), (1, 1, 0)]));
        let phi2 = dynatomic(f.num(), f.den(), 2, 2).unwrap();
        assert_eq!(
            phi2.poly,
            cpoly(&[(1, 0, 2), (1, 0, 1), (1, 1, 0), (1, 0, 0)])
        );
        assert_eq!(phi2.hdeg, 2);
        assert_eq!(phi2.infinity_multiplicity(), 0);
        assert_eq!(phi1.infinity_multiplicity(), 1);
    }

    #[test]
    fn period_three_curve() {
        let f = quad();
        let phi3 = dynatomic(f.num(), f.den(), 2, 3).unwrap();
        let want = cpoly(&[
            (1, 0, 6),
            (1, 0, 5),
            (3, 1, 4),
            (1, 0, 4),
            (2, 1, 3),
            (1, 0, 3),
            (3, 2, 2),
            (3, 1, 2),
            (1, 0, 2),
            (1, 2, 1),
            (2, 1, 1),
            (1, 0, 1),
            (1, 3, 0),
            (2, 2, 0),
            (1, 1, 0),
            (1, 0, 0),
        ]);
        assert_eq!(phi3.poly, want);
    }

    #[test]
    fn strict_preperiod_polynomials() {
        let f = quad();
        // (k, p) = (1, 2): z^2 - z + c + 1
        let p12 = preperiod_polynomial(f.num(), f.den(), 2, 1, 2).unwrap();
        assert_eq!(
            p12.poly,
            cpoly(&[(1, 0, 2), (-1, 0, 1), (1, 1, 0), (1, 0, 0)])
        );
        // (k, p) = (1, 1): z^2 + z + c
        let p11 = preperiod_polynomial(f.num(), f.den(), 2, 1, 1).unwrap();
        assert_eq!(p11.poly, cpoly(&[(1, 0, 2), (1, 0, 1), (1, 1, 0)]));
    }

    #[test]
    fn preperiodic_equation_of_z_squared() {
        let f = RationalMap::polynomial(Q::from_ints(&[0, 0, 1])).unwrap();
        let h = preperiodic_equation(&f, 2, 0, DEFAULT_ROOT_BUDGET).unwrap();
        assert_eq!(h.poly, Q::from_ints(&[0, -1, 0, 0, 1]));
        assert_eq!(h.hdeg, 5);
        assert_eq!(h.infinity_multiplicity(), 1);
    }

    #[test]
    fn budget() {
        assert_eq!(default_max_n(2, DEFAULT_ROOT_BUDGET), 8);
        assert_eq!(default_max_n(4, DEFAULT_ROOT_BUDGET), 8);
        assert_eq!(default_max_n(5, DEFAULT_ROOT_BUDGET), 7);
        assert_eq!(default_max_n(10, DEFAULT_ROOT_BUDGET), 5);
        let f = RationalMap::polynomial(Q::from_ints(&[0, 0, 1])).unwrap();
        assert!(matches!(
            preperiodic_equation(&f, 17, 0, DEFAULT_ROOT_BUDGET),
            Err(DynError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn mobius_function() {
        let mu: Vec<i32> = (1..=10).map(mobius_mu).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}

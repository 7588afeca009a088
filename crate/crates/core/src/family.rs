//! Families of rational maps with polynomial dependence on parameters.

use preper_algebra::{Complex64, Field, MPoly, Poly, Rational, Ring};

use crate::error::{DynError, DynResult};
use crate::projective::RationalMap;

/// `z -> num(s, z) / den(s, z)` with coefficients in `Q[s_0, ..., s_{k-1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamFamily {
    nparams: usize,
    degree: usize,
    num: Poly<MPoly<Rational>>,
    den: Poly<MPoly<Rational>>,
}

impl ParamFamily {
    pub fn new(
        nparams: usize,
        num: Poly<MPoly<Rational>>,
        den: Poly<MPoly<Rational>>,
    ) -> DynResult<Self> {
        let used = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .map(|c| c.num_vars())
            .max()
            .unwrap_or(0);
        if used > nparams {
            return Err(DynError::InvalidInput(format!(
                "coefficients use {used} parameters, family declares {nparams}"
            )));
        }
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree == 0 {
            return Err(DynError::DegenerateMap);
        }
        Ok(ParamFamily {
            nparams,
            degree,
            num,
            den,
        })
    }

    /// A family that ignores its parameters.
    pub fn constant(f: &RationalMap<Rational>, nparams: usize) -> Self {
        let lift = |p: &Poly<Rational>| p.map(|c| MPoly::constant(c.clone()));
        ParamFamily {
            nparams,
            degree: f.degree(),
            num: lift(f.num()),
            den: lift(f.den()),
        }
    }

    /// `z^2 + s_0`.
    pub fn quadratic() -> Self {
        let num = Poly::new(vec![MPoly::var(0), MPoly::zero(), MPoly::one()]);
        ParamFamily {
            nparams: 1,
            degree: 2,
            num,
            den: Poly::one(),
        }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num(&self) -> &Poly<MPoly<Rational>> {
        &self.num
    }

    pub fn den(&self) -> &Poly<MPoly<Rational>> {
        &self.den
    }

    /// True if some coefficient involves `s_j`.
    pub fn depends_on(&self, j: usize) -> bool {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .any(|c| c.depends_on(j))
    }

    /// Coefficient-wise partial derivatives in `s_j`, as a (numerator, denominator) pair.
    pub fn coefficient_partial(&self, j: usize) -> (Poly<MPoly<Rational>>, Poly<MPoly<Rational>>) {
        (
            self.num.map(|c| c.partial(j)),
            self.den.map(|c| c.partial(j)),
        )
    }

    fn check_arity(&self, n: usize) -> DynResult<()> {
        if n != self.nparams {
            return Err(DynError::InvalidInput(format!(
                "expected {} parameter values, got {n}",
                self.nparams
            )));
        }
        Ok(())
    }

    fn specialize_with<F: Field>(&self, s: &[F]) -> DynResult<RationalMap<F>> {
        self.check_arity(s.len())?;
        let embed = |c: &Rational| F::from_rational(c);
        let num = self.num.map(|c| c.eval_with(s, embed));
        let den = self.den.map(|c| c.eval_with(s, embed));
        let map = RationalMap::new(num, den)
            .map_err(|_| DynError::DegenerateParameter("common zero or vanishing map".into()))?;
        if map.degree() != self.degree {
            return Err(DynError::DegenerateParameter(format!(
                "degree drops to {}",
                map.degree()
            )));
        }
        Ok(map)
    }

    pub fn specialize(&self, s: &[Rational]) -> DynResult<RationalMap<Rational>> {
        self.specialize_with(s)
    }

    pub fn specialize_complex(&self, s: &[Complex64]) -> DynResult<RationalMap<Complex64>> {
        self.specialize_with(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use preper_algebra::rat;

    #[test]
    fn quadratic_specializes() {
        let fam = ParamFamily::quadratic();
        let f = fam.specialize(&[rat(-21, 16)]).unwrap();
        assert_eq!(
            f.num(),
            &Poly::new(vec![rat(-21, 16), rat(0, 1), rat(1, 1)])
        );
        assert!(fam.depends_on(0) && !fam.depends_on(1));
        assert!(fam.specialize(&[]).is_err());
    }

    #[test]
    fn degree_drop_is_a_degenerate_parameter() {
        // s z^2 + 1 at s = 0
        let num = Poly::new(vec![MPoly::one(), MPoly::zero(), MPoly::var(0)]);
        let fam = ParamFamily::new(1, num, Poly::one()).unwrap();
        assert!(matches!(
            fam.specialize(&[rat(0, 1)]),
            Err(DynError::DegenerateParameter(_))
        ));
    }
}

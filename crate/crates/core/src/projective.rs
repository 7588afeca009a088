//! Points, rational maps and Möbius transformations of the projective line.

use std::cmp::Ordering;
use std::fmt;

use preper_algebra::roots::small_roots;
use preper_algebra::{resultant_with_degrees, Complex64, Field, Poly};

use crate::error::{DynError, DynResult};

/// A point `(X:Z)`. Exact points are stored as `(x:1)` or `(1:0)`; floating
/// points are divided by their larger coordinate.
#[derive(Clone, Debug)]
pub struct ProjPoint<F: Field> {
    x: F,
    z: F,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(x: F, z: F) -> DynResult<Self> {
        if x.is_zero() && z.is_zero() {
            return Err(DynError::InvalidPoint);
        }
        Ok(Self::normalize(x, z))
    }

    fn normalize(x: F, z: F) -> Self {
        if F::EXACT {
            if z.is_zero() {
                ProjPoint {
                    x: F::one(),
                    z: F::zero(),
                }
            } else {
                ProjPoint {
                    x: x.div(&z),
                    z: F::one(),
                }
            }
        } else if x.magnitude() > z.magnitude() {
            ProjPoint {
                z: z.div(&x),
                x: F::one(),
            }
        } else {
            ProjPoint {
                x: x.div(&z),
                z: F::one(),
            }
        }
    }

    pub fn finite(x: F) -> Self {
        ProjPoint { x, z: F::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            x: F::one(),
            z: F::zero(),
        }
    }

    pub fn x(&self) -> &F {
        &self.x
    }

    pub fn z(&self) -> &F {
        &self.z
    }

    pub fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }

    /// `X/Z`, or `None` at infinity.
    pub fn affine(&self) -> Option<F> {
        if self.z.is_zero() {
            None
        } else {
            Some(self.x.div(&self.z))
        }
    }

    pub fn to_complex(&self) -> ProjPoint<Complex64> {
        ProjPoint::normalize(self.x.to_complex(), self.z.to_complex())
    }

    /// Chordal distance on the unit sphere, in `[0, 1]`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        chordal(
            self.x.to_complex(),
            self.z.to_complex(),
            other.x.to_complex(),
            other.z.to_complex(),
        )
    }

    pub fn height_bits(&self) -> u64 {
        self.x.height_bits().max(self.z.height_bits())
    }

    /// True if the chordal distance is within `tol` (exact equality for exact domains).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if F::EXACT {
            self == other
        } else {
            self.chordal_distance(other) <= tol
        }
    }
}

fn chordal(x1: Complex64, z1: Complex64, x2: Complex64, z2: Complex64) -> f64 {
    let n1 = (x1.norm_sqr() + z1.norm_sqr()).sqrt();
    let n2 = (x2.norm_sqr() + z2.norm_sqr()).sqrt();
    ((x1 * z2 - x2 * z1).norm() / (n1 * n2)).min(1.0)
}

impl<F: Field> PartialEq for ProjPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.x.mul(&other.z) == other.x.mul(&self.z)
    }
}

impl<F: Field + fmt::Display> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

/// `z -> num(z)/den(z)` of degree `d = max(deg num, deg den)`, read as the pair
/// of degree-`d` homogeneous forms `(N(X,Z), D(X,Z))` with no common zero.
#[derive(Clone, Debug)]
pub struct RationalMap<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
    degree: usize,
}

impl<F: Field> RationalMap<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> DynResult<Self> {
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree == 0 || num.degree().is_none() || den.degree().is_none() {
            return Err(DynError::DegenerateMap);
        }
        let map = RationalMap { num, den, degree };
        if map.has_common_zero()? {
            return Err(DynError::DegenerateMap);
        }
        Ok(map)
    }

    /// The polynomial map with the given ascending coefficients.
    pub fn polynomial(num: Poly<F>) -> DynResult<Self> {
        Self::new(num, Poly::constant(F::one()))
    }

    fn has_common_zero(&self) -> DynResult<bool> {
        let d = self.degree;
        if F::EXACT {
            let r = resultant_with_degrees(&self.num, d, &self.den, d)?;
            return Ok(r.is_zero());
        }
        // Floating: both vanish at infinity, or den vanishes at a root of num.
        let sd = self
            .den
            .coeffs()
            .iter()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max);
        if self.num.degree() < Some(d) && self.den.degree() < Some(d) {
            return Ok(true);
        }
        let nc = self.num.to_complex();
        let dc = self.den.to_complex();
        for r in small_roots(&nc) {
            let rz = r.norm().max(1.0).powi(d as i32);
            if dc.eval(&r).norm() <= 1e-10 * sd * rz {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// `(N(x,z), D(x,z))` without normalization.
    pub fn eval_homogeneous(&self, x: &F, z: &F) -> (F, F) {
        (
            self.num.homogeneous_eval(self.degree, x, z),
            self.den.homogeneous_eval(self.degree, x, z),
        )
    }

    pub fn eval(&self, p: &ProjPoint<F>) -> DynResult<ProjPoint<F>> {
        let (x, z) = self.eval_homogeneous(p.x(), p.z());
        ProjPoint::new(x, z)
    }

    pub fn eval_affine(&self, z: &F) -> DynResult<ProjPoint<F>> {
        self.eval(&ProjPoint::finite(z.clone()))
    }

    pub fn iterate(&self, p: &ProjPoint<F>, n: usize) -> DynResult<ProjPoint<F>> {
        let mut q = p.clone();
        for _ in 0..n {
            q = self.eval(&q)?;
        }
        Ok(q)
    }

    /// `self o g`.
    pub fn compose(&self, g: &Self) -> DynResult<Self> {
        let mut n = self.num.homogeneous_substitute(self.degree, &g.num, &g.den);
        let mut d = self.den.homogeneous_substitute(self.degree, &g.num, &g.den);
        if F::EXACT {
            let common = n.gcd(&d);
            if common.degree().unwrap_or(0) > 0 {
                n = n.div_rem(&common).0;
                d = d.div_rem(&common).0;
            }
        }
        Self::new(n, d)
    }

    /// The `n`-th iterate as a map (`n >= 1`).
    pub fn iterate_map(&self, n: usize) -> DynResult<Self> {
        assert!(n >= 1, "iterate_map needs n >= 1");
        let mut m = self.clone();
        for _ in 1..n {
            m = self.compose(&m)?;
        }
        Ok(m)
    }

    /// `A o self o A^-1`.
    pub fn conjugate(&self, a: &Mobius<F>) -> DynResult<Self> {
        a.as_map().compose(&self.compose(&a.inverse().as_map())?)
    }

    /// `f'(z)` in the affine chart, or `None` if `f(z) = inf`.
    pub fn derivative_affine(&self, z: &F) -> Option<F> {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        if d.is_zero() {
            return None;
        }
        Some(dn.mul(&d).sub(&n.mul(&dd)).div(&d.mul(&d)))
    }

    pub fn to_complex(&self) -> RationalMap<Complex64> {
        RationalMap {
            num: self.num.to_complex(),
            den: self.den.to_complex(),
            degree: self.degree,
        }
    }

    /// Product of derivatives along the cycle. Charts avoid infinity by
    /// conjugating with `1/z`, or `1/(z - a)` when 0 is also on the cycle.
    pub fn multiplier(&self, cycle: &[ProjPoint<F>]) -> DynResult<F> {
        if cycle.is_empty() {
            return Err(DynError::NotACycle);
        }
        let tol = 1e-8;
        for (i, p) in cycle.iter().enumerate() {
            let next = &cycle[(i + 1) % cycle.len()];
            if !self.eval(p)?.approx_eq(next, tol) {
                return Err(DynError::NotACycle);
            }
        }
        let near = |p: &ProjPoint<F>, v: &F| p.approx_eq(&ProjPoint::finite(v.clone()), 1e-3);
        if cycle.iter().all(|p| !p.is_infinity()) {
            let prod = self.affine_derivative_product(cycle);
            if let Some(l) = prod {
                return Ok(l);
            }
        }
        // First of 0, 1, -1, 2, -2, ... away from the cycle.
        let a = (0..)
            .flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
            .map(F::from_i64)
            .find(|a| cycle.iter().all(|p| !near(p, a)))
            .unwrap();
        // B(z) = 1/(z - a)
        let b = Mobius::new(F::zero(), F::one(), F::one(), a.neg())?;
        let g = self.conjugate(&b)?;
        let moved: Vec<ProjPoint<F>> =
            cycle.iter().map(|p| b.apply(p)).collect::<DynResult<_>>()?;
        g.affine_derivative_product(&moved)
            .ok_or(DynError::NotACycle)
    }

    fn affine_derivative_product(&self, cycle: &[ProjPoint<F>]) -> Option<F> {
        let mut prod = F::one();
        for p in cycle {
            let z = p.affine()?;
            prod = prod.mul(&self.derivative_affine(&z)?);
        }
        Some(prod)
    }

    /// Preimages of `w`, with multiplicity, as roots of `w_z N - w_x D`.
    /// Infinity appears when that polynomial drops degree.
    pub fn preimages_complex(&self, w: &ProjPoint<Complex64>) -> Vec<ProjPoint<Complex64>> {
        let num = self.num.to_complex();
        let den = self.den.to_complex();
        let (wx, wz) = (*w.x(), *w.z());
        let d = self.degree;
        let coeffs: Vec<Complex64> = (0..=d)
            .map(|i| wz * num.coeff(i) - wx * den.coeff(i))
            .collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut top = d;
        while top > 0 && coeffs[top].norm() <= 1e-14 * scale {
            top -= 1;
        }
        let p = Poly::new(coeffs[..=top].to_vec());
        let mut out: Vec<ProjPoint<Complex64>> =
            small_roots(&p).into_iter().map(ProjPoint::finite).collect();
        out.extend((top..d).map(|_| ProjPoint::infinity()));
        out
    }
}

impl<F: Field> PartialEq for RationalMap<F> {
    /// Equal as maps: `N1 D2 = N2 D1` and same degree.
    fn eq(&self, other: &Self) -> bool {
        use preper_algebra::Ring;
        self.degree == other.degree
            && Ring::mul(&self.num, &other.den) == Ring::mul(&other.num, &self.den)
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius<F: Field> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Field> Mobius<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> DynResult<Self> {
        if a.mul(&d).sub(&b.mul(&c)).is_negligible(1.0) {
            return Err(DynError::DegenerateMap);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mobius {
            a: F::one(),
            b: F::zero(),
            c: F::zero(),
            d: F::one(),
        }
    }

    pub fn apply(&self, p: &ProjPoint<F>) -> DynResult<ProjPoint<F>> {
        ProjPoint::new(
            self.a.mul(p.x()).add(&self.b.mul(p.z())),
            self.c.mul(p.x()).add(&self.d.mul(p.z())),
        )
    }

    /// `self o other`.
    pub fn compose(&self, o: &Self) -> Self {
        Mobius {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// Adjugate, which inverts up to scalar.
    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn as_map(&self) -> RationalMap<F> {
        RationalMap {
            num: Poly::new(vec![self.b.clone(), self.a.clone()]),
            den: Poly::new(vec![self.d.clone(), self.c.clone()]),
            degree: 1,
        }
    }
}

/// Dynamical type of a cycle, by its multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

impl CycleClass {
    pub fn of_multiplier<F: Field>(lambda: &F) -> Self {
        if lambda.is_negligible(1.0) {
            return CycleClass::Superattracting;
        }
        match lambda.modulus_cmp_one() {
            Ordering::Less => CycleClass::Attracting,
            Ordering::Equal => CycleClass::Indifferent,
            Ordering::Greater => CycleClass::Repelling,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CycleClass::Superattracting => "superattracting",
            CycleClass::Attracting => "attracting",
            CycleClass::Indifferent => "indifferent",
            CycleClass::Repelling => "repelling",
        }
    }
}

/// How an orbit record was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// An exact revisit was observed.
    CertifiedExact,
    /// A revisit within floating tolerance.
    Numeric,
    /// No revisit within the step or height budget.
    Inconclusive,
}

impl OrbitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitStatus::CertifiedExact => "certified_exact",
            OrbitStatus::Numeric => "numeric",
            OrbitStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Preperiod, period and cycle data of a forward orbit. When `status` is
/// [`OrbitStatus::Inconclusive`] the period is 0, the cycle is empty and
/// `height_witness` lists the bit heights of the last iterates.
#[derive(Clone, Debug)]
pub struct OrbitRecord<F: Field> {
    pub preperiod: usize,
    pub period: usize,
    pub cycle: Vec<ProjPoint<F>>,
    pub multiplier: Option<F>,
    pub class: Option<CycleClass>,
    pub status: OrbitStatus,
    pub height_witness: Vec<u64>,
}

impl<F: Field> OrbitRecord<F> {
    pub fn is_preperiodic(&self) -> bool {
        self.status != OrbitStatus::Inconclusive
    }

    pub fn to_complex(&self) -> OrbitRecord<Complex64> {
        OrbitRecord {
            preperiod: self.preperiod,
            period: self.period,
            cycle: self.cycle.iter().map(|p| p.to_complex()).collect(),
            multiplier: self.multiplier.as_ref().map(|m| m.to_complex()),
            class: self.class,
            status: self.status,
            height_witness: self.height_witness.clone(),
        }
    }
}

/// Exact orbits whose coordinates grow beyond this many bits are abandoned.
pub const HEIGHT_LIMIT_BITS: u64 = 1 << 14;

/// Follow the forward orbit of `z` until it revisits a point. Exact domains
/// compare exactly; floating ones use chordal distance `tol`.
pub fn orbit_classify<F: Field>(
    f: &RationalMap<F>,
    z: &ProjPoint<F>,
    max_steps: usize,
    tol: f64,
) -> DynResult<OrbitRecord<F>> {
    let mut orbit = vec![z.clone()];
    let mut heights = vec![z.height_bits()];
    for _ in 0..max_steps {
        let next = f.eval(orbit.last().unwrap())?;
        if let Some(i) = orbit.iter().position(|p| p.approx_eq(&next, tol)) {
            let cycle = orbit[i..].to_vec();
            let multiplier = f.multiplier(&cycle)?;
            return Ok(OrbitRecord {
                preperiod: i,
                period: orbit.len() - i,
                class: Some(CycleClass::of_multiplier(&multiplier)),
                multiplier: Some(multiplier),
                cycle,
                status: if F::EXACT {
                    OrbitStatus::CertifiedExact
                } else {
                    OrbitStatus::Numeric
                },
                height_witness: Vec::new(),
            });
        }
        heights.push(next.height_bits());
        orbit.push(next);
        if F::EXACT && *heights.last().unwrap() > HEIGHT_LIMIT_BITS {
            break;
        }
    }
    let keep = heights.len().saturating_sub(6);
    Ok(OrbitRecord {
        preperiod: orbit.len() - 1,
        period: 0,
        cycle: Vec::new(),
        multiplier: None,
        class: None,
        status: OrbitStatus::Inconclusive,
        height_witness: heights[keep..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use preper_algebra::{rat, CycloScalar, Rational, Ring};

    fn quad(c: Rational) -> RationalMap<Rational> {
        RationalMap::polynomial(Poly::new(vec![c, rat(0, 1), rat(1, 1)])).unwrap()
    }

    fn pt(p: i64, q: i64) -> ProjPoint<Rational> {
        ProjPoint::finite(rat(p, q))
    }

    #[test]
    fn zero_zero_is_rejected() {
        assert_eq!(
            ProjPoint::<Rational>::new(rat(0, 1), rat(0, 1)).unwrap_err(),
            DynError::InvalidPoint
        );
    }

    #[test]
    fn degenerate_maps_are_rejected() {
        // (z^2 - 1)/(z - 1) shares the root 1.
        let r = RationalMap::new(
            Poly::<Rational>::from_ints(&[-1, 0, 1]),
            Poly::from_ints(&[-1, 1]),
        );
        assert_eq!(r.unwrap_err(), DynError::DegenerateMap);
        let c = RationalMap::new(
            Poly::new(vec![
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ]),
            Poly::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]),
        );
        assert_eq!(c.unwrap_err(), DynError::DegenerateMap);
    }

    #[test]
    fn quadratic_orbit_of_five_quarters() {
        let f = quad(rat(-21, 16));
        let rec = orbit_classify(&f, &pt(5, 4), 10, 0.0).unwrap();
        assert_eq!((rec.preperiod, rec.period), (1, 2));
        assert_eq!(rec.status, OrbitStatus::CertifiedExact);
        assert_eq!(rec.class, Some(CycleClass::Repelling));
        // Cycle {1/4, -5/4}: multiplier 4 * (1/4) * (-5/4) = -5/4
        assert_eq!(rec.multiplier, Some(rat(-5, 4)));
    }

    #[test]
    fn wandering_points_are_inconclusive() {
        let f = quad(rat(0, 1));
        let rec = orbit_classify(&f, &pt(3, 2), 40, 0.0).unwrap();
        assert_eq!(rec.status, OrbitStatus::Inconclusive);
        assert!(rec.height_witness.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn infinity_is_a_superattracting_fixed_point_of_polynomials() {
        let f = quad(rat(1, 1));
        let rec = orbit_classify(&f, &ProjPoint::infinity(), 5, 0.0).unwrap();
        assert_eq!((rec.preperiod, rec.period), (0, 1));
        assert_eq!(rec.class, Some(CycleClass::Superattracting));
    }

    #[test]
    fn multiplier_through_infinity() {
        // f(z) = 1/z^2 swaps 0 and inf; multiplier of the 2-cycle is 0.
        let f = RationalMap::new(
            Poly::<Rational>::from_ints(&[1]),
            Poly::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let m = f.multiplier(&[pt(0, 1), ProjPoint::infinity()]).unwrap();
        assert_eq!(m, rat(0, 1));
        // 1 is fixed with multiplier -2.
        assert_eq!(f.multiplier(&[pt(1, 1)]).unwrap(), rat(-2, 1));
        assert_eq!(f.multiplier(&[pt(2, 1)]).unwrap_err(), DynError::NotACycle);
    }

    #[test]
    fn conjugation_preserves_multipliers() {
        let f = quad(rat(-21, 16));
        let a = Mobius::new(rat(2, 1), rat(1, 1), rat(1, 1), rat(3, 1)).unwrap();
        let g = f.conjugate(&a).unwrap();
        let fixed = pt(7, 4);
        let moved = a.apply(&fixed).unwrap();
        assert_eq!(g.eval(&moved).unwrap(), moved);
        assert_eq!(
            g.multiplier(&[moved]).unwrap(),
            f.multiplier(&[fixed]).unwrap()
        );
    }

    #[test]
    fn second_iterate_of_zeta_z_squared() {
        let z3 = CycloScalar::zeta(3);
        let g = RationalMap::polynomial(Poly::monomial(z3, 2)).unwrap();
        let g2 = g.compose(&g).unwrap();
        assert_eq!(g2.num(), &Poly::monomial(CycloScalar::one(), 4));
    }

    #[test]
    fn preimages_include_infinity_when_degree_drops() {
        let f = quad(rat(0, 1)).to_complex();
        let pre = f.preimages_complex(&ProjPoint::infinity());
        assert_eq!(pre.iter().filter(|p| p.is_infinity()).count(), 2);
        let pre = f.preimages_complex(&ProjPoint::finite(Complex64::new(4.0, 0.0)));
        let mut xs: Vec<f64> = pre.iter().map(|p| p.affine().unwrap().re).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 2.0).abs() < 1e-15 && (xs[1] - 2.0).abs() < 1e-15);
    }
}

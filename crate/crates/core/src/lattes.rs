//! Legendre curves `y^2 = x(x-1)(x-t)`, their division polynomials and the
//! degree-4 Lattes map induced by doubling.
//!
//! Division polynomials use the usual convention for `y^2 = x^3 + a2 x^2 + a4 x`:
//! `psi_n` is a polynomial in `x` for odd `n` and `2y` times one for even `n`.
//! Only the `x`-part `f_n` is stored.

use preper_algebra::roots::{cluster, solve_target};
use preper_algebra::{
    cyclotomic_polynomial, recognize_rational, roots, AlgebraError, Complex64, Dual, Field, MPoly,
    Poly, Rational, Ring, RootEstimate, RootTarget,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{DynError, DynResult};
use crate::projective::{ProjPoint, RationalMap};

type C = Complex64;

/// Largest torsion order accepted by [`division_x`].
pub const MAX_TORSION_ORDER: usize = 12;

/// Radius bound for numerically computed torsion x-coordinates. Order 12
/// reaches about 5e-7 at t = 2.
const ROOT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LegendreCurve<F: Field> {
    t: F,
}

fn near(a: C, b: f64) -> bool {
    (a - b).norm() <= 1e-12
}

impl<F: Field> LegendreCurve<F> {
    pub fn new(t: F) -> DynResult<Self> {
        let bad = if F::EXACT {
            t.is_zero() || t.is_one()
        } else {
            near(t.to_complex(), 0.0) || near(t.to_complex(), 1.0)
        };
        if bad {
            return Err(DynError::DegenerateParameter(format!(
                "t = {:?}",
                t.to_complex()
            )));
        }
        Ok(LegendreCurve { t })
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    fn a2(&self) -> F {
        F::one().add(&self.t).neg()
    }

    fn a4(&self) -> F {
        self.t.clone()
    }

    /// `x(x - 1)(x - t)`.
    pub fn cubic(&self) -> Poly<F> {
        Poly::new(vec![F::zero(), self.a4(), self.a2(), F::one()])
    }

    /// `f_t(z) = (z^2 - t)^2 / (4 z (z - 1)(z - t))`.
    pub fn lattes_map(&self) -> DynResult<RationalMap<F>> {
        let sq = Poly::new(vec![self.t.neg(), F::zero(), F::one()]);
        RationalMap::new(sq.mul(&sq), self.cubic().scale(&F::from_i64(4)))
    }

    /// `x(2P)` from the tangent-line group law, with `y^2` replaced by the cubic.
    /// Returns infinity at 2-torsion.
    pub fn double_x(&self, x: &F) -> DynResult<ProjPoint<F>> {
        let (a2, a4) = (self.a2(), self.a4());
        let slope_num = F::from_i64(3)
            .mul(&x.mul(x))
            .add(&F::from_i64(2).mul(&a2).mul(x))
            .add(&a4);
        let four_y2 = F::from_i64(4).mul(&self.cubic().eval(x));
        // lambda^2 - a2 - 2x over the common denominator 4 y^2.
        let num = slope_num
            .mul(&slope_num)
            .sub(&a2.add(&F::from_i64(2).mul(x)).mul(&four_y2));
        ProjPoint::new(num, four_y2)
    }

    /// `f_3`, `f_4` and `(4 y^2)^2`, the inputs of the recurrence.
    fn recurrence_base(&self) -> (Poly<F>, Poly<F>, Poly<F>) {
        let (a2, a4) = (self.a2(), self.a4());
        let c = |k: i64| F::from_i64(k);
        let b2 = c(4).mul(&a2);
        let b4 = c(2).mul(&a4);
        let b8 = a4.mul(&a4).neg();
        let f3 = Poly::new(vec![b8.clone(), F::zero(), c(3).mul(&b4), b2.clone(), c(3)]);
        let f4 = Poly::new(vec![
            b4.mul(&b8),
            b2.mul(&b8),
            c(10).mul(&b8),
            F::zero(),
            c(5).mul(&b4),
            b2,
            c(2),
        ]);
        let four_y2 = self.cubic().scale(&c(4));
        (f3, f4, four_y2.mul(&four_y2))
    }

    /// The `x`-parts `f_0, ..., f_n` of the division polynomials (`f_0 = 0`, `f_1 = f_2 = 1`).
    pub fn division_polynomials(&self, n: usize) -> Vec<Poly<F>> {
        let (f3, f4, quartic) = self.recurrence_base();
        let base = vec![Poly::zero(), Poly::one(), Poly::one(), f3, f4];
        let mut f = recurrence(n, base, &quartic, &|a, b| a.mul(b), &|a, b| a.sub(b));
        f.truncate(n + 1);
        f
    }

    /// Polynomial whose roots are exactly `x(E[n] \ {O})`, each once.
    pub fn torsion_polynomial(&self, n: usize) -> Poly<F> {
        let fnp = self.division_polynomials(n).pop().unwrap();
        if n % 2 == 0 {
            self.cubic().mul(&fnp)
        } else {
            fnp
        }
    }
}

/// Runs the division-polynomial recurrence up to index `n` from `f_0..f_4`.
/// `sub` may be replaced by an absolute sum to propagate magnitudes.
fn recurrence<T: Clone>(
    n: usize,
    mut f: Vec<T>,
    quartic: &T,
    mul: &dyn Fn(&T, &T) -> T,
    sub: &dyn Fn(&T, &T) -> T,
) -> Vec<T> {
    let cube = |a: &T| mul(&mul(a, a), a);
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let a = mul(&f[m + 2], &cube(&f[m]));
            let b = mul(&f[m - 1], &cube(&f[m + 1]));
            if m % 2 == 0 {
                sub(&mul(quartic, &a), &b)
            } else {
                sub(&a, &mul(quartic, &b))
            }
        } else {
            let l = mul(&f[m + 2], &mul(&f[m - 1], &f[m - 1]));
            let r = mul(&f[m - 2], &mul(&f[m + 1], &f[m + 1]));
            mul(&f[m], &sub(&l, &r))
        };
        f.push(next);
    }
    f
}

/// `f_n` as a root-finding target, evaluated through the recurrence at each
/// point instead of from its expanded coefficients, which lose all accuracy in
/// double precision once `n` passes 7 or so.
struct DivisionTarget {
    n: usize,
    degree: usize,
    base: [Poly<C>; 3],
    log_mag: Vec<f64>,
}

impl DivisionTarget {
    fn new<F: Field>(curve: &LegendreCurve<F>, n: usize, expanded: &Poly<F>) -> Self {
        let (f3, f4, q) = curve.recurrence_base();
        DivisionTarget {
            n,
            degree: expanded.degree().unwrap_or(0),
            base: [f3.to_complex(), f4.to_complex(), q.to_complex()],
            log_mag: expanded
                .coeffs()
                .iter()
                .map(|c| c.magnitude().ln())
                .collect(),
        }
    }
}

impl RootTarget for DivisionTarget {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval(&self, z: C) -> (C, C) {
        let d = |p: &Poly<C>| {
            let (v, dv) = p.eval_with_derivative(&z);
            Dual::new(v, dv)
        };
        let base = vec![
            Dual::zero(),
            Dual::one(),
            Dual::one(),
            d(&self.base[0]),
            d(&self.base[1]),
        ];
        let f = recurrence(
            self.n,
            base,
            &d(&self.base[2]),
            &|a, b| a.mul(b),
            &|a, b| a.sub(b),
        );
        let v = &f[self.n];
        (v.re, v.eps)
    }

    fn log_magnitudes(&self) -> Vec<f64> {
        self.log_mag.clone()
    }

    /// First-order running error bound: each value carries an absolute error
    /// that products and differences propagate, starting from Horner bounds.
    fn eval_error(&self, z: C) -> f64 {
        let eps = f64::EPSILON;
        let r = z.norm();
        let horner = |p: &Poly<C>| {
            let mag = p
                .coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * r + c.norm());
            (p.eval(&z), 2.0 * p.coeffs().len() as f64 * eps * mag)
        };
        let one = (C::new(1.0, 0.0), 0.0);
        let base = vec![
            (C::new(0.0, 0.0), 0.0),
            one,
            one,
            horner(&self.base[0]),
            horner(&self.base[1]),
        ];
        let mul = |a: &(C, f64), b: &(C, f64)| {
            let v = a.0 * b.0;
            (
                v,
                a.0.norm() * b.1 + b.0.norm() * a.1 + a.1 * b.1 + eps * v.norm(),
            )
        };
        let sub = |a: &(C, f64), b: &(C, f64)| {
            let v = a.0 - b.0;
            (v, a.1 + b.1 + eps * v.norm())
        };
        recurrence(self.n, base, &horner(&self.base[2]), &mul, &sub)[self.n].1
    }
}

pub fn legendre_lattes<F: Field>(t: &F) -> DynResult<RationalMap<F>> {
    LegendreCurve::new(t.clone())?.lattes_map()
}

/// One x-coordinate of a nonzero torsion point.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionX {
    pub value: C,
    pub radius: f64,
    /// Set when the coordinate is rational and was checked exactly.
    pub exact: Option<Rational>,
    /// Curve points over this x: 1 for 2-torsion, 2 otherwise.
    pub points_above: usize,
}

/// `x(E[n] \ {O})`. For odd `n` there are `(n^2 - 1)/2` coordinates; for even
/// `n` the three 2-torsion coordinates carry one point each, giving `(n^2 + 2)/2`.
#[derive(Clone, Debug)]
pub struct TorsionXSet<F: Field> {
    pub order: usize,
    pub points: Vec<TorsionX>,
    pub polynomial: Poly<F>,
}

impl<F: Field> TorsionXSet<F> {
    /// Number of curve points represented, `n^2 - 1` when complete.
    pub fn point_count(&self) -> usize {
        self.points.iter().map(|p| p.points_above).sum()
    }
}

fn check_order(n: usize) -> DynResult<()> {
    if !(2..=MAX_TORSION_ORDER).contains(&n) {
        return Err(DynError::InvalidInput(format!(
            "torsion order {n} outside 2..={MAX_TORSION_ORDER}"
        )));
    }
    Ok(())
}

pub fn division_x<F: Field>(t: &F, n: usize) -> DynResult<TorsionXSet<F>> {
    check_order(n)?;
    let curve = LegendreCurve::new(t.clone())?;
    torsion_set(&curve, n)
}

fn torsion_set<F: Field>(curve: &LegendreCurve<F>, n: usize) -> DynResult<TorsionXSet<F>> {
    let fnp = curve.division_polynomials(n).pop().unwrap();
    let mut found: Vec<RootEstimate> = Vec::new();
    if n % 2 == 0 {
        let t = curve.t().to_complex();
        found.extend(
            [C::new(0.0, 0.0), C::new(1.0, 0.0), t].map(|value| RootEstimate {
                value,
                radius: 0.0,
                multiplicity: 1,
            }),
        );
    }
    if fnp.degree().unwrap_or(0) > 0 {
        let target = DivisionTarget::new(curve, n, &fnp);
        found.extend(solve_target(&target, 0).0);
    }
    let separated = cluster(&found).len() == found.len();
    let worst = found.iter().map(|r| r.radius).fold(0.0, f64::max);
    if !separated || worst > ROOT_TOL {
        return Err(DynError::Algebra(AlgebraError::RefinementFailure(format!(
            "{n}-torsion x-coordinates: worst radius {worst:e}, separated {separated}"
        ))));
    }
    let poly = curve.torsion_polynomial(n);
    let cubic = curve.cubic();
    let mut points: Vec<TorsionX> = found
        .iter()
        .map(|r| {
            let exact = exact_root(&poly, r.value);
            let two_torsion = match &exact {
                Some(q) => cubic.eval(&F::from_rational(q)).is_zero(),
                None => cubic.to_complex().eval(&r.value).norm() <= 1e-9,
            };
            TorsionX {
                value: r.value,
                radius: r.radius,
                exact,
                points_above: if two_torsion { 1 } else { 2 },
            }
        })
        .collect();
    points.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(TorsionXSet {
        order: n,
        points,
        polynomial: poly,
    })
}

fn exact_root<F: Field>(p: &Poly<F>, z: C) -> Option<Rational> {
    if !F::EXACT || z.im.abs() > 1e-9 {
        return None;
    }
    let q = recognize_rational(z.re, 1 << 20, 1e-9 * z.re.abs().max(1.0))?;
    p.eval(&F::from_rational(&q)).is_zero().then_some(q)
}

/// Forward orbit of one torsion x-coordinate under `f_t`.
#[derive(Clone, Debug)]
pub struct TorsionOrbit {
    pub x: TorsionX,
    pub preperiod: usize,
    pub period: usize,
    /// Number of steps to the fixed point at infinity, if the orbit gets there.
    pub steps_to_infinity: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub t: C,
    pub order: usize,
    /// `x(E[n]) ∪ {∞}` is forward invariant: exactly by polynomial division for
    /// exact parameters, by disk separation otherwise.
    pub invariant: bool,
    pub orbits: Vec<TorsionOrbit>,
}

impl TorsionReport {
    pub fn all_preperiodic(&self) -> bool {
        self.invariant && self.orbits.iter().all(|o| o.period > 0)
    }
}

/// Each torsion x-coordinate lands in `x(E[n]) ∪ {∞}`, so its orbit is read
/// off the induced self-map of that finite set. Images are matched to the
/// nearest element, which is unambiguous once the matching distance is below
/// half the separation of the set.
pub fn torsion_preperiodicity<F: Field>(t: &F, n: usize) -> DynResult<TorsionReport> {
    check_order(n)?;
    let curve = LegendreCurve::new(t.clone())?;
    let f = curve.lattes_map()?;
    let set = torsion_set(&curve, n)?;
    let exact_invariance = if F::EXACT {
        // P | den * P(num/den) den^deg P: roots of P go to roots of P or to
        // poles of f_t (which go to infinity).
        let p = &set.polynomial;
        let deg = p.degree().unwrap_or(0);
        let pulled = p.homogeneous_substitute(deg, f.num(), f.den()).mul(f.den());
        Some(pulled.div_rem(p).1.degree().is_none())
    } else {
        None
    };

    let fc = f.to_complex();
    let mut nodes: Vec<ProjPoint<C>> = set
        .points
        .iter()
        .map(|p| ProjPoint::finite(p.value))
        .collect();
    nodes.push(ProjPoint::infinity());
    let sep = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, a)| nodes[i + 1..].iter().map(move |b| a.chordal_distance(b)))
        .fold(f64::INFINITY, f64::min);
    let mut next = Vec::with_capacity(nodes.len());
    let mut matched = true;
    for z in &nodes {
        let w = fc.eval(z)?;
        let (j, d) = nodes
            .iter()
            .map(|q| q.chordal_distance(&w))
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        matched &= d < sep / 2.0;
        next.push(j);
    }
    let inf = nodes.len() - 1;
    let orbits = set
        .points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut seen = vec![i];
            let mut cur = i;
            loop {
                cur = next[cur];
                if let Some(pos) = seen.iter().position(|&s| s == cur) {
                    let to_inf = seen
                        .iter()
                        .position(|&s| s == inf)
                        .or((cur == inf).then_some(seen.len()));
                    break TorsionOrbit {
                        x: x.clone(),
                        preperiod: pos,
                        period: seen.len() - pos,
                        steps_to_infinity: to_inf,
                    };
                }
                seen.push(cur);
            }
        })
        .collect();
    Ok(TorsionReport {
        t: t.to_complex(),
        order: n,
        invariant: exact_invariance.unwrap_or(true) && matched,
        orbits,
    })
}

/// A torsion x-coordinate that is also a root of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootOfUnityHit {
    pub x: C,
    /// Smallest `N` with `x` in `x(E[N])`.
    pub torsion_order: usize,
    /// Multiplicative order of `x`.
    pub root_order: usize,
    /// Established by a nontrivial gcd with a cyclotomic polynomial.
    pub exact: bool,
}

/// All `x` in `x(E[N])`, `2 <= N <= n_max`, that are primitive `m`-th roots of
/// unity for some `m <= m_max`.
pub fn torsion_vs_rou<F: Field>(
    t: &F,
    n_max: usize,
    m_max: usize,
) -> DynResult<Vec<RootOfUnityHit>> {
    if n_max > MAX_TORSION_ORDER {
        check_order(n_max)?;
    }
    let curve = LegendreCurve::new(t.clone())?;
    let per_n: Vec<Vec<RootOfUnityHit>> = (2..=n_max)
        .into_par_iter()
        .map(|n| hits_for_order(&curve, n, m_max))
        .collect::<DynResult<_>>()?;
    let mut out: Vec<RootOfUnityHit> = Vec::new();
    for h in per_n.into_iter().flatten() {
        if !out.iter().any(|o| (o.x - h.x).norm() <= 1e-9) {
            out.push(h);
        }
    }
    out.sort_by(|a, b| {
        a.root_order
            .cmp(&b.root_order)
            .then(a.x.arg().total_cmp(&b.x.arg()))
    });
    Ok(out)
}

fn hits_for_order<F: Field>(
    curve: &LegendreCurve<F>,
    n: usize,
    m_max: usize,
) -> DynResult<Vec<RootOfUnityHit>> {
    let p = curve.torsion_polynomial(n);
    let mut out = Vec::new();
    if F::EXACT {
        for m in 1..=m_max {
            let phi = cyclotomic_polynomial(m as u32).map(F::from_rational);
            let g = p.gcd(&phi);
            if g.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in roots(&g, ROOT_TOL)?.roots {
                out.push(RootOfUnityHit {
                    x: r.value,
                    torsion_order: n,
                    root_order: m,
                    exact: true,
                });
            }
        }
    } else {
        for r in torsion_set(curve, n)?.points {
            if (r.value.norm() - 1.0).abs() > 1e-9 {
                continue;
            }
            let order = (1..=m_max).find(|&m| (r.value.powu(m as u32) - 1.0).norm() <= 1e-9);
            if let Some(m) = order {
                out.push(RootOfUnityHit {
                    x: r.value,
                    torsion_order: n,
                    root_order: m,
                    exact: false,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DuplicationReport {
    pub samples: usize,
    /// Largest `|f_t(x) - x(2P)| / max(1, |x(2P)|)` over the samples.
    pub max_residual: f64,
}

/// Compare `f_t(x)` with `x(2P)` computed from the slope of the tangent at
/// `P = (x, y)`, for random complex `x` in the disk of radius 3.
pub fn verify_duplication<F: Field>(
    t: &F,
    samples: usize,
    seed: u64,
) -> DynResult<DuplicationReport> {
    let curve = LegendreCurve::new(t.clone())?;
    let f = curve.lattes_map()?.to_complex();
    let (a2, a4) = (curve.a2().to_complex(), curve.a4().to_complex());
    let cubic = curve.cubic().to_complex();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < samples {
        let x = C::from_polar(
            3.0 * rng.random::<f64>().sqrt(),
            2.0 * std::f64::consts::PI * rng.random::<f64>(),
        );
        let y = cubic.eval(&x).sqrt();
        if y.norm() < 1e-6 {
            continue;
        }
        let lambda = (3.0 * x * x + 2.0 * a2 * x + a4) / (2.0 * y);
        let x2 = lambda * lambda - a2 - 2.0 * x;
        let lhs = f
            .eval_affine(&x)?
            .affine()
            .unwrap_or(C::new(f64::INFINITY, 0.0));
        worst = worst.max((lhs - x2).norm() / x2.norm().max(1.0));
        done += 1;
    }
    Ok(DuplicationReport {
        samples,
        max_residual: worst,
    })
}

/// `f_t(x) = x(2P)` as an identity in `Q(t, x)`: the tangent-line formula over
/// its denominator `4 y^2`, cross-multiplied against `f_t`.
pub fn duplication_identity() -> bool {
    type M = MPoly<Rational>;
    let (t, x) = (M::var(0), M::var(1));
    let c = |k: i64| M::from_i64(k);
    let a2 = c(1).add(&t).neg();
    let a4 = t.clone();
    let y2 = x.pow(3).add(&a2.mul(&x.pow(2))).add(&a4.mul(&x));
    let slope = c(3).mul(&x.pow(2)).add(&c(2).mul(&a2).mul(&x)).add(&a4);
    let group_num = slope.pow(2).sub(&a2.add(&c(2).mul(&x)).mul(&c(4).mul(&y2)));
    let group_den = c(4).mul(&y2);
    let sq = x.pow(2).sub(&t);
    let lattes_num = sq.pow(2);
    let lattes_den = c(4).mul(&x).mul(&x.sub(&c(1))).mul(&x.sub(&t));
    group_num
        .mul(&lattes_den)
        .sub(&lattes_num.mul(&group_den))
        .is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use preper_algebra::rat;

    fn two() -> Rational {
        rat(2, 1)
    }

    #[test]
    fn lattes_map_formula() {
        let f = legendre_lattes(&two()).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(
            f.num(),
            &Poly::new(vec![rat(4, 1), rat(0, 1), rat(-4, 1), rat(0, 1), rat(1, 1)])
        );
        assert_eq!(
            f.den(),
            &Poly::new(vec![rat(0, 1), rat(8, 1), rat(-12, 1), rat(4, 1)])
        );
        for x in [rat(0, 1), rat(1, 1), two()] {
            assert!(f.eval_affine(&x).unwrap().is_infinity());
        }
        assert!(f.eval(&ProjPoint::infinity()).unwrap().is_infinity());
    }

    #[test]
    fn degenerate_parameters() {
        for t in [rat(0, 1), rat(1, 1)] {
            assert!(matches!(
                legendre_lattes(&t),
                Err(DynError::DegenerateParameter(_))
            ));
        }
        assert!(matches!(
            legendre_lattes(&C::new(1.0, 0.0)),
            Err(DynError::DegenerateParameter(_))
        ));
    }

    #[test]
    fn two_torsion() {
        let s = division_x(&two(), 2).unwrap();
        let mut xs: Vec<Rational> = s.points.iter().map(|p| p.exact.clone().unwrap()).collect();
        xs.sort();
        assert_eq!(xs, vec![rat(0, 1), rat(1, 1), two()]);
        assert_eq!(s.point_count(), 3);
    }

    #[test]
    fn three_torsion_count() {
        let s = division_x(&two(), 3).unwrap();
        assert_eq!(s.points.len(), 4);
        assert_eq!(s.polynomial.degree(), Some(4));
        assert_eq!(s.point_count(), 8);
    }

    #[test]
    fn torsion_counts() {
        for n in 2..=MAX_TORSION_ORDER {
            let s = division_x(&two(), n)
                .map_err(|e| format!("{n}: {e}"))
                .unwrap();
            assert_eq!(s.point_count(), n * n - 1, "n = {n}");
            let expected = if n % 2 == 1 {
                (n * n - 1) / 2
            } else {
                (n * n + 2) / 2
            };
            assert_eq!(s.points.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn even_torsion_contains_two_torsion() {
        let s = division_x(&two(), 4).unwrap();
        for x in [rat(0, 1), rat(1, 1), two()] {
            assert!(s.points.iter().any(|p| p.exact.as_ref() == Some(&x)));
        }
    }

    #[test]
    fn out_of_budget_order() {
        assert!(division_x(&two(), 13).is_err());
        assert!(division_x(&two(), 1).is_err());
    }

    #[test]
    fn duplication_at_a_rational_point() {
        let curve = LegendreCurve::new(two()).unwrap();
        let f = curve.lattes_map().unwrap();
        let x = rat(4, 1);
        assert_eq!(f.eval_affine(&x).unwrap(), curve.double_x(&x).unwrap());
        for x in [rat(0, 1), rat(1, 1), two()] {
            assert!(curve.double_x(&x).unwrap().is_infinity());
        }
    }

    #[test]
    fn duplication_holds_symbolically() {
        assert!(duplication_identity());
    }

    #[test]
    fn sampled_duplication() {
        let r = verify_duplication(&two(), 100, 3).unwrap();
        assert!(r.max_residual < 1e-10, "{}", r.max_residual);
        let r = verify_duplication(&C::new(0.3, 0.8), 100, 4).unwrap();
        assert!(r.max_residual < 1e-10, "{}", r.max_residual);
    }

    #[test]
    fn small_torsion_orbits() {
        let r = torsion_preperiodicity(&two(), 2).unwrap();
        assert!(r.invariant);
        assert!(r.orbits.iter().all(|o| o.steps_to_infinity == Some(1)));
        let r = torsion_preperiodicity(&two(), 4).unwrap();
        assert!(r
            .orbits
            .iter()
            .all(|o| o.steps_to_infinity.is_some_and(|k| k <= 2)));
        let r = torsion_preperiodicity(&two(), 3).unwrap();
        assert!(r.all_preperiodic());
        assert!(r.orbits.iter().all(|o| o.steps_to_infinity.is_none()));
    }

    #[test]
    fn one_is_always_a_hit() {
        let hits = torsion_vs_rou(&two(), 2, 4).unwrap();
        assert!(hits
            .iter()
            .any(|h| h.root_order == 1 && h.exact && h.torsion_order == 2));
        let hits = torsion_vs_rou(&rat(-1, 1), 2, 4).unwrap();
        assert!(hits
            .iter()
            .any(|h| h.root_order == 2 && (h.x + 1.0).norm() < 1e-12));
    }
}

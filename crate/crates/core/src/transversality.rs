//! Transversality certificates for tuples of common preperiodic points over a
//! parameter space.
//!
//! Each marked point `x_i` moves along two branches near `s0`: `u_i(s)` solving
//! its defining polynomial for `f_s`, and `v_i(s)` for `g_s`. The tuple is
//! certified when the graph of `s -> (u_i, v_i)_i` meets the diagonal
//! transversely, which is a single determinant.

use preper_algebra::{AlgebraError, ExactMatrix, Field, MPoly, Poly, Rational, Ring};

use crate::dynatomic::family_class_polynomial;
use crate::error::{DynError, DynResult};
use crate::family::ParamFamily;
use crate::projective::{orbit_classify, CycleClass, OrbitRecord, ProjPoint};

/// Defining polynomial in `z` with coefficients in the parameters.
pub type CurvePoly = Poly<MPoly<Rational>>;

/// Two families over the same parameter space.
#[derive(Clone, Debug)]
pub struct FamilyPair {
    pub f: ParamFamily,
    pub g: ParamFamily,
}

impl FamilyPair {
    pub fn new(f: ParamFamily, g: ParamFamily) -> DynResult<Self> {
        if f.nparams() != g.nparams() {
            return Err(DynError::InvalidInput(format!(
                "families have {} and {} parameters",
                f.nparams(),
                g.nparams()
            )));
        }
        Ok(FamilyPair { f, g })
    }

    pub fn nparams(&self) -> usize {
        self.f.nparams()
    }

    /// `+1` when column `j` is read off the `f` branches, `-1` when `f` ignores
    /// `s_j` and `g` does not.
    fn column_sign(&self, j: usize) -> i64 {
        if !self.f.depends_on(j) && self.g.depends_on(j) {
            -1
        } else {
            1
        }
    }
}

/// Defining polynomials of one marked point, for `f` and for `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDefs {
    pub f: CurvePoly,
    pub g: CurvePoly,
}

/// Preperiod and period of a marked point under each map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointClasses {
    pub f: (usize, usize),
    pub g: (usize, usize),
}

/// Build [`PointDefs`] from `(preperiod, period)` classes.
pub fn class_definitions(pair: &FamilyPair, classes: &[PointClasses]) -> DynResult<Vec<PointDefs>> {
    classes
        .iter()
        .map(|c| {
            Ok(PointDefs {
                f: family_class_polynomial(&pair.f, c.f.0, c.f.1)?.poly,
                g: family_class_polynomial(&pair.g, c.g.0, c.g.1)?.poly,
            })
        })
        .collect()
}

fn eval_curve<F: Field>(p: &CurvePoly, s: &[F], x: &F) -> F {
    let embed = |c: &Rational| F::from_rational(c);
    p.map(|c| c.eval_with(s, embed)).eval(x)
}

/// Gradient `(du/ds_j)_j` of the branch of `P(s, z) = 0` through `(s0, x)`.
pub fn branch_gradient<F: Field>(p: &CurvePoly, s0: &[F], x: &F) -> DynResult<Vec<F>> {
    let v = eval_curve(p, s0, x);
    let on_curve = if F::EXACT {
        v.is_zero()
    } else {
        v.magnitude() <= 1e-9
    };
    if !on_curve {
        return Err(AlgebraError::NotOnCurve {
            residual: v.magnitude(),
        }
        .into());
    }
    let pz = eval_curve(&p.derivative(), s0, x);
    if pz.is_negligible(1.0) {
        return Err(AlgebraError::SingularPoint.into());
    }
    Ok((0..s0.len())
        .map(|j| {
            let pc = eval_curve(&p.map(|c| c.partial(j)), s0, x);
            pc.neg().div(&pz)
        })
        .collect())
}

/// Branch gradients `(U, V)`: row `i` holds the derivatives of `u_i` and `v_i`.
fn branch_matrices<F: Field>(
    s0: &[F],
    points: &[F],
    defs: &[PointDefs],
) -> DynResult<(Vec<Vec<F>>, Vec<Vec<F>>)> {
    if points.len() != defs.len() || points.len() != s0.len() {
        return Err(DynError::InvalidInput(format!(
            "{} points, {} definitions, {} parameters",
            points.len(),
            defs.len(),
            s0.len()
        )));
    }
    let mut u = Vec::new();
    let mut v = Vec::new();
    for (x, d) in points.iter().zip(defs) {
        u.push(branch_gradient(&d.f, s0, x)?);
        v.push(branch_gradient(&d.g, s0, x)?);
    }
    Ok((u, v))
}

/// `(-1)^(m(m+1)/2)`: the sign relating the bordered determinant to `det(U - V)`.
fn bordered_sign(m: usize) -> i64 {
    if (m * (m + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The `m x m` matrix of branch derivatives. Column `j` is `U - V` times the
/// column sign, so for a pair where `f` moves with `s_0` and `g` with `s_1`
/// it reads `[[u_1', v_1'], [u_2', v_2']]`. If the sign convention would leave
/// its determinant opposite to [`bordered_determinant`], row 0 is negated.
pub fn repeller_jacobian<F: Field>(
    pair: &FamilyPair,
    s0: &[F],
    points: &[F],
    defs: &[PointDefs],
) -> DynResult<ExactMatrix<F>> {
    let (u, v) = branch_matrices(s0, points, defs)?;
    let m = points.len();
    let tau: Vec<i64> = (0..m).map(|j| pair.column_sign(j)).collect();
    let flip = bordered_sign(m) * tau.iter().product::<i64>() == -1;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let row: Vec<F> = (0..m)
            .map(|j| {
                let e = u[i][j].sub(&v[i][j]).mul(&F::from_i64(tau[j]));
                if flip && i == 0 {
                    e.neg()
                } else {
                    e
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(rows)?)
}

/// The `3m x 3m` matrix whose columns are the parameter directions, the
/// diagonal directions `e_{u_i} + e_{v_i}` and the tangents to the graph.
/// Rows are ordered `s_1..s_m, u_1, v_1, ..., u_m, v_m`.
pub fn bordered_matrix<F: Field>(
    s0: &[F],
    points: &[F],
    defs: &[PointDefs],
) -> DynResult<ExactMatrix<F>> {
    let (u, v) = branch_matrices(s0, points, defs)?;
    let m = points.len();
    let mut a = ExactMatrix::zeros(3 * m, 3 * m);
    for j in 0..m {
        a.set(j, j, F::one());
        a.set(m + 2 * j, m + j, F::one());
        a.set(m + 2 * j + 1, m + j, F::one());
        a.set(j, 2 * m + j, F::one());
        for i in 0..m {
            a.set(m + 2 * i, 2 * m + j, u[i][j].clone());
            a.set(m + 2 * i + 1, 2 * m + j, v[i][j].clone());
        }
    }
    Ok(a)
}

pub fn bordered_determinant<F: Field>(s0: &[F], points: &[F], defs: &[PointDefs]) -> DynResult<F> {
    Ok(bordered_matrix(s0, points, defs)?.determinant()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Rigid,
    Degenerate,
    SingularConfiguration,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Rigid => "rigid",
            Verdict::Degenerate => "degenerate",
            Verdict::SingularConfiguration => "singular-configuration",
        }
    }
}

/// Everything needed to re-check a transversality claim by hand.
#[derive(Clone, Debug)]
pub struct RepellerCertificate {
    pub s0: Vec<Rational>,
    pub points: Vec<Rational>,
    pub defs: Vec<PointDefs>,
    pub f_orbits: Vec<OrbitRecord<Rational>>,
    pub g_orbits: Vec<OrbitRecord<Rational>>,
    /// Empty for a singular configuration.
    pub bordered: Option<ExactMatrix<Rational>>,
    pub jacobian: Option<ExactMatrix<Rational>>,
    pub determinant: Rational,
    pub bordered_determinant: Rational,
    pub verdict: Verdict,
}

fn repelling_orbit(
    fam: &ParamFamily,
    s0: &[Rational],
    x: &Rational,
    max_steps: usize,
) -> DynResult<OrbitRecord<Rational>> {
    let map = fam.specialize(s0)?;
    let rec = orbit_classify(&map, &ProjPoint::finite(x.clone()), max_steps, 0.0)?;
    if rec.class != Some(CycleClass::Repelling) {
        return Err(DynError::NotRepelling {
            point: x.to_string(),
        });
    }
    Ok(rec)
}

/// Check that every marked point is preperiodic onto a repelling cycle for
/// both maps at `s0`, then compute both determinants exactly.
pub fn certify_rigid_repeller(
    pair: &FamilyPair,
    s0: &[Rational],
    points: &[Rational],
    defs: &[PointDefs],
) -> DynResult<RepellerCertificate> {
    let mut f_orbits = Vec::new();
    let mut g_orbits = Vec::new();
    for x in points {
        f_orbits.push(repelling_orbit(&pair.f, s0, x, 64)?);
        g_orbits.push(repelling_orbit(&pair.g, s0, x, 64)?);
    }
    let mut cert = RepellerCertificate {
        s0: s0.to_vec(),
        points: points.to_vec(),
        defs: defs.to_vec(),
        f_orbits,
        g_orbits,
        bordered: None,
        jacobian: None,
        determinant: Rational::zero(),
        bordered_determinant: Rational::zero(),
        verdict: Verdict::SingularConfiguration,
    };
    let jac = match repeller_jacobian(pair, s0, points, defs) {
        Ok(j) => j,
        Err(DynError::Algebra(AlgebraError::SingularPoint)) => return Ok(cert),
        Err(e) => return Err(e),
    };
    let bordered = bordered_matrix(s0, points, defs)?;
    cert.determinant = jac.determinant()?;
    cert.bordered_determinant = bordered.determinant()?;
    cert.verdict = if cert.determinant.is_zero() {
        Verdict::Degenerate
    } else {
        Verdict::Rigid
    };
    cert.jacobian = Some(jac);
    cert.bordered = Some(bordered);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use preper_algebra::{rat, Complex64};

    /// `z^2 + s_j`.
    fn quad_in(j: usize, nparams: usize) -> ParamFamily {
        let num = Poly::new(vec![MPoly::var(j), MPoly::zero(), MPoly::one()]);
        ParamFamily::new(nparams, num, Poly::one()).unwrap()
    }

    fn example() -> (FamilyPair, Vec<Rational>, Vec<Rational>, Vec<PointDefs>) {
        let pair = FamilyPair::new(quad_in(0, 2), quad_in(1, 2)).unwrap();
        let classes = [
            PointClasses {
                f: (1, 2),
                g: (0, 3),
            },
            PointClasses {
                f: (1, 1),
                g: (0, 3),
            },
        ];
        let defs = class_definitions(&pair, &classes).unwrap();
        (
            pair,
            vec![rat(-21, 16), rat(-29, 16)],
            vec![rat(5, 4), rat(-7, 4)],
            defs,
        )
    }

    #[test]
    fn quadratic_pair_jacobian() {
        let (pair, s0, pts, defs) = example();
        let j = repeller_jacobian(&pair, &s0, &pts, &defs).unwrap();
        let want = ExactMatrix::from_rows(vec![
            vec![rat(-2, 3), rat(2, 9)],
            vec![rat(2, 5), rat(2, 9)],
        ])
        .unwrap();
        assert_eq!(j, want);
        assert_eq!(j.determinant().unwrap(), rat(-32, 135));
        assert_eq!(
            bordered_determinant(&s0, &pts, &defs).unwrap(),
            rat(-32, 135)
        );
    }

    #[test]
    fn swapping_points_negates() {
        let (pair, s0, mut pts, mut defs) = example();
        pts.swap(0, 1);
        defs.swap(0, 1);
        let j = repeller_jacobian(&pair, &s0, &pts, &defs).unwrap();
        assert_eq!(j.determinant().unwrap(), rat(32, 135));
        assert_eq!(
            bordered_determinant(&s0, &pts, &defs).unwrap(),
            rat(32, 135)
        );
    }

    #[test]
    fn exchanging_maps_keeps_the_value() {
        // Swapping f and g swaps u_i and v_i; rows u_i, v_i of the bordered
        // matrix trade places m times, and with the column sign the reduced
        // determinant follows it.
        let (pair, s0, pts, defs) = example();
        let swapped = FamilyPair::new(pair.g.clone(), pair.f.clone()).unwrap();
        let defs: Vec<_> = defs
            .into_iter()
            .map(|d| PointDefs { f: d.g, g: d.f })
            .collect();
        let b = bordered_determinant(&s0, &pts, &defs).unwrap();
        assert_eq!(b, rat(-32, 135));
        let j = repeller_jacobian(&swapped, &s0, &pts, &defs).unwrap();
        assert_eq!(j.determinant().unwrap(), b);
    }

    #[test]
    fn certificate_is_rigid() {
        let (pair, s0, pts, defs) = example();
        let c = certify_rigid_repeller(&pair, &s0, &pts, &defs).unwrap();
        assert_eq!(c.verdict, Verdict::Rigid);
        assert_eq!(c.determinant, rat(-32, 135));
        assert_eq!(c.bordered_determinant, rat(-32, 135));
        assert_eq!((c.f_orbits[0].preperiod, c.f_orbits[0].period), (1, 2));
        assert_eq!((c.f_orbits[1].preperiod, c.f_orbits[1].period), (1, 1));
        assert_eq!((c.g_orbits[1].preperiod, c.g_orbits[1].period), (0, 3));
    }

    #[test]
    fn equal_branches_are_degenerate() {
        // f and g share the curve z^2 + z + s + 1, so each row reads (a, -a).
        let pair = FamilyPair::new(quad_in(0, 2), quad_in(1, 2)).unwrap();
        let classes = [
            PointClasses {
                f: (0, 2),
                g: (0, 2),
            },
            PointClasses {
                f: (0, 2),
                g: (0, 2),
            },
        ];
        let defs = class_definitions(&pair, &classes).unwrap();
        // z^2 + z + c + 1 = 0 at z = 2 needs c = -7.
        let s0 = vec![rat(-7, 1), rat(-7, 1)];
        let pts = vec![rat(2, 1), rat(-3, 1)];
        let j = repeller_jacobian(&pair, &s0, &pts, &defs).unwrap();
        assert_eq!(j.determinant().unwrap(), rat(0, 1));
        assert_eq!(bordered_determinant(&s0, &pts, &defs).unwrap(), rat(0, 1));
        let c = certify_rigid_repeller(&pair, &s0, &pts, &defs).unwrap();
        assert_eq!(c.verdict, Verdict::Degenerate);
    }

    #[test]
    fn isotrivial_pair_has_a_local_certificate() {
        // f = z^2, g = s z^2 at s = 1 with the common fixed point 1.
        let f = ParamFamily::new(
            1,
            Poly::new(vec![MPoly::zero(), MPoly::zero(), MPoly::one()]),
            Poly::one(),
        )
        .unwrap();
        let g = ParamFamily::new(
            1,
            Poly::new(vec![MPoly::zero(), MPoly::zero(), MPoly::var(0)]),
            Poly::one(),
        )
        .unwrap();
        let pair = FamilyPair::new(f, g).unwrap();
        let defs = class_definitions(
            &pair,
            &[PointClasses {
                f: (0, 1),
                g: (0, 1),
            }],
        )
        .unwrap();
        let c = certify_rigid_repeller(&pair, &[rat(1, 1)], &[rat(1, 1)], &defs).unwrap();
        assert_eq!(c.verdict, Verdict::Rigid);
        // u = 1 is constant, v(s) = 1/s, so v' = -1 and the graph crosses.
        assert_eq!(c.bordered_determinant, rat(-1, 1));
        assert_eq!(c.determinant, c.bordered_determinant);
    }

    #[test]
    fn attracting_point_is_rejected() {
        let f = ParamFamily::new(
            1,
            Poly::new(vec![MPoly::zero(), MPoly::zero(), MPoly::one()]),
            Poly::one(),
        )
        .unwrap();
        let pair = FamilyPair::new(f.clone(), f).unwrap();
        let defs = class_definitions(
            &pair,
            &[PointClasses {
                f: (0, 1),
                g: (0, 1),
            }],
        )
        .unwrap();
        assert!(matches!(
            certify_rigid_repeller(&pair, &[rat(0, 1)], &[rat(0, 1)], &defs),
            Err(DynError::NotRepelling { .. })
        ));
    }

    #[test]
    fn off_curve_point_is_reported() {
        let (pair, s0, _, defs) = example();
        let err = repeller_jacobian(&pair, &s0, &[rat(1, 1), rat(-7, 4)], &defs).unwrap_err();
        assert!(matches!(
            err,
            DynError::Algebra(AlgebraError::NotOnCurve { .. })
        ));
    }

    #[test]
    fn floating_evaluation_agrees() {
        let (pair, s0, pts, defs) = example();
        let c = |q: &Rational| Complex64::new(preper_algebra::rational_to_f64(q), 0.0);
        let s0c: Vec<_> = s0.iter().map(c).collect();
        let ptc: Vec<_> = pts.iter().map(c).collect();
        let j = repeller_jacobian(&pair, &s0c, &ptc, &defs).unwrap();
        let det = j.determinant().unwrap();
        let exact = -32.0 / 135.0;
        assert!((det.re - exact).abs() <= 1e-10 * exact.abs() && det.im.abs() < 1e-12);
    }
}

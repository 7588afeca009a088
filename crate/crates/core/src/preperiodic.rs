//! Numerical enumeration of preperiodic points and of the points shared by two maps.
//!
//! Cycles of each period are found as roots of `f^p(z) = z`; strictly
//! preperiodic points are then reached by pulling cycle points back through
//! `f`, one degree-`d` equation at a time. This finds every point with
//! `preperiod + period <= max_n` without expanding polynomials of degree `d^max_n`.

use preper_algebra::{recognize_rational, Complex64, Field, Rational};
use rayon::prelude::*;

use crate::dynatomic::{check_budget, DEFAULT_ROOT_BUDGET};
use crate::error::DynResult;
use crate::numeric::ClassTarget;
use crate::projective::{
    orbit_classify, CycleClass, OrbitRecord, OrbitStatus, ProjPoint, RationalMap,
};

type C = Complex64;

/// Chordal distance below which two numerically computed points are the same.
pub const MERGE_TOL: f64 = 1e-7;

/// Bound on the cross-residual of a numeric match.
pub const MATCH_RESIDUAL: f64 = 1e-9;

/// A preperiodic point with its inclusion radius and orbit record.
#[derive(Clone, Debug)]
pub struct PreperiodicPoint {
    pub point: ProjPoint<C>,
    pub radius: f64,
    pub orbit: OrbitRecord<C>,
}

impl PreperiodicPoint {
    pub fn class(&self) -> (usize, usize) {
        (self.orbit.preperiod, self.orbit.period)
    }
}

#[derive(Clone, Debug)]
struct Cycle {
    points: Vec<(ProjPoint<C>, f64)>,
    multiplier: C,
}

fn exact_period(f: &RationalMap<C>, z: &ProjPoint<C>, p: usize) -> Option<usize> {
    let mut w = z.clone();
    for q in 1..=p {
        w = f.eval(&w).ok()?;
        if p % q == 0 && w.chordal_distance(z) <= MERGE_TOL {
            return Some(q);
        }
    }
    None
}

fn nearest<'a>(
    pool: &'a [(ProjPoint<C>, f64)],
    p: &ProjPoint<C>,
) -> Option<&'a (ProjPoint<C>, f64)> {
    pool.iter()
        .map(|q| (q.0.chordal_distance(p), q))
        .filter(|(d, _)| *d <= MERGE_TOL)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, q)| q)
}

/// Cycles of exact period `p`.
fn cycles_of_period(f: &RationalMap<C>, p: usize) -> Vec<Cycle> {
    let target = ClassTarget::new(f, p, 0);
    let mut pool: Vec<(ProjPoint<C>, f64)> = target
        .solve()
        .into_iter()
        .map(|r| (ProjPoint::finite(target.polish(r.value, 3)), r.radius))
        .collect();
    if target.infinity_multiplicity() > 0 {
        pool.push((ProjPoint::infinity(), 0.0));
    }
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut seen: Vec<ProjPoint<C>> = Vec::new();
    for (z, _) in &pool {
        if exact_period(f, z, p) != Some(p) {
            continue;
        }
        if seen.iter().any(|s| s.chordal_distance(z) <= MERGE_TOL) {
            continue;
        }
        let mut pts = Vec::with_capacity(p);
        let mut w = z.clone();
        for _ in 0..p {
            let entry = nearest(&pool, &w).cloned().unwrap_or((w.clone(), 1e-12));
            pts.push(entry);
            w = match f.eval(&w) {
                Ok(v) => v,
                Err(_) => break,
            };
        }
        if pts.len() != p {
            continue;
        }
        let cyc: Vec<ProjPoint<C>> = pts.iter().map(|e| e.0.clone()).collect();
        let Ok(multiplier) = f.multiplier(&cyc) else {
            continue;
        };
        seen.extend(cyc);
        cycles.push(Cycle {
            points: pts,
            multiplier,
        });
    }
    cycles
}

/// Distinct preimages of `w` with local inclusion radii.
fn preimages(f: &RationalMap<C>, w: &ProjPoint<C>, w_radius: f64) -> Vec<(ProjPoint<C>, f64)> {
    let raw = f.preimages_complex(w);
    let num = f.num();
    let den = f.den();
    let (wx, wz) = (*w.x(), *w.z());
    let mut out: Vec<(ProjPoint<C>, f64)> = Vec::new();
    for y in raw {
        if out.iter().any(|(q, _)| q.chordal_distance(&y) <= MERGE_TOL) {
            continue;
        }
        let radius = match y.affine() {
            Some(v) => {
                // Local equation w_z N(y) - w_x D(y) and propagation of the radius of w.
                let (n, dn) = num.eval_with_derivative(&v);
                let (dd, ddd) = den.eval_with_derivative(&v);
                let q = wz * n - wx * dd;
                let dq = wz * dn - wx * ddd;
                let scale = num
                    .coeffs()
                    .iter()
                    .chain(den.coeffs())
                    .map(|c| c.norm())
                    .fold(0.0, f64::max)
                    * v.norm().max(1.0).powi(f.degree() as i32);
                let local = f.degree() as f64 * (q.norm() + 4.0 * f64::EPSILON * scale) / dq.norm();
                let prop = match f.derivative_affine(&v) {
                    Some(df) if df.norm() > 0.0 => (w_radius / df.norm()).min(w_radius.sqrt()),
                    _ => w_radius.sqrt(),
                };
                local + prop
            }
            None => w_radius,
        };
        out.push((y, radius));
    }
    out
}

fn record(preperiod: usize, cycle: &Cycle) -> OrbitRecord<C> {
    OrbitRecord {
        preperiod,
        period: cycle.points.len(),
        cycle: cycle.points.iter().map(|e| e.0.clone()).collect(),
        multiplier: Some(cycle.multiplier),
        class: Some(CycleClass::of_multiplier(&cycle.multiplier)),
        status: OrbitStatus::Numeric,
        height_witness: Vec::new(),
    }
}

/// All points with `preperiod + period <= max_n`, each with its orbit record.
pub fn enumerate_preperiodic<F: Field>(
    f: &RationalMap<F>,
    max_n: usize,
) -> DynResult<Vec<PreperiodicPoint>> {
    enumerate_with_budget(f, max_n, DEFAULT_ROOT_BUDGET)
}

pub fn enumerate_with_budget<F: Field>(
    f: &RationalMap<F>,
    max_n: usize,
    budget: u64,
) -> DynResult<Vec<PreperiodicPoint>> {
    check_budget(f.degree(), max_n, budget)?;
    let fc = f.to_complex();
    let per_period: Vec<Vec<Cycle>> = (1..=max_n)
        .into_par_iter()
        .map(|p| cycles_of_period(&fc, p))
        .collect();
    let mut out = Vec::new();
    for cycles in per_period {
        for cyc in cycles {
            let p = cyc.points.len();
            for i in 0..p {
                let (base, r) = cyc.points[i].clone();
                out.push(PreperiodicPoint {
                    point: base.clone(),
                    radius: r,
                    orbit: OrbitRecord {
                        cycle: rotate(&cyc, i),
                        ..record(0, &cyc)
                    },
                });
                let pred = &cyc.points[(i + p - 1) % p].0;
                let mut stack: Vec<(ProjPoint<C>, f64, usize)> = vec![(base, r, 0)];
                while let Some((w, wr, k)) = stack.pop() {
                    if k + 1 + p > max_n {
                        continue;
                    }
                    for (y, yr) in preimages(&fc, &w, wr) {
                        if k == 0 && y.chordal_distance(pred) <= MERGE_TOL {
                            continue;
                        }
                        out.push(PreperiodicPoint {
                            point: y.clone(),
                            radius: yr,
                            orbit: OrbitRecord {
                                cycle: rotate(&cyc, i),
                                ..record(k + 1, &cyc)
                            },
                        });
                        stack.push((y, yr, k + 1));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Cycle listed from the point the orbit lands on.
fn rotate(cyc: &Cycle, start: usize) -> Vec<ProjPoint<C>> {
    let p = cyc.points.len();
    (0..p)
        .map(|j| cyc.points[(start + j) % p].0.clone())
        .collect()
}

/// How a match was established.
#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    /// The point is rational (or infinity) and both orbits were followed exactly.
    Exact { point: ProjPoint<Rational> },
    /// Newton step length of the other map's class equation at the refined point.
    Numeric { residual: f64 },
}

#[derive(Clone, Debug)]
pub struct MatchedPoint {
    pub point: ProjPoint<C>,
    pub radius: f64,
    pub f_orbit: OrbitRecord<C>,
    pub g_orbit: OrbitRecord<C>,
    pub certification: Certification,
}

fn class_residual(f: &RationalMap<C>, p: &PreperiodicPoint, z: &ProjPoint<C>) -> f64 {
    let (k, per) = p.class();
    match z.affine() {
        Some(v) => ClassTarget::new(f, k + per, k).newton_residual(v),
        // Infinity matches only infinity; the class is then checked by iteration.
        None => {
            if crate::numeric::satisfies_class(f, z, k + per, k, 1e-12) {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

fn exact_orbit<F: Field>(
    f: &RationalMap<F>,
    q: &Option<Rational>,
    steps: usize,
) -> Option<OrbitRecord<F>> {
    let pt = match q {
        Some(v) => ProjPoint::finite(F::from_rational(v)),
        None => ProjPoint::infinity(),
    };
    let rec = orbit_classify(f, &pt, steps, 0.0).ok()?;
    (rec.status == OrbitStatus::CertifiedExact).then_some(rec)
}

/// Points preperiodic for both maps within the budget `max_n`.
///
/// Candidate pairs need overlapping disks. The `f`-point is polished by
/// Newton on its own class equation and must then satisfy the `g` class
/// equation with Newton step below [`MATCH_RESIDUAL`]. Rational points of
/// small height are additionally certified by exact orbit computation when
/// both maps are exact.
pub fn common_preperiodic<F: Field, G: Field>(
    f: &RationalMap<F>,
    g: &RationalMap<G>,
    max_n: usize,
) -> DynResult<Vec<MatchedPoint>> {
    let ef = enumerate_preperiodic(f, max_n)?;
    let eg = enumerate_preperiodic(g, max_n)?;
    let fc = f.to_complex();
    let gc = g.to_complex();
    let slack = |p: &ProjPoint<C>| 1e-12 * p.affine().map_or(1.0, |v| v.norm().max(1.0));
    let mut matches: Vec<MatchedPoint> = ef
        .par_iter()
        .filter_map(|a| {
            let b = eg.iter().find(|b| overlap(a, b, slack(&a.point)))?;
            let (k, p) = a.class();
            let refined = match a.point.affine() {
                Some(v) => ProjPoint::finite(ClassTarget::new(&fc, k + p, k).polish(v, 3)),
                None => a.point.clone(),
            };
            let residual = class_residual(&gc, b, &refined);
            if residual >= MATCH_RESIDUAL {
                return None;
            }
            let mut certification = Certification::Numeric { residual };
            let mut f_orbit = a.orbit.clone();
            let mut g_orbit = b.orbit.clone();
            if F::EXACT && G::EXACT {
                let candidate = match refined.affine() {
                    None => Some(None),
                    Some(v) if v.im.abs() <= 1e-9 => {
                        recognize_rational(v.re, 1 << 20, 1e-9 * v.re.abs().max(1.0)).map(Some)
                    }
                    Some(_) => None,
                };
                if let Some(q) = candidate {
                    let steps = 2 * max_n + 2;
                    if let (Some(rf), Some(rg)) =
                        (exact_orbit(f, &q, steps), exact_orbit(g, &q, steps))
                    {
                        f_orbit = rf.to_complex();
                        g_orbit = rg.to_complex();
                        certification = Certification::Exact {
                            point: match q {
                                Some(v) => ProjPoint::finite(v),
                                None => ProjPoint::infinity(),
                            },
                        };
                    }
                }
            }
            Some(MatchedPoint {
                point: refined,
                radius: a.radius.max(b.radius),
                f_orbit,
                g_orbit,
                certification,
            })
        })
        .collect();
    matches.sort_by(|a, b| point_order(&a.point, &b.point));
    Ok(matches)
}

fn overlap(a: &PreperiodicPoint, b: &PreperiodicPoint, slack: f64) -> bool {
    match (a.point.affine(), b.point.affine()) {
        (Some(x), Some(y)) => (x - y).norm() <= a.radius + b.radius + slack,
        (None, None) => true,
        _ => false,
    }
}

/// Finite points by real then imaginary part; infinity last.
pub fn point_order(a: &ProjPoint<C>, b: &ProjPoint<C>) -> std::cmp::Ordering {
    match (a.affine(), b.affine()) {
        (Some(x), Some(y)) => x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    }
}

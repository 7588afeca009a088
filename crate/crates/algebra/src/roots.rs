//! Simultaneous root finding (Aberth) with inclusion-disk certification.
//!
//! A disk of radius `n |p(z)/p'(z)|` about any `z` contains a root of a
//! degree-`n` polynomial. When the disks about all `n` approximations are
//! pairwise disjoint, each contains exactly one root.

use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::poly::Poly;
use crate::scalar::Field;

/// Something whose roots can be found: a degree and an evaluator for the
/// value and derivative, possibly both scaled by the same nonzero factor.
pub trait RootTarget: Sync {
    fn degree(&self) -> usize;
    fn eval(&self, z: Complex64) -> (Complex64, Complex64);
    /// `log |a_i|` for `i = 0..=degree` (`-inf` for vanishing coefficients).
    /// Only used to place starting points.
    fn log_magnitudes(&self) -> Vec<f64>;
    /// Bound on the rounding error of the value returned by [`RootTarget::eval`].
    fn eval_error(&self, _z: Complex64) -> f64 {
        0.0
    }
}

impl RootTarget for Poly<Complex64> {
    fn degree(&self) -> usize {
        Poly::degree(self).unwrap_or(0)
    }

    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        if z.norm() <= 1.0 {
            return self.eval_with_derivative(&z);
        }
        // Reversed Horner in w = 1/z avoids overflow. With r(w) = w^n p(1/w):
        // p(z) = z^n r(w), p'(z) = z^(n-1) (n r(w) - w r'(w)).
        let n = self.coeffs().len() - 1;
        let w = z.finv();
        let mut r = Complex64::new(0.0, 0.0);
        let mut dr = Complex64::new(0.0, 0.0);
        for c in self.coeffs() {
            dr = dr * w + r;
            r = r * w + c;
        }
        (z * r, r * n as f64 - w * dr)
    }

    fn log_magnitudes(&self) -> Vec<f64> {
        self.coeffs().iter().map(|c| c.norm().ln()).collect()
    }

    /// Standard Horner bound `2 n eps sum |a_i| |z|^i`, in the same scaling as `eval`.
    fn eval_error(&self, z: Complex64) -> f64 {
        let n = self.coeffs().len().max(1);
        let g = 2.0 * n as f64 * f64::EPSILON;
        if z.norm() <= 1.0 {
            let a = z.norm();
            g * self
                .coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * a + c.norm())
        } else {
            let w = 1.0 / z.norm();
            g * z.norm() * self.coeffs().iter().fold(0.0, |acc, c| acc * w + c.norm())
        }
    }
}

/// An approximate root with an inclusion radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootEstimate {
    pub value: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
}

/// Roots counted with multiplicity. `certified` holds when the disks are
/// pairwise disjoint and every radius is within the requested tolerance.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<RootEstimate>,
    pub certified: bool,
}

/// Starting points on circles read off the upper convex hull of `(i, log|a_i|)`.
pub fn initial_guesses(log_mag: &[f64], count: usize) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = log_mag
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(i, &v)| (i, v))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in &pts {
        while hull.len() >= 2 {
            let (i1, v1) = hull[hull.len() - 2];
            let (i2, v2) = hull[hull.len() - 1];
            // Drop the middle point if it lies on or below the chord.
            let cross = (i2 as f64 - i1 as f64) * (p.1 - v1) - (v2 - v1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(*p);
    }
    let mut out = Vec::with_capacity(count);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, vi) = w[0];
        let (j, vj) = w[1];
        let k = j - i;
        let r = ((vi - vj) / k as f64).exp();
        let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
        for m in 0..k {
            let theta = 2.0 * std::f64::consts::PI * (m as f64 / k as f64)
                + 2.0 * std::f64::consts::PI * i as f64 / count.max(1) as f64
                + sigma;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    // Fall back to the unit circle when the magnitudes are unusable.
    while out.len() < count {
        let m = out.len();
        out.push(Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * m as f64 / count as f64 + sigma,
        ));
    }
    out.truncate(count);
    // Segments can produce the same angle on equal radii; coincident starts
    // repel each other so hard that the step looks converged.
    let nudge = Complex64::from_polar(1.0, std::f64::consts::PI / (2 * count.max(1)) as f64);
    for i in 1..out.len() {
        while out[..i]
            .iter()
            .any(|p| (out[i] - p).norm() <= 1e-6 * out[i].norm().max(1e-300))
        {
            out[i] *= nudge;
        }
    }
    out
}

/// Aberth iteration for the roots of `target` that are not listed in `fixed`.
/// Fixed roots take part in the mutual repulsion, which deflates them
/// implicitly. Returns the free roots and whether all converged.
pub fn aberth<T: RootTarget + ?Sized>(
    target: &T,
    fixed: &[Complex64],
    start: Vec<Complex64>,
    max_iter: usize,
) -> (Vec<Complex64>, bool) {
    let mut z = start;
    let n = z.len();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;
    for _ in 0..max_iter {
        if done.iter().all(|&d| d) {
            break;
        }
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = target.eval(zi);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 0.0 {
                        s += diff.finv();
                    }
                }
            }
            for f in fixed {
                let diff = zi - f;
                if diff.norm() > 0.0 {
                    s += diff.finv();
                }
            }
            let denom = dp - p * s;
            let w = if denom.norm() > 0.0 && denom.is_finite() {
                p / denom
            } else {
                // Nudge off a degenerate configuration.
                Complex64::new(1e-8 * (1.0 + zi.norm()), 1e-8)
            };
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= 2.0 * eps * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
    }
    let ok = done.iter().all(|&d| d);
    (z, ok)
}

/// Inclusion radius `n (|p| + err) / |p'|`, floored at a few ulps of the root.
pub fn inclusion_radius<T: RootTarget + ?Sized>(target: &T, z: Complex64) -> f64 {
    let (p, dp) = target.eval(z);
    let floor = 16.0 * f64::EPSILON * z.norm().max(f64::MIN_POSITIVE.sqrt());
    let err = target.eval_error(z);
    if p.norm() + err == 0.0 {
        return floor;
    }
    let r = target.degree() as f64 * (p.norm() + err) / dp.norm();
    if r.is_finite() {
        r.max(floor)
    } else {
        f64::INFINITY
    }
}

/// Solve with `fixed_zero` known roots at the origin, returning each root with its
/// inclusion radius (fixed roots get radius zero).
pub fn solve_target<T: RootTarget + ?Sized>(
    target: &T,
    fixed_zero: usize,
) -> (Vec<RootEstimate>, bool) {
    let n = target.degree();
    let free = n.saturating_sub(fixed_zero);
    let fixed = vec![Complex64::new(0.0, 0.0); fixed_zero.min(n)];
    let start = initial_guesses(&target.log_magnitudes(), free);
    let (z, ok) = aberth(target, &fixed, start, 100 + 4 * n.min(500));
    let mut out: Vec<RootEstimate> = fixed
        .iter()
        .map(|&v| RootEstimate {
            value: v,
            radius: 0.0,
            multiplicity: 1,
        })
        .collect();
    out.extend(z.into_iter().map(|v| RootEstimate {
        value: v,
        radius: inclusion_radius(target, v),
        multiplicity: 1,
    }));
    (out, ok)
}

/// Merge roots whose disks overlap. A merged cluster carries the summed
/// multiplicity, its centroid, and a radius covering every member disk.
pub fn cluster(roots: &[RootEstimate]) -> Vec<RootEstimate> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| roots[a].value.re.total_cmp(&roots[b].value.re));
    let rmax = roots.iter().map(|r| r.radius).fold(0.0, f64::max);
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            if roots[j].value.re - roots[i].value.re > roots[i].radius + rmax {
                break;
            }
            if (roots[i].value - roots[j].value).norm() <= roots[i].radius + roots[j].radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<RootEstimate> = groups
        .into_values()
        .map(|members| {
            if members.len() == 1 {
                return roots[members[0]];
            }
            let mult: usize = members.iter().map(|&i| roots[i].multiplicity).sum();
            let center = members
                .iter()
                .map(|&i| roots[i].value * roots[i].multiplicity as f64)
                .sum::<Complex64>()
                / mult as f64;
            let radius = members
                .iter()
                .map(|&i| (roots[i].value - center).norm() + roots[i].radius)
                .fold(0.0, f64::max);
            RootEstimate {
                value: center,
                radius,
                multiplicity: mult,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

/// All complex roots of `p`, with multiplicity.
///
/// Exact inputs are first split into square-free factors, whose roots are
/// simple; the result is certified when all disks are disjoint and no radius
/// exceeds `tol`, and otherwise a [`AlgebraError::RefinementFailure`] is
/// returned. Floating inputs are solved directly and overlapping disks are
/// reported as one multiple root, with `certified = false`.
pub fn roots<F: Field>(p: &Poly<F>, tol: f64) -> Result<RootReport, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if deg == 0 {
        return Err(AlgebraError::Constant);
    }
    let zeros = p.trailing_zeros();
    let mut found: Vec<RootEstimate> = Vec::new();
    if zeros > 0 {
        found.push(RootEstimate {
            value: Complex64::new(0.0, 0.0),
            radius: 0.0,
            multiplicity: zeros,
        });
    }
    let rest = Poly::new(p.coeffs()[zeros..].to_vec());
    if F::EXACT {
        for (factor, mult) in rest.squarefree_decomposition() {
            let fc = factor.to_complex();
            let (rs, _) = solve_target(&fc, 0);
            found.extend(rs.into_iter().map(|r| RootEstimate {
                multiplicity: mult,
                ..r
            }));
        }
        let merged = cluster(&found);
        let disjoint = merged.len() == found.len();
        let worst = found.iter().map(|r| r.radius).fold(0.0, f64::max);
        if !disjoint || worst > tol {
            return Err(AlgebraError::RefinementFailure(format!(
                "{} of {} disks separated, worst radius {worst:e}",
                merged.len(),
                found.len()
            )));
        }
        Ok(RootReport {
            roots: merged,
            certified: true,
        })
    } else {
        let fc = rest.to_complex();
        if fc.degree().unwrap_or(0) > 0 {
            let (rs, _) = solve_target(&fc, 0);
            found.extend(rs);
        }
        let merged = cluster(&found);
        let certified = merged
            .iter()
            .all(|r| r.multiplicity == 1 && r.radius <= tol);
        Ok(RootReport {
            roots: merged,
            certified,
        })
    }
}

/// Roots of a low-degree complex polynomial, closed form through degree two.
/// Returned with multiplicity (repeated entries), unsorted.
pub fn small_roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    match p.degree() {
        None | Some(0) => vec![],
        Some(1) => vec![-p.coeff(0) / p.coeff(1)],
        Some(2) => {
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let disc = (b * b - a * c * 4.0).sqrt();
            // Choose the sign that avoids cancellation.
            let s = if (b.conj() * disc).re >= 0.0 {
                -b - disc
            } else {
                -b + disc
            };
            if s.norm() == 0.0 {
                return vec![Complex64::new(0.0, 0.0); 2];
            }
            let r1 = s / (a * 2.0);
            let r2 = (c * 2.0) / s;
            vec![r1, r2]
        }
        Some(_) => {
            let (rs, _) = solve_target(p, p.trailing_zeros());
            rs.into_iter().map(|r| r.value).collect()
        }
    }
}

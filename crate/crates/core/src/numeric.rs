//! Root-finding targets for `f^n(z) = f^m(z)` evaluated by iterating the map,
//! which avoids the cancellation of expanded high-degree polynomials.

use preper_algebra::roots::{solve_target, RootEstimate, RootTarget};
use preper_algebra::{Complex64, Dual, Poly, Ring};

use crate::projective::{ProjPoint, RationalMap};

type C = Complex64;

/// `E(z) = X_n(z) Z_m(z) - X_m(z) Z_n(z)` for a floating map.
pub struct ClassTarget {
    num: Poly<Dual<C>>,
    den: Poly<Dual<C>>,
    map_degree: usize,
    n: usize,
    m: usize,
    degree: usize,
    hdeg: usize,
    trailing: usize,
    log_mag: Vec<f64>,
}

fn rescale(x: &Poly<C>, z: &Poly<C>) -> (Poly<C>, Poly<C>) {
    let s = x
        .coeffs()
        .iter()
        .chain(z.coeffs())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if s > 0.0 && s.is_finite() {
        let inv = C::new(1.0 / s, 0.0);
        (x.scale(&inv), z.scale(&inv))
    } else {
        (x.clone(), z.clone())
    }
}

impl ClassTarget {
    pub fn new(f: &RationalMap<C>, n: usize, m: usize) -> Self {
        assert!(n > m, "need n > m");
        let d = f.degree();
        // Expanded coefficients only fix the affine degree and starting radii.
        let mut x = Poly::x();
        let mut z = Poly::one();
        let mut at_m = (x.clone(), z.clone());
        for k in 1..=n {
            let nx = f.num().homogeneous_substitute(d, &x, &z);
            let nz = f.den().homogeneous_substitute(d, &x, &z);
            (x, z) = rescale(&nx, &nz);
            if k == m {
                at_m = (x.clone(), z.clone());
            }
        }
        let h = Ring::sub(&Ring::mul(&x, &at_m.1), &Ring::mul(&at_m.0, &z));
        let dual = |p: &Poly<C>| p.map(|c| Dual::constant(*c));
        ClassTarget {
            num: dual(f.num()),
            den: dual(f.den()),
            map_degree: d,
            n,
            m,
            degree: h.degree().unwrap_or(0),
            hdeg: d.pow(n as u32) + d.pow(m as u32),
            trailing: h.trailing_zeros(),
            log_mag: h.coeffs().iter().map(|c| c.norm().ln()).collect(),
        }
    }

    /// Multiplicity of the root at infinity.
    pub fn infinity_multiplicity(&self) -> usize {
        self.hdeg - self.degree
    }

    /// Multiplicity of the root at the origin, read off the expansion.
    pub fn zero_multiplicity(&self) -> usize {
        self.trailing
    }

    fn step(&self, x: &Dual<C>, z: &Dual<C>) -> (Dual<C>, Dual<C>) {
        let nx = self.num.homogeneous_eval(self.map_degree, x, z);
        let nz = self.den.homogeneous_eval(self.map_degree, x, z);
        let s = nx.re.norm().max(nz.re.norm());
        if s > 0.0 && s.is_finite() {
            // Constant rescaling: value and derivative share the factor.
            let inv = Dual::constant(C::new(1.0 / s, 0.0));
            (nx.mul(&inv), nz.mul(&inv))
        } else {
            (nx, nz)
        }
    }

    /// `(E, E', |X_n Z_m| + |X_m Z_n|)` up to a common factor.
    fn eval_parts(&self, z0: C) -> (C, C, f64) {
        let mut x = Dual::variable(z0);
        let mut z = Dual::constant(C::new(1.0, 0.0));
        let mut at_m = (x.clone(), z.clone());
        for k in 1..=self.n {
            (x, z) = self.step(&x, &z);
            if k == self.m {
                at_m = (x.clone(), z.clone());
            }
        }
        let a = x.mul(&at_m.1);
        let b = at_m.0.mul(&z);
        let e = a.sub(&b);
        (e.re, e.eps, a.re.norm() + b.re.norm())
    }

    /// Solve, returning finite roots with inclusion radii. Approximations
    /// beyond `1e12` in modulus are dropped; they belong to infinity.
    pub fn solve(&self) -> Vec<RootEstimate> {
        let (rs, _) = solve_target(self, self.trailing.min(self.degree));
        rs.into_iter().filter(|r| r.value.norm() < 1e12).collect()
    }

    /// A few Newton steps; keeps the start if they wander off.
    pub fn polish(&self, z: C, steps: usize) -> C {
        let mut w = z;
        for _ in 0..steps {
            let (e, de, _) = self.eval_parts(w);
            if de.norm() == 0.0 || e.norm() == 0.0 {
                break;
            }
            let next = w - e / de;
            if !next.is_finite() || (next - z).norm() > 1e-6 * (1.0 + z.norm()) {
                return z;
            }
            w = next;
        }
        w
    }

    /// Newton step length `|E/E'|` at `z`.
    pub fn newton_residual(&self, z: C) -> f64 {
        let (e, de, _) = self.eval_parts(z);
        if e.norm() == 0.0 {
            return 0.0;
        }
        (e / de).norm()
    }
}

impl RootTarget for ClassTarget {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval(&self, z: C) -> (C, C) {
        let (e, de, _) = self.eval_parts(z);
        (e, de)
    }

    fn log_magnitudes(&self) -> Vec<f64> {
        self.log_mag.clone()
    }

    /// Rounding in the iteration, plus a relative perturbation of `z` itself.
    fn eval_error(&self, z: C) -> f64 {
        let (_, de, mag) = self.eval_parts(z);
        let eps = f64::EPSILON;
        4.0 * eps * ((self.n + 1) as f64 * mag + z.norm() * de.norm())
    }
}

/// True if `f^n(p)` equals `f^m(p)` within chordal distance `tol`.
pub fn satisfies_class(f: &RationalMap<C>, p: &ProjPoint<C>, n: usize, m: usize, tol: f64) -> bool {
    let (Ok(a), Ok(b)) = (f.iterate(p, n), f.iterate(p, m)) else {
        return false;
    };
    a.chordal_distance(&b) <= tol
}

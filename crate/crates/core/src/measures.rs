//! Equilibrium measures, escape-rate potentials and their discrete Laplacians.

use std::f64::consts::PI;

use preper_algebra::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynatomic::{check_budget, DEFAULT_ROOT_BUDGET};
use crate::error::DynResult;
use crate::family::ParamFamily;
use crate::numeric::ClassTarget;
use crate::projective::{ProjPoint, RationalMap};
use crate::transversality::FamilyPair;

type C = Complex64;

/// Weighted atoms on the sphere.
#[derive(Clone, Debug, Default)]
pub struct PointCloud {
    pub atoms: Vec<(ProjPoint<C>, f64)>,
}

impl PointCloud {
    pub fn new(atoms: Vec<(ProjPoint<C>, f64)>) -> Self {
        PointCloud { atoms }
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn normalized(&self) -> Self {
        let t = self.total();
        PointCloud {
            atoms: self.atoms.iter().map(|(p, w)| (p.clone(), w / t)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// `n` equal atoms on the unit circle, offset by half a step; a quadrature
/// for the uniform measure.
pub fn uniform_circle(n: usize) -> PointCloud {
    let w = 1.0 / n as f64;
    PointCloud::new(
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                (ProjPoint::finite(C::from_polar(1.0, t)), w)
            })
            .collect(),
    )
}

fn sup_norm(x: &C, z: &C) -> f64 {
    x.norm().max(z.norm())
}

/// Escape-rate potential `d^-n log ||F^n(Z)||` of the homogeneous lift, with
/// `Z = (z, 1)` or `(1, 0)` and the sup norm. Returns the value and a tail
/// estimate `C d^-n / (d - 1)`, `C` the largest `|log|` rescaling seen.
pub fn green_value(f: &RationalMap<C>, z: &ProjPoint<C>, iters: usize) -> (f64, f64) {
    let d = f.degree() as f64;
    let (mut x, mut w) = (*z.x(), *z.z());
    let s = sup_norm(&x, &w);
    (x, w) = (x / s, w / s);
    let mut value = s.ln();
    let mut scale = 1.0;
    let mut worst: f64 = 0.0;
    for _ in 0..iters {
        let (nx, nw) = f.eval_homogeneous(&x, &w);
        let s = sup_norm(&nx, &nw);
        scale /= d;
        if s == 0.0 || !s.is_finite() {
            break;
        }
        value += scale * s.ln();
        worst = worst.max(s.ln().abs());
        (x, w) = (nx / s, nw / s);
    }
    (value, worst * scale / (d - 1.0))
}

/// A base point that is not exceptional for the maps used here.
pub fn default_base_point() -> ProjPoint<C> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    ProjPoint::finite(C::from_polar(0.7, 2.0 * PI * golden))
}

/// Random backward orbits: from `base`, `depth` uniformly chosen preimages.
/// Sample `i` draws from stream `i` of the seeded generator.
pub fn sample_mu(
    f: &RationalMap<C>,
    depth: usize,
    samples: usize,
    seed: u64,
    base: Option<ProjPoint<C>>,
) -> PointCloud {
    let base = base.unwrap_or_else(default_base_point);
    let w = 1.0 / samples as f64;
    let atoms = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut p = base.clone();
            for _ in 0..depth {
                let pre = f.preimages_complex(&p);
                p = pre[rng.random_range(0..pre.len())].clone();
            }
            (p, w)
        })
        .collect();
    PointCloud::new(atoms)
}

/// Atoms at the solutions of `f^n = f^m` with multiplicity, weight `d^-n` each.
pub fn preperiodic_cloud(f: &RationalMap<C>, n: usize, m: usize) -> DynResult<PointCloud> {
    let d = f.degree();
    check_budget(d, n, DEFAULT_ROOT_BUDGET)?;
    let w = (d as f64).powi(-(n as i32));
    let t = ClassTarget::new(f, n, m);
    let mut atoms: Vec<(ProjPoint<C>, f64)> = t
        .solve()
        .into_iter()
        .map(|r| (ProjPoint::finite(r.value), w * r.multiplicity as f64))
        .collect();
    let inf = t.infinity_multiplicity();
    if inf > 0 {
        atoms.push((ProjPoint::infinity(), w * inf as f64));
    }
    Ok(PointCloud::new(atoms))
}

/// Position on the unit sphere under inverse stereographic projection.
pub fn to_sphere(p: &ProjPoint<C>) -> [f64; 3] {
    match p.affine() {
        None => [0.0, 0.0, 1.0],
        Some(z) => {
            let r2 = z.norm_sqr();
            if !r2.is_finite() {
                return [0.0, 0.0, 1.0];
            }
            [
                2.0 * z.re / (r2 + 1.0),
                2.0 * z.im / (r2 + 1.0),
                (r2 - 1.0) / (r2 + 1.0),
            ]
        }
    }
}

/// Equal-area cells: `n_lat` bands of equal height, each cut into `n_lon`
/// equal sectors. `n_lat` is odd so that the unit circle runs through the
/// middle of a band rather than along a boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereGrid {
    pub n_lat: usize,
    pub n_lon: usize,
}

impl SphereGrid {
    pub fn new(resolution: usize) -> Self {
        let half = (resolution / 2).max(1);
        SphereGrid {
            n_lat: half | 1,
            n_lon: half,
        }
    }

    pub fn cells(&self) -> usize {
        self.n_lat * self.n_lon
    }

    pub fn cell(&self, p: &ProjPoint<C>) -> usize {
        let [x, y, h] = to_sphere(p);
        let band = (((h + 1.0) / 2.0 * self.n_lat as f64) as usize).min(self.n_lat - 1);
        let theta = y.atan2(x).rem_euclid(2.0 * PI);
        let sector = ((theta / (2.0 * PI) * self.n_lon as f64) as usize).min(self.n_lon - 1);
        band * self.n_lon + sector
    }

    pub fn bin(&self, cloud: &PointCloud) -> Vec<f64> {
        let mut mass = vec![0.0; self.cells()];
        let total = cloud.total();
        for (p, w) in &cloud.atoms {
            mass[self.cell(p)] += w / total;
        }
        mass
    }
}

/// Total-variation distance between the normalized clouds after binning.
pub fn discrepancy(a: &PointCloud, b: &PointCloud, resolution: usize) -> f64 {
    let grid = SphereGrid::new(resolution);
    let (ma, mb) = (grid.bin(a), grid.bin(b));
    0.5 * ma.iter().zip(&mb).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// A rectangle in the parameter plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        Window { re, im }
    }

    fn spacing(&self, n: usize) -> (f64, f64) {
        (
            (self.re.1 - self.re.0) / n as f64,
            (self.im.1 - self.im.0) / n as f64,
        )
    }

    /// Center of cell `(i, j)`; `i` runs along the real axis.
    pub fn center(&self, n: usize, i: usize, j: usize) -> C {
        let (hx, hy) = self.spacing(n);
        C::new(
            self.re.0 + (i as f64 + 0.5) * hx,
            self.im.0 + (j as f64 + 0.5) * hy,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellFlag {
    Ok,
    /// On the border of the window; no Laplacian.
    Edge,
    /// The map degenerates or the marked point is undefined here.
    Degenerate,
    /// A neighbour is degenerate; no Laplacian.
    NearDegenerate,
}

impl CellFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellFlag::Ok => "ok",
            CellFlag::Edge => "edge",
            CellFlag::Degenerate => "degenerate",
            CellFlag::NearDegenerate => "near-degenerate",
        }
    }
}

/// Potential values on an `n x n` grid of cell centers, row-major with the
/// real part varying fastest, and the discrete `dd^c` mass of each cell.
#[derive(Clone, Debug)]
pub struct ParamGrid {
    pub window: Window,
    pub resolution: usize,
    pub values: Vec<f64>,
    pub laplacian: Vec<f64>,
    pub flags: Vec<CellFlag>,
}

impl ParamGrid {
    pub fn spacing(&self) -> (f64, f64) {
        self.window.spacing(self.resolution)
    }

    pub fn center(&self, idx: usize) -> C {
        let n = self.resolution;
        self.window.center(n, idx % n, idx / n)
    }

    /// Build from per-cell values (`None` for degenerate cells).
    pub fn from_values(window: Window, resolution: usize, values: Vec<Option<f64>>) -> Self {
        let n = resolution;
        let (hx, hy) = window.spacing(n);
        let mut flags = vec![CellFlag::Ok; n * n];
        let mut lap = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                if values[k].is_none() {
                    flags[k] = CellFlag::Degenerate;
                    continue;
                }
                if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                    flags[k] = CellFlag::Edge;
                    continue;
                }
                let nb = [values[k - 1], values[k + 1], values[k - n], values[k + n]];
                let [Some(w), Some(e), Some(s), Some(nn)] = nb else {
                    flags[k] = CellFlag::NearDegenerate;
                    continue;
                };
                let u = values[k].unwrap();
                // Five-point stencil integrated over the cell, divided by 2 pi.
                lap[k] = ((w + e - 2.0 * u) * hy / hx + (s + nn - 2.0 * u) * hx / hy) / (2.0 * PI);
            }
        }
        ParamGrid {
            window,
            resolution,
            values: values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
            laplacian: lap,
            flags,
        }
    }

    /// Largest `|laplacian|` over unflagged cells.
    pub fn max_abs_laplacian(&self) -> f64 {
        self.laplacian
            .iter()
            .zip(&self.flags)
            .filter(|(_, f)| **f == CellFlag::Ok)
            .map(|(l, _)| l.abs())
            .fold(0.0, f64::max)
    }
}

/// `t -> green_value(f_t, a(t))` over a window of a one-parameter family.
pub fn marked_point_grid<A>(
    family: &ParamFamily,
    marked: A,
    window: Window,
    resolution: usize,
    iters: usize,
) -> ParamGrid
where
    A: Fn(C) -> Option<ProjPoint<C>> + Sync,
{
    let n = resolution;
    let values: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let t = window.center(n, k % n, k / n);
            let f = family.specialize_complex(&[t]).ok()?;
            let a = marked(t)?;
            Some(green_value(&f, &a, iters).0)
        })
        .collect();
    ParamGrid::from_values(window, n, values)
}

/// Mutual potential `H(t) = mean of green_value(f_t, .)` over a sample of
/// `mu_{g_t}`. Cell `k` samples with seed `seed` and streams offset by
/// `k * samples`, so the grid is reproducible under any schedule.
pub fn pairwise_slice(
    pair: &FamilyPair,
    window: Window,
    resolution: usize,
    depth: usize,
    samples: usize,
    seed: u64,
    iters: usize,
) -> ParamGrid {
    let n = resolution;
    let values: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let t = window.center(n, k % n, k / n);
            let f = pair.f.specialize_complex(&[t]).ok()?;
            let g = pair.g.specialize_complex(&[t]).ok()?;
            let base = default_base_point();
            let mut total = 0.0;
            for s in 0..samples {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((k * samples + s) as u64);
                let mut p = base.clone();
                for _ in 0..depth {
                    let pre = g.preimages_complex(&p);
                    p = pre[rng.random_range(0..pre.len())].clone();
                }
                total += green_value(&f, &p, iters).0;
            }
            let h = total / samples as f64;
            h.is_finite().then_some(h)
        })
        .collect();
    ParamGrid::from_values(window, n, values)
}

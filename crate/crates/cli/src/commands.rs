//! Subcommands. Every argument struct doubles as the `args` object of an
//! experiment config, so a command line and a config file run the same job.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Subcommand};
use preper_algebra::{Complex64, ExactMatrix, Field, MPoly, Rational};
use preper_core::dynatomic::preperiod_polynomial;
use preper_core::lattes::{
    division_x, duplication_identity, torsion_preperiodicity, torsion_vs_rou, verify_duplication,
    TorsionReport, MAX_TORSION_ORDER,
};
use preper_core::measures::{
    marked_point_grid, pairwise_slice, preperiodic_cloud, sample_mu, ParamGrid, PointCloud, Window,
};
use preper_core::monomial::rank_with_order;
use preper_core::preperiodic::{
    common_preperiodic, enumerate_preperiodic, Certification, MatchedPoint,
};
use preper_core::projective::{orbit_classify, OrbitRecord, ProjPoint, RationalMap};
use preper_core::transversality::{
    branch_gradient, certify_rigid_repeller, class_definitions, FamilyPair,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::input::{read_json, AnyMap, FamilySpec, MapSpec, TransversalityExperiment};
use crate::output::{float, Report, Table};
use crate::parse::{
    format_complex, format_point_complex, format_point_exact, format_rational, parse_complex,
    parse_param_poly, parse_point, parse_rational,
};
use crate::CliError;

type C = Complex64;

/// `a,b` on the command line, `[a, b]` in a config.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval(pub f64, pub f64);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected a,b, got {s:?}"))?;
        let p = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {x:?}"))
        };
        let (a, b) = (p(a)?, p(b)?);
        if !(a < b) {
            return Err(format!("empty interval {s:?}"));
        }
        Ok(Interval(a, b))
    }
}

fn window(re: Interval, im: Interval) -> Result<Window, CliError> {
    for (name, iv) in [("re", re), ("im", im)] {
        if !(iv.0 < iv.1) || !iv.0.is_finite() || !iv.1.is_finite() {
            return Err(CliError::Parse(format!(
                "{name}: empty or infinite interval"
            )));
        }
    }
    Ok(Window::new((re.0, re.1), (im.0, im.1)))
}

fn at_least(name: &str, value: usize, min: usize) -> Result<(), CliError> {
    if value < min {
        return Err(CliError::Parse(format!(
            "{name}: must be at least {min}, got {value}"
        )));
    }
    Ok(())
}

fn require_seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Parse("seed: randomized commands need an explicit seed".into()))
}

fn load_map(path: &Path) -> Result<AnyMap, CliError> {
    read_json::<MapSpec>(path)?.build()
}

fn load_one_parameter_family(
    path: &Path,
    field: &str,
) -> Result<preper_core::family::ParamFamily, CliError> {
    let fam = read_json::<FamilySpec>(path)?.build()?;
    if fam.nparams() != 1 {
        return Err(CliError::Parse(format!(
            "{field}: expected a one-parameter family"
        )));
    }
    Ok(fam)
}

fn rebase(dir: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = dir.join(&*p);
    }
}

macro_rules! default_fn {
    ($name:ident, $t:ty, $v:expr) => {
        fn $name() -> $t {
            $v
        }
    };
}

default_fn!(one_step, usize, 1);
default_fn!(orbit_steps, usize, 64);
default_fn!(orbit_tol, f64, 1e-10);
default_fn!(max_n_default, usize, 4);
default_fn!(depth_default, usize, 30);
default_fn!(samples_default, usize, 1024);
default_fn!(iters_default, usize, 40);
default_fn!(resolution_default, usize, 32);
default_fn!(nmax_default, usize, 8);
default_fn!(mmax_default, usize, 24);
default_fn!(dup_samples_default, usize, 100);

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateArgs {
    /// Map file.
    #[arg(long)]
    pub map: PathBuf,
    /// Starting point (`inf` for infinity).
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = one_step())]
    #[serde(default = "one_step")]
    pub steps: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = orbit_steps())]
    #[serde(default = "orbit_steps")]
    pub max_steps: usize,
    /// Chordal tolerance for revisits (complex maps only).
    #[arg(long, default_value_t = orbit_tol())]
    #[serde(default = "orbit_tol")]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreperArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, env = "PREPER_MAX_N", default_value_t = max_n_default())]
    #[serde(default = "max_n_default")]
    pub max_n: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long, env = "PREPER_MAX_N", default_value_t = max_n_default())]
    #[serde(default = "max_n_default")]
    pub max_n: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynatomicArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub period: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub preperiod: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalityArgs {
    /// Experiment file: two families, parameters, marked points and classes.
    #[arg(long)]
    pub experiment: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialRankArgs {
    #[arg(long)]
    pub degree: usize,
    /// Order of zeta; defaults to `degree + 1`.
    #[arg(long)]
    #[serde(default)]
    pub zeta_order: Option<u32>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSampleArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, env = "PREPER_DEPTH", default_value_t = depth_default())]
    #[serde(default = "depth_default")]
    pub depth: usize,
    #[arg(long, env = "PREPER_SAMPLES", default_value_t = samples_default())]
    #[serde(default = "samples_default")]
    pub samples: usize,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    /// Base point of the backward orbits.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub base: Option<String>,
    /// Instead of sampling, weight the solutions of `f^n = f^m`: give `n,m`.
    #[arg(long)]
    #[serde(default)]
    pub preperiodic: Option<String>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedGridArgs {
    /// One-parameter family file.
    #[arg(long)]
    pub family: PathBuf,
    /// Marked point as a polynomial in the parameter `s0`.
    #[arg(long, allow_hyphen_values = true)]
    pub marked: String,
    #[arg(long, allow_hyphen_values = true)]
    pub re: Interval,
    #[arg(long, allow_hyphen_values = true)]
    pub im: Interval,
    #[arg(long, env = "PREPER_RESOLUTION", default_value_t = resolution_default())]
    #[serde(default = "resolution_default")]
    pub resolution: usize,
    #[arg(long, env = "PREPER_ITERS", default_value_t = iters_default())]
    #[serde(default = "iters_default")]
    pub iters: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifsliceArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub re: Interval,
    #[arg(long, allow_hyphen_values = true)]
    pub im: Interval,
    #[arg(long, env = "PREPER_RESOLUTION", default_value_t = resolution_default())]
    #[serde(default = "resolution_default")]
    pub resolution: usize,
    #[arg(long, env = "PREPER_DEPTH", default_value_t = depth_default())]
    #[serde(default = "depth_default")]
    pub depth: usize,
    #[arg(long, env = "PREPER_SAMPLES", default_value_t = samples_default())]
    #[serde(default = "samples_default")]
    pub samples: usize,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
    #[arg(long, env = "PREPER_ITERS", default_value_t = iters_default())]
    #[serde(default = "iters_default")]
    pub iters: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LattesTorsionArgs {
    /// Legendre parameter: rational (exact) or complex.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = nmax_default())]
    #[serde(default = "nmax_default")]
    pub nmax: usize,
    #[arg(long, default_value_t = mmax_default())]
    #[serde(default = "mmax_default")]
    pub mmax: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDuplicationArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = dup_samples_default())]
    #[serde(default = "dup_samples_default")]
    pub samples: usize,
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Apply a map repeatedly to a point.
    Iterate(IterateArgs),
    /// Preperiod, period, multiplier and class of a point.
    Orbit(OrbitArgs),
    /// All points with preperiod + period <= max_n.
    Preper(PreperArgs),
    /// Points preperiodic for two maps.
    Intersect(IntersectArgs),
    /// Dynatomic or preperiod polynomial of a map.
    Dynatomic(DynatomicArgs),
    /// Rigid-repeller certificate for marked points of a pair of families.
    Transversality(TransversalityArgs),
    /// Exact rank of the monomial-pair coefficient matrix.
    MonomialRank(MonomialRankArgs),
    /// Sample the maximal-entropy measure.
    MeasureSample(MeasureSampleArgs),
    /// Escape-rate potential of a marked point over a parameter window.
    MarkedGrid(MarkedGridArgs),
    /// Mutual potential of a pair of families over a parameter window.
    Bifslice(BifsliceArgs),
    /// Torsion x-coordinates of a Legendre curve as preperiodic points.
    LattesTorsion(LattesTorsionArgs),
    /// Check the Lattes map against point doubling.
    VerifyDuplication(VerifyDuplicationArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Iterate(_) => "iterate",
            Command::Orbit(_) => "orbit",
            Command::Preper(_) => "preper",
            Command::Intersect(_) => "intersect",
            Command::Dynatomic(_) => "dynatomic",
            Command::Transversality(_) => "transversality",
            Command::MonomialRank(_) => "monomial-rank",
            Command::MeasureSample(_) => "measure-sample",
            Command::MarkedGrid(_) => "marked-grid",
            Command::Bifslice(_) => "bifslice",
            Command::LattesTorsion(_) => "lattes-torsion",
            Command::VerifyDuplication(_) => "verify-duplication",
        }
    }

    pub fn config(&self) -> Value {
        let v = match self {
            Command::Iterate(a) => serde_json::to_value(a),
            Command::Orbit(a) => serde_json::to_value(a),
            Command::Preper(a) => serde_json::to_value(a),
            Command::Intersect(a) => serde_json::to_value(a),
            Command::Dynatomic(a) => serde_json::to_value(a),
            Command::Transversality(a) => serde_json::to_value(a),
            Command::MonomialRank(a) => serde_json::to_value(a),
            Command::MeasureSample(a) => serde_json::to_value(a),
            Command::MarkedGrid(a) => serde_json::to_value(a),
            Command::Bifslice(a) => serde_json::to_value(a),
            Command::LattesTorsion(a) => serde_json::to_value(a),
            Command::VerifyDuplication(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }

    /// Build from a config's `command` and `args`.
    pub fn from_config(command: &str, args: Value) -> Result<Self, CliError> {
        fn de<T: for<'de> Deserialize<'de>>(args: Value) -> Result<T, CliError> {
            serde_json::from_value(args).map_err(|e| CliError::Parse(format!("args: {e}")))
        }
        Ok(match command {
            "iterate" => Command::Iterate(de(args)?),
            "orbit" => Command::Orbit(de(args)?),
            "preper" => Command::Preper(de(args)?),
            "intersect" => Command::Intersect(de(args)?),
            "dynatomic" => Command::Dynatomic(de(args)?),
            "transversality" => Command::Transversality(de(args)?),
            "monomial-rank" => Command::MonomialRank(de(args)?),
            "measure-sample" => Command::MeasureSample(de(args)?),
            "marked-grid" => Command::MarkedGrid(de(args)?),
            "bifslice" => Command::Bifslice(de(args)?),
            "lattes-torsion" => Command::LattesTorsion(de(args)?),
            "verify-duplication" => Command::VerifyDuplication(de(args)?),
            other => {
                return Err(CliError::Parse(format!(
                    "command: unknown subcommand {other:?}"
                )))
            }
        })
    }

    /// Resolve relative input paths against `dir`.
    pub fn rebase(&mut self, dir: &Path) {
        match self {
            Command::Iterate(a) => rebase(dir, &mut a.map),
            Command::Orbit(a) => rebase(dir, &mut a.map),
            Command::Preper(a) => rebase(dir, &mut a.map),
            Command::Intersect(a) => {
                rebase(dir, &mut a.f);
                rebase(dir, &mut a.g);
            }
            Command::Dynatomic(a) => rebase(dir, &mut a.map),
            Command::Transversality(a) => rebase(dir, &mut a.experiment),
            Command::MeasureSample(a) => rebase(dir, &mut a.map),
            Command::MarkedGrid(a) => rebase(dir, &mut a.family),
            Command::Bifslice(a) => {
                rebase(dir, &mut a.f);
                rebase(dir, &mut a.g);
            }
            Command::MonomialRank(_)
            | Command::LattesTorsion(_)
            | Command::VerifyDuplication(_) => {}
        }
    }

    pub fn execute(&self) -> Result<Report, CliError> {
        match self {
            Command::Iterate(a) => iterate(a),
            Command::Orbit(a) => orbit(a),
            Command::Preper(a) => preper(a),
            Command::Intersect(a) => intersect(a),
            Command::Dynatomic(a) => dynatomic(a),
            Command::Transversality(a) => transversality(a),
            Command::MonomialRank(a) => monomial_rank(a),
            Command::MeasureSample(a) => measure_sample(a),
            Command::MarkedGrid(a) => marked_grid(a),
            Command::Bifslice(a) => bifslice(a),
            Command::LattesTorsion(a) => lattes_torsion(a),
            Command::VerifyDuplication(a) => verify(a),
        }
    }
}

fn point_err(field: &str) -> impl Fn(String) -> CliError + '_ {
    move |e| CliError::Parse(format!("{field}: {e}"))
}

fn iterate(a: &IterateArgs) -> Result<Report, CliError> {
    fn run<F: Field>(
        f: &RationalMap<F>,
        p: ProjPoint<F>,
        steps: usize,
    ) -> Result<Vec<ProjPoint<F>>, CliError> {
        let mut out = vec![p];
        for _ in 0..steps {
            let next = f.eval(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
    let orbit: Vec<String> = match load_map(&a.map)? {
        AnyMap::Exact(f) => {
            let p = parse_point(&a.point, parse_rational).map_err(point_err("point"))?;
            run(&f, p, a.steps)?
                .iter()
                .map(format_point_exact)
                .collect()
        }
        AnyMap::Complex(f) => {
            let p = parse_point(&a.point, parse_complex).map_err(point_err("point"))?;
            run(&f, p, a.steps)?
                .iter()
                .map(format_point_complex)
                .collect()
        }
    };
    let table = Table {
        headers: vec!["step", "point"],
        rows: orbit
            .iter()
            .enumerate()
            .map(|(i, p)| vec![i.to_string(), p.clone()])
            .collect(),
    };
    Ok(Report::with_table(json!({ "orbit": orbit }), table))
}

fn orbit_json<F: Field>(
    rec: &OrbitRecord<F>,
    point: impl Fn(&ProjPoint<F>) -> String,
    scalar: impl Fn(&F) -> String,
) -> Value {
    json!({
        "preperiod": rec.preperiod,
        "period": rec.period,
        "cycle": rec.cycle.iter().map(&point).collect::<Vec<_>>(),
        "multiplier": rec.multiplier.as_ref().map(scalar),
        "class": rec.class.map(|c| c.as_str()),
        "status": rec.status.as_str(),
        "height_witness": rec.height_witness,
    })
}

fn exact_orbit_json(rec: &OrbitRecord<Rational>) -> Value {
    orbit_json(rec, format_point_exact, format_rational)
}

fn complex_orbit_json(rec: &OrbitRecord<C>) -> Value {
    orbit_json(rec, format_point_complex, |z| format_complex(*z))
}

fn orbit(a: &OrbitArgs) -> Result<Report, CliError> {
    let result = match load_map(&a.map)? {
        AnyMap::Exact(f) => {
            let p = parse_point(&a.point, parse_rational).map_err(point_err("point"))?;
            exact_orbit_json(&orbit_classify(&f, &p, a.max_steps, 0.0)?)
        }
        AnyMap::Complex(f) => {
            let p = parse_point(&a.point, parse_complex).map_err(point_err("point"))?;
            complex_orbit_json(&orbit_classify(&f, &p, a.max_steps, a.tol)?)
        }
    };
    Ok(Report::json(result))
}

/// Shortest round-trip text, switching to exponent form for tiny or huge values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn split_point(p: &ProjPoint<C>) -> (String, String) {
    match p.affine() {
        Some(z) => (num(z.re), num(z.im)),
        None => ("inf".into(), String::new()),
    }
}

fn preper(a: &PreperArgs) -> Result<Report, CliError> {
    at_least("max_n", a.max_n, 1)?;
    let pts = match load_map(&a.map)? {
        AnyMap::Exact(f) => enumerate_preperiodic(&f, a.max_n)?,
        AnyMap::Complex(f) => enumerate_preperiodic(&f, a.max_n)?,
    };
    let mut pts = pts;
    pts.sort_by(|x, y| {
        preper_core::preperiodic::point_order(&x.point, &y.point).then(x.class().cmp(&y.class()))
    });
    let points: Vec<Value> = pts
        .iter()
        .map(|p| {
            json!({
                "point": format_point_complex(&p.point),
                "radius": float(p.radius),
                "preperiod": p.orbit.preperiod,
                "period": p.orbit.period,
                "multiplier": p.orbit.multiplier.map(format_complex),
                "class": p.orbit.class.map(|c| c.as_str()),
            })
        })
        .collect();
    let rows = pts
        .iter()
        .map(|p| {
            let (re, im) = split_point(&p.point);
            vec![
                re,
                im,
                p.orbit.preperiod.to_string(),
                p.orbit.period.to_string(),
                num(p.radius),
                p.orbit.class.map_or("", |c| c.as_str()).to_string(),
            ]
        })
        .collect();
    let table = Table {
        headers: vec!["re", "im", "preperiod", "period", "radius", "class"],
        rows,
    };
    Ok(Report::with_table(
        json!({ "count": pts.len(), "points": points }),
        table,
    ))
}

fn certification_str(c: &Certification) -> &'static str {
    match c {
        Certification::Exact { .. } => "exact",
        Certification::Numeric { .. } => "numeric",
    }
}

/// Exact matches are reported at the double nearest their exact value.
fn match_point(m: &MatchedPoint) -> ProjPoint<C> {
    match &m.certification {
        Certification::Exact { point } => point.to_complex(),
        Certification::Numeric { .. } => m.point.clone(),
    }
}

pub fn matches_json(m: &[MatchedPoint]) -> Value {
    let finite = m.iter().filter(|x| !x.point.is_infinity()).count();
    let list: Vec<Value> = m
        .iter()
        .map(|x| {
            let mut v = json!({
                "point": format_point_complex(&match_point(x)),
                "radius": float(x.radius),
                "f": {"preperiod": x.f_orbit.preperiod, "period": x.f_orbit.period},
                "g": {"preperiod": x.g_orbit.preperiod, "period": x.g_orbit.period},
                "certification": certification_str(&x.certification),
            });
            match &x.certification {
                Certification::Exact { point } => {
                    v["exact_point"] = json!(format_point_exact(point))
                }
                Certification::Numeric { residual } => v["residual"] = float(*residual),
            }
            v
        })
        .collect();
    json!({ "count": m.len(), "finite_count": finite, "matches": list })
}

fn intersect(a: &IntersectArgs) -> Result<Report, CliError> {
    at_least("max_n", a.max_n, 1)?;
    let (f, g) = (load_map(&a.f)?, load_map(&a.g)?);
    let m = match (&f, &g) {
        (AnyMap::Exact(f), AnyMap::Exact(g)) => common_preperiodic(f, g, a.max_n)?,
        (AnyMap::Exact(f), AnyMap::Complex(g)) => common_preperiodic(f, g, a.max_n)?,
        (AnyMap::Complex(f), AnyMap::Exact(g)) => common_preperiodic(f, g, a.max_n)?,
        (AnyMap::Complex(f), AnyMap::Complex(g)) => common_preperiodic(f, g, a.max_n)?,
    };
    let rows = m
        .iter()
        .map(|x| {
            let (re, im) = split_point(&match_point(x));
            vec![
                re,
                im,
                x.f_orbit.preperiod.to_string(),
                x.f_orbit.period.to_string(),
                x.g_orbit.preperiod.to_string(),
                x.g_orbit.period.to_string(),
                certification_str(&x.certification).to_string(),
            ]
        })
        .collect();
    let table = Table {
        headers: vec![
            "re",
            "im",
            "preperiod_f",
            "period_f",
            "preperiod_g",
            "period_g",
            "certification",
        ],
        rows,
    };
    Ok(Report::with_table(matches_json(&m), table))
}

fn dynatomic(a: &DynatomicArgs) -> Result<Report, CliError> {
    at_least("period", a.period, 1)?;
    let (coeffs, hdeg) = match load_map(&a.map)? {
        AnyMap::Exact(f) => {
            let h = preperiod_polynomial(f.num(), f.den(), f.degree(), a.preperiod, a.period)?;
            (
                h.poly
                    .coeffs()
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>(),
                h.hdeg,
            )
        }
        AnyMap::Complex(f) => {
            let h = preperiod_polynomial(f.num(), f.den(), f.degree(), a.preperiod, a.period)?;
            (
                h.poly.coeffs().iter().map(|c| format_complex(*c)).collect(),
                h.hdeg,
            )
        }
    };
    let degree = coeffs.len().saturating_sub(1);
    Ok(Report::json(json!({
        "preperiod": a.preperiod,
        "period": a.period,
        "coefficients": coeffs,
        "degree": degree,
        "homogeneous_degree": hdeg,
        "roots_at_infinity": hdeg - degree,
    })))
}

fn matrix_json(m: &ExactMatrix<Rational>) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn transversality(a: &TransversalityArgs) -> Result<Report, CliError> {
    let exp: TransversalityExperiment = read_json(&a.experiment)?;
    let f = exp.f.build()?;
    let g = exp.g.build()?;
    let pair = FamilyPair::new(f, g)?;
    let s0 = exp.parameters()?;
    if s0.len() != pair.nparams() {
        return Err(CliError::Parse(format!(
            "parameters: {} values for {} parameters",
            s0.len(),
            pair.nparams()
        )));
    }
    let points = exp.points()?;
    if points.len() != pair.nparams() {
        return Err(CliError::Parse(format!(
            "points: need one marked point per parameter ({}), got {}",
            pair.nparams(),
            points.len()
        )));
    }
    let defs = class_definitions(&pair, &exp.classes())?;
    let cert = certify_rigid_repeller(&pair, &s0, &points, &defs)?;
    let grad = |p, x| -> Value {
        match branch_gradient::<Rational>(p, &s0, x) {
            Ok(v) => json!(v.iter().map(format_rational).collect::<Vec<_>>()),
            Err(_) => Value::Null,
        }
    };
    let point_list: Vec<Value> = points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            json!({
                "x": format_rational(x),
                "f_class": exp.points[i].f_class,
                "g_class": exp.points[i].g_class,
                "f_curve": defs[i].f.to_string(),
                "g_curve": defs[i].g.to_string(),
                "f_gradient": grad(&defs[i].f, x),
                "g_gradient": grad(&defs[i].g, x),
                "f_orbit": exact_orbit_json(&cert.f_orbits[i]),
                "g_orbit": exact_orbit_json(&cert.g_orbits[i]),
            })
        })
        .collect();
    Ok(Report::json(json!({
        "parameters": s0.iter().map(format_rational).collect::<Vec<_>>(),
        "points": point_list,
        "jacobian": cert.jacobian.as_ref().map(matrix_json),
        "bordered": cert.bordered.as_ref().map(matrix_json),
        "determinant": format_rational(&cert.determinant),
        "bordered_determinant": format_rational(&cert.bordered_determinant),
        "verdict": cert.verdict.as_str(),
    })))
}

fn monomial_rank(a: &MonomialRankArgs) -> Result<Report, CliError> {
    if !(2..=12).contains(&a.degree) {
        return Err(CliError::Parse(format!(
            "degree: must lie in 2..=12, got {}",
            a.degree
        )));
    }
    let order = a.zeta_order.unwrap_or(a.degree as u32 + 1);
    if order == 0 {
        return Err(CliError::Parse("zeta_order: must be positive".into()));
    }
    let c = rank_with_order(a.degree, order);
    Ok(Report::json(json!({
        "degree": c.degree,
        "zeta_order": c.zeta_order,
        "rank": c.rank,
        "expected": c.expected,
        "verdict": if c.pass { "pass" } else { "fail" },
        "matrix_dims": [c.rows, c.cols],
    })))
}

fn cloud_report(cloud: &PointCloud, mut meta: Value) -> Report {
    let atoms: Vec<Value> = cloud
        .atoms
        .iter()
        .map(|(p, w)| {
            let (re, im) = match p.affine() {
                Some(z) => (float(z.re), float(z.im)),
                None => (json!("inf"), Value::Null),
            };
            json!({"re": re, "im": im, "weight": w})
        })
        .collect();
    meta["atoms"] = json!(atoms);
    let rows = cloud
        .atoms
        .iter()
        .map(|(p, w)| {
            let (re, im) = split_point(p);
            vec![re, im, num(*w)]
        })
        .collect();
    Report::with_table(
        meta,
        Table {
            headers: vec!["re", "im", "weight"],
            rows,
        },
    )
}

fn measure_sample(a: &MeasureSampleArgs) -> Result<Report, CliError> {
    let f = load_map(&a.map)?.to_complex();
    if let Some(nm) = &a.preperiodic {
        let (n, m) = nm
            .split_once(',')
            .and_then(|(n, m)| {
                Some((
                    n.trim().parse::<usize>().ok()?,
                    m.trim().parse::<usize>().ok()?,
                ))
            })
            .filter(|(n, m)| n > m)
            .ok_or_else(|| {
                CliError::Parse(format!("preperiodic: expected n,m with n > m, got {nm:?}"))
            })?;
        let cloud = preperiodic_cloud(&f, n, m)?;
        return Ok(cloud_report(
            &cloud,
            json!({"kind": "preperiodic", "n": n, "m": m, "count": cloud.len()}),
        ));
    }
    let seed = require_seed(a.seed)?;
    at_least("samples", a.samples, 1)?;
    let base = match &a.base {
        Some(b) => Some(parse_point(b, parse_complex).map_err(point_err("base"))?),
        None => None,
    };
    let cloud = sample_mu(&f, a.depth, a.samples, seed, base);
    Ok(cloud_report(
        &cloud,
        json!({"kind": "sample", "count": cloud.len()}),
    ))
}

fn grid_report(grid: &ParamGrid) -> Report {
    let mut cells = Vec::with_capacity(grid.values.len());
    let mut rows = Vec::with_capacity(grid.values.len());
    for k in 0..grid.values.len() {
        let t = grid.center(k);
        let flag = grid.flags[k].as_str();
        let ok = grid.flags[k] == preper_core::measures::CellFlag::Ok;
        let lap = ok.then_some(grid.laplacian[k]);
        cells.push(json!({
            "t_re": t.re,
            "t_im": t.im,
            "value": float(grid.values[k]),
            "laplacian": lap.map_or(Value::Null, float),
            "flag": flag,
        }));
        rows.push(vec![
            num(t.re),
            num(t.im),
            num(grid.values[k]),
            num(lap.unwrap_or(f64::NAN)),
            flag.to_string(),
        ]);
    }
    let (hx, hy) = grid.spacing();
    Report::with_table(
        json!({
            "resolution": grid.resolution,
            "spacing": [hx, hy],
            "max_abs_laplacian": float(grid.max_abs_laplacian()),
            "cells": cells,
        }),
        Table {
            headers: vec!["t_re", "t_im", "value", "laplacian", "flag"],
            rows,
        },
    )
}

fn marked_grid(a: &MarkedGridArgs) -> Result<Report, CliError> {
    at_least("resolution", a.resolution, 3)?;
    at_least("iters", a.iters, 1)?;
    let fam = load_one_parameter_family(&a.family, "family")?;
    let marked: MPoly<Rational> = parse_param_poly(&a.marked).map_err(point_err("marked"))?;
    if marked.num_vars() > 1 {
        return Err(CliError::Parse("marked: may only use s0".into()));
    }
    let embed = |q: &Rational| C::new(preper_algebra::rational_to_f64(q), 0.0);
    let a_of_t = |t: C| Some(ProjPoint::finite(marked.eval_with(&[t], embed)));
    let grid = marked_point_grid(&fam, a_of_t, window(a.re, a.im)?, a.resolution, a.iters);
    Ok(grid_report(&grid))
}

fn bifslice(a: &BifsliceArgs) -> Result<Report, CliError> {
    at_least("resolution", a.resolution, 3)?;
    at_least("samples", a.samples, 1)?;
    let seed = require_seed(a.seed)?;
    let f = load_one_parameter_family(&a.f, "f")?;
    let g = load_one_parameter_family(&a.g, "g")?;
    let pair = FamilyPair::new(f, g)?;
    let grid = pairwise_slice(
        &pair,
        window(a.re, a.im)?,
        a.resolution,
        a.depth,
        a.samples,
        seed,
        a.iters,
    );
    Ok(grid_report(&grid))
}

enum Param {
    Exact(Rational),
    Complex(C),
}

fn parse_param(s: &str) -> Result<Param, CliError> {
    if let Ok(q) = parse_rational(s) {
        return Ok(Param::Exact(q));
    }
    parse_complex(s)
        .map(Param::Complex)
        .map_err(|e| CliError::Parse(format!("t: {e}")))
}

fn torsion_json(r: &TorsionReport) -> Value {
    let xs: Vec<Value> = r
        .orbits
        .iter()
        .map(|o| {
            json!({
                "x": format_complex(o.x.value),
                "radius": float(o.x.radius),
                "exact": o.x.exact.as_ref().map(format_rational),
                "points_above": o.x.points_above,
                "preperiod": o.preperiod,
                "period": o.period,
                "steps_to_infinity": o.steps_to_infinity,
            })
        })
        .collect();
    json!({
        "order": r.order,
        "invariant": r.invariant,
        "all_preperiodic": r.all_preperiodic(),
        "x_coordinates": xs,
    })
}

fn lattes_for<F: Field>(t: &F, nmax: usize, mmax: usize) -> Result<Value, CliError> {
    let torsion: Vec<Value> = (2..=nmax)
        .map(|n| torsion_preperiodicity(t, n).map(|r| torsion_json(&r)))
        .collect::<Result<_, _>>()?;
    let counts: Vec<Value> = (2..=nmax)
        .map(|n| {
            division_x(t, n).map(
                |s| json!({"order": n, "x_count": s.points.len(), "point_count": s.point_count()}),
            )
        })
        .collect::<Result<_, _>>()?;
    let hits: Vec<Value> = torsion_vs_rou(t, nmax, mmax)?
        .iter()
        .map(|h| {
            json!({
                "x": format_complex(h.x),
                "torsion_order": h.torsion_order,
                "root_order": h.root_order,
                "exact": h.exact,
            })
        })
        .collect();
    Ok(json!({
        "counts": counts,
        "torsion": torsion,
        "roots_of_unity": hits,
    }))
}

fn lattes_torsion(a: &LattesTorsionArgs) -> Result<Report, CliError> {
    if !(2..=MAX_TORSION_ORDER).contains(&a.nmax) {
        return Err(CliError::Parse(format!(
            "nmax: must lie in 2..={MAX_TORSION_ORDER}"
        )));
    }
    at_least("mmax", a.mmax, 1)?;
    let mut v = match parse_param(&a.t)? {
        Param::Exact(t) => lattes_for(&t, a.nmax, a.mmax)?,
        Param::Complex(t) => lattes_for(&t, a.nmax, a.mmax)?,
    };
    v["t"] = json!(a.t);
    Ok(Report::json(v))
}

fn verify(a: &VerifyDuplicationArgs) -> Result<Report, CliError> {
    let seed = require_seed(a.seed)?;
    at_least("samples", a.samples, 1)?;
    let r = match parse_param(&a.t)? {
        Param::Exact(t) => verify_duplication(&t, a.samples, seed)?,
        Param::Complex(t) => verify_duplication(&t, a.samples, seed)?,
    };
    Ok(Report::json(json!({
        "t": a.t,
        "samples": r.samples,
        "max_residual": float(r.max_residual),
        "symbolic_identity": duplication_identity(),
    })))
}

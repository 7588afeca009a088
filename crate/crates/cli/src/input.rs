//! JSON input files: maps, families and transversality experiments.

use std::path::Path;

use preper_algebra::{Complex64, Field, MPoly, Poly, Rational};
use preper_core::family::ParamFamily;
use preper_core::projective::RationalMap;
use preper_core::transversality::PointClasses;
use serde::{Deserialize, Serialize};

use crate::parse::{
    format_complex, format_rational, parse_complex, parse_param_poly, parse_rational,
};
use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    #[default]
    Exact,
    Complex,
}

fn one() -> Vec<String> {
    vec!["1".into()]
}

/// `{"degree": 2, "num": ["-21/16", "0", "1"], "den": ["1"], "domain": "exact"}`,
/// coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub num: Vec<String>,
    #[serde(default = "one")]
    pub den: Vec<String>,
    #[serde(default)]
    pub domain: Domain,
}

/// A map over one of the two scalar domains.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMap {
    Exact(RationalMap<Rational>),
    Complex(RationalMap<Complex64>),
}

impl AnyMap {
    pub fn degree(&self) -> usize {
        match self {
            AnyMap::Exact(f) => f.degree(),
            AnyMap::Complex(f) => f.degree(),
        }
    }

    pub fn to_complex(&self) -> RationalMap<Complex64> {
        match self {
            AnyMap::Exact(f) => f.to_complex(),
            AnyMap::Complex(f) => f.clone(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            AnyMap::Exact(_) => Domain::Exact,
            AnyMap::Complex(_) => Domain::Complex,
        }
    }
}

fn build<F: Field>(
    spec: &MapSpec,
    scalar: impl Fn(&str) -> Result<F, String>,
) -> Result<RationalMap<F>, CliError> {
    let coeffs = |field: &str, v: &[String]| -> Result<Poly<F>, CliError> {
        v.iter()
            .enumerate()
            .map(|(i, c)| scalar(c).map_err(|e| CliError::Parse(format!("{field}[{i}]: {e}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Poly::new)
    };
    let num = coeffs("num", &spec.num)?;
    let den = coeffs("den", &spec.den)?;
    let f = RationalMap::new(num, den)?;
    if let Some(d) = spec.degree {
        if d != f.degree() {
            return Err(CliError::Parse(format!(
                "degree: declared {d}, coefficients give {}",
                f.degree()
            )));
        }
    }
    Ok(f)
}

impl MapSpec {
    pub fn build(&self) -> Result<AnyMap, CliError> {
        Ok(match self.domain {
            Domain::Exact => AnyMap::Exact(build(self, parse_rational)?),
            Domain::Complex => AnyMap::Complex(build(self, parse_complex)?),
        })
    }

    pub fn from_map(f: &AnyMap) -> Self {
        match f {
            AnyMap::Exact(f) => MapSpec {
                degree: Some(f.degree()),
                num: f.num().coeffs().iter().map(format_rational).collect(),
                den: f.den().coeffs().iter().map(format_rational).collect(),
                domain: Domain::Exact,
            },
            AnyMap::Complex(f) => MapSpec {
                degree: Some(f.degree()),
                num: f
                    .num()
                    .coeffs()
                    .iter()
                    .map(|c| format_complex(*c))
                    .collect(),
                den: f
                    .den()
                    .coeffs()
                    .iter()
                    .map(|c| format_complex(*c))
                    .collect(),
                domain: Domain::Complex,
            },
        }
    }
}

/// `{"nparams": 2, "num": ["s0", "0", "1"], "den": ["1"]}`: coefficients are
/// polynomials in the parameters `s0, s1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub nparams: usize,
    pub num: Vec<String>,
    #[serde(default = "one")]
    pub den: Vec<String>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<ParamFamily, CliError> {
        let coeffs = |field: &str, v: &[String]| -> Result<Poly<MPoly<Rational>>, CliError> {
            v.iter()
                .enumerate()
                .map(|(i, c)| {
                    parse_param_poly(c).map_err(|e| CliError::Parse(format!("{field}[{i}]: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Poly::new)
        };
        Ok(ParamFamily::new(
            self.nparams,
            coeffs("num", &self.num)?,
            coeffs("den", &self.den)?,
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedPoint {
    /// Rational point.
    pub x: String,
    /// `[preperiod, period]` of the point under `f`.
    pub f_class: [usize; 2],
    pub g_class: [usize; 2],
}

/// Two families, a parameter value and the marked points with their classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalityExperiment {
    pub f: FamilySpec,
    pub g: FamilySpec,
    pub parameters: Vec<String>,
    pub points: Vec<MarkedPoint>,
}

impl TransversalityExperiment {
    pub fn parameters(&self) -> Result<Vec<Rational>, CliError> {
        self.parameters
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s).map_err(|e| CliError::Parse(format!("parameters[{i}]: {e}")))
            })
            .collect()
    }

    pub fn points(&self) -> Result<Vec<Rational>, CliError> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                parse_rational(&p.x).map_err(|e| CliError::Parse(format!("points[{i}].x: {e}")))
            })
            .collect()
    }

    pub fn classes(&self) -> Vec<PointClasses> {
        self.points
            .iter()
            .map(|p| PointClasses {
                f: (p.f_class[0], p.f_class[1]),
                g: (p.g_class[0], p.g_class[1]),
            })
            .collect()
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

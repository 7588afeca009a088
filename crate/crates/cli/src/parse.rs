//! Text forms of scalars, points and parameter polynomials.
//!
//! Exact scalars are `p`, `p/q` or terminating decimals; complex scalars are
//! `a`, `bi`, `a+bi` or `a-bi` with float parts. Parameter polynomials are sums
//! of products of rationals and variables `s0, s1, ...`, optionally with
//! `^k` exponents and parentheses around coefficients (the form the library
//! prints).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use preper_algebra::{Complex64, MPoly, Rational, Ring};
use preper_core::projective::ProjPoint;

fn clean(s: &str) -> String {
    s.trim().replace('\u{2212}', "-").replace(' ', "")
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = clean(s);
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p).map_err(|_| format!("bad numerator in {s:?}"))?;
        let q = BigInt::from_str(q).map_err(|_| format!("bad denominator in {s:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(&t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("not a rational number: {s:?}"));
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).unwrap();
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = Rational::new(num, den);
    Ok(if neg { -q } else { q })
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = clean(s);
    let bad = || format!("not a complex number: {s:?}");
    let float = |x: &str| -> Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_rational(x)
                .map(|q| preper_algebra::rational_to_f64(&q))
                .or_else(|_| x.parse::<f64>().map_err(|_| bad())),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(float(&t)?, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(float(&body[..k])?, float(&body[k..])?)),
        None => Ok(Complex64::new(0.0, float(body)?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format!("{}", z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

pub fn parse_point<T>(
    s: &str,
    scalar: impl Fn(&str) -> Result<T, String>,
) -> Result<ProjPoint<T>, String>
where
    T: preper_algebra::Field,
{
    match clean(s).as_str() {
        "inf" | "infinity" | "\u{221e}" => Ok(ProjPoint::infinity()),
        _ => Ok(ProjPoint::finite(scalar(s)?)),
    }
}

pub fn format_point_exact(p: &ProjPoint<Rational>) -> String {
    p.affine().map_or("inf".into(), |v| format_rational(&v))
}

pub fn format_point_complex(p: &ProjPoint<Complex64>) -> String {
    p.affine().map_or("inf".into(), format_complex)
}

/// A polynomial in the parameters `s0, s1, ...` over the rationals.
pub fn parse_param_poly(s: &str) -> Result<MPoly<Rational>, String> {
    let t = clean(s);
    if t.is_empty() {
        return Err("empty parameter polynomial".into());
    }
    let mut acc = MPoly::zero();
    let mut start = 0;
    let bytes = t.as_bytes();
    let mut depth = 0;
    let mut terms = Vec::new();
    for (k, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-'
                if depth == 0 && k > start && !matches!(bytes[k - 1], b'*' | b'^' | b'/') =>
            {
                terms.push(&t[start..k]);
                start = k;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);
    for term in terms {
        acc = acc.add(&parse_term(term).map_err(|e| format!("{e} in {s:?}"))?);
    }
    Ok(acc)
}

fn parse_term(term: &str) -> Result<MPoly<Rational>, String> {
    let (sign, body) = match term.strip_prefix('-') {
        Some(b) => (-<Rational as Ring>::one(), b),
        None => (
            <Rational as Ring>::one(),
            term.strip_prefix('+').unwrap_or(term),
        ),
    };
    let mut out = MPoly::constant(sign);
    for factor in body.split('*') {
        let factor = factor
            .strip_prefix('(')
            .and_then(|f| f.strip_suffix(')'))
            .unwrap_or(factor);
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<u64>()
                    .map_err(|_| format!("bad exponent {e:?}"))?,
            ),
            None => (factor, 1),
        };
        let value = if let Some(idx) = base.strip_prefix('s') {
            let j: usize = idx.parse().map_err(|_| format!("bad variable {base:?}"))?;
            MPoly::var(j)
        } else {
            MPoly::constant(parse_rational(base)?)
        };
        out = out.mul(&value.pow(exp));
    }
    Ok(out)
}

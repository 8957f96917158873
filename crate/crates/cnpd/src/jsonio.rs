//! JSON wire formats: rationals travel as `"p/q"` strings, complex values
//! as `{"re": "...", "im": "..."}` string pairs, indices 1-based. All maps
//! serialize with sorted keys so identical inputs produce byte-identical
//! output.

use serde_json::{json, Map, Value};

use crate::circuits::Circuit;
use crate::classify::{ClassificationReport, PatternCertificate};
use crate::dirichlet::DirichletCoefficients;
use crate::exact::{format_rational, parse_rational, Rational};
use crate::hp::{to_f64, Complex, Ctx};
use crate::kernelspec::{KernelSpec, RawSpec, ValidationError};
use crate::variety::{GaussianRational, GaussianRationalPoint, VarietyPresentation};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum JsonError {
    #[error("expected {expected} at {context}")]
    Shape {
        context: &'static str,
        expected: &'static str,
    },
    #[error("cannot parse {text:?} as {expected} at {context}")]
    Parse {
        context: &'static str,
        expected: &'static str,
        text: String,
    },
}

fn shape(context: &'static str, expected: &'static str) -> JsonError {
    JsonError::Shape { context, expected }
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn complex_value(z: &Complex) -> Value {
    json!({
        "re": format!("{}", to_f64(&z.re)),
        "im": format!("{}", to_f64(&z.im)),
    })
}

pub fn gaussian_value(z: &GaussianRational) -> Value {
    json!({
        "re": format_rational(&z.re),
        "im": format_rational(&z.im),
    })
}

/// Parses `{"b": ["1/3", ...], "n": [2, ...]}` into raw spec data.
pub fn raw_spec_from_value(v: &Value) -> Result<RawSpec, JsonError> {
    let obj = v.as_object().ok_or(shape("spec", "object"))?;
    let b_values = obj
        .get("b")
        .and_then(Value::as_array)
        .ok_or(shape("spec.b", "array of rational strings"))?;
    let n_values = obj
        .get("n")
        .and_then(Value::as_array)
        .ok_or(shape("spec.n", "array of integers"))?;
    let mut b = Vec::with_capacity(b_values.len());
    for item in b_values {
        b.push(rational_from_value(item, "spec.b")?);
    }
    let mut n = Vec::with_capacity(n_values.len());
    for item in n_values {
        let value = item
            .as_u64()
            .ok_or(shape("spec.n", "nonnegative integer"))?;
        n.push(value);
    }
    Ok(RawSpec::new(b, n))
}

fn rational_from_value(v: &Value, context: &'static str) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| JsonError::Parse {
            context,
            expected: "rational \"p/q\"",
            text: s.clone(),
        }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(JsonError::Parse {
                    context,
                    expected: "integer or rational string",
                    text: n.to_string(),
                })
            }
        }
        other => Err(JsonError::Parse {
            context,
            expected: "rational",
            text: other.to_string(),
        }),
    }
}

pub fn spec_value(spec: &KernelSpec) -> Value {
    json!({
        "b": spec.weights().iter().map(rational_value).collect::<Vec<_>>(),
        "n": spec.frequencies(),
    })
}

pub fn validation_error_value(err: &ValidationError) -> Value {
    json!({
        "error": "validation",
        "violated_clause": err.clause(),
        "detail": err.to_string(),
    })
}

/// `{"limit": N, "coeffs": {"2": "1/2", ...}}`; zero coefficients omitted.
pub fn coefficients_value(c: &DirichletCoefficients) -> Value {
    let mut coeffs = Map::new();
    for (n, v) in c.support() {
        coeffs.insert(n.to_string(), rational_value(v));
    }
    json!({
        "limit": c.limit(),
        "coeffs": Value::Object(coeffs),
    })
}

pub fn coefficients_from_value(v: &Value) -> Result<DirichletCoefficients, JsonError> {
    let obj = v.as_object().ok_or(shape("coefficients", "object"))?;
    let limit = obj
        .get("limit")
        .and_then(Value::as_u64)
        .ok_or(shape("coefficients.limit", "positive integer"))?;
    if limit == 0 {
        return Err(shape("coefficients.limit", "positive integer"));
    }
    let mut out = DirichletCoefficients::new(limit);
    if let Some(coeffs) = obj.get("coeffs") {
        let map = coeffs
            .as_object()
            .ok_or(shape("coefficients.coeffs", "object"))?;
        for (key, value) in map {
            let index: u64 = key.parse().map_err(|_| JsonError::Parse {
                context: "coefficients.coeffs",
                expected: "integer index",
                text: key.clone(),
            })?;
            if !(1..=limit).contains(&index) {
                return Err(JsonError::Parse {
                    context: "coefficients.coeffs",
                    expected: "index within limit",
                    text: key.clone(),
                });
            }
            out.set(index, rational_from_value(value, "coefficients.coeffs")?);
        }
    }
    Ok(out)
}

/// `{"J": [...], "J1": [...], "J2": [...], "beta": [...]}`, 1-based.
pub fn circuit_value(c: &Circuit) -> Value {
    let up = |v: &[usize]| -> Vec<u64> { v.iter().map(|&i| (i + 1) as u64).collect() };
    json!({
        "J": up(&c.support),
        "J1": up(&c.left),
        "J2": up(&c.right),
        "beta": c.beta,
    })
}

pub fn variety_value(v: &VarietyPresentation) -> Value {
    json!({
        "dimension": v.dimension(),
        "full_ball": v.is_full_ball(),
        "relations": v
            .relations()
            .iter()
            .map(|rel| {
                json!({
                    "circuit": circuit_value(&rel.circuit),
                    "Asq": rational_value(&rel.a_sq),
                    "Bsq": rational_value(&rel.b_sq),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn certificate_value(cert: &PatternCertificate) -> Value {
    json!({
        "circuits": cert.circuits.iter().map(circuit_value).collect::<Vec<_>>(),
        "weight_identities": cert
            .identities
            .iter()
            .map(|id| {
                json!({
                    "circuit": circuit_value(&id.circuit),
                    "lhs": rational_value(&id.lhs),
                    "rhs": rational_value(&id.rhs),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn report_value(report: &ClassificationReport) -> Value {
    json!({
        "verdict": report.verdict.as_str(),
        "theorem": report.theorem.as_str(),
        "permutation": report
            .permutation
            .as_ref()
            .map(|p| p.iter().map(|&i| (i + 1) as u64).collect::<Vec<_>>()),
        "certificate": report.certificate.as_ref().map(certificate_value),
        "not_isomorphic_to_free_multiplier_algebra_dim": report.excluded_free_dimension,
    })
}

/// Parses one complex component: `re`, `re+imi`, `re-imi`, `imi`, or `i`,
/// with rational (`p/q`) or decimal parts.
pub fn parse_complex_component(s: &str) -> Result<GaussianRational, JsonError> {
    let parse_err = |text: &str| JsonError::Parse {
        context: "point component",
        expected: "re, re+imi, or imi with rational or decimal parts",
        text: text.to_string(),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err(s));
    }
    // locate a +/- separating real and imaginary parts (not the leading
    // sign, not a sign inside an exponent-free number)
    let bytes = s.as_bytes();
    let mut split = None;
    for (i, &ch) in bytes.iter().enumerate().skip(1) {
        if ch == b'+' || ch == b'-' {
            split = Some(i);
            break;
        }
    }
    let (re_text, im_text) = if s.ends_with('i') || s.ends_with('I') {
        match split {
            Some(i) => (&s[..i], &s[i..s.len() - 1]),
            None => ("0", &s[..s.len() - 1]),
        }
    } else {
        if split.is_some() {
            return Err(parse_err(s));
        }
        (s, "0")
    };
    let re = parse_real_part(re_text).ok_or_else(|| parse_err(s))?;
    let im_normalized = match im_text {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.to_string(),
    };
    let im = parse_real_part(&im_normalized).ok_or_else(|| parse_err(s))?;
    Ok(GaussianRational::new(re, im))
}

/// Rational or finite-decimal literal to an exact rational.
fn parse_real_part(s: &str) -> Option<Rational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    if let Ok(r) = parse_rational(s) {
        return Some(r);
    }
    // decimal: [sign] digits [. digits]
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(Rational::new(numer * sign, denom))
}

/// Comma-separated point syntax to exact Gaussian-rational coordinates.
pub fn parse_point(s: &str) -> Result<GaussianRationalPoint, JsonError> {
    let coords = s
        .split(',')
        .map(parse_complex_component)
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() {
        return Err(shape("point", "comma-separated components"));
    }
    Ok(GaussianRationalPoint::new(coords))
}

pub fn gaussian_point_to_complex(p: &GaussianRationalPoint, ctx: &mut Ctx) -> Vec<Complex> {
    p.coords.iter().map(|z| z.to_complex(ctx)).collect()
}

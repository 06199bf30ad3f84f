//! The argument mini-language for sequences, vectors, test functions and mollifiers.
//!
//! | kind | forms |
//! |---|---|
//! | torus sequence | `unit:n`, `comb`, `ones`, `poly:r`, `geometric:q`, `gaussian:a`, `formula:<name>[:p1,p2,…]`, `json:<path>` |
//! | torus test function | `band:B:<2B+1 comma-separated coefficients>` or `band:B:<dirichlet\|fejer\|lorentz\|gauss>` |
//! | Hermite vector | `e:k`, `delta`, `gauss`, `poly-growth:r`, `json:<path>` |
//! | Heisenberg test function | `bump3:center=(p,q,t):radius=ρ[:mass=m]` |
//! | mollifier | `mollifier:n=<k>:radius=<ρ>`, or a bare `k` |
//!
//! Coefficients accept complex literals such as `1-0.5i`. Errors name the
//! offending token.

use std::fs;
use std::str::FromStr;

use gmc_core::heisenberg::{dirac_delta, HTestFunction, HeisenbergElement, HermiteVector, SchrodingerConfig};
use gmc_core::mollifier::BumpProfile;
use gmc_core::torus::{TorusSequence, TorusTestFunction};
use gmc_core::{Complex64, GrowthClass, GrowthEnvelope, IndexDomain};

use crate::{format, CliError};

fn parse_err(token: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        token: token.to_string(),
        message: message.into(),
    }
}

fn number<T: FromStr>(token: &str) -> Result<T, CliError> {
    token.trim().parse().map_err(|_| parse_err(token, "not a number"))
}

fn positive(token: &str) -> Result<f64, CliError> {
    let x: f64 = number(token)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(parse_err(token, "must be positive"))
    }
}

fn complex(token: &str) -> Result<Complex64, CliError> {
    Complex64::from_str(token.trim()).map_err(|_| parse_err(token, "not a complex number"))
}

fn arg<'a>(parts: &[&'a str], i: usize, spec: &str, what: &str) -> Result<&'a str, CliError> {
    parts.get(i).copied().ok_or_else(|| parse_err(spec, format!("missing {what}")))
}

fn no_extra(parts: &[&str], n: usize) -> Result<(), CliError> {
    match parts.get(n) {
        Some(t) => Err(parse_err(t, "unexpected trailing field")),
        None => Ok(()),
    }
}

fn load_json(path: &str, domain: IndexDomain) -> Result<gmc_core::CoefficientVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(path, format!("cannot read: {e}")))?;
    let v = format::from_json(&text)?;
    if v.domain() != domain {
        return Err(parse_err(path, format!("expected a {domain:?} vector")));
    }
    Ok(v)
}

pub fn torus_sequence(spec: &str) -> Result<TorusSequence, CliError> {
    if let Some(path) = spec.strip_prefix("json:") {
        return Ok(TorusSequence::new(load_json(path, IndexDomain::Integers)?)?);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let seq = match parts[0] {
        "unit" => {
            no_extra(&parts, 2)?;
            TorusSequence::unit(number(arg(&parts, 1, spec, "index")?)?)
        }
        "comb" | "ones" => {
            no_extra(&parts, 1)?;
            TorusSequence::comb()
        }
        "poly" => {
            no_extra(&parts, 2)?;
            TorusSequence::poly(number(arg(&parts, 1, spec, "degree")?)?)?
        }
        "geometric" => {
            no_extra(&parts, 2)?;
            let t = arg(&parts, 1, spec, "ratio")?;
            let q: f64 = number(t)?;
            if !(q > 0.0 && q < 1.0) {
                return Err(parse_err(t, "ratio must lie in (0, 1)"));
            }
            TorusSequence::geometric(q)?
        }
        "gaussian" => {
            no_extra(&parts, 2)?;
            TorusSequence::gaussian(positive(arg(&parts, 1, spec, "rate")?)?)?
        }
        "formula" => {
            no_extra(&parts, 3)?;
            let name = arg(&parts, 1, spec, "formula name")?;
            let params = match parts.get(2) {
                Some(p) => p.split(',').map(number).collect::<Result<Vec<f64>, _>>()?,
                None => Vec::new(),
            };
            formula_sequence(name, &params)?
        }
        other => return Err(parse_err(other, "unknown sequence generator")),
    };
    Ok(seq)
}

/// Registered formulas on `Z` with their natural envelopes.
fn formula_sequence(name: &str, params: &[f64]) -> Result<TorusSequence, CliError> {
    let arity = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(parse_err(name, format!("takes {n} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "constant" => {
            arity(2)?;
            let c = Complex64::new(params[0], params[1]).norm();
            if c == 0.0 {
                return Ok(TorusSequence::finite(0, Vec::new())?);
            }
            Ok(TorusSequence::named(name, params, GrowthEnvelope::new(c, 0.0)?, GrowthClass::PolynomialGrowth)?)
        }
        "power" => {
            arity(1)?;
            Ok(TorusSequence::poly(params[0])?)
        }
        "geometric" => {
            arity(1)?;
            Ok(TorusSequence::geometric(params[0])?)
        }
        "gaussian" => {
            arity(1)?;
            Ok(TorusSequence::gaussian(params[0])?)
        }
        "inv_one_plus_sq" => {
            arity(1)?;
            let m = params[0];
            // (1+n²)^{-m} ≤ 2^{|m|} (1+|n|)^{-2m}
            let class = if 2.0 * m > 0.5 {
                GrowthClass::SquareSummable
            } else {
                GrowthClass::PolynomialGrowth
            };
            Ok(TorusSequence::named(name, params, GrowthEnvelope::new(2f64.powf(m.abs()), -2.0 * m)?, class)?)
        }
        _ => Err(parse_err(name, "not a formula on the integers")),
    }
}

pub fn torus_test_function(spec: &str) -> Result<TorusTestFunction, CliError> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    if parts[0] != "band" {
        return Err(parse_err(parts[0], "expected `band`"));
    }
    let bt = arg(&parts, 1, spec, "bandwidth")?;
    let b: usize = number(bt)?;
    let body = arg(&parts, 2, spec, "coefficients or profile")?;
    let bf = b as f64;
    let profile: Option<fn(f64, f64) -> f64> = match body {
        "dirichlet" => Some(|_, _| 1.0),
        "fejer" => Some(|n: f64, b: f64| 1.0 - n.abs() / (b + 1.0)),
        "lorentz" => Some(|n: f64, _| 1.0 / (1.0 + n * n)),
        "gauss" => Some(|n: f64, b: f64| (-n * n / (1.0 + b)).exp()),
        _ => None,
    };
    if let Some(p) = profile {
        return Ok(TorusTestFunction::from_fn(b, |n| Complex64::new(p(n as f64, bf), 0.0)));
    }
    let coeffs = body.split(',').map(complex).collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() != 2 * b + 1 {
        return Err(parse_err(body, format!("bandwidth {b} needs {} coefficients, got {}", 2 * b + 1, coeffs.len())));
    }
    Ok(TorusTestFunction::new(b, coeffs)?)
}

pub fn hermite_vector(spec: &str) -> Result<HermiteVector, CliError> {
    if let Some(path) = spec.strip_prefix("json:") {
        return Ok(HermiteVector::new(load_json(path, IndexDomain::Naturals)?)?);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[0] {
        "e" => {
            no_extra(&parts, 2)?;
            Ok(HermiteVector::basis(number(arg(&parts, 1, spec, "index")?)?))
        }
        "delta" => {
            no_extra(&parts, 1)?;
            Ok(dirac_delta())
        }
        "gauss" => {
            no_extra(&parts, 1)?;
            Ok(HermiteVector::gauss())
        }
        "poly-growth" => {
            no_extra(&parts, 2)?;
            let t = arg(&parts, 1, spec, "degree")?;
            let r: f64 = number(t)?;
            if r < 0.0 {
                return Err(parse_err(t, "degree must be non-negative"));
            }
            Ok(HermiteVector::poly_growth(r)?)
        }
        other => Err(parse_err(other, "unknown Hermite vector")),
    }
}

/// Splits `key=value` fields after the leading tag.
fn keyed<'a>(fields: &[&'a str], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>, CliError> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| parse_err(f, "expected key=value"))?;
        if !allowed.contains(&k) {
            return Err(parse_err(k, format!("unknown key; expected one of {}", allowed.join(", "))));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(parse_err(k, "duplicate key"));
        }
        out.push((k, v));
    }
    Ok(out)
}

fn triple(token: &str) -> Result<[f64; 3], CliError> {
    let inner = token
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| parse_err(token, "expected (p,q,t)"))?;
    let xs = inner.split(',').map(number).collect::<Result<Vec<f64>, _>>()?;
    <[f64; 3]>::try_from(xs).map_err(|_| parse_err(token, "expected three components"))
}

pub fn heisenberg_test_function(spec: &str, cfg: &SchrodingerConfig) -> Result<HTestFunction, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts[0] != "bump3" {
        return Err(parse_err(parts[0], "expected `bump3`"));
    }
    let mut center = [0.0; 3];
    let mut radius = None;
    let mut mass = 1.0;
    for (k, v) in keyed(&parts[1..], &["center", "radius", "mass"])? {
        match k {
            "center" => center = triple(v)?,
            "radius" => radius = Some(positive(v)?),
            _ => mass = number(v)?,
        }
    }
    let radius = radius.ok_or_else(|| parse_err(spec, "missing radius"))?;
    Ok(cfg.bump3(HeisenbergElement::new(center[0], center[1], center[2]), radius, mass)?)
}

/// `(n, profile)`; a bare integer uses `default_radius`.
pub fn mollifier(spec: &str, default_radius: f64) -> Result<(u32, BumpProfile), CliError> {
    if let Ok(n) = spec.trim().parse::<u32>() {
        return Ok((positive_n(spec, n)?, BumpProfile::new(default_radius)?));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts[0] != "mollifier" {
        return Err(parse_err(parts[0], "expected `mollifier` or an integer"));
    }
    let mut n = None;
    let mut radius = default_radius;
    for (k, v) in keyed(&parts[1..], &["n", "radius"])? {
        match k {
            "n" => n = Some(positive_n(v, number(v)?)?),
            _ => radius = positive(v)?,
        }
    }
    let n = n.ok_or_else(|| parse_err(spec, "missing n"))?;
    Ok((n, BumpProfile::new(radius)?))
}

fn positive_n(token: &str, n: u32) -> Result<u32, CliError> {
    if n == 0 {
        Err(parse_err(token, "n must be at least 1"))
    } else {
        Ok(n)
    }
}

/// Comma-separated list of positive integers.
pub fn n_list(spec: &str) -> Result<Vec<u32>, CliError> {
    spec.split(',').map(|t| positive_n(t, number(t)?)).collect()
}

/// `lo:hi:count`.
pub fn axis(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    no_extra(&parts, 3)?;
    let lo: f64 = number(arg(&parts, 0, spec, "lower end")?)?;
    let hi: f64 = number(arg(&parts, 1, spec, "upper end")?)?;
    let ct = arg(&parts, 2, spec, "point count")?;
    let count: usize = number(ct)?;
    if count == 0 {
        return Err(parse_err(ct, "count must be positive"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

/// `lo:hi:count` for both axes, or `<p-axis>,<q-axis>`.
pub fn grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    match spec.split_once(',') {
        Some((p, q)) => Ok((axis(p)?, axis(q)?)),
        None => {
            let a = axis(spec)?;
            Ok((a.clone(), a))
        }
    }
}

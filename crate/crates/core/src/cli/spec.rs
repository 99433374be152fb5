//! Text forms of states, gains and grids accepted on the command line.

use num_complex::Complex64;

use crate::cloner::{gain_select, CloneTarget};
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

fn parse_err(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn parse_real(token: &str) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| parse_err(token, "expected a real number"))?;
    if !v.is_finite() {
        return Err(parse_err(token, "expected a finite number"));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (a bare `i` means unit imaginary part).
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(parse_err(token, "empty complex number"));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(
            parse_real(&t).map_err(|_| parse_err(token, "expected a complex number"))?,
            0.0,
        ));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let bad = |_| parse_err(token, "expected a complex number such as 1+0.5i");
    Ok(Complex64::new(
        parse_real(re).map_err(bad)?,
        parse_real(im).map_err(bad)?,
    ))
}

/// Parses `coherent:α`, `squeezed:α,r`, `thermal_sq:n,s` or `vacuum`.
pub fn parse_state(spec: &str) -> Result<GaussianState> {
    let (kind, args) = match spec.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a)),
        None => (spec.trim(), None),
    };
    let parts: Vec<&str> = args.map(|a| a.split(',').collect()).unwrap_or_default();
    let arity = |n: usize| {
        if parts.len() == n {
            Ok(())
        } else {
            Err(parse_err(spec, format!("`{kind}` takes {n} argument(s)")))
        }
    };
    match kind {
        "vacuum" => {
            if args.is_some_and(|a| !a.trim().is_empty()) {
                return Err(parse_err(spec, "`vacuum` takes no arguments"));
            }
            Ok(GaussianState::vacuum())
        }
        "coherent" => {
            arity(1)?;
            Ok(GaussianState::coherent(parse_complex(parts[0])?))
        }
        "squeezed" => {
            arity(2)?;
            GaussianState::squeezed_coherent(parse_complex(parts[0])?, parse_real(parts[1])?)
        }
        "thermal_sq" => {
            arity(2)?;
            GaussianState::squeezed_thermal(parse_real(parts[0])?, parse_real(parts[1])?)
        }
        _ => Err(parse_err(
            kind,
            "unknown state kind (expected coherent, squeezed, thermal_sq or vacuum)",
        )),
    }
}

/// Feed-forward gain: a real number or `auto1` / `auto2` for the gain that
/// clones input 1 / input 2 at the given `tau1`.
pub fn parse_gain(token: &str, tau1: f64) -> Result<f64> {
    match token.trim() {
        "auto1" => gain_select(CloneTarget::First, tau1),
        "auto2" => gain_select(CloneTarget::Second, tau1),
        other => {
            parse_real(other).map_err(|_| parse_err(token, "expected a real gain, auto1 or auto2"))
        }
    }
}

/// Comma-separated list of reals.
pub fn parse_list(token: &str) -> Result<Vec<f64>> {
    token.split(',').map(parse_real).collect()
}

/// `lo, lo + step, ...` up to and including `hi` (within rounding).
pub fn uniform_grid(name: &str, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(parse_err(
            &format!("{name}={lo}:{hi}:{step}"),
            "grid needs finite bounds, lo <= hi and a positive step",
        ));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(parse_err(
            &format!("{name}={lo}:{hi}:{step}"),
            "grid has too many points",
        ));
    }
    // Rounding to 12 decimals keeps grid values like 0.3 free of accumulation noise.
    Ok((0..=n)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

//! Expansion files: `{"ell": L, "basis": "y" | "phi", "coeffs": [[re, im], ...]}`.
//!
//! Parsing goes through serde; writing is done by hand so every float is
//! printed with 17 significant digits and output is byte-stable.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nullharm::{Basis, Complex64, Expansion, PhiExpansion, YExpansion};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    ell: usize,
    basis: Basis,
    coeffs: Vec<[f64; 2]>,
}

pub fn parse(text: &str) -> Result<Expansion, CliError> {
    let raw: RawFile =
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    let max = nullharm::max_degree();
    if raw.ell > max {
        return Err(CliError::DegreeAboveCap { ell: raw.ell, max });
    }
    if raw.coeffs.len() != 2 * raw.ell + 1 {
        return Err(CliError::Malformed(format!(
            "degree {} needs {} coefficients, found {}",
            raw.ell,
            2 * raw.ell + 1,
            raw.coeffs.len()
        )));
    }
    if raw.coeffs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::Malformed("coefficients must be finite".into()));
    }
    let coeffs: Vec<Complex64> = raw
        .coeffs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let e = match raw.basis {
        Basis::Phi => Expansion::Phi(PhiExpansion::new(raw.ell, coeffs)?),
        Basis::Y => Expansion::Y(YExpansion::new(raw.ell, coeffs)?),
    };
    Ok(e)
}

pub fn read(path: &Path) -> Result<Expansion, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// `{:.16e}`, with negative zero printed as zero.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub fn render(e: &Expansion) -> String {
    let basis = match e.basis() {
        Basis::Phi => "phi",
        Basis::Y => "y",
    };
    let mut s = format!(
        "{{\n  \"ell\": {},\n  \"basis\": \"{basis}\",\n  \"coeffs\": [\n",
        e.ell()
    );
    let n = e.coeffs().len();
    for (i, c) in e.coeffs().iter().enumerate() {
        let sep = if i + 1 == n { "" } else { "," };
        let _ = writeln!(s, "    [{}, {}]{sep}", fmt_f64(c.re), fmt_f64(c.im));
    }
    s.push_str("  ]\n}\n");
    s
}

/// Writes `content` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use nullharm::verify::{self, Report};
use nullharm::{
    apply_rotation, convert_phi_to_y, convert_y_to_phi, g_matrix_so2, g_matrix_solve,
    phi_from_y_matrix, Complex64, Expansion, GMatrix, RotationMatrix3, SpherePoint, YExpansion,
};

use crate::file::{self, fmt_f64};
use crate::{CliError, Command};

pub fn dispatch(cmd: Command, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Convert { input, to, out } => {
            let e = file::read(&input)?;
            let converted = e.convert(to.into())?;
            file::emit(out.output.as_deref(), &file::render(&converted))
        }
        Command::Rotate {
            input,
            rotation,
            out,
        } => {
            let e = file::read(&input)?;
            let rotated = match (rotation.axis_angle, rotation.about_x) {
                (Some(aa), None) => rotate_axis_angle(&e, [aa[0], aa[1], aa[2]], aa[3], err)?,
                (None, Some(psi)) => rotate_about_x(&e, psi)?,
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --axis-angle, --about-x".into(),
                    ))
                }
            };
            file::emit(out.output.as_deref(), &file::render(&rotated))
        }
        Command::Eval { input, grid, out } => {
            let e = file::read(&input)?;
            let (n_theta, n_phi) = (grid[0], grid[1]);
            if n_theta == 0 || n_phi == 0 {
                return Err(CliError::Usage("grid sizes must be positive".into()));
            }
            file::emit(out.output.as_deref(), &eval_csv(&e, n_theta, n_phi))
        }
        Command::Verify { ell_max, tol, json } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::Usage(format!(
                    "--tol must be a non-negative number, got {tol}"
                )));
            }
            let report = verify::run(ell_max, tol)?;
            let json_text = report_json(&report)?;
            match json.as_deref() {
                Some(p) if p == Path::new("-") => file::emit(None, &json_text)?,
                Some(p) => {
                    file::emit(Some(p), &json_text)?;
                    file::emit(None, &report_text(&report))?;
                }
                None => file::emit(None, &report_text(&report))?,
            }
            let failed = report.failures().count();
            if failed > 0 {
                return Err(CliError::VerificationFailed(failed));
            }
            Ok(())
        }
        Command::Table { ell, out } => {
            let max = nullharm::max_degree();
            if ell > max {
                return Err(CliError::DegreeAboveCap { ell, max });
            }
            file::emit(out.output.as_deref(), &table_text(ell))
        }
    }
}

fn rotate_axis_angle(
    e: &Expansion,
    axis: [f64; 3],
    angle: f64,
    err: &mut dyn Write,
) -> Result<Expansion, CliError> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) || !angle.is_finite() {
        return Err(CliError::Usage(
            "rotation axis must be finite and nonzero, angle finite".into(),
        ));
    }
    if (norm - 1.0).abs() > 1e-12 {
        let _ = writeln!(err, "warning: axis has length {norm}; normalizing");
    }
    if angle == 0.0 {
        return Ok(e.clone());
    }
    let g = RotationMatrix3::from_axis_angle(axis, angle)?;
    let gm = g_matrix_solve(e.ell(), &g)?;
    transform(e, &gm)
}

fn rotate_about_x(e: &Expansion, psi: f64) -> Result<Expansion, CliError> {
    if !psi.is_finite() {
        return Err(CliError::Usage("--about-x needs a finite angle".into()));
    }
    if psi == 0.0 {
        return Ok(e.clone());
    }
    match e {
        // Y_m picks up e^{imψ} exactly
        Expansion::Y(y) => {
            let coeffs = y
                .coeffs
                .iter()
                .enumerate()
                .map(|(p, c)| {
                    c * Complex64::from_polar(1.0, nullharm::index_at(y.ell, p) as f64 * psi)
                })
                .collect();
            Ok(Expansion::Y(YExpansion::new(y.ell, coeffs)?))
        }
        Expansion::Phi(_) => transform(e, &g_matrix_so2(e.ell(), psi)),
    }
}

fn transform(e: &Expansion, gm: &GMatrix) -> Result<Expansion, CliError> {
    Ok(match e {
        Expansion::Phi(p) => Expansion::Phi(apply_rotation(p, gm)?),
        Expansion::Y(y) => {
            Expansion::Y(convert_phi_to_y(&apply_rotation(&convert_y_to_phi(y), gm)?))
        }
    })
}

/// Cell-centred `θ_i = (i + ½)π/n_theta`, `φ_k = 2πk/n_phi`, theta-major.
fn eval_csv(e: &Expansion, n_theta: usize, n_phi: usize) -> String {
    let mut s = String::from("theta,phi,re,im\n");
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * PI / n_theta as f64;
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            let v = e.eval(&SpherePoint::new(theta, phi));
            let _ = writeln!(
                s,
                "{},{},{},{}",
                fmt_f64(theta),
                fmt_f64(phi),
                fmt_f64(v.re),
                fmt_f64(v.im)
            );
        }
    }
    s
}

fn report_json(report: &Report) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn report_text(report: &Report) -> String {
    let mut s = format!(
        "verify: ell_max = {}, tolerance scale = {}\n\n",
        report.ell_max, report.tol_scale
    );
    let mut suite = "";
    for c in &report.checks {
        if c.suite != suite {
            suite = &c.suite;
            let _ = writeln!(s, "[{suite}]");
        }
        let _ = writeln!(
            s,
            "  {} {:<32} ell<={:<3} error {:.3e}  tol {:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.ell,
            c.max_error,
            c.tolerance
        );
    }
    s.push_str("\nfindings\n");
    for f in &report.findings {
        let _ = writeln!(s, "  {}: {}", f.topic, f.resolution);
        for ev in &f.evidence {
            let _ = writeln!(s, "      {:<42} {:.3e}", ev.label, ev.value);
        }
    }
    let failed = report.failures().count();
    let _ = writeln!(
        s,
        "\n{} of {} checks passed",
        report.checks.len() - failed,
        report.checks.len()
    );
    s
}

fn table_text(ell: usize) -> String {
    let a = phi_from_y_matrix(ell);
    let l = ell as i64;
    let mut s = format!("# Phi^{ell}_j = sum_m A[j,m] Y_{ell}m\n# j,m,re,im\n");
    for j in -l..=l {
        for m in -l..=l {
            let v = a.get(j, m);
            let _ = writeln!(s, "{j},{m},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    if ell == 0 {
        s.push_str("# Phi^0_0 = 1 = 2 sqrt(pi) Y_00, so Y_00 = 1/(2 sqrt(pi))\n");
    }
    let rows: Vec<_> = verify::appendix_a()
        .into_iter()
        .filter(|r| r.ell == ell)
        .collect();
    if !rows.is_empty() {
        let a = &a;
        let dev = rows
            .iter()
            .flat_map(|r| {
                r.coeffs
                    .iter()
                    .enumerate()
                    .map(move |(p, c)| (a.get(r.j, nullharm::index_at(ell, p)) - c).norm())
            })
            .fold(0.0, f64::max);
        let _ = writeln!(
            s,
            "# max deviation from the tabulated ell={ell} developments: {dev:.3e}"
        );
    }
    s
}

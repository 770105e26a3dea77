//! Command implementations behind the `gha-coherent` binary. Every command
//! returns its text output and an exit status so the binary stays a thin shell.

use gha_core::coherent::{
    build_state_with_tol, coherent_state, continuity_for, eigen_residual, ladder_for, normalization,
    normalization_series, radius, CoherentState, DEFAULT_TAIL_TOL,
};
use gha_core::completeness::{mellin_oracle, verify_completeness, MellinMatch, WeightFunction};
use gha_core::config;
use gha_core::figures::{figure_data, Figure};
use gha_core::fock::{build_rep, casimir, check_relations};
use gha_core::quadrature::QuadConfig;
use gha_core::spectra::{build_ladder, Family, Spectrum};
use gha_core::Error;
use num_complex::Complex64;
use std::fmt::Write;
use std::path::Path;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    CheckFailed = 1,
    Usage = 2,
    Accuracy = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Status for an error that aborts a command.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::Config(_) | Error::Expr { .. } | Error::Domain { .. } | Error::Range { .. } => Status::Usage,
        Error::Accuracy { .. } | Error::Truncation { .. } => Status::Accuracy,
        _ => Status::CheckFailed,
    }
}

pub const CATALOG: [&str; 6] = ["harmonic", "q-deformed[:q]", "power-class[:alpha]", "type1", "type2", "square-well"];
pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_ALPHA: f64 = 3.0;

/// A catalog name (`power-class:3`, `q-deformed:0.7`, …) or a TOML config path.
pub fn resolve_spectrum(source: &str) -> Result<(Spectrum, Option<QuadConfig>), Error> {
    let (name, arg) = match source.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (source, None),
    };
    let number = |a: Option<&str>, default: f64| -> Result<f64, Error> {
        match a {
            None => Ok(default),
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("'{s}' is not a number in spectrum '{source}'"))),
        }
    };
    let no_arg = |s: Spectrum| match arg {
        Some(_) => Err(Error::Config(format!("spectrum '{name}' takes no parameter"))),
        None => Ok(s),
    };
    let spec = match name {
        "harmonic" => no_arg(Spectrum::harmonic()),
        "q-deformed" => Spectrum::q_deformed(number(arg, DEFAULT_Q)?),
        "power-class" => Spectrum::power_class(number(arg, DEFAULT_ALPHA)?),
        "type1" => no_arg(Spectrum::power_class(1.0)?),
        "type2" => no_arg(Spectrum::power_class(2.0)?),
        "square-well" => no_arg(Spectrum::square_well()),
        _ => {
            let path = Path::new(source);
            if path.is_file() {
                let c = config::load(path)?;
                return Ok((c.spectrum, c.quadrature));
            }
            Err(Error::Config(format!(
                "'{source}' is neither a catalog spectrum ({}) nor a config file",
                CATALOG.join(", ")
            )))
        }
    }?;
    Ok((spec, None))
}

/// `a+bi`, `a-bi`, `a`, `bi`, `i`, or polar `r@theta`.
pub fn parse_label(text: &str) -> Result<Complex64, Error> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse label '{text}'; use a+bi or r@theta"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((r, t)) = s.split_once('@') {
        let r: f64 = r.parse().map_err(|_| bad())?;
        let t: f64 = t.parse().map_err(|_| bad())?;
        if !(r >= 0.0) || !r.is_finite() || !t.is_finite() {
            return Err(bad());
        }
        return Ok(Complex64::from_polar(r, t));
    }
    let imag_part = |p: &str| -> Result<f64, Error> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    let z = if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => Complex64::new(body[..k].parse().map_err(|_| bad())?, imag_part(&body[k..])?),
            None => Complex64::new(0.0, imag_part(body)?),
        }
    } else {
        Complex64::new(s.parse().map_err(|_| bad())?, 0.0)
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

fn fmt_radius(r: f64) -> String {
    if r.is_infinite() {
        "inf".into()
    } else {
        format!("{r}")
    }
}

pub fn cmd_list() -> String {
    let rows: Vec<(&str, Spectrum, &str, &str)> = vec![
        ("harmonic", Spectrum::harmonic(), "exp(-x)", "w=1/π"),
        (
            "q-deformed",
            Spectrum::q_deformed(DEFAULT_Q).expect("valid q"),
            "1/e_q(x/N0^2)",
            "completeness: q=1 only (w=1/π)",
        ),
        ("type1", Spectrum::power_class(1.0).expect("valid"), "(1-x)^2", "w=1/(π(1-x)^2)"),
        (
            "type2",
            Spectrum::power_class(2.0).expect("valid"),
            "(1-x)^3/(1+x)",
            "w=-ln(x)(1+x)/(π(1-x)^3)",
        ),
        (
            "power-class",
            Spectrum::power_class(DEFAULT_ALPHA).expect("valid"),
            "x/Li_{-alpha}(x)",
            "w=(-ln x)^(alpha-1)/(πΓ(alpha)N^2)",
        ),
        ("square-well", Spectrum::square_well(), "x/(2I_2(2√x))", "w=(4/π)K_2(2√x)I_2(2√x)"),
    ];
    let mut out = String::new();
    let _ = writeln!(out, "{:<12} {:<28} {:<6} {:<9} {:<18} weight", "name", "f", "α₀", "radius", "N^2");
    for (name, spec, n2, w) in rows {
        let _ = writeln!(
            out,
            "{:<12} {:<28} {:<6} {:<9} {:<18} {}",
            name,
            spec.f_description(),
            format!("α₀={}", spec.alpha0()),
            fmt_radius(radius(&spec)),
            n2,
            w
        );
    }
    let _ = writeln!(out, "q-deformed defaults to q={DEFAULT_Q}; power-class defaults to alpha={DEFAULT_ALPHA}; radius is in x=|z|^2");
    out
}

/// Normalized state table: `n,|c_n|^2,cumulative`.
pub fn cmd_state(spec: &Spectrum, z: Complex64, dim: Option<usize>) -> Result<String, Error> {
    let x = z.norm_sqr();
    let state: CoherentState = match dim {
        None => coherent_state(spec, z, DEFAULT_TAIL_TOL)?,
        Some(d) => {
            if d == 0 {
                return Err(Error::Config("--dim must be >= 1".into()));
            }
            let r = radius(spec);
            if !(x < r) {
                return Err(Error::Domain {
                    what: "coherent state",
                    detail: format!("|z|^2 = {x} outside the convergence disc |z|^2 < {}", fmt_radius(r)),
                });
            }
            let ladder = build_ladder(spec, d)?;
            build_state_with_tol(&ladder, z, d, DEFAULT_TAIL_TOL).map_err(|e| match e {
                Error::Truncation { dim, tail, required } => Error::Config(format!(
                    "dim {dim} leaves a certified tail of {tail:.3e} > {DEFAULT_TAIL_TOL:.0e}; \
                     use --dim {required} or omit --dim"
                )),
                other => other,
            })?
        }
    };
    let closed = normalization(spec, x)?;
    let series = normalization_series(spec, x, DEFAULT_TAIL_TOL)?;
    let mut out = String::new();
    let _ = writeln!(out, "# spectrum = {}", spec.label());
    let _ = writeln!(out, "# z = {}{:+}i", z.re, z.im);
    let _ = writeln!(out, "# dim = {}", state.dim());
    let _ = writeln!(out, "# tail_bound = {:.3e}", state.tail_bound());
    let _ = writeln!(out, "# N2_closed = {closed:.17e}");
    let _ = writeln!(out, "# N2_series = {:.17e}", series.value);
    let _ = writeln!(out, "n,|c_n|^2,cumulative");
    let mut cumulative = 0.0;
    for (n, c) in state.coeffs().iter().enumerate() {
        let p = c.norm_sqr();
        cumulative += p;
        let _ = writeln!(out, "{n},{p:.17e},{cumulative:.17e}");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionStatus {
    Pass,
    Fail,
    Skipped,
    Accuracy,
}

impl SectionStatus {
    fn as_str(self) -> &'static str {
        match self {
            SectionStatus::Pass => "pass",
            SectionStatus::Fail => "fail",
            SectionStatus::Skipped => "skipped",
            SectionStatus::Accuracy => "accuracy-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: &'static str,
    pub status: SectionStatus,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub spectrum: String,
    pub sections: Vec<Section>,
}

impl VerifyReport {
    pub fn status(&self) -> Status {
        if self.sections.iter().any(|s| s.status == SectionStatus::Fail) {
            Status::CheckFailed
        } else if self.sections.iter().any(|s| s.status == SectionStatus::Accuracy) {
            Status::Accuracy
        } else {
            Status::Pass
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spectrum = \"{}\"", self.spectrum);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.name);
            let _ = writeln!(out, "status = \"{}\"", s.status.as_str());
            for l in &s.lines {
                let _ = writeln!(out, "{l}");
            }
        }
        let failing: Vec<&str> = self
            .sections
            .iter()
            .filter(|s| matches!(s.status, SectionStatus::Fail | SectionStatus::Accuracy))
            .map(|s| s.name)
            .collect();
        let _ = writeln!(out, "\n[summary]");
        let _ = writeln!(out, "exit_code = {}", self.status().code());
        let _ = writeln!(out, "failing = {failing:?}");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Moments 0..n_max are checked.
    pub n_max: usize,
    /// Moment tolerance |M_n − 1|.
    pub tol: f64,
    pub relation_tol: f64,
    pub normalization_tol: f64,
    pub dim: usize,
    pub quad: QuadConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max: 20,
            tol: 1e-6,
            relation_tol: 1e-10,
            normalization_tol: 1e-10,
            dim: 64,
            quad: QuadConfig::default(),
        }
    }
}

fn failed_section(name: &'static str, e: &Error) -> Section {
    let status = match error_status(e) {
        Status::Accuracy => SectionStatus::Accuracy,
        _ => SectionStatus::Fail,
    };
    Section {
        name,
        status,
        lines: vec![format!("error = \"{e}\"")],
    }
}

fn pass_if(ok: bool) -> SectionStatus {
    if ok {
        SectionStatus::Pass
    } else {
        SectionStatus::Fail
    }
}

/// Label used for the eigenvector and normalizability checks: |z|² at half the
/// radius, or |z| = 3 when the disc is unbounded.
pub fn probe_label(spec: &Spectrum) -> Complex64 {
    let r = radius(spec);
    if r.is_infinite() {
        Complex64::new(3.0, 0.0)
    } else {
        Complex64::new((0.5 * r).sqrt(), 0.0)
    }
}

/// Interior label for the continuity table, leaving room for a 0.1 shift.
pub fn continuity_label(spec: &Spectrum) -> Complex64 {
    let r = radius(spec);
    if r.is_infinite() {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new((0.25 * r).sqrt(), 0.0)
    }
}

pub const CONTINUITY_DELTAS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
pub const SLOPE_TOL: f64 = 0.05;

fn relations_section(spec: &Spectrum, opts: &VerifyOptions) -> Section {
    let run = || -> Result<Section, Error> {
        let dim = spec.max_levels().map_or(opts.dim, |m| m.min(opts.dim));
        let ladder = build_ladder(spec, dim)?;
        let rep = build_rep(&ladder, dim)?;
        let rel = check_relations(&rep, spec, opts.relation_tol)?;
        let cas = casimir(&rep, spec)?;
        let cas_rel = cas.max_dev / cas.scale.max(1.0);
        let cas_value_dev = (cas.value + spec.alpha0()).abs() / cas.scale.max(1.0);
        let ok = rel.passed() && cas_rel <= opts.relation_tol && cas_value_dev <= opts.relation_tol;
        Ok(Section {
            name: "relations",
            status: pass_if(ok),
            lines: vec![
                format!("dim = {dim}"),
                format!("creation_residual = {:.3e}", rel.creation),
                format!("annihilation_residual = {:.3e}", rel.annihilation),
                format!("commutator_residual = {:.3e}", rel.commutator),
                format!("scale = {:.6e}", rel.scale),
                format!("casimir = {:.15e}", cas.value),
                format!("casimir_expected = {:.15e}", -spec.alpha0()),
                format!("casimir_max_dev = {:.3e}", cas.max_dev),
                format!("tol = {:.1e}", opts.relation_tol),
            ],
        })
    };
    run().unwrap_or_else(|e| failed_section("relations", &e))
}

/// Grid used by the closed-form versus series sweep.
pub fn normalization_grid(spec: &Spectrum, points: usize) -> Vec<f64> {
    let r = radius(spec);
    let x_max = if r.is_infinite() { 25.0 } else { 0.95 * r };
    (0..points).map(|i| x_max * i as f64 / (points - 1) as f64).collect()
}

fn normalization_section(spec: &Spectrum, opts: &VerifyOptions) -> Section {
    let run = || -> Result<Section, Error> {
        let grid = normalization_grid(spec, 50);
        if matches!(spec.family(), Family::Custom(_)) {
            let mut worst_tail: f64 = 0.0;
            for &x in &grid {
                worst_tail = worst_tail.max(normalization_series(spec, x, opts.normalization_tol)?.tail_bound);
            }
            return Ok(Section {
                name: "normalization",
                status: pass_if(worst_tail <= opts.normalization_tol),
                lines: vec![
                    "closed_form = \"none\"".into(),
                    format!("x_max = {}", grid[grid.len() - 1]),
                    format!("max_tail_bound = {worst_tail:.3e}"),
                ],
            });
        }
        let mut worst: f64 = 0.0;
        let mut at = 0.0;
        for &x in &grid {
            let closed = normalization(spec, x)?;
            let series = normalization_series(spec, x, 1e-14)?.value;
            let rel = (closed - series).abs() / closed.abs();
            if rel > worst {
                worst = rel;
                at = x;
            }
        }
        Ok(Section {
            name: "normalization",
            status: pass_if(worst <= opts.normalization_tol),
            lines: vec![
                format!("points = {}", grid.len()),
                format!("x_max = {}", grid[grid.len() - 1]),
                format!("max_rel_dev = {worst:.3e}"),
                format!("worst_x = {at}"),
                format!("tol = {:.1e}", opts.normalization_tol),
            ],
        })
    };
    run().unwrap_or_else(|e| failed_section("normalization", &e))
}

fn eigenvector_section(spec: &Spectrum) -> Section {
    let run = || -> Result<Section, Error> {
        let z = probe_label(spec);
        let (ladder, dim) = ladder_for(spec, z.norm_sqr(), DEFAULT_TAIL_TOL)?;
        let state = build_state_with_tol(&ladder, z, dim, DEFAULT_TAIL_TOL)?;
        let rep = build_rep(&ladder, dim)?;
        let residual = eigen_residual(&rep, &state)?;
        let bound = z.norm() * state.tail_bound().sqrt() + 1e-12;
        let norm_dev = (state.norm_sq_check() - 1.0).abs();
        Ok(Section {
            name: "eigenvector",
            status: pass_if(residual <= bound && norm_dev <= 1e-12),
            lines: vec![
                format!("z = {}", z.re),
                format!("dim = {dim}"),
                format!("tail_bound = {:.3e}", state.tail_bound()),
                format!("residual = {residual:.3e}"),
                format!("bound = {bound:.3e}"),
                format!("norm_dev = {norm_dev:.3e}"),
            ],
        })
    };
    run().unwrap_or_else(|e| failed_section("eigenvector", &e))
}

fn continuity_section(spec: &Spectrum) -> Section {
    let run = || -> Result<Section, Error> {
        let z = continuity_label(spec);
        let table = continuity_for(spec, z, &CONTINUITY_DELTAS, DEFAULT_TAIL_TOL)?;
        let slope = table.loglog_slope().unwrap_or(f64::NAN);
        let mut lines = vec![
            format!("z = {}", z.re),
            format!("slope = {slope:.6}"),
            format!("lipschitz = {:.6e}", table.lipschitz_estimate()),
            format!("monotone = {}", table.is_monotone()),
        ];
        for r in &table.rows {
            lines.push(format!(
                "row = {{ delta = {:.0e}, state_distance = {:.6e}, overlap_distance = {:.6e} }}",
                r.delta, r.state_distance, r.overlap_distance
            ));
        }
        Ok(Section {
            name: "continuity",
            status: pass_if((slope - 1.0).abs() <= SLOPE_TOL && table.is_monotone()),
            lines,
        })
    };
    run().unwrap_or_else(|e| failed_section("continuity", &e))
}

fn completeness_section(spec: &Spectrum, opts: &VerifyOptions) -> Section {
    if let Err(Error::Unsupported(why)) = WeightFunction::for_spectrum(spec) {
        return Section {
            name: "completeness",
            status: SectionStatus::Skipped,
            lines: vec![format!("reason = \"{why}\"")],
        };
    }
    match verify_completeness(spec, opts.n_max, opts.tol, &opts.quad) {
        Ok(r) => {
            let mut lines = vec![
                format!("n_checked = {}", r.n_checked),
                format!("calibration = {:.15e}", r.calibration),
                format!("max_abs_dev = {:.3e}", r.max_abs_dev),
                format!("tol = {:.1e}", r.tol),
            ];
            for (n, (m, e)) in r.moments.iter().zip(&r.errors).enumerate() {
                lines.push(format!("moment = {{ n = {n}, value = {m:.15e}, error = {e:.2e} }}"));
            }
            Section {
                name: "completeness",
                status: pass_if(r.passed()),
                lines,
            }
        }
        Err(e) => failed_section("completeness", &e),
    }
}

fn mellin_section(opts: &VerifyOptions) -> Section {
    let mut lines = Vec::new();
    let mut all_derived = true;
    for n in 0..=10 {
        match mellin_oracle(n, &opts.quad) {
            Ok(m) => {
                all_derived &= m.verdict == MellinMatch::Derived && m.relative_error() <= 1e-8;
                lines.push(format!(
                    "mellin = {{ n = {n}, quadrature = {:.12e}, stated = {:.6e}, derived = {:.6e}, matches = \"{:?}\" }}",
                    m.value, m.stated, m.derived, m.verdict
                ));
            }
            Err(e) => return failed_section("mellin", &e),
        }
    }
    Section {
        name: "mellin",
        status: pass_if(all_derived),
        lines,
    }
}

pub fn cmd_verify(spec: &Spectrum, opts: &VerifyOptions) -> Result<VerifyReport, Error> {
    if opts.n_max < 4 {
        return Err(Error::Config(format!("--nmax must be >= 4, got {}", opts.n_max)));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("--tol must be > 0, got {}", opts.tol)));
    }
    opts.quad.validate()?;
    let mut sections = vec![
        relations_section(spec, opts),
        normalization_section(spec, opts),
        eigenvector_section(spec),
        continuity_section(spec),
        completeness_section(spec, opts),
    ];
    if matches!(spec.family(), Family::SquareWell) {
        sections.push(mellin_section(opts));
    }
    Ok(VerifyReport {
        spectrum: spec.label(),
        sections,
    })
}

/// Writes the figure CSV to `out`; returns the number of rows.
pub fn cmd_figure(which: u32, out: &Path, points: usize, quad: &QuadConfig) -> Result<usize, Error> {
    let fig = Figure::from_number(which)?;
    let data = figure_data(fig, points, quad)?;
    std::fs::write(out, data.to_csv())
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", out.display())))?;
    Ok(data.points.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_label("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_label(" 1 - 2i ").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_label("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_label("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_label("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_label("1e-3+1e-3i").unwrap(), c(1e-3, 1e-3));
        assert_eq!(parse_label("-1-i").unwrap(), c(-1.0, -1.0));
        let p = parse_label("2@0").unwrap();
        assert_eq!(p, c(2.0, 0.0));
        for bad in ["", "abc", "1+2j", "1@", "-1@0", "nan"] {
            assert!(parse_label(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn catalog_names() {
        assert_eq!(resolve_spectrum("type1").unwrap().0, Spectrum::power_class(1.0).unwrap());
        assert_eq!(resolve_spectrum("power-class:5").unwrap().0, Spectrum::power_class(5.0).unwrap());
        assert_eq!(resolve_spectrum("q-deformed").unwrap().0, Spectrum::q_deformed(0.5).unwrap());
        assert!(resolve_spectrum("harmonic:2").is_err());
        assert!(resolve_spectrum("q-deformed:x").is_err());
        assert!(resolve_spectrum("no-such-thing").is_err());
    }

    #[test]
    fn list_rows() {
        let t = cmd_list();
        assert!(t.contains("f(x)=x+2√x+1") && t.contains("α₀=1"));
        assert!(t.lines().any(|l| l.starts_with("harmonic") && l.contains("w=1/π")));
        assert!(t.lines().any(|l| l.starts_with("q-deformed") && l.contains("completeness: q=1 only")));
    }

    #[test]
    fn state_examples() {
        let out = cmd_state(&Spectrum::harmonic(), Complex64::new(0.0, 0.0), None).unwrap();
        let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(rows, vec!["0,1.00000000000000000e0,1.00000000000000000e0"]);
        let out = cmd_state(&Spectrum::power_class(1.0).unwrap(), Complex64::new(0.5, 0.0), None).unwrap();
        assert!(out.contains("# N2_closed = 5.62500000000000000e-1"));
    }

    #[test]
    fn error_statuses() {
        assert_eq!(error_status(&Error::Config("x".into())), Status::Usage);
        assert_eq!(
            error_status(&Error::Accuracy { what: "q", estimate: 1.0 }),
            Status::Accuracy
        );
    }
}

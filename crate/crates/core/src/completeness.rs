//! Resolution of unity ∫d²z w(|z|²)|z⟩⟨z| = 1 through its diagonal moment
//! conditions
//!
//!   M_n = π ∫ w(x) N²(x) xⁿ dx / (N_{n−1}!)² = 1.
//!
//! Quadrature always sees the product w·N² with the family's singular factors
//! cancelled analytically, written in terms of (x, ln x) so that the
//! logarithmic endpoint at 0 is resolved by the x = U e^{−u} map.

use crate::coherent::{normalization, normalization_series, DEFAULT_TAIL_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{exp_sinh, log_substituted, square_substituted, QuadConfig, QuadResult};
use crate::specfun::{bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, log_factorial, log_gamma};
use crate::spectra::{build_ladder, CustomWeight, Family, FamilyTag, Spectrum};
use std::f64::consts::PI;
use std::fmt;

/// Above this argument the Bessel products use exponentially scaled values.
const BESSEL_SCALED_FROM: f64 = 500.0;

#[derive(Debug, Clone, PartialEq)]
enum Formula {
    Constant,
    PowerClass { alpha: f64, log_gamma: f64 },
    SquareWell,
    Custom(CustomWeight),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    family: FamilyTag,
    formula: Formula,
    calibration: f64,
    support_upper: f64,
}

impl WeightFunction {
    /// The closed-form weight for `spec` with calibration 1.
    pub fn for_spectrum(spec: &Spectrum) -> Result<Self> {
        let (formula, support_upper) = match spec.family() {
            Family::Harmonic => (Formula::Constant, f64::INFINITY),
            Family::QDeformed { q } if *q == 1.0 => (Formula::Constant, f64::INFINITY),
            Family::QDeformed { q } => {
                return Err(Error::Unsupported(format!(
                    "no closed-form weight for the q-deformed oscillator with q = {q} < 1 \
                     (completeness: q=1 only)"
                )))
            }
            Family::PowerClass { alpha } => (
                Formula::PowerClass {
                    alpha: *alpha,
                    log_gamma: log_gamma(*alpha)?,
                },
                1.0,
            ),
            Family::SquareWell => (Formula::SquareWell, f64::INFINITY),
            Family::Custom(c) => match &c.weight {
                Some(w) => (Formula::Custom(w.clone()), w.support_upper),
                None => {
                    return Err(Error::Unsupported(format!(
                        "custom spectrum '{}' has no weight; moment checks need one in its config",
                        c.name
                    )))
                }
            },
        };
        Ok(WeightFunction {
            family: spec.tag(),
            formula,
            calibration: 1.0,
            support_upper,
        })
    }

    pub fn with_calibration(mut self, calibration: f64) -> Self {
        self.calibration = calibration;
        self
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn calibration(&self) -> f64 {
        self.calibration
    }

    pub fn support_upper(&self) -> f64 {
        self.support_upper
    }

    /// calibration · w(x).
    pub fn eval(&self, spec: &Spectrum, x: f64) -> Result<f64> {
        Ok(self.calibration * self.uncalibrated(spec, x)?)
    }

    fn check_support(&self, x: f64) -> Result<()> {
        let inside = x >= 0.0 && (x < self.support_upper || self.support_upper.is_infinite() && x.is_finite());
        if inside {
            Ok(())
        } else {
            Err(Error::domain(
                "weight",
                format!("x = {x} outside the support [0, {})", self.support_upper),
            ))
        }
    }

    fn uncalibrated(&self, spec: &Spectrum, x: f64) -> Result<f64> {
        self.check_support(x)?;
        match &self.formula {
            Formula::Constant => Ok(1.0 / PI),
            Formula::PowerClass { alpha, log_gamma } => {
                if x == 0.0 {
                    return if *alpha == 1.0 {
                        Ok(1.0 / PI)
                    } else {
                        Err(Error::domain("weight", "(−ln x)^(α−1) diverges at x = 0"))
                    };
                }
                let density = power_density(*alpha, *log_gamma, x.ln());
                Ok(density / normalization(spec, x)?)
            }
            Formula::SquareWell => {
                if x == 0.0 {
                    // K₂(y)I₂(y) → 1/4 as y → 0
                    return Ok(1.0 / PI);
                }
                let y = 2.0 * x.sqrt();
                let prod = if y <= BESSEL_SCALED_FROM {
                    bessel_k(2, y)? * bessel_i(2, y)?
                } else {
                    bessel_k_scaled(2, y)? * bessel_i_scaled(2, y)?
                };
                Ok(4.0 / PI * prod)
            }
            Formula::Custom(w) => {
                let v = w.expr.eval(x)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::domain("weight", format!("custom weight is not finite at x = {x}")))
                }
            }
        }
    }

    /// w(x)·N²(x) without calibration, singular factors cancelled.
    fn density(&self, spec: &Spectrum, x: f64, ln_x: f64) -> Result<f64> {
        match &self.formula {
            Formula::Constant => Ok((-x).exp() / PI),
            Formula::PowerClass { alpha, log_gamma } => Ok(power_density(*alpha, *log_gamma, ln_x)),
            Formula::SquareWell => {
                if x == 0.0 {
                    return Ok(0.0);
                }
                let y = 2.0 * x.sqrt();
                let k = if y <= BESSEL_SCALED_FROM {
                    bessel_k(2, y)?
                } else {
                    bessel_k_scaled(2, y)? * (-y).exp()
                };
                Ok(2.0 / PI * x * k)
            }
            Formula::Custom(w) => {
                if x == 0.0 {
                    return Ok(0.0);
                }
                let n_sq = normalization_series(spec, x, DEFAULT_TAIL_TOL)?.value;
                Ok(w.expr.eval(x)? * n_sq)
            }
        }
    }
}

/// (−ln x)^{α−1} / (π Γ(α)).
fn power_density(alpha: f64, log_gamma: f64, ln_x: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0 / PI;
    }
    let m = -ln_x;
    if m <= 0.0 {
        return 0.0;
    }
    ((alpha - 1.0) * m.ln() - log_gamma).exp() / PI
}

/// The closed-form weight of `spec` at `x` with calibration 1.
pub fn weight(spec: &Spectrum, x: f64) -> Result<f64> {
    WeightFunction::for_spectrum(spec)?.eval(spec, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue {
    pub value: f64,
    /// A-posteriori quadrature error, in the units of `value`.
    pub error: f64,
    pub nodes: usize,
}

/// M_n = π·calibration·∫ w N² xⁿ dx / (N_{n−1}!)².
pub fn moment(spec: &Spectrum, weight: &WeightFunction, n: usize, cfg: &QuadConfig) -> Result<MomentValue> {
    let ladder = build_ladder(spec, n + 1)?;
    let log_norm = 2.0 * ladder.log_nfactorial(n)?;
    let nf = n as f64;
    let integrand = |x: f64, ln_x: f64| -> f64 {
        if x == 0.0 && n > 0 {
            return 0.0;
        }
        let scale = if n == 0 { (-log_norm).exp() } else { (nf * ln_x - log_norm).exp() };
        if scale == 0.0 {
            return 0.0;
        }
        // quadrature nodes lie inside the support where the density is defined
        weight.density(spec, x, ln_x).unwrap_or(f64::NAN) * scale
    };
    let r: QuadResult = match &weight.formula {
        Formula::SquareWell => square_substituted(|x| integrand(x, x.ln()), cfg)?,
        _ if weight.support_upper.is_finite() => log_substituted(integrand, weight.support_upper, cfg)?,
        _ => exp_sinh(|x| integrand(x, x.ln()), 0.0, cfg)?,
    };
    if !r.value.is_finite() {
        return Err(Error::Accuracy {
            what: "moment integrand",
            estimate: f64::INFINITY,
        });
    }
    let factor = PI * weight.calibration;
    Ok(MomentValue {
        value: factor * r.value,
        error: factor * r.error,
        nodes: r.nodes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub family: FamilyTag,
    pub n_checked: usize,
    pub moments: Vec<f64>,
    pub errors: Vec<f64>,
    pub max_abs_dev: f64,
    pub calibration: f64,
    pub tol: f64,
}

impl MomentReport {
    pub fn passed(&self) -> bool {
        self.max_abs_dev <= self.tol
    }
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family = {}", self.family)?;
        writeln!(f, "n_checked = {}", self.n_checked)?;
        writeln!(f, "calibration = {:.15e}", self.calibration)?;
        writeln!(f, "max_abs_dev = {:.3e}", self.max_abs_dev)?;
        writeln!(f, "tol = {:.3e}", self.tol)?;
        writeln!(f, "passed = {}", self.passed())?;
        for (n, (m, e)) in self.moments.iter().zip(&self.errors).enumerate() {
            writeln!(f, "M[{n}] = {m:.15e}  err = {e:.2e}")?;
        }
        Ok(())
    }
}

/// Calibrates on M₀ and reports max |M_n − 1| for n < `n_max`.
pub fn verify_completeness(spec: &Spectrum, n_max: usize, tol: f64, cfg: &QuadConfig) -> Result<MomentReport> {
    if n_max < 4 {
        return Err(Error::Config(format!("n_max must be >= 4, got {n_max}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be > 0, got {tol}")));
    }
    cfg.validate()?;
    let stated = WeightFunction::for_spectrum(spec)?;
    let m0 = moment(spec, &stated, 0, cfg)?;
    if !(m0.value > 0.0) {
        return Err(Error::Accuracy {
            what: "zeroth moment",
            estimate: m0.value,
        });
    }
    let calibration = 1.0 / m0.value;
    let w = stated.with_calibration(calibration);
    let mut moments = Vec::with_capacity(n_max);
    let mut errors = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let m = moment(spec, &w, n, cfg)?;
        moments.push(m.value);
        errors.push(m.error);
    }
    let max_abs_dev = moments.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    Ok(MomentReport {
        family: spec.tag(),
        n_checked: n_max,
        moments,
        errors,
        max_abs_dev,
        calibration,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MellinMatch {
    /// ½ n! (n+1)!
    Stated,
    /// ½ Γ(n+1) Γ(n+3) = ½ n! (n+2)!
    Derived,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinReport {
    pub n: u32,
    pub value: f64,
    pub error: f64,
    pub stated: f64,
    pub derived: f64,
    pub verdict: MellinMatch,
}

impl MellinReport {
    pub fn relative_error(&self) -> f64 {
        self.error / self.value.abs()
    }
}

/// Relative distance at which the quadrature value is said to match a candidate.
pub const MELLIN_MATCH_TOL: f64 = 1e-8;

/// ∫_0^∞ K₂(2√x) x^{n+1} dx by quadrature, compared with ½n!(n+1)! and ½n!(n+2)!.
pub fn mellin_oracle(n: u32, cfg: &QuadConfig) -> Result<MellinReport> {
    if n > 20 {
        return Err(Error::Range { index: n as usize, max: 20 });
    }
    // scale by the derived value so the integrand is O(1) near its peak
    let log_derived = log_factorial(n as u64) + log_factorial(n as u64 + 2) - 2f64.ln();
    let p = n as f64 + 1.0;
    let g = |x: f64| -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let y = 2.0 * x.sqrt();
        let (k, log_e) = if y <= BESSEL_SCALED_FROM {
            (bessel_k(2, y), 0.0)
        } else {
            (bessel_k_scaled(2, y), -y)
        };
        match k {
            Ok(k) if k > 0.0 => (k.ln() + log_e + p * x.ln() - log_derived).exp(),
            Ok(_) => 0.0,
            Err(_) => f64::NAN,
        }
    };
    let r = square_substituted(g, cfg)?;
    let scale = log_derived.exp();
    let value = r.value * scale;
    let error = r.error * scale;
    let derived = scale;
    let stated = (log_factorial(n as u64) + log_factorial(n as u64 + 1) - 2f64.ln()).exp();
    let close = |c: f64| (value - c).abs() <= MELLIN_MATCH_TOL * c;
    let verdict = if close(derived) {
        MellinMatch::Derived
    } else if close(stated) {
        MellinMatch::Stated
    } else {
        MellinMatch::Neither
    };
    Ok(MellinReport {
        n,
        value,
        error,
        stated,
        derived,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let h = Spectrum::harmonic();
        assert_eq!(weight(&h, 3.7).unwrap(), 1.0 / PI);
        let p3 = Spectrum::power_class(3.0).unwrap();
        let l = 0.5f64.ln();
        let expect = l * l / (2.0 * PI) * (1.0 + 2.0 + 0.25) / 0.5f64.powi(4);
        let got = weight(&p3, 0.5).unwrap();
        assert!((got - expect).abs() <= 1e-14 * expect);
        // K₂(2) = 0.253759754566055..., I₂(2) = 0.688948447698738...
        let sw = weight(&Spectrum::square_well(), 1.0).unwrap();
        let expect = 4.0 / PI * 0.253_759_754_566_055_4 * 0.688_948_447_698_738_2;
        assert!((sw - expect).abs() <= 1e-14 * expect);
    }

    #[test]
    fn limits_at_origin() {
        assert_eq!(weight(&Spectrum::power_class(1.0).unwrap(), 0.0).unwrap(), 1.0 / PI);
        assert!(weight(&Spectrum::power_class(2.0).unwrap(), 0.0).is_err());
        assert_eq!(weight(&Spectrum::square_well(), 0.0).unwrap(), 1.0 / PI);
        assert!(weight(&Spectrum::power_class(2.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn q_deformed_support() {
        assert!(matches!(
            weight(&Spectrum::q_deformed(0.7).unwrap(), 0.5),
            Err(Error::Unsupported(_))
        ));
        assert_eq!(weight(&Spectrum::q_deformed(1.0).unwrap(), 0.5).unwrap(), 1.0 / PI);
    }

    #[test]
    fn type1_moment_is_exact_identity() {
        let s = Spectrum::power_class(1.0).unwrap();
        let w = WeightFunction::for_spectrum(&s).unwrap();
        let m = moment(&s, &w, 5, &QuadConfig::default()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn type2_zeroth_moment() {
        let s = Spectrum::power_class(2.0).unwrap();
        let w = WeightFunction::for_spectrum(&s).unwrap();
        let m = moment(&s, &w, 0, &QuadConfig::default()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn verify_rejects_small_nmax() {
        let s = Spectrum::harmonic();
        assert!(matches!(
            verify_completeness(&s, 3, 1e-8, &QuadConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn calibration_is_reported() {
        let s = Spectrum::square_well();
        let r = verify_completeness(&s, 6, 1e-8, &QuadConfig::default()).unwrap();
        assert!((r.calibration - 0.5).abs() < 1e-10);
        assert!(r.passed(), "{r}");
    }
}

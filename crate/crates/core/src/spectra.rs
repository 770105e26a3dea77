//! Spectrum families ε_{n+1} = f(ε_n) and the ladder data of their
//! lowest-weight representation:
//!
//! α_n = f^(n)(α₀),  N_n² = α_{n+1} − α₀,  log N_{n−1}! = Σ_{k<n} ln N_k.
//!
//! Factorial-like products live in log space throughout; N_{n−1}! overflows for
//! the square well and underflows for the power class well before n = 200.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::specfun::q_number;
use std::fmt;

/// Relative tolerance of the closed-form-vs-f one-step consistency check.
pub const RECURRENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Harmonic,
    QDeformed,
    PowerClass,
    SquareWell,
    Custom,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::Harmonic => "harmonic",
            FamilyTag::QDeformed => "q-deformed",
            FamilyTag::PowerClass => "power-class",
            FamilyTag::SquareWell => "square-well",
            FamilyTag::Custom => "custom",
        })
    }
}

/// How a custom spectrum is supplied.
#[derive(Debug, Clone, PartialEq)]
pub enum CustomLevels {
    /// Explicit ε_0, ε_1, …; f is only known on the table.
    Table(Vec<f64>),
    /// Characteristic function; levels by iteration from α₀.
    Function(Expr),
}

/// Weight function supplied with a custom spectrum, for moment checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomWeight {
    pub expr: Expr,
    /// Upper end of the support in x = |z|²; `f64::INFINITY` for [0, ∞).
    pub support_upper: f64,
    /// Declared local exponents (a, b): w ~ x^a near 0 and w ~ (U − x)^b near a
    /// finite upper end U.
    pub endpoint_exponents: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CustomSpectrum {
    pub name: String,
    pub levels: CustomLevels,
    pub weight: Option<CustomWeight>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Harmonic,
    QDeformed { q: f64 },
    PowerClass { alpha: f64 },
    SquareWell,
    Custom(CustomSpectrum),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    family: Family,
    alpha0: f64,
}

impl Spectrum {
    pub fn harmonic() -> Self {
        Spectrum {
            family: Family::Harmonic,
            alpha0: 0.0,
        }
    }

    /// Deformed oscillator f(x) = qx + 1 with α₀ = 0.
    pub fn q_deformed(q: f64) -> Result<Self> {
        Self::q_deformed_with_alpha0(q, 0.0)
    }

    pub fn q_deformed_with_alpha0(q: f64, alpha0: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Config(format!("q-deformed: q = {q} not in (0, 1]")));
        }
        if !alpha0.is_finite() {
            return Err(Error::Config("q-deformed: alpha0 must be finite".into()));
        }
        Ok(Spectrum {
            family: Family::QDeformed { q },
            alpha0,
        })
    }

    /// ε_n = (1 − 1/(n+1))^α, α >= 1. α = 1 and α = 2 are the type-1 and
    /// type-2 spectra.
    pub fn power_class(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::Config(format!("power-class: alpha = {alpha} must be >= 1")));
        }
        Ok(Spectrum {
            family: Family::PowerClass { alpha },
            alpha0: 0.0,
        })
    }

    /// ε_n = (n+1)², the infinite square well in units of its ground level.
    pub fn square_well() -> Self {
        Spectrum {
            family: Family::SquareWell,
            alpha0: 1.0,
        }
    }

    pub fn custom_table(name: impl Into<String>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::Config("custom: levels table needs at least two entries".into()));
        }
        if levels.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("custom: levels must be finite".into()));
        }
        for (k, w) in levels.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NotLadderRepresentable {
                    index: k,
                    value: w[1] - levels[0],
                });
            }
        }
        let alpha0 = levels[0];
        Ok(Spectrum {
            family: Family::Custom(CustomSpectrum {
                name: name.into(),
                levels: CustomLevels::Table(levels),
                weight: None,
            }),
            alpha0,
        })
    }

    pub fn custom_function(name: impl Into<String>, f: Expr, alpha0: f64) -> Result<Self> {
        if !alpha0.is_finite() {
            return Err(Error::Config("custom: alpha0 must be finite".into()));
        }
        Ok(Spectrum {
            family: Family::Custom(CustomSpectrum {
                name: name.into(),
                levels: CustomLevels::Function(f),
                weight: None,
            }),
            alpha0,
        })
    }

    /// Attach a weight to a custom spectrum; catalog families carry their own.
    pub fn with_custom_weight(mut self, weight: CustomWeight) -> Result<Self> {
        match &mut self.family {
            Family::Custom(c) => {
                c.weight = Some(weight);
                Ok(self)
            }
            _ => Err(Error::Config(
                "weights can only be supplied for custom spectra".into(),
            )),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tag(&self) -> FamilyTag {
        match self.family {
            Family::Harmonic => FamilyTag::Harmonic,
            Family::QDeformed { .. } => FamilyTag::QDeformed,
            Family::PowerClass { .. } => FamilyTag::PowerClass,
            Family::SquareWell => FamilyTag::SquareWell,
            Family::Custom(_) => FamilyTag::Custom,
        }
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Power-class exponent when it is an integer.
    pub fn integer_alpha(&self) -> Option<u32> {
        match self.family {
            Family::PowerClass { alpha } if alpha == alpha.round() && alpha <= u32::MAX as f64 => {
                Some(alpha as u32)
            }
            _ => None,
        }
    }

    /// Short label including parameters, e.g. `power-class alpha=3`.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Harmonic => "harmonic".into(),
            Family::QDeformed { q } => {
                if self.alpha0 == 0.0 {
                    format!("q-deformed q={q}")
                } else {
                    format!("q-deformed q={q} alpha0={}", self.alpha0)
                }
            }
            Family::PowerClass { alpha } => format!("power-class alpha={alpha}"),
            Family::SquareWell => "square-well".into(),
            Family::Custom(c) => format!("custom {}", c.name),
        }
    }

    /// Parameters as `key=value` pairs joined by `;` (empty when none).
    pub fn params_string(&self) -> String {
        match &self.family {
            Family::QDeformed { q } => format!("q={q};alpha0={}", self.alpha0),
            Family::PowerClass { alpha } => format!("alpha={alpha}"),
            Family::Custom(c) => format!("name={}", c.name),
            _ => String::new(),
        }
    }

    /// Human-readable characteristic function.
    pub fn f_description(&self) -> String {
        match &self.family {
            Family::Harmonic => "f(x)=x+1".into(),
            Family::QDeformed { q } => format!("f(x)={q}x+1"),
            Family::PowerClass { alpha } if *alpha == 1.0 => "f(x)=1/(2-x)".into(),
            Family::PowerClass { alpha } if *alpha == 2.0 => "f(x)=(1/(2-√x))^2".into(),
            Family::PowerClass { alpha } => format!("f(x)=(1/(2-x^(1/{alpha})))^{alpha}"),
            Family::SquareWell => "f(x)=x+2√x+1".into(),
            Family::Custom(c) => match &c.levels {
                CustomLevels::Table(t) => format!("table of {} levels", t.len()),
                CustomLevels::Function(e) => format!("f(x)={e}"),
            },
        }
    }

    /// The characteristic function f.
    pub fn eval_f(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain("eval_f", format!("non-finite x = {x}")));
        }
        match &self.family {
            Family::Harmonic => Ok(x + 1.0),
            Family::QDeformed { q } => Ok(q * x + 1.0),
            Family::PowerClass { alpha } => power_class_f(*alpha, x),
            Family::SquareWell => {
                if x < 0.0 {
                    return Err(Error::domain("eval_f", format!("square well needs x >= 0, got {x}")));
                }
                Ok(x + 2.0 * x.sqrt() + 1.0)
            }
            Family::Custom(c) => match &c.levels {
                CustomLevels::Function(e) => e.eval(x),
                CustomLevels::Table(t) => {
                    let tol = 1e-12 * x.abs().max(1.0);
                    t.windows(2)
                        .find(|w| (w[0] - x).abs() <= tol)
                        .map(|w| w[1])
                        .ok_or_else(|| {
                            Error::domain("eval_f", format!("x = {x} is not a tabulated level"))
                        })
                }
            },
        }
    }

    /// Closed-form ε_n = α_n when the family has one.
    pub fn closed_level(&self, n: usize) -> Option<f64> {
        let nf = n as f64;
        match &self.family {
            Family::Harmonic => Some(self.alpha0 + nf),
            Family::QDeformed { q } => {
                let qn = q.powi(n as i32);
                Some(qn * self.alpha0 + q_number(n as u32, *q).ok()?)
            }
            Family::PowerClass { alpha } => {
                let base = nf / (nf + 1.0);
                Some(if *alpha == 1.0 {
                    base
                } else if *alpha == 2.0 {
                    base * base
                } else if *alpha == alpha.round() {
                    base.powi(*alpha as i32)
                } else {
                    base.powf(*alpha)
                })
            }
            Family::SquareWell => Some((nf + 1.0) * (nf + 1.0)),
            Family::Custom(_) => None,
        }
    }

    /// Largest n_max a ladder can be built for (table-defined spectra only).
    pub fn max_levels(&self) -> Option<usize> {
        match &self.family {
            Family::Custom(CustomSpectrum {
                levels: CustomLevels::Table(t),
                ..
            }) => Some(t.len() - 1),
            _ => None,
        }
    }

    pub fn custom_weight(&self) -> Option<&CustomWeight> {
        match &self.family {
            Family::Custom(c) => c.weight.as_ref(),
            _ => None,
        }
    }
}

fn power_class_f(alpha: f64, x: f64) -> Result<f64> {
    if alpha == 1.0 {
        if !(x < 2.0) {
            return Err(Error::domain("eval_f", format!("1/(2-x) needs x < 2, got {x}")));
        }
        return Ok(1.0 / (2.0 - x));
    }
    if x < 0.0 {
        return Err(Error::domain(
            "eval_f",
            format!("x^(1/{alpha}) needs x >= 0, got {x}"),
        ));
    }
    let root = if alpha == 2.0 { x.sqrt() } else { x.powf(1.0 / alpha) };
    if !(root < 2.0) {
        return Err(Error::domain(
            "eval_f",
            format!("2 - x^(1/{alpha}) must be positive, x = {x}"),
        ));
    }
    let inner = 1.0 / (2.0 - root);
    Ok(if alpha == 2.0 {
        inner * inner
    } else if alpha == alpha.round() {
        inner.powi(alpha as i32)
    } else {
        inner.powf(alpha)
    })
}

/// Precomputed representation data up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderData {
    alpha: Vec<f64>,
    n_coeff: Vec<f64>,
    n_coeff_sq: Vec<f64>,
    log_nfact: Vec<f64>,
}

impl LadderData {
    pub fn n_max(&self) -> usize {
        self.n_coeff.len()
    }

    /// α_0 … α_{n_max}.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// N_0 … N_{n_max−1}.
    pub fn n_coeff(&self) -> &[f64] {
        &self.n_coeff
    }

    /// N_k² = α_{k+1} − α₀, stored exactly as computed.
    pub fn n_coeff_sq(&self) -> &[f64] {
        &self.n_coeff_sq
    }

    /// log N_{n−1}! for n = 0 … n_max (entry 0 is 0).
    pub fn log_nfact(&self) -> &[f64] {
        &self.log_nfact
    }

    /// log(N_{n−1}!), with N_{−1}! = 1.
    pub fn log_nfactorial(&self, n: usize) -> Result<f64> {
        self.log_nfact.get(n).copied().ok_or(Error::Range {
            index: n,
            max: self.n_max(),
        })
    }
}

/// Ladder data α_n, N_n, log N_{n−1}! for n up to `n_max`.
///
/// Families with a closed-form spectrum use it and are checked one step at a
/// time against f; config-defined functions are iterated.
pub fn build_ladder(spec: &Spectrum, n_max: usize) -> Result<LadderData> {
    if n_max < 1 {
        return Err(Error::Range { index: n_max, max: 1 });
    }
    let mut alpha = Vec::with_capacity(n_max + 1);
    match &spec.family {
        Family::Custom(c) => match &c.levels {
            CustomLevels::Table(t) => {
                if n_max + 1 > t.len() {
                    return Err(Error::Range {
                        index: n_max,
                        max: t.len() - 1,
                    });
                }
                alpha.extend_from_slice(&t[..=n_max]);
            }
            CustomLevels::Function(e) => {
                let mut a = spec.alpha0;
                alpha.push(a);
                for _ in 0..n_max {
                    a = e.eval(a)?;
                    alpha.push(a);
                }
            }
        },
        Family::QDeformed { .. } => {
            // iterating f keeps the levels ordered to the last bit; the closed
            // form can step down where its evaluation strategy changes
            let mut a = spec.alpha0;
            alpha.push(a);
            for n in 0..n_max {
                a = spec.eval_f(a)?;
                let expected = spec.closed_level(n + 1).expect("q-deformed has a closed form");
                if (a - expected).abs() > RECURRENCE_TOL * expected.abs().max(1.0) {
                    return Err(Error::Recurrence {
                        index: n,
                        mapped: a,
                        expected,
                    });
                }
                alpha.push(a);
            }
        }
        _ => {
            for n in 0..=n_max {
                alpha.push(spec.closed_level(n).expect("catalog families have closed forms"));
            }
            for n in 0..n_max {
                let mapped = spec.eval_f(alpha[n])?;
                let expected = alpha[n + 1];
                if (mapped - expected).abs() > RECURRENCE_TOL * expected.abs().max(1.0) {
                    return Err(Error::Recurrence {
                        index: n,
                        mapped,
                        expected,
                    });
                }
            }
        }
    }

    let a0 = alpha[0];
    let mut n_coeff = Vec::with_capacity(n_max);
    let mut n_coeff_sq = Vec::with_capacity(n_max);
    let mut log_nfact = Vec::with_capacity(n_max + 1);
    log_nfact.push(0.0);
    let mut acc = 0.0;
    for k in 0..n_max {
        let sq = alpha[k + 1] - a0;
        if !(sq > 0.0) || !sq.is_finite() {
            return Err(Error::NotLadderRepresentable { index: k, value: sq });
        }
        if n_coeff_sq.last().is_some_and(|&prev| sq < prev) {
            return Err(Error::Unsupported(format!(
                "levels are not increasing at n = {}; only monotone spectra are supported",
                k + 1
            )));
        }
        n_coeff_sq.push(sq);
        n_coeff.push(sq.sqrt());
        acc += 0.5 * sq.ln();
        log_nfact.push(acc);
    }
    Ok(LadderData {
        alpha,
        n_coeff,
        n_coeff_sq,
        log_nfact,
    })
}

/// Free-function form of [`LadderData::log_nfactorial`].
pub fn log_nfactorial(ladder: &LadderData, n: usize) -> Result<f64> {
    ladder.log_nfactorial(n)
}

/// Free-function form of [`Spectrum::eval_f`].
pub fn eval_f(spec: &Spectrum, x: f64) -> Result<f64> {
    spec.eval_f(x)
}

//! TOML spectrum configuration.
//!
//! ```toml
//! family = "custom"            # harmonic | q-deformed | power-class | type1 | type2 | square-well | custom
//! name = "my-system"           # custom only
//! alpha0 = 0.0                 # optional; fixed for power-class and square-well
//! f_expr = "1 / (2 - x)"       # custom: characteristic function, or
//! # levels = [0.0, 0.5, ...]   # custom: explicit level table
//!
//! [params]
//! q = 0.5                      # q-deformed
//! alpha = 3.0                  # power-class
//!
//! [weight]                     # custom only, enables moment checks
//! expr = "1"
//! support_upper = 1.0          # inf for [0, ∞)
//! endpoint_exponents = [0.0, 0.0]
//!
//! [quadrature]
//! rel_tol = 1e-12
//! abs_tol = 1e-10
//! max_nodes = 16384
//! ```

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quadrature::QuadConfig;
use crate::spectra::{CustomWeight, Spectrum};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    q: Option<f64>,
    alpha: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightSection {
    expr: String,
    support_upper: f64,
    #[serde(default)]
    endpoint_exponents: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: String,
    name: Option<String>,
    alpha0: Option<f64>,
    #[serde(default)]
    params: Params,
    levels: Option<Vec<f64>>,
    f_expr: Option<String>,
    weight: Option<WeightSection>,
    quadrature: Option<QuadConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    pub spectrum: Spectrum,
    /// Present when the file carried a `[quadrature]` section.
    pub quadrature: Option<QuadConfig>,
}

pub fn load(path: &Path) -> Result<SpectrumConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<SpectrumConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let family = raw.family.trim().to_ascii_lowercase();
    let custom = family == "custom";
    if !custom {
        for (present, key) in [
            (raw.levels.is_some(), "levels"),
            (raw.f_expr.is_some(), "f_expr"),
            (raw.weight.is_some(), "[weight]"),
            (raw.name.is_some(), "name"),
        ] {
            if present {
                return Err(Error::Config(format!("`{key}` is only valid for family = \"custom\"")));
            }
        }
    }
    let need = |v: Option<f64>, key: &str| {
        v.ok_or_else(|| Error::Config(format!("family {family} requires params.{key}")))
    };
    let reject = |v: Option<f64>, key: &str| match v {
        Some(_) => Err(Error::Config(format!("params.{key} is not used by family {family}"))),
        None => Ok(()),
    };
    let fixed_alpha0 = |spec: Spectrum| -> Result<Spectrum> {
        match raw.alpha0 {
            Some(a) if a != spec.alpha0() => Err(Error::Config(format!(
                "family {family} has alpha0 = {}; config gives {a}",
                spec.alpha0()
            ))),
            _ => Ok(spec),
        }
    };
    let spectrum = match family.as_str() {
        "harmonic" => {
            reject(raw.params.q, "q")?;
            reject(raw.params.alpha, "alpha")?;
            fixed_alpha0(Spectrum::harmonic())?
        }
        "q-deformed" => {
            reject(raw.params.alpha, "alpha")?;
            Spectrum::q_deformed_with_alpha0(need(raw.params.q, "q")?, raw.alpha0.unwrap_or(0.0))?
        }
        "power-class" => {
            reject(raw.params.q, "q")?;
            fixed_alpha0(Spectrum::power_class(need(raw.params.alpha, "alpha")?)?)?
        }
        "type1" | "type2" => {
            reject(raw.params.q, "q")?;
            reject(raw.params.alpha, "alpha")?;
            let alpha = if family == "type1" { 1.0 } else { 2.0 };
            fixed_alpha0(Spectrum::power_class(alpha)?)?
        }
        "square-well" => {
            reject(raw.params.q, "q")?;
            reject(raw.params.alpha, "alpha")?;
            fixed_alpha0(Spectrum::square_well())?
        }
        "custom" => custom_spectrum(&raw)?,
        other => return Err(Error::Config(format!("unknown family '{other}'"))),
    };
    if let Some(q) = &raw.quadrature {
        q.validate()?;
    }
    Ok(SpectrumConfig {
        spectrum,
        quadrature: raw.quadrature,
    })
}

fn custom_spectrum(raw: &RawConfig) -> Result<Spectrum> {
    if raw.params.q.is_some() || raw.params.alpha.is_some() {
        return Err(Error::Config("custom spectra take no params".into()));
    }
    let name = raw.name.clone().unwrap_or_else(|| "custom".into());
    let spec = match (&raw.levels, &raw.f_expr) {
        (Some(levels), None) => {
            let spec = Spectrum::custom_table(name, levels.clone())?;
            if let Some(a) = raw.alpha0 {
                if a != spec.alpha0() {
                    return Err(Error::Config(format!(
                        "alpha0 = {a} disagrees with the first level {}",
                        spec.alpha0()
                    )));
                }
            }
            spec
        }
        (None, Some(src)) => {
            let alpha0 = raw
                .alpha0
                .ok_or_else(|| Error::Config("custom f_expr requires alpha0".into()))?;
            Spectrum::custom_function(name, Expr::parse(src)?, alpha0)?
        }
        (Some(_), Some(_)) => {
            return Err(Error::Config("give either `levels` or `f_expr`, not both".into()))
        }
        (None, None) => return Err(Error::Config("custom spectra need `levels` or `f_expr`".into())),
    };
    match &raw.weight {
        None => Ok(spec),
        Some(w) => {
            if !(w.support_upper > 0.0) {
                return Err(Error::Config(format!(
                    "weight.support_upper must be > 0, got {}",
                    w.support_upper
                )));
            }
            let [a, b] = w.endpoint_exponents.unwrap_or([0.0, 0.0]);
            if !(a > -1.0) || !(b > -1.0) {
                return Err(Error::Config(format!(
                    "weight endpoint exponents ({a}, {b}) are not integrable; both must be > -1"
                )));
            }
            spec.with_custom_weight(CustomWeight {
                expr: Expr::parse(&w.expr)?,
                support_upper: w.support_upper,
                endpoint_exponents: (a, b),
            })
        }
    }
}

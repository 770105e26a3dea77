//! Double-exponential quadrature.
//!
//! Both schemes are trapezoid sums in a variable t after a change of variables
//! whose Jacobian decays double-exponentially: tanh-sinh for a finite interval,
//! exp-sinh for [a, ∞). Each level halves the step and reuses every previous
//! node, so the node count doubles per level. The error estimate is the change
//! between the last two levels, floored by the rounding level of the sum.
//!
//! Endpoint singularities that are integrable (log or algebraic) are absorbed by
//! the transformation; integrands are never evaluated exactly at a finite endpoint.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

pub const MAX_NODES_ENV: &str = "GHA_COHERENT_QUAD_MAX_NODES";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the number of nodes at the finest level.
    pub max_nodes: usize,
    /// Levels always performed before convergence is tested.
    #[serde(skip)]
    pub min_levels: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-10,
            max_nodes: 1 << 14,
            min_levels: 3,
        }
    }
}

impl QuadConfig {
    /// Default configuration with `max_nodes` overridden by the environment, if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = QuadConfig::default();
        if let Ok(v) = std::env::var(MAX_NODES_ENV) {
            cfg.max_nodes = v.trim().parse().map_err(|_| {
                Error::Config(format!("{MAX_NODES_ENV}={v:?} is not a node count"))
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be > 0".into()));
        }
        if self.max_nodes < 16 {
            return Err(Error::Config("max_nodes must be at least 16".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub nodes: usize,
    pub levels: u32,
}

/// Node generator: t ↦ (x, dx/dt), or `None` when x hits a finite endpoint in
/// floating point.
trait Transform {
    fn map(&self, t: f64) -> Option<(f64, f64)>;
}

struct TanhSinh {
    a: f64,
    b: f64,
}

impl Transform for TanhSinh {
    fn map(&self, t: f64) -> Option<(f64, f64)> {
        let half = 0.5 * (self.b - self.a);
        let s = FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint, computed without cancellation
        let e = (-2.0 * s.abs()).exp();
        let dist = half * 2.0 * e / (1.0 + e);
        let x = if t >= 0.0 { self.b - dist } else { self.a + dist };
        if dist == 0.0 || x <= self.a || x >= self.b {
            return None;
        }
        let sech = 2.0 * (-s.abs()).exp() / (1.0 + e);
        let w = half * FRAC_PI_2 * t.cosh() * sech * sech;
        Some((x, w))
    }
}

struct ExpSinh {
    a: f64,
}

impl Transform for ExpSinh {
    fn map(&self, t: f64) -> Option<(f64, f64)> {
        let s = FRAC_PI_2 * t.sinh();
        let e = s.exp();
        if !e.is_finite() || e == 0.0 {
            return None;
        }
        let x = self.a + e;
        if x <= self.a {
            return None;
        }
        Some((x, e * FRAC_PI_2 * t.cosh()))
    }
}

const RANGE_STEP: f64 = 0.125;
const T_LIMIT: f64 = 8.0;
const NEGLIGIBLE: f64 = 1e-20;

fn term<F: Fn(f64) -> f64, T: Transform>(f: &F, tr: &T, t: f64) -> Option<f64> {
    tr.map(t).map(|(x, w)| w * f(x))
}

/// Outermost t in one direction beyond which the summand is negligible.
fn find_edge<F: Fn(f64) -> f64, T: Transform>(f: &F, tr: &T, dir: f64, scale: f64) -> Result<f64> {
    let mut scale = scale;
    let mut quiet = 0;
    let mut k = 1;
    loop {
        let t = dir * RANGE_STEP * k as f64;
        if t.abs() > T_LIMIT {
            return Ok(t);
        }
        match term(f, tr, t) {
            None => return Ok(t - dir * RANGE_STEP),
            Some(v) if !v.is_finite() => {
                if quiet > 0 {
                    return Ok(t - dir * RANGE_STEP);
                }
                return Err(Error::domain(
                    "quadrature",
                    format!("integrand not finite at t = {t}"),
                ));
            }
            Some(v) => {
                scale = scale.max(v.abs());
                if v.abs() <= NEGLIGIBLE * scale {
                    quiet += 1;
                    if quiet >= 3 {
                        return Ok(t);
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        k += 1;
    }
}

fn integrate<F: Fn(f64) -> f64, T: Transform>(f: F, tr: T, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    let center = term(&f, &tr, 0.0).unwrap_or(0.0);
    if !center.is_finite() {
        return Err(Error::domain("quadrature", "integrand not finite at the centre node"));
    }
    let t_hi = find_edge(&f, &tr, 1.0, center.abs())?;
    let t_lo = find_edge(&f, &tr, -1.0, center.abs())?;

    let sample = |t: f64| -> Result<(f64, f64)> {
        match term(&f, &tr, t) {
            None => Ok((0.0, 0.0)),
            Some(v) if v.is_finite() => Ok((v, v.abs())),
            Some(_) => Err(Error::domain(
                "quadrature",
                format!("integrand not finite at t = {t}"),
            )),
        }
    };

    // level 0: step h0 over integer multiples of h0 inside [t_lo, t_hi]
    let mut h = 0.5;
    let k_lo = (t_lo / h).floor() as i64;
    let k_hi = (t_hi / h).ceil() as i64;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in k_lo..=k_hi {
        let (v, a) = sample(k as f64 * h)?;
        sum += v;
        abs_sum += a;
    }
    let mut nodes = (k_hi - k_lo + 1) as usize;
    let mut value = sum * h;
    let mut error = f64::INFINITY;
    let mut level = 0;

    loop {
        let next_nodes = nodes * 2;
        if next_nodes > cfg.max_nodes {
            break;
        }
        // add midpoints of the current grid
        let h_new = 0.5 * h;
        let j_lo = (t_lo / h_new).floor() as i64;
        let j_hi = (t_hi / h_new).ceil() as i64;
        for j in j_lo..=j_hi {
            if j.rem_euclid(2) == 1 {
                let (v, a) = sample(j as f64 * h_new)?;
                sum += v;
                abs_sum += a;
                nodes += 1;
            }
        }
        h = h_new;
        level += 1;
        let new_value = sum * h;
        let rounding = 8.0 * f64::EPSILON * abs_sum * h;
        error = (new_value - value).abs().max(rounding);
        value = new_value;
        if level >= cfg.min_levels && error <= cfg.target(value) {
            return Ok(QuadResult {
                value,
                error,
                nodes,
                levels: level,
            });
        }
    }
    Err(Error::Accuracy {
        what: "quadrature",
        estimate: error,
    })
}

/// ∫_a^b f(x) dx, finite a < b.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("tanh_sinh", format!("interval [{a}, {b}]")));
    }
    integrate(f, TanhSinh { a, b }, cfg)
}

/// ∫_a^∞ f(x) dx.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !a.is_finite() {
        return Err(Error::domain("exp_sinh", format!("lower limit {a}")));
    }
    integrate(f, ExpSinh { a }, cfg)
}

/// ∫_0^U g(x, ln x) dx through x = U e^{−u}, which turns (ln x)^k and x^s
/// endpoint behaviour at 0 into exponential decay in u. `ln x` is supplied
/// exactly as ln U − u.
pub fn log_substituted<F: Fn(f64, f64) -> f64>(g: F, upper: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::domain("log_substituted", format!("upper limit {upper}")));
    }
    let lu = upper.ln();
    exp_sinh(
        move |u| {
            let lx = lu - u;
            let x = lx.exp();
            g(x, lx) * x
        },
        0.0,
        cfg,
    )
}

/// ∫_0^∞ g(x) dx through x = v², removing √x branch behaviour at the origin.
pub fn square_substituted<F: Fn(f64) -> f64>(g: F, cfg: &QuadConfig) -> Result<QuadResult> {
    exp_sinh(move |v| 2.0 * v * g(v * v), 0.0, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_on_unit_interval() {
        let cfg = QuadConfig::default();
        for n in 0..=30 {
            let r = tanh_sinh(|x| (n as f64 + 1.0) * x.powi(n), 0.0, 1.0, &cfg).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "n={n}: {}", r.value);
        }
    }

    #[test]
    fn log_singularity_at_zero() {
        let cfg = QuadConfig::default();
        for n in 0..=30 {
            let exact = 1.0 / ((n + 1) as f64).powi(2);
            let r = tanh_sinh(|x| -x.powi(n) * x.ln(), 0.0, 1.0, &cfg).unwrap();
            assert!((r.value - exact).abs() < 1e-12, "n={n}");
            let r = log_substituted(|x, lx| -x.powi(n) * lx, 1.0, &cfg).unwrap();
            assert!((r.value - exact).abs() < 1e-12, "n={n} (log path)");
        }
    }

    #[test]
    fn semi_infinite_gamma_integrals() {
        let cfg = QuadConfig::default();
        // ∫_0^∞ x^n e^{−x} dx = n!
        let mut fact = 1.0;
        for n in 0..15 {
            if n > 0 {
                fact *= n as f64;
            }
            let r = exp_sinh(|x| (n as f64 * x.ln() - x).exp(), 0.0, &cfg).unwrap();
            assert!(((r.value - fact) / fact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        let r = square_substituted(|x| (-x).exp() / x.sqrt(), &QuadConfig::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn node_cap_is_enforced() {
        let cfg = QuadConfig {
            max_nodes: 16,
            ..QuadConfig::default()
        };
        let err = tanh_sinh(|x| x.sin(), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn refinement_stays_inside_error_estimate() {
        let cfg = QuadConfig::default();
        let f = |x: f64| (-x).exp() * (1.0 + x * x).ln();
        let coarse = exp_sinh(f, 0.0, &cfg).unwrap();
        let fine = exp_sinh(
            f,
            0.0,
            &QuadConfig {
                min_levels: coarse.levels + 1,
                ..cfg
            },
        )
        .unwrap();
        assert!((fine.value - coarse.value).abs() <= coarse.error);
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig {
            rel_tol: 0.0,
            ..QuadConfig::default()
        }
        .validate()
        .is_err());
        assert!(tanh_sinh(|x| x, 1.0, 1.0, &QuadConfig::default()).is_err());
    }
}

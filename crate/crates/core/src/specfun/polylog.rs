//! Polylogarithms of non-positive integer order through Eulerian numbers:
//!
//! Li_{−n}(x) = x · Σ_{k<n} ⟨n,k⟩ x^k / (1 − x)^{n+1},   n >= 1.

use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const MAX_EULERIAN_ORDER: usize = 12;

/// Eulerian numbers ⟨n,k⟩ for 0 <= k < n <= 12, exact.
#[derive(Debug, Clone)]
pub struct EulerianTable {
    rows: Vec<Vec<u64>>,
}

impl EulerianTable {
    fn build() -> Self {
        let mut rows: Vec<Vec<u64>> = vec![vec![1]]; // ⟨0,0⟩ = 1 by convention
        for n in 1..=MAX_EULERIAN_ORDER as u64 {
            let prev = &rows[(n - 1) as usize];
            let row: Vec<u64> = (0..n)
                .map(|k| {
                    let a = prev.get(k as usize).copied().unwrap_or(0);
                    let b = if k > 0 {
                        prev.get(k as usize - 1).copied().unwrap_or(0)
                    } else {
                        0
                    };
                    (k + 1) * a + (n - k) * b
                })
                .collect();
            rows.push(row);
        }
        EulerianTable { rows }
    }

    pub fn global() -> &'static EulerianTable {
        static TABLE: OnceLock<EulerianTable> = OnceLock::new();
        TABLE.get_or_init(EulerianTable::build)
    }

    pub fn row(&self, n: usize) -> Option<&[u64]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn get(&self, n: usize, k: usize) -> u64 {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .copied()
            .unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Li_{−alpha}(x) via the rational closed form, for 0 <= alpha <= 12 and 0 <= x < 1.
pub fn polylog_neg_int(alpha: u32, x: f64) -> Result<f64> {
    if alpha as usize > MAX_EULERIAN_ORDER {
        return Err(Error::domain(
            "polylog_neg_int",
            format!("order {alpha} exceeds {MAX_EULERIAN_ORDER}"),
        ));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain("polylog_neg_int", format!("x = {x} not in [0, 1)")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * eulerian_numerator(alpha, x) / (1.0 - x).powi(alpha as i32 + 1))
}

/// Σ_{k<n} ⟨n,k⟩ x^k (Horner), with the n = 0 case defined so that Li_0 = x/(1−x).
pub(crate) fn eulerian_numerator(alpha: u32, x: f64) -> f64 {
    if alpha == 0 {
        return 1.0;
    }
    let row = EulerianTable::global()
        .row(alpha as usize)
        .expect("order checked by caller");
    row.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Σ_{n>=0} (n+1)^alpha x^n = Li_{−alpha}(x)/x, with the x → 0 limit 1.
pub fn shifted_power_sum(alpha: u32, x: f64) -> Result<f64> {
    polylog_neg_int(alpha, x.max(f64::MIN_POSITIVE))?;
    Ok(eulerian_numerator(alpha, x) / (1.0 - x).powi(alpha as i32 + 1))
}

/// Li_{−s}(x) = Σ_{k>=1} k^s x^k by direct summation, for real s and 0 <= x < 1.
pub fn polylog_neg_series(s: f64, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) || !s.is_finite() {
        return Err(Error::domain(
            "polylog_neg_series",
            format!("s = {s}, x = {x} (need finite s, 0 <= x < 1)"),
        ));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let lx = x.ln();
    // Terms peak near k = −s/ln x and decay geometrically afterwards.
    let peak = (-s / lx).max(1.0);
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (s * k.ln() + k * lx).exp();
        sum += term;
        if k > peak && term < 1e-18 * sum {
            break;
        }
        k += 1.0;
        if k > 1e8 {
            return Err(Error::Accuracy {
                what: "polylog_neg_series",
                estimate: term,
            });
        }
    }
    Ok(sum)
}

//! Log-gamma via the Lanczos approximation (g = 7, nine terms).

use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln|Γ(x)|. Non-positive integers are poles and yield a domain error.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain("log_gamma", format!("pole at {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - log_gamma_unchecked(1.0 - x);
    }
    // Integers are common here and exact via summation of logs is more accurate
    // for small n than the Lanczos sum.
    if x == x.floor() && x <= 171.0 {
        let n = x as u64;
        return (2..n).map(|k| (k as f64).ln()).sum();
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// ln(n!) for non-negative integer n.
pub fn log_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 170 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        log_gamma_unchecked(n as f64 + 1.0)
    }
}

//! Gauss numbers [n]_q = (q^n − 1)/(q − 1) and q-factorials.

use crate::error::{Error, Result};

fn check_q(what: &'static str, q: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(what, format!("q = {q} not in (0, 1]")));
    }
    Ok(())
}

/// [n]_q. Uses 1 + q + … + q^{n−1}, which is exact at q = 1 and avoids the
/// 0/0 of the defining quotient near q = 1.
pub fn q_number(n: u32, q: f64) -> Result<f64> {
    check_q("q_number", q)?;
    Ok(q_number_unchecked(n, q))
}

pub(crate) fn q_number_unchecked(n: u32, q: f64) -> f64 {
    if q == 1.0 {
        return n as f64;
    }
    if q < 0.5 || n > 64 {
        // Quotient form; q^n − 1 has no cancellation problems away from q = 1.
        return (1.0 - q.powi(n as i32)) / (1.0 - q);
    }
    let mut sum = 0.0;
    let mut p = 1.0;
    for _ in 0..n {
        sum += p;
        p *= q;
    }
    sum
}

/// [n]_q! = [1]_q [2]_q … [n]_q, with [0]_q! = 1.
pub fn q_factorial(n: u32, q: f64) -> Result<f64> {
    check_q("q_factorial", q)?;
    Ok((1..=n).map(|k| q_number_unchecked(k, q)).product())
}

/// ln [n]_q!.
pub fn log_q_factorial(n: u32, q: f64) -> Result<f64> {
    check_q("log_q_factorial", q)?;
    Ok((1..=n).map(|k| q_number_unchecked(k, q).ln()).sum())
}

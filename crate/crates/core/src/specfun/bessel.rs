//! Modified Bessel functions I_n and K_n of integer order 0..=10, real argument.
//!
//! I_n: ascending power series up to [`I_SERIES_MAX_X`], Hankel asymptotic
//! expansion beyond. The series has positive terms, so its rounding error grows
//! only with the term count (~x); the asymptotic remainder for n <= 10 is below
//! 1e-16 once x >= 30. Both agree to ~1e-14 over [20, 40].
//!
//! K_n: K_0 and K_1 from the logarithmic series for x <= [`K_SERIES_MAX_X`] and
//! from Steed's continued fraction (Temme's CF2) above, then forward recurrence
//! in the order, which is the stable direction for K.

use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const MAX_ORDER: u32 = 10;
pub const I_SERIES_MAX_X: f64 = 30.0;
pub const K_SERIES_MAX_X: f64 = 2.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-17;

fn check_order(what: &'static str, nu: u32) -> Result<()> {
    if nu > MAX_ORDER {
        return Err(Error::domain(what, format!("order {nu} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// I_ν(x) for x >= 0.
pub fn bessel_i(nu: u32, x: f64) -> Result<f64> {
    check_order("bessel_i", nu)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_i", format!("x = {x} (need x >= 0)")));
    }
    if x <= I_SERIES_MAX_X {
        Ok(i_series(nu, x))
    } else {
        Ok(i_asymptotic_scaled(nu, x) * x.exp())
    }
}

/// e^{−x} I_ν(x) for x >= 0; finite for every finite x.
pub fn bessel_i_scaled(nu: u32, x: f64) -> Result<f64> {
    check_order("bessel_i_scaled", nu)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_i_scaled", format!("x = {x} (need x >= 0)")));
    }
    if x <= I_SERIES_MAX_X {
        Ok(i_series(nu, x) * (-x).exp())
    } else {
        Ok(i_asymptotic_scaled(nu, x))
    }
}

/// K_ν(x) for x > 0.
pub fn bessel_k(nu: u32, x: f64) -> Result<f64> {
    check_order("bessel_k", nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_k", format!("x = {x} (need x > 0)")));
    }
    if x <= K_SERIES_MAX_X {
        let (k0, k1) = k01_series(x);
        Ok(k_recurrence(nu, x, k0, k1))
    } else {
        Ok(bessel_k_scaled(nu, x)? * (-x).exp())
    }
}

/// e^{x} K_ν(x) for x > 0.
pub fn bessel_k_scaled(nu: u32, x: f64) -> Result<f64> {
    check_order("bessel_k_scaled", nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_k_scaled", format!("x = {x} (need x > 0)")));
    }
    let (k0, k1) = if x <= K_SERIES_MAX_X {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_steed_scaled(x)
    };
    Ok(k_recurrence(nu, x, k0, k1))
}

fn k_recurrence(nu: u32, x: f64, k0: f64, k1: f64) -> f64 {
    match nu {
        0 => k0,
        1 => k1,
        _ => {
            let (mut km, mut k) = (k0, k1);
            for j in 1..nu {
                let kp = km + 2.0 * j as f64 / x * k;
                km = k;
                k = kp;
            }
            k
        }
    }
}

pub fn i_series(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for j in 1..=nu {
        term *= half / j as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + nu as f64));
        sum += term;
        if term < EPS * sum {
            break;
        }
        k += 1.0;
    }
    sum
}

pub fn i_asymptotic_scaled(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        // Divergent tail: stop at the smallest term once past the growth phase.
        if term.abs() > prev && odd * odd > mu {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

pub fn k01_series(x: f64) -> (f64, f64) {
    let lx = (0.5 * x).ln();
    let q = 0.25 * x * x;

    // K_0 = −(ln(x/2)+γ) I_0 + Σ_{k>=1} H_k q^k/(k!)^2
    let mut t = 1.0;
    let mut harmonic = 0.0;
    let mut s0 = 0.0;
    let mut k = 1.0;
    loop {
        t *= q / (k * k);
        harmonic += 1.0 / k;
        let d = t * harmonic;
        s0 += d;
        if d < EPS * s0.abs() || t == 0.0 {
            break;
        }
        k += 1.0;
    }
    let k0 = -(lx + EULER_GAMMA) * i_series(0, x) + s0;

    // K_1 = 1/x + ln(x/2) I_1 − (x/4) Σ_{k>=0} (ψ(k+1)+ψ(k+2)) q^k/(k!(k+1)!)
    let mut t = 1.0;
    let mut psi_a = -EULER_GAMMA; // ψ(k+1)
    let mut psi_b = 1.0 - EULER_GAMMA; // ψ(k+2)
    let mut s1 = psi_a + psi_b;
    let mut k = 1.0;
    loop {
        t *= q / (k * (k + 1.0));
        psi_a += 1.0 / k;
        psi_b += 1.0 / (k + 1.0);
        let d = t * (psi_a + psi_b);
        s1 += d;
        if d.abs() < EPS * s1.abs() || t == 0.0 {
            break;
        }
        k += 1.0;
    }
    let k1 = 1.0 / x + lx * i_series(1, x) - 0.25 * x * s1;
    (k0, k1)
}

/// Scaled (e^x K_0, e^x K_1) from Steed's evaluation of Temme's CF2.
pub fn k01_steed_scaled(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..100_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

//! Annihilation-operator eigenstates
//!
//!   |z⟩ = N(|z|²) Σ_n zⁿ / N_{n−1}! |n⟩,
//!
//! their normalization N²(x), x = |z|², overlaps, label continuity, and the
//! eigenvector residual in a truncated representation.
//!
//! Coefficients come from the recursion c_{n+1} N_n = z c_n itself, so it holds
//! to rounding. States live in dimension D; the discarded mass is certified by a
//! geometric bound that uses monotonicity of N_n²: for n >= D−1 the term ratio
//! x/N_n² never exceeds ρ = x/N_{D−1}², hence
//!
//!   Σ_{n>=D−1} |c_n|² <= |c_{D−1}|² / (1 − ρ).
//!
//! The bound starts at the last retained component: the truncated A maps
//! |D−1⟩ to N_{D−2}|D−2⟩ but nothing maps onto |D−1⟩, so that component is
//! where the eigenvalue defect appears.

use crate::error::{Error, Result};
use crate::fock::TruncatedRep;
use crate::spectra::{build_ladder, Family, LadderData, Spectrum};
use crate::specfun::{bessel_i, bessel_i_scaled, shifted_power_sum, polylog_neg_series, q_number};
use num_complex::Complex64;

/// Default certified tail tolerance for automatically sized states.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Largest ladder grown automatically.
pub const MAX_AUTO_LEVELS: usize = 1 << 17;
const INITIAL_LEVELS: usize = 64;
const RESCALE: f64 = 1e150;

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    z: Complex64,
    coeffs: Vec<Complex64>,
    norm_sq_check: f64,
    tail_bound: f64,
    log_partial_sum: f64,
}

impl CoherentState {
    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Σ|c_n|² over the retained components.
    pub fn norm_sq_check(&self) -> f64 {
        self.norm_sq_check
    }

    /// Certified bound on the mass in components n >= D−1 of the untruncated
    /// state, relative to its full norm.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// N²(|z|²) implied by the retained components, 1/Σ_{n<D} |z|^{2n}/(N_{n−1}!)².
    pub fn normalization_sq(&self) -> f64 {
        (-self.log_partial_sum).exp()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &CoherentState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// ‖|self⟩ − |other⟩‖ from the component differences.
    pub fn distance(&self, other: &CoherentState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Unnormalized coefficients zⁿ/N_{n−1}! for n < count, rescaled to stay finite.
/// Returns the coefficients and the natural log of the common factor removed.
fn raw_coefficients(ladder: &LadderData, z: Complex64, count: usize) -> (Vec<Complex64>, f64) {
    let mut out = Vec::with_capacity(count);
    let mut c = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    out.push(c);
    for &nk in &ladder.n_coeff()[..count - 1] {
        c = c * z / nk;
        if c.norm() > RESCALE {
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
            c /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(c);
    }
    (out, log_scale)
}

struct TailInfo {
    bound: f64,
    ratio: f64,
}

/// Relative tail bound from the last retained term; infinite when ρ >= 1.
fn tail_info(last_term_sq: f64, partial: f64, x: f64, n_sq_last: f64) -> TailInfo {
    let ratio = x / n_sq_last;
    let bound = if ratio < 1.0 {
        last_term_sq / (1.0 - ratio) / partial
    } else {
        f64::INFINITY
    };
    TailInfo { bound, ratio }
}

/// Eigenstate of A with eigenvalue `z`, truncated to `dim` components.
pub fn build_state(ladder: &LadderData, z: Complex64, dim: usize) -> Result<CoherentState> {
    build_state_with_tol(ladder, z, dim, DEFAULT_TAIL_TOL)
}

pub fn build_state_with_tol(
    ladder: &LadderData,
    z: Complex64,
    dim: usize,
    tol: f64,
) -> Result<CoherentState> {
    if dim == 0 || dim > ladder.n_max() {
        return Err(Error::Range {
            index: dim,
            max: ladder.n_max(),
        });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("build_state", format!("label {z} is not finite")));
    }
    let x = z.norm_sqr();
    if x == 0.0 {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[0] = Complex64::new(1.0, 0.0);
        return Ok(CoherentState {
            z,
            coeffs,
            norm_sq_check: 1.0,
            tail_bound: 0.0,
            log_partial_sum: 0.0,
        });
    }
    let (mut coeffs, log_scale) = raw_coefficients(ladder, z, dim);
    let partial: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let last = coeffs[dim - 1].norm_sqr();
    let tail = tail_info(last, partial, x, ladder.n_coeff_sq()[dim - 1]);
    if !(tail.bound <= tol) {
        let required = estimate_required_dim(dim, &tail, tol);
        return Err(match required {
            Some(required) => Error::Truncation {
                dim,
                tail: tail.bound,
                required,
            },
            None => Error::Truncation {
                dim,
                tail: f64::INFINITY,
                required: dim.saturating_mul(2),
            },
        });
    }
    let inv = 1.0 / partial.sqrt();
    for c in coeffs.iter_mut() {
        *c *= inv;
    }
    let norm_sq_check = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok(CoherentState {
        z,
        coeffs,
        norm_sq_check,
        tail_bound: tail.bound,
        log_partial_sum: partial.ln() + 2.0 * log_scale,
    })
}

fn estimate_required_dim(dim: usize, tail: &TailInfo, tol: f64) -> Option<usize> {
    if !(tail.ratio < 1.0) || !tail.bound.is_finite() {
        return None;
    }
    // each further component shrinks the bound by at least ρ
    let steps = (tol / tail.bound).ln() / tail.ratio.ln();
    Some(dim + steps.ceil().max(1.0) as usize)
}

/// Smallest dim whose certified tail bound is <= `tol`, within this ladder.
pub fn choose_dim(ladder: &LadderData, x: f64, tol: f64) -> Result<usize> {
    if x == 0.0 {
        return Ok(1);
    }
    let n_sq = ladder.n_coeff_sq();
    let count = ladder.n_max();
    let z = Complex64::new(x.sqrt(), 0.0);
    let (coeffs, _) = raw_coefficients(ladder, z, count);
    let mut partial = 0.0;
    let mut last_tail = None;
    for d in 1..=count {
        let t = coeffs[d - 1].norm_sqr();
        partial += t;
        let tail = tail_info(t, partial, x, n_sq[d - 1]);
        if tail.bound <= tol {
            return Ok(d);
        }
        last_tail = Some(tail);
    }
    let tail = last_tail.expect("ladder has at least one level");
    match estimate_required_dim(count, &tail, tol) {
        Some(required) => Err(Error::Truncation {
            dim: count,
            tail: tail.bound,
            required,
        }),
        None => Err(Error::Domain {
            what: "coherent state",
            detail: format!(
                "series for x = {x} has not started converging within {count} levels \
                 (ratio x/N^2 = {:.6}); label likely outside the convergence disc",
                tail.ratio
            ),
        }),
    }
}

/// A ladder long enough to certify the state at `x`, and the dimension to use.
pub fn ladder_for(spec: &Spectrum, x: f64, tol: f64) -> Result<(LadderData, usize)> {
    let r = radius(spec);
    if !(x < r) {
        return Err(Error::domain(
            "coherent state",
            format!("|z|^2 = {x} outside the convergence disc |z|^2 < {r}"),
        ));
    }
    let cap = spec.max_levels().map_or(MAX_AUTO_LEVELS, |m| m.min(MAX_AUTO_LEVELS));
    let mut levels = INITIAL_LEVELS.min(cap);
    loop {
        let ladder = build_ladder(spec, levels)?;
        match choose_dim(&ladder, x, tol) {
            Ok(d) => return Ok((ladder, d)),
            Err(e @ (Error::Truncation { .. } | Error::Domain { .. })) => {
                if levels >= cap {
                    return Err(e);
                }
                let want = match e {
                    Error::Truncation { required, .. } => required + 1,
                    _ => levels * 2,
                };
                levels = want.max(levels * 2).min(cap);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Eigenstate with the dimension chosen so the tail bound is <= `tol`.
pub fn coherent_state(spec: &Spectrum, z: Complex64, tol: f64) -> Result<CoherentState> {
    let (ladder, dim) = ladder_for(spec, z.norm_sqr(), tol)?;
    build_state_with_tol(&ladder, z, dim, tol)
}

/// Radius of convergence of Σ xⁿ/(N_{n−1}!)², in x = |z|².
pub fn radius(spec: &Spectrum) -> f64 {
    match spec.family() {
        Family::Harmonic | Family::SquareWell => f64::INFINITY,
        Family::PowerClass { .. } => 1.0,
        Family::QDeformed { q } => {
            if *q == 1.0 {
                f64::INFINITY
            } else {
                let n0_sq = spec.alpha0() * (q - 1.0) + 1.0;
                n0_sq / (1.0 - q)
            }
        }
        Family::Custom(_) => {
            let levels = spec.max_levels().unwrap_or(400).min(400);
            match build_ladder(spec, levels.max(1)) {
                Ok(l) => radius_estimate(&l),
                Err(_) => 0.0,
            }
        }
    }
}

/// Ratio-test estimate lim N_n² from a ladder: ∞ when N_n² keeps growing,
/// otherwise its last (largest) value, which is a lower bound of the limit.
pub fn radius_estimate(ladder: &LadderData) -> f64 {
    let sq = ladder.n_coeff_sq();
    let n = sq.len();
    let last = sq[n - 1];
    if n >= 8 {
        let mid = sq[n / 2 - 1];
        if last > 1e12 || last / mid > 1.5 {
            return f64::INFINITY;
        }
    }
    last
}

/// N²(x) from the family's closed form; config-defined spectra fall back to
/// the certified series.
pub fn normalization(spec: &Spectrum, x: f64) -> Result<f64> {
    let r = radius(spec);
    if !(x >= 0.0) || !(x < r) {
        return Err(Error::domain(
            "normalization",
            format!("x = {x} outside [0, {r})"),
        ));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    match spec.family() {
        Family::Harmonic => Ok((-x).exp()),
        Family::QDeformed { q } => {
            let n0_sq = spec.alpha0() * (q - 1.0) + 1.0;
            if *q == 1.0 {
                return Ok((-x / n0_sq).exp());
            }
            q_exponential_inverse(*q, x / n0_sq)
        }
        Family::PowerClass { alpha } => {
            if *alpha == 1.0 {
                Ok((1.0 - x).powi(2))
            } else if *alpha == 2.0 {
                Ok((1.0 - x).powi(3) / (1.0 + x))
            } else if let Some(a) = spec.integer_alpha().filter(|&a| a <= 12) {
                Ok(1.0 / shifted_power_sum(a, x)?)
            } else {
                Ok(x / polylog_neg_series(*alpha, x)?)
            }
        }
        Family::SquareWell => {
            let y = 2.0 * x.sqrt();
            if y <= 600.0 {
                Ok(x / (2.0 * bessel_i(2, y)?))
            } else {
                Ok(x * (-y).exp() / (2.0 * bessel_i_scaled(2, y)?))
            }
        }
        Family::Custom(_) => normalization_series(spec, x, DEFAULT_TAIL_TOL).map(|s| s.value),
    }
}

/// [Σ_n uⁿ/[n]_q!]^{−1}, summed until the geometric remainder is negligible.
fn q_exponential_inverse(q: f64, u: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..10_000_000u32 {
        let qn = q_number(n, q)?;
        term *= u / qn;
        sum += term;
        // later ratios are below u(1−q) < 1 once [n]_q is close to its limit
        let rho = u / q_number(n + 1, q)?;
        if rho < 1.0 && term * rho / (1.0 - rho) < 1e-17 * sum {
            return Ok(1.0 / sum);
        }
    }
    Err(Error::Accuracy {
        what: "q-exponential series",
        estimate: term,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesNormalization {
    pub value: f64,
    /// Certified relative tail of the partial sum.
    pub tail_bound: f64,
    pub terms: usize,
}

/// N²(x) = 1/Σ_n xⁿ/(N_{n−1}!)² by direct summation of ladder data.
pub fn normalization_series(spec: &Spectrum, x: f64, tol: f64) -> Result<SeriesNormalization> {
    if x == 0.0 {
        return Ok(SeriesNormalization {
            value: 1.0,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    let (ladder, dim) = ladder_for(spec, x, tol)?;
    let z = Complex64::new(x.sqrt(), 0.0);
    let (coeffs, log_scale) = raw_coefficients(&ladder, z, dim);
    let partial: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let tail = tail_info(coeffs[dim - 1].norm_sqr(), partial, x, ladder.n_coeff_sq()[dim - 1]);
    Ok(SeriesNormalization {
        value: (-(partial.ln() + 2.0 * log_scale)).exp(),
        tail_bound: tail.bound,
        terms: dim,
    })
}

/// ⟨z1|z2⟩ for normalized states in a common dimension.
pub fn overlap(ladder: &LadderData, z1: Complex64, z2: Complex64, dim: usize) -> Result<Complex64> {
    let a = build_state(ladder, z1, dim)?;
    let b = build_state(ladder, z2, dim)?;
    a.inner(&b)
}

/// ‖A|z⟩ − z|z⟩‖ in the truncated representation.
pub fn eigen_residual(rep: &TruncatedRep, state: &CoherentState) -> Result<f64> {
    if rep.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: rep.dim(),
            right: state.dim(),
        });
    }
    let a = rep.a();
    let c = state.coeffs();
    let z = state.z();
    let mut acc = 0.0;
    for i in 0..rep.dim() {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, cj) in c.iter().enumerate() {
            let aij = a[(i, j)];
            if aij != 0.0 {
                row += cj * aij;
            }
        }
        acc += (row - z * c[i]).norm_sqr();
    }
    Ok(acc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityRow {
    pub delta: f64,
    /// |z − z′|
    pub label_distance: f64,
    /// ‖|z⟩ − |z′⟩‖ from component differences
    pub state_distance: f64,
    /// √(2 − 2 Re⟨z|z′⟩); loses relative accuracy as the states coincide
    pub overlap_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityTable {
    pub z: Complex64,
    pub rows: Vec<ContinuityRow>,
}

impl ContinuityTable {
    /// Least-squares slope of log(state distance) against log(label distance),
    /// over rows with both distances positive.
    pub fn loglog_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.label_distance > 0.0 && r.state_distance > 0.0)
            .map(|r| (r.label_distance.ln(), r.state_distance.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }

    /// Largest ratio state distance / label distance: the constant C in
    /// ‖|z⟩ − |z′⟩‖ <= C |z − z′| over the probed points.
    pub fn lipschitz_estimate(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.label_distance > 0.0)
            .map(|r| r.state_distance / r.label_distance)
            .fold(0.0, f64::max)
    }

    /// State distances shrink as label distances shrink.
    pub fn is_monotone(&self) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.label_distance.total_cmp(&b.label_distance));
        rows.windows(2)
            .all(|w| w[0].state_distance <= w[1].state_distance)
    }
}

/// Distances between |z⟩ and |z+δ⟩ for each δ (real shifts of the label).
pub fn continuity_check(
    ladder: &LadderData,
    z: Complex64,
    deltas: &[f64],
    dim: usize,
) -> Result<ContinuityTable> {
    let base = build_state(ladder, z, dim)?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let zp = z + delta;
        let other = build_state(ladder, zp, dim)?;
        let ov = base.inner(&other)?;
        rows.push(ContinuityRow {
            delta,
            label_distance: (z - zp).norm(),
            state_distance: base.distance(&other)?,
            overlap_distance: (2.0 - 2.0 * ov.re).max(0.0).sqrt(),
        });
    }
    Ok(ContinuityTable { z, rows })
}

/// Continuity table for a spectrum, sizing the truncation to cover every probe.
pub fn continuity_for(spec: &Spectrum, z: Complex64, deltas: &[f64], tol: f64) -> Result<ContinuityTable> {
    let x_max = deltas
        .iter()
        .map(|d| (z + d).norm_sqr())
        .fold(z.norm_sqr(), f64::max);
    let (ladder, dim) = ladder_for(spec, x_max, tol)?;
    // smaller labels converge at least as fast, so `dim` covers every probe
    continuity_check(&ladder, z, deltas, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_rep;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn vacuum_is_z_zero() {
        let l = build_ladder(&Spectrum::square_well(), 10).unwrap();
        let s = build_state(&l, c(0.0), 5).unwrap();
        assert_eq!(s.coeffs()[0], c(1.0));
        assert!(s.coeffs()[1..].iter().all(|v| *v == c(0.0)));
        assert_eq!(s.tail_bound(), 0.0);
    }

    #[test]
    fn harmonic_unit_label() {
        let l = build_ladder(&Spectrum::harmonic(), 40).unwrap();
        let s = build_state(&l, c(1.0), 30).unwrap();
        let mut fact = 1.0;
        for (n, v) in s.coeffs().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let expect = (-0.5f64).exp() / fact.sqrt();
            assert!((v.re - expect).abs() < 1e-15 && v.im == 0.0, "n={n}");
        }
    }

    #[test]
    fn type1_half_label() {
        let spec = Spectrum::power_class(1.0).unwrap();
        let s = coherent_state(&spec, c(0.5), 1e-14).unwrap();
        for (n, v) in s.coeffs().iter().enumerate() {
            let expect = 0.75 * ((n + 1) as f64).sqrt() * 0.5f64.powi(n as i32);
            assert!((v.re - expect).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn phase_convention_and_recursion() {
        let spec = Spectrum::square_well();
        let z = Complex64::from_polar(2.0, 0.7);
        let (l, d) = ladder_for(&spec, z.norm_sqr(), 1e-12).unwrap();
        let s = build_state(&l, z, d).unwrap();
        assert!(s.coeffs()[0].re > 0.0 && s.coeffs()[0].im == 0.0);
        let cmax = s.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
        for n in 0..d - 1 {
            let lhs = s.coeffs()[n + 1] * l.n_coeff()[n];
            let rhs = z * s.coeffs()[n];
            assert!((lhs - rhs).norm() <= 1e-13 * cmax);
        }
    }

    #[test]
    fn truncation_error_reports_required_dim() {
        let l = build_ladder(&Spectrum::harmonic(), 200).unwrap();
        match build_state(&l, c(3.0), 10) {
            Err(Error::Truncation { required, .. }) => {
                assert!(required > 10);
                assert!(build_state(&l, c(3.0), required.min(200)).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn outside_disc_is_domain_error() {
        let spec = Spectrum::power_class(2.0).unwrap();
        assert!(matches!(
            coherent_state(&spec, c(1.01), 1e-10),
            Err(Error::Domain { .. })
        ));
        assert!(normalization(&spec, 1.0).is_err());
    }

    #[test]
    fn radius_values() {
        assert!(radius(&Spectrum::harmonic()).is_infinite());
        assert!((radius(&Spectrum::q_deformed(0.5).unwrap()) - 2.0).abs() < 1e-15);
        assert_eq!(radius(&Spectrum::power_class(2.0).unwrap()), 1.0);
        assert!(radius(&Spectrum::square_well()).is_infinite());
        assert!(radius(&Spectrum::q_deformed(1.0).unwrap()).is_infinite());
    }

    #[test]
    fn normalization_examples() {
        let h = normalization(&Spectrum::harmonic(), 4.0).unwrap();
        assert!((h - (-4f64).exp()).abs() < 1e-18);
        assert_eq!(normalization(&Spectrum::power_class(1.0).unwrap(), 0.0).unwrap(), 1.0);
        // square well at x = 1: 1/(2 I_2(2)) with I_2(2) = 0.688948447698738204...
        let sw = normalization(&Spectrum::square_well(), 1.0).unwrap();
        assert!((sw - 1.0 / (2.0 * 0.688_948_447_698_738_2)).abs() < 1e-15);
        // α = 3 at x = 0.5: Li_{−3}(0.5) = 26
        let p3 = normalization(&Spectrum::power_class(3.0).unwrap(), 0.5).unwrap();
        assert!((p3 - 0.5 / 26.0).abs() < 1e-16);
    }

    #[test]
    fn overlap_basics() {
        let l = build_ladder(&Spectrum::harmonic(), 120).unwrap();
        let z = Complex64::new(1.2, -0.4);
        let self_ov = overlap(&l, z, z, 100).unwrap();
        assert!((self_ov - c(1.0)).norm() < 1e-14);
        let vac = overlap(&l, c(0.0), z, 100).unwrap();
        let expect = (-0.5 * z.norm_sqr()).exp();
        assert!((vac.re - expect).abs() < 1e-14 && vac.im.abs() < 1e-16);
    }

    #[test]
    fn eigen_residual_examples() {
        let spec = Spectrum::harmonic();
        let l = build_ladder(&spec, 80).unwrap();
        let rep = build_rep(&l, 64).unwrap();
        let vac = build_state(&l, c(0.0), 64).unwrap();
        assert_eq!(eigen_residual(&rep, &vac).unwrap(), 0.0);
        let s = build_state(&l, c(1.0), 64).unwrap();
        assert!(eigen_residual(&rep, &s).unwrap() <= 1e-12);
        let small = build_state(&l, c(0.1), 10).unwrap();
        assert!(matches!(
            eigen_residual(&rep, &small),
            Err(Error::DimensionMismatch { .. })
        ));

        let sw = Spectrum::square_well();
        let l = build_ladder(&sw, 80).unwrap();
        let rep = build_rep(&l, 64).unwrap();
        let s = build_state(&l, c(3.0), 64).unwrap();
        assert!(eigen_residual(&rep, &s).unwrap() <= 1e-10);
    }

    #[test]
    fn continuity_zero_shift() {
        let l = build_ladder(&Spectrum::harmonic(), 64).unwrap();
        let t = continuity_check(&l, c(1.0), &[0.0], 40).unwrap();
        assert_eq!(t.rows[0].state_distance, 0.0);
    }

    #[test]
    fn radius_estimate_for_custom_tables() {
        let q = 0.5f64;
        let levels: Vec<f64> = (0..48).map(|n| (1.0 - q.powi(n)) / (1.0 - q)).collect();
        let s = Spectrum::custom_table("q-table", levels).unwrap();
        assert!((radius(&s) - 2.0).abs() < 1e-12);
        let levels: Vec<f64> = (0..300).map(|n| n as f64).collect();
        let s = Spectrum::custom_table("linear", levels).unwrap();
        assert!(radius(&s).is_infinite());
    }
}

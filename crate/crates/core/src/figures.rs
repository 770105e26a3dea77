//! CSV data for the three published figures. Output is a pure function of the
//! figure number and grid size.

use crate::coherent::normalization;
use crate::completeness::{verify_completeness, WeightFunction};
use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;
use crate::spectra::Spectrum;
use std::fmt::Write;

pub const DEFAULT_POINTS: usize = 400;
/// Distance kept from singular endpoints.
pub const ENDPOINT_OFFSET: f64 = 1e-6;
/// Fig. 2 runs over |z| ∈ [0, Z_MAX].
pub const Z_MAX: f64 = 5.0;
/// Fig. 3 runs over x ∈ (0, X_MAX].
pub const X_MAX: f64 = 10.0;
pub const HEADER: &str = "# x,value,family,params";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Power-class α = 3 weight on (0, 1).
    PowerClassWeight,
    /// Square-well N²(|z|²) against |z|.
    SquareWellNormalization,
    /// Calibrated square-well weight on (0, X_MAX].
    SquareWellWeight,
}

impl Figure {
    pub fn from_number(which: u32) -> Result<Self> {
        match which {
            1 => Ok(Figure::PowerClassWeight),
            2 => Ok(Figure::SquareWellNormalization),
            3 => Ok(Figure::SquareWellWeight),
            _ => Err(Error::Config(format!("figure must be 1, 2 or 3, got {which}"))),
        }
    }

    /// Abscissae of the grid: x for Figs. 1 and 3, |z| for Fig. 2.
    pub fn grid(self, points: usize) -> Result<Vec<f64>> {
        if points < 2 {
            return Err(Error::Config(format!("need at least 2 grid points, got {points}")));
        }
        let (lo, hi) = match self {
            Figure::PowerClassWeight => (ENDPOINT_OFFSET, 1.0 - ENDPOINT_OFFSET),
            Figure::SquareWellNormalization => (0.0, Z_MAX),
            Figure::SquareWellWeight => (ENDPOINT_OFFSET, X_MAX),
        };
        let step = (hi - lo) / (points - 1) as f64;
        Ok((0..points)
            .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub family: String,
    pub params: String,
    pub points: Vec<(f64, f64)>,
}

impl FigureData {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.points.len() + 1));
        out.push_str(HEADER);
        out.push('\n');
        for (x, v) in &self.points {
            let _ = writeln!(out, "{x:.17e},{v:.17e},{},{}", self.family, self.params);
        }
        out
    }
}

/// Calibration of the square-well weight from its zeroth moment.
pub fn square_well_calibration(cfg: &QuadConfig) -> Result<f64> {
    Ok(verify_completeness(&Spectrum::square_well(), 4, f64::INFINITY, cfg)?.calibration)
}

pub fn figure_data(fig: Figure, points: usize, cfg: &QuadConfig) -> Result<FigureData> {
    let grid = fig.grid(points)?;
    match fig {
        Figure::PowerClassWeight => {
            let spec = Spectrum::power_class(3.0)?;
            let w = WeightFunction::for_spectrum(&spec)?;
            let points = grid
                .into_iter()
                .map(|x| Ok((x, w.eval(&spec, x)?)))
                .collect::<Result<_>>()?;
            Ok(FigureData {
                family: spec.tag().to_string(),
                params: "alpha=3".into(),
                points,
            })
        }
        Figure::SquareWellNormalization => {
            let spec = Spectrum::square_well();
            let points = grid
                .into_iter()
                .map(|r| Ok((r, normalization(&spec, r * r)?)))
                .collect::<Result<_>>()?;
            Ok(FigureData {
                family: spec.tag().to_string(),
                params: "x=|z|".into(),
                points,
            })
        }
        Figure::SquareWellWeight => {
            let spec = Spectrum::square_well();
            let calibration = square_well_calibration(cfg)?;
            let w = WeightFunction::for_spectrum(&spec)?.with_calibration(calibration);
            let points = grid
                .into_iter()
                .map(|x| Ok((x, w.eval(&spec, x)?)))
                .collect::<Result<_>>()?;
            Ok(FigureData {
                family: spec.tag().to_string(),
                params: format!("calibration={calibration:.17e}"),
                points,
            })
        }
    }
}

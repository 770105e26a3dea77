//! Truncated matrix representation of (J₀, A, A†) on span{|0⟩ … |D−1⟩} and
//! checks of the defining relations
//!
//!   J₀A† = A†f(J₀),   AJ₀ = f(J₀)A,   [A†, A] = J₀ − f(J₀),
//!
//! and of the Casimir C = A†A − J₀ = AA† − f(J₀).
//!
//! Truncation only corrupts entries that touch the last basis vector, so every
//! check is restricted to rows and columns 0..=D−2 (the interior).

use crate::error::{Error, Result};
use crate::spectra::{LadderData, Spectrum};
use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedRep {
    dim: usize,
    j0: DMatrix<f64>,
    a_dag: DMatrix<f64>,
    a: DMatrix<f64>,
}

impl TruncatedRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn j0(&self) -> &DMatrix<f64> {
        &self.j0
    }

    pub fn a_dag(&self) -> &DMatrix<f64> {
        &self.a_dag
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Largest index free of truncation artifacts.
    pub fn interior(&self) -> usize {
        self.dim - 2
    }

    /// f applied entrywise to the diagonal of J₀.
    pub fn f_of_j0(&self, spec: &Spectrum) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = spec.eval_f(self.j0[(i, i)])?;
        }
        Ok(m)
    }
}

/// Build J₀ = diag(α_m), A†|m⟩ = N_m|m+1⟩, A = (A†)ᵀ.
pub fn build_rep(ladder: &LadderData, dim: usize) -> Result<TruncatedRep> {
    if dim > ladder.n_max() {
        return Err(Error::Range {
            index: dim,
            max: ladder.n_max(),
        });
    }
    if dim < 2 {
        return Err(Error::Range { index: dim, max: ladder.n_max() });
    }
    let alpha = ladder.alpha();
    let n = ladder.n_coeff();
    let j0 = DMatrix::from_fn(dim, dim, |i, j| if i == j { alpha[i] } else { 0.0 });
    let a_dag = DMatrix::from_fn(dim, dim, |i, j| if i == j + 1 { n[j] } else { 0.0 });
    let a = a_dag.transpose();
    Ok(TruncatedRep { dim, j0, a_dag, a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    /// max |J₀A† − A†f(J₀)| on the interior
    pub creation: f64,
    /// max |AJ₀ − f(J₀)A| on the interior
    pub annihilation: f64,
    /// max |[A†,A] − (J₀ − f(J₀))| on the interior
    pub commutator: f64,
    /// Largest absolute entry among J₀, f(J₀), A.
    pub scale: f64,
    pub tol: f64,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.creation.max(self.annihilation).max(self.commutator)
    }

    pub fn max_relative_residual(&self) -> f64 {
        self.max_residual() / self.scale.max(1.0)
    }

    /// Residuals relative to `scale` are within `tol`.
    pub fn passed(&self) -> bool {
        self.max_relative_residual() <= self.tol
    }
}

fn interior_max_abs(m: &DMatrix<f64>, interior: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..=interior {
        for j in 0..=interior {
            worst = worst.max(m[(i, j)].abs());
        }
    }
    worst
}

pub fn check_relations(rep: &TruncatedRep, spec: &Spectrum, tol: f64) -> Result<RelationReport> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("relation tolerance must be > 0, got {tol}")));
    }
    let fj = rep.f_of_j0(spec)?;
    let k = rep.interior();
    let creation = interior_max_abs(&(&rep.j0 * &rep.a_dag - &rep.a_dag * &fj), k);
    let annihilation = interior_max_abs(&(&rep.a * &rep.j0 - &fj * &rep.a), k);
    let comm = &rep.a_dag * &rep.a - &rep.a * &rep.a_dag;
    let commutator = interior_max_abs(&(comm - (&rep.j0 - &fj)), k);
    let scale = rep
        .j0
        .amax()
        .max(fj.amax())
        .max(rep.a.amax());
    Ok(RelationReport {
        creation,
        annihilation,
        commutator,
        scale,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirReport {
    /// Mean of the interior diagonal of A†A − J₀; equals −α₀ exactly.
    pub value: f64,
    /// Largest of |C₁ − C₂|, |C₁ − value·1|, |C₂ − value·1| on the interior.
    pub max_dev: f64,
    pub scale: f64,
}

pub fn casimir(rep: &TruncatedRep, spec: &Spectrum) -> Result<CasimirReport> {
    if rep.dim < 3 {
        return Err(Error::Range { index: rep.dim, max: 3 });
    }
    let fj = rep.f_of_j0(spec)?;
    let k = rep.interior();
    let c1 = &rep.a_dag * &rep.a - &rep.j0;
    let c2 = &rep.a * &rep.a_dag - &fj;
    let value = (0..=k).map(|i| c1[(i, i)]).sum::<f64>() / (k + 1) as f64;
    let ident = DMatrix::<f64>::identity(rep.dim, rep.dim) * value;
    let max_dev = interior_max_abs(&(&c1 - &c2), k)
        .max(interior_max_abs(&(&c1 - &ident), k))
        .max(interior_max_abs(&(&c2 - &ident), k));
    let scale = rep.j0.amax().max(fj.amax()).max(rep.a.amax());
    Ok(CasimirReport {
        value,
        max_dev,
        scale,
    })
}

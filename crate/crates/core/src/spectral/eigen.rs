//! Dense symmetric eigenvalues and spectrum bookkeeping.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the dimension handed to the dense eigensolver.
pub const EIGEN_DIM_CAP: usize = 4096;
const SYMMETRY_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;
/// `‖M - QΛQᵀ‖_F <= RECONSTRUCTION_TOL · ‖M‖_F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual bound `‖Mx - λx‖ <= residual · ‖M‖_F` for each eigenpair.
    pub residual: f64,
    /// Eigenvalues closer than this to zero count as zero.
    pub group: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            group: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub group_tol: f64,
    pub zero_multiplicity: usize,
    pub min_positive: Option<f64>,
    /// `max_i |λ_i + λ_(n-1-i)|` over the sorted list, i.e. the distance
    /// between the spectrum and its negation as sorted multisets.
    pub symmetry_defect: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, group_tol: f64) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let zero_multiplicity = eigenvalues.iter().filter(|l| l.abs() < group_tol).count();
        let min_positive = eigenvalues.iter().copied().find(|&l| l >= group_tol);
        let n = eigenvalues.len();
        let symmetry_defect = (0..n)
            .map(|i| (eigenvalues[i] + eigenvalues[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        Self {
            eigenvalues,
            group_tol,
            zero_multiplicity,
            min_positive,
            symmetry_defect,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Eigenvalues in descending order, `λ_1 >= λ_2 >= ..`.
    pub fn descending(&self) -> Vec<f64> {
        self.eigenvalues.iter().rev().copied().collect()
    }

    pub fn min_abs(&self) -> Option<f64> {
        self.eigenvalues.iter().map(|l| l.abs()).min_by(f64::total_cmp)
    }
}

/// Full symmetric eigendecomposition with the per-pair residuals checked.
#[derive(Debug, Clone)]
pub(crate) struct Decomposition {
    pub report: SpectrumReport,
    /// Columns are unit eigenvectors, aligned with `report.eigenvalues`.
    /// Only the tests look at them.
    #[cfg_attr(not(test), allow(dead_code))]
    pub vectors: DMatrix<f64>,
}

pub fn eigenvalues_sym(m: &DMatrix<f64>, tol: &Tolerances) -> Result<SpectrumReport> {
    decompose(m, tol, EIGEN_DIM_CAP).map(|d| d.report)
}

pub(crate) fn decompose(m: &DMatrix<f64>, tol: &Tolerances, dim_cap: usize) -> Result<Decomposition> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n > dim_cap {
        return Err(Error::InvalidParameter(format!(
            "matrix dimension {n} exceeds eigensolver cap {dim_cap}"
        )));
    }
    let defect = (m - m.transpose()).amax();
    if defect > SYMMETRY_TOL {
        return Err(Error::Asymmetric { defect });
    }
    if n == 0 {
        return Ok(Decomposition {
            report: SpectrumReport::from_eigenvalues(Vec::new(), tol.group),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_ITERATIONS).ok_or(
        Error::NoConvergence {
            dim: n,
            max_iterations: MAX_ITERATIONS,
            max_residual: f64::NAN,
        },
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let norm = m.norm();
    let mut max_residual: f64 = 0.0;
    for (c, &l) in values.iter().enumerate() {
        let x = vectors.column(c);
        let r = (m * x - x * l).norm() / x.norm();
        max_residual = max_residual.max(r);
    }
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&values));
    let reconstruction = (m - &vectors * lambda * vectors.transpose()).norm();
    if max_residual > tol.residual * norm || reconstruction > RECONSTRUCTION_TOL * norm {
        return Err(Error::NoConvergence {
            dim: n,
            max_iterations: MAX_ITERATIONS,
            max_residual,
        });
    }
    Ok(Decomposition {
        report: SpectrumReport::from_eigenvalues(values, tol.group),
        vectors,
    })
}

/// Spectrum of `I ⊗ A + B ⊗ I`: all pairwise sums.
pub fn kron_sum_spectrum(sa: &SpectrumReport, sb: &SpectrumReport) -> SpectrumReport {
    let sums = sb
        .eigenvalues
        .iter()
        .flat_map(|&b| sa.eigenvalues.iter().map(move |&a| a + b))
        .collect();
    SpectrumReport::from_eigenvalues(sums, sa.group_tol.max(sb.group_tol))
}

pub fn symmetry_check(s: &SpectrumReport, tol: f64) -> bool {
    s.symmetry_defect <= tol
}

/// Largest pointwise gap between two sorted multisets, infinite when the
/// sizes differ.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Cauchy interlacing of the eigenvalues of `b` (order `m`) within those of
/// `a` (order `n`): `λ_i(A) + tol >= μ_i(B) >= λ_(n-m+i)(A) - tol`.
pub fn interlacing_check(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let t = Tolerances::default();
    let la = eigenvalues_sym(a, &t)?.descending();
    let mb = eigenvalues_sym(b, &t)?.descending();
    Ok(interlaces(&la, &mb, tol))
}

/// Interlacing on precomputed descending spectra.
pub fn interlaces(la: &[f64], mb: &[f64], tol: f64) -> bool {
    let (n, m) = (la.len(), mb.len());
    if m > n {
        return false;
    }
    (0..m).all(|i| la[i] + tol >= mb[i] && mb[i] >= la[n - m + i] - tol)
}

//! Spectra of the signed matrices and the polynomial machinery behind
//! `beta_n`.
//!
//! Dense spectra come from [`eigen::eigenvalues_sym`]. The composed routes
//! never touch the big matrix: for the even family the spectrum of `A_k^2`
//! is the `k`-fold Kronecker sum of the spectrum of `A_1^2`, and for `P_3`
//! the spectrum of `A_(k+1)` is `{λ, ±sqrt(2 + λ^2)}` over that of `A_k`.

pub mod eigen;
pub mod poly;

use num_traits::Signed;
use serde::Serialize;

pub use eigen::{
    eigenvalues_sym, interlacing_check, kron_sum_spectrum, multiset_distance, symmetry_check,
    SpectrumReport, Tolerances,
};
pub use poly::{beta, charpoly_a1sq_check, fg_identity_check, poly_f, poly_g, IntPolynomial};

use crate::error::{Error, Result};
use crate::signed::{self, bareiss_det, Parity, SignedMatrix};

pub fn dense_spectrum(a: &SignedMatrix, tol: &Tolerances) -> Result<SpectrumReport> {
    eigenvalues_sym(&a.to_dense(), tol)
}

/// Smallest positive eigenvalue of the even `A_k`.
pub fn min_positive_eig_even(n: u32, k: u32, tol: &Tolerances) -> Result<f64> {
    let s = dense_spectrum(&signed::build_ak_even(n, k)?, tol)?;
    s.min_positive
        .ok_or_else(|| Error::InvalidParameter(format!("A_{k} (n = {n}) has no positive eigenvalue")))
}

/// Dense spectrum of `A_k^2` for the even family.
pub fn dense_square_spectrum_even(n: u32, k: u32, tol: &Tolerances) -> Result<SpectrumReport> {
    let a = signed::build_ak_even(n, k)?.to_int();
    eigenvalues_sym(&a.mul(&a).to_dense(), tol)
}

/// Spectrum of `A_k^2` as the `k`-fold Kronecker sum of the spectrum of `A_1^2`.
pub fn composed_square_spectrum_even(n: u32, k: u32, tol: &Tolerances) -> Result<SpectrumReport> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let a = signed::build_a1_even(n)?.to_int();
    let base = eigenvalues_sym(&a.mul(&a).to_dense(), tol)?;
    let mut acc = base.clone();
    for _ in 1..k {
        acc = kron_sum_spectrum(&base, &acc);
    }
    Ok(acc)
}

/// Spectrum of `A_k` obtained without a dense solve at level `k`.
///
/// Even: `±sqrt(μ)` over every second entry of the sorted composed spectrum
/// of `A_k^2`, which relies on the spectrum of `A_k` being symmetric and
/// zero-free. Odd (`P_3`): the closure map applied `k - 1` times to the
/// spectrum of `A_1`.
pub fn composed_spectrum(parity: Parity, n: u32, k: u32, tol: &Tolerances) -> Result<SpectrumReport> {
    match parity {
        Parity::Even => {
            let sq = composed_square_spectrum_even(n, k, tol)?;
            let vals = sq
                .eigenvalues
                .iter()
                .step_by(2)
                .flat_map(|&mu| {
                    let r = mu.max(0.0).sqrt();
                    [r, -r]
                })
                .collect();
            Ok(SpectrumReport::from_eigenvalues(vals, tol.group))
        }
        Parity::Odd3 => {
            if k < 1 {
                return Err(Error::InvalidParameter("k must be >= 1".into()));
            }
            let mut s = dense_spectrum(&signed::build_a1_odd3(), tol)?;
            for _ in 1..k {
                s = odd3_closure(&s);
            }
            Ok(s)
        }
    }
}

/// `{λ} ∪ {±sqrt(2 + λ^2)}` over the input spectrum.
pub fn odd3_closure(prev: &SpectrumReport) -> SpectrumReport {
    let vals = prev
        .eigenvalues
        .iter()
        .flat_map(|&l| {
            let r = (2.0 + l * l).sqrt();
            [l, r, -r]
        })
        .collect();
    SpectrumReport::from_eigenvalues(vals, prev.group_tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct Odd3SpectrumCheck {
    pub k: u32,
    pub dim: usize,
    pub zero_multiplicity: usize,
    pub min_positive: Option<f64>,
    pub symmetry_defect: f64,
    /// Distance between the spectrum of `A_k` and the closure of that of
    /// `A_(k-1)`; `None` at `k = 1`.
    pub closure_distance: Option<f64>,
    pub passed: bool,
}

/// Zero multiplicity one, smallest positive eigenvalue `sqrt(2)` and the
/// closure rule, for the `P_3^k` matrix.
pub fn odd3_spectrum_check(k: u32, tol: f64) -> Result<Odd3SpectrumCheck> {
    let t = Tolerances {
        group: tol,
        ..Tolerances::default()
    };
    let s = dense_spectrum(&signed::build_ak_odd3(k)?, &t)?;
    let closure_distance = if k >= 2 {
        let prev = dense_spectrum(&signed::build_ak_odd3(k - 1)?, &t)?;
        Some(multiset_distance(&s.eigenvalues, &odd3_closure(&prev).eigenvalues))
    } else {
        None
    };
    let min_ok = s
        .min_positive
        .is_some_and(|l| (l - std::f64::consts::SQRT_2).abs() <= tol);
    let passed = s.zero_multiplicity == 1
        && min_ok
        && s.symmetry_defect <= tol
        && closure_distance.is_none_or(|d| d <= tol);
    Ok(Odd3SpectrumCheck {
        k,
        dim: s.len(),
        zero_multiplicity: s.zero_multiplicity,
        min_positive: s.min_positive,
        symmetry_defect: s.symmetry_defect,
        closure_distance,
        passed,
    })
}

/// No eigenvalue of `A_k` within the grouping tolerance of zero, and
/// `det(A_1) = ±1` exactly.
pub fn nonsingularity_check(parity: Parity, n: u32, k: u32, tol: &Tolerances) -> Result<bool> {
    let a1 = match parity {
        Parity::Odd3 => signed::build_a1_odd3(),
        Parity::Even => signed::build_a1_even(n)?,
    };
    let det = bareiss_det(
        a1.to_int()
            .to_dense_i64()
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect(),
    );
    if det.abs() != 1.into() {
        return Ok(false);
    }
    let ak = signed::build(parity, n, k, crate::grid::DEFAULT_SIZE_CAP)?;
    let s = dense_spectrum(&ak, tol)?;
    Ok(s.min_abs().is_some_and(|m| m > tol.group))
}

pub fn nonsingularity_check_even(n: u32, k: u32, tol: &Tolerances) -> Result<bool> {
    nonsingularity_check(Parity::Even, n, k, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form of the smallest positive root of g_n: the eigenvalues of
    /// the even A_1 are 2cos(jπ/(2n+1)), so the smallest square is
    /// 4 sin^2(π / (2(2n+1))).
    fn beta_closed_form(n: u32) -> f64 {
        let s = (std::f64::consts::PI / (2.0 * (2 * n + 1) as f64)).sin();
        4.0 * s * s
    }

    #[test]
    fn min_positive_even_examples() {
        let t = Tolerances::default();
        assert!((min_positive_eig_even(1, 4, &t).unwrap() - 2.0).abs() < 1e-10);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((min_positive_eig_even(2, 1, &t).unwrap() - golden).abs() < 1e-10);
        assert!((min_positive_eig_even(2, 1, &t).unwrap() - 0.6180339887).abs() < 1e-9);
        let b2 = (3.0 - 5f64.sqrt()) / 2.0;
        let v = min_positive_eig_even(2, 2, &t).unwrap();
        assert!((v - (2.0 * b2).sqrt()).abs() < 1e-10);
        assert!((v - 0.8740320489).abs() < 1e-9);
    }

    #[test]
    fn beta_agrees_with_closed_form() {
        for n in 1..=12 {
            let b = beta(n, 1e-13).unwrap();
            assert!((b - beta_closed_form(n)).abs() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn min_positive_even_matches_sqrt_k_beta() {
        let t = Tolerances::default();
        for n in 1..=3 {
            let b = beta(n, 1e-13).unwrap();
            for k in 1..=3 {
                let v = min_positive_eig_even(n, k, &t).unwrap();
                assert!((v - (k as f64 * b).sqrt()).abs() <= 1e-8, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn odd3_examples() {
        let c = odd3_spectrum_check(1, 1e-8).unwrap();
        assert!(c.passed);
        assert_eq!(c.dim, 3);
        let c = odd3_spectrum_check(2, 1e-8).unwrap();
        assert!(c.passed);
        assert_eq!(c.dim, 9);
        assert_eq!(c.zero_multiplicity, 1);

        let t = Tolerances::default();
        let s = dense_spectrum(&signed::build_ak_odd3(2).unwrap(), &t).unwrap();
        let r2 = 2f64.sqrt();
        let hand = [0.0, r2, -r2, r2, -r2, 2.0, -2.0, 2.0, -2.0];
        assert!(multiset_distance(&s.eigenvalues, &hand) < 1e-12);
    }

    #[test]
    fn composed_vs_dense() {
        let t = Tolerances::default();
        for n in 1..=3 {
            for k in 1..=3 {
                let dense = dense_square_spectrum_even(n, k, &t).unwrap();
                let comp = composed_square_spectrum_even(n, k, &t).unwrap();
                assert!(multiset_distance(&dense.eigenvalues, &comp.eigenvalues) <= 1e-7);
                let a = dense_spectrum(&signed::build_ak_even(n, k).unwrap(), &t).unwrap();
                let c = composed_spectrum(Parity::Even, n, k, &t).unwrap();
                assert!(multiset_distance(&a.eigenvalues, &c.eigenvalues) <= 1e-7);
            }
        }
        for k in 1..=4 {
            let a = dense_spectrum(&signed::build_ak_odd3(k).unwrap(), &t).unwrap();
            let c = composed_spectrum(Parity::Odd3, 1, k, &t).unwrap();
            assert!(multiset_distance(&a.eigenvalues, &c.eigenvalues) <= 1e-9);
        }
        // n = 1: A_1^2 = I, so A_2^2 has spectrum {2, 2, 2, 2}.
        let c = composed_square_spectrum_even(1, 2, &t).unwrap();
        assert!(multiset_distance(&c.eigenvalues, &[2.0; 4]) < 1e-14);
    }

    #[test]
    fn symmetry_of_built_spectra() {
        let t = Tolerances::default();
        let s = dense_spectrum(&signed::build_ak_even(2, 2).unwrap(), &t).unwrap();
        assert!(symmetry_check(&s, 1e-8));
        let s = dense_spectrum(&signed::build_ak_odd3(3).unwrap(), &t).unwrap();
        assert!(symmetry_check(&s, 1e-8));
    }

    #[test]
    fn nonsingularity_examples() {
        let t = Tolerances::default();
        assert!(nonsingularity_check_even(1, 1, &t).unwrap());
        assert!(nonsingularity_check_even(2, 2, &t).unwrap());
        assert!(!nonsingularity_check(Parity::Odd3, 1, 1, &t).unwrap());
    }
}

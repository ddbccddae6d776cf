use alloc::format;

use super::eigen::{herm_eig, herm_eigenvalues};
use super::matrix::HermitianMatrix;
use crate::math;
use crate::{Error, Result};

/// Default floor applied inside `log₂` for full-rank (smoothed) inputs.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-300;

/// Eigenvalues at or below this contribute zero to `−λ log₂ λ`.
pub const ZERO_EIGENVALUE_THRESHOLD: f64 = 1e-15;

/// Negative round-off tolerated (and clamped) in positive semidefinite inputs.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Maximum allowed `|tr ρ − 1|` for density-matrix arguments.
pub const TRACE_TOLERANCE: f64 = 1e-6;

/// A reference eigenvalue below this is treated as outside the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// `V · diag(log₂ max(λ_i, floor)) · V†` for a positive semidefinite matrix.
pub fn log_psd(h: &HermitianMatrix, floor: f64) -> Result<HermitianMatrix> {
    let eig = herm_eig(h)?;
    check_psd(eig.eigenvalues.first().copied())?;
    Ok(eig.map_eigenvalues(|l| math::log2(l.max(floor))))
}

/// `H(ρ) = −tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    check_trace(rho)?;
    let values = herm_eigenvalues(rho)?;
    check_psd(values.first().copied())?;
    Ok(entropy_of_spectrum(&values))
}

/// `−Σ λ log₂ λ` over a spectrum, skipping eigenvalues below
/// [`ZERO_EIGENVALUE_THRESHOLD`].
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&l| math::entropy_term(l, ZERO_EIGENVALUE_THRESHOLD))
        .sum()
}

/// `D(ρ‖σ) = tr ρ (log₂ ρ − log₂ σ)` in bits.
///
/// The cross term is evaluated in the eigenbasis of `σ`; an eigenvalue of `σ`
/// below [`SUPPORT_THRESHOLD`] on which `ρ` has weight is a support
/// violation.
pub fn relative_entropy(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: "relative entropy",
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    check_trace(rho)?;
    check_trace(sigma)?;
    let rho_values = herm_eigenvalues(rho)?;
    check_psd(rho_values.first().copied())?;
    let neg_entropy = -entropy_of_spectrum(&rho_values);

    let sigma_eig = herm_eig(sigma)?;
    check_psd(sigma_eig.eigenvalues.first().copied())?;
    let mut cross = 0.0;
    for (k, &lambda) in sigma_eig.eigenvalues.iter().enumerate() {
        let column = sigma_eig.eigenvectors.column(k);
        let weight = rho.expectation(&column);
        if lambda < SUPPORT_THRESHOLD {
            if weight > SUPPORT_THRESHOLD {
                return Err(Error::SupportViolation {
                    eigenvalue: lambda,
                    weight,
                });
            }
            continue;
        }
        cross += weight * math::log2(lambda);
    }
    Ok(neg_entropy - cross)
}

fn check_psd(min_eigenvalue: Option<f64>) -> Result<()> {
    match min_eigenvalue {
        Some(l) if l < -PSD_TOLERANCE => Err(Error::NotPositiveSemidefinite { min_eigenvalue: l }),
        _ => Ok(()),
    }
}

fn check_trace(rho: &HermitianMatrix) -> Result<()> {
    let t = rho.trace();
    if math::abs(t - 1.0) > TRACE_TOLERANCE {
        return Err(Error::InvalidState(format!("trace {t} differs from 1")));
    }
    Ok(())
}

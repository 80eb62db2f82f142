//! Shifted power iteration for nonnegative operators.

use alloc::vec;

use crate::error::{Error, Result};
use crate::sparse::{LinearOperator, SparseOperator};

use super::{SpectralMethod, SpectralResult};

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

/// Spectral radius of a nonnegative operator by power iteration on `A + I`.
///
/// The shift adds 1 to every eigenvalue, which keeps the Perron root strictly
/// dominant even for periodic matrices such as the non-backtracking matrix of
/// a ring. Convergence needs both successive estimates within `tol` and the
/// relative residual within `tol`; otherwise the last estimate comes back with
/// `converged = false`.
pub fn power_spectral_radius(op: &SparseOperator, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    if !op.is_nonnegative() {
        return Err(Error::NegativeEntries);
    }
    Ok(shifted_power(op, tol, max_iter))
}

pub(crate) fn shifted_power<A: LinearOperator + ?Sized>(op: &A, tol: f64, max_iter: usize) -> SpectralResult {
    let n = op.dim();
    if n == 0 {
        return SpectralResult {
            radius: 0.0,
            iterations: 0,
            converged: true,
            residual: 0.0,
            method: SpectralMethod::PowerShifted,
        };
    }
    let mut v = vec![1.0 / libm::sqrt(n as f64); n];
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        op.apply(&v, &mut w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += vi;
        }
        // Rayleigh quotient of the shifted operator, v is a unit vector
        let mu: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        lambda = mu - 1.0;
        let scale = lambda.max(1.0);
        let r: f64 = w.iter().zip(&v).map(|(a, b)| (a - mu * b) * (a - mu * b)).sum();
        residual = libm::sqrt(r) / scale;

        let wn = norm(&w);
        if wn == 0.0 {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
        if libm::fabs(lambda - prev) <= tol * scale && residual <= tol {
            return SpectralResult {
                radius: lambda.max(0.0),
                iterations: it,
                converged: true,
                residual,
                method: SpectralMethod::PowerShifted,
            };
        }
        prev = lambda;
    }
    SpectralResult {
        radius: lambda.max(0.0),
        iterations: max_iter,
        converged: false,
        residual,
        method: SpectralMethod::PowerShifted,
    }
}

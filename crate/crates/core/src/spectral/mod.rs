//! Spectral radii of the non-backtracking family.

pub mod dag;
pub mod dense;
pub mod krylov;
pub mod multiplicity;
pub mod power;

pub use dag::{dag_check, strongly_connected_components};
pub use dense::{dense_eigenvalues, hessenberg_eigenvalues, match_nonzero_spectra, SpectrumMatch, DEFAULT_DENSE_CAP};
pub use krylov::{spectral_radius_of_b2_via_m, KrylovOptions};
pub use multiplicity::{
    charpoly_mod, reduced_charpoly_mod, remove_nearest, root_multiplicity, same_reduced_spectrum, strip_exceptional,
};
pub use power::power_spectral_radius;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMethod {
    /// Power iteration on `A + I`.
    PowerShifted,
    DenseOracle,
    /// Restarted Arnoldi on the reduced operator `M`.
    KrylovM,
    /// The operator's digraph is acyclic, so it is nilpotent.
    DeclaredZeroDag,
}

impl SpectralMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralMethod::PowerShifted => "power_shifted",
            SpectralMethod::DenseOracle => "dense_oracle",
            SpectralMethod::KrylovM => "krylov_m",
            SpectralMethod::DeclaredZeroDag => "declared_zero_dag",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResult {
    pub radius: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `||A v - radius v|| / max(1, radius)` for the final unit vector.
    pub residual: f64,
    pub method: SpectralMethod,
}

impl SpectralResult {
    pub(crate) fn declared_zero() -> Self {
        SpectralResult {
            radius: 0.0,
            iterations: 0,
            converged: true,
            residual: 0.0,
            method: SpectralMethod::DeclaredZeroDag,
        }
    }
}

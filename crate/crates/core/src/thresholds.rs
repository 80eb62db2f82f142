//! Threshold estimates `p_c^(g) = 1 / lambda_B^(g)` and their relative errors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{degree_stats, Graph};
use crate::nbt::build_b_with_cap;
use crate::paths::DEFAULT_PATH_CAP;
use crate::sparse::SparseOperator;
use crate::spectral::{
    dag_check, power_spectral_radius, spectral_radius_of_b2_via_m, KrylovOptions, SpectralMethod, SpectralResult,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};

/// Radii within this relative distance of 1 are treated as exactly 1.
pub const UNIT_SNAP: f64 = 1e-8;

/// When to compute the order-2 radius on the reduced operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastRoute {
    /// Use `M` when it is smaller than `B^(2)`, i.e. `P_2 > 8E`.
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fast: FastRoute,
    pub krylov_dim: usize,
    pub path_cap: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            fast: FastRoute::Auto,
            krylov_dim: 30,
            path_cap: DEFAULT_PATH_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEstimate {
    pub order: usize,
    pub lambda: f64,
    pub pc: f64,
    /// Set when `1 / lambda` would exceed 1 and `pc` was clamped.
    pub clamped: bool,
    pub method: SpectralMethod,
    pub spectral: SpectralResult,
}

impl ThresholdEstimate {
    pub fn from_spectral(order: usize, spectral: SpectralResult) -> Self {
        let raw = spectral.radius;
        let (lambda, pc, clamped) = if libm::fabs(raw - 1.0) <= UNIT_SNAP {
            (1.0, 1.0, false)
        } else if raw > 1.0 {
            (raw, 1.0 / raw, false)
        } else {
            (raw, 1.0, true)
        };
        ThresholdEstimate { order, lambda, pc, clamped, method: spectral.method, spectral }
    }
}

/// Whether the order-2 radius should go through `M`.
pub fn use_fast_route(g: &Graph, fast: FastRoute) -> bool {
    match fast {
        FastRoute::On => true,
        FastRoute::Off => false,
        FastRoute::Auto => degree_stats(g).map(|s| s.length2_paths > 4 * s.degree_sum).unwrap_or(false),
    }
}

/// Spectral radius of `B^(order)`, exact zero for acyclic operators.
pub fn spectral_radius(g: &Graph, order: usize, opts: &EstimateOptions) -> Result<SpectralResult> {
    if order == 2 && use_fast_route(g, opts.fast) {
        let k = KrylovOptions {
            dim: opts.krylov_dim,
            tol: opts.tol,
            max_iter: opts.max_iter,
            path_cap: opts.path_cap,
            ..KrylovOptions::default()
        };
        return spectral_radius_of_b2_via_m(g, &k);
    }
    let b = build_b_with_cap(g, order, opts.path_cap)?.op;
    radius_of_operator(&b, opts)
}

/// Radius of an explicit nonnegative operator: exact zero when its digraph is
/// acyclic, shifted power iteration otherwise.
pub fn radius_of_operator(b: &SparseOperator, opts: &EstimateOptions) -> Result<SpectralResult> {
    if dag_check(b) {
        return Ok(SpectralResult::declared_zero());
    }
    power_spectral_radius(b, opts.tol, opts.max_iter)
}

/// `p_c^(order)`. Order 0 uses the adjacency matrix, order 1 the
/// non-backtracking matrix.
pub fn estimate_pc(g: &Graph, order: usize, opts: &EstimateOptions) -> Result<ThresholdEstimate> {
    let r = spectral_radius(g, order, opts)?;
    if !r.converged {
        return Err(Error::NotConverged(r));
    }
    Ok(ThresholdEstimate::from_spectral(order, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeError {
    pub order: usize,
    pub pc: f64,
    /// `(p_c - p_c^(g)) / p_c`.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub empirical: f64,
    pub errors: Vec<RelativeError>,
    /// Orders whose estimate is below the estimate of a lower order.
    pub ordering_violations: Vec<usize>,
}

pub fn compare(theoretical: &[ThresholdEstimate], empirical: f64) -> Result<ErrorReport> {
    if !(empirical > 0.0) {
        return Err(Error::ZeroEmpiricalThreshold);
    }
    let errors = theoretical
        .iter()
        .map(|t| RelativeError { order: t.order, pc: t.pc, relative_error: (empirical - t.pc) / empirical })
        .collect();
    let mut sorted: Vec<&ThresholdEstimate> = theoretical.iter().collect();
    sorted.sort_by_key(|t| t.order);
    let mut ordering_violations = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for t in sorted {
        if t.pc < best {
            ordering_violations.push(t.order);
        }
        best = best.max(t.pc);
    }
    Ok(ErrorReport { empirical, errors, ordering_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ring, triangle_ring};

    fn est(order: usize, pc: f64) -> ThresholdEstimate {
        ThresholdEstimate::from_spectral(
            order,
            SpectralResult {
                radius: 1.0 / pc,
                iterations: 1,
                converged: true,
                residual: 0.0,
                method: SpectralMethod::PowerShifted,
            },
        )
    }

    #[test]
    fn ring_estimates() {
        let g = ring(200).unwrap();
        let o = EstimateOptions::default();
        let p0 = estimate_pc(&g, 0, &o).unwrap();
        assert!((p0.pc - 0.5).abs() <= 1e-9);
        let p1 = estimate_pc(&g, 1, &o).unwrap();
        assert_eq!((p1.pc, p1.lambda, p1.clamped), (1.0, 1.0, false));
    }

    #[test]
    fn triangle_ring_order2_is_one() {
        let g = triangle_ring(10).unwrap();
        let p2 = estimate_pc(&g, 2, &EstimateOptions::default()).unwrap();
        assert_eq!(p2.pc, 1.0);
        assert_eq!(p2.lambda, 1.0);
    }

    #[test]
    fn dag_estimate_is_clamped() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = estimate_pc(&g, 1, &EstimateOptions::default()).unwrap();
        assert_eq!((p.pc, p.lambda, p.clamped), (1.0, 0.0, true));
        assert_eq!(p.method, SpectralMethod::DeclaredZeroDag);
    }

    #[test]
    fn compare_karate_known_values() {
        let r = compare(&[est(0, 0.1487), est(1, 0.1889), est(2, 0.2097)], 0.2310).unwrap();
        let e: Vec<f64> = r.errors.iter().map(|e| e.relative_error).collect();
        assert!((e[0] - 0.356).abs() < 1e-3 && (e[1] - 0.182).abs() < 1e-3 && (e[2] - 0.092).abs() < 1e-3, "{e:?}");
        assert!(r.ordering_violations.is_empty());
    }

    #[test]
    fn compare_usa_known_values() {
        let r = compare(&[est(0, 0.1880), est(1, 0.2400), est(2, 0.2723)], 0.3610).unwrap();
        let e: Vec<f64> = r.errors.iter().map(|e| e.relative_error).collect();
        assert!((e[0] - 0.479).abs() < 1e-3 && (e[1] - 0.335).abs() < 1e-3 && (e[2] - 0.246).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn compare_exact_and_errors() {
        let r = compare(&[est(0, 0.3), est(1, 0.3)], 0.3).unwrap();
        assert!(r.errors.iter().all(|e| e.relative_error == 0.0));
        assert!(matches!(compare(&[est(0, 0.3)], 0.0), Err(Error::ZeroEmpiricalThreshold)));
        let r = compare(&[est(0, 0.4), est(1, 0.3)], 0.5).unwrap();
        assert_eq!(r.ordering_violations, [1]);
    }
}

//! Second-order non-backtracking radius through the reduced operator `M`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::graph::Graph;
use crate::nbt::{build_b_with_cap, MOperator};
use crate::paths::DEFAULT_PATH_CAP;
use crate::sparse::LinearOperator;

use super::dag::dag_check;
use super::dense::hessenberg_eigenvalues;
use super::power::shifted_power;
use super::{SpectralMethod, SpectralResult, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Acceptance margin above 1 for the value found on `M`. The spurious
/// eigenvalues `M` may carry all have modulus exactly 1.
pub const M_ACCEPT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Arnoldi basis size per restart.
    pub dim: usize,
    pub max_restarts: usize,
    pub tol: f64,
    /// Iteration limit for the explicit fallback.
    pub max_iter: usize,
    /// Path cap for building the explicit fallback operator.
    pub path_cap: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            dim: 30,
            max_restarts: 500,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            path_cap: DEFAULT_PATH_CAP,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Spectral radius of `B^(2)` computed on the `8E`-dimensional operator `M`.
///
/// Runs explicitly restarted Arnoldi on `M`, tracking the Ritz value with the
/// largest real part. A converged real value above `1 + 1e-6` is accepted;
/// anything else (value near or below 1, complex target, no convergence)
/// falls back to power iteration on the explicit `B^(2)`.
pub fn spectral_radius_of_b2_via_m(g: &Graph, opts: &KrylovOptions) -> Result<SpectralResult> {
    if g.edge_count() > 0 {
        let m = MOperator::new(g);
        if let Some(found) = arnoldi_dominant(&m, opts) {
            if found.converged && found.radius > 1.0 + M_ACCEPT_MARGIN {
                return Ok(found);
            }
        }
    }
    let b2 = build_b_with_cap(g, 2, opts.path_cap)?.op;
    if dag_check(&b2) {
        return Ok(SpectralResult::declared_zero());
    }
    Ok(shifted_power(&b2, opts.tol, opts.max_iter))
}

/// Restarted Arnoldi for the eigenvalue of largest real part. Returns `None`
/// if the target never became real.
pub(crate) fn arnoldi_dominant<A: LinearOperator>(op: &A, opts: &KrylovOptions) -> Option<SpectralResult> {
    let n = op.dim();
    if n == 0 {
        return None;
    }
    let k_max = opts.dim.max(2).min(n);
    // deterministic, positive, not too symmetric start
    let mut start: Vec<f64> =
        (0..n).map(|i| 1.0 + 0.1 * ((i.wrapping_mul(2654435761) % 1000) as f64 / 1000.0)).collect();
    let s = norm(&start);
    start.iter_mut().for_each(|x| *x /= s);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k_max + 1);
    let mut h = vec![0.0; (k_max + 1) * k_max];
    let mut last: Option<SpectralResult> = None;
    let mut total = 0;

    for restart in 0..opts.max_restarts {
        basis.clear();
        basis.push(start.clone());
        h.iter_mut().for_each(|x| *x = 0.0);
        let mut k = k_max;
        let mut breakdown = false;
        for j in 0..k_max {
            let mut w = vec![0.0; n];
            op.apply(&basis[j], &mut w);
            total += 1;
            let wnorm0 = norm(&w);
            // Gram-Schmidt twice for orthogonality
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(&w, v);
                    h[i * k_max + j] += c;
                    w.iter_mut().zip(v).for_each(|(a, b)| *a -= c * b);
                }
            }
            let beta = norm(&w);
            h[(j + 1) * k_max + j] = beta;
            if beta <= 1e-12 * wnorm0.max(1e-300) {
                k = j + 1;
                breakdown = true;
                break;
            }
            if j + 1 < k_max {
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
            }
        }

        let mut hk = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                hk[i * k + j] = h[i * k_max + j];
            }
        }
        let ritz = hessenberg_eigenvalues(hk.clone(), k).ok()?;
        let theta = *ritz.iter().max_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(core::cmp::Ordering::Equal))?;
        let y = ritz_vector(&hk, k, theta);
        let beta = if breakdown { 0.0 } else { h[k * k_max + k - 1] };
        let scale = theta.norm().max(1.0);
        let residual = beta * y[k - 1].norm() / scale;

        let real = libm::fabs(theta.im) <= 1e-9 * scale;
        let result = SpectralResult {
            radius: theta.re,
            iterations: total,
            converged: real && residual <= opts.tol,
            residual,
            method: SpectralMethod::KrylovM,
        };
        if result.converged {
            return Some(result);
        }
        last = real.then_some(result);
        if restart + 1 == opts.max_restarts {
            break;
        }

        let mut x = vec![0.0; n];
        for (yi, v) in y.iter().zip(&basis) {
            let c = yi.re + yi.im;
            x.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
        }
        let xn = norm(&x);
        if xn == 0.0 || !xn.is_finite() {
            break;
        }
        x.iter_mut().for_each(|a| *a /= xn);
        start = x;
    }
    last
}

/// Unit eigenvector of the small dense matrix `h` for the eigenvalue `theta`,
/// by two steps of inverse iteration.
fn ritz_vector(h: &[f64], k: usize, theta: Complex64) -> Vec<Complex64> {
    let hnorm: f64 = h.iter().map(|x| libm::fabs(*x)).sum::<f64>().max(1.0);
    let mut a: Vec<Complex64> = h.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for i in 0..k {
        a[i * k + i] -= theta;
    }
    // LU with partial pivoting, tiny pivots nudged
    let mut perm: Vec<usize> = (0..k).collect();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i * k + c].norm().partial_cmp(&a[j * k + c].norm()).unwrap()).unwrap();
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            perm.swap(p, c);
        }
        if a[c * k + c].norm() < f64::EPSILON * hnorm {
            a[c * k + c] = Complex64::new(f64::EPSILON * hnorm, 0.0);
        }
        let piv = a[c * k + c];
        for i in c + 1..k {
            let f = a[i * k + c] / piv;
            a[i * k + c] = f;
            for j in c + 1..k {
                let t = a[c * k + j];
                a[i * k + j] -= f * t;
            }
        }
    }
    let mut y = vec![Complex64::new(1.0, 0.0); k];
    for _ in 0..2 {
        let mut b: Vec<Complex64> = perm.iter().map(|&p| y[p]).collect();
        for i in 0..k {
            for j in 0..i {
                let t = a[i * k + j] * b[j];
                b[i] -= t;
            }
        }
        for i in (0..k).rev() {
            for j in i + 1..k {
                let t = a[i * k + j] * b[j];
                b[i] -= t;
            }
            b[i] /= a[i * k + i];
        }
        let nb = libm::sqrt(b.iter().map(|z| z.norm_sqr()).sum());
        y = b.into_iter().map(|z| z / nb).collect();
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;
    use crate::nbt::build_b;
    use crate::spectral::power_spectral_radius;

    #[test]
    fn triangle_free_ring_falls_back() {
        let g = ring(6).unwrap();
        let r = spectral_radius_of_b2_via_m(&g, &KrylovOptions::default()).unwrap();
        assert_eq!(r.method, SpectralMethod::PowerShifted);
        assert!((r.radius - 1.0).abs() < 1e-9);
        let b1 = power_spectral_radius(&build_b(&g, 1).unwrap().op, 1e-10, 100_000).unwrap();
        assert!((r.radius - b1.radius).abs() < 1e-9);
    }

    #[test]
    fn dense_graph_uses_m() {
        // K5 minus one edge: plenty of length-2 paths and triangles
        let mut e = Vec::new();
        for i in 0..5u32 {
            for j in i + 1..5 {
                if (i, j) != (0, 1) {
                    e.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(5, e).unwrap();
        let via_m = spectral_radius_of_b2_via_m(&g, &KrylovOptions::default()).unwrap();
        let direct = power_spectral_radius(&build_b(&g, 2).unwrap().op, 1e-10, 100_000).unwrap();
        assert!((via_m.radius - direct.radius).abs() < 1e-6, "{via_m:?} {direct:?}");
    }
}

//! Dense eigenvalues for small operators.
//!
//! Balancing, reduction to Hessenberg form by stabilised elimination, then the
//! Francis double-shift QR iteration. The operator is first split into its
//! strongly connected blocks, which keeps the dense problems small and makes
//! structurally nilpotent parts exact zeros.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::{LinearOperator, SparseOperator};

use super::dag::strongly_connected_components;

pub const DEFAULT_DENSE_CAP: usize = 2000;

const MAX_QR_ITERATIONS: usize = 200;

/// Full complex spectrum, ordered by modulus, then real part, then imaginary
/// part, all descending.
pub fn dense_eigenvalues(op: &SparseOperator, dim_cap: usize) -> Result<Vec<Complex64>> {
    let n = op.dim();
    if n > dim_cap {
        return Err(Error::DimensionTooLarge { dim: n, cap: dim_cap });
    }
    let mut out = Vec::with_capacity(n);
    let mut local = vec![usize::MAX; n];
    for comp in strongly_connected_components(op) {
        let k = comp.len();
        if k == 1 {
            out.push(Complex64::new(op.get(comp[0], comp[0]), 0.0));
            continue;
        }
        for (pos, &u) in comp.iter().enumerate() {
            local[u] = pos;
        }
        let mut a = vec![0.0; k * k];
        for (r, &u) in comp.iter().enumerate() {
            let (cols, vals) = op.row(u);
            for (&c, &v) in cols.iter().zip(vals) {
                let c = local[c as usize];
                if c != usize::MAX {
                    a[r * k + c] = v;
                }
            }
        }
        for &u in &comp {
            local[u] = usize::MAX;
        }
        out.extend(hessenberg_eigenvalues(a, k)?);
    }
    sort_spectrum(&mut out);
    Ok(out)
}

pub(crate) fn sort_spectrum(values: &mut [Complex64]) {
    // compare on a 1e-9 grid so rounding noise cannot reorder ties
    let q = |x: f64| libm::round(x * 1e9) as i64;
    values.sort_by_key(|v| core::cmp::Reverse((q(v.norm()), q(v.re), q(v.im))));
}

/// Eigenvalues of a dense row-major `n x n` matrix (consumed).
pub fn hessenberg_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<Complex64>> {
    assert_eq!(a.len(), n * n);
    balance(&mut a, n);
    to_hessenberg(&mut a, n);
    hqr(&mut a, n)
}

fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += libm::fabs(a[j * n + i]);
                    r += libm::fabs(a[i * n + j]);
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i * n + j] *= g;
                    }
                    for j in 0..n {
                        a[j * n + i] *= f;
                    }
                }
            }
        }
    }
}

/// Similarity reduction to upper Hessenberg form by Gaussian elimination
/// with pivoting. Entries below the subdiagonal are zeroed afterwards.
fn to_hessenberg(a: &mut [f64], n: usize) {
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0;
        let mut piv = m;
        for j in m..n {
            if libm::fabs(a[j * n + m - 1]) > libm::fabs(x) {
                x = a[j * n + m - 1];
                piv = j;
            }
        }
        if piv != m {
            for j in m - 1..n {
                a.swap(piv * n + j, m * n + j);
            }
            for j in 0..n {
                a.swap(j * n + piv, j * n + m);
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[i * n + m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i * n + m - 1] = y;
                    for j in m..n {
                        a[i * n + j] -= y * a[m * n + j];
                    }
                    for j in 0..n {
                        a[j * n + m] += y * a[j * n + i];
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[i * n + j] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        libm::fabs(a)
    } else {
        -libm::fabs(a)
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
fn hqr(a: &mut [f64], n: usize) -> Result<Vec<Complex64>> {
    let at = |a: &[f64], i: usize, j: usize| a[i * n + j];
    let mut wr = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += libm::fabs(at(a, i, j));
        }
    }
    let eps = f64::EPSILON;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l > 0 {
                let mut s = libm::fabs(at(a, l - 1, l - 1)) + libm::fabs(at(a, l, l));
                if s == 0.0 {
                    s = anorm;
                }
                if libm::fabs(at(a, l, l - 1)) <= eps * s {
                    a[l * n + l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, nu, nu);
            if l == nu {
                wr[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                let mut y = at(a, nu - 1, nu - 1);
                let mut w = at(a, nu, nu - 1) * at(a, nu - 1, nu);
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = libm::sqrt(libm::fabs(q));
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nu - 1] = Complex64::new(x + z, 0.0);
                        wr[nu] = wr[nu - 1];
                        if z != 0.0 {
                            wr[nu] = Complex64::new(x - w / z, 0.0);
                        }
                    } else {
                        wr[nu] = Complex64::new(x + p, -z);
                        wr[nu - 1] = wr[nu].conj();
                    }
                    nn -= 2;
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return Err(Error::invalid("dense eigenvalue iteration did not converge"));
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 0..=nu {
                            a[i * n + i] -= x;
                        }
                        let s = libm::fabs(at(a, nu, nu - 1)) + libm::fabs(at(a, nu - 1, nu - 2));
                        let k = 0.75 + 0.01 * (its / 10) as f64;
                        x = k * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r);
                    let mut m = nu - 2;
                    loop {
                        let z = at(a, m, m);
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / at(a, m + 1, m) + at(a, m, m + 1);
                        q = at(a, m + 1, m + 1) - z - r - s;
                        r = at(a, m + 2, m + 1);
                        let s = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = libm::fabs(at(a, m, m - 1)) * (libm::fabs(q) + libm::fabs(r));
                        let v = libm::fabs(p)
                            * (libm::fabs(at(a, m - 1, m - 1)) + libm::fabs(z) + libm::fabs(at(a, m + 1, m + 1)));
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nu - 1 {
                        a[(i + 2) * n + i] = 0.0;
                        if i != m {
                            a[(i + 2) * n + i - 1] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = at(a, k, k - 1);
                            q = at(a, k + 1, k - 1);
                            r = 0.0;
                            if k + 1 != nu {
                                r = at(a, k + 2, k - 1);
                            }
                            x = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign(libm::sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k * n + k - 1] = -a[k * n + k - 1];
                                }
                            } else {
                                a[k * n + k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                let mut pp = at(a, k, j) + q * at(a, k + 1, j);
                                if k + 1 != nu {
                                    pp += r * at(a, k + 2, j);
                                    a[(k + 2) * n + j] -= pp * z;
                                }
                                a[(k + 1) * n + j] -= pp * y;
                                a[k * n + j] -= pp * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * at(a, i, k) + y * at(a, i, k + 1);
                                if k + 1 != nu {
                                    pp += z * at(a, i, k + 2);
                                    a[i * n + k + 2] -= pp * r;
                                }
                                a[i * n + k + 1] -= pp * q;
                                a[i * n + k] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 0 || l as isize + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr)
}

/// Outcome of comparing two nonzero spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMatch {
    /// Values of the first spectrum left unmatched.
    pub only_first: Vec<Complex64>,
    /// Values of the second spectrum left unmatched.
    pub only_second: Vec<Complex64>,
}

impl SpectrumMatch {
    pub fn is_equal(&self) -> bool {
        self.only_first.is_empty() && self.only_second.is_empty()
    }
}

/// Replaces each cluster of nearby values (single linkage within `radius`)
/// by the cluster mean. A defective eigenvalue of multiplicity `k` comes out
/// of QR as a ring of radius about `eps^(1/k)`; its mean is accurate again.
pub fn merge_clusters(values: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut sum = vec![Complex64::new(0.0, 0.0); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sum[r] += values[i];
        count[r] += 1;
    }
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            sum[r] / count[r] as f64
        })
        .collect()
}

/// Matches the nonzero parts of two spectra as multisets.
///
/// Both inputs have clusters merged, values with modulus `<= tol` dropped,
/// and values within `tol` of any `exclude` point dropped; the rest are
/// paired greedily within `tol`.
pub fn match_nonzero_spectra(
    first: &[Complex64],
    second: &[Complex64],
    exclude: &[Complex64],
    tol: f64,
) -> SpectrumMatch {
    let clean = |vals: &[Complex64]| -> Vec<Complex64> {
        merge_clusters(vals, 1e-3)
            .into_iter()
            .filter(|v| v.norm() > tol && exclude.iter().all(|e| (v - e).norm() > tol))
            .collect()
    };
    let a = clean(first);
    let mut b = clean(second);
    let mut only_first = Vec::new();
    for v in a {
        let best = b
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (v - w).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal));
        match best {
            Some((i, d)) if d <= tol => {
                b.swap_remove(i);
            }
            _ => only_first.push(v),
        }
    }
    SpectrumMatch { only_first, only_second: b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;
    use crate::graph::Graph;
    use crate::nbt::{build_b, MOperator};
    use crate::sparse::OperatorKind;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-9
    }

    #[test]
    fn ring4_b1_roots_of_unity() {
        let b = build_b(&ring(4).unwrap(), 1).unwrap().op;
        let ev = dense_eigenvalues(&b, DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(ev.len(), 8);
        let want = [(1.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 1.0), (0.0, -1.0), (0.0, -1.0), (-1.0, 0.0), (-1.0, 0.0)];
        let mut left: Vec<Complex64> = ev.clone();
        for (re, im) in want {
            let pos = left.iter().position(|&v| close(v, re, im)).unwrap_or_else(|| panic!("{ev:?}"));
            left.remove(pos);
        }
        // ordering: modulus ties broken by real part, then imaginary part
        assert!(close(ev[0], 1.0, 0.0) && close(ev[2], 0.0, 1.0) && close(ev[7], -1.0, 0.0));
    }

    #[test]
    fn zero_matrix_spectrum() {
        let z = SparseOperator::zero(5, OperatorKind::Generic);
        let ev = dense_eigenvalues(&z, 10).unwrap();
        assert!(ev.iter().all(|v| v.norm() == 0.0) && ev.len() == 5);
    }

    #[test]
    fn dense_cap() {
        let z = SparseOperator::zero(5, OperatorKind::Generic);
        assert!(matches!(dense_eigenvalues(&z, 4), Err(Error::DimensionTooLarge { dim: 5, cap: 4 })));
    }

    #[test]
    fn general_matrix() {
        // companion matrix of (x-1)(x-2)(x-3)(x^2+1)
        // x^5 - 6x^4 + 12x^3 - 12x^2 + 11x - 6
        let coeffs = [6.0, -11.0, 12.0, -12.0, 6.0];
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 1..n {
            a[i * n + i - 1] = 1.0;
        }
        for i in 0..n {
            a[i * n + n - 1] = coeffs[i];
        }
        let mut ev = hessenberg_eigenvalues(a, n).unwrap();
        sort_spectrum(&mut ev);
        assert!(close(ev[0], 3.0, 0.0) && close(ev[1], 2.0, 0.0));
        assert!(close(ev[2], 1.0, 0.0) && close(ev[3], 0.0, 1.0) && close(ev[4], 0.0, -1.0), "{ev:?}");
    }

    #[test]
    fn m_of_k3_only_exceptional() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let m = MOperator::new(&g).to_sparse();
        let ev = dense_eigenvalues(&m, DEFAULT_DENSE_CAP).unwrap();
        let s3 = libm::sqrt(3.0) / 2.0;
        let exc = [Complex64::new(-1.0, 0.0), Complex64::new(0.5, s3), Complex64::new(0.5, -s3)];
        let r = match_nonzero_spectra(&ev, &[], &exc, 1e-8);
        assert!(r.is_equal(), "{r:?}");
    }

    #[test]
    fn cluster_merge_restores_defective_value() {
        let eps = 1e-5;
        let v = [Complex64::new(2.0 + eps, 0.0), Complex64::new(2.0 - eps, 0.0), Complex64::new(5.0, 0.0)];
        let m = merge_clusters(&v, 1e-3);
        assert!(close(m[0], 2.0, 0.0) && close(m[1], 2.0, 0.0) && close(m[2], 5.0, 0.0));
    }
}

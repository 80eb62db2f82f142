//! Exact spectra of small integer operators.
//!
//! Characteristic polynomials are computed modulo two large primes. Used to
//! cross-check spectra where defective eigenvalues make floating point
//! comparisons unreliable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::{LinearOperator, SparseOperator};

const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

/// `x`, `x + 1` and `x^2 - x + 1`, constant term first.
const EXCEPTIONAL: [&[i64]; 3] = [&[0, 1], &[1, 1], &[1, -1, 1]];

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn check_integer(op: &SparseOperator) -> Result<()> {
    if op.entries().any(|(_, _, v)| v != libm::round(v) || libm::fabs(v) > 1e9) {
        return Err(Error::invalid("exact arithmetic needs an integer operator"));
    }
    Ok(())
}

/// Characteristic polynomial `det(xI - A)` modulo `p`, constant term first.
/// Dense Hessenberg reduction, so only for small operators.
pub fn charpoly_mod(op: &SparseOperator, p: u64) -> Result<Vec<u64>> {
    check_integer(op)?;
    let n = op.dim();
    let mut a = vec![0u64; n * n];
    for (i, j, v) in op.entries() {
        a[i * n + j] = reduce(v as i64, p);
    }
    let sub = |x: u64, y: u64| (x + p - y) % p;
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| a[i * n + j] != 0) else { continue };
        if piv != j + 1 {
            for c in 0..n {
                a.swap(piv * n + c, (j + 1) * n + c);
            }
            for r in 0..n {
                a.swap(r * n + piv, r * n + j + 1);
            }
        }
        let inv = inverse(a[(j + 1) * n + j], p);
        for i in j + 2..n {
            let f = a[i * n + j] * inv % p;
            if f == 0 {
                continue;
            }
            // row_i -= f row_{j+1}, then col_{j+1} += f col_i
            for c in 0..n {
                a[i * n + c] = sub(a[i * n + c], f * a[(j + 1) * n + c] % p);
            }
            for r in 0..n {
                a[r * n + j + 1] = (a[r * n + j + 1] + f * a[r * n + i]) % p;
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_i h_ik (h_{i+1,i} ... h_{k,k-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = sub(next[d], a[k * n + k] * c % p);
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * a[(i + 1) * n + i] % p;
            if prod == 0 {
                break;
            }
            let f = a[i * n + k] * prod % p;
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = sub(next[d], f * c % p);
            }
        }
        polys.push(next);
    }
    Ok(polys.pop().unwrap_or_else(|| vec![1]))
}

/// Exact division of `num` by a monic `den` modulo `p`; `None` if it leaves
/// a remainder.
fn divide_monic(num: &[u64], den: &[u64], p: u64) -> Option<Vec<u64>> {
    let dn = den.len() - 1;
    if num.len() <= dn {
        return None;
    }
    let mut rem = num.to_vec();
    let mut q = vec![0u64; num.len() - dn];
    for k in (0..q.len()).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (d, &b) in den.iter().enumerate() {
            rem[k + d] = (rem[k + d] + p - c * b % p) % p;
        }
    }
    rem.iter().all(|&x| x == 0).then_some(q)
}

/// Strips every copy of the monic integer `factor` from `poly` modulo `p`,
/// returning how many came off.
fn strip_factor(poly: &mut Vec<u64>, factor: &[i64], p: u64) -> usize {
    let den: Vec<u64> = factor.iter().map(|&c| reduce(c, p)).collect();
    let mut times = 0;
    while let Some(q) = divide_monic(poly, &den, p) {
        *poly = q;
        times += 1;
    }
    times
}

fn check_monic(factor: &[i64]) -> Result<()> {
    if factor.len() < 2 || factor.last() != Some(&1) {
        return Err(Error::invalid(format!("factor {factor:?} is not monic of positive degree")));
    }
    Ok(())
}

/// Multiplicity of each factor in the characteristic polynomial. Reduction
/// mod `p` can only raise a count, so the smaller count over the primes wins.
fn multiplicities(op: &SparseOperator, factors: &[&[i64]]) -> Result<Vec<usize>> {
    for f in factors {
        check_monic(f)?;
    }
    let mut best = vec![usize::MAX; factors.len()];
    for &p in &PRIMES {
        let poly = charpoly_mod(op, p)?;
        for (b, f) in best.iter_mut().zip(factors) {
            *b = (*b).min(strip_factor(&mut poly.clone(), f, p));
        }
    }
    Ok(best)
}

/// How many times the monic integer polynomial `factor` (constant term
/// first) divides the characteristic polynomial of an integer operator.
pub fn root_multiplicity(op: &SparseOperator, factor: &[i64]) -> Result<usize> {
    Ok(multiplicities(op, &[factor])?[0])
}

/// Characteristic polynomial modulo `p` with every factor `x`, `x + 1` and
/// `x^2 - x + 1` divided out.
pub fn reduced_charpoly_mod(op: &SparseOperator, p: u64) -> Result<Vec<u64>> {
    let mut poly = charpoly_mod(op, p)?;
    for f in EXCEPTIONAL {
        strip_factor(&mut poly, f, p);
    }
    Ok(poly)
}

/// True when two integer operators have the same characteristic polynomial
/// once `0`, `-1` and the primitive sixth roots of unity are divided out.
pub fn same_reduced_spectrum(a: &SparseOperator, b: &SparseOperator) -> Result<bool> {
    for &p in &PRIMES {
        if reduced_charpoly_mod(a, p)? != reduced_charpoly_mod(b, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Removes the `count` values nearest to `c`.
pub fn remove_nearest(values: &mut Vec<Complex64>, c: Complex64, count: usize) {
    for _ in 0..count {
        let nearest = values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - c).norm().partial_cmp(&(b.1 - c).norm()).unwrap_or(core::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        match nearest {
            Some(i) => {
                values.remove(i);
            }
            None => return,
        }
    }
}

/// Removes from a computed spectrum of `op` exactly as many copies of `0`,
/// `-1` and `(1 +- sqrt(3) i) / 2` as `op` has.
pub fn strip_exceptional(op: &SparseOperator, values: &[Complex64]) -> Result<Vec<Complex64>> {
    let counts = multiplicities(op, &EXCEPTIONAL)?;
    let h = libm::sqrt(3.0) / 2.0;
    let mut v = values.to_vec();
    remove_nearest(&mut v, Complex64::new(0.0, 0.0), counts[0]);
    remove_nearest(&mut v, Complex64::new(-1.0, 0.0), counts[1]);
    remove_nearest(&mut v, Complex64::new(0.5, h), counts[2]);
    remove_nearest(&mut v, Complex64::new(0.5, -h), counts[2]);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::OperatorKind;

    fn op(n: usize, t: &[(usize, usize, f64)]) -> SparseOperator {
        SparseOperator::from_triplets(n, t.iter().copied(), OperatorKind::Generic)
    }

    #[test]
    fn nilpotent_jordan_block() {
        // a single 5x5 shift: all five eigenvalues are 0
        let a = op(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]);
        assert_eq!(root_multiplicity(&a, &[0, 1]).unwrap(), 5);
        assert_eq!(root_multiplicity(&a, &[1, 1]).unwrap(), 0);
    }

    #[test]
    fn cyclic_permutation() {
        // 6-cycle: eigenvalues are the sixth roots of unity
        let a = op(6, &(0..6).map(|i| (i, (i + 1) % 6, 1.0)).collect::<Vec<_>>());
        assert_eq!(root_multiplicity(&a, &[0, 1]).unwrap(), 0);
        assert_eq!(root_multiplicity(&a, &[1, 1]).unwrap(), 1);
        assert_eq!(root_multiplicity(&a, &[1, -1, 1]).unwrap(), 1);
        assert_eq!(root_multiplicity(&a, &[-1, 1]).unwrap(), 1);
    }

    #[test]
    fn defective_minus_one() {
        // [[-1, 1], [0, -1]] plus a separate eigenvalue 2
        let a = op(3, &[(0, 0, -1.0), (0, 1, 1.0), (1, 1, -1.0), (2, 2, 2.0)]);
        assert_eq!(root_multiplicity(&a, &[1, 1]).unwrap(), 2);
        assert_eq!(root_multiplicity(&a, &[0, 1]).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(root_multiplicity(&op(2, &[(0, 1, 0.5)]), &[0, 1]).is_err());
        assert!(root_multiplicity(&op(2, &[(0, 1, 1.0)]), &[1, 2]).is_err());
    }

    #[test]
    fn strips_nearest_values() {
        let a = op(6, &(0..6).map(|i| (i, (i + 1) % 6, 1.0)).collect::<Vec<_>>());
        let h = libm::sqrt(3.0) / 2.0;
        let ev = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, h),
            Complex64::new(0.5, -h),
            Complex64::new(-0.5, h),
            Complex64::new(-0.5, -h),
            Complex64::new(-1.0, 1e-9),
        ];
        let left = strip_exceptional(&a, &ev).unwrap();
        assert_eq!(left, [Complex64::new(1.0, 0.0), Complex64::new(-0.5, h), Complex64::new(-0.5, -h)]);
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let p = PRIMES[0];
        // [[1, 2], [3, 4]]: x^2 - 5x - 2
        let a = op(2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0), (1, 1, 4.0)]);
        assert_eq!(charpoly_mod(&a, p).unwrap(), [p - 2, p - 5, 1]);
        // 6-cycle: x^6 - 1
        let c = op(6, &(0..6).map(|i| (i, (i + 1) % 6, 1.0)).collect::<Vec<_>>());
        assert_eq!(charpoly_mod(&c, p).unwrap(), [p - 1, 0, 0, 0, 0, 0, 1]);
        // x^6 - 1 = (x - 1)(x + 1)(x^2 + x + 1)(x^2 - x + 1)
        assert_eq!(reduced_charpoly_mod(&c, p).unwrap(), [p - 1, 0, 0, 1]);
    }

    #[test]
    fn charpoly_needs_pivoting() {
        // zero subdiagonal entry forces a row and column swap
        let p = PRIMES[1];
        let a = op(3, &[(0, 2, 1.0), (2, 0, 1.0), (1, 1, 2.0)]);
        // eigenvalues 1, -1, 2: x^3 - 2x^2 - x + 2
        assert_eq!(charpoly_mod(&a, p).unwrap(), [2, p - 1, p - 2, 1]);
        assert_eq!(reduced_charpoly_mod(&a, p).unwrap(), [2, p - 3, 1]);
    }

    #[test]
    fn reduced_spectra_compare() {
        let c6 = op(6, &(0..6).map(|i| (i, (i + 1) % 6, 1.0)).collect::<Vec<_>>());
        // diag(1, 1, -1) has one 1 too many
        let d = op(3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, -1.0)]);
        // 3-cycle plus an isolated node: x (x^3 - 1)
        let one = op(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]);
        assert!(!same_reduced_spectrum(&c6, &d).unwrap());
        assert!(same_reduced_spectrum(&c6, &one).unwrap());
    }
}

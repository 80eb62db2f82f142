//! Message passing over length-2 directed paths.
//!
//! `theta[i->j->k]` is the probability that `i` reaches the giant cluster
//! through the path `j -> k -> ...`:
//!
//! ```text
//! theta[i->j->k] = 1 - prod_{l in N(k) \ {i, j}} (1 - p * theta[j->k->l])
//! pi[i]          = 1 - prod_{j in N(i), k in N(j), k != i} (1 - theta[i->j->k])
//! ```
//!
//! Linearising the first map at `theta = 0` gives `p * B^(2)`, so a nonzero
//! fixed point appears once `p` exceeds `1 / lambda_B^(2)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nbt::{build_b_with_cap, NbtMatrix};
use crate::paths::DEFAULT_PATH_CAP;

#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    pub p: f64,
    /// Indexed like the order-2 path set, lexicographic in `(i, j, k)`.
    pub theta: Vec<f64>,
    pub pi: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the last update.
    pub delta: f64,
}

impl MessageState {
    /// Expected giant cluster size, `sum_i pi[i]`.
    pub fn s1(&self) -> f64 {
        self.pi.iter().sum()
    }
}

/// Iterates the `theta` map from `theta = 1` (which converges to the largest
/// fixed point) until the max-norm update is at most `tol`, then fills `pi`.
pub fn message_passing_theta(g: &Graph, p: f64, tol: f64, max_iter: usize) -> Result<MessageState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("occupation probability {p} outside [0, 1]")));
    }
    let b2 = build_b_with_cap(g, 2, DEFAULT_PATH_CAP)?;
    iterate(g, &b2, p, tol, max_iter)
}

pub(crate) fn iterate(g: &Graph, b2: &NbtMatrix, p: f64, tol: f64, max_iter: usize) -> Result<MessageState> {
    let n = b2.paths.len();
    let mut theta = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut delta = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        delta = 0.0;
        for (r, out) in next.iter_mut().enumerate() {
            // successors of i->j->k are exactly the paths j->k->l, l outside {i, j, k}
            let mut prod = 1.0;
            for &c in b2.op.row(r).0 {
                prod *= 1.0 - p * theta[c as usize];
            }
            *out = 1.0 - prod;
            delta = f64::max(delta, libm::fabs(*out - theta[r]));
        }
        core::mem::swap(&mut theta, &mut next);
        if delta <= tol {
            break;
        }
    }
    let state = MessageState { p, pi: node_probabilities(g, b2, &theta), theta, iterations, delta };
    if delta > tol {
        return Err(Error::MessagePassingNotConverged(Box::new(state)));
    }
    Ok(state)
}

fn node_probabilities(g: &Graph, b2: &NbtMatrix, theta: &[f64]) -> Vec<f64> {
    (0..g.node_count() as u32)
        .map(|i| {
            let range = b2.paths.prefix_range(&[i]);
            1.0 - range.map(|r| 1.0 - theta[r]).product::<f64>()
        })
        .collect()
}

/// `S1(p) = sum_i pi[i]`, an absolute size.
pub fn message_passing_s1(g: &Graph, p: f64, tol: f64, max_iter: usize) -> Result<f64> {
    message_passing_theta(g, p, tol, max_iter).map(|s| s.s1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;

    #[test]
    fn k3_is_zero() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        for &p in &[0.1, 0.5, 1.0] {
            let s = message_passing_theta(&g, p, 1e-12, 100).unwrap();
            assert!(s.theta.iter().all(|&t| t == 0.0));
            assert!(s.pi.iter().all(|&t| t == 0.0));
            assert_eq!(s.s1(), 0.0);
        }
    }

    #[test]
    fn tree_is_zero() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let s = message_passing_theta(&g, 0.9, 1e-12, 1000).unwrap();
        assert!(s.theta.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn ring6_full_occupation() {
        let g = ring(6).unwrap();
        let s = message_passing_theta(&g, 1.0, 1e-12, 100).unwrap();
        assert!(s.theta.iter().all(|&t| t == 1.0));
        assert!(s.pi.iter().all(|&t| t == 1.0));
        assert_eq!(message_passing_s1(&g, 1.0, 1e-12, 100).unwrap(), 6.0);
    }

    #[test]
    fn non_convergence_carries_state() {
        let g = ring(30).unwrap();
        match message_passing_theta(&g, 0.999, 1e-15, 3) {
            Err(Error::MessagePassingNotConverged(s)) => assert_eq!(s.iterations, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_probability() {
        let g = ring(5).unwrap();
        assert!(message_passing_theta(&g, 1.5, 1e-12, 10).is_err());
    }
}

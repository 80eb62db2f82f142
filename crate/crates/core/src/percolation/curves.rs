//! Canonical `S1(p)`, `S2(p)` curves from microcanonical run data.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::newman_ziff::{newman_ziff_run, RunProfile};

/// Per-`m` sums of the top two cluster sizes over runs. Integer sums, so the
/// result does not depend on the order runs are added in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicrocanonicalSums {
    pub node_count: usize,
    pub runs: u64,
    pub largest: Vec<u64>,
    pub second: Vec<u64>,
}

impl MicrocanonicalSums {
    pub fn new(node_count: usize, edge_count: usize) -> Self {
        MicrocanonicalSums { node_count, runs: 0, largest: vec![0; edge_count + 1], second: vec![0; edge_count + 1] }
    }

    pub fn edge_count(&self) -> usize {
        self.largest.len() - 1
    }

    pub fn add(&mut self, run: &RunProfile) {
        for (acc, &v) in self.largest.iter_mut().zip(&run.largest) {
            *acc += v as u64;
        }
        for (acc, &v) in self.second.iter_mut().zip(&run.second) {
            *acc += v as u64;
        }
        self.runs += 1;
    }

    pub fn merge(&mut self, other: &MicrocanonicalSums) {
        for (a, b) in self.largest.iter_mut().zip(&other.largest) {
            *a += b;
        }
        for (a, b) in self.second.iter_mut().zip(&other.second) {
            *a += b;
        }
        self.runs += other.runs;
    }

    /// Mean relative sizes `<S1>_m`, `<S2>_m`.
    pub fn means(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.runs as f64 * self.node_count as f64;
        (self.largest.iter().map(|&s| s as f64 / d).collect(), self.second.iter().map(|&s| s as f64 / d).collect())
    }
}

/// `C(E, m) p^m (1-p)^(E-m)` for `m = 0..=E`.
///
/// Log weights are accumulated from the mode outward through the log ratio
/// of neighbouring terms, exponentiated relative to the mode, and normalised,
/// so the result sums to 1 to rounding for any `E`.
pub fn binomial_weights(edge_count: usize, p: f64) -> Vec<f64> {
    let e = edge_count;
    let mut w = vec![0.0; e + 1];
    if p <= 0.0 {
        w[0] = 1.0;
        return w;
    }
    if p >= 1.0 {
        w[e] = 1.0;
        return w;
    }
    let odds = libm::log(p) - libm::log1p(-p);
    let mode = (((e + 1) as f64 * p) as usize).min(e);
    // ln(w[m + 1] / w[m]) = ln((E - m) / (m + 1)) + ln(p / (1 - p))
    let step = |m: usize| libm::log((e - m) as f64 / (m + 1) as f64) + odds;
    let mut ln = 0.0;
    w[mode] = 1.0;
    for m in mode..e {
        ln += step(m);
        w[m + 1] = libm::exp(ln);
    }
    ln = 0.0;
    for m in (0..mode).rev() {
        ln -= step(m);
        w[m] = libm::exp(ln);
    }
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// Uniform grid of `size` points on `[0, 1]`.
pub fn uniform_grid(size: usize) -> Vec<f64> {
    (0..size).map(|i| i as f64 / (size - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationCurve {
    pub p_grid: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub runs: u64,
    pub seed: u64,
}

impl PercolationCurve {
    /// Convolves microcanonical means with binomial weights on a uniform grid.
    pub fn from_sums(sums: &MicrocanonicalSums, grid_size: usize, seed: u64) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {grid_size}")));
        }
        if sums.runs == 0 {
            return Err(Error::invalid("at least one run is required"));
        }
        let (m1, m2) = sums.means();
        let p_grid = uniform_grid(grid_size);
        let mut s1 = Vec::with_capacity(grid_size);
        let mut s2 = Vec::with_capacity(grid_size);
        for &p in &p_grid {
            let w = binomial_weights(sums.edge_count(), p);
            s1.push(w.iter().zip(&m1).map(|(a, b)| a * b).sum());
            s2.push(w.iter().zip(&m2).map(|(a, b)| a * b).sum());
        }
        Ok(PercolationCurve { p_grid, s1, s2, runs: sums.runs, seed })
    }
}

/// Runs `runs` Newman-Ziff realisations (run `r` uses its own stream under
/// `seed`) and returns the canonical curves.
pub fn percolation_curves(g: &Graph, runs: u64, grid_size: usize, seed: u64) -> Result<PercolationCurve> {
    if runs == 0 {
        return Err(Error::invalid("at least one run is required"));
    }
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut sums = MicrocanonicalSums::new(g.node_count(), g.edge_count());
    for r in 0..runs {
        sums.add(&newman_ziff_run(g, seed, r));
    }
    PercolationCurve::from_sums(&sums, grid_size, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalThreshold {
    pub pc: f64,
    /// Grid spacing, the resolution of `pc`.
    pub resolution: f64,
    pub index: usize,
}

/// Grid argmax of `S2`, ties resolved toward smaller `p`.
///
/// A curve whose maximum sits at the first grid point (`p = 0`, where `S2` is
/// just a singleton) has no peak and is reported as degenerate, as is an
/// identically zero one.
pub fn empirical_threshold(curve: &PercolationCurve) -> Result<EmpiricalThreshold> {
    let mut best = 0;
    for (i, &v) in curve.s2.iter().enumerate() {
        if v > curve.s2[best] {
            best = i;
        }
    }
    if curve.s2.is_empty() || !(curve.s2[best] > 0.0) || best == 0 {
        return Err(Error::DegenerateCurve);
    }
    let resolution = if curve.p_grid.len() > 1 { curve.p_grid[1] - curve.p_grid[0] } else { 0.0 };
    Ok(EmpiricalThreshold { pc: curve.p_grid[best], resolution, index: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::ring;

    #[test]
    fn weights_sum_to_one() {
        for &p in &[0.0, 1e-3, 0.25, 0.5, 0.9, 1.0] {
            let s: f64 = binomial_weights(78, p).iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "p={p} sum={s}");
        }
    }

    #[test]
    fn small_weights_are_exact() {
        let w = binomial_weights(4, 0.5);
        let want = [1.0, 4.0, 6.0, 4.0, 1.0].map(|c| c / 16.0);
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let w = binomial_weights(3, 0.1);
        assert!((w[0] - 0.729).abs() < 1e-15 && (w[3] - 0.001).abs() < 1e-15);
    }

    #[test]
    fn endpoints() {
        let g = ring(12).unwrap();
        let c = percolation_curves(&g, 20, 11, 4).unwrap();
        assert!((c.s1[0] - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(c.s1[10], 1.0);
    }

    #[test]
    fn k3_exact_s2_at_half() {
        // over the 8 subsets at p = 1/2: empty -> second cluster 1,
        // one edge -> 1 (three ways), two or three edges -> 0
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = percolation_curves(&g, 50, 3, 1).unwrap();
        assert!((c.s2[1] - 1.0 / 6.0).abs() < 1e-12, "{}", c.s2[1]);
    }

    #[test]
    fn degenerate_single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let c = percolation_curves(&g, 5, 5, 1).unwrap();
        // S2 = (1 - p) / 2 only decreases
        assert!(matches!(empirical_threshold(&c), Err(Error::DegenerateCurve)));
        let one = Graph::from_edges(1, []).unwrap();
        let c = percolation_curves(&one, 5, 5, 1).unwrap();
        assert!(matches!(empirical_threshold(&c), Err(Error::DegenerateCurve)));
    }

    #[test]
    fn argmax_ties_go_left() {
        let c = PercolationCurve {
            p_grid: vec![0.0, 0.5, 1.0],
            s1: vec![0.0; 3],
            s2: vec![0.1, 0.3, 0.3],
            runs: 1,
            seed: 0,
        };
        assert_eq!(empirical_threshold(&c).unwrap().pc, 0.5);
    }

    #[test]
    fn grid_validation() {
        let g = ring(5).unwrap();
        assert!(percolation_curves(&g, 1, 1, 0).is_err());
        assert!(percolation_curves(&g, 0, 5, 0).is_err());
    }
}

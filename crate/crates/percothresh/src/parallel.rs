//! Rayon drivers for the expensive pieces. Results are identical to the
//! sequential core functions.

use rayon::prelude::*;

use percothresh_core::graph::{Graph, NodeId};
use percothresh_core::nbt::NbtMatrix;
use percothresh_core::paths::{extend_paths_from, DirectedPathSet};
use percothresh_core::percolation::{newman_ziff_run, MicrocanonicalSums, PercolationCurve};
use percothresh_core::sparse::{OperatorKind, SparseOperator};
use percothresh_core::thresholds::{radius_of_operator, spectral_radius, use_fast_route};
use percothresh_core::{EstimateOptions, Result, SpectralResult};

const RUN_CHUNK: u64 = 16;

/// Path enumeration split over start nodes, concatenated in start order so
/// the lexicographic ordering is kept.
pub fn par_enumerate_paths(g: &Graph, order: usize, cap: usize) -> Result<DirectedPathSet> {
    let n = g.node_count() as NodeId;
    let parts: Vec<Vec<NodeId>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            extend_paths_from(g, order, s..s + 1, cap, &mut out).map(|_| out)
        })
        .collect::<Result<_>>()?;
    let total: usize = parts.iter().map(Vec::len).sum();
    if total / (order + 1) > cap {
        return Err(percothresh_core::Error::PathLimitExceeded { order, cap });
    }
    let mut flat = Vec::with_capacity(total);
    for p in parts {
        flat.extend(p);
    }
    Ok(DirectedPathSet::from_sorted_flat(order, flat))
}

/// `B^(order)` with paths and rows built in parallel.
pub fn par_build_b(g: &Graph, order: usize, cap: usize) -> Result<NbtMatrix> {
    let paths = par_enumerate_paths(g, order, cap)?;
    let rows: Vec<Vec<u32>> = (0..paths.len())
        .into_par_iter()
        .map(|r| {
            let p = paths.path(r);
            let mut target = p[1..].to_vec();
            target.push(0);
            g.neighbors(p[order])
                .iter()
                .filter(|j| !p.contains(j))
                .map(|&j| {
                    target[order] = j;
                    paths.index_of(&target).expect("shifted path is itself a path") as u32
                })
                .collect()
        })
        .collect();
    let mut offsets = Vec::with_capacity(rows.len() + 1);
    offsets.push(0);
    let mut cols = Vec::new();
    for r in rows {
        cols.extend(r);
        offsets.push(cols.len());
    }
    let op = SparseOperator::from_pattern_rows(offsets, cols, OperatorKind::NonBacktracking { order });
    Ok(NbtMatrix { paths, op })
}

/// Same result as the core `spectral_radius`.
pub fn par_spectral_radius(g: &Graph, order: usize, opts: &EstimateOptions) -> Result<SpectralResult> {
    if order == 2 && use_fast_route(g, opts.fast) {
        return spectral_radius(g, order, opts);
    }
    let b = par_build_b(g, order, opts.path_cap)?;
    radius_of_operator(&b.op, opts)
}

/// Newman-Ziff runs in parallel chunks. Sums are integers, so the merge order
/// does not matter and the curve matches the sequential one bit for bit.
pub fn par_percolation_curves(g: &Graph, runs: u64, grid_size: usize, seed: u64) -> Result<PercolationCurve> {
    if runs == 0 {
        return Err(percothresh_core::Error::InvalidParameter("at least one run is required".into()));
    }
    if g.node_count() == 0 {
        return Err(percothresh_core::Error::EmptyGraph);
    }
    let chunks = runs.div_ceil(RUN_CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = MicrocanonicalSums::new(g.node_count(), g.edge_count());
            for r in c * RUN_CHUNK..((c + 1) * RUN_CHUNK).min(runs) {
                s.add(&newman_ziff_run(g, seed, r));
            }
            s
        })
        .reduce(
            || MicrocanonicalSums::new(g.node_count(), g.edge_count()),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    PercolationCurve::from_sums(&sums, grid_size, seed)
}

//! Estimation and simulation pipelines behind the CLI subcommands.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use percothresh_core::generators::{
    barabasi_albert, forest_fire, ring, triangle_ring, BaConfig, ForestFire, ForestFireConfig,
};
use percothresh_core::graph::{degree_stats, largest_connected_component, Graph};
use percothresh_core::percolation::{empirical_threshold, PercolationCurve};
use percothresh_core::thresholds::ThresholdEstimate;
use percothresh_core::{Error as CoreError, EstimateOptions};

use crate::error::CliError;
use crate::io::{read_edge_list, schema_line, sig12, Manifest, SCHEMA_VERSION};
use crate::parallel::{par_percolation_curves, par_spectral_radius};

/// Graph models available to `--model`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Ring {
        n: usize,
    },
    /// `k` pendant triangles on a ring of hubs.
    TriangleRing {
        k: usize,
    },
    ForestFire {
        n: usize,
        q: f64,
        seed: u64,
    },
    Ba {
        n: usize,
        m: usize,
        seed: u64,
    },
}

impl Model {
    pub fn generate(&self) -> Result<Graph, CoreError> {
        match *self {
            Model::Ring { n } => ring(n),
            Model::TriangleRing { k } => triangle_ring(k),
            Model::ForestFire { n, q, seed } => {
                forest_fire(&ForestFireConfig { node_count: n, burning_probability: q, seed })
            }
            Model::Ba { n, m, seed } => barabasi_albert(&BaConfig { node_count: n, edges_per_new_node: m, seed }),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Model::Ring { n } => format!("ring-{n}"),
            Model::TriangleRing { k } => format!("triangle-ring-{k}"),
            Model::ForestFire { n, q, seed } => format!("forest-fire-{n}-{q}-{seed}"),
            Model::Ba { n, m, seed } => format!("ba-{n}-{m}-{seed}"),
        }
    }
}

/// A network ready for estimation: the largest connected component of the
/// input, plus the size of the input itself.
#[derive(Debug, Clone)]
pub struct Network {
    pub name: String,
    pub graph: Graph,
    pub input_nodes: usize,
    pub input_edges: usize,
}

impl Network {
    pub fn from_graph(name: impl Into<String>, g: &Graph) -> Result<Self, CoreError> {
        let (graph, _) = largest_connected_component(g)?;
        Ok(Network { name: name.into(), graph, input_nodes: g.node_count(), input_edges: g.edge_count() })
    }

    pub fn load(name: impl Into<String>, path: &Path) -> Result<Self, CliError> {
        let lg = read_edge_list(path)?;
        Network::from_graph(name, &lg.graph).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateCell {
    pub order: usize,
    pub pc: Option<f64>,
    pub lambda: Option<f64>,
    pub clamped: bool,
    pub method: String,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub relative_error: Option<f64>,
    pub error: Option<String>,
}

impl EstimateCell {
    fn failed(order: usize, e: &CoreError) -> Self {
        EstimateCell {
            order,
            pc: None,
            lambda: None,
            clamped: false,
            method: String::new(),
            iterations: 0,
            converged: false,
            residual: f64::NAN,
            relative_error: None,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub network: String,
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub estimates: Vec<EstimateCell>,
    pub empirical_pc: Option<f64>,
    pub empirical_resolution: Option<f64>,
    pub empirical_error: Option<String>,
}

impl ResultRow {
    pub fn any_not_converged(&self) -> bool {
        self.estimates.iter().any(|c| c.pc.is_some() && !c.converged)
    }

    pub fn pc(&self, order: usize) -> Option<f64> {
        self.estimates.iter().find(|c| c.order == order).and_then(|c| c.pc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub runs: u64,
    pub grid: usize,
    pub seed: u64,
}

/// Estimates for each order. A non-converged solve keeps its last radius and
/// is flagged; other failures leave the cell empty. Neither stops the row.
pub fn estimate_cells(g: &Graph, orders: &[usize], opts: &EstimateOptions) -> Vec<EstimateCell> {
    orders
        .iter()
        .map(|&order| match par_spectral_radius(g, order, opts) {
            Ok(r) => {
                let t = ThresholdEstimate::from_spectral(order, r);
                EstimateCell {
                    order,
                    pc: Some(t.pc),
                    lambda: Some(t.lambda),
                    clamped: t.clamped,
                    method: r.method.as_str().to_string(),
                    iterations: r.iterations,
                    converged: r.converged,
                    residual: r.residual,
                    relative_error: None,
                    error: (!r.converged).then(|| CoreError::NotConverged(r).to_string()),
                }
            }
            Err(e) => EstimateCell::failed(order, &e),
        })
        .collect()
}

/// Estimates plus, when `sim` is given, the empirical threshold and the
/// relative errors against it.
pub fn result_row(
    net: &Network,
    orders: &[usize],
    opts: &EstimateOptions,
    sim: Option<&SimulationConfig>,
) -> ResultRow {
    let g = &net.graph;
    let mut estimates = estimate_cells(g, orders, opts);
    let mut row = ResultRow {
        network: net.name.clone(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        mean_degree: degree_stats(g).map(|s| s.mean_degree).unwrap_or(0.0),
        estimates: Vec::new(),
        empirical_pc: None,
        empirical_resolution: None,
        empirical_error: None,
    };
    if let Some(sim) = sim {
        match simulate(g, sim).and_then(|c| empirical_threshold(&c)) {
            Ok(t) => {
                row.empirical_pc = Some(t.pc);
                row.empirical_resolution = Some(t.resolution);
                for c in &mut estimates {
                    c.relative_error = c.pc.map(|pc| (t.pc - pc) / t.pc);
                }
            }
            Err(e) => row.empirical_error = Some(e.to_string()),
        }
    }
    row.estimates = estimates;
    row
}

pub fn simulate(g: &Graph, sim: &SimulationConfig) -> Result<PercolationCurve, CoreError> {
    par_percolation_curves(g, sim.runs, sim.grid, sim.seed)
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// Wide result table: one line per network, per-order columns.
pub fn rows_csv(orders: &[usize], rows: &[ResultRow]) -> String {
    let mut out = schema_line("results");
    out.push_str("network,nodes,edges,mean_degree");
    for g in orders {
        let _ = write!(out, ",pc_{g}");
    }
    out.push_str(",empirical_pc");
    for g in orders {
        let _ = write!(out, ",rel_err_{g}");
    }
    for g in orders {
        let _ = write!(out, ",method_{g}");
    }
    out.push_str(",status\n");
    for r in rows {
        let _ = write!(out, "{},{},{},{}", csv_field(&r.network), r.nodes, r.edges, sig12(r.mean_degree));
        for c in &r.estimates {
            let _ = write!(out, ",{}", opt(c.pc));
        }
        let _ = write!(out, ",{}", opt(r.empirical_pc));
        for c in &r.estimates {
            let _ = write!(out, ",{}", opt(c.relative_error));
        }
        for c in &r.estimates {
            let _ = write!(out, ",{}", c.method);
        }
        let problems: Vec<String> = r
            .estimates
            .iter()
            .filter_map(|c| c.error.as_ref().map(|e| format!("order {}: {e}", c.order)))
            .chain(r.empirical_error.iter().map(|e| format!("simulation: {e}")))
            .collect();
        let status = if problems.is_empty() { "ok".to_string() } else { problems.join("; ") };
        let _ = writeln!(out, ",{}", csv_field(&status));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Equal-width bin over a value range, with per-order mean relative errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Indexed like the requested orders; `None` for an empty bin.
    pub mean_relative_error: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableSummary {
    pub schema: String,
    pub orders: Vec<usize>,
    pub networks: usize,
    /// Networks with an empirical threshold and every estimate present.
    pub complete: usize,
    pub mean_relative_error: Vec<Option<f64>>,
    pub by_empirical_pc: Vec<ErrorBin>,
    pub by_mean_degree: Vec<ErrorBin>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn bins(rows: &[&ResultRow], key: impl Fn(&ResultRow) -> f64, count: usize, orders: usize) -> Vec<ErrorBin> {
    if rows.is_empty() || count == 0 {
        return Vec::new();
    }
    let keys: Vec<f64> = rows.iter().map(|r| key(r)).collect();
    let lo = keys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = keys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / count as f64;
    let slot = |k: f64| {
        if width > 0.0 {
            (((k - lo) / width) as usize).min(count - 1)
        } else {
            0
        }
    };
    (0..count)
        .map(|b| {
            let members: Vec<&ResultRow> =
                rows.iter().zip(&keys).filter(|(_, &k)| slot(k) == b).map(|(r, _)| *r).collect();
            ErrorBin {
                lo: lo + b as f64 * width,
                hi: if b + 1 == count { hi } else { lo + (b + 1) as f64 * width },
                count: members.len(),
                mean_relative_error: (0..orders)
                    .map(|i| mean(members.iter().filter_map(|r| r.estimates[i].relative_error)))
                    .collect(),
            }
        })
        .collect()
}

pub fn summarize(orders: &[usize], rows: &[ResultRow], pc_bins: usize, degree_bins: usize) -> TableSummary {
    let complete: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| r.empirical_pc.is_some() && r.estimates.iter().all(|c| c.relative_error.is_some()))
        .collect();
    TableSummary {
        schema: format!("percothresh/table-summary/{SCHEMA_VERSION}"),
        orders: orders.to_vec(),
        networks: rows.len(),
        complete: complete.len(),
        mean_relative_error: (0..orders.len())
            .map(|i| mean(complete.iter().filter_map(|r| r.estimates[i].relative_error)))
            .collect(),
        by_empirical_pc: bins(&complete, |r| r.empirical_pc.unwrap_or(0.0), pc_bins, orders.len()),
        by_mean_degree: bins(&complete, |r| r.mean_degree, degree_bins, orders.len()),
    }
}

/// Runs every manifest entry concurrently; rows come back in manifest order.
/// Networks that fail to load get a row with the error and no estimates.
pub fn run_table(
    manifest: &Manifest,
    orders: &[usize],
    opts: &EstimateOptions,
    sim: Option<&SimulationConfig>,
) -> Vec<ResultRow> {
    manifest
        .entries
        .par_iter()
        .map(|(name, path)| match Network::load(name.clone(), path) {
            Ok(net) => result_row(&net, orders, opts, sim),
            Err(e) => ResultRow {
                network: name.clone(),
                nodes: 0,
                edges: 0,
                mean_degree: 0.0,
                estimates: orders
                    .iter()
                    .map(|&o| EstimateCell {
                        error: Some(e.to_string()),
                        ..EstimateCell::failed(o, &CoreError::EmptyInput)
                    })
                    .collect(),
                empirical_pc: None,
                empirical_resolution: None,
                empirical_error: None,
            },
        })
        .collect()
}

/// Log-spaced node counts from `min(start, n)` to `n`, at most `count` of
/// them, strictly increasing.
pub fn log_checkpoints(start: usize, n: usize, count: usize) -> Vec<usize> {
    let start = start.clamp(1, n.max(1));
    if count <= 1 || start >= n {
        return vec![n];
    }
    let ratio = n as f64 / start as f64;
    let mut out: Vec<usize> =
        (0..count).map(|i| (start as f64 * ratio.powf(i as f64 / (count - 1) as f64)).round() as usize).collect();
    *out.last_mut().unwrap() = n;
    out.dedup();
    out
}

/// One line of a forest-fire trace or sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FireRow {
    pub q: f64,
    pub nodes: usize,
    pub edges: f64,
    /// Mean over the samples that produced a value.
    pub pc: Vec<Option<f64>>,
    pub empirical_pc: Option<f64>,
    pub samples: usize,
    pub failures: usize,
}

fn fire_cells(
    g: &Graph,
    orders: &[usize],
    opts: &EstimateOptions,
    sim: Option<&SimulationConfig>,
) -> (Vec<Option<f64>>, Option<f64>, bool) {
    let cells = estimate_cells(g, orders, opts);
    let mut failed = false;
    let pcs = cells
        .iter()
        .map(|c| {
            if c.pc.is_none() || !c.converged {
                failed = true;
            }
            c.pc.filter(|_| c.converged)
        })
        .collect();
    let emp = sim.map(|s| simulate(g, s).and_then(|c| empirical_threshold(&c)).map(|t| t.pc).ok());
    if matches!(emp, Some(None)) {
        failed = true;
    }
    (pcs, emp.flatten(), failed)
}

/// Grows one forest-fire network and evaluates it at each checkpoint.
pub fn forest_fire_trace(
    q: f64,
    seed: u64,
    checkpoints: &[usize],
    orders: &[usize],
    opts: &EstimateOptions,
    sim: Option<&SimulationConfig>,
) -> Result<Vec<FireRow>, CoreError> {
    let mut ff = ForestFire::new(q, seed)?;
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        ff.grow_to(n);
        let g = ff.snapshot();
        let (pc, empirical_pc, failed) = fire_cells(&g, orders, opts, sim);
        rows.push(FireRow {
            q,
            nodes: g.node_count(),
            edges: g.edge_count() as f64,
            pc,
            empirical_pc,
            samples: 1,
            failures: failed as usize,
        });
    }
    Ok(rows)
}

/// Averages over `networks` independent forest-fire graphs of `n` nodes for
/// each `q`. Network `i` is generated from `seed + i`.
pub fn forest_fire_sweep(
    qs: &[f64],
    n: usize,
    networks: usize,
    seed: u64,
    orders: &[usize],
    opts: &EstimateOptions,
    sim: Option<&SimulationConfig>,
) -> Result<Vec<FireRow>, CoreError> {
    qs.iter()
        .map(|&q| {
            let samples: Vec<(usize, Vec<Option<f64>>, Option<f64>, bool)> = (0..networks as u64)
                .into_par_iter()
                .map(|i| {
                    let g = forest_fire(&ForestFireConfig {
                        node_count: n,
                        burning_probability: q,
                        seed: seed.wrapping_add(i),
                    })?;
                    let (pc, emp, failed) = fire_cells(&g, orders, opts, sim);
                    Ok((g.edge_count(), pc, emp, failed))
                })
                .collect::<Result<_, CoreError>>()?;
            Ok(FireRow {
                q,
                nodes: n,
                edges: mean(samples.iter().map(|s| s.0 as f64)).unwrap_or(0.0),
                pc: (0..orders.len()).map(|k| mean(samples.iter().filter_map(|s| s.1[k]))).collect(),
                empirical_pc: mean(samples.iter().filter_map(|s| s.2)),
                samples: samples.len(),
                failures: samples.iter().filter(|s| s.3).count(),
            })
        })
        .collect()
}

pub fn fire_csv(orders: &[usize], rows: &[FireRow]) -> String {
    let mut out = schema_line("forest-fire");
    out.push_str("q,nodes,edges");
    for g in orders {
        let _ = write!(out, ",pc_{g}");
    }
    out.push_str(",empirical_pc,samples,failures\n");
    for r in rows {
        let _ = write!(out, "{},{},{}", sig12(r.q), r.nodes, sig12(r.edges));
        for pc in &r.pc {
            let _ = write!(out, ",{}", opt(*pc));
        }
        let _ = writeln!(out, ",{},{},{}", opt(r.empirical_pc), r.samples, r.failures);
    }
    out
}

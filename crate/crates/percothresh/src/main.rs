use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use percothresh::error::CliError;
use percothresh::experiments::{
    fire_csv, forest_fire_sweep, forest_fire_trace, log_checkpoints, result_row, rows_csv, run_table, simulate,
    summarize, Model, Network, SimulationConfig,
};
use percothresh::io::{curve_csv, write_edge_list, write_text, Manifest, SCHEMA_VERSION};
use percothresh_core::percolation::empirical_threshold;
use percothresh_core::spectral::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use percothresh_core::{Error as CoreError, EstimateOptions, FastRoute, DEFAULT_PATH_CAP};

#[derive(Parser)]
#[command(
    name = "percothresh",
    version,
    about = "Bond percolation thresholds from high-order non-backtracking matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral threshold estimates for one network.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "0,1,2", value_parser = parse_orders)]
        orders: Orders,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also simulate with this many runs and report relative errors.
        #[arg(long)]
        runs: Option<u64>,
        #[arg(long, default_value_t = 401)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Newman-Ziff curves and the empirical threshold.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// JSON summary destination.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Forest-fire growth trace, or a sweep over burning probabilities.
    ForestFire {
        #[arg(long, default_value_t = 0.01)]
        q: f64,
        /// Comma-separated burning probabilities; switches to sweep mode.
        #[arg(long, value_delimiter = ',')]
        qs: Option<Vec<f64>>,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Networks averaged per q in sweep mode.
        #[arg(long, default_value_t = 100)]
        networks: usize,
        /// Number of log-spaced node-count checkpoints in trace mode.
        #[arg(long, default_value_t = 12)]
        checkpoints: usize,
        #[arg(long, default_value_t = 100)]
        start: usize,
        #[arg(long, default_value = "0,1,2", value_parser = parse_orders)]
        orders: Orders,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Skip the simulation columns.
        #[arg(long)]
        no_sim: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Results table over a manifest of edge-list files.
    Table {
        /// Manifest with one `name file` pair per line.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "0,1,2", value_parser = parse_orders)]
        orders: Orders,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        #[arg(long, default_value_t = 401)]
        grid: usize,
        #[arg(long)]
        no_sim: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        pc_bins: usize,
        #[arg(long, default_value_t = 7)]
        degree_bins: usize,
        /// JSON summary destination.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Writes a generated graph as an edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, alias = "generate", value_enum)]
    model: ModelName,
    /// Node count; the number of triangles for `triangle-ring`.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Edges per new node for `ba`.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Burning probability for `forest-fire`.
    #[arg(long, default_value_t = 0.01)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn model(&self) -> Model {
        match self.model {
            ModelName::Ring => Model::Ring { n: self.n },
            ModelName::TriangleRing => Model::TriangleRing { k: self.n },
            ModelName::ForestFire => Model::ForestFire { n: self.n, q: self.q, seed: self.seed },
            ModelName::Ba => Model::Ba { n: self.n, m: self.m, seed: self.seed },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Ring,
    TriangleRing,
    ForestFire,
    Ba,
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    input: Option<PathBuf>,
    #[arg(long, alias = "generate", value_enum)]
    model: Option<ModelName>,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.01)]
    q: f64,
    /// Seed for generators and simulations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputArgs {
    fn network(&self) -> Result<Network, CliError> {
        if let Some(path) = &self.input {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            return Network::load(name, path);
        }
        let model = ModelArgs {
            model: self.model.expect("clap enforces input or model"),
            n: self.n,
            m: self.m,
            q: self.q,
            seed: self.seed,
        }
        .model();
        Ok(Network::from_graph(model.name(), &model.generate()?)?)
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = Fast::Auto)]
    fast: Fast,
}

impl SolverArgs {
    fn options(&self) -> EstimateOptions {
        let fast = match self.fast {
            Fast::Auto => FastRoute::Auto,
            Fast::On => FastRoute::On,
            Fast::Off => FastRoute::Off,
        };
        EstimateOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            fast,
            path_cap: DEFAULT_PATH_CAP,
            ..EstimateOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fast {
    Auto,
    On,
    Off,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

type Orders = Vec<usize>;

/// `0,1,2` or an inclusive range `0..5`.
fn parse_orders(s: &str) -> Result<Orders, String> {
    let bad = || format!("invalid order list `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let orders: Orders = s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    if orders.is_empty() {
        return Err(bad());
    }
    Ok(orders)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_text(p, text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    schema: String,
    #[serde(flatten)]
    body: &'a T,
}

fn tagged<T: Serialize>(kind: &str, body: &T) -> String {
    json(&Tagged { schema: format!("percothresh/{kind}/{SCHEMA_VERSION}"), body })
}

#[derive(Serialize)]
struct SimulationSummary {
    network: String,
    nodes: usize,
    edges: usize,
    runs: u64,
    seed: u64,
    grid: usize,
    pc: Option<f64>,
    resolution: Option<f64>,
    error: Option<String>,
}

fn simulation_config(runs: u64, grid: usize, seed: u64) -> Result<SimulationConfig, CliError> {
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    Ok(SimulationConfig { runs, grid, seed })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate { input, orders, solver, runs, grid, output } => {
            let net = input.network()?;
            let sim = runs.map(|r| simulation_config(r, grid, input.seed)).transpose()?;
            let row = result_row(&net, &orders, &solver.options(), sim.as_ref());
            let text = match output.format {
                Format::Csv => rows_csv(&orders, std::slice::from_ref(&row)),
                Format::Json => tagged("estimate", &row),
            };
            emit(output.out.as_deref(), &text)?;
            if let Some(c) = row.estimates.iter().find(|c| c.pc.is_some() && !c.converged) {
                let r = percothresh_core::SpectralResult {
                    radius: c.lambda.unwrap_or(0.0),
                    iterations: c.iterations,
                    converged: false,
                    residual: c.residual,
                    method: percothresh_core::SpectralMethod::PowerShifted,
                };
                return Err(CoreError::NotConverged(r).into());
            }
            if let Some(c) = row.estimates.iter().find(|c| c.pc.is_none()) {
                return Err(CliError::Usage(format!("order {}: {}", c.order, c.error.clone().unwrap_or_default())));
            }
            if row.empirical_error.is_some() {
                return Err(CoreError::DegenerateCurve.into());
            }
            Ok(())
        }
        Command::Simulate { input, runs, grid, summary, output } => {
            let net = input.network()?;
            let sim = simulation_config(runs, grid, input.seed)?;
            let curve = simulate(&net.graph, &sim)?;
            let threshold = empirical_threshold(&curve);
            let s = SimulationSummary {
                network: net.name.clone(),
                nodes: net.graph.node_count(),
                edges: net.graph.edge_count(),
                runs,
                seed: input.seed,
                grid,
                pc: threshold.as_ref().ok().map(|t| t.pc),
                resolution: threshold.as_ref().ok().map(|t| t.resolution),
                error: threshold.as_ref().err().map(|e| e.to_string()),
            };
            let text = match output.format {
                Format::Csv => curve_csv(&curve),
                Format::Json => tagged("simulation", &s),
            };
            emit(output.out.as_deref(), &text)?;
            if let Some(p) = summary {
                write_text(&p, &tagged("simulation", &s))?;
            }
            threshold.map(|_| ()).map_err(Into::into)
        }
        Command::ForestFire {
            q,
            qs,
            n,
            networks,
            checkpoints,
            start,
            orders,
            runs,
            grid,
            no_sim,
            seed,
            solver,
            output,
        } => {
            let sim = if no_sim { None } else { Some(simulation_config(runs, grid, seed)?) };
            let opts = solver.options();
            let rows = match qs {
                Some(qs) => forest_fire_sweep(&qs, n, networks, seed, &orders, &opts, sim.as_ref())?,
                None => {
                    forest_fire_trace(q, seed, &log_checkpoints(start, n, checkpoints), &orders, &opts, sim.as_ref())?
                }
            };
            let text = match output.format {
                Format::Csv => fire_csv(&orders, &rows),
                Format::Json => tagged("forest-fire", &serde_json::json!({ "orders": orders, "rows": rows })),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Table { input, orders, runs, grid, no_sim, seed, pc_bins, degree_bins, summary, solver, output } => {
            let manifest = Manifest::load(&input)?;
            let sim = if no_sim { None } else { Some(simulation_config(runs, grid, seed)?) };
            let rows = run_table(&manifest, &orders, &solver.options(), sim.as_ref());
            let s = summarize(&orders, &rows, pc_bins, degree_bins);
            let text = match output.format {
                Format::Csv => rows_csv(&orders, &rows),
                Format::Json => tagged("table", &serde_json::json!({ "rows": rows, "summary": s })),
            };
            emit(output.out.as_deref(), &text)?;
            if let Some(p) = summary {
                write_text(&p, &json(&s))?;
            }
            Ok(())
        }
        Command::Generate { model, out } => {
            let g = model.model().generate()?;
            match out {
                Some(p) => write_edge_list(&p, &g),
                None => emit(None, &g.to_edge_list()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

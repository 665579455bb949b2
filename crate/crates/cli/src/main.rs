mod table;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nci::degree_solver::{SolverMode, DEFAULT_NODE_LIMIT};
use nci::indices::{LayerWeights, NullModel, Transformation, DEFAULT_NULL_REPLICATIONS};
use nci::io::{read_coefficient_matrix, read_edge_list, read_panel, read_weights, write_edge_list, WeightsFile};
use nci::mc::{self, Experiment};
use nci::netbuild::{apply_transformation, correlation_mst, log_returns, symmetrize, Panel};
use nci::netgen::{self, omega_ref, ScenarioKind, ScenarioSpec};
use nci::report::{build_report, Degenerate, ReportOptions};
use nci::{IndexReport, NciError, Variant, WeightVector};

use table::{Cell, Format, Table};

#[derive(Parser)]
#[command(name = "nci", version, about = "Network concentration indices for weighted networks")]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for every random draw.
    #[arg(long, global = true, env = "NCI_SEED", default_value_t = 20_240_601)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file (stdout when omitted).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index report for one weight vector and one network.
    Compute(ComputeArgs),
    /// Monte Carlo experiments on the ten-node reference scenarios.
    Simulate(SimulateArgs),
    /// Mean index over Erdős–Rényi graphs across a grid of link probabilities.
    ValidateEr(ValidateErArgs),
    /// Index of a thresholded coefficient network across a θ grid.
    Sweep(SweepArgs),
    /// Minimum spanning tree of return correlations, as an edge list.
    Mst(MstArgs),
    /// Rolling-window index of return MSTs with bootstrap intervals.
    Rolling(RollingArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NullKind {
    Er,
    Density,
    Degree,
}

#[derive(Args)]
struct ComputeArgs {
    /// CSV with header `node,weight`.
    #[arg(long)]
    weights: PathBuf,
    /// CSV with header `source,target[,intensity]`.
    #[arg(long)]
    network: PathBuf,
    /// Null-model benchmark for psi_null.
    #[arg(long, value_enum)]
    null: Option<NullKind>,
    /// Link probability for `--null er` (default: the observed density).
    #[arg(long)]
    p: Option<f64>,
    /// Simulated graphs for `--null density|degree`.
    #[arg(long, default_value_t = DEFAULT_NULL_REPLICATIONS)]
    null_replications: usize,
    /// Solver for psi_deg: greedy, greedy-rewire or exact.
    #[arg(long)]
    degree: Option<SolverMode>,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: usize,
    /// Transformation for psi_transformed: square, abs, sqrt or exceedance:τ.
    /// Applied to the intensities unless `--transformed-network` is given.
    #[arg(long)]
    transform: Option<Transformation>,
    /// Edge list built from transformed observations.
    #[arg(long)]
    transformed_network: Option<PathBuf>,
    /// Layer edge list for psi_multilayer; repeat together with `--alpha`.
    #[arg(long = "layer")]
    layers: Vec<PathBuf>,
    #[arg(long = "alpha")]
    alphas: Vec<f64>,
    /// Fail on a vanishing denominator instead of reporting 0.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentKind {
    /// Reference weights, random networks.
    Fixed,
    /// Random weights and random networks.
    Joint,
    /// The deterministic reference scenarios, one row each.
    Scenarios,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentKind,
    /// Replications per mechanism (default 5000 for fixed, 800 for joint).
    #[arg(long)]
    r: Option<usize>,
    /// Per-mechanism summary table.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Pooled correlation matrix across variants.
    #[arg(long)]
    correlations: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateErArgs {
    /// Comma-separated probabilities (default 0.05, 0.10, …, 0.95).
    #[arg(long, value_delimiter = ',')]
    p_grid: Vec<f64>,
    #[arg(long, default_value_t = mc::ER_REPLICATIONS)]
    r: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Dense coefficient matrix with a label header row and column.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    weights: PathBuf,
    /// Comma-separated thresholds, ascending.
    #[arg(long, value_delimiter = ',', conflicts_with = "log_grid")]
    thetas: Vec<f64>,
    /// Log-spaced grid `min:max:count`.
    #[arg(long)]
    log_grid: Option<String>,
}

#[derive(Args)]
struct PanelArgs {
    /// CSV with a `date` column followed by one column per asset.
    #[arg(long)]
    returns: PathBuf,
    /// The file holds prices; convert to log-returns first.
    #[arg(long)]
    prices: bool,
    /// Transformation applied to the returns before correlation.
    #[arg(long)]
    transform: Option<Transformation>,
}

#[derive(Args)]
struct MstArgs {
    #[command(flatten)]
    panel: PanelArgs,
    /// Report the index of the tree for these weights on stderr.
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Args)]
struct RollingArgs {
    #[command(flatten)]
    panel: PanelArgs,
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, default_value_t = mc::ROLLING_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = mc::ROLLING_STEP)]
    step: usize,
    /// Bootstrap resamples per window.
    #[arg(long, default_value_t = mc::BOOTSTRAP_RESAMPLES)]
    b: usize,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_weights(path: &Path) -> Result<WeightsFile> {
    let f = read_weights(open(path)?).with_context(|| format!("in {}", path.display()))?;
    if f.renormalized {
        log::warn!("weights in {} renormalized to sum to 1", path.display());
    }
    Ok(f)
}

fn load_edges(path: &Path, labels: &[String]) -> Result<nci::io::EdgeList> {
    read_edge_list(open(path)?, labels).with_context(|| format!("in {}", path.display()))
}

/// Reorders weights to follow `labels`; every label must be weighted and vice versa.
fn align_weights(wf: &WeightsFile, labels: &[String]) -> Result<WeightVector> {
    let index = wf.index();
    let mut missing: Vec<String> = labels.iter().filter(|l| !index.contains_key(l.as_str())).cloned().collect();
    missing.extend(wf.labels.iter().filter(|l| !labels.contains(l)).cloned());
    if !missing.is_empty() {
        missing.sort();
        return Err(NciError::LabelMismatch(missing).into());
    }
    let values = labels.iter().map(|l| wf.weights.values()[index[l.as_str()]]).collect();
    Ok(WeightVector::new(values)?)
}

const REPORT_COLUMNS: [&str; 11] = [
    "hhi",
    "gini",
    "density",
    "psi",
    "psi_dens",
    "psi_null",
    "z_null",
    "psi_deg",
    "psi_weighted",
    "psi_transformed",
    "psi_multilayer",
];

fn report_cells(r: &IndexReport) -> Vec<Cell> {
    vec![
        r.hhi.into(),
        r.gini.into(),
        r.density.into(),
        r.psi.into(),
        r.psi_dens.into(),
        r.psi_null.into(),
        r.z_null.into(),
        r.psi_deg.into(),
        r.psi_weighted.into(),
        r.psi_transformed.into(),
        r.psi_multilayer.into(),
    ]
}

fn compute(args: &ComputeArgs, seed: u64) -> Result<Table> {
    let wf = load_weights(&args.weights)?;
    let edges = load_edges(&args.network, &wf.labels)?;
    let g = &edges.graph;
    let null_model = args
        .null
        .map(|kind| -> Result<NullModel> {
            Ok(match kind {
                NullKind::Er => NullModel::ErdosRenyi { p: args.p.unwrap_or_else(|| nci::density(g)) },
                NullKind::Density => NullModel::DensityPreserving { replications: args.null_replications, seed },
                NullKind::Degree => NullModel::DegreePreserving { replications: args.null_replications, seed },
            })
        })
        .transpose()?;
    if args.layers.len() != args.alphas.len() {
        bail!("{} --layer files but {} --alpha values", args.layers.len(), args.alphas.len());
    }
    let layers = if args.layers.is_empty() {
        None
    } else {
        let graphs = args.layers.iter().map(|p| Ok(load_edges(p, &wf.labels)?.graph)).collect::<Result<Vec<_>>>()?;
        Some((graphs, LayerWeights::new(args.alphas.clone())?))
    };
    let transformed_graph =
        args.transformed_network.as_deref().map(|p| Ok::<_, anyhow::Error>(load_edges(p, &wf.labels)?.graph)).transpose()?;
    let opts = ReportOptions {
        null_model,
        degree_mode: args.degree,
        node_limit: Some(args.node_limit),
        intensities: edges.intensities.clone(),
        transformation: args.transform,
        transformed_graph,
        layers,
    };
    let policy = if args.strict { Degenerate::Raise } else { Degenerate::Zero };
    let (report, warnings) = build_report(&wf.weights, g, &opts, policy)?;
    for w in warnings {
        log::warn!("{w}");
    }
    let mut t = Table::new(REPORT_COLUMNS);
    t.push(report_cells(&report));
    Ok(t)
}

fn experiment_tables(e: &Experiment) -> (Table, Table, Table) {
    let mut columns = vec!["scenario", "replication", "seed"];
    columns.extend(REPORT_COLUMNS);
    columns.push("failure");
    let mut records = Table::new(columns);
    for r in &e.records {
        let mut row: Vec<Cell> = vec![r.scenario.name().into(), r.replication.into(), r.seed.into()];
        match &r.report {
            Some(rep) => row.extend(report_cells(rep)),
            None => {
                row.push(r.hhi.into());
                row.extend((1..REPORT_COLUMNS.len()).map(|_| Cell::Missing));
            }
        }
        row.push(r.failure.clone().map_or(Cell::Missing, Cell::Text));
        records.push(row);
    }

    let mut summary = Table::new([
        "scenario", "variant", "count", "mean", "sd", "se", "min", "q05", "q25", "median", "q75", "q95", "max",
    ]);
    for s in e.summaries() {
        let m = &s.summary;
        summary.push(vec![
            s.scenario.name().into(),
            s.variant.column().into(),
            m.count.into(),
            m.mean.into(),
            m.sd.into(),
            m.se.into(),
            m.min.into(),
            m.q05.into(),
            m.q25.into(),
            m.median.into(),
            m.q75.into(),
            m.q95.into(),
            m.max.into(),
        ]);
    }

    let mut corr = Table::new(std::iter::once("variant").chain(Variant::ALL.iter().map(|v| v.column())));
    for (v, row) in Variant::ALL.iter().zip(e.correlation_matrix()) {
        let mut cells: Vec<Cell> = vec![v.column().into()];
        cells.extend(row.into_iter().map(Cell::from));
        corr.push(cells);
    }
    (records, summary, corr)
}

fn scenarios(seed: u64) -> Result<Table> {
    let w = omega_ref();
    let mut columns = vec!["scenario"];
    columns.extend(REPORT_COLUMNS);
    let mut t = Table::new(columns);
    for (k, kind) in ScenarioKind::ALL.into_iter().enumerate() {
        let spec = ScenarioSpec { kind, n: netgen::SCENARIO_NODES, p: Some(netgen::SCENARIO_P), seed: seed.wrapping_add(k as u64) };
        let g = spec.generate()?;
        let mut rng = nci::rng::seeded(seed);
        let (report, _) = mc::evaluate_all(&w, &g, &mut rng)?;
        let mut row: Vec<Cell> = vec![kind.name().into()];
        row.extend(report_cells(&report));
        t.push(row);
    }
    Ok(t)
}

fn write_table(t: &Table, path: &Path, format: Format) -> Result<()> {
    t.write(output(Some(path))?, format)
}

fn log_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts[..] else { bail!("log grid must be `min:max:count`, got `{spec}`") };
    let (lo, hi, count): (f64, f64, usize) = (lo.parse()?, hi.parse()?, count.parse()?);
    if !(lo > 0.0 && hi > lo && count >= 2) {
        bail!("log grid needs 0 < min < max and count ≥ 2");
    }
    let step = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| if k + 1 == count { hi } else { lo * (step * k as f64).exp() }).collect())
}

fn sweep(args: &SweepArgs) -> Result<Table> {
    let c = read_coefficient_matrix(open(&args.matrix)?).with_context(|| format!("in {}", args.matrix.display()))?;
    let wf = load_weights(&args.weights)?;
    let w = align_weights(&wf, c.labels())?;
    let thetas = match &args.log_grid {
        Some(spec) => log_grid(spec)?,
        None if !args.thetas.is_empty() => args.thetas.clone(),
        None => bail!("give --thetas or --log-grid"),
    };
    let rows = mc::theta_sweep(&symmetrize(&c), &w, &thetas)?;
    let mut t = Table::new(["theta", "edges", "nci", "hhi", "gini"]);
    for r in rows {
        t.push(vec![r.theta.into(), r.edges.into(), r.nci.into(), r.hhi.into(), r.gini.into()]);
    }
    Ok(t)
}

fn load_panel(args: &PanelArgs) -> Result<Panel> {
    let file = read_panel(open(&args.returns)?).with_context(|| format!("in {}", args.returns.display()))?;
    if !file.dropped.is_empty() {
        log::info!("dropped {} dates with missing values", file.dropped.len());
    }
    let mut panel = if args.prices { log_returns(&file.panel)? } else { file.panel };
    if let Some(t) = args.transform {
        panel = apply_transformation(&panel, t);
    }
    Ok(panel)
}

fn mst_edges(args: &MstArgs, out: &mut dyn Write) -> Result<()> {
    let panel = load_panel(&args.panel)?;
    let tree = correlation_mst(&panel)?;
    if let Some(path) = &args.weights {
        let w = align_weights(&load_weights(path)?, panel.labels())?;
        eprintln!("nci = {}", nci::io::format_value(nci::nci_baseline(&w, &tree)?));
    }
    write_edge_list(out, &tree, panel.labels(), None)?;
    Ok(())
}

fn rolling(args: &RollingArgs, seed: u64) -> Result<Table> {
    let panel = load_panel(&args.panel)?;
    let w = align_weights(&load_weights(&args.weights)?, panel.labels())?;
    if args.window > panel.rows() {
        bail!(NciError::InsufficientData { needed: args.window, available: panel.rows() });
    }
    let rows = mc::rolling_nci(&panel, &w, args.window, args.step, args.b, seed)?;
    let mut t = Table::new([
        "window_start",
        "window_end",
        "nci",
        "ci_low",
        "ci_high",
        "hhi",
        "gini",
        "covers_estimate",
        "failed_resamples",
    ]);
    for r in rows {
        if !r.covers_estimate {
            log::warn!("interval for window ending {} excludes the point estimate", r.window_end);
        }
        t.push(vec![
            r.window_start.to_string().into(),
            r.window_end.to_string().into(),
            r.nci.into(),
            r.ci_low.into(),
            r.ci_high.into(),
            r.hhi.into(),
            r.gini.into(),
            r.covers_estimate.into(),
            r.failed_resamples.into(),
        ]);
    }
    Ok(t)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = cli.output.as_deref();
    let table = match &cli.command {
        Command::Compute(args) => compute(args, cli.seed)?,
        Command::Simulate(args) => match args.experiment {
            ExperimentKind::Scenarios => scenarios(cli.seed)?,
            kind => {
                let e = if kind == ExperimentKind::Fixed {
                    mc::experiment_fixed_weights(args.r.unwrap_or(mc::FIXED_REPLICATIONS), cli.seed)?
                } else {
                    mc::experiment_joint(args.r.unwrap_or(mc::JOINT_REPLICATIONS), cli.seed)?
                };
                if e.failed > 0 {
                    log::warn!("{} of {} replications failed", e.failed, e.records.len());
                }
                let (records, summary, corr) = experiment_tables(&e);
                if let Some(p) = &args.summary {
                    write_table(&summary, p, cli.format)?;
                }
                if let Some(p) = &args.correlations {
                    write_table(&corr, p, cli.format)?;
                }
                log::info!("{} replication rows, generator {}", records.len(), nci::rng::GENERATOR);
                records
            }
        },
        Command::ValidateEr(args) => {
            let grid = if args.p_grid.is_empty() { mc::default_p_grid() } else { args.p_grid.clone() };
            let mut t = Table::new(["p", "mean_psi", "sd", "se", "deviation"]);
            for r in mc::validate_er_benchmark(&grid, args.r, cli.seed)? {
                t.push(vec![r.p.into(), r.mean_psi.into(), r.sd.into(), r.se.into(), r.deviation.into()]);
            }
            t
        }
        Command::Sweep(args) => sweep(args)?,
        Command::Mst(args) => {
            let mut w = output(out)?;
            mst_edges(args, &mut w)?;
            return Ok(w.flush()?);
        }
        Command::Rolling(args) => rolling(args, cli.seed)?,
    };
    table.write(output(out)?, cli.format)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}


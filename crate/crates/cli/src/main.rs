//! Command-line front end: one subcommand per pipeline stage, plus `pipeline`
//! for the whole experiment and `w1` for comparing two diagrams.

// `!(x > 0.0)` is deliberate: NaN has to fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use pdpaths::experiment::{build_corpus, featurize, run_pipeline, DataSource, ExperimentConfig, FeatureMode};
use pdpaths::features::FeaturePath;
use pdpaths::grid::Grid;
use pdpaths::io;
use pdpaths::linalg::Matrix;
use pdpaths::metrics::w1_partial;
use pdpaths::persistence::{diagram_path, DiagramPath, PersistenceDiagram, ThresholdPolicy};
use pdpaths::regression::{grid_search_cv, mse, svr_predict, svr_train, training_fingerprint};
use pdpaths::rng::{derive_seed, stream};
use pdpaths::signature::{signature_gram, KernelRoute};
use pdpaths::swarm::{subsample, PointCloudSeries};
use pdpaths::{features, Error};

#[derive(Parser)]
#[command(name = "pdpaths", version, about = "Persistence-diagram paths for swarm parameter estimation")]
struct Cli {
    /// Experiment configuration (TOML); flags given on a subcommand override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the configuration).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for outputs.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus of bounded swarm simulations.
    Simulate(SimulateArgs),
    /// Compute Rips persistence diagrams of every stored simulation.
    Persist(PersistArgs),
    /// Turn diagram paths into feature paths.
    Featurize(FeaturizeArgs),
    /// Signature-kernel Gram matrix of a set of feature paths.
    Kernel(KernelArgs),
    /// Cross-validate and fit an SVR model on a Gram matrix.
    Train(TrainArgs),
    /// Predict with a model from a cross Gram matrix and report the MSE.
    Evaluate(EvaluateArgs),
    /// Run the full experiment described by the configuration.
    Pipeline,
    /// Partial 1-Wasserstein distance between two diagrams.
    W1(W1Args),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n_sims: Option<usize>,
    #[arg(long)]
    n_agents: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    /// Range of the strength ratio C, as `lo:hi`.
    #[arg(long)]
    c_range: Option<String>,
    /// Range of the length ratio l, as `lo:hi`.
    #[arg(long)]
    l_range: Option<String>,
}

#[derive(Args)]
struct PersistArgs {
    /// Directory of `.swrm` files (default: `<out-dir>/sims`).
    #[arg(long)]
    in_dir: Option<PathBuf>,
    /// Diagram file to write (default: `<out-dir>/diagrams.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// `auto` (enclosing radius) or a number.
    #[arg(long)]
    threshold: Option<String>,
    /// Common diagram bound T.
    #[arg(long)]
    cap: Option<f64>,
    /// `full`, `fixed:N` or `random:LO:HI`.
    #[arg(long, default_value = "full")]
    subsample: String,
    /// Scale clouds by N^(1/3) and diagrams by 1/N.
    #[arg(long)]
    normalize_counts: bool,
}

#[derive(Args)]
struct FeaturizeArgs {
    /// Diagram file (default: `<out-dir>/diagrams.csv`).
    #[arg(long)]
    diagrams: Option<PathBuf>,
    /// `moments`, `crocker` or `betti-path`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    /// Homology dimensions for moments, comma separated.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Scale grid `lo:hi:count[:log]`.
    #[arg(long)]
    eps_grid: Option<String>,
    #[arg(long)]
    time_stride: Option<usize>,
    #[arg(long)]
    betti_level: Option<usize>,
    /// Directory for `.feat` files (default: `<out-dir>/features`).
    #[arg(long)]
    features_dir: Option<PathBuf>,
}

#[derive(Args)]
struct KernelArgs {
    /// Directory of `.feat` files (default: `<out-dir>/features`).
    #[arg(long)]
    features_dir: Option<PathBuf>,
    /// Row paths for a cross Gram matrix; columns come from `--features-dir`.
    #[arg(long)]
    rows_dir: Option<PathBuf>,
    #[arg(long)]
    level: Option<usize>,
    /// `explicit` or `kernel-trick`.
    #[arg(long)]
    route: Option<String>,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    lags: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    /// Gram file (default: `<out-dir>/gram.gram`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    gram: Option<PathBuf>,
    /// Target CSV with a header (default: `<out-dir>/targets.csv`).
    #[arg(long)]
    targets: Option<PathBuf>,
    /// Target column to fit.
    #[arg(long, default_value = "c")]
    column: String,
    #[arg(long)]
    grid_lambda: Option<String>,
    #[arg(long)]
    grid_eps: Option<String>,
    #[arg(long)]
    folds: Option<usize>,
    /// Model file (default: `<out-dir>/model-<column>.txt`).
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    cross_gram: PathBuf,
    /// CSV with the true values (optional: without it only predictions are written).
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value = "c")]
    column: String,
    /// Predictions file (default: `<out-dir>/predictions.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct W1Args {
    /// Diagram file or a `birth,lifetime` CSV.
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Which frame to use from diagram files.
    #[arg(long, default_value_t = 0)]
    time_index: usize,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    sim_id_a: u64,
    #[arg(long, default_value_t = 0)]
    sim_id_b: u64,
    /// Also print the optimal matching.
    #[arg(long)]
    plan: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Argument(_) => 2,
        Error::MissingArtifact { .. } | Error::Format { .. } | Error::Io(_) | Error::Size { .. } => 3,
        Error::Integration { .. } | Error::Conditioning { .. } | Error::Overflow(_) => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load_config(cli: &Cli) -> pdpaths::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn parse_range(s: &str) -> pdpaths::Result<(f64, f64)> {
    let bad = || Error::Config(format!("range `{s}` is not lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn parse_source(s: &str) -> pdpaths::Result<DataSource> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.parse::<usize>().map_err(|_| Error::Config(format!("bad subsample spec `{s}`")));
    match parts.as_slice() {
        ["full"] => Ok(DataSource::Full),
        ["fixed", n] => Ok(DataSource::Fixed { n: num(n)? }),
        ["random", lo, hi] => Ok(DataSource::Random {
            lo: num(lo)?,
            hi: num(hi)?,
        }),
        _ => Err(Error::Config(format!(
            "subsample `{s}` is not full, fixed:N or random:LO:HI"
        ))),
    }
}

fn config_grid(s: &str) -> pdpaths::Result<Grid> {
    s.parse().map_err(|e: Error| Error::Config(e.to_string()))
}

fn run(cli: &Cli) -> pdpaths::Result<()> {
    let mut cfg = load_config(cli)?;
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Simulate(a) => simulate(&mut cfg, a, out),
        Command::Persist(a) => persist(&mut cfg, a, out),
        Command::Featurize(a) => featurize_cmd(&mut cfg, a, out),
        Command::Kernel(a) => kernel(&mut cfg, a, out),
        Command::Train(a) => train(&mut cfg, a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Pipeline => {
            let output = run_pipeline(&cfg, Some(out))?;
            let wins = output.results.iter().filter(|r| r.beats_mean()).count();
            println!(
                "{} trials written to {}; {} beat the mean predictor on both parameters",
                output.results.len(),
                out.join("summary.csv").display(),
                wins
            );
            Ok(())
        }
        Command::W1(a) => w1(a),
    }
}

fn simulate(cfg: &mut ExperimentConfig, a: &SimulateArgs, out: &Path) -> pdpaths::Result<()> {
    let s = &mut cfg.simulation;
    if let Some(v) = a.n_sims {
        s.n_sims = v;
    }
    if let Some(v) = a.n_agents {
        s.n_agents = v;
    }
    if let Some(v) = a.t_end {
        s.t_end = v;
    }
    if let Some(v) = a.n_steps {
        s.n_steps = v;
    }
    if let Some(r) = &a.c_range {
        s.c_range = parse_range(r)?;
    }
    if let Some(r) = &a.l_range {
        s.l_range = parse_range(r)?;
    }
    if s.n_sims == 0 || s.n_agents == 0 || s.n_steps < 2 || !(s.t_end > 0.0) {
        return Err(Error::Config("simulate needs n_sims, n_agents >= 1, n_steps >= 2 and t_end > 0".into()));
    }
    let corpus = build_corpus(&cfg.simulation, cfg.seed)?;
    let dir = out.join("sims");
    corpus
        .trajectories
        .par_iter()
        .enumerate()
        .try_for_each(|(i, t)| io::write_trajectory(&dir.join(format!("sim_{i:05}.swrm")), t))?;
    let mut targets = String::from("sim_id,c,l\n");
    for i in 0..corpus.trajectories.len() {
        let _ = writeln!(targets, "{i},{},{}", corpus.target_c[i], corpus.target_l[i]);
    }
    io::write_atomic(&out.join("targets.csv"), targets.as_bytes())?;
    println!(
        "{} bounded simulations ({} attempts) written to {}",
        corpus.trajectories.len(),
        corpus.attempts,
        dir.display()
    );
    Ok(())
}

fn sim_index(path: &Path) -> pdpaths::Result<u64> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.rsplit('_').next())
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format {
            kind: "trajectory",
            path: path.to_path_buf(),
            reason: "file name must end in _<index>".into(),
        })
}

fn persist(cfg: &mut ExperimentConfig, a: &PersistArgs, out: &Path) -> pdpaths::Result<()> {
    if let Some(d) = a.max_dim {
        cfg.persistence.max_dim = d;
    }
    if let Some(t) = &a.threshold {
        cfg.persistence.threshold = t.parse::<ThresholdPolicy>().map_err(|e| Error::Config(e.to_string()))?;
    }
    if a.cap.is_some() {
        cfg.persistence.cap = a.cap;
    }
    if cfg.persistence.max_dim > 2 {
        return Err(Error::Config("max-dim must be 0, 1 or 2".into()));
    }
    let source = parse_source(&a.subsample)?;
    let in_dir = a.in_dir.clone().unwrap_or_else(|| out.join("sims"));
    let files = io::list_files(&in_dir, "swrm", "simulate")?;
    if files.is_empty() {
        return Err(Error::MissingArtifact {
            path: in_dir,
            stage: "simulate".into(),
        });
    }
    let paths: Vec<DiagramPath> = files
        .par_iter()
        .map(|f| -> pdpaths::Result<DiagramPath> {
            let sim = sim_index(f)?;
            let stored = io::read_point_clouds(f)?;
            let mut series = match source.scheme() {
                None => stored.series,
                Some(scheme) => {
                    let traj = io::read_trajectory(f)?;
                    subsample(&traj, scheme, derive_seed(cfg.seed, stream::SUBSAMPLE, sim))?
                }
            };
            let counts: Vec<usize> = series.clouds.iter().map(Vec::len).collect();
            if a.normalize_counts {
                series = PointCloudSeries {
                    clouds: series
                        .clouds
                        .iter()
                        .map(|c| features::normalize_by_count(c, c.len(), 3))
                        .collect::<pdpaths::Result<_>>()?,
                    times: series.times,
                };
            }
            let mut path = diagram_path(&series, &cfg.persistence, sim, &source.label())?;
            if a.normalize_counts {
                for (frame, &n) in path.frames.iter_mut().zip(&counts) {
                    for d in frame.iter_mut() {
                        *d = features::diagram_scale(d, n)?;
                    }
                }
            }
            Ok(path)
        })
        .collect::<pdpaths::Result<_>>()?;
    let target = a.out.clone().unwrap_or_else(|| out.join("diagrams.csv"));
    io::write_diagrams(&target, &paths)?;
    println!("{} diagram paths written to {}", paths.len(), target.display());
    Ok(())
}

fn featurize_cmd(cfg: &mut ExperimentConfig, a: &FeaturizeArgs, out: &Path) -> pdpaths::Result<()> {
    let f = &mut cfg.features;
    if let Some(m) = &a.mode {
        f.mode = m.parse::<FeatureMode>().map_err(|e| Error::Config(e.to_string()))?;
    }
    if let Some(d) = a.degree {
        f.degree = d;
    }
    if let Some(d) = &a.dims {
        f.dims = d.clone();
    }
    if let Some(g) = &a.eps_grid {
        f.eps_grid = config_grid(g)?;
    }
    if let Some(s) = a.time_stride {
        f.time_stride = s;
    }
    if let Some(l) = a.betti_level {
        f.betti_level = l;
    }
    if f.degree == 0 || f.time_stride == 0 || f.dims.iter().any(|&d| d > 2) {
        return Err(Error::Config("degree and time-stride must be positive, dims within 0..=2".into()));
    }
    let source = a.diagrams.clone().unwrap_or_else(|| out.join("diagrams.csv"));
    let paths = io::read_diagrams(&source)?;
    let dir = a.features_dir.clone().unwrap_or_else(|| out.join("features"));
    paths.par_iter().try_for_each(|p| {
        let fp = featurize(p, &cfg.features)?;
        io::write_features(&dir.join(format!("sim_{:05}.feat", p.sim_id)), &fp)
    })?;
    println!("{} feature paths ({}) written to {}", paths.len(), cfg.features.mode.label(), dir.display());
    Ok(())
}

fn read_feature_dir(dir: &Path) -> pdpaths::Result<Vec<FeaturePath>> {
    let files = io::list_files(dir, "feat", "featurize")?;
    if files.is_empty() {
        return Err(Error::MissingArtifact {
            path: dir.to_path_buf(),
            stage: "featurize".into(),
        });
    }
    files.iter().map(|f| io::read_features(f)).collect()
}

fn kernel(cfg: &mut ExperimentConfig, a: &KernelArgs, out: &Path) -> pdpaths::Result<()> {
    let k = &mut cfg.kernel;
    if let Some(l) = a.level {
        k.level = l;
    }
    if let Some(r) = &a.route {
        k.route = r.parse::<KernelRoute>().map_err(|e| Error::Config(e.to_string()))?;
    }
    k.normalize |= a.normalize;
    if let Some(l) = a.lags {
        k.lags = l;
    }
    if let Some(t) = a.tau {
        k.tau = t;
    }
    if k.tau == 0 {
        return Err(Error::Config("tau must be at least 1".into()));
    }
    let cols = read_feature_dir(&a.features_dir.clone().unwrap_or_else(|| out.join("features")))?;
    let sig = k.signature_config();
    let matrix = match &a.rows_dir {
        Some(r) => signature_gram(&read_feature_dir(r)?, Some(&cols), &sig)?,
        None => signature_gram(&cols, None, &sig)?,
    };
    let mut flags = 0;
    if k.normalize {
        flags |= io::GRAM_FLAG_NORMALIZED;
    }
    if k.route == KernelRoute::KernelTrick {
        flags |= io::GRAM_FLAG_KERNEL_TRICK;
    }
    let target = a.out.clone().unwrap_or_else(|| out.join("gram.gram"));
    io::write_gram(
        &target,
        &io::StoredGram {
            matrix,
            level: k.level,
            flags,
        },
    )?;
    println!("Gram matrix written to {}", target.display());
    Ok(())
}

/// Reads one named column of a CSV file with a header line.
fn read_column(path: &Path, column: &str) -> pdpaths::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingArtifact {
            path: path.to_path_buf(),
            stage: "simulate".into(),
        },
        _ => Error::Io(e),
    })?;
    let bad = |reason: String| Error::Format {
        kind: "target",
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty file".into()))?.split(',').map(str::trim).collect();
    let col = header
        .iter()
        .position(|h| *h == column)
        .ok_or_else(|| bad(format!("no column {column:?} in header {header:?}")))?;
    lines
        .map(|l| {
            let field = l.split(',').nth(col).ok_or_else(|| bad(format!("short line {l:?}")))?;
            field.trim().parse().map_err(|e| bad(format!("{field:?}: {e}")))
        })
        .collect()
}

fn train(cfg: &mut ExperimentConfig, a: &TrainArgs, out: &Path) -> pdpaths::Result<()> {
    if let Some(g) = &a.grid_lambda {
        cfg.regression.lambda_grid = config_grid(g)?;
    }
    if let Some(g) = &a.grid_eps {
        cfg.regression.epsilon_grid = config_grid(g)?;
    }
    if let Some(f) = a.folds {
        cfg.regression.folds = f;
    }
    let gram = io::read_gram(&a.gram.clone().unwrap_or_else(|| out.join("gram.gram")))?.matrix;
    let targets = read_column(&a.targets.clone().unwrap_or_else(|| out.join("targets.csv")), &a.column)?;
    if gram.rows != targets.len() || !gram.is_square() {
        return Err(Error::Format {
            kind: "gram",
            path: a.gram.clone().unwrap_or_default(),
            reason: format!("{}x{} Gram matrix for {} targets", gram.rows, gram.cols, targets.len()),
        });
    }
    let folds = cfg.regression.folds;
    if folds < 2 || folds > targets.len() {
        return Err(Error::Config(format!("folds must lie in 2..={}", targets.len())));
    }
    let report = grid_search_cv(
        &gram,
        &targets,
        &cfg.regression.lambda_grid.values(),
        &cfg.regression.epsilon_grid.values(),
        folds,
        derive_seed(cfg.seed, stream::FOLDS, 0),
    )?;
    let model = svr_train(&gram, &targets, report.selected.0, report.selected.1)?;
    let target = a.model.clone().unwrap_or_else(|| out.join(format!("model-{}.txt", a.column)));
    io::write_model(&target, &model)?;
    io::write_atomic(&out.join(format!("cv-{}.csv", a.column)), io::cv_report_csv(&report).as_bytes())?;
    println!(
        "selected lambda={} epsilon={}; model written to {}",
        report.selected.0,
        report.selected.1,
        target.display()
    );
    debug_assert_eq!(model.fingerprint, training_fingerprint(&gram, &targets));
    Ok(())
}

fn evaluate(a: &EvaluateArgs, out: &Path) -> pdpaths::Result<()> {
    let model = io::read_model(&a.model)?;
    let cross: Matrix = io::read_gram(&a.cross_gram)?.matrix;
    if cross.cols != model.n_train() {
        return Err(Error::Format {
            kind: "gram",
            path: a.cross_gram.clone(),
            reason: format!("{} columns but the model has {} training samples", cross.cols, model.n_train()),
        });
    }
    let pred = svr_predict(&model, &cross)?;
    let target = a.out.clone().unwrap_or_else(|| out.join("predictions.csv"));
    io::write_vector(&target, "prediction", &pred)?;
    match &a.truth {
        Some(t) => {
            let truth = read_column(t, &a.column)?;
            if truth.len() != pred.len() {
                return Err(Error::Format {
                    kind: "target",
                    path: t.clone(),
                    reason: format!("{} values for {} predictions", truth.len(), pred.len()),
                });
            }
            println!("mse={}", mse(&pred, &truth)?);
        }
        None => println!("{} predictions written to {}", pred.len(), target.display()),
    }
    Ok(())
}

fn load_diagram(path: &Path, sim: u64, time: usize, dim: usize) -> pdpaths::Result<PersistenceDiagram> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingArtifact {
            path: path.to_path_buf(),
            stage: "persist".into(),
        },
        _ => Error::Io(e),
    })?;
    let bad = |reason: String| Error::Format {
        kind: "diagram",
        path: path.to_path_buf(),
        reason,
    };
    if text.lines().any(|l| l.trim() == io::DIAGRAM_HEADER) {
        let paths = io::read_diagrams(path)?;
        let p = paths
            .iter()
            .find(|p| p.sim_id == sim)
            .ok_or_else(|| bad(format!("no sim_id {sim}")))?;
        let frame = p.frames.get(time).ok_or_else(|| bad(format!("no time index {time}")))?;
        return frame.get(dim).cloned().ok_or_else(|| bad(format!("no dimension {dim}")));
    }
    // Plain `birth,lifetime` pairs, optionally with a header.
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        match (f.first().map(|s| s.parse::<f64>()), f.get(1).map(|s| s.parse::<f64>())) {
            (Some(Ok(b)), Some(Ok(l))) if f.len() == 2 => points.push(pdpaths::persistence::DiagramPoint::new(b, l)),
            _ if i == 0 => continue,
            _ => return Err(bad(format!("line {}: expected birth,lifetime", i + 1))),
        }
    }
    let bound = points.iter().map(|p| p.death()).fold(0.0, f64::max);
    PersistenceDiagram::new(dim, bound.max(f64::MIN_POSITIVE), points).map_err(|e| bad(e.to_string()))
}

fn w1(a: &W1Args) -> pdpaths::Result<()> {
    let x = load_diagram(&a.a, a.sim_id_a, a.time_index, a.dim)?;
    let y = load_diagram(&a.b, a.sim_id_b, a.time_index, a.dim)?;
    let (dist, plan) = w1_partial(&x, &y)?;
    println!("{dist}");
    if a.plan {
        println!("a_index,b_index");
        for (i, j) in &plan.matches {
            let show = |v: &Option<usize>| v.map_or("diagonal".to_string(), |k| k.to_string());
            println!("{},{}", show(i), show(j));
        }
    }
    Ok(())
}

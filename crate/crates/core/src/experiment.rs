//! Experiment configuration and the end-to-end trial protocol: build a
//! corpus, turn every simulation into a feature path per data source, form
//! signature-kernel Gram matrices, then repeat (split, cross-validate, fit,
//! predict) over seeded trials.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{betti_signature_path, crocker_path, diagram_scale, moment_path, normalize_by_count, FeaturePath};
use crate::grid::Grid;
use crate::io::write_atomic;
use crate::linalg::Matrix;
use crate::persistence::{diagram_path, DiagramPath, PersistenceConfig};
use crate::regression::{grid_search_cv, mse, svr_predict, svr_train, variance};
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::signature::{dp_gram, signature_gram, KernelRoute, MomentKernelPaths, SignatureKernelConfig, DEFAULT_TENSOR_BUDGET};
use crate::swarm::{generate_corpus, subsample, CorpusSpec, PointCloudSeries, SubsampleScheme, SwarmTrajectory};

/// Where the point clouds of a data regime come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// Every agent at every time.
    Full,
    /// `n` agents sampled independently at each time.
    Fixed { n: usize },
    /// A per-simulation count drawn from `lo..=hi`, agents resampled per time.
    Random { lo: usize, hi: usize },
}

impl DataSource {
    pub fn scheme(&self) -> Option<SubsampleScheme> {
        match *self {
            DataSource::Full => None,
            DataSource::Fixed { n } => Some(SubsampleScheme::Fixed { n }),
            DataSource::Random { lo, hi } => Some(SubsampleScheme::Random { lo, hi }),
        }
    }

    pub fn label(&self) -> String {
        self.scheme().map_or_else(|| "full".to_string(), |s| s.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMode {
    /// Moment vectors of each frame's diagrams.
    Moments,
    /// Betti curves of each kept frame on the scale grid.
    Crocker,
    /// Signatures of each frame's Betti embedding.
    BettiPath,
}

impl FeatureMode {
    pub fn label(self) -> &'static str {
        match self {
            FeatureMode::Moments => "moments",
            FeatureMode::Crocker => "crocker",
            FeatureMode::BettiPath => "betti-path",
        }
    }
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moments" => Ok(FeatureMode::Moments),
            "crocker" => Ok(FeatureMode::Crocker),
            "betti-path" => Ok(FeatureMode::BettiPath),
            other => Err(Error::arg(format!("unknown feature mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub mode: FeatureMode,
    pub degree: usize,
    /// Homology dimensions whose moments are concatenated.
    pub dims: Vec<usize>,
    pub eps_grid: Grid,
    pub time_stride: usize,
    /// Signature level of the Betti embedding in `betti-path` mode.
    pub betti_level: usize,
    /// Scale clouds by `N^(1/3)` and diagrams by `1/N` (N = cloud size).
    pub normalize_counts: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            mode: FeatureMode::Moments,
            degree: 6,
            dims: vec![0, 1, 2],
            eps_grid: Grid::log(1e-4, 1.0, 200),
            time_stride: 1,
            betti_level: 6,
            normalize_counts: false,
        }
    }
}

/// Kernel on path states fed to the signature kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKernel {
    /// Euclidean inner product of the feature vectors.
    Linear,
    /// Closed-form (untruncated) moment kernel between diagrams.
    Moment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelConfig {
    pub level: usize,
    pub route: KernelRoute,
    pub normalize: bool,
    pub lags: usize,
    pub tau: usize,
    pub state_kernel: StateKernel,
    pub budget_bytes: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            level: 8,
            route: KernelRoute::KernelTrick,
            normalize: false,
            lags: 0,
            tau: 1,
            state_kernel: StateKernel::Linear,
            budget_bytes: DEFAULT_TENSOR_BUDGET,
        }
    }
}

impl KernelConfig {
    pub fn signature_config(&self) -> SignatureKernelConfig {
        SignatureKernelConfig {
            level: self.level,
            route: self.route,
            normalize: self.normalize,
            lags: self.lags,
            tau: self.tau,
            budget_bytes: self.budget_bytes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegressionConfig {
    pub lambda_grid: Grid,
    pub epsilon_grid: Grid,
    pub folds: usize,
}

impl Default for RegressionConfig {
    fn default() -> Self {
        Self {
            lambda_grid: Grid::log(1e-3, 1e3, 13),
            epsilon_grid: Grid::log(1e-5, 1e1, 13),
            folds: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub n_trials: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// Dataset tag used for cross-validation and fitting.
    pub train_source: String,
    /// Dataset tag the test simulations are featurised from.
    pub test_source: String,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n_trials: 1000,
            n_train: 400,
            n_test: 100,
            train_source: "full".into(),
            test_source: "full".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub simulation: CorpusSpec,
    pub datasets: BTreeMap<String, DataSource>,
    pub persistence: PersistenceConfig,
    pub features: FeatureConfig,
    pub kernel: KernelConfig,
    pub regression: RegressionConfig,
    pub trials: TrialConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            simulation: CorpusSpec::default(),
            datasets: BTreeMap::from([("full".to_string(), DataSource::Full)]),
            persistence: PersistenceConfig::default(),
            features: FeatureConfig::default(),
            kernel: KernelConfig::default(),
            regression: RegressionConfig::default(),
            trials: TrialConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        // The full data source is always available under its own tag.
        cfg.datasets.entry("full".to_string()).or_insert(DataSource::Full);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let cfg_err = |msg: String| Err(Error::Config(msg));
        let t = &self.trials;
        for tag in [&t.train_source, &t.test_source] {
            if !self.datasets.contains_key(tag) {
                return cfg_err(format!(
                    "dataset tag {tag:?} is not defined (known: {:?})",
                    self.datasets.keys().collect::<Vec<_>>()
                ));
            }
        }
        if t.n_train + t.n_test > self.simulation.n_sims {
            return cfg_err(format!(
                "split {}/{} needs more than the {} simulations in the corpus",
                t.n_train, t.n_test, self.simulation.n_sims
            ));
        }
        if t.n_train < 2 || t.n_test == 0 {
            return cfg_err("need at least 2 training and 1 test simulation".into());
        }
        if self.regression.folds < 2 || self.regression.folds > t.n_train {
            return cfg_err(format!("folds must lie in 2..={}", t.n_train));
        }
        if self.simulation.n_steps < 2 || self.simulation.n_agents == 0 || !(self.simulation.t_end > 0.0) {
            return cfg_err("simulation needs agents, a positive horizon and at least 2 steps".into());
        }
        for (lo, hi) in [self.simulation.c_range, self.simulation.l_range] {
            if !(lo > 0.0 && hi >= lo) {
                return cfg_err(format!("parameter range ({lo}, {hi}) must be positive and ordered"));
            }
        }
        for (tag, src) in &self.datasets {
            let ok = match *src {
                DataSource::Full => true,
                DataSource::Fixed { n } => n >= 1 && n <= self.simulation.n_agents,
                DataSource::Random { lo, hi } => lo >= 1 && lo <= hi && hi <= self.simulation.n_agents,
            };
            if !ok {
                return cfg_err(format!("dataset {tag:?} asks for more agents than simulated"));
            }
        }
        if self.persistence.max_dim > 2 {
            return cfg_err("persistence.max_dim must be at most 2".into());
        }
        let f = &self.features;
        if f.dims.is_empty() || f.dims.iter().any(|&d| d > self.persistence.max_dim) {
            return cfg_err("features.dims must be nonempty and within persistence.max_dim".into());
        }
        if f.degree == 0 || f.time_stride == 0 {
            return cfg_err("features.degree and features.time_stride must be positive".into());
        }
        for g in [&f.eps_grid, &self.regression.lambda_grid, &self.regression.epsilon_grid] {
            g.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.kernel.tau == 0 {
            return cfg_err("kernel.tau must be at least 1".into());
        }
        if self.kernel.state_kernel == StateKernel::Moment && self.kernel.route == KernelRoute::Explicit {
            return cfg_err("the moment state kernel needs the kernel-trick route".into());
        }
        Ok(())
    }
}

/// Accepted simulations with their parameter targets.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub trajectories: Vec<SwarmTrajectory>,
    pub target_c: Vec<f64>,
    pub target_l: Vec<f64>,
    pub attempts: usize,
}

pub fn build_corpus(spec: &CorpusSpec, seed: u64) -> Result<Corpus> {
    let (trajectories, log) = generate_corpus(spec, seed)?;
    Ok(Corpus {
        target_c: trajectories.iter().map(|t| t.params.strength_ratio()).collect(),
        target_l: trajectories.iter().map(|t| t.params.length_ratio()).collect(),
        trajectories,
        attempts: log.len(),
    })
}

/// Point clouds of simulation `sim` under a data source.
pub fn source_clouds(traj: &SwarmTrajectory, source: DataSource, master_seed: u64, sim: usize) -> Result<PointCloudSeries> {
    match source.scheme() {
        None => Ok(traj.point_clouds()),
        Some(s) => subsample(traj, s, derive_seed(master_seed, stream::SUBSAMPLE, sim as u64)),
    }
}

/// Diagram path of one simulation under a data source, with the optional
/// count normalisation applied.
pub fn source_diagrams(
    traj: &SwarmTrajectory,
    source: DataSource,
    cfg: &ExperimentConfig,
    sim: usize,
) -> Result<DiagramPath> {
    let mut series = source_clouds(traj, source, cfg.seed, sim)?;
    let counts: Vec<usize> = series.clouds.iter().map(Vec::len).collect();
    if cfg.features.normalize_counts {
        for c in series.clouds.iter_mut() {
            *c = normalize_by_count(c, c.len(), 3)?;
        }
    }
    let mut path = diagram_path(&series, &cfg.persistence, sim as u64, &source.label())?;
    if cfg.features.normalize_counts {
        for (frame, &n) in path.frames.iter_mut().zip(&counts) {
            for d in frame.iter_mut() {
                *d = diagram_scale(d, n)?;
            }
        }
    }
    Ok(path)
}

pub fn featurize(path: &DiagramPath, cfg: &FeatureConfig) -> Result<FeaturePath> {
    match cfg.mode {
        FeatureMode::Moments => moment_path(path, cfg.degree, &cfg.dims),
        FeatureMode::Crocker => crocker_path(path, &cfg.eps_grid.values(), cfg.time_stride),
        FeatureMode::BettiPath => betti_signature_path(path, &cfg.eps_grid.values(), cfg.betti_level),
    }
}

/// Diagram paths and feature paths of every simulation for one data source.
#[derive(Debug, Clone)]
pub struct SourceFeatures {
    pub diagrams: Vec<DiagramPath>,
    pub features: Vec<FeaturePath>,
}

pub fn source_features(corpus: &Corpus, source: DataSource, cfg: &ExperimentConfig) -> Result<SourceFeatures> {
    let diagrams: Vec<DiagramPath> = corpus
        .trajectories
        .par_iter()
        .enumerate()
        .map(|(i, t)| source_diagrams(t, source, cfg, i))
        .collect::<Result<_>>()?;
    let features = diagrams
        .par_iter()
        .map(|d| featurize(d, &cfg.features))
        .collect::<Result<_>>()?;
    Ok(SourceFeatures { diagrams, features })
}

/// Signature-kernel Gram matrix between two sets of simulations (or of one
/// set with itself when `cols` is `None`).
pub fn kernel_gram(rows: &SourceFeatures, cols: Option<&SourceFeatures>, cfg: &KernelConfig) -> Result<Matrix> {
    match cfg.state_kernel {
        StateKernel::Linear => signature_gram(&rows.features, cols.map(|c| c.features.as_slice()), &cfg.signature_config()),
        StateKernel::Moment => {
            if cfg.lags != 0 {
                return Err(Error::Config("delay embedding is not available with the moment state kernel".into()));
            }
            let dims: Vec<usize> = (0..3).collect();
            let r = MomentKernelPaths {
                paths: &rows.diagrams,
                dims: dims.clone(),
            };
            let c = cols.map(|c| MomentKernelPaths {
                paths: &c.diagrams,
                dims,
            });
            dp_gram(&r, c.as_ref(), cfg.level, cfg.normalize)
        }
    }
}

/// Outcome of one split / select / fit / predict trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub regime: String,
    pub feature_map: String,
    pub selected_c: (f64, f64),
    pub selected_l: (f64, f64),
    pub mse_c: f64,
    pub mse_l: f64,
    /// Variance of the test targets, the MSE of the best constant predictor.
    pub var_c: f64,
    pub var_l: f64,
    pub seconds: f64,
}

impl TrialResult {
    /// Both parameters predicted better than the test-target mean.
    pub fn beats_mean(&self) -> bool {
        self.mse_c < self.var_c && self.mse_l < self.var_l
    }
}

/// Train and test indices of a trial: a seeded permutation's prefix.
pub fn trial_split(n: usize, n_train: usize, n_test: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    (order[..n_train].to_vec(), order[n_train..n_train + n_test].to_vec())
}

/// Runs the trials on precomputed Gram matrices. `gram` is over the training
/// source; `cross` has test-source rows against training-source columns.
pub fn run_trials(
    gram: &Matrix,
    cross: &Matrix,
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    regime: &str,
    feature_map: &str,
) -> Result<Vec<TrialResult>> {
    let t = &cfg.trials;
    let n = corpus.trajectories.len();
    if gram.rows != n || gram.cols != n || cross.rows != n || cross.cols != n {
        return Err(Error::arg("Gram matrices do not match the corpus"));
    }
    if t.n_train + t.n_test > n {
        return Err(Error::Config(format!("split {}/{} exceeds the corpus of {n}", t.n_train, t.n_test)));
    }
    let lambdas = cfg.regression.lambda_grid.values();
    let epsilons = cfg.regression.epsilon_grid.values();
    (0..t.n_trials)
        .into_par_iter()
        .map(|trial| {
            let start = Instant::now();
            let seed = derive_seed(cfg.seed, stream::TRIAL, trial as u64);
            let (train, test) = trial_split(n, t.n_train, t.n_test, seed);
            let k_train = gram.select(&train, &train);
            let k_test = cross.select(&test, &train);
            let mut out = Vec::with_capacity(2);
            for (p, targets) in [&corpus.target_c, &corpus.target_l].into_iter().enumerate() {
                let y_train: Vec<f64> = train.iter().map(|&i| targets[i]).collect();
                let y_test: Vec<f64> = test.iter().map(|&i| targets[i]).collect();
                let fold_seed = derive_seed(seed, stream::FOLDS, p as u64);
                let report = grid_search_cv(&k_train, &y_train, &lambdas, &epsilons, cfg.regression.folds, fold_seed)?;
                let model = svr_train(&k_train, &y_train, report.selected.0, report.selected.1)?;
                let pred = svr_predict(&model, &k_test)?;
                out.push((report.selected, mse(&pred, &y_test)?, variance(&y_test)));
            }
            let result = TrialResult {
                trial,
                regime: regime.to_string(),
                feature_map: feature_map.to_string(),
                selected_c: out[0].0,
                selected_l: out[1].0,
                mse_c: out[0].1,
                mse_l: out[1].1,
                var_c: out[0].2,
                var_l: out[1].2,
                seconds: start.elapsed().as_secs_f64(),
            };
            if !(result.mse_c.is_finite() && result.mse_l.is_finite()) {
                return Err(Error::Overflow(format!("trial {trial} produced a non-finite MSE")));
            }
            Ok(result)
        })
        .collect()
}

pub fn regime_label(cfg: &ExperimentConfig) -> String {
    format!("{}->{}", cfg.trials.train_source, cfg.trials.test_source)
}

pub fn feature_label(cfg: &ExperimentConfig) -> String {
    match cfg.kernel.state_kernel {
        StateKernel::Moment => "moment-kernel".into(),
        StateKernel::Linear => cfg.features.mode.label().into(),
    }
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub results: Vec<TrialResult>,
    pub summary_csv: String,
}

/// Runs every stage from simulation to trials. With `out_dir` set, writes
/// `summary.csv`, `timing.csv`, `targets.csv`, `boxplot.csv`,
/// `boxplot_summary.csv` and the resolved `config.toml`.
pub fn run_pipeline(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<PipelineOutput> {
    cfg.validate()?;
    log::info!("simulating {} bounded runs", cfg.simulation.n_sims);
    let corpus = build_corpus(&cfg.simulation, cfg.seed)?;
    log::info!("corpus ready after {} attempts", corpus.attempts);
    run_pipeline_on(cfg, &corpus, out_dir)
}

/// The pipeline from persistence onwards, on an existing corpus.
pub fn run_pipeline_on(cfg: &ExperimentConfig, corpus: &Corpus, out_dir: Option<&Path>) -> Result<PipelineOutput> {
    cfg.validate()?;
    let t = &cfg.trials;
    let train_src = cfg.datasets[&t.train_source];
    let test_src = cfg.datasets[&t.test_source];
    let train_features = source_features(corpus, train_src, cfg)?;
    let gram = kernel_gram(&train_features, None, &cfg.kernel)?;
    let cross = if t.test_source == t.train_source {
        gram.clone()
    } else {
        let test_features = source_features(corpus, test_src, cfg)?;
        kernel_gram(&test_features, Some(&train_features), &cfg.kernel)?
    };
    let results = run_trials(&gram, &cross, corpus, cfg, &regime_label(cfg), &feature_label(cfg))?;
    let summary_csv = summary_csv(&results);
    if let Some(dir) = out_dir {
        write_atomic(&dir.join("summary.csv"), summary_csv.as_bytes())?;
        let mut timing = String::from("trial,seconds\n");
        for r in &results {
            let _ = writeln!(timing, "{},{}", r.trial, r.seconds);
        }
        write_atomic(&dir.join("timing.csv"), timing.as_bytes())?;
        let mut targets = String::from("sim_id,c,l\n");
        for i in 0..corpus.trajectories.len() {
            let _ = writeln!(targets, "{i},{},{}", corpus.target_c[i], corpus.target_l[i]);
        }
        write_atomic(&dir.join("targets.csv"), targets.as_bytes())?;
        let (long, quartiles) = emit_boxplot_data(&results, &[])?;
        write_atomic(&dir.join("boxplot.csv"), long.as_bytes())?;
        write_atomic(&dir.join("boxplot_summary.csv"), quartiles.as_bytes())?;
        write_atomic(&dir.join("config.toml"), cfg.to_toml()?.as_bytes())?;
    }
    Ok(PipelineOutput { results, summary_csv })
}

/// Per-trial summary; timing is kept out so reruns give identical bytes.
pub fn summary_csv(results: &[TrialResult]) -> String {
    let mut out = String::from(
        "trial,regime,feature_map,lambda_c,epsilon_c,lambda_l,epsilon_l,mse_c,mse_l,var_c,var_l\n",
    );
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.regime,
            r.feature_map,
            r.selected_c.0,
            r.selected_c.1,
            r.selected_l.0,
            r.selected_l.1,
            r.mse_c,
            r.mse_l,
            r.var_c,
            r.var_l
        );
    }
    out
}

/// Quantile with linear interpolation between order statistics (the value at
/// position `p * (n - 1)` of the sorted sample).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let (lo, frac) = (pos.floor() as usize, pos - pos.floor());
    if lo + 1 >= sorted.len() {
        sorted[sorted.len() - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Long-format CSV (`regime,feature_map,parameter,trial,mse`) and a quartile
/// summary per (regime, feature map, parameter). `groups` restricts the
/// output to the listed (regime, feature map) pairs; requested groups without
/// results are skipped with a warning.
pub fn emit_boxplot_data(results: &[TrialResult], groups: &[(String, String)]) -> Result<(String, String)> {
    if results.is_empty() {
        return Err(Error::arg("no trial results to summarise"));
    }
    let mut keys: Vec<(String, String)> = if groups.is_empty() {
        let mut k: Vec<_> = results.iter().map(|r| (r.regime.clone(), r.feature_map.clone())).collect();
        k.dedup();
        k
    } else {
        groups.to_vec()
    };
    keys.sort();
    keys.dedup();
    let mut long = String::from("regime,feature_map,parameter,trial,mse\n");
    let mut summary = String::from("regime,feature_map,parameter,n,min,q1,median,q3,max\n");
    for (regime, fmap) in &keys {
        let members: Vec<&TrialResult> = results
            .iter()
            .filter(|r| &r.regime == regime && &r.feature_map == fmap)
            .collect();
        if members.is_empty() {
            log::warn!("no results for regime {regime:?} with feature map {fmap:?}; group omitted");
            continue;
        }
        for (param, pick) in [("C", 0usize), ("l", 1)] {
            let mut values = Vec::with_capacity(members.len());
            for r in &members {
                let v = if pick == 0 { r.mse_c } else { r.mse_l };
                values.push(v);
                let _ = writeln!(long, "{regime},{fmap},{param},{},{v}", r.trial);
            }
            values.sort_by(f64::total_cmp);
            let _ = writeln!(
                summary,
                "{regime},{fmap},{param},{},{},{},{},{},{}",
                values.len(),
                values[0],
                quantile(&values, 0.25),
                quantile(&values, 0.5),
                quantile(&values, 0.75),
                values[values.len() - 1]
            );
        }
    }
    Ok((long, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(trial: usize, mse_c: f64) -> TrialResult {
        TrialResult {
            trial,
            regime: "full->full".into(),
            feature_map: "moments".into(),
            selected_c: (1.0, 0.1),
            selected_l: (1.0, 0.1),
            mse_c,
            mse_l: 2.0 * mse_c,
            var_c: 1.0,
            var_l: 1.0,
            seconds: 0.5,
        }
    }

    #[test]
    fn quartiles_interpolate_linearly() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.25), 2.0);
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.75), 4.0);
        assert_eq!(quantile(&[1.0, 2.0], 0.5), 1.5);
    }

    #[test]
    fn boxplot_rows() {
        let (long, summary) = emit_boxplot_data(&[result(0, 0.3)], &[]).unwrap();
        // One result gives one row per parameter in each file.
        assert_eq!(long.lines().count(), 3);
        assert_eq!(summary.lines().count(), 3);
        let rs: Vec<_> = (0..5).map(|i| result(i, (i + 1) as f64)).collect();
        let (_, summary) = emit_boxplot_data(&rs, &[]).unwrap();
        assert!(summary.contains("full->full,moments,C,5,1,2,3,4,5"), "{summary}");
        let missing = [("a->b".to_string(), "crocker".to_string())];
        let (long, summary) = emit_boxplot_data(&rs, &missing).unwrap();
        assert_eq!((long.lines().count(), summary.lines().count()), (1, 1));
        assert!(emit_boxplot_data(&[], &[]).is_err());
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.regression.lambda_grid.values().len(), 13);
        assert_eq!(cfg.features.degree, 6);
        let round = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(round, cfg);

        let text = r#"
            seed = 3
            [simulation]
            n_sims = 10
            n_agents = 20
            [datasets.sub]
            kind = "fixed"
            n = 5
            [persistence]
            threshold = "auto"
            max_dim = 1
            [features]
            dims = [0, 1]
            eps_grid = "1e-3:1:20:log"
            [trials]
            n_trials = 1
            n_train = 8
            n_test = 2
            test_source = "sub"
        "#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.datasets["sub"], DataSource::Fixed { n: 5 });
        assert!(cfg.datasets.contains_key("full"));

        let bad_tag = text.replace("test_source = \"sub\"", "test_source = \"nope\"");
        assert!(matches!(ExperimentConfig::from_toml(&bad_tag), Err(Error::Config(_))));
        let too_big = text.replace("n_train = 8", "n_train = 9");
        assert!(matches!(ExperimentConfig::from_toml(&too_big), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::from_toml("[simulation]\nn_sims = \"x\""), Err(Error::Config(_))));
    }

    #[test]
    fn split_is_seeded() {
        let (a, b) = trial_split(10, 8, 2, 4);
        assert_eq!((a.len(), b.len()), (8, 2));
        let mut all: Vec<_> = a.iter().chain(&b).copied().collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(trial_split(10, 8, 2, 4), (a, b));
    }
}

//! Three-dimensional D'Orsogna self-propelled particle model.
//!
//! Each agent obeys
//!
//! ```text
//! dx_i/dt   = v_i
//! m dv_i/dt = (alpha - beta |v_i|^2) v_i - grad_i U(x_i)
//! U(x_i)    = sum_{j != i} C_r exp(-r_ij / l_r) - C_a exp(-r_ij / l_a)
//! ```
//!
//! Forces are a direct O(N^2) pairwise sum. Trajectories are sampled on a
//! uniform grid through the integrator's dense output.

pub mod ode;

use rand::Rng;
use rand::seq::index;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, stream};
pub use ode::IntegratorOptions;

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwarmParams {
    pub mass: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c_r: f64,
    pub c_a: f64,
    pub l_r: f64,
    pub l_a: f64,
}

impl SwarmParams {
    /// Nondimensional parameters with `m = 1`, `alpha = 1`, `beta = 0.5`,
    /// `C_a = l_a = 1`, `C_r = c` and `l_r = l`.
    pub fn nondimensional(c: f64, l: f64) -> Self {
        Self {
            mass: 1.0,
            alpha: 1.0,
            beta: 0.5,
            c_r: c,
            c_a: 1.0,
            l_r: l,
            l_a: 1.0,
        }
    }

    /// Interaction strength ratio `C_r / C_a`.
    pub fn strength_ratio(&self) -> f64 {
        self.c_r / self.c_a
    }

    /// Characteristic length ratio `l_r / l_a`.
    pub fn length_ratio(&self) -> f64 {
        self.l_r / self.l_a
    }

    /// Checks positivity. Propulsion may be zero (pure drag); everything else
    /// must be strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        let strict = [
            ("mass", self.mass),
            ("beta", self.beta),
            ("c_r", self.c_r),
            ("c_a", self.c_a),
            ("l_r", self.l_r),
            ("l_a", self.l_a),
        ];
        for (name, v) in strict {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::arg(format!("alpha must be nonnegative, got {}", self.alpha)));
        }
        let (c, l) = (self.strength_ratio(), self.length_ratio());
        if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
            return Err(Error::arg("derived ratios C and l must be finite and positive"));
        }
        Ok(())
    }

    /// Rescales to `m = C_a = l_a = 1`. Returns the rescaled parameters with
    /// the length and time units: `x = length * x'` and `t = time * t'`.
    pub fn nondimensionalize(&self) -> (SwarmParams, f64, f64) {
        let length = self.l_a;
        let time = length * (self.mass / self.c_a).sqrt();
        let rescaled = SwarmParams {
            mass: 1.0,
            alpha: self.alpha * time / self.mass,
            beta: self.beta * length * length / (self.mass * time),
            c_r: self.c_r * time * time / (self.mass * length * length),
            c_a: 1.0,
            l_r: self.l_r / length,
            l_a: 1.0,
        };
        (rescaled, length, time)
    }

    /// Derivative of the pair potential `C_r e^{-r/l_r} - C_a e^{-r/l_a}`.
    pub fn pair_potential_slope(&self, r: f64) -> f64 {
        -self.c_r / self.l_r * (-r / self.l_r).exp() + self.c_a / self.l_a * (-r / self.l_a).exp()
    }
}

/// Initial positions and velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub positions: Vec<Point3>,
    pub velocities: Vec<Point3>,
}

impl InitialState {
    /// Positions uniform on the unit cube; velocity components drawn from
    /// N(1, 1) independently.
    pub fn random(n_agent: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let normal = Normal::new(1.0, 1.0).expect("unit variance");
        let positions = (0..n_agent)
            .map(|_| [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let velocities = (0..n_agent)
            .map(|_| {
                [
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                ]
            })
            .collect();
        Self {
            positions,
            velocities,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmTrajectory {
    pub times: Vec<f64>,
    /// `positions[t][agent]`
    pub positions: Vec<Vec<Point3>>,
    pub velocities: Vec<Vec<Point3>>,
    pub params: SwarmParams,
    pub seed: u64,
}

impl SwarmTrajectory {
    pub fn n_agent(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn n_steps(&self) -> usize {
        self.times.len()
    }

    /// Full (unsubsampled) positions as a point-cloud series.
    pub fn point_clouds(&self) -> PointCloudSeries {
        PointCloudSeries {
            times: self.times.clone(),
            clouds: self.positions.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudSeries {
    pub times: Vec<f64>,
    pub clouds: Vec<Vec<Point3>>,
}

impl PointCloudSeries {
    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.clouds.len() {
            return Err(Error::arg("one cloud per time entry required"));
        }
        if self.clouds.iter().any(Vec::is_empty) {
            return Err(Error::arg("every cloud must be nonempty"));
        }
        Ok(())
    }
}

/// `n_steps` uniformly spaced times covering `[0, t_end]`.
pub fn uniform_times(t_end: f64, n_steps: usize) -> Vec<f64> {
    let dt = t_end / (n_steps - 1) as f64;
    (0..n_steps)
        .map(|k| if k + 1 == n_steps { t_end } else { k as f64 * dt })
        .collect()
}

fn swarm_rhs(params: &SwarmParams, n: usize, y: &[f64], dy: &mut [f64]) {
    let (x, v) = y.split_at(3 * n);
    let (dx, dv) = dy.split_at_mut(3 * n);
    dx.copy_from_slice(v);
    dv.fill(0.0);
    // dv temporarily holds grad_i U; each pair is visited once.
    for i in 0..n {
        let xi = [x[3 * i], x[3 * i + 1], x[3 * i + 2]];
        for j in i + 1..n {
            let d = [xi[0] - x[3 * j], xi[1] - x[3 * j + 1], xi[2] - x[3 * j + 2]];
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if r == 0.0 {
                continue;
            }
            let s = params.pair_potential_slope(r) / r;
            for k in 0..3 {
                dv[3 * i + k] += s * d[k];
                dv[3 * j + k] -= s * d[k];
            }
        }
    }
    for i in 0..n {
        let vi = &v[3 * i..3 * i + 3];
        let speed2 = vi[0] * vi[0] + vi[1] * vi[1] + vi[2] * vi[2];
        let prop = params.alpha - params.beta * speed2;
        for k in 0..3 {
            dv[3 * i + k] = (prop * vi[k] - dv[3 * i + k]) / params.mass;
        }
    }
}

/// Integrates the model from an explicit initial state.
pub fn simulate_from(
    params: SwarmParams,
    initial: &InitialState,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    opts: &IntegratorOptions,
) -> Result<SwarmTrajectory> {
    run(params, initial, t_end, n_steps, seed, opts, None).map(|t| t.expect("no monitor"))
}

/// Bounds checked while integrating; see [`is_unbounded`].
#[derive(Debug, Clone, Copy)]
struct Escape {
    limit: f64,
    cutoff: f64,
}

fn run(
    params: SwarmParams,
    initial: &InitialState,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    opts: &IntegratorOptions,
    escape: Option<Escape>,
) -> Result<Option<SwarmTrajectory>> {
    params.validate()?;
    let n = initial.positions.len();
    if n == 0 || initial.velocities.len() != n {
        return Err(Error::arg("initial state needs matching, nonempty positions and velocities"));
    }
    if !(t_end > 0.0) {
        return Err(Error::arg("t_end must be positive"));
    }
    if n_steps < 2 {
        return Err(Error::arg("n_steps must be at least 2"));
    }
    let times = uniform_times(t_end, n_steps);
    let mut y0 = Vec::with_capacity(6 * n);
    y0.extend(initial.positions.iter().flatten());
    y0.extend(initial.velocities.iter().flatten());

    let mut escaped = false;
    let states = ode::integrate_monitored(
        |_, y, dy| swarm_rhs(&params, n, y, dy),
        0.0,
        &y0,
        &times,
        opts,
        |t, y| {
            if let Some(e) = escape {
                if t <= e.cutoff
                    && y[..3 * n].iter().zip(&y0[..3 * n]).any(|(a, b)| (a - b).abs() > e.limit)
                {
                    escaped = true;
                }
            }
            !escaped
        },
    )?;
    if escaped {
        return Ok(None);
    }

    let unpack = |s: &[f64]| -> Vec<Point3> {
        s.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
    };
    let positions = states.iter().map(|s| unpack(&s[..3 * n])).collect();
    let velocities = states.iter().map(|s| unpack(&s[3 * n..])).collect();
    Ok(Some(SwarmTrajectory {
        times,
        positions,
        velocities,
        params,
        seed,
    }))
}

/// Simulates like [`simulate`] but stops as soon as the trajectory is known
/// to be unbounded (per [`is_unbounded`]), returning `None` in that case.
pub fn simulate_bounded(
    params: SwarmParams,
    n_agent: usize,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    displacement_limit: f64,
    t_cutoff: f64,
) -> Result<Option<SwarmTrajectory>> {
    if n_agent == 0 {
        return Err(Error::arg("n_agent must be at least 1"));
    }
    let initial = InitialState::random(n_agent, seed);
    let escape = Escape {
        limit: displacement_limit,
        cutoff: t_cutoff,
    };
    run(params, &initial, t_end, n_steps, seed, &IntegratorOptions::default(), Some(escape))
}

/// Simulates `n_agent` agents with random initial conditions drawn from `seed`.
pub fn simulate(
    params: SwarmParams,
    n_agent: usize,
    t_end: f64,
    n_steps: usize,
    seed: u64,
) -> Result<SwarmTrajectory> {
    simulate_with(params, n_agent, t_end, n_steps, seed, &IntegratorOptions::default())
}

pub fn simulate_with(
    params: SwarmParams,
    n_agent: usize,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    opts: &IntegratorOptions,
) -> Result<SwarmTrajectory> {
    if n_agent == 0 {
        return Err(Error::arg("n_agent must be at least 1"));
    }
    let initial = InitialState::random(n_agent, seed);
    simulate_from(params, &initial, t_end, n_steps, seed, opts)
}

/// Rejection rule for unbounded phenotypes: some agent's coordinate moved more
/// than `displacement_limit` from its start at a sampled time `<= t_cutoff`.
pub fn is_unbounded(traj: &SwarmTrajectory, displacement_limit: f64, t_cutoff: f64) -> bool {
    let Some(start) = traj.positions.first() else {
        return false;
    };
    traj.times
        .iter()
        .zip(&traj.positions)
        .take_while(|(&t, _)| t <= t_cutoff)
        .any(|(_, frame)| {
            frame.iter().zip(start).any(|(p, p0)| {
                (0..3).any(|k| (p[k] - p0[k]).abs() > displacement_limit)
            })
        })
}

pub const DEFAULT_DISPLACEMENT_LIMIT: f64 = 40.0;
pub const DEFAULT_UNBOUNDED_CUTOFF: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubsampleScheme {
    Fixed { n: usize },
    /// `n` drawn once per simulation, uniformly from `lo..=hi`.
    Random { lo: usize, hi: usize },
}

impl SubsampleScheme {
    pub fn label(&self) -> String {
        match self {
            SubsampleScheme::Fixed { n } => format!("fixed{n}"),
            SubsampleScheme::Random { lo, hi } => format!("random{lo}-{hi}"),
        }
    }
}

/// Independent uniform sample without replacement of agents at every time step.
pub fn subsample(
    traj: &SwarmTrajectory,
    scheme: SubsampleScheme,
    seed: u64,
) -> Result<PointCloudSeries> {
    let n_agent = traj.n_agent();
    let (lo, hi) = match scheme {
        SubsampleScheme::Fixed { n } => (n, n),
        SubsampleScheme::Random { lo, hi } => (lo, hi),
    };
    if lo < 1 || hi > n_agent || lo > hi {
        return Err(Error::arg(format!(
            "subsample size range [{lo}, {hi}] invalid for {n_agent} agents"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(lo..=hi);
    let clouds = traj
        .positions
        .iter()
        .map(|frame| {
            index::sample(&mut rng, n_agent, n)
                .into_iter()
                .map(|a| frame[a])
                .collect()
        })
        .collect();
    Ok(PointCloudSeries {
        times: traj.times.clone(),
        clouds,
    })
}

/// Settings for generating a corpus of bounded simulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub n_sims: usize,
    pub n_agents: usize,
    pub t_end: f64,
    pub n_steps: usize,
    pub c_range: (f64, f64),
    pub l_range: (f64, f64),
    pub displacement_limit: f64,
    pub unbounded_cutoff: f64,
    /// Give up after this many attempts per requested simulation.
    pub max_attempts_factor: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            n_sims: 500,
            n_agents: 200,
            t_end: 400.0,
            n_steps: 400,
            c_range: (0.1, 2.0),
            l_range: (0.1, 2.0),
            displacement_limit: DEFAULT_DISPLACEMENT_LIMIT,
            unbounded_cutoff: DEFAULT_UNBOUNDED_CUTOFF,
            max_attempts_factor: 50,
        }
    }
}

/// Outcome of one attempted simulation.
#[derive(Debug, Clone)]
pub struct CorpusAttempt {
    pub attempt: u64,
    pub params: SwarmParams,
    pub accepted: bool,
}

/// Draws `(C, l)` uniformly from the configured box and keeps resampling until
/// `n_sims` bounded trajectories exist. Attempt `k` always uses the same
/// seeds, and accepted runs are taken in attempt order, so the corpus does not
/// depend on the number of threads.
pub fn generate_corpus(
    spec: &CorpusSpec,
    master_seed: u64,
) -> Result<(Vec<SwarmTrajectory>, Vec<CorpusAttempt>)> {
    let batch = rayon::current_num_threads().max(1) * 2;
    let max_attempts = (spec.n_sims * spec.max_attempts_factor.max(1)) as u64;
    let mut accepted = Vec::with_capacity(spec.n_sims);
    let mut log = Vec::new();
    let mut next_attempt = 0u64;
    while accepted.len() < spec.n_sims {
        if next_attempt >= max_attempts {
            return Err(Error::arg(format!(
                "only {} of {} simulations were bounded after {max_attempts} attempts",
                accepted.len(),
                spec.n_sims
            )));
        }
        let attempts: Vec<u64> = (next_attempt..(next_attempt + batch as u64).min(max_attempts)).collect();
        next_attempt += attempts.len() as u64;
        let results: Vec<(u64, SwarmParams, Option<SwarmTrajectory>)> = attempts
            .par_iter()
            .map(|&k| {
                let mut prng = rng_from_seed(derive_seed(master_seed, stream::SIM_PARAMS, k));
                let c = prng.random_range(spec.c_range.0..=spec.c_range.1);
                let l = prng.random_range(spec.l_range.0..=spec.l_range.1);
                let params = SwarmParams::nondimensional(c, l);
                let seed = derive_seed(master_seed, stream::SIM_INIT, k);
                // Integration failures are blow-ups, hence unbounded too.
                let traj = simulate_bounded(
                    params,
                    spec.n_agents,
                    spec.t_end,
                    spec.n_steps,
                    seed,
                    spec.displacement_limit,
                    spec.unbounded_cutoff,
                )
                .ok()
                .flatten();
                (k, params, traj)
            })
            .collect();
        for (k, params, traj) in results {
            log.push(CorpusAttempt {
                attempt: k,
                params,
                accepted: traj.is_some(),
            });
            if let Some(t) = traj {
                if accepted.len() < spec.n_sims {
                    accepted.push(t);
                }
            }
        }
    }
    Ok((accepted, log))
}

//! Particle swarm search over the accumulation parameter and the time-power
//! exponent.
//!
//! Determinism contract: every random draw comes from a ChaCha stream derived
//! from `(seed, iteration, particle)`, so trajectories are identical whether
//! particle fitnesses are evaluated serially or in parallel, and identical
//! runs are bitwise reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{GreyError, Result};
use crate::metrics::{self, Aggregate};
use crate::models::{fit_with, DesignColumn, FitOptions, ModelKind};
use crate::series::RawSeries;

/// Inertia schedule for the velocity update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inertia {
    Fixed(f64),
    /// `w = w_max - (w_max - w_min) * k / iter_max`.
    LinearDecay {
        w_min: f64,
        w_max: f64,
    },
}

/// Which error window the fitness minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitnessWindow {
    PriorOnly,
    #[default]
    FullSample,
}

/// What the swarm searches and how a position maps onto a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KindTemplate {
    /// Two dimensions: `[lambda, alpha]`.
    Nipgm,
    /// One dimension: `[alpha]`, lambda fixed at 1.
    GmTalpha { design: DesignColumn },
}

impl KindTemplate {
    pub fn dims(&self) -> usize {
        match self {
            KindTemplate::Nipgm => 2,
            KindTemplate::GmTalpha { .. } => 1,
        }
    }

    /// Default search box: lambda in [0, 1], alpha in [1e-6, 10].
    pub fn default_bounds(&self) -> Vec<(f64, f64)> {
        match self {
            KindTemplate::Nipgm => vec![(0.0, 1.0), (1e-6, 10.0)],
            KindTemplate::GmTalpha { .. } => vec![(1e-6, 10.0)],
        }
    }

    pub fn kind_at(&self, position: &[f64]) -> ModelKind {
        match self {
            KindTemplate::Nipgm => ModelKind::Nipgm {
                lambda: position[0],
                alpha: position[1],
            },
            KindTemplate::GmTalpha { .. } => ModelKind::GmTalpha { alpha: position[0] },
        }
    }

    fn fit_options(&self) -> FitOptions {
        match self {
            KindTemplate::Nipgm => FitOptions::default(),
            KindTemplate::GmTalpha { design } => FitOptions {
                design: *design,
                ..FitOptions::default()
            },
        }
    }
}

/// Optimizer settings. `PsoConfig::published(template)` gives the published
/// settings (c1 = c2 = 2, w = 0.6, 100 particles, 1000 iterations,
/// M = 10000).
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub c1: f64,
    pub c2: f64,
    pub inertia: Inertia,
    pub particles: usize,
    pub iterations: usize,
    pub penalty: f64,
    pub bounds: Vec<(f64, f64)>,
    pub seed: u64,
    pub fitness_window: FitnessWindow,
    pub aggregate: Aggregate,
}

impl PsoConfig {
    pub fn published(template: KindTemplate) -> Self {
        Self {
            c1: 2.0,
            c2: 2.0,
            inertia: Inertia::Fixed(0.6),
            particles: 100,
            iterations: 1000,
            penalty: 10_000.0,
            bounds: template.default_bounds(),
            seed: 0,
            fitness_window: FitnessWindow::FullSample,
            aggregate: Aggregate::RootMeanSquare,
        }
    }

    fn validate(&self, dims: usize) -> Result<()> {
        if self.c1 <= 0.0 || self.c2 <= 0.0 {
            return Err(GreyError::Domain("c1 and c2 must be positive".into()));
        }
        if self.particles < 2 {
            return Err(GreyError::Domain("need at least 2 particles".into()));
        }
        if self.iterations < 1 {
            return Err(GreyError::Domain("need at least 1 iteration".into()));
        }
        if self.penalty <= 0.0 {
            return Err(GreyError::Domain("penalty must be positive".into()));
        }
        if self.bounds.len() != dims {
            return Err(GreyError::Shape(format!(
                "{} bounds for a {dims}-dimensional search",
                self.bounds.len()
            )));
        }
        if self
            .bounds
            .iter()
            .any(|(lo, hi)| lo >= hi || !lo.is_finite() || !hi.is_finite())
        {
            return Err(GreyError::Domain("each bound needs lo < hi".into()));
        }
        if let Inertia::LinearDecay { w_min, w_max } = self.inertia {
            if w_min > w_max || !w_min.is_finite() || !w_max.is_finite() {
                return Err(GreyError::Domain("decay needs w_min <= w_max".into()));
            }
        }
        Ok(())
    }

    fn weight_at(&self, iteration: usize) -> f64 {
        match self.inertia {
            Inertia::Fixed(w) => w,
            Inertia::LinearDecay { w_min, w_max } => {
                w_max - (w_max - w_min) * iteration as f64 / self.iterations as f64
            }
        }
    }
}

/// Whether particle fitness evaluations run on one thread or many.
/// Results are bitwise identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalStrategy {
    Serial,
    #[default]
    Parallel,
}

/// Swarm population state between iterations.
#[derive(Debug, Clone)]
pub struct SwarmState {
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub pbest_positions: Vec<Vec<f64>>,
    pub pbest_fitness: Vec<f64>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: f64,
    pub iteration: usize,
}

/// Search outcome: best position, its fitness, and the per-iteration
/// global-best trace (entry 0 is the post-initialization value).
#[derive(Debug, Clone, PartialEq)]
pub struct PsoOutcome {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub trace: Vec<f64>,
}

/// splitmix64 finalizer; the basis of all stream derivations.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream(seed: u64, iteration: u64, particle: u64) -> ChaCha8Rng {
    let derived = mix64(mix64(mix64(seed) ^ iteration) ^ particle.wrapping_mul(0x9E37));
    ChaCha8Rng::seed_from_u64(derived)
}

/// Seed for trial `t` of a multi-trial run.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    mix64(seed ^ mix64(trial))
}

/// Penalized fitness of a candidate position.
///
/// Out-of-bounds coordinates add one penalty `M` each and the model is
/// evaluated at the clamped position; any fit or restoration failure costs
/// `M * D`.
pub fn penalized_fitness(
    position: &[f64],
    raw: &RawSeries,
    template: KindTemplate,
    config: &PsoConfig,
) -> f64 {
    let dims = template.dims();
    debug_assert_eq!(position.len(), dims);
    let mut violations = 0usize;
    let mut clamped = position.to_vec();
    for (j, (lo, hi)) in config.bounds.iter().enumerate() {
        if !(position[j] >= *lo && position[j] <= *hi) {
            violations += 1;
            clamped[j] = position[j].clamp(*lo, *hi);
            if !clamped[j].is_finite() {
                clamped[j] = *lo;
            }
        }
    }
    let base = raw_fitness(&clamped, raw, template, config).unwrap_or(config.penalty * dims as f64);
    let fitness = base + violations as f64 * config.penalty;
    if fitness.is_finite() {
        fitness
    } else {
        config.penalty * dims as f64
    }
}

fn raw_fitness(
    position: &[f64],
    raw: &RawSeries,
    template: KindTemplate,
    config: &PsoConfig,
) -> Result<f64> {
    let kind = template.kind_at(position);
    let fit = fit_with(kind, raw, template.fit_options())?;
    let horizon = match config.fitness_window {
        FitnessWindow::PriorOnly => 0,
        FitnessWindow::FullSample => raw.len() - raw.train_len(),
    };
    let predicted = fit.restore(horizon)?;
    let actual = &raw.values()[..predicted.len()];
    let ape = metrics::ape(actual, &predicted)?;
    let (prior, _, whole) = metrics::windows(&ape, raw.train_len(), config.aggregate)?;
    Ok(match config.fitness_window {
        FitnessWindow::PriorOnly => prior,
        FitnessWindow::FullSample => whole,
    })
}

fn evaluate_all<F>(objective: &F, positions: &[Vec<f64>], strategy: EvalStrategy) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    match strategy {
        EvalStrategy::Serial => positions.iter().map(|p| objective(p)).collect(),
        EvalStrategy::Parallel => {
            #[cfg(feature = "parallel")]
            {
                positions.par_iter().map(|p| objective(p)).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                positions.iter().map(|p| objective(p)).collect()
            }
        }
    }
}

fn init_state<F>(objective: &F, config: &PsoConfig, strategy: EvalStrategy) -> SwarmState
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dims = config.bounds.len();
    let positions: Vec<Vec<f64>> = (0..config.particles)
        .map(|i| {
            let mut rng = stream(config.seed, 0, i as u64);
            config
                .bounds
                .iter()
                .map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
                .collect()
        })
        .collect();
    let velocities = vec![vec![0.0; dims]; config.particles];
    let fitness = evaluate_all(objective, &positions, strategy);
    let mut best = 0;
    for i in 1..config.particles {
        if fitness[i] < fitness[best] {
            best = i;
        }
    }
    SwarmState {
        gbest_position: positions[best].clone(),
        gbest_fitness: fitness[best],
        pbest_positions: positions.clone(),
        pbest_fitness: fitness,
        positions,
        velocities,
        iteration: 0,
    }
}

/// One synchronous swarm iteration: velocity/position update from the
/// derived random streams, then the strict-improvement pbest/gbest update.
pub fn pso_step<F>(
    state: &mut SwarmState,
    config: &PsoConfig,
    objective: &F,
    strategy: EvalStrategy,
) where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let iteration = state.iteration + 1;
    let dims = config.bounds.len();
    let draws: Vec<Vec<(f64, f64)>> = (0..config.particles)
        .map(|i| {
            let mut rng = stream(config.seed, iteration as u64, i as u64);
            (0..dims)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect()
        })
        .collect();
    step_with_draws(state, config, objective, strategy, |i, j| draws[i][j]);
}

fn step_with_draws<F, D>(
    state: &mut SwarmState,
    config: &PsoConfig,
    objective: &F,
    strategy: EvalStrategy,
    draw: D,
) where
    F: Fn(&[f64]) -> f64 + Sync,
    D: Fn(usize, usize) -> (f64, f64),
{
    let iteration = state.iteration + 1;
    let w = config.weight_at(iteration);
    for i in 0..config.particles {
        for j in 0..config.bounds.len() {
            let (r1, r2) = draw(i, j);
            let v = w * state.velocities[i][j]
                + config.c1 * r1 * (state.pbest_positions[i][j] - state.positions[i][j])
                + config.c2 * r2 * (state.gbest_position[j] - state.positions[i][j]);
            state.velocities[i][j] = v;
            state.positions[i][j] += v;
        }
    }
    let fitness = evaluate_all(objective, &state.positions, strategy);
    for (i, f) in fitness.into_iter().enumerate() {
        if f < state.pbest_fitness[i] {
            state.pbest_fitness[i] = f;
            state.pbest_positions[i] = state.positions[i].clone();
        }
    }
    for i in 0..config.particles {
        if state.pbest_fitness[i] < state.gbest_fitness {
            state.gbest_fitness = state.pbest_fitness[i];
            state.gbest_position = state.pbest_positions[i].clone();
        }
    }
    state.iteration = iteration;
}

/// Minimize an arbitrary objective over the configured box.
pub fn optimize_objective<F>(
    objective: &F,
    config: &PsoConfig,
    strategy: EvalStrategy,
) -> Result<PsoOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate(config.bounds.len())?;
    let mut state = init_state(objective, config, strategy);
    let mut trace = Vec::with_capacity(config.iterations + 1);
    trace.push(state.gbest_fitness);
    for _ in 0..config.iterations {
        pso_step(&mut state, config, objective, strategy);
        trace.push(state.gbest_fitness);
    }
    Ok(PsoOutcome {
        position: state.gbest_position,
        fitness: state.gbest_fitness,
        trace,
    })
}

/// Search the model hyperparameters minimizing the penalized fitness on `raw`.
pub fn optimize(raw: &RawSeries, template: KindTemplate, config: &PsoConfig) -> Result<PsoOutcome> {
    optimize_with_strategy(raw, template, config, EvalStrategy::Parallel)
}

pub fn optimize_with_strategy(
    raw: &RawSeries,
    template: KindTemplate,
    config: &PsoConfig,
    strategy: EvalStrategy,
) -> Result<PsoOutcome> {
    config.validate(template.dims())?;
    let objective = |position: &[f64]| penalized_fitness(position, raw, template, config);
    optimize_objective(&objective, config, strategy)
}

/// Repeat the search with seeds derived per trial and return the best run,
/// mirroring the published best-of-trials protocol. Ties keep the earliest
/// trial.
pub fn optimize_trials(
    raw: &RawSeries,
    template: KindTemplate,
    config: &PsoConfig,
    trials: usize,
) -> Result<PsoOutcome> {
    if trials == 0 {
        return Err(GreyError::Domain("need at least one trial".into()));
    }
    let mut best: Option<PsoOutcome> = None;
    for t in 0..trials {
        let mut cfg = config.clone();
        cfg.seed = trial_seed(config.seed, t as u64);
        let outcome = optimize_with_strategy(raw, template, &cfg, EvalStrategy::Parallel)?;
        let better = best.as_ref().is_none_or(|b| outcome.fitness < b.fitness);
        if better {
            best = Some(outcome);
        }
    }
    Ok(best.expect("at least one trial ran"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn jiangsu() -> RawSeries {
        RawSeries::new(
            (2001..=2012).collect(),
            vec![
                8881.0, 9593.0, 11950.0, 14207.0, 16360.0, 18412.0, 20369.0, 22235.0, 24010.0,
                25711.0, 27329.0, 28872.0,
            ],
            10,
        )
        .unwrap()
    }

    #[test]
    fn out_of_bounds_costs_one_penalty() {
        let raw = jiangsu();
        let config = PsoConfig::published(KindTemplate::Nipgm);
        let inside = penalized_fitness(&[0.3583, 0.6157], &raw, KindTemplate::Nipgm, &config);
        let outside = penalized_fitness(&[1.5, 0.6157], &raw, KindTemplate::Nipgm, &config);
        // Clamped to lambda = 1 plus exactly one M.
        let clamped = penalized_fitness(&[1.0, 0.6157], &raw, KindTemplate::Nipgm, &config);
        assert!(inside < 10_000.0);
        assert_relative_eq!(outside, clamped + 10_000.0, max_relative = 1e-12);
    }

    #[test]
    fn published_case1_fitness_values() {
        let raw = jiangsu();
        let config = PsoConfig::published(KindTemplate::Nipgm);
        let f = penalized_fitness(&[0.3583, 0.6157], &raw, KindTemplate::Nipgm, &config);
        assert!((f - 0.0120).abs() < 0.01, "nipgm optimum fitness {f}");

        let template = KindTemplate::GmTalpha {
            design: DesignColumn::PowerK,
        };
        let config = PsoConfig::published(template);
        let f = penalized_fitness(&[4.7427], &raw, template, &config);
        assert!((f - 4.2431).abs() < 0.05, "talpha optimum fitness {f}");
    }

    #[test]
    fn step_with_zero_draws_is_pure_inertia() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.particles = 3;
        config.iterations = 5;
        let objective = |p: &[f64]| penalized_fitness(p, &raw, KindTemplate::Nipgm, &config);
        let mut state = init_state(&objective, &config, EvalStrategy::Serial);
        for i in 0..3 {
            state.velocities[i] = vec![0.01, -0.02];
        }
        let before = state.clone();
        step_with_draws(
            &mut state,
            &config,
            &objective,
            EvalStrategy::Serial,
            |_, _| (0.0, 0.0),
        );
        for i in 0..3 {
            for j in 0..2 {
                assert_relative_eq!(
                    state.velocities[i][j],
                    0.6 * before.velocities[i][j],
                    max_relative = 1e-12
                );
                assert_relative_eq!(
                    state.positions[i][j],
                    before.positions[i][j] + state.velocities[i][j],
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn particle_at_gbest_with_zero_velocity_stays_put() {
        let objective = |p: &[f64]| p[0] * p[0];
        let config = PsoConfig {
            particles: 2,
            iterations: 3,
            bounds: vec![(-1.0, 1.0)],
            ..PsoConfig::published(KindTemplate::GmTalpha {
                design: DesignColumn::Integral,
            })
        };
        let mut state = init_state(&objective, &config, EvalStrategy::Serial);
        // Force particle 0 to sit exactly on gbest with zero velocity.
        state.positions[0] = state.gbest_position.clone();
        state.pbest_positions[0] = state.gbest_position.clone();
        state.pbest_fitness[0] = state.gbest_fitness;
        state.velocities[0] = vec![0.0];
        let frozen = state.positions[0].clone();
        step_with_draws(
            &mut state,
            &config,
            &objective,
            EvalStrategy::Serial,
            |_, _| (0.5, 0.5),
        );
        assert_eq!(state.positions[0], frozen);
    }

    #[test]
    fn hand_evaluated_two_particle_step() {
        // 1-D, w = 0.6, c1 = c2 = 2, both draws stubbed to 0.5, so the update
        // is v' = 0.6 v + (pbest - p) + (gbest - p), p' = p + v'.
        let objective = |p: &[f64]| (p[0] - 0.3).abs();
        let config = PsoConfig {
            particles: 2,
            iterations: 1,
            bounds: vec![(0.0, 1.0)],
            ..PsoConfig::published(KindTemplate::GmTalpha {
                design: DesignColumn::Integral,
            })
        };
        let mut state = init_state(&objective, &config, EvalStrategy::Serial);
        state.positions = vec![vec![0.2], vec![0.8]];
        state.velocities = vec![vec![0.1], vec![-0.1]];
        state.pbest_positions = vec![vec![0.4], vec![0.6]];
        state.pbest_fitness = vec![objective(&[0.4]), objective(&[0.6])];
        state.gbest_position = vec![0.4];
        state.gbest_fitness = objective(&[0.4]);

        step_with_draws(
            &mut state,
            &config,
            &objective,
            EvalStrategy::Serial,
            |_, _| (0.5, 0.5),
        );

        // Particle 0: v = 0.06 + (0.4-0.2) + (0.4-0.2) = 0.46; p = 0.66.
        assert_relative_eq!(state.velocities[0][0], 0.46, max_relative = 1e-12);
        assert_relative_eq!(state.positions[0][0], 0.66, max_relative = 1e-12);
        // Particle 1: v = -0.06 + (0.6-0.8) + (0.4-0.8) = -0.66; p = 0.14.
        assert_relative_eq!(state.velocities[1][0], -0.66, max_relative = 1e-12);
        assert_relative_eq!(state.positions[1][0], 0.14, max_relative = 1e-12);
        // Particle 1 improves its pbest (0.16 < 0.3) but not the global best
        // (0.10 at 0.4), which the strict-improvement rule keeps.
        assert_relative_eq!(state.pbest_positions[1][0], 0.14, max_relative = 1e-12);
        assert_relative_eq!(state.gbest_position[0], 0.4, max_relative = 1e-12);
        assert_relative_eq!(state.gbest_fitness, 0.1, max_relative = 1e-12);
    }

    #[test]
    fn constant_objective_keeps_an_initial_particle_and_flat_trace() {
        let objective = |_: &[f64]| 7.5;
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.particles = 8;
        config.iterations = 20;
        let outcome = optimize_objective(&objective, &config, EvalStrategy::Serial).unwrap();
        assert_eq!(outcome.fitness, 7.5);
        assert!(outcome.trace.iter().all(|&f| f == 7.5));
        // gbest must equal one of the seeded initial positions.
        let initials: Vec<Vec<f64>> = (0..8)
            .map(|i| {
                let mut rng = stream(config.seed, 0, i as u64);
                config
                    .bounds
                    .iter()
                    .map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
                    .collect()
            })
            .collect();
        assert!(initials.contains(&outcome.position));
    }

    #[test]
    fn trace_is_monotone_non_increasing() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.particles = 20;
        config.iterations = 60;
        config.seed = 42;
        let outcome = optimize(&raw, KindTemplate::Nipgm, &config).unwrap();
        assert!(outcome.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(outcome.trace.len(), 61);
    }

    #[test]
    fn pbest_dominance_invariants() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.particles = 12;
        config.iterations = 15;
        config.seed = 7;
        let objective = |p: &[f64]| penalized_fitness(p, &raw, KindTemplate::Nipgm, &config);
        let mut state = init_state(&objective, &config, EvalStrategy::Serial);
        for _ in 0..config.iterations {
            pso_step(&mut state, &config, &objective, EvalStrategy::Serial);
            let min_pbest = state
                .pbest_fitness
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            assert_eq!(state.gbest_fitness, min_pbest);
            for i in 0..config.particles {
                assert!(state.gbest_fitness <= state.pbest_fitness[i]);
                assert!(state.pbest_fitness[i] <= objective(&state.positions[i]));
            }
        }
    }

    #[test]
    fn identical_seed_identical_outcome() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.particles = 15;
        config.iterations = 30;
        config.seed = 123;
        let a = optimize(&raw, KindTemplate::Nipgm, &config).unwrap();
        let b = optimize(&raw, KindTemplate::Nipgm, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_decay_schedule() {
        let config = PsoConfig {
            inertia: Inertia::LinearDecay {
                w_min: 0.4,
                w_max: 0.9,
            },
            iterations: 100,
            ..PsoConfig::published(KindTemplate::Nipgm)
        };
        assert_relative_eq!(config.weight_at(0), 0.9, max_relative = 1e-12);
        assert_relative_eq!(config.weight_at(50), 0.65, max_relative = 1e-12);
        assert_relative_eq!(config.weight_at(100), 0.4, max_relative = 1e-12);
    }

    #[test]
    fn decay_inertia_search_still_converges() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.inertia = Inertia::LinearDecay {
            w_min: 0.4,
            w_max: 0.9,
        };
        config.particles = 30;
        config.iterations = 150;
        config.seed = 5;
        let outcome = optimize(&raw, KindTemplate::Nipgm, &config).unwrap();
        assert!(outcome.fitness < 1.0, "fitness {}", outcome.fitness);
    }

    #[test]
    fn prior_window_fitness_ignores_holdout() {
        let raw = jiangsu();
        let mut config = PsoConfig::published(KindTemplate::Nipgm);
        config.fitness_window = FitnessWindow::PriorOnly;
        let prior = penalized_fitness(&[0.3583, 0.6157], &raw, KindTemplate::Nipgm, &config);
        config.fitness_window = FitnessWindow::FullSample;
        let full = penalized_fitness(&[0.3583, 0.6157], &raw, KindTemplate::Nipgm, &config);
        // Published split: training error 0.0131, whole-sample 0.0120.
        assert!((prior - 0.0131).abs() < 0.01, "prior {prior}");
        assert!((full - 0.0120).abs() < 0.01, "full {full}");
        assert!(prior != full);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: Vec<u64> = (0..100).map(|t| trial_seed(42, t)).collect();
        let mut dedup = seeds.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), seeds.len());
    }

    #[test]
    fn in_bounds_point_beats_any_out_of_bounds_point() {
        let raw = jiangsu();
        let config = PsoConfig::published(KindTemplate::Nipgm);
        let feasible = penalized_fitness(&[0.5, 0.5], &raw, KindTemplate::Nipgm, &config);
        let infeasible = penalized_fitness(&[-0.2, 0.5], &raw, KindTemplate::Nipgm, &config);
        assert!(feasible < 10_000.0);
        assert!(infeasible >= 10_000.0);
        assert!(feasible < infeasible);
    }
}

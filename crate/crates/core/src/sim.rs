//! Monte Carlo loss simulation of repeated reconfiguration cycles.
//!
//! A trial loads a random configuration, then solves, executes and
//! re-measures until the target is covered or too few atoms remain. Every
//! operation draws a survival event, and every trapped atom also decays with
//! the wall time spent in the cycle.
//!
//! Random numbers come from per-trial ChaCha streams: stream 0 loads the
//! array, and each cycle owns one stream for operation draws and one for
//! lifetime draws. Operation draws are indexed by (path, step), so batched
//! and unbatched runs of the same cycle see the same fates.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::batching::{batch_plan, ConstraintPreset};
use crate::error::{ReconfError, Result};
use crate::geometry::{Configuration, Geometry, Problem, Vertex};
use crate::solution::Solution;
use crate::solver::{solve, Algorithm};

/// Trials stop as failures after this many cycles.
pub const MAX_CYCLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossModel<F> {
    pub p_nu: F,
    pub p_alpha: F,
    /// Trapping lifetime in seconds; infinite disables decay.
    pub tau: F,
    pub t_nu: F,
    pub t_alpha: F,
    pub t_meas: F,
}

fn lit<F: Float>(x: f64) -> F {
    F::from(x).expect("literal fits the scalar type")
}

impl<F: Float> LossModel<F> {
    /// Default survival probabilities and lifetime. The operation durations
    /// are calibrated so that 32x64 success rates come out near 0.30 for
    /// red-rec and 0.54 for bird.
    pub fn calibrated() -> Self {
        LossModel {
            p_nu: lit(0.985),
            p_alpha: lit(0.985),
            tau: lit(60.0),
            t_nu: lit(5e-6),
            t_alpha: lit(10e-6),
            t_meas: lit(5e-3),
        }
    }

    pub fn lossless() -> Self {
        LossModel {
            p_nu: F::one(),
            p_alpha: F::one(),
            tau: F::infinity(),
            ..Self::calibrated()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: F| p >= F::zero() && p <= F::one();
        if !unit(self.p_nu) || !unit(self.p_alpha) {
            return Err(ReconfError::InvalidInput("survival probabilities must lie in [0, 1]".into()));
        }
        if !(self.tau > F::zero()) {
            return Err(ReconfError::InvalidInput("lifetime must be positive".into()));
        }
        if [self.t_nu, self.t_alpha, self.t_meas].iter().any(|t| !(*t >= F::zero()) || !t.is_finite()) {
            return Err(ReconfError::InvalidInput("durations must be finite and non-negative".into()));
        }
        Ok(())
    }

    /// Probability that one trapped atom outlives `dt` seconds.
    pub fn lifetime_survival(&self, dt: F) -> F {
        (-dt / self.tau).exp()
    }
}

impl<F: Float> Default for LossModel<F> {
    fn default() -> Self {
        Self::calibrated()
    }
}

/// Operation counts of one reconfiguration cycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord<F> {
    pub n_nu: usize,
    pub n_alpha: usize,
    pub nb_nu: usize,
    pub nb_alpha: usize,
    pub edi_cycles: usize,
    pub atoms_lost: usize,
    pub elapsed: F,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome<F> {
    pub success: bool,
    /// Reconfiguration cycles run (solve, execute, measure).
    pub cycles: usize,
    pub edi_cycles: usize,
    pub n_nu: usize,
    pub n_alpha: usize,
    pub nb_nu: usize,
    pub nb_alpha: usize,
    pub atoms_lost: usize,
    pub elapsed: F,
    pub per_cycle: Vec<CycleRecord<F>>,
}

/// Random-loading problem family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    /// Chain of `round(targets / eta)` traps with a centered target segment.
    Chain { targets: usize, eta: f64 },
    /// Grid with a centered `width x target_height` target block.
    Grid { width: usize, height: usize, target_height: usize },
}

impl Family {
    pub fn geometry(&self) -> Result<Geometry> {
        match *self {
            Family::Chain { targets, eta } => {
                if !(eta > 0.0 && eta <= 1.0) {
                    return Err(ReconfError::InvalidInput(format!("eta {eta} must lie in (0, 1]")));
                }
                Geometry::chain((targets as f64 / eta).round() as usize)
            }
            Family::Grid { width, height, .. } => Geometry::grid(width, height),
        }
    }

    /// The problem for a given loaded configuration.
    pub fn problem(&self, sources: Configuration) -> Result<Problem> {
        let g = self.geometry()?;
        match *self {
            Family::Chain { targets, .. } => {
                let n = g.vertex_count();
                if targets == 0 || targets > n {
                    return Err(ReconfError::InvalidInput(format!("{targets} targets on a chain of {n}")));
                }
                let lo = (n - targets) / 2;
                let t = Configuration::from_vertices(g, (lo..lo + targets).map(|x| Vertex::new(x, 0)))?;
                Problem::new(g, sources, t)
            }
            Family::Grid { target_height, .. } => Problem::centered(g, sources, target_height),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig<F> {
    pub family: Family,
    /// Loading efficiency.
    pub epsilon: f64,
    pub algorithm: Algorithm,
    pub batching: bool,
    pub constraints: ConstraintPreset,
    pub loss: LossModel<F>,
    pub samples: usize,
    pub seed: u64,
}

impl<F: Float + Serialize> ExperimentConfig<F> {
    /// Stable digest of every field except the seed.
    pub fn config_hash(&self) -> u64 {
        let mut c = self.clone();
        c.seed = 0;
        let mut h = DefaultHasher::new();
        serde_json::to_string(&c).expect("config serializes").hash(&mut h);
        h.finish()
    }
}

/// Exactly `round(epsilon * N_t)` distinct vertices, uniformly at random.
pub fn sample_initial(geometry: Geometry, epsilon: f64, seed: u64) -> Result<Configuration> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(ReconfError::InvalidInput(format!("loading efficiency {epsilon} must lie in (0, 1]")));
    }
    let n = geometry.vertex_count();
    let k = ((epsilon * n as f64).round() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, n, k);
    Configuration::from_vertices(geometry, picked.into_iter().map(|i| geometry.vertex(i)))
}

fn cycle_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Survival draws for every planned operation of a cycle. Path `i` owns
/// `len + 2` draws: extraction, one per step, implantation.
struct OpDraws<F> {
    offset: Vec<usize>,
    draws: Vec<F>,
}

impl<F: Float> OpDraws<F> {
    fn new(sol: &Solution, rng: &mut ChaCha8Rng) -> Self {
        let mut offset = Vec::with_capacity(sol.path_system.len());
        let mut total = 0;
        for p in &sol.path_system.paths {
            offset.push(total);
            total += p.len() + 2;
        }
        let draws = (0..total).map(|_| lit(rng.gen::<f64>())).collect();
        OpDraws { offset, draws }
    }

    fn extraction(&self, i: usize) -> F {
        self.draws[self.offset[i]]
    }

    fn step(&self, i: usize, j: usize) -> F {
        self.draws[self.offset[i] + 1 + j]
    }

    fn implantation(&self, i: usize, len: usize) -> F {
        self.draws[self.offset[i] + 1 + len]
    }
}

/// Executes one cycle's paths one at a time.
fn execute_unbatched<F: Float>(
    sol: &Solution,
    occ: &mut Configuration,
    loss: &LossModel<F>,
    draws: &OpDraws<F>,
    rec: &mut CycleRecord<F>,
) {
    for (i, p) in sol.path_system.paths.iter().enumerate() {
        if !occ.remove(p.source()) {
            continue;
        }
        let k = p.len();
        rec.edi_cycles += 1;
        rec.n_alpha += 2;
        rec.nb_alpha += 2;
        rec.n_nu += k;
        rec.nb_nu += k;
        rec.elapsed = rec.elapsed + lit::<F>(2.0) * loss.t_alpha + lit::<F>(k as f64) * loss.t_nu;
        let alive = draws.extraction(i) < loss.p_alpha
            && (0..k).all(|j| draws.step(i, j) < loss.p_nu)
            && draws.implantation(i, k) < loss.p_alpha;
        if alive {
            let fresh = occ.insert(p.target());
            debug_assert!(fresh, "target {:?} already occupied", p.target());
        } else {
            rec.atoms_lost += 1;
        }
    }
}

/// Executes one cycle's paths as batches. An EDI cycle is a maximal run of
/// batches moving the same set of paths; tokens whose path starts in the run
/// are extracted in one transfer batch and tokens whose path ends in it are
/// implanted in another. Tokens crossing a run boundary stay in the moving
/// traps, so per-token operation counts match the unbatched execution.
fn execute_batched<F: Float>(
    sol: &Solution,
    plan: &[Vec<usize>],
    occ: &mut Configuration,
    loss: &LossModel<F>,
    draws: &OpDraws<F>,
    rec: &mut CycleRecord<F>,
) {
    let paths = &sol.path_system.paths;
    let n = paths.len();
    let mut step = vec![0usize; n];
    // None: not started; Some(b): started, b tells whether the atom still lives.
    let mut state: Vec<Option<bool>> = vec![None; n];
    let mut active = vec![false; n];
    let mut start = 0;
    while start < plan.len() {
        let mut set = plan[start].clone();
        set.sort_unstable();
        let mut end = start + 1;
        while end < plan.len() && {
            let mut s = plan[end].clone();
            s.sort_unstable();
            s == set
        } {
            end += 1;
        }
        let mut extracted = false;
        for &i in &set {
            if state[i].is_none() {
                state[i] = Some(false);
                if occ.remove(paths[i].source()) {
                    active[i] = true;
                    extracted = true;
                    rec.n_alpha += 1;
                    state[i] = Some(draws.extraction(i) < loss.p_alpha);
                }
            }
        }
        if !set.iter().any(|&i| active[i]) {
            for &i in &set {
                step[i] += end - start;
            }
            start = end;
            continue;
        }
        rec.edi_cycles += 1;
        if extracted {
            rec.nb_alpha += 1;
            rec.elapsed = rec.elapsed + loss.t_alpha;
        }
        for _ in start..end {
            rec.nb_nu += 1;
            rec.elapsed = rec.elapsed + loss.t_nu;
            for &i in &set {
                if active[i] {
                    rec.n_nu += 1;
                    if state[i] == Some(true) && draws.step(i, step[i]) >= loss.p_nu {
                        state[i] = Some(false);
                    }
                }
                step[i] += 1;
            }
        }
        let mut implanted = false;
        for &i in &set {
            if active[i] && step[i] == paths[i].len() {
                implanted = true;
                rec.n_alpha += 1;
                let k = paths[i].len();
                if state[i] == Some(true) && draws.implantation(i, k) < loss.p_alpha {
                    let fresh = occ.insert(paths[i].target());
                    debug_assert!(fresh);
                } else {
                    rec.atoms_lost += 1;
                }
            }
        }
        if implanted {
            rec.nb_alpha += 1;
            rec.elapsed = rec.elapsed + loss.t_alpha;
        }
        start = end;
    }
}

/// How a trial executes its schedules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    #[default]
    Sequential,
    Batched(ConstraintPreset),
}

/// Runs reconfiguration cycles on `problem` (whose sources are the loaded
/// atoms) until the targets are covered or fewer atoms than targets remain.
pub fn run_trial<F: Float>(
    problem: &Problem,
    algorithm: Algorithm,
    loss: &LossModel<F>,
    execution: Execution,
    seed: u64,
) -> Result<TrialOutcome<F>> {
    loss.validate()?;
    let constraints = match execution {
        Execution::Batched(c) => Some(c.build()),
        Execution::Sequential => None,
    };
    let mut out = TrialOutcome {
        success: false,
        cycles: 0,
        edi_cycles: 0,
        n_nu: 0,
        n_alpha: 0,
        nb_nu: 0,
        nb_alpha: 0,
        atoms_lost: 0,
        elapsed: F::zero(),
        per_cycle: Vec::new(),
    };
    let mut occ = problem.sources.clone();
    let need = problem.targets.len();
    loop {
        if occ.is_superset_of(&problem.targets) {
            out.success = true;
            break;
        }
        if occ.len() < need || out.cycles == MAX_CYCLES {
            break;
        }
        let cycle = out.cycles as u64;
        let mut current = problem.clone();
        current.sources = occ.clone();
        let sol = solve(&current, algorithm)?;
        let draws = OpDraws::new(&sol, &mut cycle_rng(seed, 2 * cycle + 1));
        let mut rec = CycleRecord {
            n_nu: 0,
            n_alpha: 0,
            nb_nu: 0,
            nb_alpha: 0,
            edi_cycles: 0,
            atoms_lost: 0,
            elapsed: F::zero(),
        };
        match &constraints {
            None => execute_unbatched(&sol, &mut occ, loss, &draws, &mut rec),
            Some(c) => {
                let plan = batch_plan(&sol.path_system, &sol.dag, c)?;
                execute_batched(&sol, &plan, &mut occ, loss, &draws, &mut rec);
            }
        }
        rec.elapsed = rec.elapsed + loss.t_meas;
        let keep = loss.lifetime_survival(rec.elapsed);
        if keep < F::one() {
            let mut rng = cycle_rng(seed, 2 * cycle + 2);
            let g = problem.geometry;
            for idx in 0..g.vertex_count() {
                let u: F = lit(rng.gen::<f64>());
                let v = g.vertex(idx);
                if u >= keep && occ.remove(v) {
                    rec.atoms_lost += 1;
                }
            }
        }
        out.cycles += 1;
        out.edi_cycles += rec.edi_cycles;
        out.n_nu += rec.n_nu;
        out.n_alpha += rec.n_alpha;
        out.nb_nu += rec.nb_nu;
        out.nb_alpha += rec.nb_alpha;
        out.atoms_lost += rec.atoms_lost;
        out.elapsed = out.elapsed + rec.elapsed;
        out.per_cycle.push(rec);
    }
    Ok(out)
}

/// Per-cycle means over the trials that ran that cycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CycleMeans<F> {
    pub cycle: usize,
    pub trials: usize,
    pub n_nu: F,
    pub n_alpha: F,
    pub nb_nu: F,
    pub nb_alpha: F,
    pub edi_cycles: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats<F> {
    pub samples: usize,
    pub successes: usize,
    pub p_mean: F,
    /// Binomial standard error of `p_mean`.
    pub std_err: F,
    pub mean_cycles: F,
    pub mean_edi_cycles: F,
    pub mean_n_nu: F,
    pub mean_n_alpha: F,
    pub mean_nb_nu: F,
    pub mean_nb_alpha: F,
    pub mean_atoms_lost: F,
    pub mean_elapsed: F,
    pub per_cycle: Vec<CycleMeans<F>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord<F> {
    pub config_hash: u64,
    pub seed: u64,
    pub success: bool,
    pub cycles: usize,
    pub edi_cycles: usize,
    pub n_nu: usize,
    pub n_alpha: usize,
    pub nb_nu: usize,
    pub nb_alpha: usize,
    pub elapsed_model_time: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment<F> {
    pub config: ExperimentConfig<F>,
    pub stats: ExperimentStats<F>,
    #[serde(skip)]
    pub trials: Vec<TrialOutcome<F>>,
}

impl<F: Float + Serialize> Experiment<F> {
    pub fn records(&self) -> Vec<TrialRecord<F>> {
        let hash = self.config.config_hash();
        self.trials
            .iter()
            .enumerate()
            .map(|(i, t)| TrialRecord {
                config_hash: hash,
                seed: self.config.seed.wrapping_add(i as u64),
                success: t.success,
                cycles: t.cycles,
                edi_cycles: t.edi_cycles,
                n_nu: t.n_nu,
                n_alpha: t.n_alpha,
                nb_nu: t.nb_nu,
                nb_alpha: t.nb_alpha,
                elapsed_model_time: t.elapsed,
            })
            .collect()
    }
}

/// One trial of an experiment: sample, build the problem, run cycles. A
/// configuration with fewer atoms than targets fails without running.
pub fn run_seeded<F: Float>(config: &ExperimentConfig<F>, seed: u64) -> Result<TrialOutcome<F>> {
    let g = config.family.geometry()?;
    let s = sample_initial(g, config.epsilon, seed)?;
    let problem = config.family.problem(s)?;
    let execution = if config.batching {
        Execution::Batched(config.constraints)
    } else {
        Execution::Sequential
    };
    run_trial(&problem, config.algorithm, &config.loss, execution, seed)
}

pub fn aggregate<F: Float>(trials: &[TrialOutcome<F>]) -> ExperimentStats<F> {
    let n = trials.len().max(1);
    let nf: F = lit(n as f64);
    let mean = |f: &dyn Fn(&TrialOutcome<F>) -> F| trials.iter().fold(F::zero(), |a, t| a + f(t)) / nf;
    let count = |x: usize| lit::<F>(x as f64);
    let successes = trials.iter().filter(|t| t.success).count();
    let p = count(successes) / nf;
    let std_err = (p * (F::one() - p) / nf).sqrt();
    let depth = trials.iter().map(|t| t.per_cycle.len()).max().unwrap_or(0);
    let per_cycle = (0..depth)
        .map(|c| {
            let rows: Vec<&CycleRecord<F>> = trials.iter().filter_map(|t| t.per_cycle.get(c)).collect();
            let k = lit::<F>(rows.len() as f64);
            let avg = |f: &dyn Fn(&CycleRecord<F>) -> usize| rows.iter().map(|r| count(f(r))).fold(F::zero(), |a, b| a + b) / k;
            CycleMeans {
                cycle: c + 1,
                trials: rows.len(),
                n_nu: avg(&|r| r.n_nu),
                n_alpha: avg(&|r| r.n_alpha),
                nb_nu: avg(&|r| r.nb_nu),
                nb_alpha: avg(&|r| r.nb_alpha),
                edi_cycles: avg(&|r| r.edi_cycles),
            }
        })
        .collect();
    ExperimentStats {
        samples: trials.len(),
        successes,
        p_mean: p,
        std_err,
        mean_cycles: mean(&|t| count(t.cycles)),
        mean_edi_cycles: mean(&|t| count(t.edi_cycles)),
        mean_n_nu: mean(&|t| count(t.n_nu)),
        mean_n_alpha: mean(&|t| count(t.n_alpha)),
        mean_nb_nu: mean(&|t| count(t.nb_nu)),
        mean_nb_alpha: mean(&|t| count(t.nb_alpha)),
        mean_atoms_lost: mean(&|t| count(t.atoms_lost)),
        mean_elapsed: mean(&|t| t.elapsed),
        per_cycle,
    }
}

/// Runs `samples` trials with seeds `seed, seed + 1, ...` on the current
/// rayon pool. Results are gathered in seed order, so the statistics do not
/// depend on the number of workers.
pub fn estimate_success<F: Float + Send + Sync>(config: &ExperimentConfig<F>) -> Result<Experiment<F>> {
    if config.samples == 0 {
        return Err(ReconfError::InvalidInput("sample count must be at least 1".into()));
    }
    config.loss.validate()?;
    let trials = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| run_seeded(config, config.seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment {
        config: config.clone(),
        stats: aggregate(&trials),
        trials,
    })
}

/// `estimate_success` on a dedicated pool of `jobs` workers.
pub fn estimate_success_with_jobs<F: Float + Send + Sync>(config: &ExperimentConfig<F>, jobs: usize) -> Result<Experiment<F>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ReconfError::Internal(e.to_string()))?;
    pool.install(|| estimate_success(config))
}

/// One point of a success surface over grid sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint<F> {
    pub width: usize,
    pub height: usize,
    pub p_mean: F,
    pub std_err: F,
}

/// Success probability for every `(width, height)` pair, with a square
/// `width x width` target, keeping the rest of `base`.
pub fn success_surface<F: Float + Send + Sync>(
    base: &ExperimentConfig<F>,
    widths: &[usize],
    heights: &[usize],
) -> Result<Vec<SurfacePoint<F>>> {
    let mut out = Vec::new();
    for &w in widths {
        for &h in heights {
            if h <= w {
                continue;
            }
            let mut c = base.clone();
            c.family = Family::Grid { width: w, height: h, target_height: w };
            let e = estimate_success(&c)?;
            out.push(SurfacePoint { width: w, height: h, p_mean: e.stats.p_mean, std_err: e.stats.std_err });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_config(algorithm: Algorithm, loss: LossModel<f64>) -> ExperimentConfig<f64> {
        ExperimentConfig {
            family: Family::Grid { width: 8, height: 16, target_height: 8 },
            epsilon: 0.6,
            algorithm,
            batching: false,
            constraints: ConstraintPreset::None,
            loss,
            samples: 40,
            seed: 3,
        }
    }

    #[test]
    fn sample_initial_examples() {
        let g = Geometry::grid(4, 4).unwrap();
        assert_eq!(sample_initial(g, 1.0, 0).unwrap(), Configuration::full(g));
        let g = Geometry::grid(32, 54).unwrap();
        assert_eq!(sample_initial(g, 0.6, 5).unwrap().len(), 1037);
        assert_eq!(sample_initial(g, 0.6, 5).unwrap(), sample_initial(g, 0.6, 5).unwrap());
        assert_ne!(sample_initial(g, 0.6, 5).unwrap(), sample_initial(g, 0.6, 6).unwrap());
        assert!(sample_initial(g, 0.0, 5).is_err());
    }

    #[test]
    fn lossless_trials_succeed_in_one_cycle() {
        let c = grid_config(Algorithm::Bird, LossModel::lossless());
        for seed in 0..10 {
            let t = run_seeded(&c, seed).unwrap();
            assert!(t.success);
            assert_eq!(t.cycles, 1);
            assert_eq!(t.atoms_lost, 0);
            assert_eq!(t.n_alpha, 2 * t.edi_cycles);
        }
    }

    #[test]
    fn certain_loss_fails() {
        let loss = LossModel { p_nu: 0.0, ..LossModel::lossless() };
        let c = grid_config(Algorithm::Redrec, loss);
        let t = run_seeded(&c, 1).unwrap();
        assert!(!t.success);
    }

    #[test]
    fn batching_conserves_operation_counts() {
        let loss = LossModel { tau: f64::INFINITY, ..LossModel::calibrated() };
        for algorithm in [Algorithm::Redrec, Algorithm::Bird] {
            let mut c = grid_config(algorithm, loss);
            for seed in 0..8 {
                c.batching = false;
                let a = run_seeded(&c, seed).unwrap();
                c.batching = true;
                let b = run_seeded(&c, seed).unwrap();
                assert_eq!((a.n_nu, a.n_alpha, a.success, a.cycles), (b.n_nu, b.n_alpha, b.success, b.cycles));
                assert!(b.nb_nu <= a.nb_nu && b.edi_cycles <= a.edi_cycles);
            }
        }
    }

    #[test]
    fn estimates_are_job_count_independent() {
        let c = grid_config(Algorithm::Redrec, LossModel::calibrated());
        let a = estimate_success_with_jobs(&c, 1).unwrap();
        let b = estimate_success_with_jobs(&c, 4).unwrap();
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.records(), b.records());
    }

    #[test]
    fn f32_model_runs() {
        let c = ExperimentConfig::<f32> {
            family: Family::Chain { targets: 20, eta: 0.5 },
            epsilon: 0.6,
            algorithm: Algorithm::Exact1d,
            batching: true,
            constraints: ConstraintPreset::None,
            loss: LossModel::calibrated(),
            samples: 10,
            seed: 0,
        };
        let e = estimate_success(&c).unwrap();
        assert_eq!(e.stats.samples, 10);
        assert!(e.stats.p_mean >= 0.0 && e.stats.p_mean <= 1.0);
    }
}

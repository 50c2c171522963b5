use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use atomreconf::batching::{batch_moves, ConstraintPreset};
use atomreconf::io::{read_instance, read_solution, write_instance, write_solution};
use atomreconf::oracle::{brute_force_min_matching, check_equivalence, OracleMode};
use atomreconf::sim::{estimate_success_with_jobs, sample_initial, success_surface, ExperimentConfig, Family, LossModel};
use atomreconf::stats::{loglog_fit, SlopeFit};
use atomreconf::{solve, validate_solution, Algorithm, Problem, ReconfError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exit classes: 2 invalid input, 3 infeasible, 4 failed validation, 1 other.
#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    Infeasible(anyhow::Error),
    Validation(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Validation(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Invalid(e) | Failure::Infeasible(e) | Failure::Validation(e) | Failure::Other(e) => format!("{e:#}"),
        }
    }
}

impl From<ReconfError> for Failure {
    fn from(e: ReconfError) -> Self {
        match e {
            ReconfError::InvalidInput(_) | ReconfError::OutOfBounds { .. } => Failure::Invalid(e.into()),
            ReconfError::Infeasible { .. } => Failure::Infeasible(e.into()),
            ReconfError::Collision { .. } => Failure::Validation(e.into()),
            _ => Failure::Other(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<ReconfError>() {
            Ok(r) => r.into(),
            Err(e) => Failure::Other(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(anyhow!(msg.into()))
}

#[derive(Parser)]
#[command(name = "atomreconf", version, about = "Atom reconfiguration solvers, batching and loss simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Exact1d,
    Redrec,
    Bird,
    Aro,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Exact1d => Algorithm::Exact1d,
            AlgoArg::Redrec => Algorithm::Redrec,
            AlgoArg::Bird => Algorithm::Bird,
            AlgoArg::Aro => Algorithm::Aro,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    None,
    ColumnDirection,
}

impl From<ConstraintArg> for ConstraintPreset {
    fn from(c: ConstraintArg) -> Self {
        match c {
            ConstraintArg::None => ConstraintPreset::None,
            ConstraintArg::ColumnDirection => ConstraintPreset::ColumnDirection,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct BatchFlag {
    /// Execute schedules as batches.
    #[arg(long, overrides_with = "no_batch")]
    batch: bool,
    #[arg(long)]
    no_batch: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Random instance with a centered target block (grid) or segment (chain).
    Gen {
        #[arg(long, default_value_t = 8)]
        width: usize,
        #[arg(long, default_value_t = 16)]
        height: usize,
        #[arg(long)]
        target_height: Option<usize>,
        /// Chain length; overrides the grid options.
        #[arg(long)]
        chain: Option<usize>,
        /// Target count on a chain.
        #[arg(long)]
        targets: Option<usize>,
        #[arg(long, default_value_t = 0.6)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and validate the result.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "redrec")]
        algo: AlgoArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve (or load a solution) and group its moves into batches.
    Batch {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "redrec")]
        algo: AlgoArg,
        /// Batch this solution instead of solving.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "column-direction")]
        constraints: ConstraintArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Monte Carlo success probability under loss.
    Simulate(SimulateArgs),
    /// Solver runtime against problem size, with a log-log slope fit.
    Bench {
        #[arg(long, value_enum, default_value = "redrec")]
        algo: AlgoArg,
        /// Grid widths (height is twice the width), or chain lengths for exact1d.
        #[arg(long, value_delimiter = ',', default_value = "8,12,16,24,32")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.6)]
        epsilon: f64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Compare solver weights with brute-force minimum matchings.
    OracleCheck {
        #[arg(long, value_enum, default_value = "aro")]
        algo: AlgoArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "redrec")]
    algo: AlgoArg,
    /// Grid size as WxH.
    #[arg(long, default_value = "32x64")]
    grid: String,
    /// Target block as WxH'; W must match the grid width.
    #[arg(long)]
    target: Option<String>,
    /// Chain instead of grid: number of targets.
    #[arg(long)]
    chain_targets: Option<usize>,
    /// Target density on chains.
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long, default_value_t = 0.6)]
    epsilon: f64,
    #[command(flatten)]
    batching: BatchFlag,
    #[arg(long, value_enum, default_value = "none")]
    constraints: ConstraintArg,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    p_nu: Option<f64>,
    #[arg(long)]
    p_alpha: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    t_nu: Option<f64>,
    #[arg(long)]
    t_alpha: Option<f64>,
    #[arg(long)]
    t_meas: Option<f64>,
    /// Widths for a success surface over (width, height).
    #[arg(long, value_delimiter = ',')]
    surface_widths: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    surface_heights: Vec<usize>,
    /// Directory receiving trials.csv and aggregate.json; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing stdout")?;
        }
    }
    Ok(())
}

fn json_only(format: Format, verb: &str) -> CliResult<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(invalid(format!("{verb} writes JSON only"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).context("serializing output")?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).context("writing CSV")?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("flushing CSV: {e}"))?;
    Ok(String::from_utf8(bytes).context("CSV is UTF-8")?)
}

fn load_problem(path: &Path) -> CliResult<Problem> {
    Ok(read_instance(&read_file(path)?)?)
}

fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(invalid("--jobs must be at least 1"));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Failure::Other(e.into()))
}

fn parse_dims(s: &str) -> CliResult<(usize, usize)> {
    let (a, b) = s.split_once('x').ok_or_else(|| invalid(format!("expected WxH, got {s:?}")))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| invalid(format!("bad size {s:?}")));
    Ok((p(a)?, p(b)?))
}

fn cmd_gen(
    width: usize,
    height: usize,
    target_height: Option<usize>,
    chain: Option<usize>,
    targets: Option<usize>,
    epsilon: f64,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<()> {
    let family = match chain {
        Some(n) => {
            let t = targets.ok_or_else(|| invalid("--chain needs --targets"))?;
            if t == 0 || t > n {
                return Err(invalid(format!("{t} targets do not fit a chain of {n}")));
            }
            Family::Chain { targets: t, eta: t as f64 / n as f64 }
        }
        None => Family::Grid {
            width,
            height,
            target_height: target_height.unwrap_or(height / 2),
        },
    };
    let g = family.geometry()?;
    if g.vertex_count() == 0 {
        return Err(invalid("empty geometry"));
    }
    let problem = family.problem(sample_initial(g, epsilon, seed)?)?;
    emit(out, &(write_instance(&problem) + "\n"))
}

#[derive(Serialize)]
struct ValidationSummary {
    passed: bool,
    displaced_tokens: usize,
    total_displacement: usize,
    failures: Vec<String>,
}

fn cmd_solve(instance: &Path, algo: Algorithm, out: Option<&Path>, format: Format) -> CliResult<()> {
    json_only(format, "solve")?;
    let problem = load_problem(instance)?;
    problem.check_feasible()?;
    let solution = solve(&problem, algo)?;
    let report = validate_solution(&problem, &solution);
    let summary = ValidationSummary {
        passed: report.passed(),
        displaced_tokens: solution.stats.displaced_tokens,
        total_displacement: solution.stats.total_displacement,
        failures: report.failures.iter().map(|f| f.to_string()).collect(),
    };
    eprintln!("{}", serde_json::to_string(&summary).context("serializing report")?);
    emit(out, &(write_solution(&solution) + "\n"))?;
    if !report.passed() {
        return Err(Failure::Validation(anyhow!("solution failed validation: {report}")));
    }
    Ok(())
}

fn cmd_batch(
    instance: &Path,
    algo: Algorithm,
    solution: Option<&Path>,
    constraints: ConstraintPreset,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    json_only(format, "batch")?;
    let problem = load_problem(instance)?;
    let sol = match solution {
        Some(p) => read_solution(&read_file(p)?)?,
        None => {
            problem.check_feasible()?;
            solve(&problem, algo)?
        }
    };
    let report = validate_solution(&problem, &sol);
    if !report.passed() {
        return Err(Failure::Validation(anyhow!("solution failed validation: {report}")));
    }
    let schedule = batch_moves(&sol.path_system, &sol.dag, &constraints.build())?;
    let end = atomreconf::batching::execute_batches(&problem.sources, &schedule)?;
    if !end.is_superset_of(&problem.targets) {
        return Err(Failure::Validation(anyhow!("batched execution leaves targets empty")));
    }
    emit(out, &(serde_json::to_string(&schedule).context("serializing batches")? + "\n"))
}

#[derive(Serialize)]
struct Aggregate<'a> {
    config_hash: u64,
    config: &'a ExperimentConfig<f64>,
    stats: &'a atomreconf::ExperimentStatsF64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    surface: Vec<atomreconf::sim::SurfacePoint<f64>>,
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult<()> {
    let family = match a.chain_targets {
        Some(t) => Family::Chain { targets: t, eta: a.eta },
        None => {
            let (w, h) = parse_dims(&a.grid)?;
            let target_height = match &a.target {
                Some(t) => {
                    let (tw, th) = parse_dims(t)?;
                    if tw != w {
                        return Err(invalid(format!("target width {tw} must equal grid width {w}")));
                    }
                    th
                }
                None => w.min(h.saturating_sub(1)),
            };
            Family::Grid { width: w, height: h, target_height }
        }
    };
    let base = LossModel::<f64>::calibrated();
    let loss = LossModel {
        p_nu: a.p_nu.unwrap_or(base.p_nu),
        p_alpha: a.p_alpha.unwrap_or(base.p_alpha),
        tau: a.tau.unwrap_or(base.tau),
        t_nu: a.t_nu.unwrap_or(base.t_nu),
        t_alpha: a.t_alpha.unwrap_or(base.t_alpha),
        t_meas: a.t_meas.unwrap_or(base.t_meas),
    };
    let config = ExperimentConfig {
        family,
        epsilon: a.epsilon,
        algorithm: a.algo.into(),
        batching: a.batching.batch && !a.batching.no_batch,
        constraints: a.constraints.into(),
        loss,
        samples: a.samples,
        seed: a.seed,
    };
    let jobs = a.jobs.unwrap_or_else(rayon::current_num_threads);
    if jobs == 0 {
        return Err(invalid("--jobs must be at least 1"));
    }
    let exp = estimate_success_with_jobs(&config, jobs)?;
    let surface = if a.surface_widths.is_empty() {
        Vec::new()
    } else {
        if a.surface_heights.is_empty() {
            return Err(invalid("--surface-widths needs --surface-heights"));
        }
        pool(Some(jobs))?.install(|| success_surface(&config, &a.surface_widths, &a.surface_heights))?
    };
    let aggregate = Aggregate {
        config_hash: config.config_hash(),
        config: &config,
        stats: &exp.stats,
        surface,
    };
    let trials = to_csv(&exp.records())?;
    let summary = to_json(&aggregate)?;
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            emit(Some(&dir.join("trials.csv")), &trials)?;
            emit(Some(&dir.join("aggregate.json")), &summary)
        }
        None => match a.format {
            Format::Json => emit(None, &summary),
            Format::Csv => emit(None, &trials),
        },
    }
}

#[derive(Serialize)]
struct BenchRow {
    algo: Algorithm,
    size: usize,
    n_t: usize,
    rep: usize,
    seed: u64,
    seconds: f64,
}

#[derive(Serialize)]
struct BenchReport {
    rows: Vec<BenchRow>,
    /// Median runtime against trap count.
    fit: Option<SlopeFit<f64>>,
}

/// Grids are `size x 2 size` with a square target. Chains of `size` traps
/// get uniformly scattered sources and half as many scattered targets.
fn bench_problem(algo: Algorithm, size: usize, epsilon: f64, seed: u64) -> CliResult<Problem> {
    if algo == Algorithm::Exact1d {
        let g = atomreconf::Geometry::chain(size)?;
        let s = sample_initial(g, epsilon, seed)?;
        let t = sample_initial(g, epsilon / 2.0, seed ^ 0x5bd1_e995)?;
        return Ok(Problem::new(g, s, t)?);
    }
    let family = Family::Grid { width: size, height: 2 * size, target_height: size };
    Ok(family.problem(sample_initial(family.geometry()?, epsilon, seed)?)?)
}

fn cmd_bench(
    algo: Algorithm,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    epsilon: f64,
    jobs: Option<usize>,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    if sizes.is_empty() || reps == 0 {
        return Err(invalid("need at least one size and one repetition"));
    }
    let pool = pool(jobs)?;
    let mut rows = Vec::new();
    let mut medians = Vec::new();
    for &size in sizes {
        let mut times = Vec::new();
        let mut rep = 0;
        let mut attempt = 0u64;
        while rep < reps {
            let s = seed.wrapping_add(attempt);
            attempt += 1;
            if attempt > 100 * reps as u64 {
                return Err(Failure::Infeasible(anyhow!("could not load a feasible instance of size {size}")));
            }
            let problem = bench_problem(algo, size, epsilon, s)?;
            if problem.check_feasible().is_err() {
                continue;
            }
            let t = Instant::now();
            let sol = pool.install(|| solve(&problem, algo))?;
            let seconds = t.elapsed().as_secs_f64();
            std::hint::black_box(&sol);
            times.push(seconds);
            rows.push(BenchRow {
                algo,
                size,
                n_t: problem.geometry.vertex_count(),
                rep,
                seed: s,
                seconds,
            });
            rep += 1;
        }
        times.sort_by(f64::total_cmp);
        medians.push((rows.last().map(|r| r.n_t).unwrap_or(size) as f64, times[times.len() / 2].max(1e-9)));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = medians.into_iter().unzip();
    let fit = loglog_fit(&xs, &ys).ok();
    match format {
        Format::Csv => {
            if let Some(f) = &fit {
                eprintln!("slope {:.3} r2 {:.3}", f.slope, f.r_squared);
            }
            emit(out, &to_csv(&rows)?)
        }
        Format::Json => emit(out, &to_json(&BenchReport { rows, fit })?),
    }
}

#[derive(Serialize)]
struct OracleRow {
    instance: usize,
    width: usize,
    height: usize,
    targets: usize,
    solver_weight: u64,
    oracle_weight: u64,
    gap: i64,
    ok: bool,
    valid: bool,
}

#[derive(Serialize)]
struct OracleSummary {
    algo: Algorithm,
    instances: usize,
    exact: usize,
    failures: usize,
    rows: Vec<OracleRow>,
}

fn cmd_oracle_check(
    algo: Algorithm,
    samples: usize,
    seed: u64,
    max_size: usize,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    use rand::{Rng, SeedableRng};
    if max_size < 2 {
        return Err(invalid("--max-size must be at least 2"));
    }
    let expect_exact = matches!(algo, Algorithm::Exact1d | Algorithm::Aro);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    while rows.len() < samples {
        let (w, h) = match algo {
            Algorithm::Exact1d => (rng.gen_range(2..=4 * max_size), 1),
            _ => (rng.gen_range(1..=max_size), rng.gen_range(2..=max_size)),
        };
        let family = match algo {
            Algorithm::Exact1d => Family::Chain { targets: rng.gen_range(1..=w.min(12)), eta: 1.0 },
            _ => Family::Grid { width: w, height: h, target_height: rng.gen_range(1..h) },
        };
        let family = match family {
            Family::Chain { targets, .. } => Family::Chain { targets, eta: targets as f64 / w as f64 },
            f => f,
        };
        let eps = rng.gen_range(0.3..0.9);
        let problem = family.problem(sample_initial(family.geometry()?, eps, rng.gen())?)?;
        if problem.check_feasible().is_err() || problem.targets.len() > 16 {
            continue;
        }
        let sol = solve(&problem, algo)?;
        let valid = validate_solution(&problem, &sol).passed();
        let oracle = brute_force_min_matching(&problem, OracleMode::Hungarian)?;
        let v = check_equivalence(sol.stats.total_displacement as u64, oracle.weight, expect_exact);
        rows.push(OracleRow {
            instance: rows.len(),
            width: w,
            height: h,
            targets: problem.targets.len(),
            solver_weight: sol.stats.total_displacement as u64,
            oracle_weight: oracle.weight,
            gap: v.gap,
            ok: v.ok,
            valid,
        });
    }
    let failures = rows.iter().filter(|r| !r.ok || !r.valid).count();
    let exact = rows.iter().filter(|r| r.gap == 0).count();
    match format {
        Format::Csv => emit(out, &to_csv(&rows)?)?,
        Format::Json => emit(
            out,
            &to_json(&OracleSummary {
                algo,
                instances: rows.len(),
                exact,
                failures,
                rows,
            })?,
        )?,
    }
    if failures > 0 {
        return Err(Failure::Validation(anyhow!("{failures} instances failed the oracle check")));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen {
            width,
            height,
            target_height,
            chain,
            targets,
            epsilon,
            seed,
            out,
        } => cmd_gen(width, height, target_height, chain, targets, epsilon, seed, out.as_deref()),
        Command::Solve {
            instance,
            algo,
            out,
            format,
        } => cmd_solve(&instance, algo.into(), out.as_deref(), format),
        Command::Batch {
            instance,
            algo,
            solution,
            constraints,
            out,
            format,
        } => cmd_batch(&instance, algo.into(), solution.as_deref(), constraints.into(), out.as_deref(), format),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Bench {
            algo,
            sizes,
            reps,
            seed,
            epsilon,
            jobs,
            out,
            format,
        } => cmd_bench(algo.into(), &sizes, reps, seed, epsilon, jobs, out.as_deref(), format),
        Command::OracleCheck {
            algo,
            samples,
            seed,
            max_size,
            out,
            format,
        } => cmd_oracle_check(algo.into(), samples, seed, max_size, out.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

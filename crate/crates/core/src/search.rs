//! Monte Carlo minimization of the residual entanglement.
//!
//! The search keeps a seed state and a radius δ. Candidates are drawn within
//! trace distance δ of the seed; a strictly smaller residual replaces the seed
//! and resets the stall counter. After `counter_max` consecutive failures δ is
//! halved, and the run ends once δ drops below `delta_min`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pure_trace_distance, PureState};
use crate::measures::{residual_report, ss_value, Alpha, PairingLayout, ResidualReport, VIOLATION_THRESHOLD};
use crate::sampler::{haar_random_state, perturb_within, RngSeed};

pub const DEFAULT_DELTA0: f64 = 0.5;
pub const DEFAULT_COUNTER_MAX: u64 = 1000;
pub const DEFAULT_DELTA_MIN: f64 = 1e-4;
pub const CONTINUATION_DELTA0: f64 = 1e-2;
pub const CONTINUATION_DELTA_MIN: f64 = 1e-8;

/// States per deterministic scan partition.
const SCAN_BLOCK: usize = 4096;
const WALK_MAX_REJECTIONS: usize = 1_000_000;

/// Which inequality residual is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Strong superadditivity.
    Ss,
    /// Second-order monogamy.
    Monogamy2,
}

impl Objective {
    pub fn evaluate(self, psi: &PureState, layout: &PairingLayout, alpha: Alpha) -> Result<f64> {
        match self {
            Objective::Ss => ss_value(psi, layout, alpha),
            Objective::Monogamy2 => Ok(residual_report(psi, layout, alpha)?.monogamy_residual),
        }
    }

    pub fn of(self, report: &ResidualReport) -> f64 {
        match self {
            Objective::Ss => report.ss_residual,
            Objective::Monogamy2 => report.monogamy_residual,
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ss" => Ok(Objective::Ss),
            "monogamy2" => Ok(Objective::Monogamy2),
            other => Err(Error::InvalidArgument(format!("unknown objective {other:?}"))),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Ss => "ss",
            Objective::Monogamy2 => "monogamy2",
        })
    }
}

/// Full parameterization of one minimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub alpha: Alpha,
    pub objective: Objective,
    pub layout: PairingLayout,
    pub delta0: f64,
    pub counter_max: u64,
    pub delta_min: f64,
    pub rng: RngSeed,
    /// Starting state; a Haar draw from `rng` when absent.
    pub seed_state: Option<PureState>,
}

impl SearchConfig {
    /// Cold-start defaults: δ₀ = 0.5, 1000 stalls per halving, stop below 1e-4.
    pub fn new(alpha: Alpha, objective: Objective, rng: RngSeed) -> Self {
        Self {
            alpha,
            objective,
            layout: PairingLayout::canonical(),
            delta0: DEFAULT_DELTA0,
            counter_max: DEFAULT_COUNTER_MAX,
            delta_min: DEFAULT_DELTA_MIN,
            rng,
            seed_state: None,
        }
    }

    /// δ₀ at or below `delta_min` is allowed and yields an evaluation-only run.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta0 > 0.0 && self.delta0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta0 must be positive, got {}",
                self.delta0
            )));
        }
        if !(self.delta_min > 0.0 && self.delta_min.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta_min must be positive, got {}",
                self.delta_min
            )));
        }
        if self.counter_max == 0 {
            return Err(Error::InvalidArgument("counter_max must be at least 1".into()));
        }
        if let Some(seed) = &self.seed_state {
            if seed.n_qubits() != 4 {
                return Err(Error::InvalidArgument(format!(
                    "seed state has {} qubits, expected 4",
                    seed.n_qubits()
                )));
            }
        }
        PairingLayout::new(self.layout.a1, self.layout.a2, self.layout.b1, self.layout.b2)?;
        Ok(())
    }
}

/// One accepted state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub step_index: u64,
    /// Radius in force when the state was accepted.
    pub delta: f64,
    pub state: PureState,
    pub ss_residual: f64,
    pub monogamy_residual: f64,
    /// Candidates drawn since the previous acceptance, this one included.
    pub states_since_accept: u64,
}

/// Record of a run; entry 0 of `trace` is the starting seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: SearchConfig,
    pub trace: Vec<TraceEntry>,
    pub final_state: PureState,
    pub final_residuals: ResidualReport,
    pub final_delta: f64,
    pub total_states_generated: u64,
}

impl RunRecord {
    pub fn final_objective(&self) -> f64 {
        self.config.objective.of(&self.final_residuals)
    }
}

/// Runs the minimization described in the module docs.
pub fn minimize_residual(config: &SearchConfig) -> Result<RunRecord> {
    let (objective, layout, alpha) = (config.objective, config.layout, config.alpha);
    minimize_with(config, |psi| objective.evaluate(psi, &layout, alpha))
}

fn minimize_with(config: &SearchConfig, mut evaluate: impl FnMut(&PureState) -> Result<f64>) -> Result<RunRecord> {
    config.validate()?;
    let (alpha, layout) = (config.alpha, config.layout);
    let mut rng = config.rng.rng();
    let mut seed = match &config.seed_state {
        Some(state) => state.clone(),
        None => haar_random_state(4, &mut rng)?,
    };

    let mut delta = config.delta0;
    let report = residual_report(&seed, &layout, alpha)?;
    let mut best = evaluate(&seed)?;
    let mut trace = vec![TraceEntry {
        step_index: 0,
        delta,
        state: seed.clone(),
        ss_residual: report.ss_residual,
        monogamy_residual: report.monogamy_residual,
        states_since_accept: 0,
    }];

    let (mut counter, mut since, mut total) = (0u64, 0u64, 0u64);
    while delta >= config.delta_min {
        let candidate = perturb_within(&seed, delta, &mut rng)?;
        total += 1;
        since += 1;
        let value = evaluate(&candidate)?;
        if value < best {
            let report = residual_report(&candidate, &layout, alpha)?;
            trace.push(TraceEntry {
                step_index: trace.len() as u64,
                delta,
                state: candidate.clone(),
                ss_residual: report.ss_residual,
                monogamy_residual: report.monogamy_residual,
                states_since_accept: since,
            });
            best = value;
            seed = candidate;
            counter = 0;
            since = 0;
        } else {
            counter += 1;
            if counter >= config.counter_max {
                delta /= 2.0;
                counter = 0;
            }
        }
    }

    let final_residuals = residual_report(&seed, &layout, alpha)?;
    Ok(RunRecord {
        config: config.clone(),
        trace,
        final_state: seed,
        final_residuals,
        final_delta: delta,
        total_states_generated: total,
    })
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
}

/// Independent restarts of `template` on streams `stream_id + i`, returned in
/// restart order. `workers = 0` lets the pool pick a size.
pub fn multi_start(template: &SearchConfig, restarts: usize, workers: usize) -> Result<Vec<RunRecord>> {
    template.validate()?;
    let pool = thread_pool(workers)?;
    pool.install(|| {
        (0..restarts)
            .into_par_iter()
            .map(|i| {
                let mut config = template.clone();
                config.rng = template.rng.with_stream_offset(i as u64);
                minimize_residual(&config)
            })
            .collect()
    })
}

/// Lowest final objective; earliest restart wins ties.
pub fn best_run(runs: &[RunRecord]) -> Option<&RunRecord> {
    runs.iter().reduce(|best, run| {
        if run.final_objective() < best.final_objective() {
            run
        } else {
            best
        }
    })
}

/// Random walk inside the violation region around `start`.
///
/// A candidate within `delta` of the current state is accepted whenever either
/// residual stays below [`VIOLATION_THRESHOLD`]; rejected candidates leave the
/// walker in place. Returns the start's report followed by one report per
/// accepted move, `steps` moves in total.
pub fn random_walk_region(
    start: &PureState,
    delta: f64,
    steps: usize,
    alpha: Alpha,
    layout: &PairingLayout,
    rng: &RngSeed,
) -> Result<Vec<ResidualReport>> {
    let inside = |r: &ResidualReport| r.ss_residual.min(r.monogamy_residual) < VIOLATION_THRESHOLD;
    let first = residual_report(start, layout, alpha)?;
    if !inside(&first) {
        return Err(Error::NotViolating(first.ss_residual.min(first.monogamy_residual)));
    }
    let mut rng = rng.rng();
    let mut current = start.clone();
    let mut reports = Vec::with_capacity(steps + 1);
    reports.push(first);
    let mut rejections = 0usize;
    while reports.len() <= steps {
        let candidate = perturb_within(&current, delta, &mut rng)?;
        let report = residual_report(&candidate, layout, alpha)?;
        if inside(&report) {
            reports.push(report);
            current = candidate;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= WALK_MAX_REJECTIONS {
                return Err(Error::InvalidArgument(format!(
                    "random walk stuck: {rejections} consecutive candidates left the region (delta {delta:e})"
                )));
            }
        }
    }
    Ok(reports)
}

/// Descending α values for re-minimizing from a previous optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationSchedule {
    pub alphas: Vec<Alpha>,
    pub delta0: f64,
    pub delta_min: f64,
    pub counter_max: u64,
    pub objective: Objective,
    /// Stage `k` draws from stream `rng.stream_id + k`.
    pub rng: RngSeed,
}

impl ContinuationSchedule {
    /// Schedule with δ₀ = 1e-2, δ_min = 1e-8 and the superadditivity objective.
    pub fn new(alphas: Vec<Alpha>, rng: RngSeed) -> Result<Self> {
        let schedule = Self {
            alphas,
            delta0: CONTINUATION_DELTA0,
            delta_min: CONTINUATION_DELTA_MIN,
            counter_max: DEFAULT_COUNTER_MAX,
            objective: Objective::Ss,
            rng,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::InvalidArgument("continuation schedule is empty".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| a.value() <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule alphas must exceed 1, got {a}"
            )));
        }
        if self.alphas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument(
                "schedule alphas must be strictly decreasing".into(),
            ));
        }
        Ok(())
    }

    /// The default schedule 1.5, 1.2, 1.1, 1.05, 1.02, 1.01, 1.005, 1.002.
    pub fn default_alphas() -> Vec<Alpha> {
        [1.5, 1.2, 1.1, 1.05, 1.02, 1.01, 1.005, 1.002]
            .into_iter()
            .map(|a| Alpha::new(a).expect("valid alpha"))
            .collect()
    }
}

/// Re-minimizes at each α of the schedule, seeding every stage with the
/// previous stage's final state.
pub fn alpha_continuation(schedule: &ContinuationSchedule, initial: &RunRecord) -> Result<Vec<RunRecord>> {
    schedule.validate()?;
    let start = schedule.objective.of(&initial.final_residuals);
    if !(start < VIOLATION_THRESHOLD) {
        return Err(Error::NotViolating(start));
    }
    let mut seed = initial.final_state.clone();
    let mut stages = Vec::with_capacity(schedule.alphas.len());
    for (k, &alpha) in schedule.alphas.iter().enumerate() {
        let config = SearchConfig {
            alpha,
            objective: schedule.objective,
            layout: initial.config.layout,
            delta0: schedule.delta0,
            counter_max: schedule.counter_max,
            delta_min: schedule.delta_min,
            rng: schedule.rng.with_stream_offset(k as u64),
            seed_state: Some(seed),
        };
        let record = minimize_residual(&config)?;
        seed = record.final_state.clone();
        stages.push(record);
    }
    Ok(stages)
}

/// Result of evaluating the superadditivity residual over many states.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub alpha: Alpha,
    pub n_states: u64,
    /// States with residual below [`VIOLATION_THRESHOLD`].
    pub violations: u64,
    pub min_residual: f64,
    pub argmin_index: u64,
    pub argmin_state: PureState,
}

impl ScanSummary {
    /// Order-independent merge; the lower index wins ties.
    fn merge(self, other: ScanSummary) -> ScanSummary {
        let keep_self = self.min_residual < other.min_residual
            || (self.min_residual == other.min_residual && self.argmin_index <= other.argmin_index);
        let (n_states, violations) = (self.n_states + other.n_states, self.violations + other.violations);
        let winner = if keep_self { self } else { other };
        ScanSummary {
            n_states,
            violations,
            ..winner
        }
    }
}

/// Summary over an explicit list of states, indexed from `first_index`.
pub fn scan_states(
    states: &[PureState],
    first_index: u64,
    alpha: Alpha,
    layout: &PairingLayout,
) -> Result<Option<ScanSummary>> {
    let mut summary: Option<ScanSummary> = None;
    for (offset, psi) in states.iter().enumerate() {
        let residual = ss_value(psi, layout, alpha)?;
        let single = ScanSummary {
            alpha,
            n_states: 1,
            violations: u64::from(residual < VIOLATION_THRESHOLD),
            min_residual: residual,
            argmin_index: first_index + offset as u64,
            argmin_state: psi.clone(),
        };
        summary = Some(match summary {
            Some(acc) => acc.merge(single),
            None => single,
        });
    }
    Ok(summary)
}

/// Superadditivity residual of `n_states` Haar-random four-qubit states.
///
/// State `i` belongs to block `i / 4096`, drawn from its own window of the
/// stream, so the summary does not depend on `workers`.
pub fn haar_scan(
    n_states: u64,
    alpha: Alpha,
    layout: &PairingLayout,
    rng: &RngSeed,
    workers: usize,
) -> Result<ScanSummary> {
    if n_states == 0 {
        return Err(Error::InvalidArgument("scan needs at least one state".into()));
    }
    let block = SCAN_BLOCK as u64;
    let n_blocks = n_states.div_ceil(block);
    let pool = thread_pool(workers)?;
    let partials: Vec<ScanSummary> = pool.install(|| {
        (0..n_blocks)
            .into_par_iter()
            .map(|b| {
                let mut block_rng = rng.block_rng(b);
                let count = block.min(n_states - b * block) as usize;
                let states = (0..count)
                    .map(|_| haar_random_state(4, &mut block_rng))
                    .collect::<Result<Vec<_>>>()?;
                scan_states(&states, b * block, alpha, layout).map(|s| s.expect("blocks are non-empty"))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(partials
        .into_iter()
        .reduce(ScanSummary::merge)
        .expect("at least one block"))
}

/// Largest trace distance between consecutive accepted states divided by the
/// radius in force at acceptance; at most one for a well-formed record.
pub fn max_step_ratio(record: &RunRecord) -> Result<f64> {
    let mut worst = 0.0f64;
    for pair in record.trace.windows(2) {
        let d = pure_trace_distance(&pair[0].state, &pair[1].state)?;
        worst = worst.max(d / pair[1].delta);
    }
    Ok(worst)
}

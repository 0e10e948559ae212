use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use renyi_core::measures::{fingerprint, residual_report, VIOLATION_THRESHOLD};
use renyi_core::search::{alpha_continuation, haar_scan, multi_start, ContinuationSchedule, SearchConfig};
use renyi_core::store::{load_run, save_run, RunArchive};
use renyi_core::verify::{ckw_r2_sweep, sum_inequality_sweep, VerifySummary};
use renyi_core::{Error, PairingLayout, RngSeed, RunRecord};

use crate::output::float_cell;
use crate::{
    AnalyzeArgs, Command, ContinueArgs, MonogamyArgs, ScanArgs, SearchArgs, SumArgs, TraceCsvArgs, VerifyCommand,
};

pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

pub struct Summary {
    pub value: Value,
    /// Set when a verifier found a counterexample.
    pub violation: bool,
}

impl From<Value> for Summary {
    fn from(value: Value) -> Self {
        Summary {
            value,
            violation: false,
        }
    }
}

pub fn run(command: Command) -> Result<Summary, Failure> {
    match command {
        Command::Scan(args) => scan(args),
        Command::Search(args) => search(args),
        Command::Continue(args) => continue_run(args),
        Command::Verify(VerifyCommand::MonogamyR2(args)) => monogamy_r2(args),
        Command::Verify(VerifyCommand::SumInequality(args)) => sum_inequality(args),
        Command::Analyze(args) => analyze(args),
        Command::TraceCsv(args) => trace_csv(args),
    }
}

fn scan(args: ScanArgs) -> Result<Summary, Failure> {
    let rng = RngSeed::new(args.common.rng_seed, 0);
    let s = haar_scan(
        args.n,
        args.alpha,
        &PairingLayout::canonical(),
        &rng,
        args.common.workers,
    )?;
    Ok(json!({
        "command": "scan",
        "alpha": s.alpha.value(),
        "n_states": s.n_states,
        "violations": s.violations,
        "threshold": VIOLATION_THRESHOLD,
        "min_residual": s.min_residual,
        "argmin_index": s.argmin_index,
    })
    .into())
}

fn in_file(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |e| Failure::Runtime(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<RunArchive, Failure> {
    load_run(path).map_err(in_file(path))
}

fn write_archive(record: RunRecord, path: &Path) -> Result<(), Failure> {
    save_run(&RunArchive::new(record)?, path).map_err(in_file(path))
}

fn search(args: SearchArgs) -> Result<Summary, Failure> {
    let seed_state = match &args.seed_file {
        Some(path) => Some(load(path)?.record.final_state),
        None => None,
    };
    let config = SearchConfig {
        delta0: args.delta0,
        counter_max: args.counter_max,
        delta_min: args.delta_min,
        seed_state,
        ..SearchConfig::new(args.alpha, args.objective, RngSeed::new(args.common.rng_seed, 0))
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let restarts = usize::try_from(args.restarts).map_err(|_| Failure::Usage("too many restarts".into()))?;
    let mut runs = multi_start(&config, restarts, args.common.workers)?;
    let finals: Vec<f64> = runs.iter().map(RunRecord::final_objective).collect();
    let best = (0..runs.len())
        .reduce(|b, i| if finals[i] < finals[b] { i } else { b })
        .expect("at least one restart");
    let record = runs.swap_remove(best);
    let r = record.final_residuals;
    let summary = json!({
        "command": "search",
        "alpha": config.alpha.value(),
        "objective": config.objective.to_string(),
        "restarts": restarts,
        "best_restart": best,
        "ss_residual": r.ss_residual,
        "monogamy_residual": r.monogamy_residual,
        "e_bipartite": r.e_bipartite,
        "accepted_states": record.trace.len(),
        "total_states_generated": record.total_states_generated,
        "final_delta": record.final_delta,
        "violation": record.final_objective() < VIOLATION_THRESHOLD,
        "final_objectives": finals,
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    if let Some(path) = &args.out {
        write_archive(record, path)?;
    }
    Ok(summary.into())
}

fn continue_run(args: ContinueArgs) -> Result<Summary, Failure> {
    let initial = load(&args.from)?.record;
    let schedule = ContinuationSchedule {
        alphas: args.schedule.0,
        delta0: args.delta0,
        delta_min: args.delta_min,
        counter_max: args.counter_max,
        objective: args.objective,
        rng: RngSeed::new(args.common.rng_seed, 0),
    };
    schedule.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| in_file(dir)(e.into()))?;
    }

    let stages = alpha_continuation(&schedule, &initial)?;
    let mut rows = Vec::with_capacity(stages.len());
    for (k, record) in stages.into_iter().enumerate() {
        let r = record.final_residuals;
        let file = args
            .out_dir
            .as_ref()
            .map(|dir| dir.join(format!("stage-{:02}-alpha-{}.json", k + 1, record.config.alpha)));
        rows.push(json!({
            "alpha": record.config.alpha.value(),
            "ss_residual": r.ss_residual,
            "monogamy_residual": r.monogamy_residual,
            "accepted_states": record.trace.len(),
            "total_states_generated": record.total_states_generated,
            "file": file.as_ref().map(|p| p.display().to_string()),
        }));
        if let Some(path) = &file {
            write_archive(record, path)?;
        }
    }
    Ok(json!({
        "command": "continue",
        "objective": schedule.objective.to_string(),
        "from": args.from.display().to_string(),
        "stages": rows,
    })
    .into())
}

fn verify_fields(s: &VerifySummary) -> Value {
    json!({
        "samples": s.samples,
        "checks": s.checks,
        "violations": s.violations,
        "min_residual": s.min_residual,
        "tolerance": s.tolerance,
    })
}

fn verify_summary(check: &str, total: &VerifySummary, extra: Option<(&str, Value)>) -> Summary {
    let mut value = verify_fields(total);
    let map = value.as_object_mut().expect("object");
    map.insert("command".into(), json!("verify"));
    map.insert("check".into(), json!(check));
    let noun = if total.violations == 1 {
        "violation"
    } else {
        "violations"
    };
    map.insert("report".into(), json!(format!("{} {noun}", total.violations)));
    if let Some((key, v)) = extra {
        map.insert(key.into(), v);
    }
    Summary {
        value,
        violation: total.violations > 0,
    }
}

fn monogamy_r2(args: MonogamyArgs) -> Result<Summary, Failure> {
    let rng = RngSeed::new(args.common.rng_seed, 0);
    let mut per_n = Vec::new();
    let mut total: Option<VerifySummary> = None;
    for n in args.qubits.0..=args.qubits.1 {
        let s = ckw_r2_sweep(n, args.samples, &rng.with_stream_offset(n as u64), args.common.workers)?;
        let mut row = verify_fields(&s);
        row.as_object_mut().expect("object").insert("qubits".into(), json!(n));
        per_n.push(row);
        total = Some(total.map_or(s, |t| t.merge(s)));
    }
    let total = total.expect("range is non-empty");
    Ok(verify_summary(
        "monogamy-r2",
        &total,
        Some(("by_qubits", Value::Array(per_n))),
    ))
}

fn sum_inequality(args: SumArgs) -> Result<Summary, Failure> {
    let s = sum_inequality_sweep(
        args.samples,
        &RngSeed::new(args.common.rng_seed, 0),
        args.common.workers,
    )?;
    Ok(verify_summary("sum-inequality", &s, None))
}

fn analyze(args: AnalyzeArgs) -> Result<Summary, Failure> {
    let archive = load(&args.file)?;
    let record = &archive.record;
    let alpha = args.alpha.unwrap_or(record.config.alpha);
    let layout = record.config.layout;
    let report = residual_report(&record.final_state, &layout, alpha)?;
    let fp = fingerprint(&record.final_state, &layout, alpha)?;
    Ok(json!({
        "command": "analyze",
        "file": args.file.display().to_string(),
        "alpha": alpha.value(),
        "layout": layout,
        "ss_residual": report.ss_residual,
        "monogamy_residual": report.monogamy_residual,
        "e_bipartite": report.e_bipartite,
        "spectra": {
            "a1a2": fp.spectrum_a1a2,
            "a1b1": fp.spectrum_a1b1,
            "a2b2": fp.spectrum_a2b2,
        },
        "pairs": fp.pairs,
    })
    .into())
}

fn trace_csv(args: TraceCsvArgs) -> Result<Summary, Failure> {
    let archive = load(&args.file)?;
    let failed = |e: csv::Error| Failure::Runtime(format!("{}: {e}", args.out.display()));
    let mut out = csv::Writer::from_path(&args.out).map_err(failed)?;
    out.write_record([
        "step",
        "delta",
        "ss_residual",
        "monogamy_residual",
        "states_since_accept",
    ])
    .map_err(failed)?;
    for e in &archive.record.trace {
        out.write_record([
            e.step_index.to_string(),
            float_cell(e.delta),
            float_cell(e.ss_residual),
            float_cell(e.monogamy_residual),
            e.states_since_accept.to_string(),
        ])
        .map_err(failed)?;
    }
    out.flush().map_err(|e| failed(e.into()))?;
    Ok(json!({
        "command": "trace-csv",
        "file": args.file.display().to_string(),
        "out": args.out.display().to_string(),
        "rows": archive.record.trace.len(),
    })
    .into())
}

//! Experiment driver reproducing the benchmark tables at desk scale.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use bipen_core::error::{Error, Result};
use bipen_core::math::Vector;
use bipen_core::penalty::{
    continuation_solve_con, continuation_solve_unc, lower_level_oracle, ContinuationSchedule,
};
use bipen_core::problems::OracleCounters;
use bipen_core::saddle::apg_minimize;

use crate::generate::{gen_con_instance, gen_unc_instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Table2,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s {
            "table1" => Ok(Suite::Table1),
            "table2" => Ok(Suite::Table2),
            other => Err(Error::invalid(format!("unknown suite {other:?}"))),
        }
    }
}

/// One benchmark run. `lower_gap` is the final lower-level gap (value gap
/// for the constrained suite); `feas_norm` is the final constraint
/// violation (identically zero for the unconstrained suite).
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub seed: u64,
    pub initial_obj: f64,
    pub final_obj: f64,
    pub rounds: usize,
    pub grad_evals: u64,
    pub prox_evals: u64,
    pub lower_gap: f64,
    pub feas_norm: f64,
    pub wall_time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub instances: usize,
    pub failures: usize,
    pub mean_initial_obj: f64,
    pub mean_final_obj: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub schedule: ContinuationSchedule,
    /// Report wall times as zero so reruns produce byte-identical CSV.
    pub deterministic_timing: bool,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schedule: ContinuationSchedule::default(),
            deterministic_timing: false,
            threads: harness_threads(),
        }
    }
}

/// Thread budget: `BIPEN_THREADS` caps the available parallelism.
pub fn harness_threads() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var("BIPEN_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(t) if t >= 1 => t.min(avail),
        _ => avail,
    }
}

fn run_one_table1(n: usize, m: usize, seed: u64, cfg: &ExperimentConfig) -> Result<ResultRow> {
    let start = Instant::now();
    let inst = gen_unc_instance(n, m, seed)?;
    let prob = inst.to_problem()?;
    let x0 = Vector::zeros(n);
    // initial objective uses the re-solved lower level at x = 0
    let oracle = lower_level_oracle(&prob, &x0);
    let warm = apg_minimize(&oracle, &prob.tf2, &Vector::zeros(m), 1e-6, cfg.schedule.apg)
        .map_err(|e| Error::Subsolver(Box::new(e)))?;
    let mut c = OracleCounters::new();
    let initial_obj = prob.eval_f(&x0, &warm.z, &mut c)?;

    let out = continuation_solve_unc(&prob, &cfg.schedule, &x0)?;
    let last = out.rounds.last().expect("at least one round");
    Ok(ResultRow {
        n,
        m,
        l: 0,
        seed,
        initial_obj,
        final_obj: out.objective,
        rounds: out.rounds.len(),
        grad_evals: out.counters.grad_evals,
        prox_evals: out.counters.prox_evals,
        lower_gap: last.lower_gap.unwrap_or(f64::NAN),
        feas_norm: 0.0,
        wall_time: if cfg.deterministic_timing { 0.0 } else { start.elapsed().as_secs_f64() },
    })
}

fn run_one_table2(n: usize, m: usize, l: usize, seed: u64, cfg: &ExperimentConfig) -> Result<ResultRow> {
    let start = Instant::now();
    let inst = gen_con_instance(n, m, l, seed)?;
    let prob = inst.to_problem()?;
    let x0 = Vector::zeros(n);
    // the planted y_hat is feasible at x = 0, so f(0, y_hat) is the
    // comparable initial objective
    let y_hat = Vector::from_row_slice(&inst.y_hat);
    let mut c = OracleCounters::new();
    let initial_obj = prob.base.eval_f(&x0, &y_hat, &mut c)?;

    let out = continuation_solve_con(&prob, &cfg.schedule, &x0)?;
    let last = out.rounds.last().expect("at least one round");
    Ok(ResultRow {
        n,
        m,
        l,
        seed,
        initial_obj,
        final_obj: out.objective,
        rounds: out.rounds.len(),
        grad_evals: out.counters.grad_evals,
        prox_evals: out.counters.prox_evals,
        lower_gap: last.value_gap.unwrap_or(f64::NAN),
        feas_norm: last.feas.unwrap_or(f64::NAN),
        wall_time: if cfg.deterministic_timing { 0.0 } else { start.elapsed().as_secs_f64() },
    })
}

/// Runs the suite over `sizes x instances_per_size` with per-instance seeds
/// `seed0 + i`. Instances may run on parallel worker threads; results are
/// merged in deterministic (size, seed) order. Per-instance failures are
/// recorded in the summary, not fatal.
pub fn run_experiment(
    suite: Suite,
    sizes: &[(usize, usize, usize)],
    instances_per_size: usize,
    seed0: u64,
    cfg: &ExperimentConfig,
) -> Result<(Vec<ResultRow>, Vec<SummaryRow>)> {
    if sizes.is_empty() {
        return Err(Error::invalid("size list must be nonempty"));
    }
    if instances_per_size == 0 {
        return Err(Error::invalid("instances_per_size must be at least 1"));
    }
    let jobs: Vec<(usize, usize, usize, u64)> = sizes
        .iter()
        .flat_map(|&(n, m, l)| (0..instances_per_size).map(move |i| (n, m, l, seed0 + i as u64)))
        .collect();

    let slots: Vec<Mutex<Option<Result<ResultRow>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = cfg.threads.clamp(1, jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs.len() {
                    break;
                }
                let (n, m, l, seed) = jobs[idx];
                let res = match suite {
                    Suite::Table1 => run_one_table1(n, m, seed, cfg),
                    Suite::Table2 => run_one_table2(n, m, l, seed, cfg),
                };
                *slots[idx].lock().unwrap() = Some(res);
            });
        }
    });

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut idx = 0;
    for &(n, m, l) in sizes {
        let mut sum_i = 0.0;
        let mut sum_f = 0.0;
        let mut ok = 0usize;
        let mut failures = 0usize;
        for _ in 0..instances_per_size {
            let res = slots[idx].lock().unwrap().take().expect("worker filled the slot");
            idx += 1;
            match res {
                Ok(row) => {
                    sum_i += row.initial_obj;
                    sum_f += row.final_obj;
                    ok += 1;
                    rows.push(row);
                }
                Err(e) => {
                    eprintln!("instance ({n},{m},{l}) failed: {e}");
                    failures += 1;
                }
            }
        }
        summaries.push(SummaryRow {
            n,
            m,
            l,
            instances: ok,
            failures,
            mean_initial_obj: if ok > 0 { sum_i / ok as f64 } else { f64::NAN },
            mean_final_obj: if ok > 0 { sum_f / ok as f64 } else { f64::NAN },
        });
    }
    Ok((rows, summaries))
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with the fixed ResultRow column order; floats at 17 significant
/// digits.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(
        "n,m,l,seed,initial_obj,final_obj,rounds,grad_evals,prox_evals,lower_gap,feas_norm,wall_time\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m,
            r.l,
            r.seed,
            fmt17(r.initial_obj),
            fmt17(r.final_obj),
            r.rounds,
            r.grad_evals,
            r.prox_evals,
            fmt17(r.lower_gap),
            fmt17(r.feas_norm),
            fmt17(r.wall_time),
        ));
    }
    out
}

pub fn summary_table(summaries: &[SummaryRow]) -> String {
    let mut out = String::from("n m l instances failures mean_initial mean_final\n");
    for s in summaries {
        out.push_str(&format!(
            "{} {} {} {} {} {:.4} {:.4}\n",
            s.n, s.m, s.l, s.instances, s.failures, s.mean_initial_obj, s.mean_final_obj
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_size_list_is_an_error() {
        let cfg = ExperimentConfig::default();
        assert!(run_experiment(Suite::Table1, &[], 1, 0, &cfg).is_err());
    }

    #[test]
    fn small_suite_runs_and_is_deterministic() {
        let cfg = ExperimentConfig {
            deterministic_timing: true,
            ..ExperimentConfig::default()
        };
        let (rows, sums) = run_experiment(Suite::Table1, &[(4, 4, 0)], 2, 11, &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(sums[0].failures, 0);
        for r in &rows {
            assert!(r.lower_gap <= 1e-4, "lower gap {}", r.lower_gap);
        }
        let (rows2, _) = run_experiment(Suite::Table1, &[(4, 4, 0)], 2, 11, &cfg).unwrap();
        assert_eq!(rows_to_csv(&rows), rows_to_csv(&rows2));
    }
}

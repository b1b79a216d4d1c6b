//! Command implementations behind the `bipen` binary.
//!
//! Exit codes: 0 on success, 2 when a residual check fails, 1 on any other
//! error.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use bipen_core::bounds::{con_bounds, unc_bounds, ConBoundInputs, UncBoundInputs};
use bipen_core::certificates::{con_kkt_certificate, unc_kkt_certificate};
use bipen_core::error::{Error, Result};
use bipen_core::math::Vector;
use bipen_core::penalty::{
    continuation_solve_con, continuation_solve_unc, initial_point_con, initial_point_unc,
    solve_con, solve_unc, ContinuationSchedule, PenaltyBudget,
};

use crate::experiment::{run_experiment, rows_to_csv, summary_table, ExperimentConfig, Suite};
use crate::generate::{gen_con_instance, gen_unc_instance};
use crate::instance::{load_instance, save_instance, Instance};

/// Outcome of a command: exit 0, or exit 2 for failed residual checks.
pub enum Outcome {
    Ok,
    ResidualFailure,
}

#[derive(Serialize, Deserialize)]
pub struct PointFile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

fn clamp_zero_start(lo: &[f64], hi: &[f64]) -> Vector {
    Vector::from_iterator(lo.len(), lo.iter().zip(hi).map(|(l, h)| 0.0f64.max(*l).min(*h)))
}

pub fn cmd_gen_unc(n: usize, m: usize, seed: u64, out: &PathBuf) -> Result<Outcome> {
    let inst = gen_unc_instance(n, m, seed)?;
    save_instance(out, &Instance::Unc(inst))?;
    println!("wrote {}", out.display());
    Ok(Outcome::Ok)
}

pub fn cmd_gen_con(n: usize, m: usize, l: usize, seed: u64, out: &PathBuf) -> Result<Outcome> {
    let inst = gen_con_instance(n, m, l, seed)?;
    if inst.constants.slater_g.is_none() {
        eprintln!("note: no x-uniform Slater margin certified; bounds requiring G are unavailable");
    }
    save_instance(out, &Instance::Con(inst))?;
    println!("wrote {}", out.display());
    Ok(Outcome::Ok)
}

pub fn cmd_solve(path: &PathBuf, eps: f64, strict: bool, out: Option<&PathBuf>) -> Result<Outcome> {
    let budget = PenaltyBudget::default();
    match load_instance(path)? {
        Instance::Unc(inst) => {
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let sol = solve_unc(&prob, eps, &x0, &budget)?;
            if strict {
                assert_eq!(sol.rho, 1.0 / eps);
                assert_eq!(sol.eps0, eps.powf(1.5));
            }
            let cert = unc_kkt_certificate(&prob, &sol.x, &sol.y, &sol.z, sol.rho, eps, 1e-6)?;
            let doc = json!({
                "kind": "unc-linquad",
                "eps": sol.eps,
                "eps0": sol.eps0,
                "rho": sol.rho,
                "strict_paper_mode": strict,
                "f0": sol.f0,
                "objective_xy": objective_unc(&prob, &sol.x, &sol.y)?,
                "x": sol.x.as_slice(),
                "y": sol.y.as_slice(),
                "z": sol.z.as_slice(),
                "outer_iterations": sol.report.outer_iters,
                "grad_evals": sol.report.counters.grad_evals,
                "prox_evals": sol.report.counters.prox_evals,
                "certificate": cert,
            });
            emit(&doc, out)?;
            let pass = cert.res_xy <= eps && cert.res_z <= eps;
            Ok(if pass { Outcome::Ok } else { Outcome::ResidualFailure })
        }
        Instance::Con(inst) => {
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let sol = solve_con(&prob, eps, &x0, &budget)?;
            if strict {
                assert_eq!(sol.rho, 1.0 / eps);
                assert_eq!(sol.eps0, eps.powf(2.5));
            }
            let mu = sol.mu.unwrap();
            let cert =
                con_kkt_certificate(&prob, &sol.x, &sol.y, &sol.z, sol.rho, mu, eps, budget.apg)?;
            let doc = json!({
                "kind": "con-linear",
                "eps": sol.eps,
                "eps0": sol.eps0,
                "rho": sol.rho,
                "mu": mu,
                "strict_paper_mode": strict,
                "f0": sol.f0,
                "objective_xy": objective_unc(&prob.base, &sol.x, &sol.y)?,
                "x": sol.x.as_slice(),
                "y": sol.y.as_slice(),
                "z": sol.z.as_slice(),
                "outer_iterations": sol.report.outer_iters,
                "grad_evals": sol.report.counters.grad_evals,
                "prox_evals": sol.report.counters.prox_evals,
                "certificate": cert,
            });
            emit(&doc, out)?;
            let pass = cert.res_xy <= eps && cert.res_z <= eps;
            Ok(if pass { Outcome::Ok } else { Outcome::ResidualFailure })
        }
    }
}

fn objective_unc(
    prob: &bipen_core::problems::UncBilevelProblem,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    let mut c = bipen_core::problems::OracleCounters::new();
    prob.eval_f(x, y, &mut c)
}

pub fn cmd_continue(path: &PathBuf, base: f64, tol: f64, out: Option<&PathBuf>) -> Result<Outcome> {
    let schedule = ContinuationSchedule { base, stop_tol: tol, ..ContinuationSchedule::default() };
    match load_instance(path)? {
        Instance::Unc(inst) => {
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let res = continuation_solve_unc(&prob, &schedule, &x0)?;
            let last = res.rounds.last().unwrap();
            let doc = json!({
                "kind": "unc-linquad",
                "objective": res.objective,
                "rounds": res.rounds,
                "x": res.x.as_slice(),
                "y": res.y.as_slice(),
                "grad_evals": res.counters.grad_evals,
                "prox_evals": res.counters.prox_evals,
            });
            emit(&doc, out)?;
            Ok(if last.accepted { Outcome::Ok } else { Outcome::ResidualFailure })
        }
        Instance::Con(inst) => {
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let res = continuation_solve_con(&prob, &schedule, &x0)?;
            let last = res.rounds.last().unwrap();
            let doc = json!({
                "kind": "con-linear",
                "objective": res.objective,
                "rounds": res.rounds,
                "x": res.x.as_slice(),
                "y": res.y.as_slice(),
                "grad_evals": res.counters.grad_evals,
                "prox_evals": res.counters.prox_evals,
            });
            emit(&doc, out)?;
            Ok(if last.accepted { Outcome::Ok } else { Outcome::ResidualFailure })
        }
    }
}

/// Definition-level residual verification at the supplied multiplier
/// weights; every residual is checked against `eps = 1/rho`.
pub fn cmd_verify(path: &PathBuf, point: &PathBuf, rho: f64, mu: Option<f64>) -> Result<Outcome> {
    let text = std::fs::read_to_string(point)
        .map_err(|e| Error::invalid(format!("read {point:?}: {e}")))?;
    let pt: PointFile =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("point schema: {e}")))?;
    let x = Vector::from_row_slice(&pt.x);
    let y = Vector::from_row_slice(&pt.y);
    let z = Vector::from_row_slice(&pt.z);
    let eps = 1.0 / rho;
    match load_instance(path)? {
        Instance::Unc(inst) => {
            let prob = inst.to_problem()?;
            let cert = unc_kkt_certificate(&prob, &x, &y, &z, rho, eps, 1e-6)?;
            println!("{}", serde_json::to_string_pretty(&cert).unwrap());
            let pass = cert.res_xy <= eps && cert.res_z <= eps && cert.lower_gap <= eps;
            Ok(if pass { Outcome::Ok } else { Outcome::ResidualFailure })
        }
        Instance::Con(inst) => {
            let mu = mu.ok_or_else(|| Error::invalid("--mu is required for constrained instances"))?;
            let prob = inst.to_problem()?;
            let cert = con_kkt_certificate(&prob, &x, &y, &z, rho, mu, eps, 4_000_000)?;
            println!("{}", serde_json::to_string_pretty(&cert).unwrap());
            let pass = cert.res_xy <= eps
                && cert.res_z <= eps
                && cert.feas_z <= eps
                && cert.compl_z <= eps
                && cert.value_gap <= eps
                && cert.feas_y <= eps
                && cert.compl_y <= eps;
            Ok(if pass { Outcome::Ok } else { Outcome::ResidualFailure })
        }
    }
}

pub fn cmd_bounds(path: &PathBuf, eps: f64) -> Result<Outcome> {
    let budget = PenaltyBudget::default();
    match load_instance(path)? {
        Instance::Unc(inst) => {
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let (y0, _) = initial_point_unc(&prob, &x0, eps, budget.apg)?;
            let mut c = bipen_core::problems::OracleCounters::new();
            let f0 = prob.eval_f(&x0, &y0, &mut c)?;
            let rep = unc_bounds(
                &UncBoundInputs {
                    l_grad_f1: inst.constants.l_grad_f1,
                    l_grad_tf1: inst.constants.l_grad_tf1,
                    d_x: inst.constants.d_x,
                    d_y: inst.constants.d_y,
                    f0,
                    f_low: inst.constants.f_low,
                    tf_hi: inst.constants.tf_hi,
                    tf_low: inst.constants.tf_low,
                    f_star: inst.constants.f_low,
                },
                eps,
            )?;
            println!("{}", serde_json::to_string_pretty(&rep).unwrap());
            Ok(Outcome::Ok)
        }
        Instance::Con(inst) => {
            let g = inst.constants.slater_g.ok_or_else(|| {
                Error::invalid("instance has no certified Slater margin; constrained bounds need G")
            })?;
            let prob = inst.to_problem()?;
            let x0 = clamp_zero_start(&inst.x_lo, &inst.x_hi);
            let mu = 1.0 / (eps * eps);
            let (y0, _) = initial_point_con(&prob, &x0, mu, eps, budget.apg)?;
            let mut c = bipen_core::problems::OracleCounters::new();
            let f0 = prob.base.eval_f(&x0, &y0, &mut c)?;
            let rep = con_bounds(
                &ConBoundInputs {
                    l_grad_f1: inst.constants.l_grad_f1,
                    l_grad_tf1: inst.constants.l_grad_tf1,
                    d_x: inst.constants.d_x,
                    d_y: inst.constants.d_y,
                    f0,
                    f_low: inst.constants.f_low,
                    tf_hi: inst.constants.tf_hi,
                    tf_low: inst.constants.tf_low,
                    f_star: inst.constants.f_low,
                    l_f: inst.constants.l_f,
                    l_tf: inst.constants.l_tf,
                    l_grad_tg: inst.constants.l_grad_tg,
                    l_tg: inst.constants.l_tg,
                    tg_hi: inst.constants.tg_hi,
                    slater_g: g,
                },
                eps,
            )?;
            println!("{}", serde_json::to_string_pretty(&rep).unwrap());
            Ok(Outcome::Ok)
        }
    }
}

/// Size list format: `NxM[,NxM,...]` for table1, `NxMxL[,...]` for table2.
pub fn parse_sizes(suite: Suite, text: &str) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let dims: Vec<usize> = part
            .split('x')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::invalid(format!("size {part:?}: {e}"))))
            .collect::<Result<_>>()?;
        match (suite, dims.as_slice()) {
            (Suite::Table1, [n, m]) => out.push((*n, *m, 0)),
            (Suite::Table2, [n, m, l]) => out.push((*n, *m, *l)),
            _ => {
                return Err(Error::invalid(format!(
                    "size {part:?} does not match the suite's dimensionality"
                )))
            }
        }
    }
    Ok(out)
}

pub fn cmd_bench(
    suite: Suite,
    sizes_text: &str,
    instances: usize,
    seed: u64,
    out: &PathBuf,
) -> Result<Outcome> {
    let sizes = parse_sizes(suite, sizes_text)?;
    let cfg = ExperimentConfig::default();
    let (rows, summaries) = run_experiment(suite, &sizes, instances, seed, &cfg)?;
    std::fs::write(out, rows_to_csv(&rows))
        .map_err(|e| Error::invalid(format!("write {out:?}: {e}")))?;
    print!("{}", summary_table(&summaries));
    println!("wrote {}", out.display());
    let all_ok = summaries.iter().all(|s| s.failures == 0);
    Ok(if all_ok { Outcome::Ok } else { Outcome::ResidualFailure })
}

fn emit(doc: &serde_json::Value, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc).unwrap();
    match out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Error::invalid(format!("write {p:?}: {e}")))?;
            println!("wrote {}", p.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

//! Scratch timing probe for the acceptance-scale workloads.

use std::time::Instant;

use bipen_core::math::Vector;
use bipen_core::penalty::{
    continuation_solve_con, continuation_solve_unc, solve_con, solve_unc, ContinuationSchedule,
    PenaltyBudget,
};
use bipen_harness::generate::{gen_con_instance, gen_unc_instance};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "crit3" || which == "all" {
        let t = Instant::now();
        let inst = gen_unc_instance(10, 10, 1).unwrap();
        let prob = inst.to_problem().unwrap();
        let out = solve_unc(&prob, 0.1, &Vector::zeros(10), &PenaltyBudget::default()).unwrap();
        println!(
            "crit3 solve_unc(10,10,seed1,eps=0.1): {:.2}s  outer={} grads={} L_tf1={:.4}",
            t.elapsed().as_secs_f64(),
            out.report.outer_iters,
            out.report.counters.grad_evals,
            inst.constants.l_grad_tf1
        );
    }

    if which == "crit4" || which == "all" {
        let t = Instant::now();
        let inst = gen_con_instance(6, 6, 2, 1).unwrap();
        println!("  con instance G = {:?} l_tg = {:.4}", inst.constants.slater_g, inst.constants.l_tg);
        let prob = inst.to_problem().unwrap();
        let out = solve_con(&prob, 0.1, &Vector::zeros(6), &PenaltyBudget::default()).unwrap();
        println!(
            "crit4 solve_con(6,6,2,seed1,eps=0.1): {:.2}s  outer={} grads={}",
            t.elapsed().as_secs_f64(),
            out.report.outer_iters,
            out.report.counters.grad_evals,
        );
    }

    if which == "table1" || which == "all" {
        let t = Instant::now();
        let inst = gen_unc_instance(100, 100, 0).unwrap();
        println!("  gen(100,100): {:.2}s L_tf1={:.4}", t.elapsed().as_secs_f64(), inst.constants.l_grad_tf1);
        let prob = inst.to_problem().unwrap();
        let t = Instant::now();
        let out = continuation_solve_unc(&prob, &ContinuationSchedule::default(), &Vector::zeros(100))
            .unwrap();
        println!(
            "table1 one instance (100,100,seed0): {:.2}s rounds={} obj={:.3} grads={}",
            t.elapsed().as_secs_f64(),
            out.rounds.len(),
            out.objective,
            out.counters.grad_evals
        );
        for r in &out.rounds {
            println!(
                "  round {}: eps={:.2e} flagged={} nc_iters={} grads={} gap={:?} obj={:.3}",
                r.round, r.eps, r.flagged, r.nc_outer_iters, r.counters.grad_evals, r.lower_gap, r.objective
            );
        }
    }

    if which == "table2" || which == "all" {
        let t = Instant::now();
        let inst = gen_con_instance(100, 100, 5, 0).unwrap();
        println!("  gen(100,100,5): G = {:?}", inst.constants.slater_g);
        let prob = inst.to_problem().unwrap();
        let out = continuation_solve_con(&prob, &ContinuationSchedule::default(), &Vector::zeros(100))
            .unwrap();
        println!(
            "table2 one instance: {:.2}s rounds={} obj={:.3} grads={}",
            t.elapsed().as_secs_f64(),
            out.rounds.len(),
            out.objective,
            out.counters.grad_evals
        );
        for r in &out.rounds {
            println!(
                "  round {}: eps={:.2e} flagged={} nc_iters={} grads={} feas={:?} vgap={:?} obj={:.3}",
                r.round, r.eps, r.flagged, r.nc_outer_iters, r.counters.grad_evals, r.feas, r.value_gap, r.objective
            );
        }
    }
}

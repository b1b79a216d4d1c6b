//! Scratch per-round timing for the table-1 continuation at 100x100.

use std::time::Instant;

use bipen_core::certificates::lower_level_gap;
use bipen_core::math::Vector;
use bipen_core::outer::CapBehavior;
use bipen_core::penalty::{
    lower_level_oracle, solve_unc_given, ContinuationSchedule, PenaltyBudget,
};
use bipen_core::saddle::apg_minimize;
use bipen_harness::generate::gen_unc_instance;

fn main() {
    let inst = gen_unc_instance(100, 100, 0).unwrap();
    let prob = inst.to_problem().unwrap();
    let s = ContinuationSchedule::default();
    let mut x = Vector::zeros(100);
    let mut y = Vector::zeros(100);
    for k in 0..s.max_rounds {
        let (eps, rho) = (s.eps_k(k), s.rho_k(k));
        let tol = s.resolve_tol(k);
        let t0 = Instant::now();
        let oracle = lower_level_oracle(&prob, &x);
        let warm = apg_minimize(&oracle, &prob.tf2, &y, tol, s.apg).unwrap();
        let t_warm = t0.elapsed().as_secs_f64();

        let budget = PenaltyBudget {
            nc_outer_cap: Some(400),
            scsc: bipen_core::saddle::ScscBudget { outer: 300_000, inner: 1_000_000 },
            apg: s.apg,
        };
        let t1 = Instant::now();
        let res = solve_unc_given(&prob, eps, rho, &x, &warm.z, warm.gap_bound, &budget, CapBehavior::ReturnFlagged);
        let t_solve = t1.elapsed().as_secs_f64();
        match res {
            Ok(out) => {
                let t2 = Instant::now();
                let gap = lower_level_gap(&prob, &out.x, &out.y, tol).unwrap();
                let t_gap = t2.elapsed().as_secs_f64();
                let mut c = bipen_core::problems::OracleCounters::new();
                let obj = prob.eval_f(&out.x, &out.y, &mut c).unwrap();
                let flag = matches!(out.report.termination, bipen_core::outer::NcTermination::OuterCapFlagged);
                println!(
                    "round {k}: eps={eps:.2e} warm={t_warm:.2}s({} it) solve={t_solve:.2}s nc_iters={} grads={} flagged={flag} gap_check={t_gap:.2}s gap={:.2e} obj={obj:.4}",
                    warm.iters, out.report.outer_iters, out.report.counters.grad_evals, gap.gap
                );
                // per-nc-round scsc outer counts (first few + max)
                let lens: Vec<usize> = out.report.rounds.iter().map(|r| r.scsc.outer_iters).collect();
                let maxlen = lens.iter().copied().max().unwrap_or(0);
                let head: Vec<usize> = lens.iter().copied().take(6).collect();
                println!("   scsc outers: head={head:?} max={maxlen} count={}", lens.len());
                x = out.x;
                y = out.y;
                if eps <= s.stop_tol && gap.gap <= s.stop_tol {
                    println!("accepted at round {k}");
                    break;
                }
            }
            Err(e) => {
                println!("round {k}: solve failed after {t_solve:.2}s: {e}");
                y = warm.z;
            }
        }
    }
}

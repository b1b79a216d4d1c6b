//! Scratch diagnostics for the SCSC solver on a constrained-penalty-style
//! subproblem. Not part of the test suite.

use bipen_core::math::{BoxSet, ProxTerm, Vector};
use bipen_core::outer::build_regularized_subproblem;
use bipen_core::problems::{MinimaxProblem, OracleCounters, SmoothOracle};
use bipen_core::saddle::{scsc_termination_value, solve_scsc, ScscBudget};

fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

fn main() {
    // mimic assemble_con_penalty(small_con_problem, rho=10, mu=100):
    // f = x + 0.5 y, tf1 = 0.3 z, tg = 0.2 x + z - 0.5
    let rho = 10.0;
    let mu = 100.0;
    let lip = 4.0 * rho * mu * 1.04;
    let h = SmoothOracle::new(
        3,
        lip,
        move |w| {
            let (x, y, z) = (w[0], w[1], w[2]);
            let gy: f64 = (0.2 * x + y - 0.5).max(0.0);
            let gz: f64 = (0.2 * x + z - 0.5).max(0.0);
            x + 0.5 * y + rho * (0.3 * y - 0.3 * z) + rho * mu * (gy * gy - gz * gz)
        },
        move |w| {
            let (x, y, z) = (w[0], w[1], w[2]);
            let gy: f64 = (0.2 * x + y - 0.5).max(0.0);
            let gz: f64 = (0.2 * x + z - 0.5).max(0.0);
            let s = 2.0 * rho * mu;
            v(&[
                1.0 + s * (gy * 0.2 - gz * 0.2),
                0.5 + rho * 0.3 + s * gy,
                -rho * 0.3 - s * gz,
            ])
        },
    );
    let p = ProxTerm::box_indicator(BoxSet::symmetric(2, 1.0));
    let q = ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0));
    let mm = MinimaxProblem::new(2, 1, h, p, q, lip).unwrap();

    let eps = 0.1;
    let x0 = v(&[0.0, 0.0]);
    let y0 = v(&[0.0]);
    let sub = build_regularized_subproblem(&mm, &x0, &y0, eps).unwrap();
    println!(
        "sigma_x={} sigma_y={} L_hbar={} zeta_hat={}",
        sub.sigma_x,
        sub.sigma_y,
        sub.l_hbar,
        sub.sigma_x.min(sub.sigma_y) / (sub.l_hbar * sub.l_hbar)
    );

    let tau = 0.1f64.powf(2.5);
    let zbar0 = &x0 * (-sub.sigma_x);
    for outer_cap in [100usize, 1000, 10000, 100000] {
        let budget = ScscBudget { outer: outer_cap, inner: 1_000_000 };
        match solve_scsc(&sub, &zbar0, &y0, tau, &budget) {
            Ok(out) => {
                println!(
                    "cap {outer_cap}: converged in {} outer, {} inner, test={:.3e}, grads={}",
                    out.report.outer_iters,
                    out.report.inner_iters,
                    out.report.final_test,
                    out.report.counters.grad_evals
                );
                let re = scsc_termination_value(&sub, &out.x, &out.y);
                println!("  x={:?} y={:?} re={re:.3e}", out.x.as_slice(), out.y.as_slice());
                break;
            }
            Err(e) => {
                println!("cap {outer_cap}: {e}");
            }
        }
    }

    // probe: step the smoothing loop manually and watch movement vs threshold
    let mut c = OracleCounters::new();
    let g = sub.hbar.gradient(&bipen_core::math::concat(&x0, &y0), &mut c);
    println!("grad at start: {:?}", g.as_slice());
    println!("termination value at start: {:.3e}", scsc_termination_value(&sub, &x0, &y0));

    let eps0 = tau;
    let mut x = x0.clone();
    let mut y = y0.clone();
    let thresh = eps / (4.0 * mm.lip);
    println!("movement threshold = {thresh:.3e}");
    for k in 0..400usize {
        let sub = build_regularized_subproblem(&mm, &x, &y0, eps).unwrap();
        let tk = eps0 / (k as f64 + 1.0);
        let zb = &x * (-sub.sigma_x);
        let budget = ScscBudget { outer: 200_000, inner: 1_000_000 };
        match solve_scsc(&sub, &zb, &y, tk, &budget) {
            Ok(out) => {
                let movement = (&out.x - &x).norm();
                if k < 10 || k % 25 == 0 || movement <= thresh {
                    println!(
                        "k={k} tau={tk:.2e} scsc_outer={} movement={movement:.3e} x={:?}",
                        out.report.outer_iters,
                        out.x.as_slice()
                    );
                }
                x = out.x;
                y = out.y;
                if movement <= thresh {
                    println!("terminated at k={k}");
                    break;
                }
            }
            Err(e) => {
                println!("k={k} tau={tk:.2e}: subsolver failed: {e}");
                break;
            }
        }
    }
}

//! Scratch: inner-loop length statistics on a well-conditioned SCSC case.

use bipen_core::math::{BoxSet, ProxTerm, Vector};
use bipen_core::problems::SmoothOracle;
use bipen_core::saddle::{solve_scsc, ScscBudget, ScscMinimax};

fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

fn main() {
    let hbar = SmoothOracle::new(
        2,
        2f64.sqrt(),
        |w| 0.5 * w[0] * w[0] + w[0] * w[1] - 0.5 * w[1] * w[1],
        |w| v(&[w[0] + w[1], w[0] - w[1]]),
    );
    let prob = ScscMinimax::new(
        1,
        1,
        hbar,
        1.0,
        1.0,
        2f64.sqrt(),
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
    )
    .unwrap();
    let out = solve_scsc(&prob, &v(&[0.5]), &v(&[0.5]), 1e-6, &ScscBudget::default()).unwrap();
    println!(
        "outers={} total_inner={} grads={} prox={}",
        out.report.outer_iters,
        out.report.inner_iters,
        out.report.counters.grad_evals,
        out.report.counters.prox_evals
    );
    println!("inner lens: {:?}", &out.report.inner_lens);
}

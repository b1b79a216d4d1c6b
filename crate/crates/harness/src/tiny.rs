//! Desk-scale verification targets with analytic ground truth.

use nalgebra::DMatrix;

use bipen_core::certificates::QuadraticLowerInstance;
use bipen_core::math::{BoxSet, ProxTerm, Vector};
use bipen_core::problems::{SmoothOracle, UncBilevelProblem, UncConstants};

fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

/// Ground truth of the tiny bilevel problem.
#[derive(Clone, Copy, Debug)]
pub struct TinyTruth {
    pub x_opt: f64,
    pub y_opt: f64,
    pub f_opt: f64,
}

/// `min x + y  s.t.  y in argmin_z (z - x)^2 / 2`, boxes `[-1, 1]`.
/// The lower level forces `y = x`, so the reduced objective is `2x` and the
/// optimum sits at `(-1, -1)` with value `-2`.
pub fn tiny_oracle_problem() -> (UncBilevelProblem, TinyTruth) {
    let f1 = SmoothOracle::new(2, 0.0, |w| w[0] + w[1], |_| v(&[1.0, 1.0]));
    let tf1 = SmoothOracle::new(
        2,
        2.0,
        |w| 0.5 * (w[1] - w[0]).powi(2),
        |w| v(&[w[0] - w[1], w[1] - w[0]]),
    );
    let prob = UncBilevelProblem::new(
        1,
        1,
        f1,
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
        tf1,
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
        UncConstants { d_x: 2.0, d_y: 2.0, f_low: -2.0, tf_hi: 2.0, tf_low: 0.0 },
    )
    .expect("tiny problem is well formed");
    (prob, TinyTruth { x_opt: -1.0, y_opt: -1.0, f_opt: -2.0 })
}

/// Brute-force grid oracle over a `points x points` lattice of the box
/// product: keeps the `(x, y)` pairs whose lower-level value matches the
/// grid minimum over z to within `tie_tol`, and minimizes `f` over them.
pub fn tiny_grid_oracle(
    prob: &UncBilevelProblem,
    points: usize,
    tie_tol: f64,
) -> (f64, f64, f64) {
    let mut c = bipen_core::problems::OracleCounters::new();
    let grid: Vec<f64> = (0..points)
        .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
        .collect();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &x in &grid {
        let xv = v(&[x]);
        let mut tf_min = f64::INFINITY;
        for &z in &grid {
            let t = prob.eval_tf(&xv, &v(&[z]), &mut c).unwrap();
            tf_min = tf_min.min(t);
        }
        for &y in &grid {
            let t = prob.eval_tf(&xv, &v(&[y]), &mut c).unwrap();
            if t <= tf_min + tie_tol {
                let fv = prob.eval_f(&xv, &v(&[y]), &mut c).unwrap();
                if fv < best.0 {
                    best = (fv, x, y);
                }
            }
        }
    }
    (best.1, best.2, best.0)
}

/// A quadratic-lower-level instance with strongly convex z block
/// (`sigma = 1`), interior implicit solution `y*(x) = x/2`, and an interior
/// reduced-objective minimizer: `f = (x - 0.2)^2/2 + (y - 0.3)^2/2`,
/// `tf = (z - x/2)^2/2`. The reduced gradient is `1.25 x - 0.35`.
pub fn hypergradient_sweep_instance() -> QuadraticLowerInstance {
    let f1 = SmoothOracle::new(
        2,
        1.0,
        |w| 0.5 * (w[0] - 0.2).powi(2) + 0.5 * (w[1] - 0.3).powi(2),
        |w| v(&[w[0] - 0.2, w[1] - 0.3]),
    );
    let tf1 = SmoothOracle::new(
        2,
        1.25,
        |w| 0.5 * (w[1] - 0.5 * w[0]).powi(2),
        |w| {
            let r = w[1] - 0.5 * w[0];
            v(&[-0.5 * r, r])
        },
    );
    // tf over [-1,1]^2 ranges in [0, 1.125]
    let prob = UncBilevelProblem::new(
        1,
        1,
        f1,
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
        tf1,
        ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
        UncConstants { d_x: 2.0, d_y: 2.0, f_low: 0.0, tf_hi: 1.125, tf_low: 0.0 },
    )
    .expect("sweep instance is well formed");
    QuadraticLowerInstance::new(
        prob,
        DMatrix::from_row_slice(1, 1, &[1.0]),
        DMatrix::from_row_slice(1, 1, &[-0.5]),
        v(&[0.0]),
    )
    .expect("quadratic data matches the oracle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bipen_core::certificates::hypergradient;

    #[test]
    fn grid_oracle_finds_corner_optimum() {
        let (prob, truth) = tiny_oracle_problem();
        let (x, y, f) = tiny_grid_oracle(&prob, 201, 1e-12);
        assert_eq!(x, truth.x_opt);
        assert_eq!(y, truth.y_opt);
        assert_eq!(f, truth.f_opt);
    }

    #[test]
    fn tiny_reduced_gradient_is_two_x() {
        // Phi(x) = f(x, y*(x)) = 2x, so grad Phi = 2 on the interior
        let (prob, _) = tiny_oracle_problem();
        let inst = QuadraticLowerInstance::new(
            prob,
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DMatrix::from_row_slice(1, 1, &[-1.0]),
            v(&[0.0]),
        )
        .unwrap();
        for xv in [-0.9, 0.0, 0.4] {
            let g = hypergradient(&inst, &v(&[xv]), 1e-9).unwrap();
            assert!((g[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_instance_shape() {
        let inst = hypergradient_sweep_instance();
        assert!(inst.sigma >= 0.5);
        // y*(x) = x/2 stays interior on the whole x box
        for xv in [-1.0, 0.0, 1.0] {
            let y = inst.y_star(&v(&[xv]), 1e-6).unwrap();
            assert!((y[0] - 0.5 * xv).abs() < 1e-12);
        }
        // grad Phi = 1.25 x - 0.35
        let g = hypergradient(&inst, &v(&[0.28]), 1e-9).unwrap();
        assert!(g[0].abs() < 1e-12);
    }
}

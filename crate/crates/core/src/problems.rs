//! Problem data model: smooth oracles with evaluation counting, bilevel
//! problems (unconstrained and constrained), and composite minimax problems.
//!
//! Problem constants (diameters, bounds, Lipschitz moduli) are declared, not
//! estimated: the solver parameter formulas depend on them, and estimating
//! them would change the complexity behavior. Generators fill them
//! analytically; user-supplied problems must declare them.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{all_finite, concat, BoxSet, ProxTerm, Vector};

/// Oracle evaluation counters. One gradient evaluation means one evaluation
/// of the smooth part's full (stacked) gradient; one prox evaluation means
/// one application of a top-level prox term. Counts only move up during a
/// solve and are owned by a single solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleCounters {
    pub grad_evals: u64,
    pub prox_evals: u64,
    pub value_evals: u64,
}

impl OracleCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn merge(&mut self, other: &OracleCounters) {
        self.grad_evals += other.grad_evals;
        self.prox_evals += other.prox_evals;
        self.value_evals += other.value_evals;
    }

    pub fn total(&self) -> u64 {
        self.grad_evals + self.prox_evals + self.value_evals
    }
}

/// A smooth function with value and gradient oracles and a declared
/// smoothness constant on its working domain.
#[derive(Clone)]
pub struct SmoothOracle {
    dim: usize,
    lip_grad: f64,
    value_fn: Arc<dyn Fn(&Vector) -> f64 + Send + Sync>,
    grad_fn: Arc<dyn Fn(&Vector) -> Vector + Send + Sync>,
}

impl std::fmt::Debug for SmoothOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothOracle")
            .field("dim", &self.dim)
            .field("lip_grad", &self.lip_grad)
            .finish()
    }
}

impl SmoothOracle {
    pub fn new(
        dim: usize,
        lip_grad: f64,
        value_fn: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
        grad_fn: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        SmoothOracle { dim, lip_grad, value_fn: Arc::new(value_fn), grad_fn: Arc::new(grad_fn) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lip_grad(&self) -> f64 {
        self.lip_grad
    }

    pub fn value(&self, p: &Vector, c: &mut OracleCounters) -> f64 {
        debug_assert_eq!(p.len(), self.dim);
        c.value_evals += 1;
        (self.value_fn)(p)
    }

    pub fn gradient(&self, p: &Vector, c: &mut OracleCounters) -> Vector {
        debug_assert_eq!(p.len(), self.dim);
        c.grad_evals += 1;
        (self.grad_fn)(p)
    }
}

/// A smooth vector map with a Jacobian oracle (rows indexed by component).
#[derive(Clone)]
pub struct VectorOracle {
    dim_in: usize,
    dim_out: usize,
    /// Smoothness constant of the map (Lipschitz modulus of the Jacobian).
    pub lip_grad: f64,
    /// Lipschitz constant of the map itself.
    pub lip: f64,
    value_fn: Arc<dyn Fn(&Vector) -> Vector + Send + Sync>,
    jac_fn: Arc<dyn Fn(&Vector) -> DMatrix<f64> + Send + Sync>,
}

impl std::fmt::Debug for VectorOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VectorOracle")
            .field("dim_in", &self.dim_in)
            .field("dim_out", &self.dim_out)
            .finish()
    }
}

impl VectorOracle {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        lip_grad: f64,
        lip: f64,
        value_fn: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
        jac_fn: impl Fn(&Vector) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        VectorOracle {
            dim_in,
            dim_out,
            lip_grad,
            lip,
            value_fn: Arc::new(value_fn),
            jac_fn: Arc::new(jac_fn),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn value(&self, p: &Vector, c: &mut OracleCounters) -> Vector {
        debug_assert_eq!(p.len(), self.dim_in);
        c.value_evals += 1;
        (self.value_fn)(p)
    }

    /// Jacobian (dim_out x dim_in). Counted as one gradient evaluation.
    pub fn jacobian(&self, p: &Vector, c: &mut OracleCounters) -> DMatrix<f64> {
        debug_assert_eq!(p.len(), self.dim_in);
        c.grad_evals += 1;
        (self.jac_fn)(p)
    }
}

/// Declared constants of an unconstrained bilevel problem.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UncConstants {
    pub d_x: f64,
    pub d_y: f64,
    pub f_low: f64,
    pub tf_hi: f64,
    pub tf_low: f64,
}

/// Unconstrained bilevel problem: minimize `f(x,y) = f1(x,y) + f2(x)` over
/// `y` solving the lower-level problem `min_z tf(x,z)` with
/// `tf(x,z) = tf1(x,z) + tf2(z)`.
#[derive(Clone, Debug)]
pub struct UncBilevelProblem {
    pub nx: usize,
    pub ny: usize,
    /// Smooth upper-level part over stacked `(x; y)`.
    pub f1: SmoothOracle,
    /// Nonsmooth upper-level part, domain X.
    pub f2: ProxTerm,
    /// Smooth lower-level part over stacked `(x; z)`, convex in the z block.
    pub tf1: SmoothOracle,
    /// Nonsmooth lower-level part, domain Y.
    pub tf2: ProxTerm,
    pub constants: UncConstants,
}

impl UncBilevelProblem {
    pub fn new(
        nx: usize,
        ny: usize,
        f1: SmoothOracle,
        f2: ProxTerm,
        tf1: SmoothOracle,
        tf2: ProxTerm,
        constants: UncConstants,
    ) -> Result<Self> {
        if f1.dim() != nx + ny || tf1.dim() != nx + ny {
            return Err(Error::DimensionMismatch { expected: nx + ny, got: f1.dim() });
        }
        if f2.dim() != nx {
            return Err(Error::DimensionMismatch { expected: nx, got: f2.dim() });
        }
        if tf2.dim() != ny {
            return Err(Error::DimensionMismatch { expected: ny, got: tf2.dim() });
        }
        let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + b.abs());
        if rel(f2.diameter(), constants.d_x) > 1e-9 || rel(tf2.diameter(), constants.d_y) > 1e-9 {
            return Err(Error::invalid("declared D_x/D_y must equal the domain diameters"));
        }
        Ok(UncBilevelProblem { nx, ny, f1, f2, tf1, tf2, constants })
    }

    /// `f(x,y) = f1(x,y) + f2(x)`; out-of-domain x signals explicitly.
    pub fn eval_f(&self, x: &Vector, y: &Vector, c: &mut OracleCounters) -> Result<f64> {
        if !all_finite(x) || !all_finite(y) {
            return Err(Error::NonFinite { what: "eval_f input".into() });
        }
        let f2 = self.f2.value(x)?;
        Ok(self.f1.value(&concat(x, y), c) + f2)
    }

    /// `tf(x,z) = tf1(x,z) + tf2(z)`.
    pub fn eval_tf(&self, x: &Vector, z: &Vector, c: &mut OracleCounters) -> Result<f64> {
        if !all_finite(x) || !all_finite(z) {
            return Err(Error::NonFinite { what: "eval_tf input".into() });
        }
        let tf2 = self.tf2.value(z)?;
        Ok(self.tf1.value(&concat(x, z), c) + tf2)
    }

    pub fn x_box(&self) -> Option<BoxSet> {
        self.f2.as_box()
    }

    pub fn y_box(&self) -> Option<BoxSet> {
        self.tf2.as_box()
    }
}

/// Extra constants of the constrained case.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConConstants {
    pub l_grad_tg: f64,
    pub l_tg: f64,
    pub tg_hi: f64,
    /// Uniform Slater margin when a certificate exists; `None` when no
    /// x-uniform strictly feasible point could be certified.
    pub slater_g: Option<f64>,
    pub l_f: f64,
    pub l_tf: f64,
}

/// Constrained bilevel problem: the lower level gains smooth convex-in-z
/// inequality constraints `tg(x,z) <= 0`.
#[derive(Clone, Debug)]
pub struct ConBilevelProblem {
    pub base: UncBilevelProblem,
    /// Constraint map over stacked `(x; z)`, each component convex in z.
    pub tg: VectorOracle,
    pub con: ConConstants,
}

impl ConBilevelProblem {
    pub fn new(base: UncBilevelProblem, tg: VectorOracle, con: ConConstants) -> Result<Self> {
        if tg.dim_in() != base.nx + base.ny {
            return Err(Error::DimensionMismatch { expected: base.nx + base.ny, got: tg.dim_in() });
        }
        if let Some(g) = con.slater_g {
            if g <= 0.0 {
                return Err(Error::invalid("slater_g must be positive when declared"));
            }
        }
        Ok(ConBilevelProblem { base, tg, con })
    }

    pub fn eval_tg(&self, x: &Vector, z: &Vector, c: &mut OracleCounters) -> Result<Vector> {
        if !all_finite(x) || !all_finite(z) {
            return Err(Error::NonFinite { what: "eval_tg input".into() });
        }
        if !self.base.tf2.contains(z) {
            return Err(Error::out_of_domain("eval_tg: z outside dom tf2"));
        }
        Ok(self.tg.value(&concat(x, z), c))
    }
}

/// Composite minimax problem `min_x max_y H(x,y) = h(x,y) + p(x) - q(y)`
/// with `h` smooth and concave in `y`.
#[derive(Clone, Debug)]
pub struct MinimaxProblem {
    pub nx: usize,
    pub ny: usize,
    /// Smooth coupling over stacked `(x; y)`.
    pub h: SmoothOracle,
    pub p: ProxTerm,
    pub q: ProxTerm,
    /// Smoothness constant of `h` on `dom p x dom q`.
    pub lip: f64,
    /// Optional stored bounds on `H* = min max H` and `inf H` for the
    /// complexity-bound formulas.
    pub h_star: Option<f64>,
    pub h_low: Option<f64>,
}

impl MinimaxProblem {
    pub fn new(nx: usize, ny: usize, h: SmoothOracle, p: ProxTerm, q: ProxTerm, lip: f64) -> Result<Self> {
        if h.dim() != nx + ny {
            return Err(Error::DimensionMismatch { expected: nx + ny, got: h.dim() });
        }
        if p.dim() != nx {
            return Err(Error::DimensionMismatch { expected: nx, got: p.dim() });
        }
        if q.dim() != ny {
            return Err(Error::DimensionMismatch { expected: ny, got: q.dim() });
        }
        if !(lip.is_finite() && lip >= 0.0) {
            return Err(Error::invalid("lip must be nonnegative and finite"));
        }
        Ok(MinimaxProblem { nx, ny, h, p, q, lip, h_star: None, h_low: None })
    }

    pub fn d_p(&self) -> f64 {
        self.p.diameter()
    }

    pub fn d_q(&self) -> f64 {
        self.q.diameter()
    }
}

/// Max over coordinates of the relative mismatch between a central
/// difference and the declared gradient. `domain`, when given, is used to
/// reject points too close to the boundary for the step.
pub fn finite_diff_check(
    oracle: &SmoothOracle,
    point: &Vector,
    h: f64,
    domain: Option<&BoxSet>,
) -> Result<f64> {
    if !(1e-8..=1e-3).contains(&h) {
        return Err(Error::invalid("finite difference step must lie in [1e-8, 1e-3]"));
    }
    if let Some(b) = domain {
        let inside = point
            .iter()
            .zip(b.lo().iter().zip(b.hi().iter()))
            .all(|(x, (l, u))| *x - h >= *l && *x + h <= *u);
        if !inside {
            return Err(Error::out_of_domain("point too close to boundary for step h"));
        }
    }
    let mut c = OracleCounters::new();
    let g = oracle.gradient(point, &mut c);
    let mut worst = 0.0f64;
    for i in 0..point.len() {
        let mut hi = point.clone();
        let mut lo = point.clone();
        hi[i] += h;
        lo[i] -= h;
        let fd = (oracle.value(&hi, &mut c) - oracle.value(&lo, &mut c)) / (2.0 * h);
        let err = (fd - g[i]).abs() / (1.0 + g[i].abs());
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Midpoint-style convexity spot check of `phi(x, .)` over sampled segments.
/// Heuristic by construction: exact verification is undecidable for
/// black-box oracles.
pub fn check_convexity_in_second_block(
    value: impl Fn(&Vector, &Vector) -> f64,
    x_box: &BoxSet,
    z_box: &BoxSet,
    samples: usize,
    mut uniform: impl FnMut() -> f64,
    tol: f64,
) -> Result<()> {
    let rand_in = |b: &BoxSet, u: &mut dyn FnMut() -> f64| {
        Vector::from_iterator(
            b.dim(),
            (0..b.dim()).map(|i| b.lo()[i] + (b.hi()[i] - b.lo()[i]) * u()),
        )
    };
    for _ in 0..samples {
        let x = rand_in(x_box, &mut uniform);
        let z1 = rand_in(z_box, &mut uniform);
        let z2 = rand_in(z_box, &mut uniform);
        let t = uniform();
        let zm = &z1 * t + &z2 * (1.0 - t);
        let lhs = value(&x, &zm);
        let rhs = t * value(&x, &z1) + (1.0 - t) * value(&x, &z2);
        if lhs > rhs + tol {
            return Err(Error::invalid(format!(
                "convexity violation: phi(midpoint) exceeds chord by {}",
                lhs - rhs
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{plus_part, BoxSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    /// f = x + y, tf = (z - x)^2 / 2 on [-1,1] boxes.
    pub(crate) fn one_dim_problem() -> UncBilevelProblem {
        let f1 = SmoothOracle::new(2, 0.0, |w| w[0] + w[1], |_| v(&[1.0, 1.0]));
        let tf1 = SmoothOracle::new(
            2,
            2.0,
            |w| 0.5 * (w[1] - w[0]).powi(2),
            |w| v(&[w[0] - w[1], w[1] - w[0]]),
        );
        UncBilevelProblem::new(
            1,
            1,
            f1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            tf1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            UncConstants { d_x: 2.0, d_y: 2.0, f_low: -2.0, tf_hi: 2.0, tf_low: 0.0 },
        )
        .unwrap()
    }

    #[test]
    fn eval_f_examples() {
        let p = one_dim_problem();
        let mut c = OracleCounters::new();
        assert_eq!(p.eval_f(&v(&[0.5]), &v(&[0.25]), &mut c).unwrap(), 0.75);
        assert_eq!(p.eval_f(&v(&[0.0]), &v(&[0.0]), &mut c).unwrap(), 0.0);
        assert!(matches!(
            p.eval_f(&v(&[1.5]), &v(&[0.0]), &mut c),
            Err(Error::OutOfDomain { .. })
        ));
        assert_eq!(c.value_evals, 2);
    }

    #[test]
    fn eval_tf_examples() {
        let p = one_dim_problem();
        let mut c = OracleCounters::new();
        assert_eq!(p.eval_tf(&v(&[0.0]), &v(&[1.0]), &mut c).unwrap(), 0.5);
        assert!(p.eval_tf(&v(&[0.0]), &v(&[1.5]), &mut c).is_err());
    }

    #[test]
    fn finite_diff_quadratic_and_linear() {
        let quad = SmoothOracle::new(
            2,
            2.0,
            |w| w[0] * w[0] + 0.5 * w[1] * w[1] + w[0] * w[1],
            |w| v(&[2.0 * w[0] + w[1], w[1] + w[0]]),
        );
        let err = finite_diff_check(&quad, &v(&[0.3, -0.2]), 1e-5, None).unwrap();
        assert!(err <= 1e-8, "central differences are exact on quadratics, got {err}");

        let lin = SmoothOracle::new(2, 0.0, |w| 3.0 * w[0] - w[1], |_| v(&[3.0, -1.0]));
        let err = finite_diff_check(&lin, &v(&[0.1, 0.1]), 1e-5, None).unwrap();
        assert!(err <= 1e-10);

        // deliberately wrong gradient (+1 offset on the first component)
        let bad = SmoothOracle::new(2, 0.0, |w| 3.0 * w[0] - w[1], |_| v(&[4.0, -1.0]));
        let err = finite_diff_check(&bad, &v(&[0.1, 0.1]), 1e-5, None).unwrap();
        assert!((err - 1.0 / 5.0).abs() < 1e-6, "expected ~1/(1+|g|) = 0.2, got {err}");
    }

    #[test]
    fn finite_diff_boundary_and_step_contract() {
        let lin = SmoothOracle::new(1, 0.0, |w| w[0], |_| v(&[1.0]));
        let b = BoxSet::symmetric(1, 1.0);
        assert!(finite_diff_check(&lin, &v(&[1.0]), 1e-4, Some(&b)).is_err());
        assert!(finite_diff_check(&lin, &v(&[0.0]), 1e-2, Some(&b)).is_err());
    }

    #[test]
    fn convexity_sampling_of_lower_level() {
        let p = one_dim_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b1 = BoxSet::symmetric(1, 1.0);
        let tf1 = p.tf1.clone();
        check_convexity_in_second_block(
            |x, z| tf1.value(&concat(x, z), &mut OracleCounters::new()),
            &b1,
            &b1,
            100,
            || rng.gen::<f64>(),
            1e-9,
        )
        .unwrap();
    }

    #[test]
    fn lip_grad_upper_bounds_sampled_gradient_ratios() {
        let p = one_dim_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut c = OracleCounters::new();
        for _ in 0..100 {
            let u = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let w = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            if (&u - &w).norm() < 1e-9 {
                continue;
            }
            let ratio = (p.tf1.gradient(&u, &mut c) - p.tf1.gradient(&w, &mut c)).norm()
                / (&u - &w).norm();
            assert!(ratio <= p.tf1.lip_grad() + 1e-9);
        }
    }

    proptest::proptest! {
        #[test]
        fn plus_part_properties(xs in proptest::collection::vec(-1e6f64..1e6, 1..8)) {
            let w = Vector::from_vec(xs);
            let p = plus_part(&w);
            proptest::prop_assert!(p.iter().all(|x| *x >= 0.0));
            // <p, w - p> = 0: the positive part is the projection onto the orthant
            let inner = p.dot(&(&w - &p));
            proptest::prop_assert!(inner.abs() < 1e-9 * (1.0 + w.norm_squared()));
        }

        #[test]
        fn prox_box_nonexpansive(
            us in proptest::collection::vec(-5.0f64..5.0, 3),
            vs in proptest::collection::vec(-5.0f64..5.0, 3),
        ) {
            let b = BoxSet::symmetric(3, 1.0);
            let u = Vector::from_vec(us);
            let w = Vector::from_vec(vs);
            let d_in = (&u - &w).norm();
            let d_out = (b.clamp(&u) - b.clamp(&w)).norm();
            proptest::prop_assert!(d_out <= d_in + 1e-12);
        }
    }
}

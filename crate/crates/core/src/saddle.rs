//! Strongly-convex-strongly-concave composite minimax solver (a modified
//! optimal first-order method) and an accelerated proximal-gradient
//! subsolver for convex composite minimization.
//!
//! The minimax solver follows its source step by step, including the
//! b-vector bookkeeping (the prox-subgradient residual divided by the step),
//! with no algebraic simplification, so the loop can be audited line by
//! line. All step sizes are fixed analytically from the declared constants;
//! there is no line search.

use crate::error::{Error, Result};
use crate::math::{concat, split, ProxTerm, Vector};
use crate::problems::{OracleCounters, SmoothOracle};

/// Strongly-convex-strongly-concave composite minimax problem
/// `min_x max_y hbar(x,y) + p(x) - q(y)`.
#[derive(Clone, Debug)]
pub struct ScscMinimax {
    pub nx: usize,
    pub ny: usize,
    /// Smooth coupling over stacked `(x; y)`, sigma_x-strongly convex in x
    /// and sigma_y-strongly concave in y.
    pub hbar: SmoothOracle,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub l_hbar: f64,
    pub p: ProxTerm,
    pub q: ProxTerm,
}

impl ScscMinimax {
    pub fn new(
        nx: usize,
        ny: usize,
        hbar: SmoothOracle,
        sigma_x: f64,
        sigma_y: f64,
        l_hbar: f64,
        p: ProxTerm,
        q: ProxTerm,
    ) -> Result<Self> {
        if hbar.dim() != nx + ny {
            return Err(Error::DimensionMismatch { expected: nx + ny, got: hbar.dim() });
        }
        if sigma_x <= 0.0 || sigma_y <= 0.0 {
            return Err(Error::invalid("sigma_x and sigma_y must be positive"));
        }
        if l_hbar < sigma_x.max(sigma_y) {
            return Err(Error::invalid("l_hbar must dominate max(sigma_x, sigma_y)"));
        }
        if p.dim() != nx || q.dim() != ny {
            return Err(Error::DimensionMismatch { expected: nx + ny, got: p.dim() + q.dim() });
        }
        Ok(ScscMinimax { nx, ny, hbar, sigma_x, sigma_y, l_hbar, p, q })
    }

    /// Spot check of strong convexity/concavity along sampled segments.
    pub fn validate_curvature(&self, samples: usize, mut uniform: impl FnMut() -> f64) -> Result<()> {
        let (bp, bq) = match (self.p.as_box(), self.q.as_box()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(()), // sampling needs box domains
        };
        let mut c = OracleCounters::new();
        let rand_in = |b: &crate::math::BoxSet, u: &mut dyn FnMut() -> f64| {
            Vector::from_iterator(
                b.dim(),
                (0..b.dim()).map(|i| b.lo()[i] + (b.hi()[i] - b.lo()[i]) * u()),
            )
        };
        for _ in 0..samples {
            let x1 = rand_in(&bp, &mut uniform);
            let x2 = rand_in(&bp, &mut uniform);
            let y = rand_in(&bq, &mut uniform);
            // strong convexity in x: midpoint bound with modulus sigma_x
            let mid = (&x1 + &x2) * 0.5;
            let lhs = self.hbar.value(&concat(&mid, &y), &mut c);
            let rhs = 0.5 * self.hbar.value(&concat(&x1, &y), &mut c)
                + 0.5 * self.hbar.value(&concat(&x2, &y), &mut c)
                - self.sigma_x / 8.0 * (&x1 - &x2).norm_squared();
            if lhs > rhs + 1e-9 {
                return Err(Error::invalid("sigma_x strong convexity violated on sample"));
            }
            let y1 = rand_in(&bq, &mut uniform);
            let y2 = rand_in(&bq, &mut uniform);
            let x = rand_in(&bp, &mut uniform);
            let midy = (&y1 + &y2) * 0.5;
            let lhs = self.hbar.value(&concat(&x, &midy), &mut c);
            let rhs = 0.5 * self.hbar.value(&concat(&x, &y1), &mut c)
                + 0.5 * self.hbar.value(&concat(&x, &y2), &mut c)
                + self.sigma_y / 8.0 * (&y1 - &y2).norm_squared();
            if lhs < rhs - 1e-9 {
                return Err(Error::invalid("sigma_y strong concavity violated on sample"));
            }
        }
        Ok(())
    }
}

/// Safeguard budgets. Hitting a cap is an error (or a flagged exit for the
/// inner stall case), never silent truncation: the method provably
/// terminates only under correct constants, so exhaustion signals a
/// parameter inconsistency.
#[derive(Clone, Copy, Debug)]
pub struct ScscBudget {
    pub outer: usize,
    pub inner: usize,
}

impl Default for ScscBudget {
    fn default() -> Self {
        ScscBudget { outer: 1_000_000, inner: 1_000_000 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScscReport {
    pub counters: OracleCounters,
    pub outer_iters: usize,
    pub inner_iters: u64,
    pub inner_lens: Vec<u32>,
    /// Termination-test value at the returned point.
    pub final_test: f64,
    /// Inner loops that exited via the bitwise-stall guard.
    pub stalled_inner: u32,
}

#[derive(Clone, Debug)]
pub struct ScscOutput {
    pub x: Vector,
    pub y: Vector,
    pub report: ScscReport,
}

struct Params {
    alpha_bar: f64,
    eta_z: f64,
    eta_y: f64,
    zeta: f64,
    gamma_x: f64,
    gamma_y: f64,
    zeta_hat: f64,
}

impl Params {
    fn new(p: &ScscMinimax) -> Params {
        let alpha_bar = 1.0f64.min((8.0 * p.sigma_y / p.sigma_x).sqrt());
        Params {
            alpha_bar,
            eta_z: p.sigma_x / 2.0,
            eta_y: (1.0 / (2.0 * p.sigma_y)).min(4.0 / (alpha_bar * p.sigma_x)),
            zeta: 1.0 / (2.0 * 5.0f64.sqrt() * (1.0 + 8.0 * p.l_hbar / p.sigma_x)),
            gamma_x: 8.0 / p.sigma_x,
            gamma_y: 8.0 / p.sigma_x,
            zeta_hat: p.sigma_x.min(p.sigma_y) / (p.l_hbar * p.l_hbar),
        }
    }
}

/// Momentum weight of the inner loop.
pub fn beta_schedule(t: usize) -> f64 {
    2.0 / (t as f64 + 3.0)
}

/// Gradient of `hhat(x,y) = hbar(x,y) - sigma_x ||x||^2 / 2 + sigma_y ||y||^2 / 2`,
/// derived from one gradient of `hbar`.
fn grad_hhat(prob: &ScscMinimax, x: &Vector, y: &Vector, c: &mut OracleCounters) -> (Vector, Vector) {
    let g = prob.hbar.gradient(&concat(x, y), c);
    let (gx, gy) = split(&g, prob.nx);
    (gx - x * prob.sigma_x, gy + y * prob.sigma_y)
}

/// The coupled update directions. `hx`, `hy` are the hhat gradient blocks at
/// the same point.
fn a_dirs(
    prob: &ScscMinimax,
    hx: &Vector,
    hy: &Vector,
    x: &Vector,
    y: &Vector,
    z_g: &Vector,
    y_g: &Vector,
) -> (Vector, Vector) {
    let ax = hx + (x * prob.sigma_x - z_g) * 0.5;
    let ay = -hy + y * prob.sigma_y + (y - y_g) * (prob.sigma_x / 8.0);
    (ax, ay)
}

/// Solves the SCSC minimax problem to a tau-stationary point.
///
/// `zbar0` must lie in `-sigma_x * dom p` and `ybar0` in `dom q`. The
/// returned pair passes the prox-gradient termination test with step
/// `zeta_hat`, re-verifiable from the report's `final_test`.
pub fn solve_scsc(
    prob: &ScscMinimax,
    zbar0: &Vector,
    ybar0: &Vector,
    tau: f64,
    budget: &ScscBudget,
) -> Result<ScscOutput> {
    if tau <= 0.0 {
        return Err(Error::invalid("tau must be positive"));
    }
    if zbar0.len() != prob.nx || ybar0.len() != prob.ny {
        return Err(Error::DimensionMismatch { expected: prob.nx + prob.ny, got: zbar0.len() + ybar0.len() });
    }
    let x_from_z0 = zbar0 * (-1.0 / prob.sigma_x);
    if !prob.p.contains(&x_from_z0) {
        return Err(Error::out_of_domain("zbar0 not in -sigma_x * dom p"));
    }
    if !prob.q.contains(ybar0) {
        return Err(Error::out_of_domain("ybar0 not in dom q"));
    }

    let pr = Params::new(prob);
    let mut c = OracleCounters::new();
    let mut inner_iters = 0u64;
    let mut inner_lens: Vec<u32> = Vec::new();
    let mut stalled_inner = 0u32;

    // outer state
    let mut z = zbar0.clone();
    let mut y = ybar0.clone();
    let mut z_f = zbar0.clone();
    let mut y_f = ybar0.clone();

    for k in 0..budget.outer {
        let z_g = &z * pr.alpha_bar + &z_f * (1.0 - pr.alpha_bar);
        let y_g = &y * pr.alpha_bar + &y_f * (1.0 - pr.alpha_bar);
        let x_m1 = &z_g * (-1.0 / prob.sigma_x);
        let y_m1 = y_g.clone();

        let (hx, hy) = grad_hhat(prob, &x_m1, &y_m1, &mut c);
        let (ax, ay) = a_dirs(prob, &hx, &hy, &x_m1, &y_m1, &z_g, &y_g);
        let arg_x = &x_m1 - &ax * (pr.zeta * pr.gamma_x);
        let arg_y = &y_m1 - &ay * (pr.zeta * pr.gamma_y);
        let x0 = prob.p.prox(&arg_x, pr.zeta * pr.gamma_x);
        let y0 = prob.q.prox(&arg_y, pr.zeta * pr.gamma_y);
        c.prox_evals += 2;
        let mut bx = (&arg_x - &x0) / (pr.zeta * pr.gamma_x);
        let mut by = (&arg_y - &y0) / (pr.zeta * pr.gamma_y);

        let mut xt = x0.clone();
        let mut yt = y0.clone();
        let mut t: usize = 0;
        let mut unchanged = 0u32;
        // gradient of hhat at (xt, yt), refreshed with every new iterate
        let (mut hxt, mut hyt) = grad_hhat(prob, &xt, &yt, &mut c);
        loop {
            let (axt, ayt) = a_dirs(prob, &hxt, &hyt, &xt, &yt, &z_g, &y_g);
            let lhs = pr.gamma_x * (&axt + &bx).norm_squared()
                + pr.gamma_y * (&ayt + &by).norm_squared();
            let rhs = (&xt - &x_m1).norm_squared() / pr.gamma_x
                + (&yt - &y_m1).norm_squared() / pr.gamma_y;
            if lhs <= rhs {
                // loop invariant at exit, stated verbatim
                debug_assert!(
                    pr.gamma_x * (&axt + &bx).norm_squared()
                        + pr.gamma_y * (&ayt + &by).norm_squared()
                        <= (&xt - &x_m1).norm_squared() / pr.gamma_x
                            + (&yt - &y_m1).norm_squared() / pr.gamma_y
                );
                break;
            }
            if t >= budget.inner {
                return Err(Error::SafeguardExhausted { stage: "scsc inner loop", budget: budget.inner });
            }
            let beta = beta_schedule(t);
            let base_x = &xt + (&x0 - &xt) * beta;
            let base_y = &yt + (&y0 - &yt) * beta;
            let x_half = &base_x - (&axt + &bx) * (pr.zeta * pr.gamma_x);
            let y_half = &base_y - (&ayt + &by) * (pr.zeta * pr.gamma_y);
            let (hxh, hyh) = grad_hhat(prob, &x_half, &y_half, &mut c);
            let (axh, ayh) = a_dirs(prob, &hxh, &hyh, &x_half, &y_half, &z_g, &y_g);
            let arg_x = &base_x - &axh * (pr.zeta * pr.gamma_x);
            let arg_y = &base_y - &ayh * (pr.zeta * pr.gamma_y);
            let x_next = prob.p.prox(&arg_x, pr.zeta * pr.gamma_x);
            let y_next = prob.q.prox(&arg_y, pr.zeta * pr.gamma_y);
            c.prox_evals += 2;
            let bx_next = (&arg_x - &x_next) / (pr.zeta * pr.gamma_x);
            let by_next = (&arg_y - &y_next) / (pr.zeta * pr.gamma_y);

            let fixed = x_next == xt && y_next == yt && bx_next == bx && by_next == by;
            xt = x_next;
            yt = y_next;
            bx = bx_next;
            by = by_next;
            t += 1;
            if fixed {
                unchanged += 1;
                // bitwise fixed point: iterates, including the cached
                // gradient, can no longer move, so the loop would never exit
                if unchanged >= 8 {
                    stalled_inner += 1;
                    break;
                }
            } else {
                unchanged = 0;
                let refreshed = grad_hhat(prob, &xt, &yt, &mut c);
                hxt = refreshed.0;
                hyt = refreshed.1;
            }
        }
        inner_iters += t as u64;
        inner_lens.push(t as u32);

        let x_f = xt;
        let y_f_new = yt;
        let z_f_next = &hxt + &bx;
        let w_f = -&hyt + &by;

        let z_next = &z + (&z_f_next - &z) * (pr.eta_z / prob.sigma_x)
            - (&x_f + &z_f_next / prob.sigma_x) * pr.eta_z;
        let y_next = &y + (&y_f_new - &y) * (pr.eta_y * prob.sigma_y)
            - (&w_f + &y_f_new * prob.sigma_y) * pr.eta_y;
        let x_next = &z_next * (-1.0 / prob.sigma_x);

        let g_full = prob.hbar.gradient(&concat(&x_next, &y_next), &mut c);
        let (gx, gy) = split(&g_full, prob.nx);
        let x_hat = prob.p.prox(&(&x_next - &gx * pr.zeta_hat), pr.zeta_hat);
        let y_hat = prob.q.prox(&(&y_next + &gy * pr.zeta_hat), pr.zeta_hat);
        c.prox_evals += 2;
        let g_hat = prob.hbar.gradient(&concat(&x_hat, &y_hat), &mut c);

        let step_vec = concat(&(&x_next - &x_hat), &(&y_hat - &y_next)) / pr.zeta_hat
            - (&g_full - &g_hat);
        let test = step_vec.norm();

        if test <= tau {
            debug_assert!(prob.p.contains(&x_hat) && prob.q.contains(&y_hat));
            let report = ScscReport {
                counters: c,
                outer_iters: k + 1,
                inner_iters,
                inner_lens,
                final_test: test,
                stalled_inner,
            };
            return Ok(ScscOutput { x: x_hat, y: y_hat, report });
        }

        z = z_next;
        y = y_next;
        z_f = z_f_next;
        y_f = y_f_new;
    }
    Err(Error::SafeguardExhausted { stage: "scsc outer loop", budget: budget.outer })
}

/// Re-evaluates the termination-test quantity at a candidate pair,
/// independently of the solve path.
pub fn scsc_termination_value(prob: &ScscMinimax, x: &Vector, y: &Vector) -> f64 {
    let pr = Params::new(prob);
    let mut c = OracleCounters::new();
    let g = prob.hbar.gradient(&concat(x, y), &mut c);
    let (gx, gy) = split(&g, prob.nx);
    let x_hat = prob.p.prox(&(x - &gx * pr.zeta_hat), pr.zeta_hat);
    let y_hat = prob.q.prox(&(y + &gy * pr.zeta_hat), pr.zeta_hat);
    let g_hat = prob.hbar.gradient(&concat(&x_hat, &y_hat), &mut c);
    (concat(&(x - &x_hat), &(&y_hat - y)) / pr.zeta_hat - (&g - &g_hat)).norm()
}

#[derive(Clone, Debug)]
pub struct ApgOutput {
    pub z: Vector,
    /// Certified bound on the objective gap at `z`.
    pub gap_bound: f64,
    pub iters: usize,
    pub counters: OracleCounters,
}

/// Accelerated proximal gradient for `min_z smooth(z) + term(z)` with convex
/// smooth part. Returns a point with a certified objective gap:
/// a prox-gradient step from the momentum point `w` yields
/// `F(z+) - F* <= ||G(w)|| (||w - z+|| + diam)` by the standard
/// gradient-mapping descent bound, which is the termination test.
pub fn apg_minimize(
    smooth: &SmoothOracle,
    term: &ProxTerm,
    start: &Vector,
    tol: f64,
    max_iters: usize,
) -> Result<ApgOutput> {
    if tol <= 0.0 {
        return Err(Error::invalid("apg tolerance must be positive"));
    }
    if start.len() != term.dim() || smooth.dim() != term.dim() {
        return Err(Error::DimensionMismatch { expected: term.dim(), got: start.len() });
    }
    let mut c = OracleCounters::new();
    let diam = term.diameter();
    let lip = smooth.lip_grad();
    let eta = if lip > 0.0 { 1.0 / lip } else { 1e18 };

    let mut z = term.prox(start, 1.0);
    c.prox_evals += 1;
    let mut z_prev = z.clone();
    let mut t_acc = 1.0f64;

    for it in 0..max_iters {
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_acc * t_acc).sqrt());
        let momentum = (t_acc - 1.0) / t_next;
        let w = &z + (&z - &z_prev) * momentum;

        let g = smooth.gradient(&w, &mut c);
        if !g.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite { what: "apg gradient".into() });
        }
        let z_plus = term.prox(&(&w - &g * eta), eta);
        c.prox_evals += 1;
        let map = (&w - &z_plus) / eta;
        let bound = map.norm() * ((&w - &z_plus).norm() + diam);
        if bound <= tol {
            return Ok(ApgOutput { z: z_plus, gap_bound: bound, iters: it + 1, counters: c });
        }

        // gradient-based adaptive restart
        if map.dot(&(&z_plus - &z)) > 0.0 {
            t_acc = 1.0;
        } else {
            t_acc = t_next;
        }
        z_prev = z;
        z = z_plus;
    }
    Err(Error::SafeguardExhausted { stage: "apg", budget: max_iters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::BoxSet;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    fn box_term(dim: usize) -> ProxTerm {
        ProxTerm::box_indicator(BoxSet::symmetric(dim, 1.0))
    }

    /// hbar = x^2/2 + xy - y^2/2 on [-1,1]^2; unique saddle at the origin.
    fn bilinear_origin() -> ScscMinimax {
        let hbar = SmoothOracle::new(
            2,
            2f64.sqrt(),
            |w| 0.5 * w[0] * w[0] + w[0] * w[1] - 0.5 * w[1] * w[1],
            |w| v(&[w[0] + w[1], w[0] - w[1]]),
        );
        ScscMinimax::new(1, 1, hbar, 1.0, 1.0, 2f64.sqrt(), box_term(1), box_term(1)).unwrap()
    }

    /// hbar = (x-0.3)^2/2 + xy - (y+0.2)^2/2; saddle at (0.25, 0.05) from the
    /// 2x2 stationarity system x - 0.3 + y = 0, x - y - 0.2 = 0.
    fn bilinear_shifted() -> ScscMinimax {
        let hbar = SmoothOracle::new(
            2,
            2f64.sqrt(),
            |w| 0.5 * (w[0] - 0.3).powi(2) + w[0] * w[1] - 0.5 * (w[1] + 0.2).powi(2),
            |w| v(&[w[0] - 0.3 + w[1], w[0] - w[1] - 0.2]),
        );
        ScscMinimax::new(1, 1, hbar, 1.0, 1.0, 2f64.sqrt(), box_term(1), box_term(1)).unwrap()
    }

    #[test]
    fn beta_starts_at_two_thirds() {
        assert_eq!(beta_schedule(0), 2.0 / 3.0);
    }

    #[test]
    fn scsc_finds_origin_saddle() {
        let prob = bilinear_origin();
        let out = solve_scsc(&prob, &v(&[0.5]), &v(&[0.5]), 1e-6, &ScscBudget::default()).unwrap();
        assert!(out.x[0].abs() < 1e-5, "x = {}", out.x[0]);
        assert!(out.y[0].abs() < 1e-5, "y = {}", out.y[0]);
        // output certificate: the termination quantity, re-evaluated
        // independently at the returned point, stays within tau
        let re = scsc_termination_value(&prob, &out.x, &out.y);
        assert!(re <= 1e-6, "re-evaluated test {re}");
        assert!(out.report.final_test <= 1e-6);
    }

    #[test]
    fn scsc_finds_shifted_saddle() {
        let prob = bilinear_shifted();
        let out = solve_scsc(&prob, &v(&[-0.0]), &v(&[0.0]), 1e-6, &ScscBudget::default()).unwrap();
        assert!((out.x[0] - 0.25).abs() < 1e-5, "x = {}", out.x[0]);
        assert!((out.y[0] - 0.05).abs() < 1e-5, "y = {}", out.y[0]);
    }

    #[test]
    fn scsc_rejects_bad_start() {
        let prob = bilinear_origin();
        // -sigma_x^{-1} zbar0 = 2.0 is outside [-1,1]
        assert!(solve_scsc(&prob, &v(&[-2.0]), &v(&[0.0]), 1e-6, &ScscBudget::default()).is_err());
    }

    #[test]
    fn scsc_safeguard_reports_exhaustion() {
        let prob = bilinear_origin();
        let tight = ScscBudget { outer: 2, inner: 1_000_000 };
        let err = solve_scsc(&prob, &v(&[0.9]), &v(&[-0.9]), 1e-14, &tight).unwrap_err();
        assert!(matches!(err, Error::SafeguardExhausted { .. }));
    }

    #[test]
    fn curvature_sampling_accepts_legit_problem() {
        let prob = bilinear_origin();
        let mut state = 0.123f64;
        prob.validate_curvature(50, move || {
            state = (state * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            state
        })
        .unwrap();
    }

    #[test]
    fn apg_clamps_linear_shift() {
        // minimize (z-2)^2/2 over [-1,1] -> 1
        let s = SmoothOracle::new(1, 1.0, |w| 0.5 * (w[0] - 2.0).powi(2), |w| v(&[w[0] - 2.0]));
        let out = apg_minimize(&s, &box_term(1), &v(&[0.0]), 1e-10, 100_000).unwrap();
        assert!((out.z[0] - 1.0).abs() < 1e-8);

        // minimize z^2 over [-1,1] -> 0 with certified gap
        let s2 = SmoothOracle::new(1, 2.0, |w| w[0] * w[0], |w| v(&[2.0 * w[0]]));
        let out2 = apg_minimize(&s2, &box_term(1), &v(&[0.9]), 1e-12, 100_000).unwrap();
        assert!(out2.z[0].abs() < 1e-6);
        assert!(out2.gap_bound <= 1e-12);
    }

    #[test]
    fn apg_matches_coordinate_kkt_oracle_on_diagonal_qp() {
        // random-ish convex diagonal quadratic on [-1,1]^5, frozen data; the
        // independent oracle clamps each coordinate's unconstrained minimizer
        let a = [0.7, 1.3, 0.2, 2.5, 0.9];
        let b = [-1.9, 0.4, 0.9, -0.3, 2.2];
        let lip = 2.0 * 2.5;
        let s = SmoothOracle::new(
            5,
            lip,
            move |w| (0..5).map(|i| a[i] * w[i] * w[i] + b[i] * w[i]).sum(),
            move |w| Vector::from_iterator(5, (0..5).map(|i| 2.0 * a[i] * w[i] + b[i])),
        );
        let oracle: Vec<f64> = (0..5).map(|i| (-b[i] / (2.0 * a[i])).clamp(-1.0, 1.0)).collect();
        let f_star: f64 = (0..5).map(|i| a[i] * oracle[i] * oracle[i] + b[i] * oracle[i]).sum();

        let out = apg_minimize(&s, &box_term(5), &v(&[0.0; 5]), 1e-8, 200_000).unwrap();
        let mut c = OracleCounters::new();
        let f_apg = s.value(&out.z, &mut c);
        assert!(f_apg - f_star <= 1e-8 + 1e-12, "gap {}", f_apg - f_star);
    }

    #[test]
    fn apg_rejects_nonfinite() {
        let s = SmoothOracle::new(1, 1.0, |_| f64::NAN, |_| v(&[f64::NAN]));
        assert!(matches!(
            apg_minimize(&s, &box_term(1), &v(&[0.0]), 1e-6, 100),
            Err(Error::NonFinite { .. })
        ));
    }
}

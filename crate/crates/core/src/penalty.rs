//! Penalty assembly and the practical penalty methods.
//!
//! The unconstrained bilevel problem is rewritten as the minimax problem
//! `min_{x,y} max_z f(x,y) + rho (tf(x,y) - tf(x,z))`; the constrained case
//! first folds its lower-level constraints into the quadratic penalty
//! `tP_mu(x,z) = tf(x,z) + mu ||[tg(x,z)]_+||^2` and penalizes that instead.
//! Both land in the composite minimax form handled by the smoothing solver.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{concat, plus_part, ProxTerm, Vector};
use crate::outer::{solve_nc_minimax, CapBehavior, NcReport, NcSolverConfig};
use crate::problems::{
    ConBilevelProblem, MinimaxProblem, OracleCounters, SmoothOracle, UncBilevelProblem,
};
use crate::saddle::{apg_minimize, ScscBudget};

/// Penalty parameters. In strict paper mode `rho = 1/eps` and, for the
/// constrained method, `mu = 1/eps^2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PenaltyConfig {
    pub eps: f64,
    pub rho: f64,
    pub mu: Option<f64>,
}

impl PenaltyConfig {
    pub fn strict_unc(eps: f64) -> Result<Self> {
        check_eps_range(eps)?;
        Ok(PenaltyConfig { eps, rho: 1.0 / eps, mu: None })
    }

    pub fn strict_con(eps: f64) -> Result<Self> {
        check_eps_range(eps)?;
        let rho = 1.0 / eps;
        Ok(PenaltyConfig { eps, rho, mu: Some(rho * rho) })
    }
}

fn check_eps_range(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::invalid("eps must lie in (0, 1/4]"));
    }
    Ok(())
}

/// Assembles `P_rho(x,y,z) = f(x,y) + rho (tf(x,y) - tf(x,z))` as a
/// composite minimax problem over the stacked min block `(x; y)` and max
/// block `z`. The smooth part has modulus `L_f1 + 2 rho L_tf1`; the prox
/// blocks inherit the domains, so `D_p = sqrt(D_x^2 + D_y^2)`, `D_q = D_y`.
pub fn assemble_unc_penalty(prob: &UncBilevelProblem, rho: f64) -> Result<MinimaxProblem> {
    if !(rho > 0.0) {
        return Err(Error::invalid("rho must be positive"));
    }
    let (nx, ny) = (prob.nx, prob.ny);
    let f1 = prob.f1.clone();
    let tf1 = prob.tf1.clone();
    let f1g = prob.f1.clone();
    let tf1g = prob.tf1.clone();
    let lip = prob.f1.lip_grad() + 2.0 * rho * prob.tf1.lip_grad();

    let value = move |w: &Vector| {
        let mut c = OracleCounters::new();
        let xy = w.rows(0, nx + ny).into_owned();
        let xz = concat(&w.rows(0, nx).into_owned(), &w.rows(nx + ny, ny).into_owned());
        f1.value(&xy, &mut c) + rho * (tf1.value(&xy, &mut c) - tf1.value(&xz, &mut c))
    };
    let grad = move |w: &Vector| {
        let mut c = OracleCounters::new();
        let xy = w.rows(0, nx + ny).into_owned();
        let xz = concat(&w.rows(0, nx).into_owned(), &w.rows(nx + ny, ny).into_owned());
        let gf = f1g.gradient(&xy, &mut c);
        let gt_xy = tf1g.gradient(&xy, &mut c);
        let gt_xz = tf1g.gradient(&xz, &mut c);
        let mut out = Vector::zeros(nx + 2 * ny);
        for i in 0..nx {
            out[i] = gf[i] + rho * (gt_xy[i] - gt_xz[i]);
        }
        for i in 0..ny {
            out[nx + i] = gf[nx + i] + rho * gt_xy[nx + i];
        }
        for i in 0..ny {
            out[nx + ny + i] = -rho * gt_xz[nx + i];
        }
        out
    };
    let h = SmoothOracle::new(nx + 2 * ny, lip, value, grad);
    let p = ProxTerm::stacked(vec![prob.f2.clone(), ProxTerm::scaled(rho, prob.tf2.clone())]);
    let q = ProxTerm::scaled(rho, prob.tf2.clone());
    MinimaxProblem::new(nx + ny, ny, h, p, q, lip)
}

/// Assembles `P_{rho,mu}` for the constrained case: the smooth part gains
/// `rho mu ||[tg(x,y)]_+||^2 - rho mu ||[tg(x,z)]_+||^2` with gradient
/// contributions `2 rho mu J^T [tg]_+`, and the modulus grows to
/// `L_f1 + 2 rho L_tf1 + 4 rho mu (tg_hi L_grad_tg + L_tg^2)`.
pub fn assemble_con_penalty(prob: &ConBilevelProblem, rho: f64, mu: f64) -> Result<MinimaxProblem> {
    if !(rho > 0.0 && mu > 0.0) {
        return Err(Error::invalid("rho and mu must be positive"));
    }
    let base = &prob.base;
    let (nx, ny) = (base.nx, base.ny);
    let f1 = base.f1.clone();
    let tf1 = base.tf1.clone();
    let tg = prob.tg.clone();
    let f1g = base.f1.clone();
    let tf1g = base.tf1.clone();
    let tgg = prob.tg.clone();
    let lip = base.f1.lip_grad()
        + 2.0 * rho * base.tf1.lip_grad()
        + 4.0 * rho * mu * (prob.con.tg_hi * prob.con.l_grad_tg + prob.con.l_tg * prob.con.l_tg);

    let value = move |w: &Vector| {
        let mut c = OracleCounters::new();
        let xy = w.rows(0, nx + ny).into_owned();
        let xz = concat(&w.rows(0, nx).into_owned(), &w.rows(nx + ny, ny).into_owned());
        let pen_y = plus_part(&tg.value(&xy, &mut c)).norm_squared();
        let pen_z = plus_part(&tg.value(&xz, &mut c)).norm_squared();
        f1.value(&xy, &mut c)
            + rho * (tf1.value(&xy, &mut c) - tf1.value(&xz, &mut c))
            + rho * mu * (pen_y - pen_z)
    };
    let grad = move |w: &Vector| {
        let mut c = OracleCounters::new();
        let xy = w.rows(0, nx + ny).into_owned();
        let xz = concat(&w.rows(0, nx).into_owned(), &w.rows(nx + ny, ny).into_owned());
        let gf = f1g.gradient(&xy, &mut c);
        let gt_xy = tf1g.gradient(&xy, &mut c);
        let gt_xz = tf1g.gradient(&xz, &mut c);
        // 2 J^T [g]_+ at both evaluation points
        let gp_y = plus_part(&tgg.value(&xy, &mut c));
        let jt_y = tgg.jacobian(&xy, &mut c).transpose() * &gp_y;
        let gp_z = plus_part(&tgg.value(&xz, &mut c));
        let jt_z = tgg.jacobian(&xz, &mut c).transpose() * &gp_z;
        let mut out = Vector::zeros(nx + 2 * ny);
        let s = 2.0 * rho * mu;
        for i in 0..nx {
            out[i] = gf[i] + rho * (gt_xy[i] - gt_xz[i]) + s * (jt_y[i] - jt_z[i]);
        }
        for i in 0..ny {
            out[nx + i] = gf[nx + i] + rho * gt_xy[nx + i] + s * jt_y[nx + i];
        }
        for i in 0..ny {
            out[nx + ny + i] = -rho * gt_xz[nx + i] - s * jt_z[nx + i];
        }
        out
    };
    let h = SmoothOracle::new(nx + 2 * ny, lip, value, grad);
    let p = ProxTerm::stacked(vec![base.f2.clone(), ProxTerm::scaled(rho, base.tf2.clone())]);
    let q = ProxTerm::scaled(rho, base.tf2.clone());
    MinimaxProblem::new(nx + ny, ny, h, p, q, lip)
}

/// Smooth oracle of `z -> tf1(x, z)` at fixed x.
pub fn lower_level_oracle(prob: &UncBilevelProblem, x: &Vector) -> SmoothOracle {
    let (nx, ny) = (prob.nx, prob.ny);
    let tf1 = prob.tf1.clone();
    let tf1g = prob.tf1.clone();
    let x1 = x.clone();
    let x2 = x.clone();
    SmoothOracle::new(
        ny,
        prob.tf1.lip_grad(),
        move |z| {
            let mut c = OracleCounters::new();
            tf1.value(&concat(&x1, z), &mut c)
        },
        move |z| {
            let mut c = OracleCounters::new();
            tf1g.gradient(&concat(&x2, z), &mut c).rows(nx, ny).into_owned()
        },
    )
}

/// Smooth oracle of `z -> tf1(x,z) + mu ||[tg(x,z)]_+||^2` at fixed x.
pub fn penalized_lower_oracle(prob: &ConBilevelProblem, x: &Vector, mu: f64) -> SmoothOracle {
    let base = &prob.base;
    let (nx, ny) = (base.nx, base.ny);
    let tf1 = base.tf1.clone();
    let tf1g = base.tf1.clone();
    let tg = prob.tg.clone();
    let tgg = prob.tg.clone();
    let x1 = x.clone();
    let x2 = x.clone();
    let lip = base.tf1.lip_grad()
        + 2.0 * mu * (prob.con.tg_hi * prob.con.l_grad_tg + prob.con.l_tg * prob.con.l_tg);
    SmoothOracle::new(
        ny,
        lip,
        move |z| {
            let mut c = OracleCounters::new();
            let xz = concat(&x1, z);
            tf1.value(&xz, &mut c) + mu * plus_part(&tg.value(&xz, &mut c)).norm_squared()
        },
        move |z| {
            let mut c = OracleCounters::new();
            let xz = concat(&x2, z);
            let g = tf1g.gradient(&xz, &mut c).rows(nx, ny).into_owned();
            let gp = plus_part(&tgg.value(&xz, &mut c));
            let jt = tgg.jacobian(&xz, &mut c).transpose() * &gp;
            g + jt.rows(nx, ny).into_owned() * (2.0 * mu)
        },
    )
}

/// Finds `y0` with a certified lower-level gap at most `eps` at the given
/// `x0`, via accelerated proximal gradient on `tf(x0, .)`.
pub fn initial_point_unc(
    prob: &UncBilevelProblem,
    x0: &Vector,
    eps: f64,
    apg_budget: usize,
) -> Result<(Vector, f64)> {
    if !prob.f2.contains(x0) {
        return Err(Error::out_of_domain("initial_point: x0 outside X"));
    }
    let oracle = lower_level_oracle(prob, x0);
    let start = match prob.tf2.as_box() {
        Some(b) => b.center(),
        None => prob.tf2.prox(&Vector::zeros(prob.ny), 1.0),
    };
    let out = apg_minimize(&oracle, &prob.tf2, &start, eps, apg_budget)
        .map_err(|e| Error::Subsolver(Box::new(e)))?;
    Ok((out.z, out.gap_bound))
}

/// Constrained variant: gap is measured in `tP_mu(x0, .)`.
pub fn initial_point_con(
    prob: &ConBilevelProblem,
    x0: &Vector,
    mu: f64,
    eps: f64,
    apg_budget: usize,
) -> Result<(Vector, f64)> {
    if !prob.base.f2.contains(x0) {
        return Err(Error::out_of_domain("initial_point: x0 outside X"));
    }
    let oracle = penalized_lower_oracle(prob, x0, mu);
    let start = match prob.base.tf2.as_box() {
        Some(b) => b.center(),
        None => prob.base.tf2.prox(&Vector::zeros(prob.base.ny), 1.0),
    };
    let out = apg_minimize(&oracle, &prob.base.tf2, &start, eps, apg_budget)
        .map_err(|e| Error::Subsolver(Box::new(e)))?;
    Ok((out.z, out.gap_bound))
}

#[derive(Clone, Copy, Debug)]
pub struct PenaltyBudget {
    /// Cap on smoothing-method outer iterations; `None` derives it from the
    /// Theorem-based iteration bound (10 (K+1), clamped to [100, 10^6]).
    pub nc_outer_cap: Option<usize>,
    pub scsc: ScscBudget,
    pub apg: usize,
}

impl Default for PenaltyBudget {
    fn default() -> Self {
        PenaltyBudget { nc_outer_cap: None, scsc: ScscBudget::default(), apg: 4_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct PenaltySolveOutput {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub eps: f64,
    pub eps0: f64,
    pub rho: f64,
    pub mu: Option<f64>,
    /// Measured `f(x0, y0)` at the initial point.
    pub f0: f64,
    /// Certified lower-level gap of the initial point.
    pub init_gap: f64,
    pub report: NcReport,
}

fn derived_outer_cap(k_hat: f64) -> usize {
    let raw = 10.0 * (k_hat + 1.0);
    raw.min(1e6).max(100.0) as usize
}

/// Practical penalty method for the unconstrained problem at accuracy `eps`:
/// `rho = 1/eps`, subproblem start tolerance `eps0 = eps^{3/2}`, initial
/// point from the APG procedure at tolerance `eps`.
pub fn solve_unc(prob: &UncBilevelProblem, eps: f64, x0: &Vector, budget: &PenaltyBudget) -> Result<PenaltySolveOutput> {
    let cfg = PenaltyConfig::strict_unc(eps)?;
    let (y0, init_gap) = initial_point_unc(prob, x0, eps, budget.apg)?;
    solve_unc_given(prob, cfg.eps, cfg.rho, x0, &y0, init_gap, budget, CapBehavior::ErrorOut)
}

/// The inner entry point shared with the continuation driver: the caller
/// supplies `(x0, y0)` with a certified lower-level gap. `eps0` is clamped
/// to `eps/2` so loose continuation rounds (`eps > 1/4`) remain valid
/// smoothing-solver inputs.
#[allow(clippy::too_many_arguments)]
pub fn solve_unc_given(
    prob: &UncBilevelProblem,
    eps: f64,
    rho: f64,
    x0: &Vector,
    y0: &Vector,
    init_gap: f64,
    budget: &PenaltyBudget,
    on_cap: CapBehavior,
) -> Result<PenaltySolveOutput> {
    let mm = assemble_unc_penalty(prob, rho)?;
    let eps0 = eps.powf(1.5).min(eps / 2.0);
    let mut scratch = OracleCounters::new();
    let f0 = prob.eval_f(x0, y0, &mut scratch)?;

    let cap = match budget.nc_outer_cap {
        Some(c) => c,
        None => {
            let b = crate::bounds::unc_bounds(
                &crate::bounds::UncBoundInputs {
                    l_grad_f1: prob.f1.lip_grad(),
                    l_grad_tf1: prob.tf1.lip_grad(),
                    d_x: prob.constants.d_x,
                    d_y: prob.constants.d_y,
                    f0,
                    f_low: prob.constants.f_low,
                    tf_hi: prob.constants.tf_hi,
                    tf_low: prob.constants.tf_low,
                    f_star: prob.constants.f_low,
                },
                eps.min(0.25),
            )?;
            derived_outer_cap(b.get("K_hat"))
        }
    };

    let mut cfg = NcSolverConfig::new(eps, eps0, concat(x0, y0), y0.clone())?;
    cfg.outer_cap = Some(cap);
    cfg.scsc_budget = budget.scsc;
    let out = solve_nc_minimax(&mm, &cfg, on_cap)?;
    let (xy, z) = (out.x, out.y);
    let x = xy.rows(0, prob.nx).into_owned();
    let y = xy.rows(prob.nx, prob.ny).into_owned();
    Ok(PenaltySolveOutput { x, y, z, eps, eps0, rho, mu: None, f0, init_gap, report: out.report })
}

/// Practical penalty method for the constrained problem: `rho = 1/eps`,
/// `mu = 1/eps^2`, `eps0 = eps^{5/2}`.
pub fn solve_con(prob: &ConBilevelProblem, eps: f64, x0: &Vector, budget: &PenaltyBudget) -> Result<PenaltySolveOutput> {
    let cfg = PenaltyConfig::strict_con(eps)?;
    let mu = cfg.mu.unwrap();
    let (y0, init_gap) = initial_point_con(prob, x0, mu, eps, budget.apg)?;
    solve_con_given(prob, cfg.eps, cfg.rho, mu, x0, &y0, init_gap, budget, CapBehavior::ErrorOut)
}

#[allow(clippy::too_many_arguments)]
pub fn solve_con_given(
    prob: &ConBilevelProblem,
    eps: f64,
    rho: f64,
    mu: f64,
    x0: &Vector,
    y0: &Vector,
    init_gap: f64,
    budget: &PenaltyBudget,
    on_cap: CapBehavior,
) -> Result<PenaltySolveOutput> {
    let mm = assemble_con_penalty(prob, rho, mu)?;
    let eps0 = eps.powf(2.5).min(eps / 2.0);
    let mut scratch = OracleCounters::new();
    let f0 = prob.base.eval_f(x0, y0, &mut scratch)?;

    let cap = match budget.nc_outer_cap {
        Some(c) => c,
        None => {
            let b = crate::bounds::con_bounds(
                &crate::bounds::ConBoundInputs {
                    l_grad_f1: prob.base.f1.lip_grad(),
                    l_grad_tf1: prob.base.tf1.lip_grad(),
                    d_x: prob.base.constants.d_x,
                    d_y: prob.base.constants.d_y,
                    f0,
                    f_low: prob.base.constants.f_low,
                    tf_hi: prob.base.constants.tf_hi,
                    tf_low: prob.base.constants.tf_low,
                    f_star: prob.base.constants.f_low,
                    l_f: prob.con.l_f,
                    l_tf: prob.con.l_tf,
                    l_grad_tg: prob.con.l_grad_tg,
                    l_tg: prob.con.l_tg,
                    tg_hi: prob.con.tg_hi,
                    slater_g: prob.con.slater_g.unwrap_or(1.0),
                },
                eps.min(0.25),
            )?;
            derived_outer_cap(b.get("K_tilde"))
        }
    };

    let mut cfg = NcSolverConfig::new(eps, eps0, concat(x0, y0), y0.clone())?;
    cfg.outer_cap = Some(cap);
    cfg.scsc_budget = budget.scsc;
    let out = solve_nc_minimax(&mm, &cfg, on_cap)?;
    let (xy, z) = (out.x, out.y);
    let x = xy.rows(0, prob.base.nx).into_owned();
    let y = xy.rows(prob.base.nx, prob.base.ny).into_owned();
    Ok(PenaltySolveOutput {
        x,
        y,
        z,
        eps,
        eps0,
        rho,
        mu: Some(mu),
        f0,
        init_gap,
        report: out.report,
    })
}

/// Geometric continuation schedule: round k uses
/// `rho_k = base^{k-1}`, `eps_k = 1/rho_k`, `mu_k = rho_k^2`.
#[derive(Clone, Copy, Debug)]
pub struct ContinuationSchedule {
    pub base: f64,
    pub stop_tol: f64,
    pub max_rounds: usize,
    /// Per-round cap on smoothing-method outer iterations. Deep rounds
    /// cannot meet the movement threshold `eps/(4L)` in double precision, so
    /// they exit via this cap and are flagged in the trace; the round's
    /// residual checks decide termination regardless.
    pub nc_outer_cap: usize,
    pub scsc: ScscBudget,
    pub apg: usize,
}

impl Default for ContinuationSchedule {
    fn default() -> Self {
        ContinuationSchedule {
            base: 5.0,
            stop_tol: 1e-4,
            max_rounds: 20,
            nc_outer_cap: 200,
            scsc: ScscBudget { outer: 30_000, inner: 1_000_000 },
            apg: 4_000_000,
        }
    }
}

impl ContinuationSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.base > 1.0) {
            return Err(Error::invalid("continuation base must exceed 1"));
        }
        if !(self.stop_tol > 0.0) {
            return Err(Error::invalid("stop_tol must be positive"));
        }
        Ok(())
    }

    pub fn rho_k(&self, k: usize) -> f64 {
        self.base.powi(k as i32 - 1)
    }

    pub fn eps_k(&self, k: usize) -> f64 {
        1.0 / self.rho_k(k)
    }

    pub fn mu_k(&self, k: usize) -> f64 {
        self.rho_k(k).powi(2)
    }

    /// Subsolver tolerance used for the external convex re-solves replacing
    /// the paper's off-the-shelf solver calls.
    pub fn resolve_tol(&self, k: usize) -> f64 {
        (self.eps_k(k) / 10.0).min(1e-6)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTrace {
    pub round: usize,
    pub eps: f64,
    pub rho: f64,
    pub mu: Option<f64>,
    /// True when the round exited through the outer cap instead of the
    /// movement test.
    pub flagged: bool,
    pub objective: f64,
    pub lower_gap: Option<f64>,
    pub feas: Option<f64>,
    pub value_gap: Option<f64>,
    pub counters: OracleCounters,
    pub nc_outer_iters: usize,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct ContinuationOutput {
    pub x: Vector,
    pub y: Vector,
    pub rounds: Vec<RoundTrace>,
    /// Solver-core oracle counts, summed over rounds.
    pub counters: OracleCounters,
    /// Auxiliary counts: lower-level re-solves and residual checks.
    pub aux_counters: OracleCounters,
    pub objective: f64,
}

/// Continuation driver for the unconstrained problem. Each round re-solves
/// the lower level at the incumbent x (warm start), runs the penalty method
/// at the round's `(eps_k, rho_k)`, and stops once `eps_k <= stop_tol` and
/// the lower-level gap is at most `stop_tol`.
pub fn continuation_solve_unc(
    prob: &UncBilevelProblem,
    schedule: &ContinuationSchedule,
    x_init: &Vector,
) -> Result<ContinuationOutput> {
    schedule.validate()?;
    let mut x = x_init.clone();
    let mut rounds = Vec::new();
    let mut counters = OracleCounters::new();
    let mut aux = OracleCounters::new();
    let mut y_out = Vector::zeros(prob.ny);

    for k in 0..schedule.max_rounds {
        let (eps, rho) = (schedule.eps_k(k), schedule.rho_k(k));
        let tol = schedule.resolve_tol(k);
        let oracle = lower_level_oracle(prob, &x);
        let warm = apg_minimize(&oracle, &prob.tf2, &y_out, tol, schedule.apg)
            .map_err(|e| Error::Subsolver(Box::new(e)))?;
        aux.merge(&warm.counters);

        let budget = PenaltyBudget {
            nc_outer_cap: Some(schedule.nc_outer_cap),
            scsc: schedule.scsc,
            apg: schedule.apg,
        };
        // deep rounds can be numerically blocked (the subproblem termination
        // test cannot certify below the f64 quantization floor); such rounds
        // keep the warm iterate and are flagged in the trace
        let (rx, ry, flagged, rep_counters, rep_iters) = match solve_unc_given(
            prob,
            eps,
            rho,
            &x,
            &warm.z,
            warm.gap_bound,
            &budget,
            CapBehavior::ReturnFlagged,
        ) {
            Ok(out) => {
                let fl = matches!(out.report.termination, crate::outer::NcTermination::OuterCapFlagged);
                (out.x, out.y, fl, out.report.counters, out.report.outer_iters)
            }
            Err(Error::Subsolver(_)) => {
                (x.clone(), warm.z.clone(), true, OracleCounters::new(), 0)
            }
            Err(e) => return Err(e),
        };
        counters.merge(&rep_counters);
        let gap = crate::certificates::lower_level_gap(prob, &rx, &ry, tol)?;
        aux.merge(&gap.counters);
        let mut scratch = OracleCounters::new();
        let objective = prob.eval_f(&rx, &ry, &mut scratch)?;
        let accepted = eps <= schedule.stop_tol && gap.gap <= schedule.stop_tol;
        rounds.push(RoundTrace {
            round: k,
            eps,
            rho,
            mu: None,
            flagged,
            objective,
            lower_gap: Some(gap.gap),
            feas: None,
            value_gap: None,
            counters: rep_counters,
            nc_outer_iters: rep_iters,
            accepted,
        });
        x = rx;
        y_out = ry;
        if accepted {
            return Ok(ContinuationOutput { x, y: y_out, rounds, counters, aux_counters: aux, objective });
        }
    }
    Err(Error::SafeguardExhausted { stage: "continuation rounds", budget: schedule.max_rounds })
}

/// Constrained continuation: warm starts minimize the round's penalized
/// lower level `tP_{mu_k}`; the stop test checks constraint violation and
/// the lower-level value gap against `stop_tol`.
pub fn continuation_solve_con(
    prob: &ConBilevelProblem,
    schedule: &ContinuationSchedule,
    x_init: &Vector,
) -> Result<ContinuationOutput> {
    schedule.validate()?;
    let base = &prob.base;
    let mut x = x_init.clone();
    let mut rounds = Vec::new();
    let mut counters = OracleCounters::new();
    let mut aux = OracleCounters::new();
    let mut y_out = Vector::zeros(base.ny);

    for k in 0..schedule.max_rounds {
        let (eps, rho, mu) = (schedule.eps_k(k), schedule.rho_k(k), schedule.mu_k(k));
        let tol = schedule.resolve_tol(k);
        let oracle = penalized_lower_oracle(prob, &x, mu);
        let warm = apg_minimize(&oracle, &base.tf2, &y_out, tol, schedule.apg)
            .map_err(|e| Error::Subsolver(Box::new(e)))?;
        aux.merge(&warm.counters);

        let budget = PenaltyBudget {
            nc_outer_cap: Some(schedule.nc_outer_cap),
            scsc: schedule.scsc,
            apg: schedule.apg,
        };
        let (rx, ry, flagged, rep_counters, rep_iters) = match solve_con_given(
            prob,
            eps,
            rho,
            mu,
            &x,
            &warm.z,
            warm.gap_bound,
            &budget,
            CapBehavior::ReturnFlagged,
        ) {
            Ok(out) => {
                let fl = matches!(out.report.termination, crate::outer::NcTermination::OuterCapFlagged);
                (out.x, out.y, fl, out.report.counters, out.report.outer_iters)
            }
            Err(Error::Subsolver(_)) => {
                (x.clone(), warm.z.clone(), true, OracleCounters::new(), 0)
            }
            Err(e) => return Err(e),
        };
        counters.merge(&rep_counters);
        let mut scratch = OracleCounters::new();
        let feas = plus_part(&prob.eval_tg(&rx, &ry, &mut scratch)?).norm();
        let objective = base.eval_f(&rx, &ry, &mut scratch)?;
        let tf_y = base.eval_tf(&rx, &ry, &mut scratch)?;
        let (vgap, accepted) = if eps <= schedule.stop_tol && feas <= schedule.stop_tol {
            let star = crate::certificates::eval_tf_star(prob, &rx, schedule.apg)?;
            aux.merge(&star.counters);
            let v = tf_y - star.value;
            (Some(v), v <= schedule.stop_tol)
        } else {
            (None, false)
        };
        rounds.push(RoundTrace {
            round: k,
            eps,
            rho,
            mu: Some(mu),
            flagged,
            objective,
            lower_gap: None,
            feas: Some(feas),
            value_gap: vgap,
            counters: rep_counters,
            nc_outer_iters: rep_iters,
            accepted,
        });
        x = rx;
        y_out = ry;
        if accepted {
            return Ok(ContinuationOutput { x, y: y_out, rounds, counters, aux_counters: aux, objective });
        }
    }
    Err(Error::SafeguardExhausted { stage: "continuation rounds", budget: schedule.max_rounds })
}

//! First-order smoothing method for nonconvex-concave composite minimax.
//!
//! Each outer iteration regularizes the coupling around the current x and
//! the initial y, hands the resulting strongly-convex-strongly-concave
//! subproblem to the saddle solver at a shrinking tolerance, and stops once
//! the x iterate moves by at most `eps / (4 L)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{concat, split, ProxTerm, Vector};
use crate::problems::{MinimaxProblem, OracleCounters, SmoothOracle};
use crate::saddle::{solve_scsc, ScscBudget, ScscMinimax, ScscReport};

/// Configuration for the nonconvex-concave solve.
#[derive(Clone, Debug)]
pub struct NcSolverConfig {
    pub eps: f64,
    /// Initial subproblem tolerance; the k-th subproblem is solved to
    /// `eps0 / (k + 1)`. Must lie in `(0, eps/2]`.
    pub eps0: f64,
    pub start_x: Vector,
    pub start_y: Vector,
    /// Cap on outer iterations; `None` uses 10^5.
    pub outer_cap: Option<usize>,
    pub scsc_budget: ScscBudget,
}

impl NcSolverConfig {
    pub fn new(eps: f64, eps0: f64, start_x: Vector, start_y: Vector) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::invalid("eps must be positive"));
        }
        if !(eps0 > 0.0 && eps0 <= eps / 2.0) {
            return Err(Error::invalid("eps0 must lie in (0, eps/2]"));
        }
        Ok(NcSolverConfig { eps, eps0, start_x, start_y, outer_cap: None, scsc_budget: ScscBudget::default() })
    }
}

/// What to do when the outer safeguard trips: error out (default), or return
/// the current iterate with the exhaustion flagged in the report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapBehavior {
    ErrorOut,
    ReturnFlagged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NcTermination {
    /// `||x_{k+1} - x_k|| <= eps / (4 L)` fired.
    Moved,
    /// Outer cap reached and the caller asked for a flagged return.
    OuterCapFlagged,
}

/// Per-outer-iteration record: the subproblem tolerance actually used, the
/// warm start discrepancy (identically zero by construction), and the
/// subsolver report.
#[derive(Clone, Debug)]
pub struct NcRound {
    pub tau: f64,
    pub movement: f64,
    pub scsc: ScscReport,
}

#[derive(Clone, Debug)]
pub struct NcReport {
    pub counters: OracleCounters,
    pub outer_iters: usize,
    pub rounds: Vec<NcRound>,
    pub termination: NcTermination,
    pub final_movement: f64,
}

#[derive(Clone, Debug)]
pub struct NcOutput {
    pub x: Vector,
    pub y: Vector,
    pub report: NcReport,
}

/// Builds the regularized subproblem
/// `h_k(x,y) = h(x,y) - eps ||y - y0||^2 / (4 D_q) + L ||x - x_k||^2`
/// with `sigma_x = L`, `sigma_y = eps / (2 D_q)`, `L_hbar = 3L + eps/(2 D_q)`.
/// Each `h_k` gradient costs one `h` gradient.
pub fn build_regularized_subproblem(
    prob: &MinimaxProblem,
    x_k: &Vector,
    y0: &Vector,
    eps: f64,
) -> Result<ScscMinimax> {
    let d_q = prob.d_q();
    if d_q <= 0.0 {
        return Err(Error::invalid("D_q must be positive to regularize the max block"));
    }
    if !(prob.lip > 0.0) {
        return Err(Error::invalid("the smoothing method needs a positive smoothness constant"));
    }
    if !prob.p.contains(x_k) {
        return Err(Error::out_of_domain("x_k outside dom p"));
    }
    if !prob.q.contains(y0) {
        return Err(Error::out_of_domain("y0 outside dom q"));
    }
    let lip = prob.lip;
    let sigma_y = eps / (2.0 * d_q);
    let (nx, ny) = (prob.nx, prob.ny);
    let h = prob.h.clone();
    let xk = x_k.clone();
    let y0c = y0.clone();
    let xk2 = x_k.clone();
    let y02 = y0.clone();
    let h2 = prob.h.clone();
    let reg_y = eps / (4.0 * d_q);
    let hbar = SmoothOracle::new(
        nx + ny,
        3.0 * lip + sigma_y,
        move |w| {
            let (x, y) = split(w, nx);
            let mut c = OracleCounters::new();
            let base = h.value(w, &mut c);
            base - reg_y * (&y - &y0c).norm_squared() + lip * (&x - &xk).norm_squared()
        },
        move |w| {
            let (x, y) = split(w, nx);
            let mut c = OracleCounters::new();
            let g = h2.gradient(w, &mut c);
            let (gx, gy) = split(&g, nx);
            concat(&(gx + (&x - &xk2) * (2.0 * lip)), &(gy - (&y - &y02) * (2.0 * reg_y)))
        },
    );
    ScscMinimax::new(nx, ny, hbar, lip, sigma_y, 3.0 * lip + sigma_y, prob.p.clone(), prob.q.clone())
}

/// Runs the smoothing method to an eps-stationary point of
/// `min_x max_y h + p - q`. Outer iteration k warm-starts the subsolver at
/// `(-sigma_x x_k, y_k)` with tolerance `eps0 / (k+1)`.
pub fn solve_nc_minimax(
    prob: &MinimaxProblem,
    cfg: &NcSolverConfig,
    on_cap: CapBehavior,
) -> Result<NcOutput> {
    if !prob.p.contains(&cfg.start_x) || !prob.q.contains(&cfg.start_y) {
        return Err(Error::out_of_domain("nc start point"));
    }
    let cap = cfg.outer_cap.unwrap_or(100_000);
    let lip = prob.lip;
    let y0 = cfg.start_y.clone();

    let mut x = cfg.start_x.clone();
    let mut y = cfg.start_y.clone();
    let mut counters = OracleCounters::new();
    let mut rounds = Vec::new();

    for k in 0..cap {
        let sub = build_regularized_subproblem(prob, &x, &y0, cfg.eps)?;
        let tau = cfg.eps0 / (k as f64 + 1.0);
        let zbar0 = &x * (-sub.sigma_x);
        let out = solve_scsc(&sub, &zbar0, &y, tau, &cfg.scsc_budget)
            .map_err(|e| Error::Subsolver(Box::new(e)))?;

        // every h_k gradient consumed exactly one h gradient
        counters.merge(&out.report.counters);
        let movement = (&out.x - &x).norm();
        rounds.push(NcRound { tau, movement, scsc: out.report.clone() });

        x = out.x;
        // the subsolver's output lies in dom q by construction; assert
        // rather than project
        debug_assert!(prob.q.contains(&out.y));
        y = out.y;

        if movement <= cfg.eps / (4.0 * lip) {
            let report = NcReport {
                counters,
                outer_iters: k + 1,
                rounds,
                termination: NcTermination::Moved,
                final_movement: movement,
            };
            return Ok(NcOutput { x, y, report });
        }
    }
    match on_cap {
        CapBehavior::ErrorOut => Err(Error::SafeguardExhausted { stage: "nc outer loop", budget: cap }),
        CapBehavior::ReturnFlagged => {
            let final_movement = rounds.last().map(|r| r.movement).unwrap_or(f64::NAN);
            let report = NcReport {
                counters,
                outer_iters: cap,
                rounds,
                termination: NcTermination::OuterCapFlagged,
                final_movement,
            };
            Ok(NcOutput { x, y, report })
        }
    }
}

/// Stationarity residuals of Definition-2 type at `(x, y)`:
/// `res_x = dist(0, grad_x h + N_p(x))`, `res_y = dist(0, -grad_y h + N_q(y))`.
/// Exact for box prox terms; otherwise a labeled prox-residual surrogate
/// using step `1/L`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StationarityResidual {
    pub res_x: f64,
    pub res_y: f64,
    /// False when the surrogate mode was used for a non-box term.
    pub exact: bool,
}

pub fn stationarity_residual(prob: &MinimaxProblem, x: &Vector, y: &Vector) -> Result<StationarityResidual> {
    if !prob.p.contains(x) || !prob.q.contains(y) {
        return Err(Error::out_of_domain("stationarity_residual point"));
    }
    let mut c = OracleCounters::new();
    let g = prob.h.gradient(&concat(x, y), &mut c);
    let (gx, gy) = split(&g, prob.nx);
    let exact_x = prob.p.as_box().is_some();
    let exact_y = prob.q.as_box().is_some();
    let res_x = match prob.p.as_box() {
        Some(b) => b.normal_cone_distance(x, &gx)?,
        None => surrogate_residual(&prob.p, x, &gx, prob.lip),
    };
    let res_y = match prob.q.as_box() {
        Some(b) => b.normal_cone_distance(y, &(-&gy))?,
        None => surrogate_residual(&prob.q, y, &(-&gy), prob.lip),
    };
    Ok(StationarityResidual { res_x, res_y, exact: exact_x && exact_y })
}

/// Upper-bound-style diagnostic for non-box prox terms:
/// `||(w - prox(w - step g)) / step|| + L ||w - prox(w - step g)||`.
fn surrogate_residual(term: &ProxTerm, w: &Vector, g: &Vector, lip: f64) -> f64 {
    let step = 1.0 / lip;
    let p = term.prox(&(w - g * step), step);
    let moved = (w - &p).norm();
    moved / step + lip * moved
}

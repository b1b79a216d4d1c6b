//! KKT certificates for penalty-method outputs.
//!
//! The residuals follow the stationarity/feasibility/complementarity
//! structure of the approximate-KKT definitions, with set distances
//! evaluated exactly through box normal cones. That restriction covers all
//! bundled experiments; non-box terms fall back to a labeled prox-residual
//! surrogate. The lower-level optimal value is certified by subsolves whose
//! tolerance is recorded in the certificate.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{concat, plus_part, Vector};
use crate::penalty::{lower_level_oracle, penalized_lower_oracle};
use crate::problems::{ConBilevelProblem, OracleCounters, UncBilevelProblem};
use crate::saddle::apg_minimize;

/// Certified lower-level gap `tf(x,y) - (upper bound on min_z tf(x,z))`.
/// Slightly negative values are rounding from the inexact minimization and
/// are floored at `-tol`.
#[derive(Clone, Debug)]
pub struct LowerGap {
    pub gap: f64,
    pub tol: f64,
    pub counters: OracleCounters,
}

pub fn lower_level_gap(prob: &UncBilevelProblem, x: &Vector, y: &Vector, tol: f64) -> Result<LowerGap> {
    if !prob.f2.contains(x) {
        return Err(Error::out_of_domain("lower_level_gap: x outside X"));
    }
    let mut c = OracleCounters::new();
    let tf_y = prob.eval_tf(x, y, &mut c)?;
    let oracle = lower_level_oracle(prob, x);
    let out = apg_minimize(&oracle, &prob.tf2, y, tol, 4_000_000)
        .map_err(|e| Error::Subsolver(Box::new(e)))?;
    c.merge(&out.counters);
    let tf_min_ub = oracle.value(&out.z, &mut c);
    let gap = (tf_y - tf_min_ub).max(-tol);
    Ok(LowerGap { gap, tol, counters: c })
}

/// Residuals of the approximate-KKT conditions for the unconstrained
/// problem, at penalty weight `rho`.
#[derive(Clone, Debug, Serialize)]
pub struct UncKktCertificate {
    pub res_xy: f64,
    pub res_z: f64,
    pub lower_gap: f64,
    pub lower_gap_tol: f64,
    pub rho: f64,
    pub eps_target: f64,
    /// False when a non-box prox term forced the surrogate residual mode.
    pub exact: bool,
}

pub fn unc_kkt_certificate(
    prob: &UncBilevelProblem,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    rho: f64,
    eps_target: f64,
    subsolver_tol: f64,
) -> Result<UncKktCertificate> {
    let mut c = OracleCounters::new();
    let gf = prob.f1.gradient(&concat(x, y), &mut c);
    let gt_xy = prob.tf1.gradient(&concat(x, y), &mut c);
    let gt_xz = prob.tf1.gradient(&concat(x, z), &mut c);
    let (nx, ny) = (prob.nx, prob.ny);

    let gx = Vector::from_iterator(nx, (0..nx).map(|i| gf[i] + rho * (gt_xy[i] - gt_xz[i])));
    let gy = Vector::from_iterator(ny, (0..ny).map(|i| gf[nx + i] + rho * gt_xy[nx + i]));
    let gz = Vector::from_iterator(ny, (0..ny).map(|i| rho * gt_xz[nx + i]));

    let (res_xy, res_z, exact) = match (prob.f2.as_box(), prob.tf2.as_box()) {
        (Some(bx), Some(by)) => {
            let rx = bx.normal_cone_distance(x, &gx)?;
            let ry = by.normal_cone_distance(y, &gy)?;
            let rz = by.normal_cone_distance(z, &gz)?;
            ((rx * rx + ry * ry).sqrt(), rz, true)
        }
        _ => {
            let sx = surrogate(&prob.f2, x, &gx);
            let sy = surrogate(&prob.tf2, y, &gy);
            let sz = surrogate(&prob.tf2, z, &gz);
            ((sx * sx + sy * sy).sqrt(), sz, false)
        }
    };
    let lg = lower_level_gap(prob, x, y, subsolver_tol)?;
    Ok(UncKktCertificate {
        res_xy,
        res_z,
        lower_gap: lg.gap,
        lower_gap_tol: lg.tol,
        rho,
        eps_target,
        exact,
    })
}

fn surrogate(term: &crate::math::ProxTerm, w: &Vector, g: &Vector) -> f64 {
    let step = 1.0;
    let p = term.prox(&(w - g * step), step);
    (w - &p).norm() / step
}

/// Multiplier formulas of the constrained certificate:
/// `lambda_tilde = 2 mu [tg(x,z)]_+`, `lambda_hat = 2 rho mu [tg(x,y)]_+`.
pub fn con_multipliers(
    prob: &ConBilevelProblem,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    rho: f64,
    mu: f64,
) -> Result<(Vector, Vector)> {
    let mut c = OracleCounters::new();
    let g_z = prob.eval_tg(x, z, &mut c)?;
    let g_y = prob.eval_tg(x, y, &mut c)?;
    Ok((plus_part(&g_z) * (2.0 * mu), plus_part(&g_y) * (2.0 * rho * mu)))
}

/// Certified lower-level optimal value of the constrained problem at `x`.
#[derive(Clone, Debug)]
pub struct TfStar {
    pub value: f64,
    /// Recorded certification tolerance (subsolver gap plus stage agreement).
    pub tol: f64,
    pub mu_final: f64,
    pub feas_norm: f64,
    pub counters: OracleCounters,
}

/// Evaluates `tf*(x) = min { tf(x,z) : tg(x,z) <= 0, z in Y }` by quadratic
/// penalty continuation with first-order subsolves.
///
/// Each stage minimizes `tP_mu'` and reports the multiplier-corrected value
/// `tf(x,z) + 2 mu' ||[tg(x,z)]_+||^2` (exact for affine constraints with a
/// stable active set). Accepts when the final violation is at most 1e-6 and
/// the last two corrected values agree to 1e-6; the ladder extends past 1e6
/// when multipliers are too large for that feasibility level.
pub fn eval_tf_star(prob: &ConBilevelProblem, x: &Vector, apg_budget: usize) -> Result<TfStar> {
    let base = &prob.base;
    if !base.f2.contains(x) {
        return Err(Error::out_of_domain("eval_tf_star: x outside X"));
    }
    let mut c = OracleCounters::new();
    let mut z = match base.tf2.as_box() {
        Some(b) => b.center(),
        None => base.tf2.prox(&Vector::zeros(base.ny), 1.0),
    };
    let mut prev_val: Option<f64> = None;
    let ladder = [1e2, 1e4, 1e6, 1e8, 1e10, 1e12];
    for (j, &mu) in ladder.iter().enumerate() {
        let tol = if j == 0 { 1e-4 } else { 1e-9 };
        let oracle = penalized_lower_oracle(prob, x, mu);
        let out = apg_minimize(&oracle, &base.tf2, &z, tol, apg_budget)
            .map_err(|e| Error::Subsolver(Box::new(e)))?;
        c.merge(&out.counters);
        z = out.z;
        let viol = plus_part(&prob.eval_tg(x, &z, &mut c)?);
        let feas_norm = viol.norm();
        let corrected = base.eval_tf(x, &z, &mut c)? + 2.0 * mu * feas_norm * feas_norm;
        if j >= 2 {
            // both values below come from tight stages
            let agree = (corrected - prev_val.unwrap()).abs();
            if feas_norm <= 1e-6 && agree <= 1e-6 {
                return Ok(TfStar {
                    value: corrected,
                    tol: agree.max(tol),
                    mu_final: mu,
                    feas_norm,
                    counters: c,
                });
            }
        }
        if j >= 1 {
            prev_val = Some(corrected);
        }
    }
    Err(Error::FeasibilityCheck {
        what: "tf* continuation did not certify feasibility at x (||[tg]_+|| or stage agreement stayed above tolerance)".into(),
    })
}

/// The seven residuals of the constrained approximate-KKT conditions.
#[derive(Clone, Debug, Serialize)]
pub struct ConKktCertificate {
    pub res_xy: f64,
    pub res_z: f64,
    pub feas_z: f64,
    pub compl_z: f64,
    pub value_gap: f64,
    pub feas_y: f64,
    pub compl_y: f64,
    pub lambda_tilde: Vec<f64>,
    pub lambda_hat: Vec<f64>,
    pub tf_star: f64,
    pub tf_star_tol: f64,
    pub rho: f64,
    pub mu: f64,
    pub eps_target: f64,
    pub exact: bool,
}

pub fn con_kkt_certificate(
    prob: &ConBilevelProblem,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    rho: f64,
    mu: f64,
    eps_target: f64,
    apg_budget: usize,
) -> Result<ConKktCertificate> {
    let base = &prob.base;
    let (nx, ny) = (base.nx, base.ny);
    let mut c = OracleCounters::new();

    let (lam_t, lam_h) = con_multipliers(prob, x, y, z, rho, mu)?;
    let g_z = prob.eval_tg(x, z, &mut c)?;
    let g_y = prob.eval_tg(x, y, &mut c)?;
    let j_y = prob.tg.jacobian(&concat(x, y), &mut c);
    let j_z = prob.tg.jacobian(&concat(x, z), &mut c);
    let jt_y_lam = j_y.transpose() * &lam_h;
    let jt_z_lam = j_z.transpose() * &lam_t;

    let gf = base.f1.gradient(&concat(x, y), &mut c);
    let gt_xy = base.tf1.gradient(&concat(x, y), &mut c);
    let gt_xz = base.tf1.gradient(&concat(x, z), &mut c);

    let gx = Vector::from_iterator(
        nx,
        (0..nx).map(|i| gf[i] + rho * (gt_xy[i] - gt_xz[i] - jt_z_lam[i]) + jt_y_lam[i]),
    );
    let gy = Vector::from_iterator(ny, (0..ny).map(|i| gf[nx + i] + rho * gt_xy[nx + i] + jt_y_lam[nx + i]));
    let gz = Vector::from_iterator(ny, (0..ny).map(|i| rho * (gt_xz[nx + i] + jt_z_lam[nx + i])));

    let (res_xy, res_z, exact) = match (base.f2.as_box(), base.tf2.as_box()) {
        (Some(bx), Some(by)) => {
            let rx = bx.normal_cone_distance(x, &gx)?;
            let ry = by.normal_cone_distance(y, &gy)?;
            let rz = by.normal_cone_distance(z, &gz)?;
            ((rx * rx + ry * ry).sqrt(), rz, true)
        }
        _ => {
            let sx = surrogate(&base.f2, x, &gx);
            let sy = surrogate(&base.tf2, y, &gy);
            let sz = surrogate(&base.tf2, z, &gz);
            ((sx * sx + sy * sy).sqrt(), sz, false)
        }
    };

    let star = eval_tf_star(prob, x, apg_budget)?;
    let tf_y = base.eval_tf(x, y, &mut c)?;

    Ok(ConKktCertificate {
        res_xy,
        res_z,
        feas_z: plus_part(&g_z).norm(),
        compl_z: lam_t.dot(&g_z).abs(),
        value_gap: (tf_y - star.value).abs(),
        feas_y: plus_part(&g_y).norm(),
        compl_y: lam_h.dot(&g_y).abs(),
        lambda_tilde: lam_t.iter().copied().collect(),
        lambda_hat: lam_h.iter().copied().collect(),
        tf_star: star.value,
        tf_star_tol: star.tol,
        rho,
        mu,
        eps_target,
        exact,
    })
}

/// A bilevel instance whose lower-level smooth part is quadratic in z with
/// positive-definite z-block Hessian, so the implicit solution `y*(x)` and
/// the hypergradient have closed forms.
#[derive(Clone, Debug)]
pub struct QuadraticLowerInstance {
    pub prob: UncBilevelProblem,
    /// `grad_z tf1(x,z) = hess_yy z + cross^T x + lin`.
    pub hess_yy: DMatrix<f64>,
    pub cross: DMatrix<f64>,
    pub lin: Vector,
    /// Smallest eigenvalue of `hess_yy`, certified at construction.
    pub sigma: f64,
}

impl QuadraticLowerInstance {
    pub fn new(
        prob: UncBilevelProblem,
        hess_yy: DMatrix<f64>,
        cross: DMatrix<f64>,
        lin: Vector,
    ) -> Result<Self> {
        let (nx, ny) = (prob.nx, prob.ny);
        if hess_yy.nrows() != ny || hess_yy.ncols() != ny || cross.nrows() != nx || cross.ncols() != ny {
            return Err(Error::DimensionMismatch { expected: ny, got: hess_yy.nrows() });
        }
        if (&hess_yy - hess_yy.transpose()).abs().max() > 1e-10 {
            return Err(Error::invalid("hess_yy must be symmetric"));
        }
        let eig = hess_yy.clone().symmetric_eigen();
        let sigma = eig.eigenvalues.min();
        if !(sigma > 0.0) {
            return Err(Error::invalid("hess_yy must be positive definite"));
        }
        // spot check the declared quadratic structure against the oracle
        let mut c = OracleCounters::new();
        for s in [-0.37, 0.61] {
            let x = Vector::from_element(nx, s * 0.5);
            let z = Vector::from_element(ny, -s * 0.25);
            let g = prob.tf1.gradient(&concat(&x, &z), &mut c).rows(nx, ny).into_owned();
            let model = &hess_yy * &z + cross.transpose() * &x + &lin;
            if (g - model).norm() > 1e-8 {
                return Err(Error::invalid("declared quadratic data does not match tf1 oracle"));
            }
        }
        Ok(QuadraticLowerInstance { prob, hess_yy, cross, lin, sigma })
    }

    /// Exact lower-level solution `y*(x)` from the stationarity system;
    /// errors when it leaves the interior of Y by `margin`.
    pub fn y_star(&self, x: &Vector, margin: f64) -> Result<Vector> {
        let rhs = -(self.cross.transpose() * x + &self.lin);
        let lu = self.hess_yy.clone().lu();
        let y = lu.solve(&rhs).ok_or_else(|| Error::invalid("singular hess_yy"))?;
        let yb = self
            .prob
            .tf2
            .as_box()
            .ok_or_else(|| Error::NotABox { what: "y_star interiority check".into() })?;
        let interior = y
            .iter()
            .zip(yb.lo().iter().zip(yb.hi().iter()))
            .all(|(yi, (l, h))| *yi >= l + margin && *yi <= h - margin);
        if !interior {
            return Err(Error::out_of_domain("y*(x) touches the boundary; hypergradient formula invalid"));
        }
        Ok(y)
    }
}

/// Hypergradient of the reduced objective at `x`:
/// `grad Phi(x) = grad_x f(x, y*) - cross [hess_yy]^{-1} grad_y f(x, y*)`.
pub fn hypergradient(inst: &QuadraticLowerInstance, x: &Vector, margin: f64) -> Result<Vector> {
    let y = inst.y_star(x, margin)?;
    let mut c = OracleCounters::new();
    let gf = inst.prob.f1.gradient(&concat(x, &y), &mut c);
    let (gx, gy) = crate::math::split(&gf, inst.prob.nx);
    let lu = inst.hess_yy.clone().lu();
    let w = lu.solve(&gy).ok_or_else(|| Error::invalid("singular hess_yy"))?;
    Ok(gx - &inst.cross * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{BoxSet, ProxTerm};
    use crate::problems::{SmoothOracle, UncConstants, VectorOracle};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    /// f = x + y, tf = (z-x)^2/2 on [-1,1] boxes.
    fn one_dim_problem() -> UncBilevelProblem {
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
    fn unc_certificate_at_hand_kkt_point() {
        // at (-1,-1,-1) with rho = 10 the boundary normal cones absorb the
        // gradients and the lower level is solved exactly
        let p = one_dim_problem();
        let cert =
            unc_kkt_certificate(&p, &v(&[-1.0]), &v(&[-1.0]), &v(&[-1.0]), 10.0, 0.1, 1e-9).unwrap();
        assert!(cert.exact);
        assert_eq!(cert.res_xy, 0.0);
        assert_eq!(cert.res_z, 0.0);
        assert!(cert.lower_gap.abs() <= 1e-9);
    }

    #[test]
    fn unc_certificate_interior_norms() {
        let p = one_dim_problem();
        // interior point: residual is the plain stacked-gradient norm
        let cert = unc_kkt_certificate(&p, &v(&[0.0]), &v(&[0.2]), &v(&[0.1]), 2.0, 0.5, 1e-9).unwrap();
        // gx = 1 + 2((x-y) - (x-z)) = 1 + 2(z-y) = 0.8; gy = 1 + 2(y-x) = 1.4
        let expect = (0.8f64 * 0.8 + 1.4 * 1.4).sqrt();
        assert!((cert.res_xy - expect).abs() < 1e-12);
        // gz = 2(z - x) = 0.2
        assert!((cert.res_z - 0.2).abs() < 1e-12);
        // y = 0.2 is not the minimizer at x = 0; gap = 0.02
        assert!((cert.lower_gap - 0.02).abs() < 1e-6);
    }

    #[test]
    fn lower_level_gap_examples() {
        let p = one_dim_problem();
        // exact minimizer
        let g = lower_level_gap(&p, &v(&[0.0]), &v(&[0.0]), 1e-8).unwrap();
        assert!(g.gap.abs() <= 1e-8);
        // x=0, y=0.5: gap = 0.125
        let g = lower_level_gap(&p, &v(&[0.0]), &v(&[0.5]), 1e-8).unwrap();
        assert!((g.gap - 0.125).abs() < 1e-6);
        // infeasible x
        assert!(lower_level_gap(&p, &v(&[2.0]), &v(&[0.0]), 1e-8).is_err());
    }

    /// Lower level `min_z dt z  s.t.  z - 0.25 <= 0, z in [-1,1]` with
    /// dt = -1: active constraint with multiplier 1. The dyadic bound keeps
    /// the constructed penalized stationary point exact in f64.
    fn tiny_con_problem(d_upper: f64) -> ConBilevelProblem {
        let f1 = SmoothOracle::new(2, 0.0, move |w| w[0] + d_upper * w[1], move |_| {
            v(&[1.0, d_upper])
        });
        let tf1 = SmoothOracle::new(2, 0.0, |w| -w[1], |_| v(&[0.0, -1.0]));
        let base = UncBilevelProblem::new(
            1,
            1,
            f1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            tf1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            UncConstants { d_x: 2.0, d_y: 2.0, f_low: -1.0 - d_upper.abs(), tf_hi: 1.0, tf_low: -1.0 },
        )
        .unwrap();
        let tg = VectorOracle::new(
            2,
            1,
            0.0,
            1.0,
            |w| v(&[w[1] - 0.25]),
            |_| DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
        );
        ConBilevelProblem::new(
            base,
            tg,
            crate::problems::ConConstants {
                l_grad_tg: 0.0,
                l_tg: 1.0,
                tg_hi: 1.25,
                slater_g: Some(0.25),
                l_f: (1.0f64 + d_upper * d_upper).sqrt(),
                l_tf: 1.0,
                },
        )
        .unwrap()
    }

    #[test]
    fn con_multiplier_examples() {
        let p = tiny_con_problem(1.0);
        let mu = 100.0;
        // z = 0.27 gives [g]_+ = 0.02, lambda_tilde = 4
        let (lt, lh) = con_multipliers(&p, &v(&[0.0]), &v(&[0.1]), &v(&[0.27]), 1.0, mu).unwrap();
        assert!((lt[0] - 4.0).abs() < 1e-12);
        assert_eq!(lh[0], 0.0); // y = 0.1 feasible

        // feasible z means zero multipliers
        let (lt, _) = con_multipliers(&p, &v(&[0.0]), &v(&[0.1]), &v(&[0.0]), 1.0, mu).unwrap();
        assert_eq!(lt[0], 0.0);
    }

    #[test]
    fn complementarity_identity_holds_exactly() {
        let p = tiny_con_problem(1.0);
        let mu = 37.5;
        let rho = 4.0;
        for zv in [-0.3, 0.21, 0.9] {
            let z = v(&[zv]);
            let y = v(&[0.4]);
            let (lt, lh) = con_multipliers(&p, &v(&[0.0]), &y, &z, rho, mu).unwrap();
            let mut c = OracleCounters::new();
            let gz = p.eval_tg(&v(&[0.0]), &z, &mut c).unwrap();
            let gy = p.eval_tg(&v(&[0.0]), &y, &mut c).unwrap();
            let lhs = lt.dot(&gz).abs();
            let rhs = 2.0 * mu * plus_part(&gz).norm_squared();
            assert!((lhs - rhs).abs() < 1e-12);
            let lhs2 = lh.dot(&gy).abs();
            let rhs2 = 2.0 * rho * mu * plus_part(&gy).norm_squared();
            assert!((lhs2 - rhs2).abs() < 1e-12);
        }
    }

    #[test]
    fn con_certificate_at_constructed_active_set_point() {
        // choose d = rho so the y-block stationarity vanishes at interior y
        let rho = 2.0;
        let mu = 134217728.0; // 2^27, so the active violation 1/(2 mu) = 2^-28 is dyadic
        let p = tiny_con_problem(rho);
        let x = v(&[-1.0]); // lower bound absorbs grad_x f = 1
        let z = v(&[0.25 + 0.5 / mu]); // penalized stationary point, exact in f64
        let y = v(&[0.25]); // exact lower-level solution
        let cert = con_kkt_certificate(&p, &x, &y, &z, rho, mu, 0.1, 4_000_000).unwrap();
        assert!(cert.exact);
        assert!(cert.res_xy <= 1e-8, "res_xy = {}", cert.res_xy);
        assert!(cert.res_z <= 1e-8, "res_z = {}", cert.res_z);
        assert!(cert.feas_z <= 1e-8);
        assert!(cert.compl_z <= 1e-8);
        assert!(cert.value_gap <= 1e-8, "value_gap = {}", cert.value_gap);
        assert!(cert.feas_y <= 1e-12);
        assert!(cert.compl_y <= 1e-12);
    }

    #[test]
    fn con_certificate_feasible_interior_candidate() {
        let p = tiny_con_problem(1.0);
        let cert =
            con_kkt_certificate(&p, &v(&[0.0]), &v(&[0.1]), &v(&[0.0]), 1.0, 100.0, 0.5, 4_000_000)
                .unwrap();
        assert_eq!(cert.compl_z, 0.0);
        assert_eq!(cert.compl_y, 0.0);
        assert_eq!(cert.feas_y, 0.0);
    }

    #[test]
    fn tf_star_matches_closed_form() {
        // min -z s.t. z <= 0.25 on [-1,1]: tf* = -0.25
        let p = tiny_con_problem(1.0);
        let star = eval_tf_star(&p, &v(&[0.0]), 4_000_000).unwrap();
        assert!((star.value + 0.25).abs() <= 1e-8, "tf* = {}", star.value);
        assert!(star.feas_norm <= 1e-6);
    }

    #[test]
    fn certificate_idempotence() {
        let p = one_dim_problem();
        let a = unc_kkt_certificate(&p, &v(&[0.3]), &v(&[0.1]), &v(&[0.2]), 5.0, 0.2, 1e-9).unwrap();
        let b = unc_kkt_certificate(&p, &v(&[0.3]), &v(&[0.1]), &v(&[0.2]), 5.0, 0.2, 1e-9).unwrap();
        assert_eq!(a.res_xy, b.res_xy);
        assert_eq!(a.res_z, b.res_z);
        assert_eq!(a.lower_gap, b.lower_gap);
    }

    fn one_dim_quadratic_instance() -> QuadraticLowerInstance {
        // tf1 = (z-x)^2/2: hess_yy = 1, cross = -1, lin = 0
        let p = one_dim_problem();
        QuadraticLowerInstance::new(
            p,
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DMatrix::from_row_slice(1, 1, &[-1.0]),
            v(&[0.0]),
        )
        .unwrap()
    }

    #[test]
    fn hypergradient_closed_forms() {
        let inst = one_dim_quadratic_instance();
        // grad Phi = 1 - (-1)(1)^{-1}(1) = 2 for interior x
        for xv in [-0.5, 0.0, 0.7] {
            let g = hypergradient(&inst, &v(&[xv]), 1e-9).unwrap();
            assert!((g[0] - 2.0).abs() < 1e-12);
        }
        // y*(x) = x leaves the interior at |x| = 1
        assert!(hypergradient(&inst, &v(&[1.0]), 1e-9).is_err());
    }

    #[test]
    fn hypergradient_degenerate_couplings() {
        // f independent of y: grad Phi = grad_x f
        let f1 = SmoothOracle::new(2, 0.0, |w| 3.0 * w[0], |_| v(&[3.0, 0.0]));
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
            UncConstants { d_x: 2.0, d_y: 2.0, f_low: -3.0, tf_hi: 2.0, tf_low: 0.0 },
        )
        .unwrap();
        let inst = QuadraticLowerInstance::new(
            prob,
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DMatrix::from_row_slice(1, 1, &[-1.0]),
            v(&[0.0]),
        )
        .unwrap();
        let g = hypergradient(&inst, &v(&[0.2]), 1e-9).unwrap();
        assert_eq!(g[0], 3.0);

        // separable lower level (cross = 0): grad Phi = grad_x f(x, y*)
        let f1 = SmoothOracle::new(2, 0.0, |w| w[0] + w[1], |_| v(&[1.0, 1.0]));
        let tf1 = SmoothOracle::new(2, 1.0, |w| 0.5 * w[1] * w[1], |w| v(&[0.0, w[1]]));
        let prob = UncBilevelProblem::new(
            1,
            1,
            f1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            tf1,
            ProxTerm::box_indicator(BoxSet::symmetric(1, 1.0)),
            UncConstants { d_x: 2.0, d_y: 2.0, f_low: -2.0, tf_hi: 0.5, tf_low: 0.0 },
        )
        .unwrap();
        let inst = QuadraticLowerInstance::new(
            prob,
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DMatrix::from_row_slice(1, 1, &[0.0]),
            v(&[0.0]),
        )
        .unwrap();
        let g = hypergradient(&inst, &v(&[0.4]), 1e-9).unwrap();
        assert_eq!(g[0], 1.0);
    }
}

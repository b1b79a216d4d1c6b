//! Closed-form complexity constants and operation-count bounds, evaluated
//! verbatim for conformance testing against measured oracle counts.
//!
//! Ceilings and positive parts are applied literally; nothing is
//! simplified. Callers supply measured values (such as the initial
//! objective) where a formula asks for them, making each bound
//! instance-specific.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Named constant table, JSON-serializable for the CLI.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundsReport {
    pub values: BTreeMap<String, f64>,
}

impl BoundsReport {
    fn put(&mut self, k: &str, v: f64) {
        self.values.insert(k.to_string(), v);
    }

    /// Panics on a missing key; keys are fixed per theorem.
    pub fn get(&self, k: &str) -> f64 {
        *self.values.get(k).unwrap_or_else(|| panic!("missing bounds key {k}"))
    }
}

/// `max(ceil(x), 0)`.
fn ceil_plus(x: f64) -> f64 {
    x.ceil().max(0.0)
}

/// `max(log(x), 0)`.
fn log_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

#[derive(Clone, Copy, Debug)]
pub struct UncBoundInputs {
    pub l_grad_f1: f64,
    pub l_grad_tf1: f64,
    pub d_x: f64,
    pub d_y: f64,
    /// Measured `f(x0, y0)`.
    pub f0: f64,
    pub f_low: f64,
    pub tf_hi: f64,
    pub tf_low: f64,
    /// The optimal value, or any lower bound on it (a lower bound shrinks
    /// the constant, keeping conformance checks conservative).
    pub f_star: f64,
}

fn check_finite(vals: &[f64]) -> Result<()> {
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "bounds inputs".into() });
    }
    Ok(())
}

/// Constants of the unconstrained penalty method's complexity statement.
pub fn unc_bounds(inp: &UncBoundInputs, eps: f64) -> Result<BoundsReport> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::invalid("eps must lie in (0, 1/4]"));
    }
    check_finite(&[
        inp.l_grad_f1,
        inp.l_grad_tf1,
        inp.d_x,
        inp.d_y,
        inp.f0,
        inp.f_low,
        inp.tf_hi,
        inp.tf_low,
        inp.f_star,
    ])?;
    let l = inp.l_grad_f1 + 2.0 / eps * inp.l_grad_tf1;
    if !(l > 0.0) {
        return Err(Error::invalid("smoothness constant is zero; bounds undefined"));
    }
    let (d_x, d_y) = (inp.d_x, inp.d_y);
    let alpha = 1.0f64.min((4.0 * eps / (d_y * l)).sqrt());
    let delta = (2.0 + 1.0 / alpha) * (d_x * d_x + d_y * d_y) * l
        + (eps / d_y).max(alpha * l / 4.0) * d_y * d_y;
    let bracket = (3.0 * l + eps / (2.0 * d_y)).powi(2) / l.min(eps / (2.0 * d_y))
        + 3.0 * l
        + eps / (2.0 * d_y);
    let c_hat = 4.0
        * (1.0 / (2.0 * l)).max((d_y / eps).min(4.0 / (alpha * l)))
        * (delta
            + 2.0 / alpha
                * (inp.f_star - inp.f_low
                    + (inp.tf_hi - inp.tf_low) / eps
                    + eps * d_y / 4.0
                    + l * (d_x * d_x + d_y * d_y)))
        / (bracket.powi(-2) * eps.powi(3));
    let k_hat = ceil_plus(
        16.0 * (1.0 + inp.f0 - inp.f_low + eps * d_y / 4.0) * l / (eps * eps)
            + 32.0 * (1.0 + 4.0 * d_y * d_y * l * l / (eps * eps)) * eps
            - 1.0,
    );
    let n_hat = ((96.0 * 2.0f64.sqrt() * (1.0 + (24.0 * l + 4.0 * eps / d_y) / l)).ceil() + 2.0)
        * 2.0f64.max((d_y * l / eps).sqrt())
        * ((k_hat + 1.0) * log_plus(c_hat) + k_hat + 1.0 + 2.0 * k_hat * (k_hat + 1.0).ln());
    let gap2_rhs = eps
        * (1.0 + inp.f0 - inp.f_low
            + 2.0 * eps.powi(3) * (1.0 / l + 4.0 * d_y * d_y * l / (eps * eps))
            + d_y * eps / 4.0);

    let mut r = BoundsReport::default();
    r.put("eps", eps);
    r.put("L_hat", l);
    r.put("alpha_hat", alpha);
    r.put("delta_hat", delta);
    r.put("C_hat", c_hat);
    r.put("K_hat", k_hat);
    r.put("N_hat", n_hat);
    r.put("gap2_rhs", gap2_rhs);
    r.put("in_L_grad_f1", inp.l_grad_f1);
    r.put("in_L_grad_tf1", inp.l_grad_tf1);
    r.put("in_D_x", d_x);
    r.put("in_D_y", d_y);
    r.put("in_f0", inp.f0);
    r.put("in_f_low", inp.f_low);
    r.put("in_tf_hi", inp.tf_hi);
    r.put("in_tf_low", inp.tf_low);
    r.put("in_f_star", inp.f_star);
    Ok(r)
}

#[derive(Clone, Copy, Debug)]
pub struct ConBoundInputs {
    pub l_grad_f1: f64,
    pub l_grad_tf1: f64,
    pub d_x: f64,
    pub d_y: f64,
    pub f0: f64,
    pub f_low: f64,
    pub tf_hi: f64,
    pub tf_low: f64,
    pub f_star: f64,
    pub l_f: f64,
    pub l_tf: f64,
    pub l_grad_tg: f64,
    pub l_tg: f64,
    pub tg_hi: f64,
    pub slater_g: f64,
}

/// Constants of the constrained penalty method's complexity statement,
/// including the right-hand sides of the seven certificate bounds.
pub fn con_bounds(inp: &ConBoundInputs, eps: f64) -> Result<BoundsReport> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::invalid("eps must lie in (0, 1/4]"));
    }
    check_finite(&[
        inp.l_grad_f1,
        inp.l_grad_tf1,
        inp.d_x,
        inp.d_y,
        inp.f0,
        inp.f_low,
        inp.tf_hi,
        inp.tf_low,
        inp.f_star,
        inp.l_f,
        inp.l_tf,
        inp.l_grad_tg,
        inp.l_tg,
        inp.tg_hi,
        inp.slater_g,
    ])?;
    if !(inp.slater_g > 0.0) {
        return Err(Error::invalid("slater_g must be positive for the constrained bounds"));
    }
    let l = inp.l_grad_f1
        + 2.0 / eps * inp.l_grad_tf1
        + 4.0 / eps.powi(3) * (inp.tg_hi * inp.l_grad_tg + inp.l_tg * inp.l_tg);
    if !(l > 0.0) {
        return Err(Error::invalid("smoothness constant is zero; bounds undefined"));
    }
    let (d_x, d_y, g) = (inp.d_x, inp.d_y, inp.slater_g);
    let alpha = 1.0f64.min((4.0 * eps / (d_y * l)).sqrt());
    let delta = (2.0 + 1.0 / alpha) * (d_x * d_x + d_y * d_y) * l
        + (eps / d_y).max(alpha * l / 4.0) * d_y * d_y;
    let bracket = (3.0 * l + eps / (2.0 * d_y)).powi(2) / l.min(eps / (2.0 * d_y))
        + 3.0 * l
        + eps / (2.0 * d_y);
    let c_til = 4.0 * (1.0 / (2.0 * l)).max((d_y / eps).min(4.0 / (alpha * l)))
        / (bracket.powi(-2) * eps.powi(5))
        * (delta
            + 2.0 / alpha
                * (inp.f_star - inp.f_low
                    + 2.0 / eps * (inp.tf_hi - inp.tf_low)
                    + inp.tg_hi * inp.tg_hi / eps.powi(3)
                    + eps * d_y / 4.0
                    + l * (d_x * d_x + d_y * d_y)));
    let k_til = ceil_plus(
        32.0 * (1.0 + inp.f0 - inp.f_low + eps * d_y / 4.0) * l / (eps * eps)
            + 32.0 * eps.powi(3) * (1.0 + 4.0 * d_y * d_y * l * l / (eps * eps))
            - 1.0,
    );
    let n_til = ((96.0 * 2.0f64.sqrt() * (1.0 + (24.0 * l + 4.0 * eps / d_y) / l)).ceil() + 2.0)
        * 2.0f64.max((d_y * l / eps).sqrt())
        * ((k_til + 1.0) * log_plus(c_til) + k_til + 1.0 + 2.0 * k_til * (k_til + 1.0).ln());

    let e2 = eps * eps;
    let gap3_rhs = e2 / g * d_y * (e2 + inp.l_tf) / 2.0;
    let gap4_rhs = e2 / (g * g) * d_y * d_y * (e2 + inp.l_tf).powi(2) / 2.0;
    let gap5_rhs = (eps
        * (1.0 + inp.f0 - inp.f_low
            + 2.0 * eps.powi(5) * (1.0 / l + 4.0 * d_y * d_y * l / e2)
            + d_y * eps / 4.0))
        .max(e2 / (g * g) * d_y * d_y * inp.l_tf * (e2 + eps * inp.l_f + inp.l_tf) / 2.0);
    let gap6_rhs = e2 / g * d_y * (e2 + eps * inp.l_f + inp.l_tf) / 2.0;
    let gap7_rhs = eps / (g * g) * d_y * d_y * (e2 + eps * inp.l_f + inp.l_tf).powi(2) / 2.0;

    let mut r = BoundsReport::default();
    r.put("eps", eps);
    r.put("L_tilde", l);
    r.put("alpha_tilde", alpha);
    r.put("delta_tilde", delta);
    r.put("C_tilde", c_til);
    r.put("K_tilde", k_til);
    r.put("N_tilde", n_til);
    r.put("gap1_rhs", eps);
    r.put("gap2_rhs", eps);
    r.put("gap3_rhs", gap3_rhs);
    r.put("gap4_rhs", gap4_rhs);
    r.put("gap5_rhs", gap5_rhs);
    r.put("gap6_rhs", gap6_rhs);
    r.put("gap7_rhs", gap7_rhs);
    r.put("in_L_grad_f1", inp.l_grad_f1);
    r.put("in_L_grad_tf1", inp.l_grad_tf1);
    r.put("in_D_x", d_x);
    r.put("in_D_y", d_y);
    r.put("in_f0", inp.f0);
    r.put("in_f_low", inp.f_low);
    r.put("in_tf_hi", inp.tf_hi);
    r.put("in_tf_low", inp.tf_low);
    r.put("in_f_star", inp.f_star);
    r.put("in_L_f", inp.l_f);
    r.put("in_L_tf", inp.l_tf);
    r.put("in_L_grad_tg", inp.l_grad_tg);
    r.put("in_L_tg", inp.l_tg);
    r.put("in_tg_hi", inp.tg_hi);
    r.put("in_G", g);
    Ok(r)
}

#[derive(Clone, Copy, Debug)]
pub struct ScscOuterBoundInputs {
    pub l_grad_h: f64,
    pub d_p: f64,
    pub d_q: f64,
    /// `max_y H(x0, y)` (measured or an upper surrogate).
    pub h0_max: f64,
    /// `H*` or a surrogate bound.
    pub h_star: f64,
    /// Lower bound on `H` over the domain product.
    pub h_low: f64,
}

/// Constants of the smoothing method's complexity statement.
pub fn scsc_outer_bounds(inp: &ScscOuterBoundInputs, eps: f64, eps0: f64) -> Result<BoundsReport> {
    if !(eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    if !(eps0 > 0.0 && eps0 <= eps / 2.0) {
        return Err(Error::invalid("eps0 must lie in (0, eps/2]"));
    }
    check_finite(&[inp.l_grad_h, inp.d_p, inp.d_q, inp.h0_max, inp.h_star, inp.h_low])?;
    let (l, d_p, d_q) = (inp.l_grad_h, inp.d_p, inp.d_q);
    if !(l > 0.0 && d_q > 0.0) {
        return Err(Error::invalid("l_grad_h and d_q must be positive"));
    }
    let alpha = 1.0f64.min((4.0 * eps / (d_q * l)).sqrt());
    let delta = (2.0 + 1.0 / alpha) * l * d_p * d_p + (eps / d_q).max(alpha * l / 4.0) * d_q * d_q;
    let k = ceil_plus(
        16.0 * (inp.h0_max - inp.h_star + eps * d_q / 4.0) * l / (eps * eps)
            + 32.0 * eps0 * eps0 * (1.0 + 4.0 * d_q * d_q * l * l / (eps * eps)) / (eps * eps)
            - 1.0,
    );
    let bracket = (3.0 * l + eps / (2.0 * d_q)).powi(2) / l.min(eps / (2.0 * d_q))
        + 3.0 * l
        + eps / (2.0 * d_q);
    let c = 4.0
        * (1.0 / (2.0 * l)).max((d_q / eps).min(4.0 / (alpha * l)))
        * (delta + 2.0 / alpha * (inp.h_star - inp.h_low + eps * d_q / 4.0 + l * d_p * d_p))
        / (bracket.powi(-2) * eps0 * eps0);
    let n = ((96.0 * 2.0f64.sqrt() * (1.0 + (24.0 * l + 4.0 * eps / d_q) / l)).ceil() + 2.0)
        * 2.0f64.max((d_q * l / eps).sqrt())
        * ((k + 1.0) * log_plus(c) + k + 1.0 + 2.0 * k * (k + 1.0).ln());

    let mut r = BoundsReport::default();
    r.put("eps", eps);
    r.put("eps0", eps0);
    r.put("alpha", alpha);
    r.put("delta", delta);
    r.put("C", c);
    r.put("K", k);
    r.put("N", n);
    r.put("in_L_grad_h", l);
    r.put("in_D_p", d_p);
    r.put("in_D_q", d_q);
    r.put("in_H0_max", inp.h0_max);
    r.put("in_H_star", inp.h_star);
    r.put("in_H_low", inp.h_low);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dim_inputs() -> UncBoundInputs {
        UncBoundInputs {
            l_grad_f1: 0.0,
            l_grad_tf1: 2.0,
            d_x: 2.0,
            d_y: 2.0,
            f0: 0.0,
            f_low: -2.0,
            tf_hi: 2.0,
            tf_low: 0.0,
            f_star: -2.0,
        }
    }

    #[test]
    fn unc_bounds_on_one_dim_instance() {
        let r = unc_bounds(&one_dim_inputs(), 0.1).unwrap();
        assert_eq!(r.get("L_hat"), 40.0);
        assert!((r.get("alpha_hat") - 0.005f64.sqrt()).abs() < 1e-15);
        assert!(r.get("K_hat") >= 0.0 && r.get("K_hat").fract() == 0.0);
        assert!(r.get("N_hat").is_finite() && r.get("N_hat") > 0.0);
    }

    #[test]
    fn unc_l_hat_monotone_in_inverse_eps() {
        let a = unc_bounds(&one_dim_inputs(), 0.1).unwrap().get("L_hat");
        let b = unc_bounds(&one_dim_inputs(), 0.2).unwrap().get("L_hat");
        assert!(b < a);
    }

    #[test]
    fn unc_bounds_rejects_bad_eps() {
        assert!(unc_bounds(&one_dim_inputs(), 0.3).is_err());
        assert!(unc_bounds(&one_dim_inputs(), 0.0).is_err());
    }

    fn con_inputs() -> ConBoundInputs {
        ConBoundInputs {
            l_grad_f1: 0.0,
            l_grad_tf1: 0.0,
            d_x: 2.0,
            d_y: 2.0,
            f0: 0.5,
            f_low: -2.0,
            tf_hi: 1.0,
            tf_low: -1.0,
            f_star: -2.0,
            l_f: 1.5,
            l_tf: 1.0,
            l_grad_tg: 0.0,
            l_tg: 1.0,
            tg_hi: 1.2,
            slater_g: 0.2,
        }
    }

    #[test]
    fn con_l_tilde_zero_smooth_part() {
        // linear tf1: L_tilde = 4 eps^-3 (tg_hi L_grad_tg + L_tg^2)
        let r = con_bounds(&con_inputs(), 0.1).unwrap();
        let expect = 4.0 / 0.1f64.powi(3) * (1.2 * 0.0 + 1.0);
        assert!((r.get("L_tilde") - expect).abs() < 1e-9);
    }

    #[test]
    fn con_leading_term_eps_cubed_scaling() {
        let a = con_bounds(&con_inputs(), 0.2).unwrap().get("L_tilde");
        let b = con_bounds(&con_inputs(), 0.1).unwrap().get("L_tilde");
        assert!((b / a - 8.0).abs() < 1e-12);
    }

    #[test]
    fn con_gap3_value() {
        let r = con_bounds(&con_inputs(), 0.1).unwrap();
        // eps^2 G^-1 D_y (eps^2 + L_tf) / 2
        let expect = 0.01 / 0.2 * 2.0 * (0.01 + 1.0) / 2.0;
        assert!((r.get("gap3_rhs") - expect).abs() < 1e-12);
    }

    #[test]
    fn scsc_outer_accepts_boundary_eps0() {
        let inp = ScscOuterBoundInputs {
            l_grad_h: 2f64.sqrt(),
            d_p: 2.0,
            d_q: 2.0,
            h0_max: 1.0,
            h_star: 0.0,
            h_low: -2.0,
        };
        let r = scsc_outer_bounds(&inp, 1e-2, 5e-3).unwrap();
        assert!(r.get("N").is_finite() && r.get("N") > 0.0);
        assert!(scsc_outer_bounds(&inp, 1e-2, 6e-3).is_err());
    }

    #[test]
    fn scsc_outer_k_monotone_in_gap() {
        let mut inp = ScscOuterBoundInputs {
            l_grad_h: 1.0,
            d_p: 2.0,
            d_q: 2.0,
            h0_max: 1.0,
            h_star: 0.0,
            h_low: -2.0,
        };
        let k1 = scsc_outer_bounds(&inp, 1e-2, 5e-3).unwrap().get("K");
        inp.h0_max = 0.0; // H(x0) at the optimum: smallest K of the family
        let k2 = scsc_outer_bounds(&inp, 1e-2, 5e-3).unwrap().get("K");
        assert!(k2 <= k1);
    }

    /// Independent transcriptions of the same formulas, written as direct
    /// one-liners, to guard against transcription slips in the module.
    #[test]
    fn formula_regression_against_independent_transcription() {
        let cases = [
            (0.25, 1.0, 0.5, 3.0, 1.0, 0.7, -1.3, 4.0, -1.0, -1.5),
            (0.1, 0.3, 2.1, 2.0, 6.0, 1.2, -0.4, 2.0, 0.5, -0.6),
            (0.2, 0.0, 1.0, 2.0, 2.0, 0.0, -2.0, 2.0, 0.0, -2.0),
            (0.05, 2.0, 0.01, 5.0, 1.0, 3.0, -3.0, 9.0, -9.0, -3.5),
            (0.125, 0.5, 0.5, 1.0, 1.0, 0.25, -0.25, 0.5, -0.5, -0.3),
        ];
        for (eps, lf, ltf, dx, dy, f0, flow, tfhi, tflow, fstar) in cases {
            let inp = UncBoundInputs {
                l_grad_f1: lf,
                l_grad_tf1: ltf,
                d_x: dx,
                d_y: dy,
                f0,
                f_low: flow,
                tf_hi: tfhi,
                tf_low: tflow,
                f_star: fstar,
            };
            let r = unc_bounds(&inp, eps).unwrap();

            let l: f64 = lf + 2.0 * ltf / eps;
            assert!((r.get("L_hat") - l).abs() <= 1e-12 * l.abs());
            let alpha: f64 = f64::min(1.0, f64::sqrt(4.0 * eps / (dy * l)));
            assert!((r.get("alpha_hat") - alpha).abs() <= 1e-12);
            let delta: f64 = (2.0 + alpha.recip()) * (dx * dx + dy * dy) * l
                + f64::max(eps / dy, alpha * l / 4.0) * dy * dy;
            assert!((r.get("delta_hat") - delta).abs() <= 1e-9 * delta.abs());
            let k: f64 = f64::max(
                0.0,
                f64::ceil(
                    16.0 * (1.0 + f0 - flow + eps * dy / 4.0) * l * eps.powi(-2)
                        + 32.0 * (1.0 + 4.0 * dy * dy * l * l * eps.powi(-2)) * eps
                        - 1.0,
                ),
            );
            assert_eq!(r.get("K_hat"), k);
            let br: f64 = (3.0 * l + eps / (2.0 * dy)).powi(2) / f64::min(l, eps / (2.0 * dy))
                + 3.0 * l
                + eps / (2.0 * dy);
            let c: f64 = 4.0
                * f64::max(0.5 / l, f64::min(dy / eps, 4.0 / (alpha * l)))
                * (delta
                    + 2.0 / alpha
                        * (fstar - flow + (tfhi - tflow) / eps + eps * dy / 4.0
                            + l * (dx * dx + dy * dy)))
                / (br.powi(-2) * eps.powi(3));
            assert!((r.get("C_hat") - c).abs() <= 1e-9 * c.abs());
            let n: f64 = (f64::ceil(96.0 * f64::sqrt(2.0) * (1.0 + (24.0 * l + 4.0 * eps / dy) / l))
                + 2.0)
                * f64::max(2.0, f64::sqrt(dy * l / eps))
                * ((k + 1.0) * f64::max(0.0, c.ln()) + k + 1.0 + 2.0 * k * f64::ln(k + 1.0));
            assert!((r.get("N_hat") - n).abs() <= 1e-9 * n.abs());
        }
    }
}

//! Random instance generators with construction post-checks.
//!
//! Both generators plant a known lower-level solution `y_hat` at `x = 0`:
//! the unconstrained one solves `grad_z tf(0, y_hat) = 0` for `dt`, the
//! constrained one builds an LP KKT pair `(y_hat, lambda*)` with a random
//! active set. Declared constants are filled analytically (loose but valid
//! bounds suffice for the parameter formulas).

use nalgebra::{DMatrix, DVector};

use bipen_core::error::{Error, Result};
use bipen_core::math::Vector;

use crate::instance::{
    symmetric_spectral_norm, ConInstanceConstants, ConLinearInstance, Instance, UncInstanceConstants,
    UncLinQuadInstance, INSTANCE_VERSION, KIND_CON, KIND_UNC,
};
use crate::rng::DetRng;

const KIND_ID_UNC: u8 = 1;
const KIND_ID_CON: u8 = 2;

fn abs_row_sum(mat: &DMatrix<f64>) -> f64 {
    mat.iter().map(|v| v.abs()).sum()
}

/// Orthogonal factor of a standard-normal square matrix, with the QR sign
/// convention `diag(R) >= 0` fixed for determinism.
fn random_orthogonal(rng: &mut DetRng, m: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| rng.standard_normal());
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            for i in 0..m {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

pub fn gen_unc_instance(n: usize, m: usize, seed: u64) -> Result<UncLinQuadInstance> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("dimensions must be at least 1"));
    }
    let mut rng = DetRng::new(KIND_ID_UNC, &[n, m], seed, 0);
    let c = rng.normal_vec(n, 1.0);
    let d = rng.normal_vec(m, 1.0);
    let a = DMatrix::from_fn(n, m, |_, _| rng.normal(0.01));
    let u = random_orthogonal(&mut rng, m);
    let diag: Vec<f64> = (0..m).map(|_| rng.normal(0.01).max(0.0)).collect();
    let mut b = &u * DMatrix::from_diagonal(&DVector::from_vec(diag)) * u.transpose();
    // symmetrize away the roundoff of the congruence product
    b = (&b + b.transpose()) * 0.5;
    let y_hat: Vec<f64> = (0..m).map(|_| rng.normal(0.1).clamp(-1.0, 1.0)).collect();
    // dt solves grad_z tf(0, y_hat) = 2 B y_hat + dt = 0
    let dt = -2.0 * &b * DVector::from_row_slice(&y_hat);

    let l_grad_tf1 = {
        let a2 = a.clone();
        let b2 = b.clone();
        symmetric_spectral_norm(
            n + m,
            move |v: &Vector| {
                // Hessian [[0, A], [A', 2B]] applied to (vx; vz)
                let vx = v.rows(0, n).into_owned();
                let vz = v.rows(n, m).into_owned();
                let top = &a2 * &vz;
                let bot = a2.transpose() * &vx + &b2 * &vz * 2.0;
                bipen_core::math::concat(&top, &bot)
            },
            1e-8,
            20_000,
        )
    };
    let f_low = -c.iter().map(|v| v.abs()).sum::<f64>() - d.iter().map(|v| v.abs()).sum::<f64>();
    let abs_a = abs_row_sum(&a);
    let abs_b = abs_row_sum(&b);
    let dt_l1 = dt.iter().map(|v| v.abs()).sum::<f64>();
    let inst = UncLinQuadInstance {
        version: INSTANCE_VERSION.to_string(),
        kind: KIND_UNC.to_string(),
        n,
        m,
        seed,
        c,
        d,
        dt: dt.iter().copied().collect(),
        a_mat: a.transpose().iter().copied().collect(), // row-major of a (n x m)
        b_mat: b.transpose().iter().copied().collect(),
        x_lo: vec![-1.0; n],
        x_hi: vec![1.0; n],
        y_lo: vec![-1.0; m],
        y_hi: vec![1.0; m],
        constants: UncInstanceConstants {
            l_grad_f1: 0.0,
            l_grad_tf1,
            d_x: 2.0 * (n as f64).sqrt(),
            d_y: 2.0 * (m as f64).sqrt(),
            f_low,
            tf_hi: abs_a + abs_b + dt_l1,
            tf_low: -abs_a - dt_l1,
        },
    };
    // construction post-check: y_hat is stationary for the lower level at x=0
    let resid = (2.0 * inst.b_matrix() * DVector::from_row_slice(&y_hat)
        + DVector::from_row_slice(&inst.dt))
    .norm();
    if resid > 1e-10 {
        return Err(Error::FeasibilityCheck {
            what: format!("unc generator stationarity residual {resid}"),
        });
    }
    Ok(inst)
}

struct ConDraw {
    c: Vec<f64>,
    d: Vec<f64>,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    y_hat: DVector<f64>,
    lambda: DVector<f64>,
    bt: DVector<f64>,
    dt: DVector<f64>,
}

fn draw_con(n: usize, m: usize, l: usize, seed: u64, attempt: u32) -> ConDraw {
    let mut rng = DetRng::new(KIND_ID_CON, &[n, m, l], seed, attempt);
    let c = rng.normal_vec(n, 1.0);
    let d = rng.normal_vec(m, 1.0);
    let a = DMatrix::from_fn(l, n, |_, _| rng.normal(0.01));
    let b = DMatrix::from_fn(l, m, |_, _| rng.normal(0.01));
    let y_hat = DVector::from_iterator(m, (0..m).map(|_| rng.normal(0.1).clamp(-1.0, 1.0)));

    // random ceil(l/2)-subset of strictly active constraints
    let n_active = l.div_ceil(2);
    let mut order: Vec<usize> = (0..l).collect();
    for i in (1..l).rev() {
        let j = rng.below(i + 1);
        order.swap(i, j);
    }
    let mut active = vec![false; l];
    for &i in order.iter().take(n_active) {
        active[i] = true;
    }
    let mut lambda = DVector::zeros(l);
    for i in 0..l {
        if active[i] {
            lambda[i] = rng.standard_normal().abs();
        }
    }
    let by = &b * &y_hat;
    let mut bt = DVector::zeros(l);
    for i in 0..l {
        bt[i] = if active[i] { by[i] } else { by[i] + rng.standard_normal().abs() + 0.1 };
    }
    // nu in the normal cone of the box at y_hat (zero on interior coords)
    let mut nu = DVector::zeros(m);
    for j in 0..m {
        if y_hat[j] >= 1.0 {
            nu[j] = rng.standard_normal().abs();
        } else if y_hat[j] <= -1.0 {
            nu[j] = -rng.standard_normal().abs();
        }
    }
    let dt = -(b.transpose() * &lambda) - nu;
    ConDraw { c, d, a, b, y_hat, lambda, bt, dt }
}

/// KKT residuals of the planted lower-level LP solution at x = 0.
fn con_kkt_check(draw: &ConDraw) -> f64 {
    let g = &draw.b * &draw.y_hat - &draw.bt;
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        worst = worst.max(g[i]); // feasibility: g <= 0
        if draw.lambda[i] > 0.0 {
            worst = worst.max(g[i].abs()); // active rows tight
        }
    }
    worst = worst.max(draw.lambda.dot(&g).abs()); // complementarity
                                                  // stationarity: dt + B' lambda + nu = 0 holds by construction for
                                                  // interior coords; re-check interior coords only
    let station = &draw.dt + draw.b.transpose() * &draw.lambda;
    for j in 0..draw.y_hat.len() {
        if draw.y_hat[j].abs() < 1.0 {
            worst = worst.max(station[j].abs());
        }
    }
    worst
}

/// Best certified uniform Slater margin over a family of candidate points:
/// `G(z) = min_i (bt_i - (B z)_i - ||A_i||_1)`, which lower-bounds
/// `-tg_i(x, z)` over the whole x box.
fn certify_slater(draw: &ConDraw) -> Option<(f64, DVector<f64>)> {
    let l = draw.bt.len();
    let m = draw.y_hat.len();
    let row_l1_a: Vec<f64> =
        (0..l).map(|i| (0..draw.a.ncols()).map(|j| draw.a[(i, j)].abs()).sum()).collect();
    let margin = |z: &DVector<f64>| -> f64 {
        let bz = &draw.b * z;
        (0..l).map(|i| draw.bt[i] - bz[i] - row_l1_a[i]).fold(f64::INFINITY, f64::min)
    };
    let mut candidates: Vec<DVector<f64>> = vec![
        DVector::zeros(m),
        &draw.y_hat * 0.5,
        draw.y_hat.clone(),
    ];
    // least-norm pushes against the active rows: solve (B B') s = t 1
    let gram = &draw.b * draw.b.transpose();
    if let Some(sol) = gram.clone().lu().solve(&DVector::from_element(l, 1.0)) {
        let dir = draw.b.transpose() * sol;
        for t in [0.4, 0.2, 0.1, 0.05, 0.02] {
            let mut zc = &draw.y_hat - &dir * t;
            for j in 0..m {
                zc[j] = zc[j].clamp(-1.0, 1.0);
            }
            candidates.push(zc);
        }
    }
    let mut best: Option<(f64, DVector<f64>)> = None;
    for zc in candidates {
        let g = margin(&zc);
        if g > best.as_ref().map(|(b, _)| *b).unwrap_or(f64::NEG_INFINITY) {
            best = Some((g, zc));
        }
    }
    best.filter(|(g, _)| *g > 1e-8)
}

/// Generates a constrained instance; resamples with a derived sub-seed (up
/// to 10 attempts) when the KKT post-check fails, and keeps trying for a
/// Slater certificate, falling back to the first valid draw without one.
pub fn gen_con_instance(n: usize, m: usize, l: usize, seed: u64) -> Result<ConLinearInstance> {
    if n == 0 || m == 0 || l == 0 {
        return Err(Error::invalid("dimensions must be at least 1"));
    }
    let mut fallback: Option<ConLinearInstance> = None;
    for attempt in 0..10u32 {
        let draw = draw_con(n, m, l, seed, attempt);
        if con_kkt_check(&draw) > 1e-10 {
            continue;
        }
        let slater = certify_slater(&draw);
        let inst = build_con_instance(n, m, l, seed, &draw, slater.as_ref().map(|(g, _)| *g));
        if slater.is_some() {
            return Ok(inst);
        }
        if fallback.is_none() {
            fallback = Some(inst);
        }
    }
    fallback.ok_or_else(|| Error::FeasibilityCheck {
        what: "constrained generator failed its KKT post-check on 10 attempts".into(),
    })
}

fn build_con_instance(
    n: usize,
    m: usize,
    l: usize,
    seed: u64,
    draw: &ConDraw,
    slater_g: Option<f64>,
) -> ConLinearInstance {
    let cd_norm = draw
        .c
        .iter()
        .chain(draw.d.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let l_tg = draw
        .a
        .iter()
        .map(|v| v * v)
        .chain(draw.b.iter().map(|v| v * v))
        .sum::<f64>()
        .sqrt();
    let tg_hi = {
        let mut sq = 0.0;
        for i in 0..l {
            let ra: f64 = (0..n).map(|j| draw.a[(i, j)].abs()).sum();
            let rb: f64 = (0..m).map(|j| draw.b[(i, j)].abs()).sum();
            let hi = draw.bt[i].abs() + ra + rb;
            sq += hi * hi;
        }
        sq.sqrt()
    };
    let dt_l1: f64 = draw.dt.iter().map(|v| v.abs()).sum();
    let dt_l2: f64 = draw.dt.norm();
    ConLinearInstance {
        version: INSTANCE_VERSION.to_string(),
        kind: KIND_CON.to_string(),
        n,
        m,
        l,
        seed,
        c: draw.c.clone(),
        d: draw.d.clone(),
        dt: draw.dt.iter().copied().collect(),
        bt: draw.bt.iter().copied().collect(),
        a_mat: draw.a.transpose().iter().copied().collect(),
        b_mat: draw.b.transpose().iter().copied().collect(),
        y_hat: draw.y_hat.iter().copied().collect(),
        x_lo: vec![-1.0; n],
        x_hi: vec![1.0; n],
        y_lo: vec![-1.0; m],
        y_hi: vec![1.0; m],
        constants: ConInstanceConstants {
            l_grad_f1: 0.0,
            l_grad_tf1: 0.0,
            d_x: 2.0 * (n as f64).sqrt(),
            d_y: 2.0 * (m as f64).sqrt(),
            f_low: -draw.c.iter().map(|v| v.abs()).sum::<f64>()
                - draw.d.iter().map(|v| v.abs()).sum::<f64>(),
            tf_hi: dt_l1,
            tf_low: -dt_l1,
            l_f: cd_norm,
            l_tf: dt_l2,
            l_grad_tg: 0.0,
            l_tg,
            tg_hi,
            slater_g,
        },
    }
}

/// Convenience: generate by kind string.
pub fn generate(kind: &str, n: usize, m: usize, l: usize, seed: u64) -> Result<Instance> {
    match kind {
        KIND_UNC => Ok(Instance::Unc(gen_unc_instance(n, m, seed)?)),
        KIND_CON => Ok(Instance::Con(gen_con_instance(n, m, l, seed)?)),
        other => Err(Error::invalid(format!("unknown instance kind {other:?}"))),
    }
}

//! Instance schema, JSON persistence, and problem builders.
//!
//! Matrices are stored as row-major arrays. JSON round-trips are lossless:
//! floats serialize with shortest-round-trip encoding, so reloading an
//! instance reproduces it bit-exactly.

use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use bipen_core::error::{Error, Result};
use bipen_core::math::{BoxSet, ProxTerm, Vector};
use bipen_core::problems::{
    ConBilevelProblem, ConConstants, SmoothOracle, UncBilevelProblem, UncConstants, VectorOracle,
};

pub const INSTANCE_VERSION: &str = "bipen-instance-v1";
pub const KIND_UNC: &str = "unc-linquad";
pub const KIND_CON: &str = "con-linear";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncInstanceConstants {
    pub l_grad_f1: f64,
    pub l_grad_tf1: f64,
    pub d_x: f64,
    pub d_y: f64,
    pub f_low: f64,
    pub tf_hi: f64,
    pub tf_low: f64,
}

/// Linear upper level `c'x + d'y` over a box, quadratic lower level
/// `x' A z + z' B z + dt' z` over a box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncLinQuadInstance {
    pub version: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub dt: Vec<f64>,
    /// n x m, row-major.
    pub a_mat: Vec<f64>,
    /// m x m, row-major, symmetric PSD.
    pub b_mat: Vec<f64>,
    pub x_lo: Vec<f64>,
    pub x_hi: Vec<f64>,
    pub y_lo: Vec<f64>,
    pub y_hi: Vec<f64>,
    pub constants: UncInstanceConstants,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConInstanceConstants {
    pub l_grad_f1: f64,
    pub l_grad_tf1: f64,
    pub d_x: f64,
    pub d_y: f64,
    pub f_low: f64,
    pub tf_hi: f64,
    pub tf_low: f64,
    pub l_f: f64,
    pub l_tf: f64,
    pub l_grad_tg: f64,
    pub l_tg: f64,
    pub tg_hi: f64,
    /// Certified uniform Slater margin; absent when no x-uniform strictly
    /// feasible point could be certified for this instance.
    pub slater_g: Option<f64>,
}

/// Linear upper and lower levels with affine lower-level constraints
/// `A x + B z - bt <= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConLinearInstance {
    pub version: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub seed: u64,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub dt: Vec<f64>,
    pub bt: Vec<f64>,
    /// l x n, row-major.
    pub a_mat: Vec<f64>,
    /// l x m, row-major.
    pub b_mat: Vec<f64>,
    /// The generator's feasible lower-level solution at x = 0.
    pub y_hat: Vec<f64>,
    pub x_lo: Vec<f64>,
    pub x_hi: Vec<f64>,
    pub y_lo: Vec<f64>,
    pub y_hi: Vec<f64>,
    pub constants: ConInstanceConstants,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Unc(UncLinQuadInstance),
    Con(ConLinearInstance),
}

pub fn save_instance(path: &Path, inst: &Instance) -> Result<()> {
    let json = match inst {
        Instance::Unc(i) => serde_json::to_string_pretty(i),
        Instance::Con(i) => serde_json::to_string_pretty(i),
    }
    .map_err(|e| Error::invalid(format!("serialize: {e}")))?;
    std::fs::write(path, json).map_err(|e| Error::invalid(format!("write {path:?}: {e}")))
}

#[derive(Deserialize)]
struct Probe {
    version: String,
    kind: String,
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("read {path:?}: {e}")))?;
    let probe: Probe =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("schema: {e}")))?;
    if probe.version != INSTANCE_VERSION {
        return Err(Error::invalid(format!(
            "schema: unsupported version tag {:?} (expected {INSTANCE_VERSION:?})",
            probe.version
        )));
    }
    match probe.kind.as_str() {
        KIND_UNC => {
            let i: UncLinQuadInstance =
                serde_json::from_str(&text).map_err(|e| Error::invalid(format!("schema: {e}")))?;
            Ok(Instance::Unc(i))
        }
        KIND_CON => {
            let i: ConLinearInstance =
                serde_json::from_str(&text).map_err(|e| Error::invalid(format!("schema: {e}")))?;
            Ok(Instance::Con(i))
        }
        other => Err(Error::invalid(format!("schema: unknown kind {other:?}"))),
    }
}

fn dvec(xs: &[f64]) -> Vector {
    DVector::from_row_slice(xs)
}

impl UncLinQuadInstance {
    pub fn a_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.m, &self.a_mat)
    }

    pub fn b_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.m, self.m, &self.b_mat)
    }

    pub fn to_problem(&self) -> Result<UncBilevelProblem> {
        let (n, m) = (self.n, self.m);
        let c = dvec(&self.c);
        let d = dvec(&self.d);
        let dt = Arc::new(dvec(&self.dt));
        let a = Arc::new(self.a_matrix());
        let two_b = Arc::new(self.b_matrix() * 2.0);
        let cd = bipen_core::math::concat(&c, &d);
        let cd2 = cd.clone();

        let f1 = SmoothOracle::new(
            n + m,
            self.constants.l_grad_f1,
            move |w| cd.dot(w),
            move |_| cd2.clone(),
        );
        let (a2, two_b2, dt2) = (a.clone(), two_b.clone(), dt.clone());
        let tf1 = SmoothOracle::new(
            n + m,
            self.constants.l_grad_tf1,
            move |w| {
                let x = w.rows(0, n);
                let z = w.rows(n, m);
                let az = &*a * z;
                x.dot(&az) + 0.5 * z.dot(&(&*two_b * z)) + dt.dot(&z)
            },
            move |w| {
                let x = w.rows(0, n).into_owned();
                let z = w.rows(n, m).into_owned();
                let gx = &*a2 * &z;
                let gz = a2.transpose() * &x + &*two_b2 * &z + &*dt2;
                bipen_core::math::concat(&gx, &gz)
            },
        );
        let xb = BoxSet::new(dvec(&self.x_lo), dvec(&self.x_hi))?;
        let yb = BoxSet::new(dvec(&self.y_lo), dvec(&self.y_hi))?;
        UncBilevelProblem::new(
            n,
            m,
            f1,
            ProxTerm::box_indicator(xb),
            tf1,
            ProxTerm::box_indicator(yb),
            UncConstants {
                d_x: self.constants.d_x,
                d_y: self.constants.d_y,
                f_low: self.constants.f_low,
                tf_hi: self.constants.tf_hi,
                tf_low: self.constants.tf_low,
            },
        )
    }
}

impl ConLinearInstance {
    pub fn a_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.l, self.n, &self.a_mat)
    }

    pub fn b_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.l, self.m, &self.b_mat)
    }

    pub fn to_problem(&self) -> Result<ConBilevelProblem> {
        let (n, m, l) = (self.n, self.m, self.l);
        let c = dvec(&self.c);
        let d = dvec(&self.d);
        let dt = Arc::new(dvec(&self.dt));
        let bt = Arc::new(dvec(&self.bt));
        let a = Arc::new(self.a_matrix());
        let b = Arc::new(self.b_matrix());
        let cd = bipen_core::math::concat(&c, &d);
        let cd2 = cd.clone();

        let f1 = SmoothOracle::new(
            n + m,
            self.constants.l_grad_f1,
            move |w| cd.dot(w),
            move |_| cd2.clone(),
        );
        let dt2 = dt.clone();
        let grad_tf = {
            let mut g = Vector::zeros(n + m);
            g.rows_mut(n, m).copy_from(&*dt);
            g
        };
        let tf1 = SmoothOracle::new(
            n + m,
            self.constants.l_grad_tf1,
            move |w| dt2.dot(&w.rows(n, m)),
            move |_| grad_tf.clone(),
        );
        // constant Jacobian [A B]
        let jac = {
            let mut j = DMatrix::zeros(l, n + m);
            j.view_mut((0, 0), (l, n)).copy_from(&*a);
            j.view_mut((0, n), (l, m)).copy_from(&*b);
            Arc::new(j)
        };
        let (a2, b2, bt2) = (a.clone(), b.clone(), bt.clone());
        let jac2 = jac.clone();
        let tg = VectorOracle::new(
            n + m,
            l,
            self.constants.l_grad_tg,
            self.constants.l_tg,
            move |w| {
                let x = w.rows(0, n).into_owned();
                let z = w.rows(n, m).into_owned();
                &*a2 * x + &*b2 * z - &*bt2
            },
            move |_| (*jac2).clone(),
        );
        let xb = BoxSet::new(dvec(&self.x_lo), dvec(&self.x_hi))?;
        let yb = BoxSet::new(dvec(&self.y_lo), dvec(&self.y_hi))?;
        let base = UncBilevelProblem::new(
            n,
            m,
            f1,
            ProxTerm::box_indicator(xb),
            tf1,
            ProxTerm::box_indicator(yb),
            UncConstants {
                d_x: self.constants.d_x,
                d_y: self.constants.d_y,
                f_low: self.constants.f_low,
                tf_hi: self.constants.tf_hi,
                tf_low: self.constants.tf_low,
            },
        )?;
        ConBilevelProblem::new(
            base,
            tg,
            ConConstants {
                l_grad_tg: self.constants.l_grad_tg,
                l_tg: self.constants.l_tg,
                tg_hi: self.constants.tg_hi,
                slater_g: self.constants.slater_g,
                l_f: self.constants.l_f,
                l_tf: self.constants.l_tf,
            },
        )
    }
}

/// Spectral norm of a symmetric operator by power iteration. The result is
/// inflated by a 1e-6 relative margin so the declared constant stays a
/// valid upper bound despite the iteration converging from below.
pub fn symmetric_spectral_norm(
    dim: usize,
    matvec: impl Fn(&Vector) -> Vector,
    tol: f64,
    max_iters: usize,
) -> f64 {
    let mut v = Vector::from_iterator(dim, (0..dim).map(|i| ((i * 2654435761 + 1) % 1000) as f64 / 1000.0 - 0.45));
    let nrm = v.norm();
    if nrm == 0.0 {
        v[0] = 1.0;
    } else {
        v /= nrm;
    }
    let mut lambda = 0.0f64;
    for _ in 0..max_iters {
        let w = matvec(&v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w).abs();
        let vn = w / nw;
        if (next - lambda).abs() <= tol * next.max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
        v = vn;
    }
    lambda * (1.0 + 1e-6)
}

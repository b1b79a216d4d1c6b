//! Dense vector primitives, box sets, and proximal terms.
//!
//! Everything downstream (penalty assembly, saddle solvers, certificates)
//! works with `f64` vectors, componentwise boxes, and prox-friendly
//! nonsmooth terms. Normal-cone distances are exact for boxes, which covers
//! every bundled experiment; general prox oracles get a surrogate residual
//! at the certificate layer instead.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Membership tolerance for box containment checks. Prox chains introduce
/// rounding at this scale; anything beyond it is a genuine violation.
pub const BOX_TOL: f64 = 1e-12;

pub type Vector = DVector<f64>;

/// Stack two vectors `(u; v)`.
pub fn concat(u: &Vector, v: &Vector) -> Vector {
    Vector::from_iterator(u.len() + v.len(), u.iter().chain(v.iter()).copied())
}

/// Split a stacked vector into its first `n` and remaining entries.
pub fn split(w: &Vector, n: usize) -> (Vector, Vector) {
    (w.rows(0, n).into_owned(), w.rows(n, w.len() - n).into_owned())
}

pub fn all_finite(v: &Vector) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Componentwise nonnegative part `(v_+)_i = max(v_i, 0)`.
pub fn plus_part(v: &Vector) -> Vector {
    v.map(|x| x.max(0.0))
}

/// A compact box `{ x : lo <= x <= hi }` with finite bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    lo: Vector,
    hi: Vector,
}

impl BoxSet {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if !all_finite(&lo) || !all_finite(&hi) {
            return Err(Error::NonFinite { what: "box bounds".into() });
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::invalid("box requires lo <= hi componentwise"));
        }
        Ok(BoxSet { lo, hi })
    }

    /// The symmetric box `[-r, r]^dim`.
    pub fn symmetric(dim: usize, r: f64) -> Self {
        BoxSet { lo: Vector::from_element(dim, -r), hi: Vector::from_element(dim, r) }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &Vector {
        &self.lo
    }

    pub fn hi(&self) -> &Vector {
        &self.hi
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(xi, (l, h))| *xi >= l - BOX_TOL && *xi <= h + BOX_TOL)
    }

    /// Euclidean diameter `||hi - lo||`.
    pub fn diameter(&self) -> f64 {
        (&self.hi - &self.lo).norm()
    }

    pub fn center(&self) -> Vector {
        (&self.lo + &self.hi) * 0.5
    }

    /// Componentwise clamp, which is the proximal operator of the indicator.
    pub fn clamp(&self, x: &Vector) -> Vector {
        Vector::from_iterator(
            self.dim(),
            x.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .map(|(xi, (l, h))| xi.max(*l).min(*h)),
        )
    }

    /// Concatenate two boxes into the box of the product set.
    pub fn stack(&self, other: &BoxSet) -> BoxSet {
        BoxSet { lo: concat(&self.lo, &other.lo), hi: concat(&self.hi, &other.hi) }
    }

    /// Exact distance from `0` to `g + N(x)` where `N` is the normal cone of
    /// the box at `x`. Coordinates at a degenerate bound (`lo == hi`)
    /// contribute nothing: the normal cone there is the whole line.
    pub fn normal_cone_distance(&self, x: &Vector, g: &Vector) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if g.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: g.len() });
        }
        if !self.contains(x) {
            return Err(Error::out_of_domain("normal_cone_distance: point not in box"));
        }
        let mut sq = 0.0;
        for i in 0..self.dim() {
            let (l, h, xi, gi) = (self.lo[i], self.hi[i], x[i], g[i]);
            let at_lo = xi <= l + BOX_TOL;
            let at_hi = xi >= h - BOX_TOL;
            let c = if at_lo && at_hi {
                0.0
            } else if at_lo {
                // N = (-inf, 0]; a nonpositive normal can cancel any g >= 0
                (-gi).max(0.0)
            } else if at_hi {
                gi.max(0.0)
            } else {
                gi.abs()
            };
            sq += c * c;
        }
        Ok(sq.sqrt())
    }
}

/// Euclidean diameter of a box domain.
pub fn domain_diameter(b: &BoxSet) -> f64 {
    b.diameter()
}

/// `prox_{step * indicator}(point)`, i.e. the clamp; `step` is irrelevant for
/// indicator terms but kept for interface symmetry.
pub fn prox_box(point: &Vector, b: &BoxSet, _step: f64) -> Result<Vector> {
    if point.len() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: point.len() });
    }
    Ok(b.clamp(point))
}

/// User-supplied prox oracle over a declared compact domain.
pub struct CustomProx {
    pub dim: usize,
    pub diameter: f64,
    /// Evaluates `prox_{step * term}(point)`; output must lie in the domain.
    pub prox: Box<dyn Fn(&Vector, f64) -> Vector + Send + Sync>,
    /// Function value; returns `None` outside the domain.
    pub value: Box<dyn Fn(&Vector) -> Option<f64> + Send + Sync>,
}

impl std::fmt::Debug for CustomProx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CustomProx")
            .field("dim", &self.dim)
            .field("diameter", &self.diameter)
            .finish()
    }
}

/// A proper closed convex term with exactly computable prox and compact
/// domain. Box indicators admit exact normal-cone arithmetic; scaled and
/// stacked combinations arise from the penalty assembly.
#[derive(Clone, Debug)]
pub enum ProxTerm {
    BoxIndicator(BoxSet),
    Scaled { weight: f64, inner: Box<ProxTerm> },
    Stacked(Vec<ProxTerm>),
    Custom(Arc<CustomProx>),
}

impl ProxTerm {
    pub fn box_indicator(b: BoxSet) -> Self {
        ProxTerm::BoxIndicator(b)
    }

    /// `weight * term`. Indicators are invariant under positive scaling, so
    /// the wrapper collapses for boxes.
    pub fn scaled(weight: f64, term: ProxTerm) -> Self {
        match term {
            ProxTerm::BoxIndicator(b) => ProxTerm::BoxIndicator(b),
            other => ProxTerm::Scaled { weight, inner: Box::new(other) },
        }
    }

    /// Separable sum over consecutive coordinate blocks. All-box stacks fold
    /// into a single box indicator.
    pub fn stacked(terms: Vec<ProxTerm>) -> Self {
        if terms.len() == 1 {
            return terms.into_iter().next().unwrap();
        }
        if terms.iter().all(|t| matches!(t, ProxTerm::BoxIndicator(_))) {
            let mut it = terms.into_iter();
            let first = match it.next().unwrap() {
                ProxTerm::BoxIndicator(b) => b,
                _ => unreachable!(),
            };
            let folded = it.fold(first, |acc, t| match t {
                ProxTerm::BoxIndicator(b) => acc.stack(&b),
                _ => unreachable!(),
            });
            return ProxTerm::BoxIndicator(folded);
        }
        ProxTerm::Stacked(terms)
    }

    pub fn dim(&self) -> usize {
        match self {
            ProxTerm::BoxIndicator(b) => b.dim(),
            ProxTerm::Scaled { inner, .. } => inner.dim(),
            ProxTerm::Stacked(ts) => ts.iter().map(|t| t.dim()).sum(),
            ProxTerm::Custom(c) => c.dim,
        }
    }

    /// Diameter of the domain. Product domains use the Euclidean combination.
    pub fn diameter(&self) -> f64 {
        match self {
            ProxTerm::BoxIndicator(b) => b.diameter(),
            ProxTerm::Scaled { inner, .. } => inner.diameter(),
            ProxTerm::Stacked(ts) => ts.iter().map(|t| t.diameter().powi(2)).sum::<f64>().sqrt(),
            ProxTerm::Custom(c) => c.diameter,
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            ProxTerm::BoxIndicator(b) => b.contains(x),
            ProxTerm::Scaled { inner, .. } => inner.contains(x),
            ProxTerm::Stacked(ts) => {
                let mut off = 0;
                ts.iter().all(|t| {
                    let seg = x.rows(off, t.dim()).into_owned();
                    off += t.dim();
                    t.contains(&seg)
                })
            }
            ProxTerm::Custom(c) => (c.value)(x).is_some(),
        }
    }

    /// `prox_{step * term}(point)`.
    pub fn prox(&self, point: &Vector, step: f64) -> Vector {
        match self {
            ProxTerm::BoxIndicator(b) => b.clamp(point),
            ProxTerm::Scaled { weight, inner } => inner.prox(point, step * weight),
            ProxTerm::Stacked(ts) => {
                let mut out = Vector::zeros(point.len());
                let mut off = 0;
                for t in ts {
                    let seg = point.rows(off, t.dim()).into_owned();
                    out.rows_mut(off, t.dim()).copy_from(&t.prox(&seg, step));
                    off += t.dim();
                }
                out
            }
            ProxTerm::Custom(c) => (c.prox)(point, step),
        }
    }

    /// Term value at `point`; `OutOfDomain` outside the domain. Indicator
    /// terms are identically zero on their domain.
    pub fn value(&self, point: &Vector) -> Result<f64> {
        match self {
            ProxTerm::BoxIndicator(b) => {
                if b.contains(point) {
                    Ok(0.0)
                } else {
                    Err(Error::out_of_domain("point outside box domain"))
                }
            }
            ProxTerm::Scaled { weight, inner } => Ok(weight * inner.value(point)?),
            ProxTerm::Stacked(ts) => {
                let mut acc = 0.0;
                let mut off = 0;
                for t in ts {
                    let seg = point.rows(off, t.dim()).into_owned();
                    acc += t.value(&seg)?;
                    off += t.dim();
                }
                Ok(acc)
            }
            ProxTerm::Custom(c) => {
                (c.value)(point).ok_or_else(|| Error::out_of_domain("custom prox domain"))
            }
        }
    }

    /// Resolve the term to a box when it is (a stack of) indicators. Positive
    /// scaling does not change an indicator's normal cones, so `Scaled` over
    /// boxes resolves too.
    pub fn as_box(&self) -> Option<BoxSet> {
        match self {
            ProxTerm::BoxIndicator(b) => Some(b.clone()),
            ProxTerm::Scaled { inner, .. } => inner.as_box(),
            ProxTerm::Stacked(ts) => {
                let mut acc: Option<BoxSet> = None;
                for t in ts {
                    let b = t.as_box()?;
                    acc = Some(match acc {
                        None => b,
                        Some(a) => a.stack(&b),
                    });
                }
                acc
            }
            ProxTerm::Custom(_) => None,
        }
    }

    /// Exact `dist(0, g + N_dom(x))`; errors for non-box terms.
    pub fn normal_cone_distance(&self, x: &Vector, g: &Vector) -> Result<f64> {
        match self.as_box() {
            Some(b) => b.normal_cone_distance(x, g),
            None => Err(Error::NotABox { what: "normal_cone_distance".into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn prox_box_clamps() {
        let b = BoxSet::symmetric(1, 1.0);
        assert_eq!(prox_box(&v(&[2.0]), &b, 1.0).unwrap(), v(&[1.0]));
        let b2 = BoxSet::symmetric(2, 1.0);
        assert_eq!(prox_box(&v(&[0.5, -3.0]), &b2, 0.3).unwrap(), v(&[0.5, -1.0]));
        // identity case, independent of step
        for step in [1e-6, 1.0, 1e6] {
            assert_eq!(prox_box(&v(&[0.0]), &b, step).unwrap(), v(&[0.0]));
        }
    }

    #[test]
    fn prox_box_rejects_dim_mismatch() {
        let b = BoxSet::symmetric(2, 1.0);
        assert!(prox_box(&v(&[0.0]), &b, 1.0).is_err());
    }

    #[test]
    fn plus_part_examples() {
        assert_eq!(plus_part(&v(&[1.0, -2.0, 0.0])), v(&[1.0, 0.0, 0.0]));
        assert_eq!(plus_part(&v(&[-3.0, -0.1])), v(&[0.0, 0.0]));
        let w = v(&[0.5, 2.0, 0.0]);
        assert_eq!(plus_part(&w), w);
    }

    #[test]
    fn normal_cone_distance_examples() {
        let b = BoxSet::symmetric(2, 1.0);
        // interior point, nothing cancels
        let d = b.normal_cone_distance(&v(&[0.0, 0.0]), &v(&[1.0, 1.0])).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let b1 = BoxSet::symmetric(1, 1.0);
        // at the lower bound a normal nu = -1 cancels g = 1
        assert_eq!(b1.normal_cone_distance(&v(&[-1.0]), &v(&[1.0])).unwrap(), 0.0);
        // at the upper bound N = [0, inf) cannot cancel positive g
        assert_eq!(b1.normal_cone_distance(&v(&[1.0]), &v(&[1.0])).unwrap(), 1.0);
    }

    #[test]
    fn normal_cone_distance_degenerate_and_outside() {
        let b = BoxSet::new(v(&[0.5]), v(&[0.5])).unwrap();
        assert_eq!(b.normal_cone_distance(&v(&[0.5]), &v(&[7.0])).unwrap(), 0.0);
        let b1 = BoxSet::symmetric(1, 1.0);
        assert!(b1.normal_cone_distance(&v(&[1.1]), &v(&[0.0])).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(domain_diameter(&BoxSet::symmetric(1, 1.0)), 2.0);
        assert_eq!(domain_diameter(&BoxSet::symmetric(100, 1.0)), 20.0);
        let b = BoxSet::new(v(&[0.3, -1.0]), v(&[0.3, -1.0])).unwrap();
        assert_eq!(domain_diameter(&b), 0.0);
    }

    #[test]
    fn stacked_boxes_fold() {
        let p = ProxTerm::stacked(vec![
            ProxTerm::box_indicator(BoxSet::symmetric(2, 1.0)),
            ProxTerm::scaled(10.0, ProxTerm::box_indicator(BoxSet::symmetric(3, 1.0))),
        ]);
        assert!(matches!(p, ProxTerm::BoxIndicator(_)));
        assert_eq!(p.dim(), 5);
        let expect = (4.0f64 + 4.0 + 4.0 + 4.0 + 4.0).sqrt();
        assert!((p.diameter() - expect).abs() < 1e-15);
    }

    /// Exhaustively samples normal-cone directions on small boxes and checks
    /// the closed-form distance against the sampled minimum of ||g + nu||.
    #[test]
    fn normal_cone_distance_matches_sampling_oracle() {
        let cases: Vec<(BoxSet, Vec<f64>, Vec<f64>)> = vec![
            (BoxSet::symmetric(1, 1.0), vec![-1.0], vec![0.7]),
            (BoxSet::symmetric(1, 1.0), vec![1.0], vec![-0.3]),
            (BoxSet::symmetric(2, 1.0), vec![-1.0, 0.2], vec![0.5, -0.8]),
            (BoxSet::symmetric(3, 1.0), vec![1.0, -1.0, 0.0], vec![1.5, 1.5, -2.0]),
        ];
        for (b, x, g) in cases {
            let x = v(&x);
            let g = v(&g);
            let exact = b.normal_cone_distance(&x, &g).unwrap();
            // sample nu over a dense grid of the cone, coordinatewise
            let mut best = f64::INFINITY;
            let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 0.05).collect();
            let n = b.dim();
            let mut idx = vec![0usize; n];
            loop {
                let mut sq = 0.0;
                for i in 0..n {
                    let t = grid[idx[i]];
                    let nu = if x[i] <= b.lo()[i] + BOX_TOL {
                        -t
                    } else if x[i] >= b.hi()[i] - BOX_TOL {
                        t
                    } else {
                        0.0
                    };
                    sq += (g[i] + nu).powi(2);
                }
                best = best.min(sq.sqrt());
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < grid.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            assert!(
                (exact - best).abs() < 1e-6,
                "exact {exact} vs sampled {best} on x={x:?} g={g:?}"
            );
        }
    }
}

//! Quantitative obstruction to norm-one holomorphic lifts on the annulus:
//! the twist constant `M`, a disc covering of the deck path, the resulting
//! lower bound `1 + eps*` on lift norms, and a numerical lift search that
//! probes the bound from above.

mod optimize;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use optimize::{minimize_lift_norm, OptimizeParams, OptimizeResult, TraceRow};

use crate::context::{Lift, LiftTarget, MoritaContext, LIFT_RESIDUAL_TOL};
use crate::equivariant::{EquivariantMatrix, UnitaryTwist};
use crate::error::{Error, Result};
use crate::function_core::{Domain, GridLayout, DEFAULT_RADIAL, DEFAULT_SAMPLES};

pub const DEFAULT_SAFETY: f64 = 0.9;
/// Slack allowed when comparing a lift norm against `1 + eps*`.
pub const CONSISTENCY_TOL: f64 = 1e-9;
const CURVE_POINTS: usize = 41;

/// `M = ||(I - U)^{-1}|| = max_j 1 / (2 sin(pi theta_j))`.
pub fn twist_constant_m(twist: &UnitaryTwist) -> Result<f64> {
    if let Some(j) = twist.eigenvalue_one() {
        return Err(Error::EigenvalueOne(j));
    }
    Ok(twist.thetas().iter().map(|&t| 1.0 / (2.0 * (PI * t).sin())).fold(0.0, f64::max))
}

/// Equal-spacing covering of the deck path `-beta/2 + i[0, 2 pi]` on the
/// strip by discs of radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub r: f64,
    pub k: u64,
    pub spacing: f64,
    /// Distance from the boundary of a disc around a midpoint to the
    /// neighbouring centers.
    #[serde(rename = "L")]
    pub l: f64,
}

pub fn covering_constants(domain: Domain, safety: f64) -> Result<Covering> {
    let beta = domain.beta().ok_or_else(|| Error::DomainMismatch("covering constants need an annulus".into()))?;
    if !(safety > 0.0 && safety < 1.0) {
        return Err(Error::InvalidParameter(format!("safety {safety} outside (0, 1)")));
    }
    let r = safety * beta / 2.0;
    let k = (4.0 * PI / (3.0 * r)).ceil();
    if !k.is_finite() || k < 1.0 {
        return Err(Error::DegenerateGeometry(format!("k = {k}")));
    }
    let spacing = 2.0 * PI / k;
    let l = r - spacing / 2.0;
    if !(l > 0.0) {
        return Err(Error::DegenerateGeometry(format!("L = {l}")));
    }
    Ok(Covering { r, k: k as u64, spacing, l })
}

/// Slope `M (2k - 1) / (2 pi L)` of the upper estimate.
pub fn estimate_slope(m: f64, k: u64, l: f64) -> f64 {
    m * (2.0 * k as f64 - 1.0) / (2.0 * PI * l)
}

/// `q(eps) = sqrt(2 eps (2 + eps))`.
pub fn defect_scale(eps: f64) -> f64 {
    (2.0 * eps * (2.0 + eps)).sqrt()
}

/// Unique positive root of `1 / (1 + eps) = c sqrt(2 eps (2 + eps))`,
/// `c = M (2k - 1) / (2 pi L)`, by bisection carried to full precision.
pub fn epsilon_lower_bound(m: f64, k: u64, l: f64) -> Result<f64> {
    if !(m > 0.0 && l > 0.0 && m.is_finite() && l.is_finite()) || k == 0 {
        return Err(Error::InvalidParameter(format!("M = {m}, k = {k}, L = {l}")));
    }
    let c = estimate_slope(m, k, l);
    let g = |e: f64| 1.0 / (1.0 + e) - c * defect_scale(e);
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    while g(hi) > 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidParameter("no crossing".into()));
        }
    }
    for _ in 0..4096 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick the endpoint with the smaller residual; lo keeps eps* > 0.
    Ok(if lo > 0.0 && g(lo).abs() <= g(hi).abs() { lo } else { hi })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub eps: f64,
    pub defect: f64,
    /// `sqrt(2 eps (2 + eps))`
    pub bound: f64,
    pub violated: bool,
}

/// Sup norm of `G - F*` with `G = (y_1, ..., y_k)`, `F = (x_1, ..., x_k)^t`.
/// For lifts with both norms at most `1 + eps` it is at most
/// `sqrt(2 eps (2 + eps))`.
pub fn defect(ctx: &MoritaContext, lift: &Lift, eps: f64) -> Result<DefectReport> {
    if lift.target != LiftTarget::UnitB {
        return Err(Error::InvalidParameter("defect is defined for lifts of 1_B".into()));
    }
    let rep = ctx.verify_lift(lift, crate::context::SYMMETRY_TOL)?;
    if !(rep.residual <= LIFT_RESIDUAL_TOL) {
        return Err(Error::BadLift(rep.residual));
    }
    let bound = 1.0 + eps;
    if rep.row_norm > bound + CONSISTENCY_TOL || rep.col_norm > bound + CONSISTENCY_TOL {
        return Err(Error::NormPreconditionFailed { row: rep.row_norm, col: rep.col_norm, bound });
    }
    let g = lift.row()?;
    let f = lift.column()?;
    let layout = match g.layout().or_else(|| f.layout()) {
        Some(l) => l,
        None => GridLayout::new(ctx.domain(), DEFAULT_SAMPLES, DEFAULT_RADIAL)?,
    };
    let diff = g.to_grid(&layout)?.sub(&f.adjoint_on(&layout)?)?;
    let d = diff.sup_norm(DEFAULT_SAMPLES, 0.0);
    let q = defect_scale(eps);
    Ok(DefectReport { eps, defect: d, bound: q, violated: d * d > q * q + CONSISTENCY_TOL })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub beta: f64,
    pub thetas: Vec<f64>,
    pub safety: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub r: f64,
    pub k: u64,
    pub spacing: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub slope: f64,
    pub epsilon_star: f64,
    /// Bound `1 + eps*` every holomorphic lift norm must meet.
    pub lift_norm_bound: f64,
    /// `(eps, c sqrt(2 eps (2 + eps)))` on `[0, 4 eps*]`.
    pub bound_curve: Vec<[f64; 2]>,
    pub best_lift_norm: Option<f64>,
    pub consistent: bool,
}

impl ObstructionReport {
    pub fn new(domain: Domain, twist: &UnitaryTwist, safety: f64) -> Result<Self> {
        let beta = domain.beta().ok_or_else(|| Error::DomainMismatch("the obstruction lives on the annulus".into()))?;
        let m = twist_constant_m(twist)?;
        let cov = covering_constants(domain, safety)?;
        let eps = epsilon_lower_bound(m, cov.k, cov.l)?;
        let slope = estimate_slope(m, cov.k, cov.l);
        let bound_curve = (0..CURVE_POINTS)
            .map(|i| {
                let e = 4.0 * eps * i as f64 / (CURVE_POINTS - 1) as f64;
                [e, slope * defect_scale(e)]
            })
            .collect();
        Ok(ObstructionReport {
            beta,
            thetas: twist.thetas().to_vec(),
            safety,
            m,
            r: cov.r,
            k: cov.k,
            spacing: cov.spacing,
            l: cov.l,
            slope,
            epsilon_star: eps,
            lift_norm_bound: 1.0 + eps,
            bound_curve,
            best_lift_norm: None,
            consistent: true,
        })
    }

    /// Records a holomorphic lift norm and re-evaluates consistency.
    pub fn observe(&mut self, lift_norm: f64) {
        let best = self.best_lift_norm.map_or(lift_norm, |b| b.min(lift_norm));
        self.best_lift_norm = Some(best);
        self.consistent = best >= self.lift_norm_bound - CONSISTENCY_TOL;
    }
}

/// The norm of the frame-balanced pair, for reference: `max(row, col)` of the
/// balanced frame lift equals `sqrt(||F|| ||F^-1||)`.
pub fn frame_norm(domain: Domain, twist: &UnitaryTwist) -> Result<f64> {
    let frame = crate::context::holomorphic_frame(twist, domain)?;
    let a = sup(&frame.f);
    let b = sup(&frame.f_inv);
    Ok((a * b).sqrt())
}

fn sup(m: &EquivariantMatrix) -> f64 {
    m.sup_norm(DEFAULT_SAMPLES, crate::function_core::DEFAULT_REFINE_TOL)
}

//! Corner construction behind the similarity theorem: the idempotent
//! `P = ((x_i, y_j))`, its Kaplansky projection `Q`, the corner maps and the
//! resulting bound on `||S||^2`.

use serde::{Deserialize, Serialize};

use crate::context::{Lift, LiftTarget, MoritaContext, LIFT_RESIDUAL_TOL};
use crate::equivariant::{EquivariantMatrix, Space};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::function_core::{GridLayout, DEFAULT_REFINE_TOL, DEFAULT_SAMPLES};
use crate::linalg::{inverse, spectral_norm, CMat};
use crate::random::ElementSampler;

/// Corner-membership tolerance for the corner maps.
pub const CORNER_TOL: f64 = 1e-9;
/// Largest condition number accepted for the Kaplansky correction.
pub const MAX_CORRECTION_COND: f64 = 1e12;
/// Angular samples and interior circles of the grid carrying `Q`.
pub const Q_SAMPLES: usize = 512;
pub const Q_RADIAL: usize = 9;
/// Completely bounded constant of the pairing quotient map.
pub const C_CONSTANT: f64 = 1.0;
/// Completely bounded constant of the module multiplication.
pub const K_CONSTANT: f64 = 1.0;

fn sup(m: &EquivariantMatrix) -> f64 {
    m.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL)
}

fn ensure_lift(ctx: &MoritaContext, lift: &Lift) -> Result<()> {
    if lift.target != LiftTarget::UnitB {
        return Err(Error::InvalidParameter("corner maps need a lift of 1_B".into()));
    }
    let residual = ctx.verify_lift(lift, crate::context::SYMMETRY_TOL)?.residual;
    if !(residual <= LIFT_RESIDUAL_TOL) {
        return Err(Error::BadLift(residual));
    }
    Ok(())
}

/// `F = (x_1; ...; x_k)` (k x n) and `G = (y_1, ..., y_k)` (n x k).
fn frame_blocks(lift: &Lift) -> Result<(EquivariantMatrix, EquivariantMatrix)> {
    Ok((EquivariantMatrix::vstack(&lift.xs)?, EquivariantMatrix::hstack(&lift.ys)?))
}

/// `P = ((x_i, y_j))_{i,j}`, idempotent because `G F = 1_B`.
pub fn build_idempotent(ctx: &MoritaContext, lift: &Lift) -> Result<EquivariantMatrix> {
    ensure_lift(ctx, lift)?;
    let (f, g) = frame_blocks(lift)?;
    Ok(f.mul(&g)?.scale(ctx.pairings().a_scale))
}

/// `Q = P P* (1 + (P - P*)(P* - P))^{-1}` for a constant matrix.
pub fn kaplansky_constant(p: &CMat) -> Result<CMat> {
    let ps = p.adjoint();
    let d = p - &ps;
    let corr = CMat::identity(p.nrows(), p.ncols()) + &d * d.adjoint();
    let inv = inverse(&corr).ok_or(Error::SingularCorrection(f64::INFINITY))?;
    let cond = spectral_norm(&corr) * spectral_norm(&inv);
    if !(cond <= MAX_CORRECTION_COND) {
        return Err(Error::SingularCorrection(cond));
    }
    Ok(p * ps * inv)
}

/// Pointwise Kaplansky projection on `P`'s own grid, or on the default
/// grid when `P` is holomorphic.
pub fn kaplansky_projection(p: &EquivariantMatrix) -> Result<EquivariantMatrix> {
    let layout = match p.layout() {
        Some(l) => l,
        None => GridLayout::new(p.domain(), Q_SAMPLES, Q_RADIAL)?,
    };
    kaplansky_projection_on(p, &layout, Exec::default())
}

pub fn kaplansky_projection_on(p: &EquivariantMatrix, layout: &GridLayout, exec: Exec) -> Result<EquivariantMatrix> {
    if p.rows() != p.cols() {
        return Err(Error::ShapeMismatch("projection of a non-square matrix".into()));
    }
    let g = p.to_grid(layout)?;
    let samples = g.samples().expect("grid matrix");
    let q = exec.map(samples.len(), |k| kaplansky_constant(&samples[k]));
    let q = q.into_iter().collect::<Result<Vec<_>>>()?;
    EquivariantMatrix::from_samples(layout, p.left_weights().to_vec(), p.right_weights().to_vec(), &q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `x -> x P` from the `Q`-corner to the `P`-corner.
    Forward,
    /// `x -> x Q` from the `P`-corner to the `Q`-corner.
    Backward,
}

fn corner_defect(x: &EquivariantMatrix, e: &EquivariantMatrix) -> Result<f64> {
    Ok(sup(&e.mul(x)?.mul(e)?.sub(x)?))
}

/// `phi(x) = x P` (forward) or `phi^{-1}(x) = x Q` (backward).
pub fn corner_phi(x: &EquivariantMatrix, p: &EquivariantMatrix, q: &EquivariantMatrix, direction: Direction) -> Result<EquivariantMatrix> {
    let (source, target) = match direction {
        Direction::Forward => (q, p),
        Direction::Backward => (p, q),
    };
    let d = corner_defect(x, source)?;
    if !(d <= CORNER_TOL) {
        return Err(Error::NotInCorner(d));
    }
    x.mul(target)
}

/// `f(b) = ((x_i, b y_j))_{i,j} = F b G`.
pub fn map_f(ctx: &MoritaContext, b: &EquivariantMatrix, lift: &Lift) -> Result<EquivariantMatrix> {
    ensure_lift(ctx, lift)?;
    if !b.is_in(Space::B, ctx.twist()) {
        return Err(Error::WeightMismatch("f is defined on B".into()));
    }
    let (f, g) = frame_blocks(lift)?;
    Ok(f.mul(b)?.mul(&g)?.scale(ctx.pairings().a_scale))
}

/// `f^{-1}(m) = sum_{j,l} [y_j m_{jl}, x_l] = G m F` on the `P`-corner.
pub fn map_f_inv(ctx: &MoritaContext, m: &EquivariantMatrix, lift: &Lift) -> Result<EquivariantMatrix> {
    let p = build_idempotent(ctx, lift)?;
    let d = corner_defect(m, &p)?;
    if !(d <= CORNER_TOL) {
        return Err(Error::NotInCorner(d));
    }
    let (f, g) = frame_blocks(lift)?;
    Ok(g.mul(m)?.mul(&f)?.scale(ctx.pairings().b_scale))
}

/// `||Q|| C K ||(x_i)^t|| ||(y_i)||`, the computed upper bound for
/// `||S||^2 = ||S^{-1}||^2`.
pub fn similarity_bound(ctx: &MoritaContext, lift: &Lift, q: &EquivariantMatrix) -> Result<f64> {
    let rep = ctx.verify_lift(lift, crate::context::SYMMETRY_TOL)?;
    Ok(sup(q) * C_CONSTANT * K_CONSTANT * rep.col_norm * rep.row_norm)
}

/// Corner identities, sup norms of the differences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QResiduals {
    pub self_adjoint: f64,
    pub idempotent: f64,
    pub pq_minus_q: f64,
    pub qp_minus_p: f64,
}

impl QResiduals {
    pub fn max(&self) -> f64 {
        self.self_adjoint.max(self.idempotent).max(self.pq_minus_q).max(self.qp_minus_p)
    }
}

/// `P`, `Q` and the bound for one lift.
#[derive(Clone, Debug)]
pub struct CornerData {
    pub p: EquivariantMatrix,
    pub q: EquivariantMatrix,
    pub lift: Lift,
    pub bound: f64,
}

impl CornerData {
    pub fn build(ctx: &MoritaContext, lift: &Lift) -> Result<Self> {
        let p = build_idempotent(ctx, lift)?;
        let q = kaplansky_projection(&p)?;
        let bound = similarity_bound(ctx, lift, &q)?;
        Ok(CornerData { p, q, lift: lift.clone(), bound })
    }

    pub fn p_idempotent_residual(&self) -> Result<f64> {
        Ok(sup(&self.p.mul(&self.p)?.sub(&self.p)?))
    }

    pub fn q_residuals(&self) -> Result<QResiduals> {
        let (p, q) = (&self.p, &self.q);
        let layout = q.layout().expect("Q is a grid matrix");
        Ok(QResiduals {
            self_adjoint: sup(&q.sub(&q.adjoint_on(&layout)?)?),
            idempotent: sup(&q.mul(q)?.sub(q)?),
            pq_minus_q: sup(&p.mul(q)?.sub(q)?),
            qp_minus_p: sup(&q.mul(p)?.sub(&p.to_grid(&layout)?)?),
        })
    }

    /// Largest holomorphic-membership defect over the entries of `Q`.
    pub fn q_holomorphic_defect(&self) -> f64 {
        match self.q.entries() {
            crate::equivariant::Entries::Grid(e) => e.iter().map(|g| g.holomorphic_defect()).fold(0.0, f64::max),
            crate::equivariant::Entries::Holomorphic(_) => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub terms: usize,
    pub p_idem_residual: f64,
    pub q_residuals: QResiduals,
    pub f_unit_residual: f64,
    pub f_mult_residual: f64,
    pub f_round_trip_residual: f64,
    pub f_inv_round_trip_residual: f64,
    pub phi_round_trip_residual: f64,
    pub row_norm: f64,
    pub col_norm: f64,
    pub q_norm: f64,
    pub q_in_algebra: Option<bool>,
    pub similarity_bound: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub notes: Vec<String>,
}

impl SimilarityReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.p_idem_residual,
            self.q_residuals.max(),
            self.f_unit_residual,
            self.f_mult_residual,
            self.f_round_trip_residual,
            self.f_inv_round_trip_residual,
            self.phi_round_trip_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Runs the full corner pipeline for the registered lift of `1_B` and
/// checks the map identities on `trials` random elements.
pub fn similarity_report(ctx: &MoritaContext, lift: &Lift, trials: usize, seed: u64) -> Result<SimilarityReport> {
    let data = CornerData::build(ctx, lift)?;
    let rep = ctx.verify_lift(lift, crate::context::SYMMETRY_TOL)?;
    let unit = ctx.unit_b()?;
    let f_unit_residual = sup(&map_f(ctx, &unit, lift)?.sub(&data.p)?);

    let mut sampler = ElementSampler::new(seed);
    let (mut mult, mut rt, mut inv_rt, mut phi_rt) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let layout = data.q.layout().expect("Q is a grid matrix");
    for _ in 0..trials {
        let b1 = sampler.element(Space::B, ctx.twist(), ctx.domain())?;
        let b2 = sampler.element(Space::B, ctx.twist(), ctx.domain())?;
        let f1 = map_f(ctx, &b1, lift)?;
        let f2 = map_f(ctx, &b2, lift)?;
        mult = mult.max(sup(&map_f(ctx, &b1.mul(&b2)?, lift)?.sub(&f1.mul(&f2)?)?));
        inv_rt = inv_rt.max(sup(&map_f_inv(ctx, &f1, lift)?.sub(&b1)?));

        let a = sampler.matrix(ctx.domain(), vec![0.0; lift.terms()], vec![0.0; lift.terms()])?;
        let m = data.p.mul(&a)?.mul(&data.p)?;
        rt = rt.max(sup(&map_f(ctx, &map_f_inv(ctx, &m, lift)?, lift)?.sub(&m)?));

        let x = data.q.mul(&a.to_grid(&layout)?)?.mul(&data.q)?;
        let back = corner_phi(&corner_phi(&x, &data.p, &data.q, Direction::Forward)?, &data.p, &data.q, Direction::Backward)?;
        phi_rt = phi_rt.max(sup(&back.sub(&x)?));
    }

    let symmetric = ctx.is_symmetric_lift(lift, crate::context::SYMMETRY_TOL)?;
    let q_in_algebra = symmetric.then(|| data.q_holomorphic_defect() <= crate::context::SYMMETRY_TOL);
    let mut notes = vec![
        "Q = P P* (1 + (P - P*)(P* - P))^-1 (correction term inverted)".to_string(),
        format!("C = {C_CONSTANT}, K = {K_CONSTANT} are fixed by pointwise multiplication"),
    ];
    if ctx.pairings() != crate::context::Pairings::default() {
        notes.push("pairings are rescaled; identities are not expected to hold".into());
    }
    Ok(SimilarityReport {
        terms: lift.terms(),
        p_idem_residual: data.p_idempotent_residual()?,
        q_residuals: data.q_residuals()?,
        f_unit_residual,
        f_mult_residual: mult,
        f_round_trip_residual: rt,
        f_inv_round_trip_residual: inv_rt,
        phi_round_trip_residual: phi_rt,
        row_norm: rep.row_norm,
        col_norm: rep.col_norm,
        q_norm: sup(&data.q),
        q_in_algebra,
        similarity_bound: data.bound,
        c: C_CONSTANT,
        k: K_CONSTANT,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mat(rows: usize, cols: usize, v: &[f64]) -> CMat {
        DMatrix::from_row_iterator(rows, cols, v.iter().map(|&x| c(x)))
    }

    /// Orthogonal projection onto the column space, via SVD.
    fn range_projection(p: &CMat) -> CMat {
        let svd = p.clone().svd(true, false);
        let u = svd.u.unwrap();
        let mut out = CMat::zeros(p.nrows(), p.nrows());
        for (j, s) in svd.singular_values.iter().enumerate() {
            if *s > 1e-10 {
                let col = u.column(j);
                out += col * col.adjoint();
            }
        }
        out
    }

    #[test]
    fn worked_example() {
        let p = mat(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let q = kaplansky_constant(&p).unwrap();
        let want = mat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!((&q - &want).iter().all(|z| z.norm() <= 1e-12));
        assert!((&q - range_projection(&p)).iter().all(|z| z.norm() <= 1e-12));
        assert!((&p * &q - &q).iter().all(|z| z.norm() <= 1e-12));
        assert!((&q * &p - &p).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn self_adjoint_fixed() {
        let p = mat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(kaplansky_constant(&p).unwrap(), p);
    }

    #[test]
    fn conjugated_projection_matches_oracle() {
        let mut s = ElementSampler::new(4);
        for _ in 0..20 {
            let sm = DMatrix::from_fn(3, 3, |_, _| s.gaussian()) + CMat::identity(3, 3) * c(2.0);
            let d = mat(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
            let p = &sm * d * inverse(&sm).unwrap();
            let q = kaplansky_constant(&p).unwrap();
            let oracle = range_projection(&p);
            let err = |m: CMat| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err(&q - &oracle) <= 1e-10);
            assert!(err(&q - q.adjoint()) <= 1e-10);
            assert!(err(&q * &q - &q) <= 1e-10);
            assert!(err(&p * &q - &q) <= 1e-10);
            assert!(err(&q * &p - &p) <= 1e-10);
        }
    }

    #[test]
    fn uninverted_bracket_is_not_idempotent() {
        let p = mat(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let ps = p.adjoint();
        let d = &p - &ps;
        let q = &p * &ps * (CMat::identity(2, 2) + &d * d.adjoint());
        assert!((q[(0, 0)] - c(4.0)).norm() < 1e-12);
    }
}

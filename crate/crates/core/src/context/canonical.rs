use num_complex::Complex64;

use super::{Lift, LiftTarget};
use crate::equivariant::{EquivariantMatrix, UnitaryTwist};
use crate::error::{Error, Result};
use crate::function_core::{frac, unitary_section, Domain, GridLayout, TwistedLaurent};
use crate::linalg::CMat;

/// The diagonal holomorphic frame `F = diag(e^{phi_j w})`, `phi_j = frac(-theta_j)`,
/// with its inverse and the lifts of both units it induces.
#[derive(Clone, Debug)]
pub struct Frame {
    /// Columns are the `y_j`.
    pub f: EquivariantMatrix,
    /// Rows are the `x_j`.
    pub f_inv: EquivariantMatrix,
    pub lift_b: Lift,
    /// The first frame pair, `(x_1, y_1) = 1`.
    pub lift_a: Lift,
}

fn frame_x(domain: Domain, twist: &UnitaryTwist, j: usize) -> Result<EquivariantMatrix> {
    let n = twist.n();
    let thetas = twist.thetas();
    let entries = (0..n)
        .map(|l| {
            let t = thetas[l];
            if l == j {
                let m = if t == 0.0 { 0 } else { -1 };
                TwistedLaurent::monomial(domain, t, m, Complex64::new(1.0, 0.0))
            } else {
                TwistedLaurent::zero(domain, t)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMatrix::holomorphic(domain, vec![0.0], thetas.to_vec(), entries)
}

fn frame_y(domain: Domain, twist: &UnitaryTwist, j: usize) -> Result<EquivariantMatrix> {
    let n = twist.n();
    let thetas = twist.thetas();
    let entries = (0..n)
        .map(|l| {
            let phi = frac(-thetas[l]);
            if l == j {
                TwistedLaurent::monomial(domain, phi, 0, Complex64::new(1.0, 0.0))
            } else {
                TwistedLaurent::zero(domain, phi)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMatrix::holomorphic(domain, thetas.to_vec(), vec![0.0], entries)
}

/// Explicit diagonal frame. On the disk only the trivial twist is allowed
/// and the frame is the standard basis.
pub fn holomorphic_frame(twist: &UnitaryTwist, domain: Domain) -> Result<Frame> {
    if !domain.is_annulus() && !twist.is_trivial() {
        return Err(Error::WeightMismatch("the disk admits only the trivial twist".into()));
    }
    let n = twist.n();
    let xs = (0..n).map(|j| frame_x(domain, twist, j)).collect::<Result<Vec<_>>>()?;
    let ys = (0..n).map(|j| frame_y(domain, twist, j)).collect::<Result<Vec<_>>>()?;
    let f = EquivariantMatrix::hstack(&ys)?;
    let f_inv = EquivariantMatrix::vstack(&xs)?;
    let lift_a = Lift::new(LiftTarget::UnitA, vec![xs[0].clone()], vec![ys[0].clone()])?;
    let lift_b = Lift::new(LiftTarget::UnitB, xs, ys)?;
    Ok(Frame { f, f_inv, lift_b, lift_a })
}

/// Norm-one lift of `1_B` by continuous unimodular sections:
/// `x_j = u_j e_j^t`, `y_j = conj(u_j) e_j` with `u_j(w) = e^{i theta_j Im w}`.
pub fn continuous_unitary_lift(twist: &UnitaryTwist, layout: &GridLayout) -> Result<Lift> {
    let n = twist.n();
    let thetas = twist.thetas().to_vec();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for j in 0..n {
        let t = thetas[j];
        xs.push(EquivariantMatrix::from_grid_fn(layout, vec![0.0], thetas.clone(), |w| {
            let mut m = CMat::zeros(1, n);
            m[(0, j)] = unitary_section(t, w);
            m
        })?);
        ys.push(EquivariantMatrix::from_grid_fn(layout, thetas.clone(), vec![0.0], |w| {
            let mut m = CMat::zeros(n, 1);
            m[(j, 0)] = unitary_section(t, w).conj();
            m
        })?);
    }
    Lift::new(LiftTarget::UnitB, xs, ys)
}

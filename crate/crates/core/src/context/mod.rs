//! Morita (sub)contexts of twisted function algebras: pairings, the
//! balancing axioms, lifts of the units and their symmetry properties, and
//! the canonical lifts on the disk and annulus.

mod canonical;
pub mod fixtures;
mod lift;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use canonical::{continuous_unitary_lift, holomorphic_frame, Frame};
pub use lift::{Lift, LiftReport, LiftTarget};

use crate::equivariant::{Entries, EquivariantMatrix, Space, UnitaryTwist};
use crate::error::{Error, Result};
use crate::function_core::{weights_match, Domain, GridLayout, DEFAULT_RADIAL, DEFAULT_REFINE_TOL, DEFAULT_SAMPLES};
use crate::random::ElementSampler;

/// Default tolerance for the adjoint-membership (symmetry) tests.
pub const SYMMETRY_TOL: f64 = 1e-8;
/// Registered lifts must reconstruct their unit to this sup-norm residual.
pub const LIFT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Holomorphic,
    Continuous,
}

/// Scalars multiplying the two pointwise-product pairings. Both are `1` for
/// a genuine context; anything else is a canary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pairings {
    pub a_scale: Complex64,
    pub b_scale: Complex64,
}

impl Default for Pairings {
    fn default() -> Self {
        Pairings { a_scale: Complex64::new(1.0, 0.0), b_scale: Complex64::new(1.0, 0.0) }
    }
}

/// `(x, y) = x y`, an element of `A` (1 x 1).
pub fn pair_a(x: &EquivariantMatrix, y: &EquivariantMatrix) -> Result<EquivariantMatrix> {
    if x.rows() != 1 || y.cols() != 1 || x.cols() != y.rows() {
        return Err(Error::ShapeMismatch(format!(
            "(x, y) needs a 1xn row and an nx1 column, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    if !weights_match(x.left_weights()[0], 0.0) || !weights_match(y.right_weights()[0], 0.0) {
        return Err(Error::WeightMismatch("(x, y) needs an X-element and a Y-element".into()));
    }
    x.mul(y)
}

/// `[y, x] = y x`, an element of `B` (n x n).
pub fn pair_b(y: &EquivariantMatrix, x: &EquivariantMatrix) -> Result<EquivariantMatrix> {
    if y.cols() != 1 || x.rows() != 1 || y.rows() != x.cols() {
        return Err(Error::ShapeMismatch(format!(
            "[y, x] needs an nx1 column and a 1xn row, got {}x{} and {}x{}",
            y.rows(),
            y.cols(),
            x.rows(),
            x.cols()
        )));
    }
    if !weights_match(y.right_weights()[0], 0.0) || !weights_match(x.left_weights()[0], 0.0) {
        return Err(Error::WeightMismatch("[y, x] needs a Y-element and an X-element".into()));
    }
    if !crate::equivariant::same_weights(y.left_weights(), x.right_weights()) {
        return Err(Error::WeightMismatch("[y, x] factors belong to different twists".into()));
    }
    y.mul(x)
}

/// True when `a*` lies in the holomorphic class with the same weight
/// signature: on the holomorphic level, every weight-0 entry is constant and
/// every other entry vanishes; on a grid, every conjugated entry has a
/// holomorphic extension (see [`GridFunction::holomorphic_defect`]).
///
/// [`GridFunction::holomorphic_defect`]: crate::function_core::GridFunction::holomorphic_defect
pub fn adjoint_is_holomorphic(a: &EquivariantMatrix, tol: f64) -> bool {
    match a.entries() {
        Entries::Holomorphic(e) => {
            e.iter().all(|f| if weights_match(f.theta(), 0.0) { f.is_constant(tol) } else { f.coeffs().iter().all(|c| c.norm() <= tol) })
        }
        Entries::Grid(e) => e.iter().all(|g| g.conj().holomorphic_defect() <= tol),
    }
}

/// Balancing residuals of the context axioms plus the lift witnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub trials: usize,
    /// max `||(x1, y) x2 - x1 [y, x2]||`
    pub left_balance: f64,
    /// max `||[y1, x] y2 - y1 (x, y2)||`
    pub right_balance: f64,
    pub lifts: Vec<LiftReport>,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.lifts.iter().map(|l| l.residual).fold(self.left_balance.max(self.right_balance), f64::max)
    }
}

/// The context `(A, B, X, Y, (.,.), [.,.])` for a domain and twist, together
/// with its registered lifts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoritaContext {
    domain: Domain,
    twist: UnitaryTwist,
    level: Level,
    #[serde(default)]
    pairings: Pairings,
    lifts: Vec<Lift>,
}

impl MoritaContext {
    pub fn new(domain: Domain, twist: UnitaryTwist, level: Level, lifts: Vec<Lift>) -> Result<Self> {
        if !twist.thetas().iter().all(|&t| domain.admits_weight(t)) {
            return Err(Error::WeightMismatch("the disk admits only the trivial twist".into()));
        }
        let ctx = MoritaContext { domain, twist, level, pairings: Pairings::default(), lifts };
        for lift in &ctx.lifts {
            ctx.check_lift_shape(lift)?;
        }
        Ok(ctx)
    }

    pub fn with_pairings(mut self, pairings: Pairings) -> Self {
        self.pairings = pairings;
        self
    }

    pub fn register(&mut self, lift: Lift) -> Result<()> {
        self.check_lift_shape(&lift)?;
        self.lifts.push(lift);
        Ok(())
    }

    fn check_lift_shape(&self, lift: &Lift) -> Result<()> {
        for x in &lift.xs {
            if x.domain() != self.domain {
                return Err(Error::DomainMismatch("lift element on another domain".into()));
            }
            if !x.is_in(Space::X, &self.twist) {
                return Err(Error::WeightMismatch("lift x-term is not an X-element of this twist".into()));
            }
        }
        for y in &lift.ys {
            if y.domain() != self.domain {
                return Err(Error::DomainMismatch("lift element on another domain".into()));
            }
            if !y.is_in(Space::Y, &self.twist) {
                return Err(Error::WeightMismatch("lift y-term is not a Y-element of this twist".into()));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn twist(&self) -> &UnitaryTwist {
        &self.twist
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn pairings(&self) -> Pairings {
        self.pairings
    }

    pub fn lifts(&self) -> &[Lift] {
        &self.lifts
    }

    pub fn lift_for(&self, target: LiftTarget) -> Option<&Lift> {
        self.lifts.iter().find(|l| l.target == target)
    }

    pub fn pair_a(&self, x: &EquivariantMatrix, y: &EquivariantMatrix) -> Result<EquivariantMatrix> {
        Ok(pair_a(x, y)?.scale(self.pairings.a_scale))
    }

    pub fn pair_b(&self, y: &EquivariantMatrix, x: &EquivariantMatrix) -> Result<EquivariantMatrix> {
        Ok(pair_b(y, x)?.scale(self.pairings.b_scale))
    }

    pub fn unit_a(&self) -> Result<EquivariantMatrix> {
        EquivariantMatrix::identity(self.domain, vec![0.0])
    }

    pub fn unit_b(&self) -> Result<EquivariantMatrix> {
        EquivariantMatrix::identity(self.domain, self.twist.thetas().to_vec())
    }

    /// The sampling layout used for continuous-level objects.
    pub fn layout(&self) -> GridLayout {
        GridLayout::new(self.domain, DEFAULT_SAMPLES, DEFAULT_RADIAL).expect("default layout is valid")
    }

    /// Random element of `space`; on the continuous level, each entry is
    /// multiplied by the conjugate of a random scalar so it leaves the
    /// holomorphic class.
    fn random_element(&self, sampler: &mut ElementSampler, space: Space) -> Result<EquivariantMatrix> {
        let e = sampler.element(space, &self.twist, self.domain)?;
        match self.level {
            Level::Holomorphic => Ok(e),
            Level::Continuous => {
                let layout = self.layout();
                let s = sampler.scalar(self.domain, 0.0)?;
                let bar = EquivariantMatrix::holomorphic(self.domain, vec![0.0], vec![0.0], vec![s])?.adjoint_on(&layout)?;
                let e = e.to_grid(&layout)?;
                match space {
                    Space::X | Space::A => bar.mul(&e),
                    Space::Y => e.mul(&bar),
                    Space::B => Ok(e),
                }
            }
        }
    }

    /// Residuals of `(x1, y) x2 = x1 [y, x2]` and `[y1, x] y2 = y1 (x, y2)`
    /// over `trials` random draws, plus the verification of every
    /// registered lift.
    pub fn check_axioms(&self, trials: usize, seed: u64) -> Result<AxiomReport> {
        if self.lift_for(LiftTarget::UnitA).is_none() {
            return Err(Error::NoLiftRegistered("1_A"));
        }
        if self.lift_for(LiftTarget::UnitB).is_none() {
            return Err(Error::NoLiftRegistered("1_B"));
        }
        let mut sampler = ElementSampler::new(seed);
        let mut left_balance: f64 = 0.0;
        let mut right_balance: f64 = 0.0;
        for _ in 0..trials {
            let x1 = self.random_element(&mut sampler, Space::X)?;
            let x2 = self.random_element(&mut sampler, Space::X)?;
            let y = self.random_element(&mut sampler, Space::Y)?;
            let lhs = self.pair_a(&x1, &y)?.mul(&x2)?;
            let rhs = x1.mul(&self.pair_b(&y, &x2)?)?;
            left_balance = left_balance.max(lhs.sub(&rhs)?.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL));

            let y1 = self.random_element(&mut sampler, Space::Y)?;
            let y2 = self.random_element(&mut sampler, Space::Y)?;
            let x = self.random_element(&mut sampler, Space::X)?;
            let lhs = self.pair_b(&y1, &x)?.mul(&y2)?;
            let rhs = y1.mul(&self.pair_a(&x, &y2)?)?;
            right_balance = right_balance.max(lhs.sub(&rhs)?.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL));
        }
        let lifts = self.lifts.iter().map(|l| self.verify_lift(l, SYMMETRY_TOL)).collect::<Result<Vec<_>>>()?;
        Ok(AxiomReport { trials, left_balance, right_balance, lifts })
    }

    /// The lifted sum `sum [y_i, x_i]` (or `sum (x_i, y_i)`).
    pub fn lifted_sum(&self, lift: &Lift) -> Result<EquivariantMatrix> {
        let mut terms = lift.xs.iter().zip(&lift.ys).map(|(x, y)| match lift.target {
            LiftTarget::UnitB => self.pair_b(y, x),
            LiftTarget::UnitA => self.pair_a(x, y),
        });
        let first = terms.next().expect("lifts are nonempty")?;
        terms.try_fold(first, |acc, t| acc.add(&t?))
    }

    pub fn verify_lift(&self, lift: &Lift, tol: f64) -> Result<LiftReport> {
        self.check_lift_shape(lift)?;
        let unit = match lift.target {
            LiftTarget::UnitB => self.unit_b()?,
            LiftTarget::UnitA => self.unit_a()?,
        };
        let residual = self.lifted_sum(lift)?.sub(&unit)?.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL);
        let row_norm = lift.row()?.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL);
        let col_norm = lift.column()?.sup_norm(DEFAULT_SAMPLES, DEFAULT_REFINE_TOL);
        let symmetric = self.symmetric_pairings(lift, tol)?;
        let notes = match lift.target {
            LiftTarget::UnitB => format!("1_B = sum of {} terms [y_i, x_i]; row = (y_1..y_k), column = (x_1..x_k)^t", lift.terms()),
            LiftTarget::UnitA => format!(
                "1_A = sum of {} terms (x_i, y_i); row = (x_1..x_k), column = (y_1..y_k)^t; symmetric refers to [y_i, x_j]* in B",
                lift.terms()
            ),
        };
        Ok(LiftReport {
            target: lift.target,
            terms: lift.terms(),
            residual,
            row_norm,
            col_norm,
            lift_norm: row_norm.max(col_norm),
            symmetric,
            notes,
        })
    }

    fn symmetric_pairings(&self, lift: &Lift, tol: f64) -> Result<bool> {
        for x in &lift.xs {
            for y in &lift.ys {
                let p = match lift.target {
                    LiftTarget::UnitB => self.pair_a(x, y)?,
                    LiftTarget::UnitA => self.pair_b(y, x)?,
                };
                if !adjoint_is_holomorphic(&p, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every `(x_i, y_j)*` lies in `A`.
    pub fn is_symmetric_lift(&self, lift: &Lift, tol: f64) -> Result<bool> {
        if lift.target != LiftTarget::UnitB {
            return Err(Error::InvalidParameter("symmetry is defined for lifts of 1_B".into()));
        }
        self.symmetric_pairings(lift, tol)
    }

    /// `lift_b` is symmetric and every cross pairing `(x'_i, y_j)*`,
    /// `(x_i, y'_j)*` lies in `A`, where primes mark the terms of `lift_a`.
    pub fn is_compatible_symmetric(&self, lift_b: &Lift, lift_a: &Lift, tol: f64) -> Result<bool> {
        if lift_a.target != LiftTarget::UnitA {
            return Err(Error::InvalidParameter("second lift must lift 1_A".into()));
        }
        if !self.is_symmetric_lift(lift_b, tol)? {
            return Err(Error::NotSymmetric);
        }
        for xp in &lift_a.xs {
            for y in &lift_b.ys {
                if !adjoint_is_holomorphic(&self.pair_a(xp, y)?, tol) {
                    return Ok(false);
                }
            }
        }
        for x in &lift_b.xs {
            for yp in &lift_a.ys {
                if !adjoint_is_holomorphic(&self.pair_a(x, yp)?, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

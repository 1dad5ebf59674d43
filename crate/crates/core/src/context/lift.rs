use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equivariant::{EquivariantMatrix, Repr};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftTarget {
    UnitA,
    UnitB,
}

/// A finite lifting of a unit: `1_B = sum_i [y_i, x_i]` or
/// `1_A = sum_i (x_i, y_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    pub target: LiftTarget,
    pub xs: Vec<EquivariantMatrix>,
    pub ys: Vec<EquivariantMatrix>,
}

impl Lift {
    pub fn new(target: LiftTarget, xs: Vec<EquivariantMatrix>, ys: Vec<EquivariantMatrix>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::ShapeMismatch(format!("lift with {} x-terms and {} y-terms", xs.len(), ys.len())));
        }
        Ok(Lift { target, xs, ys })
    }

    pub fn terms(&self) -> usize {
        self.xs.len()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.xs.iter().chain(&self.ys).all(|e| e.repr() == Repr::Holomorphic)
    }

    /// The assembled row: `(y_1, ..., y_k)` for `1_B`, `(x_1, ..., x_k)` for `1_A`.
    pub fn row(&self) -> Result<EquivariantMatrix> {
        match self.target {
            LiftTarget::UnitB => EquivariantMatrix::hstack(&self.ys),
            LiftTarget::UnitA => EquivariantMatrix::hstack(&self.xs),
        }
    }

    /// The assembled column: `(x_1, ..., x_k)^t` for `1_B`, `(y_1, ..., y_k)^t` for `1_A`.
    pub fn column(&self) -> Result<EquivariantMatrix> {
        match self.target {
            LiftTarget::UnitB => EquivariantMatrix::vstack(&self.xs),
            LiftTarget::UnitA => EquivariantMatrix::vstack(&self.ys),
        }
    }

    /// `y_i -> c y_i`, `x_i -> x_i / c`; leaves the lifted unit unchanged.
    pub fn rescaled(&self, c: f64) -> Self {
        Lift {
            target: self.target,
            xs: self.xs.iter().map(|x| x.scale(Complex64::new(1.0 / c, 0.0))).collect(),
            ys: self.ys.iter().map(|y| y.scale(Complex64::new(c, 0.0))).collect(),
        }
    }

    /// Rescaling that equalizes the two assembled norms, bringing both to
    /// `sqrt(row_norm * col_norm)`.
    pub fn balanced(&self, row_norm: f64, col_norm: f64) -> Self {
        if row_norm <= 0.0 || col_norm <= 0.0 {
            return self.clone();
        }
        let c = (col_norm / row_norm).sqrt();
        match self.target {
            LiftTarget::UnitB => self.rescaled(c),
            LiftTarget::UnitA => self.rescaled(1.0 / c),
        }
    }
}

/// Numeric verdict on a lift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub target: LiftTarget,
    pub terms: usize,
    /// Sup norm of the lifted sum minus the unit.
    pub residual: f64,
    pub row_norm: f64,
    pub col_norm: f64,
    pub lift_norm: f64,
    pub symmetric: bool,
    pub notes: String,
}

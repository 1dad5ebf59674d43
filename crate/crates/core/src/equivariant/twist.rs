use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_core::{frac, weights_match};
use crate::linalg::CMat;

/// A unitary `U = diag(e^(2 pi i theta_j))` in its eigenbasis, the image of
/// the deck generator under the twisting representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TwistRepr", into = "TwistRepr")]
pub struct UnitaryTwist {
    thetas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TwistRepr {
    n: usize,
    thetas: Vec<f64>,
}

impl TryFrom<TwistRepr> for UnitaryTwist {
    type Error = Error;
    fn try_from(r: TwistRepr) -> Result<Self> {
        if r.n != r.thetas.len() {
            return Err(Error::ShapeMismatch(format!("twist declares n = {} but lists {} phases", r.n, r.thetas.len())));
        }
        UnitaryTwist::new(r.thetas)
    }
}

impl From<UnitaryTwist> for TwistRepr {
    fn from(t: UnitaryTwist) -> Self {
        TwistRepr { n: t.thetas.len(), thetas: t.thetas }
    }
}

impl UnitaryTwist {
    /// Eigenphases are reduced modulo 1.
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidParameter("twist needs at least one eigenphase".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("non-finite eigenphase".into()));
        }
        Ok(UnitaryTwist { thetas: thetas.into_iter().map(frac).collect() })
    }

    pub fn trivial(n: usize) -> Self {
        UnitaryTwist { thetas: vec![0.0; n.max(1)] }
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn is_trivial(&self) -> bool {
        self.thetas.iter().all(|&t| weights_match(t, 0.0))
    }

    /// Index of the first eigenphase equal to 0, if any.
    pub fn eigenvalue_one(&self) -> Option<usize> {
        self.thetas.iter().position(|&t| weights_match(t, 0.0))
    }

    pub fn unitary(&self) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.n(),
            self.thetas.iter().map(|&t| Complex64::from_polar(1.0, 2.0 * PI * t)),
        ))
    }

    /// Weights of the dual phases `frac(-theta_j)`.
    pub fn dual_thetas(&self) -> Vec<f64> {
        self.thetas.iter().map(|&t| frac(-t)).collect()
    }
}

/// Which concrete space an [`EquivariantMatrix`](super::EquivariantMatrix)
/// weight signature belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// Scalars, `(0; 0)`.
    A,
    /// `n x n`, `(theta; theta)`.
    B,
    /// Rows, `(0; theta)`: `H(w + 2 pi i) = H(w) U`.
    X,
    /// Columns, `(theta; 0)`: `H(w + 2 pi i) = U^-1 H(w)`.
    Y,
}

impl Space {
    pub fn weights(self, twist: &UnitaryTwist) -> (Vec<f64>, Vec<f64>) {
        let t = twist.thetas().to_vec();
        match self {
            Space::A => (vec![0.0], vec![0.0]),
            Space::B => (t.clone(), t),
            Space::X => (vec![0.0], t),
            Space::Y => (t, vec![0.0]),
        }
    }
}

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing multiplier weights modulo 1.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Fractional part in `[0, 1)`, snapping values within [`WEIGHT_TOL`] of an
/// integer to `0`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f < WEIGHT_TOL || 1.0 - f < WEIGHT_TOL {
        0.0
    } else {
        f
    }
}

/// Circular distance between two weights on `R / Z`.
pub fn weight_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

pub fn weights_match(a: f64, b: f64) -> bool {
    weight_distance(a, b) <= WEIGHT_TOL
}

/// The base surface. The annulus is `{e^(-beta) <= |z| <= 1}`; functions live
/// on the strip `{-beta <= Re w <= 0}` with deck map `w -> w + 2 pi i`.
/// The disk uses the same coordinate `z = e^w` with `Re w <= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub enum Domain {
    Disk,
    Annulus { beta: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawDomain {
    Disk,
    Annulus { beta: f64 },
}

impl TryFrom<RawDomain> for Domain {
    type Error = Error;
    fn try_from(raw: RawDomain) -> Result<Self> {
        match raw {
            RawDomain::Disk => Ok(Domain::Disk),
            RawDomain::Annulus { beta } => Domain::annulus(beta),
        }
    }
}

impl From<Domain> for RawDomain {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Disk => RawDomain::Disk,
            Domain::Annulus { beta } => RawDomain::Annulus { beta },
        }
    }
}

impl Domain {
    pub fn annulus(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(Domain::Annulus { beta })
        } else {
            Err(Error::InvalidParameter(format!("annulus modulus must be positive, got {beta}")))
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            Domain::Disk => None,
            Domain::Annulus { beta } => Some(beta),
        }
    }

    pub fn is_annulus(&self) -> bool {
        matches!(self, Domain::Annulus { .. })
    }

    /// Only the trivial weight is admissible on the simply connected disk.
    pub fn admits_weight(&self, theta: f64) -> bool {
        match self {
            Domain::Disk => weights_match(theta, 0.0),
            Domain::Annulus { .. } => true,
        }
    }

    /// Real parts of the boundary circles in the cover coordinate: the outer
    /// circle first.
    pub fn boundary_levels(&self) -> Vec<f64> {
        match *self {
            Domain::Disk => vec![0.0],
            Domain::Annulus { beta } => vec![0.0, -beta],
        }
    }

    /// `radial` interior levels strictly between the boundary circles (for the
    /// disk, equispaced radii in `(0, 1)`).
    pub fn interior_levels(&self, radial: usize) -> Vec<f64> {
        let step = |r: usize| (r + 1) as f64 / (radial + 1) as f64;
        match *self {
            Domain::Disk => (0..radial).map(|r| step(r).ln()).collect(),
            Domain::Annulus { beta } => (0..radial).map(|r| -beta * step(r)).collect(),
        }
    }

    /// A random point of the cover: `Im w` is drawn from two fundamental
    /// periods so deck translates are exercised.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let im = rng.gen_range(-2.0 * PI..2.0 * PI);
        let re = match *self {
            Domain::Disk => rng.gen_range(0.05f64..1.0).ln(),
            Domain::Annulus { beta } => rng.gen_range(-beta..=0.0),
        };
        Complex64::new(re, im)
    }
}

/// Angle of the `k`-th of `n` equispaced samples.
pub fn angle(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// The deck generator `w -> w + 2 pi i`.
pub fn deck(w: Complex64) -> Complex64 {
    w + Complex64::new(0.0, 2.0 * PI)
}

/// The multiplier `e^(2 pi i theta)`.
pub fn multiplier(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * theta)
}

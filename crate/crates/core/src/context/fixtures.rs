//! Bundled contexts.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{holomorphic_frame, Level, Lift, LiftTarget, MoritaContext};
use crate::equivariant::UnitaryTwist;
use crate::error::{Error, Result};
use crate::function_core::Domain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    Disk,
    AnnulusTrivial,
    AnnulusTwisted,
}

impl Fixture {
    pub const ALL: [Fixture; 3] = [Fixture::Disk, Fixture::AnnulusTrivial, Fixture::AnnulusTwisted];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Disk => "disk",
            Fixture::AnnulusTrivial => "annulus-trivial",
            Fixture::AnnulusTwisted => "annulus-twisted",
        }
    }

    pub fn context(self) -> Result<MoritaContext> {
        match self {
            Fixture::Disk => disk(3),
            Fixture::AnnulusTrivial => annulus_trivial(),
            Fixture::AnnulusTwisted => annulus_twisted(),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::InvalidParameter(format!("unknown fixture {s:?}")))
    }
}

/// The disk-algebra context on `M_{1,n}` and `M_{n,1}` with the standard
/// basis lift of `1_B` and the lift `(e_1^t, e_1)` of `1_A`.
pub fn disk(n: usize) -> Result<MoritaContext> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let twist = UnitaryTwist::trivial(n);
    frame_context(Domain::Disk, twist)
}

/// Annulus `e^{-beta} <= |z| <= 1`, `beta = ln 2`, trivial twist on `C^2`.
pub fn annulus_trivial() -> Result<MoritaContext> {
    frame_context(Domain::annulus(std::f64::consts::LN_2)?, UnitaryTwist::trivial(2))
}

/// Annulus `beta = ln 2` with the single eigenphase `theta = 1/2`.
pub fn annulus_twisted() -> Result<MoritaContext> {
    frame_context(Domain::annulus(std::f64::consts::LN_2)?, UnitaryTwist::new(vec![0.5])?)
}

/// Context carrying the frame lifts of both units.
pub fn frame_context(domain: Domain, twist: UnitaryTwist) -> Result<MoritaContext> {
    let frame = holomorphic_frame(&twist, domain)?;
    MoritaContext::new(domain, twist, Level::Holomorphic, vec![frame.lift_b, frame.lift_a])
}

/// Lift of `1_A` from a single pair.
pub fn pair_lift(x: crate::equivariant::EquivariantMatrix, y: crate::equivariant::EquivariantMatrix) -> Result<Lift> {
    Lift::new(LiftTarget::UnitA, vec![x], vec![y])
}

/// A redundant lift of `1_B` built from `lift`: with random weight-0 `H`,
/// `K`, the new rows are `[I; H] F` and the new columns `G [I - K H, K]`,
/// so the lifted sum is unchanged while the term count doubles.
pub fn redundant_lift(lift: &Lift, sampler: &mut crate::random::ElementSampler) -> Result<Lift> {
    use crate::equivariant::EquivariantMatrix;
    if lift.target != LiftTarget::UnitB {
        return Err(Error::InvalidParameter("redundant_lift expects a lift of 1_B".into()));
    }
    let k = lift.terms();
    let domain = lift.xs[0].domain();
    let zeros = vec![0.0; k];
    let f = EquivariantMatrix::vstack(&lift.xs)?;
    let g = EquivariantMatrix::hstack(&lift.ys)?;
    let h = sampler.matrix(domain, zeros.clone(), zeros.clone())?;
    let kk = sampler.matrix(domain, zeros.clone(), zeros.clone())?;
    let id = EquivariantMatrix::identity(domain, zeros)?;
    let t = EquivariantMatrix::vstack(&[id.clone(), h.clone()])?;
    let s = EquivariantMatrix::hstack(&[id.sub(&kk.mul(&h)?)?, kk])?;
    let f2 = t.mul(&f)?;
    let g2 = g.mul(&s)?;
    let xs = (0..2 * k).map(|i| f2.row(i)).collect::<Result<Vec<_>>>()?;
    let ys = (0..2 * k).map(|j| g2.column(j)).collect::<Result<Vec<_>>>()?;
    Lift::new(LiftTarget::UnitB, xs, ys)
}

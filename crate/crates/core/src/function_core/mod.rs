//! Scalar twisted functions on the disk and annulus covers.

mod domain;
mod grid;
mod laurent;
mod sup;

pub use domain::{angle, deck, frac, multiplier, weight_distance, weights_match, Domain, WEIGHT_TOL};
pub use grid::{unitary_section, GridFunction, GridLayout, DEFAULT_RADIAL, MIN_GRID_SAMPLES};
pub use laurent::TwistedLaurent;
pub use sup::{boundary_sup, golden_max, DEFAULT_REFINE_TOL, DEFAULT_SAMPLES};

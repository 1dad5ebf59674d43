//! Matrix-valued equivariant functions (concomitants) and the spaces they
//! model: scalars `A`, the `n x n` algebra `B`, rows `X` and columns `Y`.

mod matrix;
mod twist;

pub(crate) use matrix::same_weights;
pub use matrix::{Entries, EquivariantMatrix, Repr};
pub use twist::{Space, UnitaryTwist};

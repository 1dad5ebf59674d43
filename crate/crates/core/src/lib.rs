// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod context;
pub mod equivariant;
pub mod error;
pub mod exec;
pub mod function_core;
pub mod linalg;
pub mod obstruction;
pub mod random;
pub mod similarity;

pub use error::{Error, Result};
pub use exec::Exec;

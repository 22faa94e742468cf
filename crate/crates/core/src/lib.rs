//! Exact free-field (Wakimoto) realization of the twisted affine algebra A₂⁽²⁾.

pub mod affine;
pub mod characters;
pub mod error;
pub mod fields;
pub mod fock;
pub mod lie;
pub mod linalg;
pub mod scalar;
pub mod singular;

pub use error::{Error, Result};
pub use scalar::{Level, LevelPoly, Q};

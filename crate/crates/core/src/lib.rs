//! Exact engine for finite-dimensional A∞-algebras and A∞-categories.

pub mod ainfty;
pub mod arcalg;
pub mod error;
pub mod exactlin;
pub mod formality;
pub mod format;
pub mod hochschild;

pub use error::{Error, Result};

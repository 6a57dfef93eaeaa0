//! Secondary multiplications of dg algebras, Hochschild obstruction
//! classes for realisability of modules, and graded localisation, all
//! computed exactly over prime fields on finite degree windows.

pub mod cli;
pub mod dgcore;
pub mod error;
pub mod exactla;
pub mod graded;
pub mod groupcohom;
pub mod hochschild;
pub mod kadeishvili;
pub mod localise;

pub use error::{Error, Result};

//! Cochain complexes, dg algebras, Hom complexes and pullbacks.

mod complex;
mod dga;
mod hom;
mod pullback;

pub use complex::{quasi_iso_check, ChainMap, CochainComplex, Cohomology, CohomologyDegree, QuasiIsoReport};
pub use dga::{check_dg_map, DgAlgebra, SparseVec};
pub use hom::{end_dga, post_compose, pre_compose, Component, DgModule, HomComplex, ModuleChainMap, ModuleTerm};
pub use pullback::{pullback, Pullback};

//! Homotopy transfer of a dg algebra structure to cohomology, up to the
//! triple product, and the product formula for tensor products.

mod kunneth;
mod transfer;

pub use kunneth::{KunnethCochain, KunnethSigns};
pub use transfer::{perturbed_selection, transport_cochain, BasisChange, Transfer, TransferOptions};

//! Group cohomology of cyclic p-groups and their products, with the
//! triple product on cohomology.

mod cyclic;
mod product;

pub use cyclic::{cohomology_ring, coresolution, cyclic_m3, cyclic_m3_from, CyclicEnd, CyclicGroup, CyclicM3};
pub use product::{group_m3, GroupM3, GroupRef};

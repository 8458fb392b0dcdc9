//! Hochschild and cyclic cochains of finite-dimensional algebras.

mod algebra;
mod cochain;
mod cyclic;
mod mc;
#[cfg(test)]
mod tests;

pub use algebra::{Algebra, TracedAlgebra};
pub use cochain::{
    cochain_basis, hochschild_cohomology, hochschild_complex, hochschild_differential, hochschild_matrix,
    HochCochain,
};
pub use cyclic::{
    cyclic_cohomology, cyclic_cohomology_mixed, cyclic_differential, deformation_complex, localize_c1, map_i,
    omega, omega_matrix, C1Localization, CocyclicModule, CyclicCochain, MixedComplex,
};
pub use mc::{check_curved_mc, CurvedMC, McFailure, McReport};

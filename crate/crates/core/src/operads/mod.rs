//! Free and quasi-free circular operads, endomorphism operads of traced algebras, Kaehler
//! differentials and derivation complexes.
//!
//! An element of arity `n` and degree `d` has sign-degree `d + n - 1` (cyclic elements with
//! `n + 1` slots: `d + n`); all Koszul signs use sign-degrees.

mod derivations;
mod endo;
mod free;
mod kaehler;
mod presentation;

pub use derivations::{derivation_complex, DerivationMatrix, Slot, YModule};
pub(crate) use derivations::{linearize, Linearization};
pub use endo::{check_operad_map, EndomorphismOperad, Image, MapFailure, MapReport, OperadMap};
pub use free::{
    brace, compose_trees, cyc_brace, cyc_compose_trees, lambda, substitute, symmetrize, Combination, CycComb,
    CycTree, DTree, FreeOperad, Generator, TreeComb,
};
pub use kaehler::{kaehler_module, KaehlerModule};
pub use presentation::{
    ainfinity_operad, mc_generators, mc_operad, DifferentialFile, PresentationFile, QuasiFreePresentation,
    TermFile, Window,
};

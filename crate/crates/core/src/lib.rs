//! Computational group theory for fibered surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`] for free-group words, cyclic normal forms, surface relators and
//!   the word literal parser.
//! * [`fpgroup`] for finitely presented groups, Todd-Coxeter coset enumeration
//!   and abelian invariants.
//! * [`burnside3`] for normal-form arithmetic in the free Burnside groups
//!   `B(n, 3)`.
//! * [`nilpotent`] for the class-2 quotients `UC_g^N` and the `N = 2` tree
//!   extension groups.
//! * [`monodromy`] for symplectic homology, Dehn transvections and word-level
//!   Dehn twists.
//! * [`fiberquot`] for fiber data, orbit closure of vanishing-cycle relators and
//!   finite-quotient analysis.
//! * [`shafarevich`] for dual graphs, free products of finite groups and the
//!   chain-of-curves evidence scan.
//! * [`witnesses`] for exact affine representations certifying infiniteness.

pub mod burnside3;
mod error;
pub mod fiberquot;
pub mod fpgroup;
pub mod group;
pub mod monodromy;
pub mod nilpotent;
pub mod shafarevich;
pub mod witnesses;
pub mod words;

pub use error::{Error, Result};

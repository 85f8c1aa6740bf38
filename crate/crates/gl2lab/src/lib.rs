//! Finite matrix groups over `Z/NZ` for 2-adic images of elliptic curves.
//!
//! The crate enumerates subgroups of `GL(2, Z/NZ)` exactly and builds the
//! machinery used to classify 2-adic Galois images across isogeny-torsion
//! graphs:
//!
//! * [`residues`]: modular arithmetic and packed 2x2 matrices;
//! * [`groups`]: closures, reductions, kernels, full lifts, levels, conjugacy,
//!   fiber products and stable cyclic subgroups;
//! * [`twists`]: index-2 subgroups without `-Id` and quadratic-twist orbits;
//! * [`isogeny`]: Borel normalization, the isogeny image transform, torsion
//!   fixed points, graph propagation and graph-shape classification;
//! * [`invariants`]: level, index and genus of the associated modular curve;
//! * [`catalog`]: named groups, catalog files and matching;
//! * [`cli`]: the command layer behind the `gl2lab` binary.

pub mod error;
pub mod residues;
pub mod groups;
pub mod invariants;
pub mod twists;
pub mod isogeny;
pub mod catalog;
pub mod cli;

pub use error::{Error, Result};

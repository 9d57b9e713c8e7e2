//! Maximal positively invariant (MPI) sets for discrete-time linear systems
//! `x+ = A_cl x` under polyhedral state and input constraints.
//!
//! Two set backends are provided, half-space polyhedra ([`polyset`]) and
//! constrained zonotopes ([`czset`]), both driven by the dense simplex solver
//! in [`lp`]. When the closed-loop matrix has eigenvalues at zero the standard
//! backward recurrence needs `A_cl^{-1}`, which does not exist. [`mpi`] then
//! splits the dynamics with an ordered real Schur form ([`matops`]), computes
//! the invariant set of the invertible part and lifts it back. A forward
//! power recurrence that never inverts anything serves as the reference.
//!
//! Runnable examples live in `crates/core/examples/`; the `mpiset` binary
//! exposes the same pipeline on JSON problem files.

pub mod bench;
pub mod czset;
pub mod error;
pub mod lp;
pub mod matops;
pub mod mpi;
pub mod polyset;
pub mod synthesis;

pub use czset::ConstrainedZonotope;
pub use error::{Error, Result};
pub use matops::{Matrix, Vector};
pub use mpi::{mpi_compute, Backend, Branch, MpiOptions, MpiResult, MpiSet, SchurSplit};
pub use polyset::HPolyhedron;

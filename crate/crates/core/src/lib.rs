//! Exact combinatorial intersection cohomology of rational polyhedral fans.
//!
//! Objects are fan-indexed families of complexes of graded modules over
//! exterior algebras. Every per-cone module is stored as a subquotient
//! `V/K` of a free module `gens ⊗ ⋀Q^r`, which keeps induction to larger
//! subalgebras and global assembly uniform.

pub mod cohomology;
pub mod cone;
pub mod corpus;
pub mod error;
pub mod exterior;
pub mod fan;
pub mod flags;
pub mod gem;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod maps;

pub use cohomology::{BettiTable, BigradedComplex};
pub use cone::Cone;
pub use error::{Error, Result};
pub use fan::{Fan, Perversity, Subdivision};
pub use gem::{GemMap, GemObject};

//! Exact sparse linear algebra over ℚ.
//!
//! Every subspace is stored in reduced row echelon form with the usual pivot
//! rule (first nonzero column), which makes the stored basis canonical and
//! therefore bit-for-bit reproducible.

mod indexing;
pub mod io;
mod sparse;
mod subspace;

pub use indexing::BasisIndexing;
pub use sparse::SparseVec;
pub use subspace::{kernel_mod, rank_of, Echelon, Subspace};

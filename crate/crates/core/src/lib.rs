//! Exact permutation pattern matching.
//!
//! A pattern `π` occurs in a text `τ` when some subsequence of `τ` has the same
//! relative order as `π`. This crate decides and counts occurrences with
//! several independent algorithms:
//!
//! * [`oracle`]: plain backtracking, the reference every other solver is checked against;
//! * [`tdsolver`]: dynamic programming over a tree decomposition of the pattern's
//!   incidence graph, plus a strip-guessing wrapper;
//! * [`evenodd`]: enumerate images of the even-index pattern entries and place the
//!   odd ones greedily, in polynomial space.
//!
//! [`families`] generates patterns with large incidence-graph treewidth together
//! with checkable minor certificates, and [`hardness`] turns partitioned subgraph
//! isomorphism into colored pattern matching.

pub mod cli;
pub mod count;
pub mod csp;
pub mod evenodd;
pub mod families;
pub mod graph;
pub mod hardness;
pub mod oracle;
pub mod perm;
pub mod tdsolver;
pub mod treewidth;

mod solver;

pub use count::MatchCount;
pub use graph::Graph;
pub use perm::{Permutation, Point};
pub use solver::{Algorithm, Solver};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] perm::PermError),
    #[error(transparent)]
    Csp(#[from] csp::CspError),
    #[error(transparent)]
    Decomposition(#[from] treewidth::DecompositionError),
    #[error(transparent)]
    Solve(#[from] tdsolver::SolveError),
    #[error(transparent)]
    Family(#[from] families::FamilyError),
    #[error(transparent)]
    Hardness(#[from] hardness::HardnessError),
}

//! Equitable list arborable colorings.
//!
//! A coloring is *arborable* when every color class induces a forest, and
//! *equitable* with respect to `k` when every class has at most `ceil(n/k)`
//! vertices. This crate provides graph and list-assignment types, a
//! verifier, constructive solvers for several graph families built on a
//! common extension step, complete bipartite specializations, and exact
//! backtracking oracles.

pub mod bipartite;
pub mod coloring;
pub mod dsu;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod repro;
pub mod solvers;

pub use coloring::{
    equity_cap, verify_arborable_L_coloring, verify_certificate, verify_equitable, Certificate,
    ColorId, ListAssignment, PartialColoring, VerificationReport,
};
pub use error::{Error, Result};
pub use graph::{FamilySpec, FamilyTag, Graph, Vertex};
pub use oracle::{SearchBudget, Status, Verdict};

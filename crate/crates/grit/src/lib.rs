//! Toolkit for unsatisfiability proofs in the GRIT trace format.
//!
//! The two halves of the crate:
//!
//! * [`checker`] verifies a GRIT proof against a DIMACS CNF formula using
//!   restricted reverse unit propagation: every proof line names the
//!   clauses its derivation depends on, so the checker never searches.
//! * [`convert`] turns a DRUP trace (no antecedents, deletions optional)
//!   into GRIT by replaying it through a watched-literal propagation
//!   engine ([`rup`]) that records which clauses each conflict used.
//!
//! [`dimacs`] and [`proof`] hold the text formats, [`model`] the shared
//! domain types, and [`testkit`] the brute-force oracles and proof-family
//! generators the test suite is built on.

pub mod checker;
pub mod cli;
pub mod convert;
pub mod dimacs;
pub mod model;
pub mod proof;
pub mod rup;
mod scan;
pub mod testkit;

pub use checker::{refute, RejectionReason, Verdict};
pub use convert::{backward_trim, convert};
pub use model::{Clause, ClauseId, Formula, Lit, Valuation};
pub use proof::{DrupAction, ProofAction};

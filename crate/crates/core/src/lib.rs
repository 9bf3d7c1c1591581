//! Greedy shortest common superstring, tie-breaking policies and the
//! tie-removing dataset transformations built around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`strcore`] holds strings, datasets, overlaps and merges.
//! * [`greedy`] runs the greedy merge loop with a pluggable [`TieBreakPolicy`]
//!   and records the full merge trace.
//! * [`disturb`] rewrites a dataset with sentinel blocks so that every greedy
//!   instantiation performs the same non-trivial merges.
//! * [`freq`] handles the symbol-frequency metric and its two reductions.
//! * [`oracle`] provides exact solvers used as ground truth.
//! * [`gen`] builds the datasets used by the experiments.
//! * [`verify`] bundles the property suite run by `scs verify`.
//!
//! String indices are 0-based everywhere. Step numbers in merge traces are
//! 1-based counts (step 1 is the first merge).

pub mod disturb;
pub mod error;
pub mod freq;
pub mod gen;
pub mod greedy;
pub mod oracle;
pub mod rng;
pub mod strcore;
pub mod verify;

pub use disturb::{DisturbParams, DisturbVariant, StepRoles};
pub use error::{Error, Result};
pub use greedy::{GreedyResult, MergeStep, MergeTrace, TieBreakPolicy};
pub use oracle::{ExactResult, SharpExactResult};
pub use strcore::{Dataset, SString, Sentinel, Symbol};

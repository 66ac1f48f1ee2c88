//! Classical screening toolkit: gain-ratio decision trees, tree-derived rule
//! sets, k-means clustering and a cross-validated per-class metric suite.
//!
//! The [`learner`] module exposes every classifier family behind the
//! [`learner::Learner`] trait and a name-keyed [`learner::LearnerRegistry`],
//! which is how the cross-validation driver and the CLI pick an algorithm at
//! runtime.

pub mod cluster;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod learner;
pub mod rules;
pub mod tree;

pub use error::{Error, Result};

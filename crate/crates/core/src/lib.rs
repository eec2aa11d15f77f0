//! Grounding spoken words in a robot's affordance network.
//!
//! The affordance network is a discrete Bayesian network over actions, object
//! features and observed effects. Each vocabulary word becomes a binary node
//! whose parents are selected from the affordance nodes with a K2 greedy
//! search. The resulting joint model can interpret under-specified verbal
//! instructions, flag requests that no object in the scene can satisfy, and
//! rescore recognizer N-best lists using the current scene as context.
//!
//! [`datagen`] regenerates a symbolic world, synonym-balanced descriptions and
//! a bag-of-words recognition noise channel so that every experiment can be
//! reproduced from a seed.

pub mod bayes;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod eval;
pub mod grounding;
pub mod inference;
pub mod structure;

pub use error::{Error, Result};

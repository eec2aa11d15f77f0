//! Synthetic data regime: a ground-truth symbolic world, synonym-balanced
//! verbal descriptions and a bag-of-words recognition noise channel.
//!
//! Every generator is a pure function of its inputs and a seed.

mod corpus;
mod lexicon;
mod noise;
mod world;

pub use corpus::{build_corpus, word_histogram, Corpus};
pub use lexicon::{effect_of, generate_description, BalanceState, Effect, Lexicon};
pub use noise::{corrupt, corrupt_seeded, NoiseProfile};
pub use world::{sample_experience, sample_state, WorldModel};

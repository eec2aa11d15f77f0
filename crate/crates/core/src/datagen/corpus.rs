use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lexicon::{generate_description, BalanceState, Lexicon};
use super::noise::{corrupt, NoiseProfile};
use super::world::{sample_state, WorldModel};
use crate::error::Result;
use crate::grounding::{bag_of_words, Experience};

/// Generated experiences, with an optional noisy counterpart aligned record by record.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub clean: Vec<Experience>,
    pub corrupted: Option<Vec<Experience>>,
}

impl Corpus {
    /// The noisy records when present, else the clean ones.
    pub fn training(&self) -> &[Experience] {
        self.corrupted.as_deref().unwrap_or(&self.clean)
    }
}

/// `situations` sampled world states, each described `descriptions` times.
///
/// States and descriptions share one RNG stream; noise uses a second stream of
/// the same seed so the clean corpus does not depend on whether noise is applied.
pub fn build_corpus(
    world: &WorldModel,
    lexicon: &Lexicon,
    situations: usize,
    descriptions: usize,
    noise: Option<&NoiseProfile>,
    seed: u64,
) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(seed);
    noise_rng.set_stream(1);
    let mut balance = BalanceState::new();

    let mut clean = Vec::with_capacity(situations * descriptions);
    for _ in 0..situations {
        let state = sample_state(world, &mut rng);
        for _ in 0..descriptions {
            let tokens = generate_description(&state, lexicon, &mut balance, &mut rng)?;
            clean.push(Experience::new(state.clone(), bag_of_words(&tokens))?);
        }
    }
    let corrupted = noise.map(|profile| {
        clean
            .iter()
            .map(|e| e.with_description(corrupt(e.description(), profile, &mut noise_rng)))
            .collect()
    });
    Ok(Corpus { clean, corrupted })
}

/// Number of records in which each word appears.
pub fn word_histogram(experiences: &[Experience]) -> BTreeMap<String, usize> {
    let mut hist = BTreeMap::new();
    for e in experiences {
        for w in e.description().iter() {
            *hist.entry(w.to_string()).or_insert(0) += 1;
        }
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_alignment() {
        let world = WorldModel::default();
        let lex = Lexicon::default();
        let profile = NoiseProfile::new(lex.vocabulary());
        let c = build_corpus(&world, &lex, 254, 5, Some(&profile), 9).unwrap();
        assert_eq!(c.clean.len(), 1270);
        let noisy = c.corrupted.as_ref().unwrap();
        assert_eq!(noisy.len(), 1270);
        for (a, b) in c.clean.iter().zip(noisy) {
            assert_eq!(a.state(), b.state());
        }
        for chunk in c.clean.chunks(5) {
            assert!(chunk.iter().all(|e| e.state() == chunk[0].state()));
        }
        let one = build_corpus(&world, &lex, 1, 1, None, 9).unwrap();
        assert_eq!(one.clean.len(), 1);
        assert!(one.corrupted.is_none());
    }

    #[test]
    fn noise_does_not_change_the_clean_corpus() {
        let world = WorldModel::default();
        let lex = Lexicon::default();
        let profile = NoiseProfile::new(lex.vocabulary());
        let a = build_corpus(&world, &lex, 40, 3, None, 5).unwrap();
        let b = build_corpus(&world, &lex, 40, 3, Some(&profile), 5).unwrap();
        assert_eq!(a.clean, b.clean);
        assert_eq!(
            b,
            build_corpus(&world, &lex, 40, 3, Some(&profile), 5).unwrap()
        );
    }

    #[test]
    fn histogram_counts_records() {
        let world = WorldModel::default();
        let lex = Lexicon::default();
        let c = build_corpus(&world, &lex, 10, 2, None, 1).unwrap();
        let h = word_histogram(&c.clean);
        assert!(h.values().all(|&n| n <= 20));
        assert!(h.keys().all(|w| lex.vocabulary().contains(w)));
    }
}

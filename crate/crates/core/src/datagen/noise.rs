use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grounding::BagOfWords;

/// Recognition noise applied to a bag of words: independent deletions of the
/// words present, then independent insertions drawn from a pool.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseProfile {
    /// Expected number of deleted words per utterance.
    pub deletion_rate: f64,
    /// Expected number of inserted words per utterance.
    pub insertion_rate: f64,
    /// Candidate insertions; words already in the bag are skipped.
    pub pool: Vec<String>,
}

impl NoiseProfile {
    pub fn new(pool: impl IntoIterator<Item = impl Into<String>>) -> Self {
        NoiseProfile {
            deletion_rate: 1.0 / 1.2,
            insertion_rate: 1.0 / 1.3,
            pool: pool.into_iter().map(Into::into).collect(),
        }
    }

    pub fn silent() -> Self {
        NoiseProfile {
            deletion_rate: 0.0,
            insertion_rate: 0.0,
            pool: Vec::new(),
        }
    }
}

/// Corrupted copy of `bag`. Each present word is dropped with probability
/// `deletion_rate / n`; each pool word absent from the original bag is added
/// with probability `insertion_rate / m`, where `m` is the number of such words.
pub fn corrupt<R: Rng + ?Sized>(
    bag: &BagOfWords,
    profile: &NoiseProfile,
    rng: &mut R,
) -> BagOfWords {
    let n = bag.len();
    let p_del = if n == 0 {
        0.0
    } else {
        (profile.deletion_rate / n as f64).min(1.0)
    };
    let mut out: BagOfWords = bag
        .iter()
        .filter(|_| rng.random::<f64>() >= p_del)
        .collect();

    let mut candidates: Vec<&str> = profile
        .pool
        .iter()
        .map(String::as_str)
        .filter(|w| !bag.contains(w))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let m = candidates.len();
    if m > 0 {
        let p_ins = (profile.insertion_rate / m as f64).min(1.0);
        for w in candidates {
            if rng.random::<f64>() < p_ins {
                out.insert(w);
            }
        }
    }
    out
}

pub fn corrupt_seeded(bag: &BagOfWords, profile: &NoiseProfile, seed: u64) -> BagOfWords {
    corrupt(bag, profile, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> Vec<String> {
        "alpha beta gamma delta epsilon zeta"
            .split(' ')
            .map(String::from)
            .collect()
    }

    #[test]
    fn zero_rates_are_identity() {
        let bag = BagOfWords::parse("the robot grasps the ball");
        let mut p = NoiseProfile::new(pool());
        p.deletion_rate = 0.0;
        p.insertion_rate = 0.0;
        for seed in 0..50 {
            assert_eq!(corrupt_seeded(&bag, &p, seed), bag);
        }
        assert_eq!(corrupt_seeded(&bag, &NoiseProfile::silent(), 7), bag);
    }

    #[test]
    fn saturated_deletion_removes_everything() {
        let bag = BagOfWords::parse("a b c");
        let p = NoiseProfile {
            deletion_rate: 10.0,
            insertion_rate: 0.0,
            pool: vec![],
        };
        assert!(corrupt_seeded(&bag, &p, 1).is_empty());
    }

    #[test]
    fn insertions_never_duplicate_original_words() {
        let bag = BagOfWords::parse("alpha beta");
        let p = NoiseProfile {
            deletion_rate: 0.0,
            insertion_rate: 100.0,
            pool: pool(),
        };
        let out = corrupt_seeded(&bag, &p, 3);
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn expected_deletion_count_over_a_corpus() {
        let p = NoiseProfile::new(pool());
        let bag = BagOfWords::parse("one two three four five six seven eight");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut deleted, mut inserted) = (0usize, 0usize);
        for _ in 0..1270 {
            let out = corrupt(&bag, &p, &mut rng);
            deleted += bag.iter().filter(|w| !out.contains(w)).count();
            inserted += out.iter().filter(|w| !bag.contains(w)).count();
        }
        let expect_del = 1270.0 / 1.2;
        let expect_ins = 1270.0 / 1.3;
        assert!(
            (deleted as f64 - expect_del).abs() < 0.1 * expect_del,
            "{deleted}"
        );
        assert!(
            (inserted as f64 - expect_ins).abs() < 0.1 * expect_ins,
            "{inserted}"
        );
    }
}

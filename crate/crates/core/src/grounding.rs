//! Bag-of-words encoding of utterances and word likelihoods under a network.

use std::collections::BTreeSet;
use std::fmt;

use log::warn;

use crate::bayes::affordance_variables;
use crate::bayes::{
    Assignment, Network, ABSENT, ACTION, AFFORDANCE_VARIABLES, COLOR, CONTACT, HAND_VEL,
    OBJ_HAND_VEL, OBJ_VEL, PRESENT, SHAPE, SIZE,
};
use crate::error::{Error, Result};

/// Unordered set of distinct lowercase words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BagOfWords(BTreeSet<String>);

impl BagOfWords {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tokenizes free text: whitespace split, lowercase, trailing punctuation stripped.
    pub fn parse(text: &str) -> Self {
        text.split_whitespace().collect()
    }

    pub fn insert(&mut self, word: &str) -> bool {
        match normalize(word) {
            Some(w) => self.0.insert(w),
            None => false,
        }
    }

    pub fn remove(&mut self, word: &str) -> bool {
        self.0.remove(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for BagOfWords {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        BagOfWords(
            iter.into_iter()
                .filter_map(|t| normalize(t.as_ref()))
                .collect(),
        )
    }
}

impl fmt::Display for BagOfWords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<&str> = self.iter().collect();
        f.write_str(&words.join(" "))
    }
}

fn normalize(token: &str) -> Option<String> {
    let t = token
        .trim()
        .trim_end_matches(|c: char| c.is_ascii_punctuation())
        .to_lowercase();
    (!t.is_empty()).then_some(t)
}

/// Merges a token sequence into a bag: order and repetitions are discarded.
pub fn bag_of_words<I, S>(tokens: I) -> BagOfWords
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    tokens.into_iter().collect()
}

/// One trial: the full affordance state and the words heard while it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Experience {
    state: Assignment,
    description: BagOfWords,
}

const LINE_EFFECTS: [&str; 4] = [OBJ_VEL, HAND_VEL, OBJ_HAND_VEL, CONTACT];
const LINE_FEATURES: [&str; 3] = [COLOR, SIZE, SHAPE];

impl Experience {
    /// `state` must bind exactly the eight affordance variables with legal values.
    pub fn new(state: Assignment, description: BagOfWords) -> Result<Self> {
        if state.len() != AFFORDANCE_VARIABLES.len() {
            return Err(Error::Invalid(format!(
                "experience state binds {} variables, expected {}",
                state.len(),
                AFFORDANCE_VARIABLES.len()
            )));
        }
        for v in affordance_variables() {
            let value = state
                .get(v.name())
                .ok_or_else(|| Error::Unbound(v.name().to_string()))?;
            v.require_index(value)?;
        }
        Ok(Experience { state, description })
    }

    pub fn state(&self) -> &Assignment {
        &self.state
    }

    pub fn description(&self) -> &BagOfWords {
        &self.description
    }

    pub fn with_description(&self, description: BagOfWords) -> Self {
        Experience {
            state: self.state.clone(),
            description,
        }
    }

    /// `action|color,size,shape|objvel,handvel,objhandvel,contact|w1 w2 ...`
    pub fn to_line(&self) -> String {
        let get = |v: &str| self.state.get(v).unwrap_or_default();
        let features: Vec<&str> = LINE_FEATURES.iter().map(|v| get(v)).collect();
        let effects: Vec<&str> = LINE_EFFECTS.iter().map(|v| get(v)).collect();
        format!(
            "{}|{}|{}|{}",
            get(ACTION),
            features.join(","),
            effects.join(","),
            self.description
        )
    }

    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 4 {
            return Err(format!(
                "expected 4 `|`-separated fields, found {}",
                fields.len()
            ));
        }
        let mut state = Assignment::new().with(ACTION, fields[0].trim());
        for (names, field) in [
            (&LINE_FEATURES[..], fields[1]),
            (&LINE_EFFECTS[..], fields[2]),
        ] {
            let values: Vec<&str> = field.split(',').map(str::trim).collect();
            if values.len() != names.len() {
                return Err(format!(
                    "expected {} comma-separated values in `{field}`",
                    names.len()
                ));
            }
            for (n, v) in names.iter().zip(values) {
                state.bind(*n, v);
            }
        }
        Experience::new(state, BagOfWords::parse(fields[3])).map_err(|e| e.to_string())
    }
}

/// Parses a dataset file, one experience per non-blank line.
pub fn parse_experiences(text: &str) -> Result<Vec<Experience>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| Experience::parse_line(l).map_err(|m| Error::parse(i + 1, m)))
        .collect()
}

pub fn format_experiences(experiences: &[Experience]) -> String {
    let mut out = String::new();
    for e in experiences {
        out.push_str(&e.to_line());
        out.push('\n');
    }
    out
}

/// How words of the vocabulary that are missing from a bag enter a likelihood.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WordEvidence {
    /// Only words present in the bag contribute a factor.
    #[default]
    PresentOnly,
    /// Every known word not in the bag contributes `p(w = absent | parents)`.
    PresentAndAbsent,
}

/// Words of `bag` split into those the network knows and those it does not.
pub fn split_known<'a>(network: &Network, bag: &'a BagOfWords) -> (Vec<&'a str>, Vec<&'a str>) {
    bag.iter()
        .partition(|w| network.variable(w).is_some_and(|v| v.is_word()))
}

/// Evidence assignment over word nodes for a bag. Unknown words are skipped with a warning.
pub fn word_evidence(network: &Network, bag: &BagOfWords, mode: WordEvidence) -> Assignment {
    let (known, unknown) = split_known(network, bag);
    if !unknown.is_empty() {
        warn!("skipping words unknown to the model: {}", unknown.join(" "));
    }
    let mut ev: Assignment = known.iter().map(|w| (*w, PRESENT)).collect();
    if mode == WordEvidence::PresentAndAbsent {
        for w in network.words() {
            if !bag.contains(w) {
                ev.bind(w, ABSENT);
            }
        }
    }
    ev
}

/// `p(word = present | state)` read from the word's CPT.
pub fn word_likelihood(network: &Network, word: &str, state: &Assignment) -> Result<f64> {
    let w = network.require(word)?;
    if !network.variables()[w].is_word() {
        return Err(Error::Invalid(format!("`{word}` is not a word variable")));
    }
    let cpt = network.cpt(w);
    let parent_values = network
        .parent_indices(w)
        .iter()
        .map(|&p| {
            let var = &network.variables()[p];
            let value = state
                .get(var.name())
                .ok_or_else(|| Error::Unbound(var.name().to_string()))?;
            var.require_index(value)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cpt.prob(cpt.row_index(&parent_values), 1))
}

/// Product of word likelihoods for the words of `bag` given a full affordance state.
pub fn description_likelihood(
    network: &Network,
    bag: &BagOfWords,
    state: &Assignment,
    mode: WordEvidence,
) -> Result<f64> {
    let (known, unknown) = split_known(network, bag);
    if !unknown.is_empty() {
        warn!("skipping words unknown to the model: {}", unknown.join(" "));
    }
    let mut p = 1.0;
    for w in known {
        p *= word_likelihood(network, w, state)?;
    }
    if mode == WordEvidence::PresentAndAbsent {
        for w in network.words() {
            if !bag.contains(w) {
                p *= 1.0 - word_likelihood(network, w, state)?;
            }
        }
    }
    Ok(p)
}

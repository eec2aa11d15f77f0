use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bayes::{Assignment, ACTION, COLOR, HAND_VEL, OBJ_VEL, SHAPE, SIZE};
use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.json");

/// Concept keys to synonym phrases, plus independently emitted filler words.
///
/// Concept keys are `Var=value` for affordance values, `Effect=<kind>` for the
/// observed outcome, `Conjunction=success|failure`, and the structural keys
/// `Subject`, `Article` and `Pronoun`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicon {
    pub concepts: BTreeMap<String, Vec<String>>,
    /// Filler word to the probability it is emitted in a description.
    #[serde(default)]
    pub fillers: BTreeMap<String, f64>,
    /// Probability that an optional feature (Color, Size) is verbalized.
    #[serde(default)]
    pub mention: BTreeMap<String, f64>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::from_json(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Self> {
        let lex: Lexicon = serde_json::from_str(text)?;
        for (k, syns) in &lex.concepts {
            if syns.is_empty() || syns.iter().any(|s| s.split_whitespace().next().is_none()) {
                return Err(Error::Lexicon(format!(
                    "concept `{k}` has an empty synonym"
                )));
            }
        }
        for (w, p) in lex.fillers.iter().chain(&lex.mention) {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Lexicon(format!(
                    "probability for `{w}` outside [0, 1]"
                )));
            }
        }
        Ok(lex)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lexicon serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn synonyms(&self, concept: &str) -> Option<&[String]> {
        self.concepts.get(concept).map(Vec::as_slice)
    }

    /// Every distinct lowercase word the lexicon can emit.
    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.concepts
            .values()
            .flatten()
            .flat_map(|p| p.split_whitespace())
            .chain(self.fillers.keys().map(String::as_str))
            .map(str::to_lowercase)
            .collect()
    }
}

/// Round-robin counters, one per concept key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BalanceState {
    counters: BTreeMap<String, usize>,
}

impl BalanceState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Next synonym for `concept`, cycling through the list.
    pub fn pick<'a>(&mut self, lexicon: &'a Lexicon, concept: &str) -> Result<&'a str> {
        let syns = lexicon
            .synonyms(concept)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Lexicon(format!("no synonyms for concept `{concept}`")))?;
        let n = self.next_index(concept, syns.len());
        Ok(&syns[n])
    }

    fn next_index(&mut self, key: &str, modulus: usize) -> usize {
        let c = self.counters.entry(key.to_string()).or_insert(0);
        let i = *c % modulus;
        *c += 1;
        i
    }

    pub fn count(&self, concept: &str) -> usize {
        self.counters.get(concept).copied().unwrap_or(0)
    }
}

/// Outcome category verbalized in the second half of a description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Effect {
    Still,
    Roll,
    Slide,
    Rise,
    Fall,
}

impl Effect {
    pub fn key(self) -> &'static str {
        match self {
            Effect::Still => "Effect=still",
            Effect::Roll => "Effect=roll",
            Effect::Slide => "Effect=slide",
            Effect::Rise => "Effect=rise",
            Effect::Fall => "Effect=fall",
        }
    }
}

/// Effect category of a state, read from object and hand velocity.
pub fn effect_of(state: &Assignment) -> Result<Effect> {
    let get = |v: &str| state.get(v).ok_or_else(|| Error::Unbound(v.to_string()));
    let fast_hand = get(HAND_VEL)? == "fast";
    Ok(match (get(OBJ_VEL)?, fast_hand) {
        ("slow", _) => Effect::Still,
        ("medium", true) => Effect::Rise,
        ("medium", false) => Effect::Slide,
        (_, true) => Effect::Fall,
        (_, false) => Effect::Roll,
    })
}

fn succeeded(action: &str, effect: Effect) -> bool {
    match action {
        "grasp" => effect == Effect::Rise,
        "tap" => effect != Effect::Still,
        _ => true,
    }
}

fn push_phrase(tokens: &mut Vec<String>, phrase: &str) {
    tokens.extend(phrase.split_whitespace().map(str::to_lowercase));
}

/// One description of `state`: subject, optional fillers, action verb, the
/// object phrase, a conjunction chosen by the action's success, then the effect.
///
/// Synonyms rotate per concept through `balance`; filler emission and optional
/// feature mentions are drawn from `rng`.
pub fn generate_description<R: Rng + ?Sized>(
    state: &Assignment,
    lexicon: &Lexicon,
    balance: &mut BalanceState,
    rng: &mut R,
) -> Result<Vec<String>> {
    let get = |v: &str| state.get(v).ok_or_else(|| Error::Unbound(v.to_string()));
    let action = get(ACTION)?;
    let effect = effect_of(state)?;
    let mut tokens = Vec::new();

    push_phrase(&mut tokens, balance.pick(lexicon, "Subject")?);
    for (word, &p) in &lexicon.fillers {
        if rng.random::<f64>() < p {
            push_phrase(&mut tokens, word);
        }
    }
    push_phrase(
        &mut tokens,
        balance.pick(lexicon, &format!("{ACTION}={action}"))?,
    );
    let article = balance.pick(lexicon, "Article")?;
    push_phrase(&mut tokens, article);
    for feature in [COLOR, SIZE] {
        let p = lexicon.mention.get(feature).copied().unwrap_or(1.0);
        let mentioned = rng.random::<f64>() < p;
        let key = format!("{feature}={}", get(feature)?);
        if mentioned && lexicon.synonyms(&key).is_some() {
            push_phrase(&mut tokens, balance.pick(lexicon, &key)?);
        }
    }
    let shape = balance.pick(lexicon, &format!("{SHAPE}={}", get(SHAPE)?))?;
    push_phrase(&mut tokens, shape);

    let conj = if succeeded(action, effect) {
        "Conjunction=success"
    } else {
        "Conjunction=failure"
    };
    push_phrase(&mut tokens, balance.pick(lexicon, conj)?);
    if balance.next_index("Reference", 2) == 0 {
        push_phrase(&mut tokens, article);
        push_phrase(&mut tokens, shape);
    } else {
        push_phrase(&mut tokens, balance.pick(lexicon, "Pronoun")?);
    }
    push_phrase(&mut tokens, balance.pick(lexicon, effect.key())?);
    Ok(tokens)
}

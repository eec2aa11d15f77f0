//! K2 greedy parent selection for word nodes and, optionally, affordance nodes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;

use crate::bayes::{
    affordance_variables, default_affordance_parents, family_log_score_by_index, Dataset, Network,
    ParentMap, VarKind, Variable, AFFORDANCE_VARIABLES,
};
use crate::error::{Error, Result};
use crate::grounding::Experience;

#[derive(Clone, Debug, PartialEq)]
pub struct K2Config {
    /// Largest parent set the search may build.
    pub max_parents: usize,
    /// Candidate order: ties in score go to the earlier candidate, and affordance
    /// nodes may only take parents that precede them.
    pub ordering: Vec<String>,
    /// Dirichlet weight per CPT cell in the family score (1 is the classic K2 metric).
    pub alpha: f64,
    /// Words seen in fewer records than this get no parents without searching.
    pub min_word_count: usize,
}

impl Default for K2Config {
    fn default() -> Self {
        K2Config {
            max_parents: 3,
            ordering: AFFORDANCE_VARIABLES.iter().map(|s| s.to_string()).collect(),
            alpha: 1.0,
            min_word_count: 3,
        }
    }
}

impl K2Config {
    fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::Pseudocount(self.alpha));
        }
        for (i, v) in self.ordering.iter().enumerate() {
            if self.ordering[..i].contains(v) {
                return Err(Error::Invalid(format!(
                    "`{v}` appears twice in the K2 ordering"
                )));
            }
        }
        Ok(())
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.ordering.iter().position(|v| v == name)
    }
}

/// Result of one greedy search.
#[derive(Clone, Debug, PartialEq)]
pub struct ParentSearch {
    /// Selected parents, listed in candidate-ordering order.
    pub parents: Vec<String>,
    /// Family score of the empty set followed by the score after each accepted addition.
    pub scores: Vec<f64>,
}

/// Greedy K2 search for the parents of `target` among `candidates`.
pub fn k2_select_parents(
    data: &Dataset,
    target: &str,
    candidates: &[&str],
    config: &K2Config,
) -> Result<ParentSearch> {
    config.validate()?;
    let column = |n: &str| {
        data.column(n)
            .ok_or_else(|| Error::UnknownVariable(n.to_string()))
    };
    let t = column(target)?;
    if candidates.contains(&target) {
        return Err(Error::Invalid(format!(
            "`{target}` cannot be its own parent candidate"
        )));
    }
    let mut cands = candidates
        .iter()
        .map(|c| {
            let pos = config.position(c).ok_or_else(|| {
                Error::Invalid(format!("candidate `{c}` missing from K2 ordering"))
            })?;
            Ok((pos, column(c)?))
        })
        .collect::<Result<Vec<_>>>()?;
    cands.sort_unstable();
    cands.dedup();
    let cols: Vec<usize> = cands.iter().map(|&(_, c)| c).collect();
    let (chosen, scores) = greedy(data, t, &cols, config);
    let mut parents: Vec<(usize, usize)> = cands
        .into_iter()
        .filter(|(_, c)| chosen.contains(c))
        .collect();
    parents.sort_unstable();
    Ok(ParentSearch {
        parents: parents
            .into_iter()
            .map(|(_, c)| data.variables()[c].name().to_string())
            .collect(),
        scores,
    })
}

/// Core search over column indices already sorted by ordering position.
fn greedy(
    data: &Dataset,
    target: usize,
    candidates: &[usize],
    config: &K2Config,
) -> (Vec<usize>, Vec<f64>) {
    let mut current: Vec<usize> = Vec::new();
    let mut best = family_log_score_by_index(data, target, &current, config.alpha);
    let mut scores = vec![best];
    while current.len() < config.max_parents {
        let mut step: Option<(usize, f64)> = None;
        for &c in candidates.iter().filter(|c| !current.contains(c)) {
            let mut trial = current.clone();
            trial.push(c);
            let s = family_log_score_by_index(data, target, &trial, config.alpha);
            if step.is_none_or(|(_, b)| s > b) {
                step = Some((c, s));
            }
        }
        match step {
            Some((c, s)) if s > best => {
                current.push(c);
                best = s;
                scores.push(s);
            }
            _ => break,
        }
    }
    (current, scores)
}

/// Sorted distinct words across the descriptions of a corpus.
pub fn vocabulary_of(experiences: &[Experience]) -> Vec<String> {
    let words: BTreeSet<&str> = experiences
        .iter()
        .flat_map(|e| e.description().iter())
        .collect();
    words.into_iter().map(str::to_string).collect()
}

/// Dataset with one column per affordance variable followed by one binary column per word.
pub fn word_dataset(
    affordance: &[Variable],
    vocabulary: &[String],
    experiences: &[Experience],
) -> Result<Dataset> {
    let mut vars = affordance.to_vec();
    vars.extend(vocabulary.iter().map(|w| Variable::word(w.clone())));
    let mut data = Dataset::new(vars)?;
    for e in experiences {
        let mut row = Vec::with_capacity(affordance.len() + vocabulary.len());
        for v in affordance {
            let value = e
                .state()
                .get(v.name())
                .ok_or_else(|| Error::Unbound(v.name().to_string()))?;
            row.push(v.require_index(value)?);
        }
        row.extend(
            vocabulary
                .iter()
                .map(|w| usize::from(e.description().contains(w))),
        );
        data.push_coded(row)?;
    }
    Ok(data)
}

/// Extends a fitted affordance network with one word node per vocabulary entry.
///
/// Parents are chosen by K2 among the affordance variables and the word CPTs are
/// estimated with pseudocount `cpt_alpha`. The affordance part is copied unchanged.
pub fn learn_word_layer(
    affordance: &Network,
    vocabulary: &[String],
    experiences: &[Experience],
    config: &K2Config,
    cpt_alpha: f64,
) -> Result<Network> {
    config.validate()?;
    if vocabulary.is_empty() {
        return Ok(affordance.clone());
    }
    let aff_vars: Vec<Variable> = affordance
        .variables()
        .iter()
        .filter(|v| !v.is_word())
        .cloned()
        .collect();
    let known: BTreeSet<&str> = vocabulary.iter().map(String::as_str).collect();
    let stray: BTreeSet<&str> = experiences
        .iter()
        .flat_map(|e| e.description().iter())
        .filter(|w| !known.contains(w))
        .collect();
    if !stray.is_empty() {
        warn!(
            "ignoring {} words outside the vocabulary: {}",
            stray.len(),
            stray.into_iter().collect::<Vec<_>>().join(" ")
        );
    }

    let data = word_dataset(&aff_vars, vocabulary, experiences)?;
    let mut cands: Vec<(usize, usize)> = aff_vars
        .iter()
        .enumerate()
        .map(|(col, v)| {
            config
                .position(v.name())
                .map(|pos| (pos, col))
                .ok_or_else(|| Error::Invalid(format!("`{}` missing from K2 ordering", v.name())))
        })
        .collect::<Result<Vec<_>>>()?;
    cands.sort_unstable();
    let cand_cols: Vec<usize> = cands.iter().map(|&(_, c)| c).collect();

    let parent_lists: Vec<Vec<String>> = (0..vocabulary.len())
        .into_par_iter()
        .map(|i| {
            let col = aff_vars.len() + i;
            if data.count(col, 1) < config.min_word_count {
                return Vec::new();
            }
            let (chosen, _) = greedy(&data, col, &cand_cols, config);
            cand_cols
                .iter()
                .filter(|c| chosen.contains(c))
                .map(|&c| aff_vars[c].name().to_string())
                .collect()
        })
        .collect();

    let parent_map: ParentMap = vocabulary.iter().cloned().zip(parent_lists).collect();
    let words: Vec<Variable> = vocabulary
        .iter()
        .map(|w| Variable::word(w.clone()))
        .collect();
    let net = affordance.extend(words, &parent_map)?;
    let names: Vec<&str> = vocabulary.iter().map(String::as_str).collect();
    let pseudocount = affordance.pseudocount();
    let mut fitted = net.fit_variables(&names, &data, cpt_alpha)?;
    fitted.set_pseudocount(pseudocount);
    Ok(fitted)
}

fn kind_rank(kind: VarKind) -> u8 {
    match kind {
        VarKind::Action => 0,
        VarKind::Feature => 1,
        VarKind::Effect => 2,
        VarKind::Word => 3,
    }
}

/// K2 over the affordance variables of `data`: each node may take parents only
/// among the nodes that precede it in the ordering.
pub fn learn_affordance_structure(data: &Dataset, config: &K2Config) -> Result<ParentMap> {
    config.validate()?;
    let mut nodes = Vec::new();
    for name in &config.ordering {
        if let Some(col) = data.column(name) {
            let var = &data.variables()[col];
            if var.is_word() {
                return Err(Error::Invalid(format!(
                    "word `{name}` in affordance ordering"
                )));
            }
            nodes.push(col);
        }
    }
    for pair in nodes.windows(2) {
        let (a, b) = (&data.variables()[pair[0]], &data.variables()[pair[1]]);
        if kind_rank(a.kind()) > kind_rank(b.kind()) {
            return Err(Error::Invalid(format!(
                "ordering places {} `{}` before {} `{}`",
                a.kind(),
                a.name(),
                b.kind(),
                b.name()
            )));
        }
    }
    let mut map = ParentMap::new();
    for (i, &col) in nodes.iter().enumerate() {
        let (chosen, _) = greedy(data, col, &nodes[..i], config);
        if !chosen.is_empty() {
            let parents = nodes[..i]
                .iter()
                .filter(|c| chosen.contains(c))
                .map(|&c| data.variables()[c].name().to_string())
                .collect();
            map.insert(data.variables()[col].name().to_string(), parents);
        }
    }
    Ok(map)
}

/// Plain-text structure report: header comments, then `word <- p1,p2` sorted by word.
pub fn structure_report(network: &Network, config: &K2Config) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# word-layer structure (K2 greedy search)");
    let _ = writeln!(out, "# ordering: {}", config.ordering.join(","));
    let _ = writeln!(
        out,
        "# max_parents: {}  score_alpha: {}  min_word_count: {}",
        config.max_parents, config.alpha, config.min_word_count
    );
    let mut words: Vec<&str> = network.words().collect();
    words.sort_unstable();
    for w in words {
        let parents = network.parents(w).unwrap_or_default();
        let _ = writeln!(out, "{w} <- {}", parents.join(","));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub k2: K2Config,
    /// Pseudocount for CPT estimation; 0 gives relative frequencies.
    pub cpt_alpha: f64,
    /// Learn the affordance structure with K2 instead of using the default edges.
    pub learn_affordances: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            k2: K2Config::default(),
            cpt_alpha: 0.0,
            learn_affordances: false,
        }
    }
}

/// Affordance states of a corpus as a dataset over the eight affordance variables.
pub fn state_dataset(experiences: &[Experience]) -> Result<Dataset> {
    Dataset::from_assignments(
        affordance_variables(),
        experiences.iter().map(Experience::state),
    )
}

/// Fits the affordance network on the states of `experiences`.
pub fn fit_affordances(experiences: &[Experience], config: &TrainConfig) -> Result<Network> {
    let data = state_dataset(experiences)?;
    let parents = if config.learn_affordances {
        learn_affordance_structure(&data, &config.k2)?
    } else {
        default_affordance_parents()
    };
    Network::new(affordance_variables(), &parents)?.fit_cpts(&data, config.cpt_alpha)
}

/// Full pipeline: affordance network, then the word layer over the corpus vocabulary.
pub fn train(experiences: &[Experience], config: &TrainConfig) -> Result<Network> {
    let vocabulary = vocabulary_of(experiences);
    let affordance = fit_affordances(experiences, config)?;
    learn_word_layer(
        &affordance,
        &vocabulary,
        experiences,
        &config.k2,
        config.cpt_alpha,
    )
}

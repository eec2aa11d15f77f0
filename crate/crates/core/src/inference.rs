//! Using a learned model: choose an action and object for an instruction,
//! predict the compatible (action, features) cells, and rescore recognizer
//! N-best lists against the objects in view.

use std::fmt;

use crate::bayes::{
    affordance_variables, Assignment, Distribution, Network, Variable, ACTION, COLOR, SHAPE, SIZE,
};
use crate::error::{Error, Result};
use crate::grounding::{bag_of_words, word_evidence, BagOfWords, WordEvidence};

/// Variables of an (action, features) cell, in cell order.
pub const CELL_VARIABLES: [&str; 4] = [ACTION, COLOR, SIZE, SHAPE];

/// An object on the table, described by its Color, Size and Shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SceneObject {
    id: String,
    features: Assignment,
}

impl SceneObject {
    pub fn new(id: impl Into<String>, color: &str, size: &str, shape: &str) -> Result<Self> {
        let features = Assignment::new()
            .with(COLOR, color)
            .with(SIZE, size)
            .with(SHAPE, shape);
        for v in affordance_variables() {
            if let Some(value) = features.get(v.name()) {
                v.require_index(value)?;
            }
        }
        Ok(SceneObject {
            id: id.into(),
            features,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn features(&self) -> &Assignment {
        &self.features
    }

    pub fn feature(&self, var: &str) -> &str {
        self.features.get(var).unwrap_or_default()
    }

    /// `id|color,size,shape`
    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let (id, feats) = line
            .split_once('|')
            .ok_or_else(|| "expected `id|color,size,shape`".to_string())?;
        let f: Vec<&str> = feats.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err("expected three comma-separated features".into());
        }
        SceneObject::new(id.trim(), f[0], f[1], f[2]).map_err(|e| e.to_string())
    }
}

impl fmt::Display for SceneObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.feature(COLOR),
            self.feature(SIZE),
            self.feature(SHAPE)
        )
    }
}

pub fn parse_scene(text: &str) -> Result<Vec<SceneObject>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| SceneObject::parse_line(l).map_err(|m| Error::parse(i + 1, m)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    pub tokens: Vec<String>,
    /// Probability of the hypothesis according to the recognizer.
    pub acoustic: f64,
}

/// Ranked recognizer output; never empty, probabilities positive.
#[derive(Clone, Debug, PartialEq)]
pub struct NBestList {
    hypotheses: Vec<Hypothesis>,
}

impl NBestList {
    pub fn new(hypotheses: Vec<Hypothesis>) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::Invalid("N-best list is empty".into()));
        }
        if let Some(h) = hypotheses
            .iter()
            .find(|h| !(h.acoustic.is_finite() && h.acoustic > 0.0))
        {
            return Err(Error::Invalid(format!(
                "acoustic probability must be positive, got {}",
                h.acoustic
            )));
        }
        Ok(NBestList { hypotheses })
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    /// One hypothesis per line: `probability|token sequence`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut hyps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (p, words) = line
                .split_once('|')
                .ok_or_else(|| Error::parse(i + 1, "expected `probability|tokens`"))?;
            let acoustic: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad probability `{}`", p.trim())))?;
            if !(acoustic.is_finite() && acoustic > 0.0) {
                return Err(Error::parse(i + 1, "probability must be positive"));
            }
            hyps.push(Hypothesis {
                tokens: words.split_whitespace().map(str::to_string).collect(),
                acoustic,
            });
        }
        if hyps.is_empty() {
            return Err(Error::parse(0, "N-best file has no hypotheses"));
        }
        NBestList::new(hyps)
    }
}

/// How the per-object score inside N-best rescoring treats the action.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ActionAggregation {
    /// Best action for the object.
    #[default]
    Max,
    /// Average over actions, i.e. a uniform prior over actions summed out.
    Marginalize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InferenceOptions {
    pub evidence: WordEvidence,
    pub aggregation: ActionAggregation,
}

/// `p(W | a, F)` for every (action, color, size, shape) cell, effects summed out
/// through the affordance network. Cells with zero prior probability get zero.
pub fn cell_likelihoods(
    network: &Network,
    bag: &BagOfWords,
    opts: &InferenceOptions,
) -> Result<Distribution> {
    let evidence = word_evidence(network, bag, opts.evidence);
    let joint = network.joint_table(&CELL_VARIABLES, &evidence)?;
    let prior = network.joint_table(&CELL_VARIABLES, &Assignment::new())?;
    let probs: Vec<f64> = joint
        .probs()
        .iter()
        .zip(prior.probs())
        .map(|(&j, &p)| if p > 0.0 { j / p } else { 0.0 })
        .collect();
    Ok(Distribution::from_parts(joint.variables().to_vec(), probs))
}

/// Posterior over the (Action, Color, Size, Shape) cells given the instruction,
/// using the network's own prior over actions and features.
pub fn predict_compatible_set(
    network: &Network,
    bag: &BagOfWords,
    opts: &InferenceOptions,
) -> Result<Distribution> {
    let evidence = word_evidence(network, bag, opts.evidence);
    network.marginal(&CELL_VARIABLES, &evidence)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankEntry {
    pub action: String,
    pub object: String,
    /// Index of the object in the scene.
    pub object_index: usize,
    pub posterior: f64,
}

/// Every (action, object) pair of the scene with `P(a, F_o | W)`, sorted by
/// decreasing posterior, ties by action then object order.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionObjectRanking {
    pub entries: Vec<RankEntry>,
    pub impossible: bool,
}

impl ActionObjectRanking {
    /// Global argmax, `None` when the request is impossible.
    pub fn best(&self) -> Option<&RankEntry> {
        if self.impossible {
            None
        } else {
            self.entries.first()
        }
    }

    /// Best action for one object, as listed per row of an instruction table.
    pub fn best_for(&self, object_index: usize) -> Option<&RankEntry> {
        self.entries.iter().find(|e| e.object_index == object_index)
    }
}

fn cell_index(cell_vars: &[Variable], action: usize, obj: &SceneObject) -> Result<usize> {
    let mut idx = action;
    for var in &cell_vars[1..] {
        idx = idx * var.cardinality() + var.require_index(obj.feature(var.name()))?;
    }
    Ok(idx)
}

/// Picks the (action, object) pair most consistent with the instruction.
///
/// The prior over actions and objects is uniform, so the posterior of a pair is
/// its word likelihood normalized over the whole (action, features) space.
pub fn select_action_object(
    network: &Network,
    bag: &BagOfWords,
    scene: &[SceneObject],
    opts: &InferenceOptions,
) -> Result<ActionObjectRanking> {
    if scene.is_empty() {
        return Err(Error::Invalid("scene has no objects".into()));
    }
    let lik = cell_likelihoods(network, bag, opts)?;
    let total = lik.total();
    let cell_vars = lik.variables().to_vec();
    let actions = cell_vars[0].clone();
    let mut entries = Vec::with_capacity(actions.cardinality() * scene.len());
    for (a, action) in actions.values().iter().enumerate() {
        for (o, obj) in scene.iter().enumerate() {
            let p = lik.probs()[cell_index(&cell_vars, a, obj)?];
            entries.push(RankEntry {
                action: action.clone(),
                object: obj.id().to_string(),
                object_index: o,
                posterior: if total > 0.0 { p / total } else { 0.0 },
            });
        }
    }
    // Entries were generated in (action, object) order; a stable sort keeps that on ties.
    entries.sort_by(|x, y| y.posterior.total_cmp(&x.posterior));
    let impossible = entries.iter().all(|e| e.posterior == 0.0);
    Ok(ActionObjectRanking {
        entries,
        impossible,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rescored {
    pub tokens: Vec<String>,
    pub acoustic: f64,
    /// Bracketed word product for each scene object, actions aggregated.
    pub per_object: Vec<f64>,
    /// Acoustic probability times the per-object scores summed over the scene.
    pub final_score: f64,
    /// Position in the input list.
    pub original_rank: usize,
}

/// Rescores each hypothesis with the context of the scene; best first.
pub fn rescore_nbest(
    network: &Network,
    nbest: &NBestList,
    scene: &[SceneObject],
    opts: &InferenceOptions,
) -> Result<Vec<Rescored>> {
    if scene.is_empty() {
        return Err(Error::Invalid("scene has no objects".into()));
    }
    let mut out = Vec::with_capacity(nbest.hypotheses().len());
    for (rank, h) in nbest.hypotheses().iter().enumerate() {
        let bag = bag_of_words(&h.tokens);
        let lik = cell_likelihoods(network, &bag, opts)?;
        let cell_vars = lik.variables().to_vec();
        let actions = cell_vars[0].clone();
        let per_object = scene
            .iter()
            .map(|obj| {
                let vals = (0..actions.cardinality())
                    .map(|a| cell_index(&cell_vars, a, obj).map(|i| lik.probs()[i]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(match opts.aggregation {
                    ActionAggregation::Max => vals.iter().copied().fold(0.0, f64::max),
                    ActionAggregation::Marginalize => vals.iter().sum::<f64>() / vals.len() as f64,
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let final_score = h.acoustic * per_object.iter().sum::<f64>();
        out.push(Rescored {
            tokens: h.tokens.clone(),
            acoustic: h.acoustic,
            per_object,
            final_score,
            original_rank: rank,
        });
    }
    out.sort_by(|x, y| y.final_score.total_cmp(&x.final_score));
    Ok(out)
}

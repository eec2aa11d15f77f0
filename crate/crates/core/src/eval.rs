//! Prediction accuracy on an instruction set, the one-parent baseline and
//! staged learning curves.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bayes::{affordance_variables, family_log_score_by_index, Network, ParentMap, Variable};
use crate::error::{Error, Result};
use crate::grounding::{BagOfWords, Experience};
use crate::inference::{predict_compatible_set, InferenceOptions, CELL_VARIABLES};
use crate::structure::{state_dataset, train, vocabulary_of, word_dataset, TrainConfig};

const DEFAULT_INSTRUCTIONS: &str = include_str!("../data/instructions.txt");

/// Training sizes of a default learning curve.
pub const DEFAULT_SIZES: [usize; 7] = [100, 300, 500, 700, 900, 1100, 1270];

/// An (Action, Color, Size, Shape) combination as value indices.
pub type Cell = [usize; 4];

fn cell_variables() -> Vec<Variable> {
    let all = affordance_variables();
    CELL_VARIABLES
        .iter()
        .map(|n| {
            all.iter()
                .find(|v| v.name() == *n)
                .cloned()
                .expect("cell variable")
        })
        .collect()
}

/// Flat index of a cell in a distribution over the cell variables.
pub fn cell_index(cell: &Cell) -> usize {
    let vars = cell_variables();
    cell.iter()
        .zip(&vars)
        .fold(0, |acc, (&v, var)| acc * var.cardinality() + v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub bag: BagOfWords,
    /// Cells judged correct; empty for impossible requests.
    pub compatible: BTreeSet<Cell>,
}

impl Instruction {
    pub fn is_impossible(&self) -> bool {
        self.compatible.is_empty()
    }

    /// `w1 w2 ...|action,color,size,shape;...`, with `*` for any value and
    /// `IMPOSSIBLE` for an empty set.
    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let (words, cells) = line
            .split_once('|')
            .ok_or_else(|| "expected `words|cells`".to_string())?;
        let bag = BagOfWords::parse(words);
        if bag.is_empty() {
            return Err("instruction has no words".into());
        }
        let cells = cells.trim();
        let mut compatible = BTreeSet::new();
        if cells != "IMPOSSIBLE" {
            let vars = cell_variables();
            for pattern in cells.split(';') {
                let fields: Vec<&str> = pattern.split(',').map(str::trim).collect();
                if fields.len() != 4 {
                    return Err(format!("cell `{pattern}` needs four fields"));
                }
                let mut choices = Vec::with_capacity(4);
                for (f, var) in fields.iter().zip(&vars) {
                    if *f == "*" {
                        choices.push((0..var.cardinality()).collect::<Vec<_>>());
                    } else {
                        let i = var
                            .index_of(f)
                            .ok_or_else(|| format!("`{}` has no value `{f}`", var.name()))?;
                        choices.push(vec![i]);
                    }
                }
                for &a in &choices[0] {
                    for &c in &choices[1] {
                        for &z in &choices[2] {
                            for &s in &choices[3] {
                                compatible.insert([a, c, z, s]);
                            }
                        }
                    }
                }
            }
        }
        Ok(Instruction { bag, compatible })
    }
}

pub fn parse_instructions(text: &str) -> Result<Vec<Instruction>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| Instruction::parse_line(l).map_err(|m| Error::parse(i + 1, m)))
        .collect()
}

/// The bundled 54-instruction test set.
pub fn default_instructions() -> Vec<Instruction> {
    parse_instructions(DEFAULT_INSTRUCTIONS).expect("bundled instructions parse")
}

/// Posterior mass the model puts on the instruction's compatible cells.
pub fn soft_accuracy(
    network: &Network,
    instruction: &Instruction,
    opts: &InferenceOptions,
) -> Result<f64> {
    let dist = predict_compatible_set(network, &instruction.bag, opts)?;
    let mass: f64 = instruction
        .compatible
        .iter()
        .map(|c| dist.probs()[cell_index(c)])
        .sum();
    Ok(mass.clamp(0.0, 1.0))
}

fn best_is_compatible(
    network: &Network,
    instruction: &Instruction,
    opts: &InferenceOptions,
) -> Result<bool> {
    let dist = predict_compatible_set(network, &instruction.bag, opts)?;
    Ok(dist.argmax().is_some_and(|i| {
        let v = dist.values_at(i);
        instruction.compatible.contains(&[v[0], v[1], v[2], v[3]])
    }))
}

/// Fraction of instructions whose most probable cell is compatible.
pub fn hard_accuracy(
    network: &Network,
    instructions: &[Instruction],
    opts: &InferenceOptions,
) -> Result<f64> {
    if instructions.is_empty() {
        return Err(Error::Invalid("instruction set is empty".into()));
    }
    let mut hits = 0usize;
    for ins in instructions {
        hits += usize::from(best_is_compatible(network, ins, opts)?);
    }
    Ok(hits as f64 / instructions.len() as f64)
}

/// True when the model assigns no mass to any cell.
pub fn detects_impossible(
    network: &Network,
    instruction: &Instruction,
    opts: &InferenceOptions,
) -> Result<bool> {
    Ok(predict_compatible_set(network, &instruction.bag, opts)?.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalSummary {
    /// Mean soft accuracy over possible instructions.
    pub soft: f64,
    /// Hard accuracy over possible instructions.
    pub hard: f64,
    /// Fraction of impossible instructions given an all-zero result; `None` if there are none.
    pub detection_rate: Option<f64>,
    pub possible: usize,
    pub impossible: usize,
}

/// Soft and hard accuracy over the possible instructions, detection rate over the rest.
pub fn evaluate(
    network: &Network,
    instructions: &[Instruction],
    opts: &InferenceOptions,
) -> Result<EvalSummary> {
    let (impossible, possible): (Vec<&Instruction>, Vec<&Instruction>) =
        instructions.iter().partition(|i| i.is_impossible());
    if possible.is_empty() {
        return Err(Error::Invalid(
            "instruction set has no possible instructions".into(),
        ));
    }
    let mut soft = 0.0;
    let mut hits = 0usize;
    for ins in &possible {
        soft += soft_accuracy(network, ins, opts)?;
        hits += usize::from(best_is_compatible(network, ins, opts)?);
    }
    let mut detected = 0usize;
    for ins in &impossible {
        detected += usize::from(detects_impossible(network, ins, opts)?);
    }
    Ok(EvalSummary {
        soft: soft / possible.len() as f64,
        hard: hits as f64 / possible.len() as f64,
        detection_rate: (!impossible.is_empty()).then(|| detected as f64 / impossible.len() as f64),
        possible: possible.len(),
        impossible: impossible.len(),
    })
}

/// Parentless affordance nodes, and each word tied to the single affordance
/// variable with the best family score (earliest in the ordering on ties).
pub fn build_baseline_network(experiences: &[Experience], config: &TrainConfig) -> Result<Network> {
    let aff_vars = affordance_variables();
    let affordance = Network::new(aff_vars.clone(), &ParentMap::new())?
        .fit_cpts(&state_dataset(experiences)?, config.cpt_alpha)?;
    let vocabulary = vocabulary_of(experiences);
    if vocabulary.is_empty() {
        return Ok(affordance);
    }
    let data = word_dataset(&aff_vars, &vocabulary, experiences)?;
    let mut order: Vec<usize> = Vec::with_capacity(aff_vars.len());
    for name in &config.k2.ordering {
        if let Some(col) = aff_vars.iter().position(|v| v.name() == name) {
            order.push(col);
        }
    }
    for (col, v) in aff_vars.iter().enumerate() {
        if !order.contains(&col) {
            return Err(Error::Invalid(format!(
                "`{}` missing from K2 ordering",
                v.name()
            )));
        }
    }
    let parents: ParentMap = vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let target = aff_vars.len() + i;
            let mut best: Option<(usize, f64)> = None;
            for &c in &order {
                let s = family_log_score_by_index(&data, target, &[c], config.k2.alpha);
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((c, s));
                }
            }
            let parent = best.map(|(c, _)| aff_vars[c].name().to_string());
            (w.clone(), parent.into_iter().collect())
        })
        .collect();
    let words: Vec<Variable> = vocabulary
        .iter()
        .map(|w| Variable::word(w.clone()))
        .collect();
    let names: Vec<&str> = vocabulary.iter().map(String::as_str).collect();
    affordance
        .extend(words, &parents)?
        .fit_variables(&names, &data, config.cpt_alpha)
}

/// Which model a learning curve trains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Topology {
    #[default]
    Affordance,
    Baseline,
}

pub fn train_topology(
    experiences: &[Experience],
    config: &TrainConfig,
    topology: Topology,
) -> Result<Network> {
    match topology {
        Topology::Affordance => train(experiences, config),
        Topology::Baseline => build_baseline_network(experiences, config),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub train_size: usize,
    /// (soft, hard) per repetition.
    pub repetitions: Vec<(f64, f64)>,
}

impl CurvePoint {
    pub fn median_soft(&self) -> f64 {
        median(self.repetitions.iter().map(|r| r.0).collect())
    }

    pub fn median_hard(&self) -> f64 {
        median(self.repetitions.iter().map(|r| r.1).collect())
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StagedConfig {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    pub train: TrainConfig,
    pub topology: Topology,
    pub inference: InferenceOptions,
}

impl Default for StagedConfig {
    fn default() -> Self {
        StagedConfig {
            sizes: DEFAULT_SIZES.to_vec(),
            repetitions: 50,
            seed: 0,
            train: TrainConfig::default(),
            topology: Topology::default(),
            inference: InferenceOptions::default(),
        }
    }
}

fn repetition_seed(seed: u64, size: usize, rep: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((size as u64) << 32) | rep as u64);
    rand::Rng::random(&mut rng)
}

/// Trains on random subsets of each size and scores the instruction set.
/// The full corpus size gets a single repetition.
pub fn staged_learning(
    corpus: &[Experience],
    instructions: &[Instruction],
    config: &StagedConfig,
) -> Result<Vec<CurvePoint>> {
    if let Some(&s) = config.sizes.iter().find(|&&s| s > corpus.len() || s == 0) {
        return Err(Error::Invalid(format!(
            "training size {s} outside 1..={}",
            corpus.len()
        )));
    }
    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&size| {
            let reps = if size == corpus.len() {
                1
            } else {
                config.repetitions
            };
            (0..reps).map(move |r| (size, r))
        })
        .collect();
    let scores: Vec<(usize, (f64, f64))> = jobs
        .par_iter()
        .map(|&(size, rep)| {
            let mut rng = ChaCha8Rng::seed_from_u64(repetition_seed(config.seed, size, rep));
            let mut idx = sample(&mut rng, corpus.len(), size).into_vec();
            idx.sort_unstable();
            let subset: Vec<Experience> = idx.into_iter().map(|i| corpus[i].clone()).collect();
            let net = train_topology(&subset, &config.train, config.topology)?;
            let s = evaluate(&net, instructions, &config.inference)?;
            Ok((size, (s.soft, s.hard)))
        })
        .collect::<Result<_>>()?;
    let mut points: Vec<CurvePoint> = Vec::new();
    for (size, score) in scores {
        match points.last_mut() {
            Some(p) if p.train_size == size => p.repetitions.push(score),
            _ => points.push(CurvePoint {
                train_size: size,
                repetitions: vec![score],
            }),
        }
    }
    Ok(points)
}

/// `size,repetition,soft,hard` with a header line.
pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("size,repetition,soft,hard\n");
    for p in points {
        for (r, (soft, hard)) in p.repetitions.iter().enumerate() {
            let _ = writeln!(out, "{},{},{:.6},{:.6}", p.train_size, r, soft, hard);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{affordance_network, Assignment, AFFORDANCE_VARIABLES};
    use crate::datagen::{build_corpus, generate_description, BalanceState, Lexicon, WorldModel};
    use rand::SeedableRng;

    fn prior_model() -> Network {
        let parents: ParentMap = [("the".to_string(), vec![])].into_iter().collect();
        affordance_network()
            .with_cpt("Action", vec![vec![0.7, 0.2, 0.1]])
            .unwrap()
            .extend(vec![Variable::word("the")], &parents)
            .unwrap()
            .with_cpt("the", vec![vec![0.1, 0.9]])
            .unwrap()
    }

    fn ins(line: &str) -> Instruction {
        Instruction::parse_line(line).unwrap()
    }

    #[test]
    fn wildcards_expand() {
        assert_eq!(ins("tap the ball|tap,*,*,sphere").compatible.len(), 12);
        assert_eq!(ins("x|*,*,*,*").compatible.len(), 72);
        assert_eq!(
            ins("x|tap,blue,small,box;tap,blue,small,box")
                .compatible
                .len(),
            1
        );
        assert!(ins("the small cube rolls|IMPOSSIBLE").is_impossible());
        assert!(Instruction::parse_line("x|tap,blue,box").is_err());
        assert!(Instruction::parse_line("x|tap,red,small,box").is_err());
        assert!(Instruction::parse_line("|tap,*,*,*").is_err());
        assert!(matches!(
            parse_instructions("ok|*,*,*,*\nbad"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn bundled_set_shape() {
        let set = default_instructions();
        assert_eq!(set.len(), 54);
        assert_eq!(set.iter().filter(|i| i.is_impossible()).count(), 11);
        let vocab = Lexicon::default().vocabulary();
        for i in &set {
            assert!(i.bag.iter().all(|w| vocab.contains(w)), "{}", i.bag);
        }
    }

    /// A cell fits a bag when some reachable world state with those values can
    /// produce every word of the bag in some description.
    #[test]
    fn bundled_compatible_sets_match_the_generator() {
        let world = WorldModel::default();
        let mut lex = Lexicon::default();
        lex.fillers.values_mut().for_each(|p| *p = 1.0);
        lex.mention.values_mut().for_each(|p| *p = 1.0);
        let vars = affordance_variables();
        let cards: Vec<usize> = vars.iter().map(Variable::cardinality).collect();
        let total: usize = cards.iter().product();
        let mut reachable: Vec<(Cell, BTreeSet<String>)> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for mut code in 0..total {
            let mut state = Assignment::new();
            for (v, &k) in vars.iter().zip(&cards).rev() {
                state.bind(v.name(), v.values()[code % k].clone());
                code /= k;
            }
            if world.network().joint_probability(&state).unwrap() == 0.0 {
                continue;
            }
            let mut words = BTreeSet::new();
            let mut balance = BalanceState::new();
            for _ in 0..12 {
                words.extend(generate_description(&state, &lex, &mut balance, &mut rng).unwrap());
            }
            let idx = |n: &str| {
                let v = vars.iter().find(|v| v.name() == n).unwrap();
                v.index_of(state.get(n).unwrap()).unwrap()
            };
            reachable.push((
                [idx("Action"), idx("Color"), idx("Size"), idx("Shape")],
                words,
            ));
        }
        assert_eq!(AFFORDANCE_VARIABLES.len(), vars.len());
        for i in default_instructions() {
            let oracle: BTreeSet<Cell> = reachable
                .iter()
                .filter(|(_, w)| i.bag.iter().all(|b| w.contains(b)))
                .map(|(c, _)| *c)
                .collect();
            assert_eq!(oracle, i.compatible, "{}", i.bag);
        }
    }

    #[test]
    fn soft_accuracy_is_mass_on_compatible_cells() {
        let net = prior_model();
        let opts = InferenceOptions::default();
        let s = soft_accuracy(&net, &ins("the|grasp,*,*,*"), &opts).unwrap();
        assert!((s - 0.7).abs() < 1e-12);
        let all = soft_accuracy(&net, &ins("the|*,*,*,*"), &opts).unwrap();
        assert!((all - 1.0).abs() < 1e-12);
        let none = soft_accuracy(&net, &ins("the|IMPOSSIBLE"), &opts).unwrap();
        assert_eq!(none, 0.0);
    }

    #[test]
    fn hard_accuracy_counts_argmax_hits() {
        let net = prior_model();
        let opts = InferenceOptions::default();
        let mut set = vec![
            ins("the|grasp,*,*,*"),
            ins("the|tap,*,*,*"),
            ins("the|*,lightgreen,small,sphere"),
            ins("the|grasp,blue,*,*"),
        ];
        assert_eq!(hard_accuracy(&net, &set, &opts).unwrap(), 0.5);
        set.reverse();
        assert_eq!(hard_accuracy(&net, &set, &opts).unwrap(), 0.5);
        assert!(hard_accuracy(&net, &[], &opts).is_err());
    }

    #[test]
    fn evaluate_scores_impossible_requests_separately() {
        let net = prior_model();
        let set = vec![ins("the|grasp,*,*,*"), ins("the|IMPOSSIBLE")];
        let s = evaluate(&net, &set, &InferenceOptions::default()).unwrap();
        assert!((s.soft - 0.7).abs() < 1e-12);
        assert_eq!(s.hard, 1.0);
        assert_eq!(s.detection_rate, Some(0.0));
        assert_eq!((s.possible, s.impossible), (1, 1));
    }

    #[test]
    fn baseline_has_one_parent_per_word() {
        let c = build_corpus(&WorldModel::default(), &Lexicon::default(), 100, 3, None, 4).unwrap();
        let net = build_baseline_network(&c.clean, &TrainConfig::default()).unwrap();
        for v in AFFORDANCE_VARIABLES {
            assert!(net.parents(v).unwrap().is_empty());
        }
        for w in net.words() {
            assert_eq!(net.parents(w).unwrap().len(), 1, "{w}");
        }
        assert_eq!(net.parents("blue").unwrap(), vec!["Color"]);
        assert_eq!(net.parents("ball").unwrap(), vec!["Shape"]);
    }

    #[test]
    fn staged_learning_smoke() {
        let c = build_corpus(&WorldModel::default(), &Lexicon::default(), 20, 2, None, 4).unwrap();
        let set = default_instructions();
        let cfg = StagedConfig {
            sizes: vec![1, 40],
            repetitions: 2,
            seed: 3,
            ..StagedConfig::default()
        };
        let a = staged_learning(&c.clean, &set, &cfg).unwrap();
        assert_eq!(a, staged_learning(&c.clean, &set, &cfg).unwrap());
        assert_eq!(a[0].repetitions.len(), 2);
        assert_eq!(a[1].repetitions.len(), 1);
        for p in &a {
            assert!(p
                .repetitions
                .iter()
                .all(|(s, h)| (0.0..=1.0).contains(s) && (0.0..=1.0).contains(h)));
        }
        let csv = curve_csv(&a);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("size,repetition,soft,hard\n1,0,"));
        let too_big = StagedConfig {
            sizes: vec![41],
            ..cfg
        };
        assert!(staged_learning(&c.clean, &set, &too_big).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(vec![]).is_nan());
    }
}

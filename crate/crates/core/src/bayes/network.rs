use std::collections::{BTreeMap, HashMap};

use crate::bayes::{Assignment, Dataset, Distribution, Variable};
use crate::error::{Error, Result};

/// Variable name to its ordered parent list. Variables missing from the map are roots.
pub type ParentMap = BTreeMap<String, Vec<String>>;

/// Conditional probability table, one row per parent configuration.
///
/// Rows are indexed in mixed radix over the parent values, first parent most
/// significant. Each row holds a distribution over the child's values.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    cardinality: usize,
    parent_cards: Vec<usize>,
    probs: Vec<f64>,
}

impl Cpt {
    pub(crate) fn uniform(cardinality: usize, parent_cards: Vec<usize>) -> Self {
        let rows: usize = parent_cards.iter().product();
        Cpt {
            cardinality,
            parent_cards,
            probs: vec![1.0 / cardinality as f64; rows * cardinality],
        }
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn parent_cardinalities(&self) -> &[usize] {
        &self.parent_cards
    }

    pub fn rows(&self) -> usize {
        self.probs.len() / self.cardinality
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.probs[row * self.cardinality..(row + 1) * self.cardinality]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, row: usize, value: usize) -> f64 {
        self.probs[row * self.cardinality + value]
    }

    /// Row index for parent values given in parent order.
    pub fn row_index(&self, parent_values: &[usize]) -> usize {
        parent_values
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&v, &c)| acc * c + v)
    }
}

/// A discrete Bayesian network. Immutable once built: fitting returns a new value.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    variables: Vec<Variable>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    order: Vec<usize>,
    cpts: Vec<Cpt>,
    pseudocount: f64,
}

impl Network {
    /// Builds a network with uniform placeholder CPTs.
    pub fn new(variables: Vec<Variable>, parent_map: &ParentMap) -> Result<Self> {
        let mut index = HashMap::with_capacity(variables.len());
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.name().to_string(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name().to_string()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };

        let mut parents = vec![Vec::new(); variables.len()];
        for (child, plist) in parent_map {
            let c = lookup(child)?;
            let mut ps = Vec::with_capacity(plist.len());
            for p in plist {
                let pi = lookup(p)?;
                if pi == c {
                    return Err(Error::Cycle(child.clone()));
                }
                if ps.contains(&pi) {
                    return Err(Error::Invalid(format!(
                        "`{p}` listed twice as parent of `{child}`"
                    )));
                }
                if variables[pi].is_word() {
                    return Err(Error::WordParent {
                        child: child.clone(),
                        parent: p.clone(),
                    });
                }
                ps.push(pi);
            }
            parents[c] = ps;
        }

        let order = topological_order(&variables, &parents)?;
        let cpts = variables
            .iter()
            .zip(&parents)
            .map(|(v, ps)| {
                Cpt::uniform(
                    v.cardinality(),
                    ps.iter().map(|&p| variables[p].cardinality()).collect(),
                )
            })
            .collect();

        Ok(Network {
            variables,
            index,
            parents,
            order,
            cpts,
            pseudocount: 0.0,
        })
    }

    /// Adds variables (and their parent lists) keeping every existing CPT.
    pub fn extend(&self, variables: Vec<Variable>, parent_map: &ParentMap) -> Result<Self> {
        let mut all = self.variables.clone();
        all.extend(variables);
        let mut map = self.parent_map();
        for (k, v) in parent_map {
            if self.index.contains_key(k) {
                return Err(Error::Invalid(format!(
                    "`{k}` already exists in the network"
                )));
            }
            map.insert(k.clone(), v.clone());
        }
        let mut net = Network::new(all, &map)?;
        net.cpts[..self.cpts.len()].clone_from_slice(&self.cpts);
        net.pseudocount = self.pseudocount;
        Ok(net)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.index_of(name).map(|i| &self.variables[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn parents(&self, name: &str) -> Option<Vec<&str>> {
        self.index_of(name).map(|i| {
            self.parents[i]
                .iter()
                .map(|&p| self.variables[p].name())
                .collect()
        })
    }

    pub fn parent_indices(&self, var: usize) -> &[usize] {
        &self.parents[var]
    }

    pub fn parent_map(&self) -> ParentMap {
        self.variables
            .iter()
            .zip(&self.parents)
            .filter(|(_, ps)| !ps.is_empty())
            .map(|(v, ps)| {
                (
                    v.name().to_string(),
                    ps.iter()
                        .map(|&p| self.variables[p].name().to_string())
                        .collect(),
                )
            })
            .collect()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn cpt(&self, var: usize) -> &Cpt {
        &self.cpts[var]
    }

    pub fn cpt_of(&self, name: &str) -> Option<&Cpt> {
        self.index_of(name).map(|i| &self.cpts[i])
    }

    pub fn pseudocount(&self) -> f64 {
        self.pseudocount
    }

    /// Names of the word variables, in network order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.variables
            .iter()
            .filter(|v| v.is_word())
            .map(Variable::name)
    }

    /// Replaces a CPT by hand. Rows must be non-negative and sum to one within 1e-9;
    /// they are renormalized exactly.
    pub fn set_cpt(&mut self, name: &str, rows: Vec<Vec<f64>>) -> Result<()> {
        let var = self.require(name)?;
        let cpt = &self.cpts[var];
        let bad = |reason: String| Error::InvalidCpt {
            var: name.to_string(),
            reason,
        };
        if rows.len() != cpt.rows() {
            return Err(bad(format!(
                "expected {} rows, got {}",
                cpt.rows(),
                rows.len()
            )));
        }
        let card = cpt.cardinality();
        let mut probs = Vec::with_capacity(rows.len() * card);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != card {
                return Err(bad(format!(
                    "row {r} has {} entries, expected {card}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(bad(format!("row {r} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(bad(format!("row {r} sums to {sum}")));
            }
            probs.extend(row.iter().map(|p| p / sum));
        }
        self.cpts[var].probs = probs;
        Ok(())
    }

    pub fn with_cpt(mut self, name: &str, rows: Vec<Vec<f64>>) -> Result<Self> {
        self.set_cpt(name, rows)?;
        Ok(self)
    }

    pub(crate) fn replace_probs(&mut self, var: usize, probs: Vec<f64>) {
        debug_assert_eq!(probs.len(), self.cpts[var].probs.len());
        self.cpts[var].probs = probs;
    }

    pub(crate) fn set_pseudocount(&mut self, alpha: f64) {
        self.pseudocount = alpha;
    }

    /// Estimates every CPT from complete records:
    /// `(count + alpha) / (row_total + alpha * cardinality)`.
    ///
    /// With `alpha == 0` this is the relative frequency; a parent configuration never
    /// seen in the data then gets a uniform row.
    pub fn fit_cpts(&self, data: &Dataset, alpha: f64) -> Result<Self> {
        let all: Vec<usize> = (0..self.variables.len()).collect();
        self.fit_indices(&all, data, alpha)
    }

    /// Like [`Network::fit_cpts`] but only re-estimates the named variables.
    pub fn fit_variables(&self, names: &[&str], data: &Dataset, alpha: f64) -> Result<Self> {
        let vars = names
            .iter()
            .map(|n| self.require(n))
            .collect::<Result<Vec<_>>>()?;
        self.fit_indices(&vars, data, alpha)
    }

    fn fit_indices(&self, vars: &[usize], data: &Dataset, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Pseudocount(alpha));
        }
        let mut net = self.clone();
        for &var in vars {
            let column = |i: usize| -> Result<usize> {
                let v = &self.variables[i];
                let c = data
                    .column(v.name())
                    .ok_or_else(|| Error::Unbound(v.name().to_string()))?;
                if data.variables()[c].values() != v.values() {
                    return Err(Error::Invalid(format!(
                        "dataset column `{}` has different values than the network variable",
                        v.name()
                    )));
                }
                Ok(c)
            };
            let child_col = column(var)?;
            let parent_cols = self.parents[var]
                .iter()
                .map(|&p| column(p))
                .collect::<Result<Vec<_>>>()?;

            let cpt = &self.cpts[var];
            let card = cpt.cardinality();
            let mut counts = vec![0.0f64; cpt.probs.len()];
            for row in data.rows() {
                let r = parent_cols
                    .iter()
                    .zip(&cpt.parent_cards)
                    .fold(0, |acc, (&c, &k)| acc * k + row[c]);
                counts[r * card + row[child_col]] += 1.0;
            }
            let mut probs = counts;
            for row in probs.chunks_mut(card) {
                let total: f64 = row.iter().sum();
                let denom = total + alpha * card as f64;
                if denom > 0.0 {
                    row.iter_mut().for_each(|c| *c = (*c + alpha) / denom);
                } else {
                    row.fill(1.0 / card as f64);
                }
            }
            net.cpts[var].probs = probs;
        }
        net.pseudocount = alpha;
        Ok(net)
    }

    /// Encodes a full assignment; every variable must be bound and no others.
    pub(crate) fn encode_full(&self, a: &Assignment) -> Result<Vec<usize>> {
        let partial = self.encode_partial(a)?;
        partial
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Unbound(self.variables[i].name().to_string())))
            .collect()
    }

    pub(crate) fn encode_partial(&self, a: &Assignment) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; self.variables.len()];
        for (name, value) in a.iter() {
            let i = self.require(name)?;
            out[i] = Some(self.variables[i].require_index(value)?);
        }
        Ok(out)
    }

    #[inline]
    fn factor(&self, var: usize, state: &[usize]) -> f64 {
        let cpt = &self.cpts[var];
        let row = self.parents[var]
            .iter()
            .zip(&cpt.parent_cards)
            .fold(0, |acc, (&p, &k)| acc * k + state[p]);
        cpt.prob(row, state[var])
    }

    /// Log of the product of all CPT factors for a full assignment.
    pub fn joint_log_probability(&self, a: &Assignment) -> Result<f64> {
        let state = self.encode_full(a)?;
        Ok(self.log_prob_coded(&state))
    }

    pub(crate) fn log_prob_coded(&self, state: &[usize]) -> f64 {
        (0..self.variables.len())
            .map(|v| self.factor(v, state).ln())
            .sum()
    }

    pub fn joint_probability(&self, a: &Assignment) -> Result<f64> {
        self.joint_log_probability(a).map(f64::exp)
    }

    /// Unnormalized table `P(query = q, evidence)` for every joint value `q` of the query.
    ///
    /// Only the ancestral closure of the query and evidence variables is enumerated;
    /// every other variable sums out to one.
    pub fn joint_table(&self, query: &[&str], evidence: &Assignment) -> Result<Distribution> {
        let q = query
            .iter()
            .map(|n| self.require(n))
            .collect::<Result<Vec<_>>>()?;
        for (i, v) in q.iter().enumerate() {
            if q[..i].contains(v) {
                return Err(Error::Invalid(format!("`{}` queried twice", query[i])));
            }
        }
        let ev = self.encode_partial(evidence)?;
        if let Some(&v) = q.iter().find(|&&v| ev[v].is_some()) {
            return Err(Error::Overlap(self.variables[v].name().to_string()));
        }
        let probs = self.enumerate(&q, &ev);
        Ok(Distribution::new(
            q.iter().map(|&v| self.variables[v].clone()).collect(),
            probs,
        ))
    }

    /// Exact posterior over the joint values of `query` given `evidence`.
    ///
    /// When the evidence has probability zero the result is all zeros.
    pub fn marginal(&self, query: &[&str], evidence: &Assignment) -> Result<Distribution> {
        Ok(self.joint_table(query, evidence)?.normalized())
    }

    fn ancestral_closure(&self, seeds: impl Iterator<Item = usize>) -> Vec<bool> {
        let mut keep = vec![false; self.variables.len()];
        let mut stack: Vec<usize> = seeds.collect();
        while let Some(v) = stack.pop() {
            if !keep[v] {
                keep[v] = true;
                stack.extend(self.parents[v].iter().copied());
            }
        }
        keep
    }

    fn enumerate(&self, query: &[usize], evidence: &[Option<usize>]) -> Vec<f64> {
        let bound = evidence
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|_| i));
        let relevant = self.ancestral_closure(query.iter().copied().chain(bound));

        let mut state = vec![0usize; self.variables.len()];
        let mut depth_of = vec![0usize; self.variables.len()];
        let mut free = Vec::new();
        for &v in &self.order {
            if !relevant[v] {
                continue;
            }
            match evidence[v] {
                Some(val) => state[v] = val,
                None => {
                    free.push(v);
                    depth_of[v] = free.len();
                }
            }
        }
        // A factor is multiplied in at the depth where its whole family is assigned.
        let mut factors_at = vec![Vec::new(); free.len() + 1];
        for &v in &self.order {
            if relevant[v] {
                let d = self.parents[v]
                    .iter()
                    .map(|&p| depth_of[p])
                    .chain(std::iter::once(depth_of[v]))
                    .max()
                    .unwrap_or(0);
                factors_at[d].push(v);
            }
        }

        let qcards: Vec<usize> = query
            .iter()
            .map(|&v| self.variables[v].cardinality())
            .collect();
        let mut out = vec![0.0; qcards.iter().product()];
        let base: f64 = factors_at[0]
            .iter()
            .map(|&v| self.factor(v, &state))
            .product();
        if base > 0.0 {
            let plan = Plan {
                free: &free,
                factors_at: &factors_at,
                query,
                qcards: &qcards,
            };
            self.descend(&plan, 0, &mut state, base, &mut out);
        }
        out
    }

    fn descend(
        &self,
        plan: &Plan<'_>,
        depth: usize,
        state: &mut [usize],
        weight: f64,
        out: &mut [f64],
    ) {
        if depth == plan.free.len() {
            let idx = plan
                .query
                .iter()
                .zip(plan.qcards)
                .fold(0, |acc, (&v, &k)| acc * k + state[v]);
            out[idx] += weight;
            return;
        }
        let v = plan.free[depth];
        for val in 0..self.variables[v].cardinality() {
            state[v] = val;
            let mut w = weight;
            for &f in &plan.factors_at[depth + 1] {
                w *= self.factor(f, state);
                if w == 0.0 {
                    break;
                }
            }
            if w != 0.0 {
                self.descend(plan, depth + 1, state, w, out);
            }
        }
    }
}

struct Plan<'a> {
    free: &'a [usize],
    factors_at: &'a [Vec<usize>],
    query: &'a [usize],
    qcards: &'a [usize],
}

fn topological_order(variables: &[Variable], parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = variables.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    // Smallest index first keeps the order stable and close to declaration order.
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
        return Err(Error::Cycle(variables[stuck].name().to_string()));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{VarKind, ABSENT, PRESENT};

    fn binary(name: &str) -> Variable {
        Variable::new(name, ["a", "b"], VarKind::Feature).unwrap()
    }

    fn parents(edges: &[(&str, &[&str])]) -> ParentMap {
        edges
            .iter()
            .map(|(c, ps)| (c.to_string(), ps.iter().map(|p| p.to_string()).collect()))
            .collect()
    }

    #[test]
    fn single_node_gets_uniform_placeholder() {
        let net = Network::new(vec![binary("A")], &ParentMap::new()).unwrap();
        assert_eq!(net.cpt(0).row(0), &[0.5, 0.5]);
        let p = net
            .joint_probability(&Assignment::new().with("A", "a"))
            .unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Network::new(
            vec![binary("A"), binary("B")],
            &parents(&[("A", &["B"]), ("B", &["A"])]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
    }

    #[test]
    fn word_parent_and_unknown_names_are_rejected() {
        let vars = vec![binary("A"), Variable::word("w1"), Variable::word("w2")];
        let err = Network::new(vars.clone(), &parents(&[("w2", &["w1"])])).unwrap_err();
        assert!(matches!(err, Error::WordParent { .. }));
        let err = Network::new(vars, &parents(&[("w2", &["Z"])])).unwrap_err();
        assert!(matches!(err, Error::UnknownVariable(_)));
    }

    #[test]
    fn laplace_estimate_on_binary_root() {
        let net = Network::new(vec![binary("A")], &ParentMap::new()).unwrap();
        let mut data = Dataset::new(net.variables().to_vec()).unwrap();
        for i in 0..10 {
            let v = if i < 3 { "a" } else { "b" };
            data.push(&Assignment::new().with("A", v)).unwrap();
        }
        let fitted = net.fit_cpts(&data, 1.0).unwrap();
        let row = fitted.cpt(0).row(0);
        assert!((row[0] - 4.0 / 12.0).abs() < 1e-15);
        assert!((row[1] - 8.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn empty_dataset_gives_uniform_rows() {
        let net = Network::new(vec![binary("A"), binary("B")], &parents(&[("B", &["A"])])).unwrap();
        let data = Dataset::new(net.variables().to_vec()).unwrap();
        for alpha in [0.0, 1.0] {
            let fitted = net.fit_cpts(&data, alpha).unwrap();
            for v in 0..2 {
                assert!(fitted.cpt(v).probs().iter().all(|&p| p == 0.5));
            }
        }
    }

    #[test]
    fn deterministic_child_with_tiny_pseudocount() {
        let net = Network::new(vec![binary("A"), binary("B")], &parents(&[("B", &["A"])])).unwrap();
        let mut data = Dataset::new(net.variables().to_vec()).unwrap();
        for i in 0..100 {
            let v = if i % 2 == 0 { "a" } else { "b" };
            data.push(&Assignment::new().with("A", v).with("B", v))
                .unwrap();
        }
        let fitted = net.fit_cpts(&data, 0.001).unwrap();
        let cpt = fitted.cpt(1);
        assert!(cpt.prob(0, 0) >= 0.99998);
        assert!(cpt.prob(1, 1) >= 0.99998);
    }

    #[test]
    fn record_with_unknown_value_is_an_error() {
        let mut data = Dataset::new(vec![binary("A")]).unwrap();
        assert!(data.push(&Assignment::new().with("A", "zzz")).is_err());
        assert!(data.push(&Assignment::new()).is_err());
    }

    #[test]
    fn chain_joint_matches_hand_product() {
        let net = Network::new(
            vec![binary("A"), binary("B"), binary("C")],
            &parents(&[("B", &["A"]), ("C", &["B"])]),
        )
        .unwrap()
        .with_cpt("A", vec![vec![0.3, 0.7]])
        .unwrap()
        .with_cpt("B", vec![vec![0.9, 0.1], vec![0.4, 0.6]])
        .unwrap()
        .with_cpt("C", vec![vec![0.2, 0.8], vec![0.5, 0.5]])
        .unwrap();
        let a = Assignment::new()
            .with("A", "b")
            .with("B", "a")
            .with("C", "b");
        let p = net.joint_probability(&a).unwrap();
        assert!((p - 0.7 * 0.4 * 0.8).abs() < 1e-15);
        assert!(net
            .joint_probability(&Assignment::new().with("A", "a"))
            .is_err());
    }

    #[test]
    fn deterministic_chain_on_forced_path() {
        let net = Network::new(
            vec![binary("A"), binary("B"), binary("C")],
            &parents(&[("B", &["A"]), ("C", &["B"])]),
        )
        .unwrap()
        .with_cpt("A", vec![vec![1.0, 0.0]])
        .unwrap()
        .with_cpt("B", vec![vec![0.0, 1.0], vec![1.0, 0.0]])
        .unwrap()
        .with_cpt("C", vec![vec![1.0, 0.0], vec![0.0, 1.0]])
        .unwrap();
        let a = Assignment::new()
            .with("A", "a")
            .with("B", "b")
            .with("C", "b");
        assert_eq!(net.joint_probability(&a).unwrap(), 1.0);
    }

    #[test]
    fn root_marginal_is_cpt_row_and_evidence_is_point_mass() {
        let net = Network::new(vec![binary("A"), binary("B")], &parents(&[("B", &["A"])]))
            .unwrap()
            .with_cpt("A", vec![vec![0.25, 0.75]])
            .unwrap()
            .with_cpt("B", vec![vec![0.9, 0.1], vec![0.2, 0.8]])
            .unwrap();
        let m = net.marginal(&["A"], &Assignment::new()).unwrap();
        assert_eq!(m.probs(), &[0.25, 0.75]);
        let m = net
            .marginal(&["B"], &Assignment::new().with("A", "b"))
            .unwrap();
        assert!((m.probs()[1] - 0.8).abs() < 1e-15);
        assert!(net
            .marginal(&["A"], &Assignment::new().with("A", "a"))
            .is_err());
    }

    #[test]
    fn zero_probability_evidence_gives_all_zero_marginal() {
        let net = Network::new(
            vec![binary("A"), Variable::word("w")],
            &parents(&[("w", &["A"])]),
        )
        .unwrap()
        .with_cpt("A", vec![vec![0.5, 0.5]])
        .unwrap()
        .with_cpt("w", vec![vec![1.0, 0.0], vec![1.0, 0.0]])
        .unwrap();
        let m = net
            .marginal(&["A"], &Assignment::new().with("w", PRESENT))
            .unwrap();
        assert!(m.is_zero());
        let m = net
            .marginal(&["A"], &Assignment::new().with("w", ABSENT))
            .unwrap();
        assert_eq!(m.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn extend_keeps_existing_cpts() {
        let net = Network::new(vec![binary("A")], &ParentMap::new())
            .unwrap()
            .with_cpt("A", vec![vec![0.1, 0.9]])
            .unwrap();
        let ext = net
            .extend(vec![Variable::word("w")], &parents(&[("w", &["A"])]))
            .unwrap();
        assert_eq!(ext.cpt(0).row(0), &[0.1, 0.9]);
        assert_eq!(ext.parents("w").unwrap(), vec!["A"]);
    }

    proptest::proptest! {
        #[test]
        fn fitted_rows_are_distributions(
            rows in proptest::collection::vec((0usize..3, 0usize..2, 0usize..2), 0..80),
            alpha in proptest::prop_oneof![proptest::strategy::Just(0.0), 0.0f64..3.0],
        ) {
            let vars = vec![
                Variable::new("A", ["a0", "a1", "a2"], VarKind::Action).unwrap(),
                Variable::new("B", ["b0", "b1"], VarKind::Effect).unwrap(),
                Variable::word("w"),
            ];
            let parents: ParentMap = [
                ("B".to_string(), vec!["A".to_string()]),
                ("w".to_string(), vec!["A".to_string(), "B".to_string()]),
            ]
            .into_iter()
            .collect();
            let net = Network::new(vars.clone(), &parents).unwrap();
            let mut data = Dataset::new(vars).unwrap();
            for (a, b, w) in rows {
                data.push_coded(vec![a, b, w]).unwrap();
            }
            let fitted = net.fit_cpts(&data, alpha).unwrap();
            for v in 0..fitted.len() {
                let cpt = fitted.cpt(v);
                for r in 0..cpt.rows() {
                    let sum: f64 = cpt.row(r).iter().sum();
                    proptest::prop_assert!((sum - 1.0).abs() < 1e-12);
                    proptest::prop_assert!(cpt.row(r).iter().all(|p| (0.0..=1.0).contains(p)));
                }
            }
        }
    }
}

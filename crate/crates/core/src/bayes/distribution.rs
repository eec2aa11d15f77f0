use crate::bayes::{Assignment, Variable};

/// A table over the joint values of a list of variables, row-major with the
/// last variable varying fastest.
///
/// Returned normalized by [`crate::bayes::Network::marginal`] and unnormalized
/// by [`crate::bayes::Network::joint_table`].
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    variables: Vec<Variable>,
    probs: Vec<f64>,
}

impl Distribution {
    pub(crate) fn new(variables: Vec<Variable>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(
            probs.len(),
            variables
                .iter()
                .map(Variable::cardinality)
                .product::<usize>()
        );
        Distribution { variables, probs }
    }

    /// Builds a table from raw entries; panics if the length does not match the variables.
    pub fn from_parts(variables: Vec<Variable>, probs: Vec<f64>) -> Self {
        assert_eq!(
            probs.len(),
            variables
                .iter()
                .map(Variable::cardinality)
                .product::<usize>(),
            "table size does not match variable cardinalities"
        );
        Distribution { variables, probs }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.probs.iter().all(|&p| p == 0.0)
    }

    /// Scales to sum one; a table with zero mass stays all zeros.
    pub fn normalized(mut self) -> Self {
        let total = self.total();
        if total > 0.0 {
            self.probs.iter_mut().for_each(|p| *p /= total);
        } else {
            self.probs.fill(0.0);
        }
        self
    }

    pub fn index_of(&self, values: &[usize]) -> usize {
        values
            .iter()
            .zip(&self.variables)
            .fold(0, |acc, (&v, var)| acc * var.cardinality() + v)
    }

    pub fn values_at(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.variables.len()];
        for (slot, var) in out.iter_mut().zip(&self.variables).rev() {
            *slot = index % var.cardinality();
            index /= var.cardinality();
        }
        out
    }

    pub fn assignment_at(&self, index: usize) -> Assignment {
        self.values_at(index)
            .into_iter()
            .zip(&self.variables)
            .map(|(v, var)| (var.name().to_string(), var.values()[v].clone()))
            .collect()
    }

    /// Entry for an assignment binding (at least) every table variable.
    pub fn prob(&self, a: &Assignment) -> Option<f64> {
        let values = self
            .variables
            .iter()
            .map(|var| a.get(var.name()).and_then(|v| var.index_of(v)))
            .collect::<Option<Vec<_>>>()?;
        Some(self.probs[self.index_of(&values)])
    }

    /// Index of the largest entry, lowest index on ties; `None` for an all-zero table.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 && best.is_none_or(|(_, b)| p > b) {
                best = Some((i, p));
            }
        }
        best.map(|(i, _)| i)
    }
}

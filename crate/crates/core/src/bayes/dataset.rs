use std::collections::HashMap;

use crate::bayes::{Assignment, Variable};
use crate::error::{Error, Result};

/// Complete records over a fixed list of variables, stored as value indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    variables: Vec<Variable>,
    index: HashMap<String, usize>,
    rows: Vec<Vec<usize>>,
}

impl Dataset {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        let mut index = HashMap::with_capacity(variables.len());
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.name().to_string(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name().to_string()));
            }
        }
        Ok(Dataset {
            variables,
            index,
            rows: Vec::new(),
        })
    }

    pub fn from_assignments<'a>(
        variables: Vec<Variable>,
        records: impl IntoIterator<Item = &'a Assignment>,
    ) -> Result<Self> {
        let mut data = Dataset::new(variables)?;
        for r in records {
            data.push(r)?;
        }
        Ok(data)
    }

    /// Appends a record. Every column must be bound; bindings for other names are ignored.
    pub fn push(&mut self, record: &Assignment) -> Result<()> {
        let row = self
            .variables
            .iter()
            .map(|v| {
                let value = record
                    .get(v.name())
                    .ok_or_else(|| Error::Unbound(v.name().to_string()))?;
                v.require_index(value)
            })
            .collect::<Result<Vec<_>>>()?;
        self.rows.push(row);
        Ok(())
    }

    pub fn push_coded(&mut self, row: Vec<usize>) -> Result<()> {
        if row.len() != self.variables.len() {
            return Err(Error::Invalid(format!(
                "coded row has {} entries, expected {}",
                row.len(),
                self.variables.len()
            )));
        }
        for (v, &x) in self.variables.iter().zip(&row) {
            if x >= v.cardinality() {
                return Err(Error::Invalid(format!(
                    "value index {x} out of range for `{}`",
                    v.name()
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        Dataset {
            variables: self.variables.clone(),
            index: self.index.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Number of records where `column` takes value index `value`.
    pub fn count(&self, column: usize, value: usize) -> usize {
        self.rows.iter().filter(|r| r[column] == value).count()
    }
}

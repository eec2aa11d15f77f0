use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ABSENT: &str = "absent";
pub const PRESENT: &str = "present";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Action,
    Feature,
    Effect,
    Word,
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VarKind::Action => "action",
            VarKind::Feature => "feature",
            VarKind::Effect => "effect",
            VarKind::Word => "word",
        };
        f.write_str(s)
    }
}

/// A named discrete variable with an ordered set of symbolic values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    name: String,
    values: Vec<String>,
    kind: VarKind,
}

impl Variable {
    pub fn new<N, I, S>(name: N, values: I, kind: VarKind) -> Result<Self>
    where
        N: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        let invalid = |reason: &str| Error::InvalidVariable {
            name: name.clone(),
            reason: reason.to_string(),
        };
        if name.is_empty() {
            return Err(invalid("empty name"));
        }
        if values.len() < 2 {
            return Err(invalid("needs at least two values"));
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_empty() {
                return Err(invalid("empty value label"));
            }
            if values[..i].contains(v) {
                return Err(invalid("duplicate value label"));
            }
        }
        if kind == VarKind::Word && values != [ABSENT, PRESENT] {
            return Err(invalid(
                "word variables take exactly the values absent, present",
            ));
        }
        Ok(Variable { name, values, kind })
    }

    /// Binary word node with values `absent`, `present`.
    pub fn word(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            values: vec![ABSENT.to_string(), PRESENT.to_string()],
            kind: VarKind::Word,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_word(&self) -> bool {
        self.kind == VarKind::Word
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn index_of(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    pub(crate) fn require_index(&self, value: &str) -> Result<usize> {
        self.index_of(value).ok_or_else(|| Error::UnknownValue {
            var: self.name.clone(),
            value: value.to_string(),
        })
    }
}

/// A full or partial binding of variable names to value labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bindings: BTreeMap<String, String>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: impl Into<String>, value: impl Into<String>) -> Self {
        self.bind(var, value);
        self
    }

    pub fn bind(&mut self, var: impl Into<String>, value: impl Into<String>) {
        self.bindings.insert(var.into(), value.into());
    }

    pub fn unbind(&mut self, var: &str) -> Option<String> {
        self.bindings.remove(var)
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.bindings.get(var).map(String::as_str)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Bindings of `other` added on top of `self`.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.bind(k, v);
        }
        out
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        Assignment {
            bindings: iter
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

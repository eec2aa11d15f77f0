//! Model file: UTF-8 JSON with `variables`, `parents`, `cpts` and `pseudocount`.
//!
//! Probabilities are written with 17 significant digits so that loading and
//! saving again reproduces the file byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::bayes::{Network, ParentMap, VarKind, Variable};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    variables: Vec<VariableSpec>,
    parents: BTreeMap<String, Vec<String>>,
    cpts: BTreeMap<String, Vec<Vec<f64>>>,
    pseudocount: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableSpec {
    name: String,
    kind: VarKind,
    values: Vec<String>,
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Network {
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"variables\": [\n");
        let n = self.len();
        for (i, v) in self.variables().iter().enumerate() {
            let values: Vec<String> = v.values().iter().map(|s| quote(s)).collect();
            let _ = write!(
                out,
                "    {{\"name\": {}, \"kind\": \"{}\", \"values\": [{}]}}",
                quote(v.name()),
                v.kind(),
                values.join(", ")
            );
            out.push_str(if i + 1 < n { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n  \"parents\": {\n");
        for (i, v) in self.variables().iter().enumerate() {
            let ps: Vec<String> = self
                .parent_indices(i)
                .iter()
                .map(|&p| quote(self.variables()[p].name()))
                .collect();
            let _ = write!(out, "    {}: [{}]", quote(v.name()), ps.join(", "));
            out.push_str(if i + 1 < n { ",\n" } else { "\n" });
        }
        out.push_str("  },\n  \"cpts\": {\n");
        for (i, v) in self.variables().iter().enumerate() {
            let cpt = self.cpt(i);
            let rows: Vec<String> = (0..cpt.rows())
                .map(|r| {
                    let cells: Vec<String> = cpt.row(r).iter().map(|&p| number(p)).collect();
                    format!("      [{}]", cells.join(", "))
                })
                .collect();
            let _ = write!(
                out,
                "    {}: [\n{}\n    ]",
                quote(v.name()),
                rows.join(",\n")
            );
            out.push_str(if i + 1 < n { ",\n" } else { "\n" });
        }
        let _ = writeln!(
            out,
            "  }},\n  \"pseudocount\": {}\n}}",
            number(self.pseudocount())
        );
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        let variables = file
            .variables
            .into_iter()
            .map(|s| Variable::new(s.name, s.values, s.kind))
            .collect::<Result<Vec<_>>>()?;
        let parents: ParentMap = file
            .parents
            .into_iter()
            .filter(|(_, ps)| !ps.is_empty())
            .collect();
        let mut net = Network::new(variables, &parents)?;
        if file.cpts.len() != net.len() {
            return Err(Error::Invalid(format!(
                "model lists {} CPTs for {} variables",
                file.cpts.len(),
                net.len()
            )));
        }
        for (name, rows) in file.cpts {
            net.set_cpt_exact(&name, rows)?;
        }
        if !file.pseudocount.is_finite() || file.pseudocount < 0.0 {
            return Err(Error::Pseudocount(file.pseudocount));
        }
        net.set_pseudocount(file.pseudocount);
        Ok(net)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Validated like [`Network::set_cpt`] but stored without renormalizing.
    fn set_cpt_exact(&mut self, name: &str, rows: Vec<Vec<f64>>) -> Result<()> {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        self.set_cpt(name, rows)?;
        let var = self.require(name)?;
        self.replace_probs(var, flat);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::bayes::{affordance_network, Network};

    #[test]
    fn text_round_trip_is_exact() {
        let mut net = affordance_network();
        net.set_cpt("Action", vec![vec![0.1, 0.2, 0.7]]).unwrap();
        let text = net.to_json();
        let back = Network::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back, net);
    }

    #[test]
    fn malformed_model_is_a_parse_error() {
        let err = Network::from_json("{\"variables\": 3}").unwrap_err();
        assert!(err.is_parse());
    }
}

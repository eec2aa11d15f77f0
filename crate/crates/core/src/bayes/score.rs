use statrs::function::gamma::ln_gamma;

use crate::bayes::Dataset;
use crate::error::{Error, Result};

/// Log Bayesian-Dirichlet marginal likelihood of one family.
///
/// Each parent configuration `j` contributes
/// `lnΓ(rα) − lnΓ(rα + N_j) + Σ_k [lnΓ(α + N_jk) − lnΓ(α)]`, with `r` the child
/// cardinality and a symmetric Dirichlet weight `α` per cell (`α = 1` is the
/// Cooper-Herskovits K2 metric). Unseen configurations contribute zero.
pub fn family_log_score(data: &Dataset, target: &str, parents: &[&str], alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Pseudocount(alpha));
    }
    let col = |n: &str| {
        data.column(n)
            .ok_or_else(|| Error::UnknownVariable(n.to_string()))
    };
    let t = col(target)?;
    let ps = parents.iter().map(|p| col(p)).collect::<Result<Vec<_>>>()?;
    if ps.contains(&t) {
        return Err(Error::Invalid(format!(
            "`{target}` cannot be its own parent"
        )));
    }
    Ok(family_log_score_by_index(data, t, &ps, alpha))
}

/// Column-index form of [`family_log_score`]; `alpha` must be positive.
pub fn family_log_score_by_index(
    data: &Dataset,
    target: usize,
    parents: &[usize],
    alpha: f64,
) -> f64 {
    let vars = data.variables();
    let r = vars[target].cardinality();
    let cards: Vec<usize> = parents.iter().map(|&p| vars[p].cardinality()).collect();
    let q: usize = cards.iter().product();
    let mut counts = vec![0u32; q * r];
    for row in data.rows() {
        let j = parents
            .iter()
            .zip(&cards)
            .fold(0, |acc, (&p, &k)| acc * k + row[p]);
        counts[j * r + row[target]] += 1;
    }
    let ra = r as f64 * alpha;
    let lg_a = ln_gamma(alpha);
    let lg_ra = ln_gamma(ra);
    counts
        .chunks(r)
        .map(|cell| {
            let n: u32 = cell.iter().sum();
            if n == 0 {
                return 0.0;
            }
            let inner: f64 = cell
                .iter()
                .map(|&c| {
                    if c == 0 {
                        0.0
                    } else {
                        ln_gamma(alpha + c as f64) - lg_a
                    }
                })
                .sum();
            lg_ra - ln_gamma(ra + n as f64) + inner
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{Assignment, VarKind, Variable, ABSENT, PRESENT};

    fn data(rows: &[(&str, &str)]) -> Dataset {
        let vars = vec![
            Variable::new("P", ["x", "y"], VarKind::Feature).unwrap(),
            Variable::word("w"),
        ];
        let mut d = Dataset::new(vars).unwrap();
        for (p, w) in rows {
            d.push(&Assignment::new().with("P", *p).with("w", *w))
                .unwrap();
        }
        d
    }

    #[test]
    fn empty_dataset_scores_zero() {
        let d = data(&[]);
        assert_eq!(family_log_score(&d, "w", &[], 1.0).unwrap(), 0.0);
        assert_eq!(family_log_score(&d, "w", &["P"], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_k2_metric() {
        // Two configurations, counts (2,1) and (0,3): K2 gives
        // ln(1!·2!·1!/4!) + ln(1!·0!·3!/4!) = ln(2/24) + ln(6/24).
        let d = data(&[
            ("x", ABSENT),
            ("x", ABSENT),
            ("x", PRESENT),
            ("y", PRESENT),
            ("y", PRESENT),
            ("y", PRESENT),
        ]);
        let s = family_log_score(&d, "w", &["P"], 1.0).unwrap();
        let expected = (2.0f64 / 24.0).ln() + (6.0f64 / 24.0).ln();
        assert!((s - expected).abs() < 1e-12, "{s} vs {expected}");
    }

    #[test]
    fn determined_word_prefers_its_parent() {
        let rows: Vec<(&str, &str)> = (0..200)
            .map(|i| {
                if i % 2 == 0 {
                    ("x", ABSENT)
                } else {
                    ("y", PRESENT)
                }
            })
            .collect();
        let d = data(&rows);
        let with = family_log_score(&d, "w", &["P"], 1.0).unwrap();
        let without = family_log_score(&d, "w", &[], 1.0).unwrap();
        assert!(with > without);
    }

    #[test]
    fn rejects_non_positive_alpha() {
        let d = data(&[("x", ABSENT)]);
        assert!(family_log_score(&d, "w", &[], 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn score_ignores_record_order(
            rows in proptest::collection::vec((0usize..2, 0usize..2), 0..60),
            rot in 0usize..60,
        ) {
            let build = |rs: &[(usize, usize)]| {
                let pairs: Vec<(&str, &str)> = rs
                    .iter()
                    .map(|&(p, w)| (["x", "y"][p], [ABSENT, PRESENT][w]))
                    .collect();
                data(&pairs)
            };
            let mut shuffled = rows.clone();
            if !shuffled.is_empty() {
                let k = rot % shuffled.len();
                shuffled.rotate_left(k);
                shuffled.reverse();
            }
            let a = family_log_score(&build(&rows), "w", &["P"], 1.0).unwrap();
            let b = family_log_score(&build(&shuffled), "w", &["P"], 1.0).unwrap();
            proptest::prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}

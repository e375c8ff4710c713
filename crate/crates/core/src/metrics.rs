//! Sufficiency and necessity fit statistics, plus cross-threshold summary
//! statistics.
//!
//! All values are exact integer-count ratios: with S the cases covered by a
//! solution and Y the outcome cases, inclS = |S∧Y|/|S| and covS = |S∧Y|/|Y|.
//! Zero denominators leave a value undefined rather than defaulting it.

use serde::{Deserialize, Serialize};

use crate::data::BinaryDataset;
use crate::minimize::Model;

fn ratio(num: usize, den: usize) -> Option<f64> {
    if den == 0 {
        None
    } else {
        Some(num as f64 / den as f64)
    }
}

/// Fit of one term within a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFit {
    /// The term rendered against the dataset's condition names.
    pub term: String,
    pub incl: Option<f64>,
    pub cov: Option<f64>,
    /// Unique coverage: outcome cases covered by this term and no other.
    pub cov_u: Option<f64>,
}

/// Solution-level consistency and coverage with per-term breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitStats {
    pub incl_s: Option<f64>,
    pub cov_s: Option<f64>,
    pub per_term: Vec<TermFit>,
}

/// Consistency and coverage of a whole model and of each of its terms.
pub fn solution_fit(model: &Model, bin: &BinaryDataset) -> FitStats {
    let n = bin.n_cases();
    let configs: Vec<u32> = (0..n).map(|case| bin.case_config(case)).collect();
    let y: Vec<bool> = bin.outcome_membership.iter().map(|&m| m == 1).collect();
    let n_y = y.iter().filter(|&&v| v).count();

    let mut n_s = 0usize;
    let mut n_sy = 0usize;
    for case in 0..n {
        if model.covers(configs[case]) {
            n_s += 1;
            if y[case] {
                n_sy += 1;
            }
        }
    }

    let per_term = model
        .terms()
        .iter()
        .map(|term| {
            let mut n_t = 0usize;
            let mut n_ty = 0usize;
            let mut n_uy = 0usize;
            for case in 0..n {
                if !term.covers(configs[case]) {
                    continue;
                }
                n_t += 1;
                if y[case] {
                    n_ty += 1;
                    let alone = model
                        .terms()
                        .iter()
                        .filter(|other| *other != term)
                        .all(|other| !other.covers(configs[case]));
                    if alone {
                        n_uy += 1;
                    }
                }
            }
            TermFit {
                term: term.render(&bin.conditions),
                incl: ratio(n_ty, n_t),
                cov: ratio(n_ty, n_y),
                cov_u: ratio(n_uy, n_y),
            }
        })
        .collect();

    FitStats {
        incl_s: ratio(n_sy, n_s),
        cov_s: ratio(n_sy, n_y),
        per_term,
    }
}

/// Necessity statistics for one condition or its negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityRow {
    /// Condition name, "~"-prefixed for the negation.
    pub condition: String,
    pub incl_n: Option<f64>,
    pub cov_n: Option<f64>,
}

/// Necessity of each condition and its negation against the outcome:
/// inclN = |X∧Y|/|Y|, covN = |X∧Y|/|X|. Rows come in condition order,
/// each condition followed by its negation.
pub fn necessity(bin: &BinaryDataset) -> Vec<NecessityRow> {
    let y: Vec<bool> = bin.outcome_membership.iter().map(|&m| m == 1).collect();
    let n_y = y.iter().filter(|&&v| v).count();

    let mut rows = Vec::with_capacity(2 * bin.n_conditions());
    for (i, name) in bin.conditions.iter().enumerate() {
        for negated in [false, true] {
            let mut n_x = 0usize;
            let mut n_xy = 0usize;
            for case in 0..bin.n_cases() {
                let member = (bin.condition_memberships[i][case] == 1) != negated;
                if member {
                    n_x += 1;
                    if y[case] {
                        n_xy += 1;
                    }
                }
            }
            rows.push(NecessityRow {
                condition: if negated {
                    format!("~{name}")
                } else {
                    name.clone()
                },
                incl_n: ratio(n_xy, n_y),
                cov_n: ratio(n_xy, n_x),
            });
        }
    }
    rows
}

/// Cross-threshold stability and fit ranges over a sweep's summary rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub n_thresholds: usize,
    pub unique_solutions: usize,
    /// 1 - (unique_solutions - 1) / (n_thresholds - 1); 1.0 for a single
    /// threshold.
    pub stability: f64,
    pub incl_range: Option<(f64, f64)>,
    pub cov_range: Option<(f64, f64)>,
}

fn range_of(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let mut range: Option<(f64, f64)> = None;
    for v in values {
        range = Some(match range {
            None => (v, v),
            Some((lo, hi)) => (lo.min(v), hi.max(v)),
        });
    }
    range
}

/// Summary statistics over (expression, inclS, covS) rows. Distinct
/// expression strings — "No solution" included — count as distinct
/// solutions.
pub fn sweep_stats(rows: &[(String, Option<f64>, Option<f64>)]) -> SweepStats {
    let n_thresholds = rows.len();
    let mut seen: Vec<&str> = Vec::new();
    for (expression, _, _) in rows {
        if !seen.contains(&expression.as_str()) {
            seen.push(expression);
        }
    }
    let unique_solutions = seen.len();
    let stability = if n_thresholds <= 1 {
        1.0
    } else {
        1.0 - (unique_solutions as f64 - 1.0) / (n_thresholds as f64 - 1.0)
    };
    SweepStats {
        n_thresholds,
        unique_solutions,
        stability,
        incl_range: range_of(rows.iter().filter_map(|(_, incl, _)| *incl)),
        cov_range: range_of(rows.iter().filter_map(|(_, _, cov)| *cov)),
    }
}

//! Truth table construction and row classification.
//!
//! A table has one row per condition configuration (all 2^k of them, in
//! ascending binary order with the first condition as the most significant
//! bit). Rows with fewer than `n_cut` cases are remainders; the rest split
//! into positive and negative by `incl_cut`.

use serde::{Deserialize, Serialize};

use crate::data::{BinaryDataset, OutcomeSpec, MAX_CONDITIONS};
use crate::error::{Error, Result};

/// Row classification, rendered as 1 / 0 / ? in tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputClass {
    Positive,
    Negative,
    Remainder,
}

impl OutputClass {
    pub fn symbol(self) -> &'static str {
        match self {
            OutputClass::Positive => "1",
            OutputClass::Negative => "0",
            OutputClass::Remainder => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTableRow {
    /// Configuration bits packed with the first condition as MSB; equals the
    /// row's index in the table.
    pub config: u32,
    /// Observed case count.
    pub n: usize,
    /// Cases in this row with outcome membership 1.
    pub n_out: usize,
    pub out: OutputClass,
    pub cases: Vec<String>,
}

impl TruthTableRow {
    /// Row consistency: share of the row's cases with the outcome. Undefined
    /// for unobserved rows.
    pub fn incl(&self) -> Option<f64> {
        if self.n == 0 {
            None
        } else {
            Some(self.n_out as f64 / self.n as f64)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub conditions: Vec<String>,
    pub rows: Vec<TruthTableRow>,
    pub incl_cut: f64,
    pub n_cut: usize,
    pub outcome: OutcomeSpec,
}

impl TruthTable {
    pub fn n_conditions(&self) -> usize {
        self.conditions.len()
    }

    pub fn configs_with(&self, out: OutputClass) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| r.out == out)
            .map(|r| r.config)
            .collect()
    }

    /// Bits of a configuration in condition order (first condition first).
    pub fn config_bits(&self, config: u32) -> Vec<u8> {
        let k = self.conditions.len();
        (0..k).map(|i| ((config >> (k - 1 - i)) & 1) as u8).collect()
    }
}

/// Aggregate a binary dataset into a truth table classified by `incl_cut`
/// and `n_cut`.
pub fn build_truth_table(bin: &BinaryDataset, incl_cut: f64, n_cut: usize) -> Result<TruthTable> {
    let k = bin.n_conditions();
    if k == 0 {
        return Err(Error::NoConditions);
    }
    if k > MAX_CONDITIONS {
        return Err(Error::TooManyConditions {
            count: k,
            max: MAX_CONDITIONS,
        });
    }
    if bin.n_cases() == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(incl_cut > 0.0 && incl_cut <= 1.0) {
        return Err(Error::InclCutOutOfRange { value: incl_cut });
    }
    if n_cut == 0 {
        return Err(Error::NCutZero);
    }

    let size = 1usize << k;
    let mut rows: Vec<TruthTableRow> = (0..size)
        .map(|config| TruthTableRow {
            config: config as u32,
            n: 0,
            n_out: 0,
            out: OutputClass::Remainder,
            cases: Vec::new(),
        })
        .collect();

    for case in 0..bin.n_cases() {
        let config = bin.case_config(case) as usize;
        rows[config].n += 1;
        rows[config].n_out += bin.outcome_membership[case] as usize;
        rows[config].cases.push(bin.case_ids[case].clone());
    }

    for row in &mut rows {
        row.out = if row.n < n_cut {
            OutputClass::Remainder
        } else if row.incl().expect("n >= n_cut >= 1") >= incl_cut {
            OutputClass::Positive
        } else {
            OutputClass::Negative
        };
    }

    Ok(TruthTable {
        conditions: bin.conditions.clone(),
        rows,
        incl_cut,
        n_cut,
        outcome: bin.provenance.outcome.clone(),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::data::Provenance;
    use crate::data::ThresholdAssignment;

    /// Binary desk data: cases A(1,1,0,1), B(1,1,0,1), C(0,1,1,1),
    /// D(0,0,0,0), E(1,0,1,0) over X1,X2,X3 with outcome last.
    pub(crate) fn d0() -> BinaryDataset {
        BinaryDataset {
            case_ids: ["A", "B", "C", "D", "E"].map(String::from).to_vec(),
            conditions: ["X1", "X2", "X3"].map(String::from).to_vec(),
            condition_memberships: vec![
                vec![1, 1, 0, 0, 1],
                vec![1, 1, 1, 0, 0],
                vec![0, 0, 1, 0, 1],
            ],
            outcome_membership: vec![1, 1, 1, 0, 0],
            provenance: Provenance {
                outcome: OutcomeSpec::new("Y"),
                outcome_threshold: 1.0,
                condition_thresholds: ThresholdAssignment::new(vec![
                    ("X1".into(), 1.0),
                    ("X2".into(), 1.0),
                    ("X3".into(), 1.0),
                ]),
            },
        }
    }

    fn row(tt: &TruthTable, config: u32) -> &TruthTableRow {
        &tt.rows[config as usize]
    }

    #[test]
    fn d0_classification() {
        let tt = build_truth_table(&d0(), 0.8, 1).unwrap();
        assert_eq!(tt.rows.len(), 8);

        let r110 = row(&tt, 0b110);
        assert_eq!(r110.n, 2);
        assert_eq!(r110.incl(), Some(1.0));
        assert_eq!(r110.out, OutputClass::Positive);
        assert_eq!(r110.cases, ["A", "B"]);

        let r011 = row(&tt, 0b011);
        assert_eq!(r011.n, 1);
        assert_eq!(r011.incl(), Some(1.0));
        assert_eq!(r011.out, OutputClass::Positive);

        assert_eq!(row(&tt, 0b000).out, OutputClass::Negative);
        assert_eq!(row(&tt, 0b101).out, OutputClass::Negative);
        for config in [0b001, 0b010, 0b100, 0b111] {
            assert_eq!(row(&tt, config).out, OutputClass::Remainder);
            assert_eq!(row(&tt, config).n, 0);
            assert_eq!(row(&tt, config).incl(), None);
        }
    }

    #[test]
    fn n_cut_two_grows_remainders() {
        let tt = build_truth_table(&d0(), 0.8, 2).unwrap();
        assert_eq!(row(&tt, 0b110).out, OutputClass::Positive);
        for config in [0b011, 0b000, 0b101] {
            assert_eq!(row(&tt, config).out, OutputClass::Remainder);
        }
    }

    #[test]
    fn case_counts_sum_to_dataset() {
        let tt = build_truth_table(&d0(), 0.8, 1).unwrap();
        let total: usize = tt.rows.iter().map(|r| r.n).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn incl_cut_boundary_is_positive() {
        // a 4-out-of-5 row at incl_cut = 0.8 counts as positive
        let bin = BinaryDataset {
            case_ids: (1..=5).map(|i| i.to_string()).collect(),
            conditions: vec!["X".into()],
            condition_memberships: vec![vec![1, 1, 1, 1, 1]],
            outcome_membership: vec![1, 1, 1, 1, 0],
            provenance: Provenance {
                outcome: OutcomeSpec::new("Y"),
                outcome_threshold: 1.0,
                condition_thresholds: ThresholdAssignment::new(vec![("X".into(), 1.0)]),
            },
        };
        let tt = build_truth_table(&bin, 0.8, 1).unwrap();
        assert_eq!(tt.rows[1].out, OutputClass::Positive);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            build_truth_table(&d0(), 0.0, 1).unwrap_err(),
            Error::InclCutOutOfRange { .. }
        ));
        assert!(matches!(
            build_truth_table(&d0(), 1.1, 1).unwrap_err(),
            Error::InclCutOutOfRange { .. }
        ));
        assert!(matches!(
            build_truth_table(&d0(), 0.8, 0).unwrap_err(),
            Error::NCutZero
        ));
    }
}

//! Raw case data, dichotomization, and threshold grids.
//!
//! Membership follows the ≥ rule: a case is in the set iff its raw value is
//! at least the threshold. Negated outcomes ("~Y") flip the outcome column
//! after dichotomization.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Maximum number of conditions accepted anywhere in the pipeline. The
/// minimizer is exact, so the truth table and subcube spaces grow as 2^k.
pub const MAX_CONDITIONS: usize = 16;

/// Case-identified table of numeric variables, pre-calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    case_ids: Vec<String>,
    columns: Vec<(String, Vec<f64>)>,
    id_header: Option<String>,
}

impl RawDataset {
    /// Build a dataset from explicit case ids and columns, validating that
    /// ids and names are unique, lengths agree, and every value is finite.
    pub fn new(case_ids: Vec<String>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if case_ids.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if columns.is_empty() {
            return Err(Error::NoColumns);
        }
        for (i, id) in case_ids.iter().enumerate() {
            if case_ids[..i].contains(id) {
                return Err(Error::DuplicateCaseId { id: id.clone() });
            }
        }
        for (i, (name, values)) in columns.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyColumnName);
            }
            if columns[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateColumn { name: name.clone() });
            }
            if values.len() != case_ids.len() {
                return Err(Error::RaggedRow {
                    row: values.len().min(case_ids.len()) + 1,
                    found: values.len(),
                    expected: case_ids.len(),
                });
            }
            for (row, v) in values.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonNumericCell {
                        row: row + 1,
                        column: name.clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(Self {
            case_ids,
            columns,
            id_header: Some("case_id".to_string()),
        })
    }

    pub fn n_cases(&self) -> usize {
        self.case_ids.len()
    }

    pub fn case_ids(&self) -> &[String] {
        &self.case_ids
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Canonical CSV serialization: LF line endings, no trailing whitespace,
    /// shortest round-trip float formatting. Re-parsing reproduces the same
    /// values and ids.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<&str> = Vec::new();
        if let Some(id) = &self.id_header {
            header.push(id);
        }
        header.extend(self.columns.iter().map(|(n, _)| n.as_str()));
        out.push_str(&header.join(","));
        out.push('\n');
        for row in 0..self.case_ids.len() {
            let mut fields: Vec<String> = Vec::new();
            if self.id_header.is_some() {
                fields.push(self.case_ids[row].clone());
            }
            fields.extend(self.columns.iter().map(|(_, v)| v[row].to_string()));
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical CSV serialization, binding results to the
    /// parsed data rather than to cosmetic formatting in the source file.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_csv().as_bytes()))
    }
}

/// Parse CSV text into a dataset. The first line is the header; every
/// non-id field must be a finite number.
pub fn parse_csv(text: &str, id_column: Option<&str>) -> Result<RawDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: "<input>".into(),
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    for (i, name) in header.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::EmptyColumnName);
        }
        if header[..i].contains(name) {
            return Err(Error::DuplicateColumn { name: name.clone() });
        }
    }
    let id_index = match id_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::IdColumnNotFound {
                    name: name.to_string(),
                })?,
        ),
        None => None,
    };

    let mut case_ids: Vec<String> = Vec::new();
    let mut columns: Vec<(String, Vec<f64>)> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != id_index)
        .map(|(_, name)| (name.clone(), Vec::new()))
        .collect();
    if columns.is_empty() {
        return Err(Error::NoColumns);
    }

    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1;
        let record = record.map_err(|e| Error::Csv {
            path: "<input>".into(),
            message: e.to_string(),
        })?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected: header.len(),
            });
        }
        let id = match id_index {
            Some(i) => record[i].to_string(),
            None => row.to_string(),
        };
        if case_ids.contains(&id) {
            return Err(Error::DuplicateCaseId { id });
        }
        case_ids.push(id);
        let mut col = 0;
        for (i, field) in record.iter().enumerate() {
            if Some(i) == id_index {
                continue;
            }
            let parsed: Option<f64> = field.trim().parse().ok().filter(|v: &f64| v.is_finite());
            match parsed {
                Some(v) => columns[col].1.push(v),
                None => {
                    return Err(Error::NonNumericCell {
                        row,
                        column: header[i].clone(),
                        value: field.to_string(),
                    })
                }
            }
            col += 1;
        }
    }
    if case_ids.is_empty() {
        return Err(Error::EmptyDataset);
    }

    Ok(RawDataset {
        case_ids,
        columns,
        id_header: id_column.map(str::to_string),
    })
}

/// Load a dataset from a CSV file. Cases keep file order; without an id
/// column, ids are "1", "2", ... in row order.
pub fn load_csv(path: impl AsRef<Path>, id_column: Option<&str>) -> Result<RawDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, id_column)
}

/// An outcome variable, possibly negated ("~Y").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSpec {
    pub name: String,
    pub negated: bool,
}

impl OutcomeSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            negated: false,
        }
    }

    /// Parse a user-facing outcome name; a leading "~" marks negation.
    pub fn parse(spec: &str) -> Self {
        match spec.strip_prefix('~') {
            Some(rest) => Self {
                name: rest.to_string(),
                negated: true,
            },
            None => Self {
                name: spec.to_string(),
                negated: false,
            },
        }
    }
}

impl fmt::Display for OutcomeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// Per-variable thresholds, in declaration order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThresholdAssignment {
    entries: Vec<(String, f64)>,
}

impl ThresholdAssignment {
    pub fn new(entries: Vec<(String, f64)>) -> Self {
        Self { entries }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the assignment covers exactly the given names.
    pub fn check_covers(&self, names: &[String]) -> Result<()> {
        for name in names {
            if self.get(name).is_none() {
                return Err(Error::MissingThreshold { name: name.clone() });
            }
        }
        for (name, _) in &self.entries {
            if !names.contains(name) {
                return Err(Error::ExtraThreshold { name: name.clone() });
            }
        }
        Ok(())
    }

    /// Canonical "N1=v1, N2=v2" label in entry order.
    pub fn label(&self) -> String {
        self.entries
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Parse a label produced by [`ThresholdAssignment::label`].
    pub fn parse_label(label: &str) -> Option<Self> {
        let mut entries = Vec::new();
        for part in label.split(", ") {
            let (name, value) = part.split_once('=')?;
            entries.push((name.to_string(), value.parse().ok()?));
        }
        Some(Self { entries })
    }
}

/// Everything needed to reproduce a dichotomization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub outcome: OutcomeSpec,
    pub outcome_threshold: f64,
    pub condition_thresholds: ThresholdAssignment,
}

/// Per-case 0/1 memberships after dichotomization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryDataset {
    pub case_ids: Vec<String>,
    pub conditions: Vec<String>,
    /// One membership vector per condition, in `conditions` order.
    pub condition_memberships: Vec<Vec<u8>>,
    pub outcome_membership: Vec<u8>,
    pub provenance: Provenance,
}

impl BinaryDataset {
    pub fn n_cases(&self) -> usize {
        self.case_ids.len()
    }

    pub fn n_conditions(&self) -> usize {
        self.conditions.len()
    }

    /// Condition memberships of one case, packed with the first condition as
    /// the most significant bit (the truth-table row index).
    pub fn case_config(&self, case: usize) -> u32 {
        let k = self.conditions.len();
        self.condition_memberships
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, col)| {
                acc | ((col[case] as u32) << (k - 1 - i))
            })
    }
}

/// Dichotomize conditions and the (possibly negated) outcome at the given
/// thresholds: membership is 1 iff the raw value is ≥ the threshold; a
/// negated outcome takes the complement.
pub fn dichotomize(
    raw: &RawDataset,
    conditions: &[String],
    condition_thresholds: &ThresholdAssignment,
    outcome: &OutcomeSpec,
    outcome_threshold: f64,
) -> Result<BinaryDataset> {
    if conditions.is_empty() {
        return Err(Error::NoConditions);
    }
    if conditions.len() > MAX_CONDITIONS {
        return Err(Error::TooManyConditions {
            count: conditions.len(),
            max: MAX_CONDITIONS,
        });
    }
    if conditions.contains(&outcome.name) {
        return Err(Error::OutcomeAmongConditions {
            name: outcome.name.clone(),
        });
    }
    condition_thresholds.check_covers(conditions)?;

    let outcome_values = raw
        .column(&outcome.name)
        .ok_or_else(|| Error::UnknownVariable {
            name: outcome.name.clone(),
        })?;

    let mut condition_memberships = Vec::with_capacity(conditions.len());
    for name in conditions {
        let values = raw.column(name).ok_or_else(|| Error::UnknownVariable {
            name: name.clone(),
        })?;
        let tau = condition_thresholds.get(name).expect("covered above");
        condition_memberships.push(values.iter().map(|&v| u8::from(v >= tau)).collect());
    }

    let outcome_membership = outcome_values
        .iter()
        .map(|&v| {
            let m = u8::from(v >= outcome_threshold);
            if outcome.negated {
                1 - m
            } else {
                m
            }
        })
        .collect();

    Ok(BinaryDataset {
        case_ids: raw.case_ids().to_vec(),
        conditions: conditions.to_vec(),
        condition_memberships,
        outcome_membership,
        provenance: Provenance {
            outcome: outcome.clone(),
            outcome_threshold,
            condition_thresholds: condition_thresholds.clone(),
        },
    })
}

/// One point of a threshold grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    /// 1-based position in enumeration order.
    pub combo_id: usize,
    pub assignment: ThresholdAssignment,
    pub label: String,
}

/// The full cartesian product of threshold axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axes: Vec<(String, Vec<f64>)>,
    pub points: Vec<GridPoint>,
}

/// Enumerate all threshold combinations. The first declared axis varies
/// fastest; combo_id runs 1..=N in enumeration order.
pub fn expand_grid(axes: &[(String, Vec<f64>)]) -> Result<SweepGrid> {
    if axes.is_empty() {
        return Err(Error::EmptyAxes);
    }
    for (i, (name, values)) in axes.iter().enumerate() {
        if axes[..i].iter().any(|(n, _)| n == name) {
            return Err(Error::DuplicateAxis { name: name.clone() });
        }
        if values.is_empty() {
            return Err(Error::EmptyAxis { name: name.clone() });
        }
    }

    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let mut points = Vec::with_capacity(total);
    let mut indices = vec![0usize; axes.len()];
    for combo_id in 1..=total {
        let assignment = ThresholdAssignment::new(
            axes.iter()
                .zip(&indices)
                .map(|((name, values), &i)| (name.clone(), values[i]))
                .collect(),
        );
        let label = assignment.label();
        points.push(GridPoint {
            combo_id,
            assignment,
            label,
        });
        // advance the odometer, first axis fastest
        for (axis, idx) in axes.iter().zip(indices.iter_mut()) {
            *idx += 1;
            if *idx < axis.1.len() {
                break;
            }
            *idx = 0;
        }
    }

    Ok(SweepGrid {
        axes: axes.to_vec(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1() -> RawDataset {
        RawDataset::new(
            vec!["c1", "c2", "c3", "c4", "c5", "c6"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec![
                ("A".into(), vec![3.0, 3.0, 1.0, 1.0, 3.0, 3.0]),
                ("B".into(), vec![3.0, 1.0, 2.0, 1.0, 3.0, 1.0]),
                ("Y".into(), vec![3.0, 2.0, 2.0, 1.0, 3.0, 2.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parse_with_id_column() {
        let raw = parse_csv("id,A,B,Y\nc1,3,3,3\nc4,1,1,1\n", Some("id")).unwrap();
        assert_eq!(raw.case_ids(), ["c1", "c4"]);
        assert_eq!(raw.variable_names().collect::<Vec<_>>(), ["A", "B", "Y"]);
        assert_eq!(raw.column("A").unwrap(), [3.0, 1.0]);
    }

    #[test]
    fn parse_default_ids() {
        let raw = parse_csv("A\n1\n2\n", None).unwrap();
        assert_eq!(raw.case_ids(), ["1", "2"]);
    }

    #[test]
    fn parse_reports_bad_cell() {
        let err = parse_csv("A,B\n1,x\n", None).unwrap_err();
        match err {
            Error::NonNumericCell { row, column, .. } => {
                assert_eq!(row, 1);
                assert_eq!(column, "B");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_rejects_duplicates_and_ragged_rows() {
        assert!(matches!(
            parse_csv("A,A\n1,2\n", None).unwrap_err(),
            Error::DuplicateColumn { .. }
        ));
        assert!(matches!(
            parse_csv("id,A\nx,1\nx,2\n", Some("id")).unwrap_err(),
            Error::DuplicateCaseId { .. }
        ));
        assert!(matches!(
            parse_csv("A,B\n1\n", None).unwrap_err(),
            Error::RaggedRow { row: 1, .. }
        ));
        assert!(matches!(
            parse_csv("A\n\n", None).unwrap_err(),
            Error::NonNumericCell { .. }
        ));
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let raw = d1();
        let back = parse_csv(&raw.to_csv(), Some("case_id")).unwrap();
        assert_eq!(raw, back);
        assert_eq!(raw.digest(), back.digest());
    }

    #[test]
    fn membership_boundary_is_inclusive() {
        let raw = RawDataset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("X".into(), vec![5.0, 7.0, 9.0]), ("Y".into(), vec![5.0, 7.0, 9.0])],
        )
        .unwrap();
        let bin = dichotomize(
            &raw,
            &["X".to_string()],
            &ThresholdAssignment::new(vec![("X".into(), 7.0)]),
            &OutcomeSpec::new("Y"),
            7.0,
        )
        .unwrap();
        assert_eq!(bin.condition_memberships[0], [0, 1, 1]);
        assert_eq!(bin.outcome_membership, [0, 1, 1]);
    }

    #[test]
    fn negated_outcome_is_complement() {
        let raw = RawDataset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("X".into(), vec![0.0, 0.0, 0.0]), ("Y".into(), vec![5.0, 7.0, 9.0])],
        )
        .unwrap();
        let thr = ThresholdAssignment::new(vec![("X".into(), 1.0)]);
        let pos = dichotomize(&raw, &["X".into()], &thr, &OutcomeSpec::parse("Y"), 7.0).unwrap();
        let neg = dichotomize(&raw, &["X".into()], &thr, &OutcomeSpec::parse("~Y"), 7.0).unwrap();
        assert_eq!(neg.outcome_membership, [1, 0, 0]);
        for (p, n) in pos.outcome_membership.iter().zip(&neg.outcome_membership) {
            assert_eq!(p + n, 1);
        }
    }

    #[test]
    fn dichotomize_d1() {
        let bin = dichotomize(
            &d1(),
            &["A".to_string(), "B".to_string()],
            &ThresholdAssignment::new(vec![("A".into(), 2.0), ("B".into(), 2.0)]),
            &OutcomeSpec::new("Y"),
            2.0,
        )
        .unwrap();
        assert_eq!(bin.condition_memberships[0], [1, 1, 0, 0, 1, 1]);
        assert_eq!(bin.condition_memberships[1], [1, 0, 1, 0, 1, 0]);
        assert_eq!(bin.outcome_membership, [1, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn dichotomize_validates_names() {
        let raw = d1();
        let thr = ThresholdAssignment::new(vec![("A".into(), 2.0)]);
        assert!(matches!(
            dichotomize(&raw, &["A".into(), "Z".into()], &thr, &OutcomeSpec::new("Y"), 2.0)
                .unwrap_err(),
            Error::MissingThreshold { .. }
        ));
        assert!(matches!(
            dichotomize(&raw, &["A".into()], &thr, &OutcomeSpec::new("A"), 2.0).unwrap_err(),
            Error::OutcomeAmongConditions { .. }
        ));
        let thr_z = ThresholdAssignment::new(vec![("Z".into(), 2.0)]);
        assert!(matches!(
            dichotomize(&raw, &["Z".into()], &thr_z, &OutcomeSpec::new("Y"), 2.0).unwrap_err(),
            Error::UnknownVariable { .. }
        ));
    }

    #[test]
    fn grid_order_first_axis_fastest() {
        let axes = vec![
            ("X1".to_string(), vec![6.0, 7.0]),
            ("X2".to_string(), vec![6.0, 7.0]),
            ("X3".to_string(), vec![6.0, 7.0]),
        ];
        let grid = expand_grid(&axes).unwrap();
        assert_eq!(grid.points.len(), 8);
        let labels: Vec<&str> = grid.points.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(
            &labels[..4],
            &[
                "X1=6, X2=6, X3=6",
                "X1=7, X2=6, X3=6",
                "X1=6, X2=7, X3=6",
                "X1=7, X2=7, X3=6",
            ]
        );
        assert_eq!(grid.points[0].combo_id, 1);
        assert_eq!(grid.points[7].combo_id, 8);
    }

    #[test]
    fn grid_singleton_and_2x2() {
        let grid = expand_grid(&[("A".to_string(), vec![2.0])]).unwrap();
        assert_eq!(grid.points.len(), 1);
        assert_eq!(grid.points[0].combo_id, 1);

        let grid = expand_grid(&[
            ("A".to_string(), vec![2.0, 3.0]),
            ("B".to_string(), vec![2.0, 3.0]),
        ])
        .unwrap();
        assert_eq!(grid.points.len(), 4);
        // point 3 in fastest-first order is A=2, B=3
        assert_eq!(grid.points[2].assignment.get("A"), Some(2.0));
        assert_eq!(grid.points[2].assignment.get("B"), Some(3.0));
    }

    #[test]
    fn grid_rejects_bad_axes() {
        assert!(matches!(expand_grid(&[]).unwrap_err(), Error::EmptyAxes));
        assert!(matches!(
            expand_grid(&[("A".to_string(), vec![])]).unwrap_err(),
            Error::EmptyAxis { .. }
        ));
        assert!(matches!(
            expand_grid(&[
                ("A".to_string(), vec![1.0]),
                ("A".to_string(), vec![2.0])
            ])
            .unwrap_err(),
            Error::DuplicateAxis { .. }
        ));
    }

    #[test]
    fn labels_round_trip() {
        let grid = expand_grid(&[
            ("A".to_string(), vec![2.0, 3.5]),
            ("B".to_string(), vec![1.0]),
        ])
        .unwrap();
        for point in &grid.points {
            let parsed = ThresholdAssignment::parse_label(&point.label).unwrap();
            assert_eq!(parsed, point.assignment);
        }
    }
}

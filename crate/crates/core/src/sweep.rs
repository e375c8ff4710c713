//! Sweep orchestration: dichotomize → truth table → minimize → fit over
//! threshold grids, with deterministic row ordering.
//!
//! The four sweep families share one per-point pipeline; grid points are
//! data-independent and evaluated in parallel, then assembled in canonical
//! order (so evaluation order never shows in the output).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    dichotomize, expand_grid, BinaryDataset, OutcomeSpec, RawDataset, ThresholdAssignment,
};
use crate::error::{Error, Result};
use crate::metrics::{necessity, solution_fit, sweep_stats, FitStats, NecessityRow, SweepStats};
use crate::minimize::{minimize, Expectation, SolutionSet};
use crate::render::render_expression;
use crate::truthtable::{build_truth_table, TruthTable};

pub const NO_SOLUTION: &str = "No solution";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    #[serde(rename = "otsweep")]
    Ot,
    #[serde(rename = "ctsweeps")]
    CtS,
    #[serde(rename = "ctsweepm")]
    CtM,
    #[serde(rename = "dtsweep")]
    Dt,
}

/// Cutoffs, remainder handling, and detail retention shared by all sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub incl_cut: f64,
    pub n_cut: usize,
    pub include_remainders: bool,
    pub dir_exp: Option<Vec<Expectation>>,
    pub return_details: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            incl_cut: 0.8,
            n_cut: 1,
            include_remainders: false,
            dir_exp: None,
            return_details: false,
        }
    }
}

/// Complete record of one sweep invocation; enough to reproduce every
/// summary row from the raw dataset alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub kind: SweepKind,
    pub outcome: OutcomeSpec,
    pub conditions: Vec<String>,
    pub incl_cut: f64,
    pub n_cut: usize,
    pub include_remainders: bool,
    pub dir_exp: Option<Vec<Expectation>>,
    pub return_details: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thr_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_range_y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thr_x: Option<ThresholdAssignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_range: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thr_x_default: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_axes: Option<Vec<(String, Vec<f64>)>>,
    pub dataset_digest: String,
    pub n_cases: usize,
}

impl SweepSettings {
    fn base(
        kind: SweepKind,
        raw: &RawDataset,
        outcome: &OutcomeSpec,
        conditions: &[String],
        opts: &AnalysisOptions,
    ) -> Self {
        Self {
            kind,
            outcome: outcome.clone(),
            conditions: conditions.to_vec(),
            incl_cut: opts.incl_cut,
            n_cut: opts.n_cut,
            include_remainders: opts.include_remainders,
            dir_exp: opts.dir_exp.clone(),
            return_details: opts.return_details,
            thr_y: None,
            sweep_range_y: None,
            thr_x: None,
            sweep_var: None,
            sweep_range: None,
            thr_x_default: None,
            sweep_axes: None,
            dataset_digest: raw.digest(),
            n_cases: raw.n_cases(),
        }
    }
}

/// One line of the cross-threshold summary table. Which coordinate fields
/// are set depends on the sweep kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thr_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combo_id: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thr_x_label: Option<String>,
    pub expression: String,
    pub incl_s: Option<f64>,
    pub cov_s: Option<f64>,
    pub n_solutions: usize,
}

/// Everything computed at one grid point, kept when details are requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDetail {
    pub thr_y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combo_id: Option<usize>,
    pub condition_thresholds: ThresholdAssignment,
    pub truth_table: TruthTable,
    pub solutions: SolutionSet,
    /// One fit record per model, in model order.
    pub fits: Vec<FitStats>,
    pub necessity: Vec<NecessityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub summary: Vec<SummaryRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Vec<PointDetail>>,
    pub settings: SweepSettings,
    pub stats: SweepStats,
}

struct PointOutcome {
    expression: String,
    incl_s: Option<f64>,
    cov_s: Option<f64>,
    n_solutions: usize,
    detail: PointDetail,
}

/// Run the full pipeline at one (condition thresholds, outcome threshold)
/// point.
fn evaluate_point(
    raw: &RawDataset,
    outcome: &OutcomeSpec,
    conditions: &[String],
    assignment: &ThresholdAssignment,
    thr_y: f64,
    combo_id: Option<usize>,
    opts: &AnalysisOptions,
) -> Result<PointOutcome> {
    let bin: BinaryDataset = dichotomize(raw, conditions, assignment, outcome, thr_y)?;
    let tt = build_truth_table(&bin, opts.incl_cut, opts.n_cut)?;
    let solutions = minimize(&tt, opts.include_remainders, opts.dir_exp.as_deref())?;
    let fits: Vec<FitStats> = solutions
        .models
        .iter()
        .map(|m| solution_fit(m, &bin))
        .collect();
    let expression = solutions
        .models
        .first()
        .map(|m| render_expression(m, conditions))
        .unwrap_or_else(|| NO_SOLUTION.to_string());
    let (incl_s, cov_s) = fits
        .first()
        .map(|f| (f.incl_s, f.cov_s))
        .unwrap_or((None, None));
    let necessity = necessity(&bin);
    Ok(PointOutcome {
        expression,
        incl_s,
        cov_s,
        n_solutions: solutions.models.len(),
        detail: PointDetail {
            thr_y,
            combo_id,
            condition_thresholds: assignment.clone(),
            truth_table: tt,
            solutions,
            fits,
            necessity,
        },
    })
}

fn sorted_ascending(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
}

fn assemble(
    settings: SweepSettings,
    rows: Vec<(SummaryRow, PointDetail)>,
) -> SweepResult {
    let stats = sweep_stats(
        &rows
            .iter()
            .map(|(row, _)| (row.expression.clone(), row.incl_s, row.cov_s))
            .collect::<Vec<_>>(),
    );
    let (summary, details): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    SweepResult {
        summary,
        details: settings.return_details.then_some(details),
        settings,
        stats,
    }
}

/// Outcome-threshold sweep: condition thresholds fixed, one row per thrY in
/// ascending order.
pub fn ot_sweep(
    raw: &RawDataset,
    outcome: &OutcomeSpec,
    conditions: &[String],
    sweep_range: &[f64],
    thr_x: &ThresholdAssignment,
    opts: &AnalysisOptions,
) -> Result<SweepResult> {
    if sweep_range.is_empty() {
        return Err(Error::EmptySweepRange);
    }
    thr_x.check_covers(conditions)?;

    let thr_ys = sorted_ascending(sweep_range);
    let rows: Vec<(SummaryRow, PointDetail)> = thr_ys
        .par_iter()
        .map(|&thr_y| {
            let point = evaluate_point(raw, outcome, conditions, thr_x, thr_y, None, opts)?;
            Ok((
                SummaryRow {
                    thr_y: Some(thr_y),
                    threshold: None,
                    combo_id: None,
                    thr_x_label: None,
                    expression: point.expression,
                    incl_s: point.incl_s,
                    cov_s: point.cov_s,
                    n_solutions: point.n_solutions,
                },
                point.detail,
            ))
        })
        .collect::<Result<_>>()?;

    let mut settings = SweepSettings::base(SweepKind::Ot, raw, outcome, conditions, opts);
    settings.sweep_range_y = Some(thr_ys);
    settings.thr_x = Some(thr_x.clone());
    Ok(assemble(settings, rows))
}

/// Single-condition threshold sweep: one condition's threshold varies, all
/// others sit at `thr_x_default`, the outcome threshold is fixed.
pub fn ct_sweep_s(
    raw: &RawDataset,
    outcome: &OutcomeSpec,
    conditions: &[String],
    thr_y: f64,
    sweep_var: &str,
    sweep_range: &[f64],
    thr_x_default: f64,
    opts: &AnalysisOptions,
) -> Result<SweepResult> {
    if sweep_range.is_empty() {
        return Err(Error::EmptySweepRange);
    }
    if !conditions.iter().any(|c| c == sweep_var) {
        return Err(Error::SweepVarNotACondition {
            name: sweep_var.to_string(),
        });
    }

    let values = sorted_ascending(sweep_range);
    let rows: Vec<(SummaryRow, PointDetail)> = values
        .par_iter()
        .map(|&value| {
            let assignment = ThresholdAssignment::new(
                conditions
                    .iter()
                    .map(|c| {
                        let thr = if c == sweep_var { value } else { thr_x_default };
                        (c.clone(), thr)
                    })
                    .collect(),
            );
            let point = evaluate_point(raw, outcome, conditions, &assignment, thr_y, None, opts)?;
            Ok((
                SummaryRow {
                    thr_y: None,
                    threshold: Some(value),
                    combo_id: None,
                    thr_x_label: None,
                    expression: point.expression,
                    incl_s: point.incl_s,
                    cov_s: point.cov_s,
                    n_solutions: point.n_solutions,
                },
                point.detail,
            ))
        })
        .collect::<Result<_>>()?;

    let mut settings = SweepSettings::base(SweepKind::CtS, raw, outcome, conditions, opts);
    settings.thr_y = Some(thr_y);
    settings.sweep_var = Some(sweep_var.to_string());
    settings.sweep_range = Some(values);
    settings.thr_x_default = Some(thr_x_default);
    Ok(assemble(settings, rows))
}

fn check_axes(axes: &[(String, Vec<f64>)], conditions: &[String]) -> Result<()> {
    for (name, _) in axes {
        if !conditions.contains(name) {
            return Err(Error::UnknownAxis { name: name.clone() });
        }
    }
    for condition in conditions {
        if !axes.iter().any(|(name, _)| name == condition) {
            return Err(Error::AxisMissingForCondition {
                name: condition.clone(),
            });
        }
    }
    Ok(())
}

/// Multi-condition threshold sweep over the full grid, first axis fastest.
/// Every condition needs an axis; fix a threshold with a singleton axis.
pub fn ct_sweep_m(
    raw: &RawDataset,
    outcome: &OutcomeSpec,
    conditions: &[String],
    thr_y: f64,
    sweep_list: &[(String, Vec<f64>)],
    opts: &AnalysisOptions,
) -> Result<SweepResult> {
    check_axes(sweep_list, conditions)?;
    let grid = expand_grid(sweep_list)?;

    let rows: Vec<(SummaryRow, PointDetail)> = grid
        .points
        .par_iter()
        .map(|point| {
            let outcome_point = evaluate_point(
                raw,
                outcome,
                conditions,
                &point.assignment,
                thr_y,
                Some(point.combo_id),
                opts,
            )?;
            Ok((
                SummaryRow {
                    thr_y: None,
                    threshold: None,
                    combo_id: Some(point.combo_id),
                    thr_x_label: Some(point.label.clone()),
                    expression: outcome_point.expression,
                    incl_s: outcome_point.incl_s,
                    cov_s: outcome_point.cov_s,
                    n_solutions: outcome_point.n_solutions,
                },
                outcome_point.detail,
            ))
        })
        .collect::<Result<_>>()?;

    let mut settings = SweepSettings::base(SweepKind::CtM, raw, outcome, conditions, opts);
    settings.thr_y = Some(thr_y);
    settings.sweep_axes = Some(sweep_list.to_vec());
    Ok(assemble(settings, rows))
}

/// Dual sweep over condition-threshold combinations and outcome thresholds;
/// rows ordered by combo_id, then thrY ascending within each combo.
pub fn dt_sweep(
    raw: &RawDataset,
    outcome: &OutcomeSpec,
    conditions: &[String],
    sweep_list_x: &[(String, Vec<f64>)],
    sweep_range_y: &[f64],
    opts: &AnalysisOptions,
) -> Result<SweepResult> {
    if sweep_range_y.is_empty() {
        return Err(Error::EmptySweepRange);
    }
    check_axes(sweep_list_x, conditions)?;
    let grid = expand_grid(sweep_list_x)?;
    let thr_ys = sorted_ascending(sweep_range_y);

    let tasks: Vec<(&crate::data::GridPoint, f64)> = grid
        .points
        .iter()
        .flat_map(|point| thr_ys.iter().map(move |&thr_y| (point, thr_y)))
        .collect();
    let rows: Vec<(SummaryRow, PointDetail)> = tasks
        .par_iter()
        .map(|&(point, thr_y)| {
            let outcome_point = evaluate_point(
                raw,
                outcome,
                conditions,
                &point.assignment,
                thr_y,
                Some(point.combo_id),
                opts,
            )?;
            Ok((
                SummaryRow {
                    thr_y: Some(thr_y),
                    threshold: None,
                    combo_id: Some(point.combo_id),
                    thr_x_label: Some(point.label.clone()),
                    expression: outcome_point.expression,
                    incl_s: outcome_point.incl_s,
                    cov_s: outcome_point.cov_s,
                    n_solutions: outcome_point.n_solutions,
                },
                outcome_point.detail,
            ))
        })
        .collect::<Result<_>>()?;

    let mut settings = SweepSettings::base(SweepKind::Dt, raw, outcome, conditions, opts);
    settings.sweep_axes = Some(sweep_list_x.to_vec());
    settings.sweep_range_y = Some(thr_ys);
    Ok(assemble(settings, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn d1() -> RawDataset {
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

    fn conditions() -> Vec<String> {
        vec!["A".to_string(), "B".to_string()]
    }

    fn thr_ab() -> ThresholdAssignment {
        ThresholdAssignment::new(vec![("A".into(), 2.0), ("B".into(), 2.0)])
    }

    #[test]
    fn ot_sweep_d1() {
        let result = ot_sweep(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            &[2.0, 3.0],
            &thr_ab(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(result.summary.len(), 2);
        let r0 = &result.summary[0];
        assert_eq!(r0.thr_y, Some(2.0));
        assert_eq!(r0.expression, "A + B");
        assert_eq!(r0.incl_s, Some(1.0));
        assert_eq!(r0.cov_s, Some(1.0));
        assert_eq!(r0.n_solutions, 1);
        let r1 = &result.summary[1];
        assert_eq!(r1.thr_y, Some(3.0));
        assert_eq!(r1.expression, "A*B");
        assert_eq!(r1.incl_s, Some(1.0));
        assert_eq!(r1.cov_s, Some(1.0));
        assert!(result.details.is_none());
    }

    #[test]
    fn ot_sweep_no_solution_row() {
        // above every Y value nothing is positive
        let result = ot_sweep(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            &[9.0],
            &thr_ab(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        let row = &result.summary[0];
        assert_eq!(row.expression, NO_SOLUTION);
        assert_eq!(row.incl_s, None);
        assert_eq!(row.cov_s, None);
        assert_eq!(row.n_solutions, 0);
        assert_eq!(result.stats.stability, 1.0);
    }

    #[test]
    fn ct_sweep_s_d1() {
        let result = ct_sweep_s(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            2.0,
            "B",
            &[2.0, 3.0],
            2.0,
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(result.summary[0].threshold, Some(2.0));
        assert_eq!(result.summary[0].expression, "A + B");
        assert_eq!(result.summary[1].threshold, Some(3.0));
        assert_eq!(result.summary[1].expression, "A");
        assert_eq!(result.summary[1].incl_s, Some(1.0));
        assert_eq!(result.summary[1].cov_s, Some(0.8));
    }

    #[test]
    fn ct_sweep_s_rejects_unknown_var() {
        let err = ct_sweep_s(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            2.0,
            "Z",
            &[2.0],
            2.0,
            &AnalysisOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SweepVarNotACondition { .. }));
    }

    #[test]
    fn ct_sweep_m_d1() {
        let result = ct_sweep_m(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            2.0,
            &[("A".into(), vec![2.0, 3.0]), ("B".into(), vec![2.0, 3.0])],
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(result.summary.len(), 4);
        let labels: Vec<&str> = result
            .summary
            .iter()
            .map(|r| r.thr_x_label.as_deref().unwrap())
            .collect();
        assert_eq!(labels, ["A=2, B=2", "A=3, B=2", "A=2, B=3", "A=3, B=3"]);
        let combo_ids: Vec<usize> = result.summary.iter().map(|r| r.combo_id.unwrap()).collect();
        assert_eq!(combo_ids, [1, 2, 3, 4]);
    }

    #[test]
    fn ct_sweep_m_requires_full_axis_cover() {
        let err = ct_sweep_m(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            2.0,
            &[("A".into(), vec![2.0])],
            &AnalysisOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxisMissingForCondition { .. }));

        let err = ct_sweep_m(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            2.0,
            &[
                ("A".into(), vec![2.0]),
                ("B".into(), vec![2.0]),
                ("Z".into(), vec![2.0]),
            ],
            &AnalysisOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownAxis { .. }));
    }

    #[test]
    fn dt_sweep_row_order() {
        let result = dt_sweep(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            &[("A".into(), vec![2.0]), ("B".into(), vec![2.0])],
            &[2.0, 3.0],
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(result.summary.len(), 2);
        assert_eq!(result.summary[0].thr_y, Some(2.0));
        assert_eq!(result.summary[0].combo_id, Some(1));
        assert_eq!(result.summary[0].thr_x_label.as_deref(), Some("A=2, B=2"));
        assert_eq!(result.summary[0].expression, "A + B");
        assert_eq!(result.summary[1].thr_y, Some(3.0));
        assert_eq!(result.summary[1].expression, "A*B");
    }

    #[test]
    fn details_retained_on_request() {
        let opts = AnalysisOptions {
            return_details: true,
            ..AnalysisOptions::default()
        };
        let result = ot_sweep(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            &[2.0, 3.0],
            &thr_ab(),
            &opts,
        )
        .unwrap();
        let details = result.details.as_ref().unwrap();
        assert_eq!(details.len(), 2);
        assert_eq!(details[0].thr_y, 2.0);
        assert_eq!(details[0].truth_table.rows.len(), 4);
        assert_eq!(details[0].necessity.len(), 4);
        assert_eq!(details[0].fits.len(), details[0].solutions.models.len());
    }

    #[test]
    fn sweeps_agree_at_shared_points() {
        let raw = d1();
        let outcome = OutcomeSpec::new("Y");
        let opts = AnalysisOptions::default();
        let ot = ot_sweep(&raw, &outcome, &conditions(), &[2.0], &thr_ab(), &opts).unwrap();
        let ctm = ct_sweep_m(
            &raw,
            &outcome,
            &conditions(),
            2.0,
            &[("A".into(), vec![2.0]), ("B".into(), vec![2.0])],
            &opts,
        )
        .unwrap();
        let dt = dt_sweep(
            &raw,
            &outcome,
            &conditions(),
            &[("A".into(), vec![2.0]), ("B".into(), vec![2.0])],
            &[2.0],
            &opts,
        )
        .unwrap();
        let expressions = [
            &ot.summary[0].expression,
            &ctm.summary[0].expression,
            &dt.summary[0].expression,
        ];
        assert!(expressions.iter().all(|e| *e == expressions[0]));
        assert_eq!(ot.summary[0].incl_s, ctm.summary[0].incl_s);
        assert_eq!(ot.summary[0].cov_s, dt.summary[0].cov_s);
    }

    #[test]
    fn settings_record_is_complete() {
        let result = ot_sweep(
            &d1(),
            &OutcomeSpec::new("Y"),
            &conditions(),
            &[3.0, 2.0],
            &thr_ab(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        let s = &result.settings;
        assert_eq!(s.kind, SweepKind::Ot);
        assert_eq!(s.sweep_range_y.as_deref(), Some(&[2.0, 3.0][..]));
        assert_eq!(s.n_cases, 6);
        assert_eq!(s.dataset_digest.len(), 64);
    }
}

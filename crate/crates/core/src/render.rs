//! Human- and machine-readable output: expression strings, configuration
//! charts, plain summary tables, Markdown reports, and the structured
//! result file.
//!
//! Everything here is byte-stable: identical inputs (with an injected
//! timestamp for reports) produce identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::minimize::{Implicant, Literal, Model};
use crate::sweep::{SweepKind, SweepResult, SummaryRow, NO_SOLUTION};

/// Render with 3 decimals, rounding halves away from zero.
pub fn fmt3(x: f64) -> String {
    let scaled = (x.abs() * 1000.0).round() as i64;
    let sign = if x < 0.0 && scaled > 0 { "-" } else { "" };
    format!("{sign}{}.{:03}", scaled / 1000, scaled % 1000)
}

fn fmt3_opt(x: Option<f64>) -> String {
    x.map(fmt3).unwrap_or_else(|| "NA".to_string())
}

/// Disjunction of canonical-order terms: literals joined with "*", terms
/// with " + ", absent literals "~"-prefixed.
pub fn render_expression(model: &Model, condition_names: &[String]) -> String {
    model
        .terms()
        .iter()
        .map(|t| t.render(condition_names))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parse the expression grammar back into a model;
/// `render_expression(parse_expression(e)) == e` on canonical expressions.
pub fn parse_expression(expression: &str, condition_names: &[String]) -> Result<Model> {
    if expression == NO_SOLUTION {
        return Err(Error::EmptyModel);
    }
    let k = condition_names.len();
    let mut terms = Vec::new();
    for term_text in expression.split(" + ") {
        let mut literals = vec![Literal::Free; k];
        if term_text != "1" {
            for part in term_text.split('*') {
                let (name, literal) = match part.strip_prefix('~') {
                    Some(rest) => (rest, Literal::Absent),
                    None => (part, Literal::Present),
                };
                let index = condition_names
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Error::UnknownVariable {
                        name: name.to_string(),
                    })?;
                literals[index] = literal;
            }
        }
        terms.push(Implicant::from_literals(&literals));
    }
    Model::new(terms)
}

/// Semantic cell of a configuration chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartCell {
    Present,
    Absent,
    Blank,
    Mixed,
}

/// Fiss-style chart: conditions as rows, solution terms (or whole
/// thresholds) as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigChart {
    pub conditions: Vec<String>,
    pub columns: Vec<String>,
    /// cells[condition][column]
    pub cells: Vec<Vec<ChartCell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartLevel {
    /// One column per solution term (Fiss notation).
    Term,
    /// One column per summary row, aggregating the first model's terms.
    Threshold,
}

impl FromStr for ChartLevel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "term" => Ok(ChartLevel::Term),
            "threshold" => Ok(ChartLevel::Threshold),
            other => Err(format!("unknown chart level {other:?}")),
        }
    }
}

/// Glyphs for chart cells. Within a set all glyphs are distinct except the
/// blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSet {
    pub present: &'static str,
    pub absent: &'static str,
    pub blank: &'static str,
    pub mixed: &'static str,
}

impl SymbolSet {
    pub fn unicode() -> Self {
        SymbolSet {
            present: "\u{25CF}",
            absent: "\u{2297}",
            blank: "",
            mixed: "\u{00B1}",
        }
    }

    pub fn ascii() -> Self {
        SymbolSet {
            present: "*",
            absent: "x",
            blank: "",
            mixed: "~",
        }
    }

    pub fn latex() -> Self {
        SymbolSet {
            present: "$\\bullet$",
            absent: "$\\otimes$",
            blank: "",
            mixed: "$\\pm$",
        }
    }

    fn glyph(&self, cell: ChartCell) -> &'static str {
        match cell {
            ChartCell::Present => self.present,
            ChartCell::Absent => self.absent,
            ChartCell::Blank => self.blank,
            ChartCell::Mixed => self.mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFormat {
    Unicode,
    Ascii,
    Latex,
}

impl ChartFormat {
    pub fn symbols(self) -> SymbolSet {
        match self {
            ChartFormat::Unicode => SymbolSet::unicode(),
            ChartFormat::Ascii => SymbolSet::ascii(),
            ChartFormat::Latex => SymbolSet::latex(),
        }
    }
}

impl FromStr for ChartFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unicode" => Ok(ChartFormat::Unicode),
            "ascii" => Ok(ChartFormat::Ascii),
            "latex" => Ok(ChartFormat::Latex),
            other => Err(format!("unknown chart format {other:?}")),
        }
    }
}

/// Coordinate string of a summary row, used for chart column labels and
/// detail-section headings.
pub fn row_coordinate(result: &SweepResult, row: &SummaryRow) -> String {
    match result.settings.kind {
        SweepKind::Ot => format!("thrY = {}", row.thr_y.unwrap_or(f64::NAN)),
        SweepKind::CtS => format!(
            "{} = {}",
            result.settings.sweep_var.as_deref().unwrap_or("threshold"),
            row.threshold.unwrap_or(f64::NAN)
        ),
        SweepKind::CtM => row.thr_x_label.clone().unwrap_or_default(),
        SweepKind::Dt => format!(
            "thrY = {}, {}",
            row.thr_y.unwrap_or(f64::NAN),
            row.thr_x_label.as_deref().unwrap_or_default()
        ),
    }
}

/// Models backing one summary row: all models when details were retained,
/// otherwise the first model re-parsed from the expression string.
fn row_models(result: &SweepResult, index: usize) -> Result<Vec<Model>> {
    if let Some(details) = &result.details {
        return Ok(details[index].solutions.models.clone());
    }
    let row = &result.summary[index];
    if row.n_solutions == 0 {
        return Ok(Vec::new());
    }
    Ok(vec![parse_expression(
        &row.expression,
        &result.settings.conditions,
    )?])
}

/// Build a configuration chart from a sweep result. Rows without a solution
/// contribute no columns; it is an error if no row has one.
pub fn config_chart(result: &SweepResult, level: ChartLevel) -> Result<ConfigChart> {
    if result.summary.iter().all(|r| r.n_solutions == 0) {
        return Err(Error::NothingToChart);
    }
    let conditions = result.settings.conditions.clone();
    let k = conditions.len();
    let mut columns: Vec<String> = Vec::new();
    let mut cells: Vec<Vec<ChartCell>> = vec![Vec::new(); k];

    for (index, row) in result.summary.iter().enumerate() {
        if row.n_solutions == 0 {
            continue;
        }
        let coordinate = row_coordinate(result, row);
        let models = row_models(result, index)?;
        match level {
            ChartLevel::Term => {
                let mut counter = 0usize;
                for model in &models {
                    for term in model.terms() {
                        counter += 1;
                        columns.push(format!("{coordinate} (M{counter})"));
                        for (i, row_cells) in cells.iter_mut().enumerate() {
                            row_cells.push(match term.literal(i) {
                                Literal::Present => ChartCell::Present,
                                Literal::Absent => ChartCell::Absent,
                                Literal::Free => ChartCell::Blank,
                            });
                        }
                    }
                }
            }
            ChartLevel::Threshold => {
                let first = &models[0];
                columns.push(coordinate);
                for (i, row_cells) in cells.iter_mut().enumerate() {
                    let literals: Vec<Literal> =
                        first.terms().iter().map(|t| t.literal(i)).collect();
                    let cell = if literals.iter().all(|&l| l == Literal::Present) {
                        ChartCell::Present
                    } else if literals.iter().all(|&l| l == Literal::Absent) {
                        ChartCell::Absent
                    } else if literals.iter().all(|&l| l == Literal::Free) {
                        ChartCell::Blank
                    } else {
                        ChartCell::Mixed
                    };
                    row_cells.push(cell);
                }
            }
        }
    }

    Ok(ConfigChart {
        conditions,
        columns,
        cells,
    })
}

fn chart_legend(symbols: &SymbolSet, has_mixed: bool, latex_quotes: bool) -> String {
    let care = if latex_quotes {
        "``don't care''"
    } else {
        "\"don't care\""
    };
    let mut legend = format!(
        "{} = condition present; {} = condition absent; blank = {}.",
        symbols.present, symbols.absent, care
    );
    if has_mixed {
        legend.push_str(&format!(" {} = mixed polarity across terms.", symbols.mixed));
    }
    legend
}

fn char_width(s: &str) -> usize {
    s.chars().count()
}

fn pad_center(s: &str, width: usize) -> String {
    let len = char_width(s);
    let left = (width.saturating_sub(len)) / 2;
    let right = width.saturating_sub(len) - left;
    format!("{}{}{}", " ".repeat(left), s, " ".repeat(right))
}

/// Render a chart as aligned text (unicode/ascii) or as a LaTeX tabular
/// body.
pub fn render_chart(chart: &ConfigChart, format: ChartFormat) -> String {
    let symbols = format.symbols();
    let has_mixed = chart
        .cells
        .iter()
        .any(|row| row.contains(&ChartCell::Mixed));

    if format == ChartFormat::Latex {
        let mut out = String::new();
        let header: Vec<String> = std::iter::once(String::new())
            .chain(chart.columns.iter().cloned())
            .collect();
        let _ = writeln!(out, "{} \\\\", header.join(" & "));
        for (i, name) in chart.conditions.iter().enumerate() {
            let cells: Vec<String> = std::iter::once(name.clone())
                .chain(chart.cells[i].iter().map(|&c| symbols.glyph(c).to_string()))
                .collect();
            let _ = writeln!(out, "{} \\\\", cells.join(" & "));
        }
        let _ = writeln!(
            out,
            "\\multicolumn{{{}}}{{l}}{{\\footnotesize {}}}",
            chart.columns.len() + 1,
            chart_legend(&symbols, has_mixed, true)
        );
        return out;
    }

    let name_width = chart
        .conditions
        .iter()
        .map(|n| char_width(n))
        .max()
        .unwrap_or(0);
    let col_widths: Vec<usize> = chart
        .columns
        .iter()
        .map(|label| char_width(label).max(1))
        .collect();

    let mut out = String::new();
    let mut header = " ".repeat(name_width);
    for (label, &w) in chart.columns.iter().zip(&col_widths) {
        header.push_str("  ");
        header.push_str(&pad_center(label, w));
    }
    let _ = writeln!(out, "{}", header.trim_end());
    for (i, name) in chart.conditions.iter().enumerate() {
        let mut line = format!("{name:<name_width$}");
        for (&cell, &w) in chart.cells[i].iter().zip(&col_widths) {
            line.push_str("  ");
            line.push_str(&pad_center(symbols.glyph(cell), w));
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "{}", chart_legend(&symbols, has_mixed, false));
    out
}

fn summary_columns(result: &SweepResult) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let headers: Vec<&'static str> = match result.settings.kind {
        SweepKind::Ot => vec!["thrY", "expression", "inclS", "covS", "n_solutions"],
        SweepKind::CtS => vec!["threshold", "expression", "inclS", "covS", "n_solutions"],
        SweepKind::CtM => vec![
            "threshold",
            "combo_id",
            "expression",
            "inclS",
            "covS",
            "n_solutions",
        ],
        SweepKind::Dt => vec![
            "thrY",
            "combo_id",
            "thrX",
            "expression",
            "inclS",
            "covS",
            "n_solutions",
        ],
    };
    let rows = result
        .summary
        .iter()
        .map(|row| {
            let mut cells: Vec<String> = Vec::new();
            match result.settings.kind {
                SweepKind::Ot => cells.push(row.thr_y.unwrap_or(f64::NAN).to_string()),
                SweepKind::CtS => cells.push(row.threshold.unwrap_or(f64::NAN).to_string()),
                SweepKind::CtM => {
                    cells.push(row.thr_x_label.clone().unwrap_or_default());
                    cells.push(row.combo_id.unwrap_or(0).to_string());
                }
                SweepKind::Dt => {
                    cells.push(row.thr_y.unwrap_or(f64::NAN).to_string());
                    cells.push(row.combo_id.unwrap_or(0).to_string());
                    cells.push(row.thr_x_label.clone().unwrap_or_default());
                }
            }
            cells.push(row.expression.clone());
            cells.push(fmt3_opt(row.incl_s));
            cells.push(fmt3_opt(row.cov_s));
            cells.push(row.n_solutions.to_string());
            cells
        })
        .collect();
    (headers, rows)
}

/// The summary rows as a right-aligned table, one space between columns
/// (each cell is rendered as " " + padded value).
pub fn summary_table_plain(result: &SweepResult) -> String {
    let (headers, rows) = summary_columns(result);
    let mut widths: Vec<usize> = headers.iter().map(|h| char_width(h)).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(char_width(cell));
        }
    }
    let render_line = |cells: &[String]| {
        let mut line = String::new();
        for (cell, &w) in cells.iter().zip(&widths) {
            let pad = w.saturating_sub(char_width(cell));
            line.push(' ');
            line.push_str(&" ".repeat(pad));
            line.push_str(cell);
        }
        line
    };
    let mut out = render_line(
        &headers
            .iter()
            .map(|h| h.to_string())
            .collect::<Vec<String>>(),
    );
    for row in &rows {
        out.push('\n');
        out.push_str(&render_line(row));
    }
    out
}

fn kind_title(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::Ot => "OTS-QCA Summary",
        SweepKind::CtS => "CTS-QCA Summary",
        SweepKind::CtM => "MCTS-QCA Summary",
        SweepKind::Dt => "DTS-QCA Summary",
    }
}

fn analysis_parameters_block(result: &SweepResult) -> String {
    let s = &result.settings;
    format!(
        "Analysis Parameters:\n  Outcome: {}\n  Conditions: {}\n  Consistency cutoff: {}\n  Frequency cutoff: {}",
        s.outcome,
        s.conditions.join(", "),
        s.incl_cut,
        s.n_cut
    )
}

fn stats_block(result: &SweepResult) -> String {
    let stats = &result.stats;
    let range = |r: Option<(f64, f64)>| match r {
        Some((lo, hi)) => format!("{} - {}", fmt3(lo), fmt3(hi)),
        None => "NA".to_string(),
    };
    format!(
        "Number of thresholds analyzed: {}\nNumber of unique solutions: {}\nSolution stability: {}\nConsistency range: {}\nCoverage range: {}",
        stats.n_thresholds,
        stats.unique_solutions,
        fmt3(stats.stability),
        range(stats.incl_range),
        range(stats.cov_range),
    )
}

/// The print layout for a sweep result: header, analysis parameters, and
/// the summary table.
pub fn format_summary(result: &SweepResult) -> String {
    let title = kind_title(result.settings.kind);
    format!(
        "{title}\n{}\n\n{}\n\nResults by Threshold:\n\n{}\n",
        "=".repeat(char_width(title)),
        analysis_parameters_block(result),
        summary_table_plain(result),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Full,
    Summary,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(ReportFormat::Full),
            "summary" => Ok(ReportFormat::Summary),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub title: String,
    pub format: ReportFormat,
    pub include_chart: bool,
    pub chart_level: ChartLevel,
    pub chart_format: ChartFormat,
    /// Injected clock; reports regenerate byte-identically under a fixed
    /// value. Defaults to now.
    pub timestamp: Option<DateTime<Utc>>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            title: "Threshold Sweep Report".to_string(),
            format: ReportFormat::Full,
            include_chart: true,
            chart_level: ChartLevel::Term,
            chart_format: ChartFormat::Unicode,
            timestamp: None,
        }
    }
}

fn settings_lines(result: &SweepResult) -> String {
    let s = &result.settings;
    let mut lines: Vec<String> = Vec::new();
    lines.push(format!("- Artifact: qca-sweep {}", env!("CARGO_PKG_VERSION")));
    lines.push(format!("- Dataset digest (SHA-256): {}", s.dataset_digest));
    lines.push(format!("- Cases: {}", s.n_cases));
    let kind = match s.kind {
        SweepKind::Ot => "otsweep",
        SweepKind::CtS => "ctsweeps",
        SweepKind::CtM => "ctsweepm",
        SweepKind::Dt => "dtsweep",
    };
    lines.push(format!("- Sweep kind: {kind}"));
    lines.push(format!("- Outcome: {}", s.outcome));
    lines.push(format!("- Conditions: {}", s.conditions.join(", ")));
    let join = |values: &[f64]| {
        values
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    if let Some(thr_x) = &s.thr_x {
        lines.push(format!("- Condition thresholds: {}", thr_x.label()));
    }
    if let Some(var) = &s.sweep_var {
        lines.push(format!("- Sweep variable: {var}"));
    }
    if let Some(range) = &s.sweep_range {
        lines.push(format!("- Sweep range: {}", join(range)));
    }
    if let Some(default) = s.thr_x_default {
        lines.push(format!("- Default condition threshold: {default}"));
    }
    if let Some(axes) = &s.sweep_axes {
        let rendered: Vec<String> = axes
            .iter()
            .map(|(name, values)| format!("{name} in [{}]", join(values)))
            .collect();
        lines.push(format!("- Sweep axes: {}", rendered.join("; ")));
    }
    if let Some(thr_y) = s.thr_y {
        lines.push(format!("- Outcome threshold (thrY): {thr_y}"));
    }
    if let Some(range) = &s.sweep_range_y {
        lines.push(format!("- Outcome sweep range (thrY): {}", join(range)));
    }
    lines.push(format!(
        "- Remainder inclusion: {}",
        if s.include_remainders {
            "remainders"
        } else {
            "none"
        }
    ));
    lines.push(format!(
        "- Directional expectations: {}",
        match &s.dir_exp {
            Some(exp) => exp
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            None => "none".to_string(),
        }
    ));
    lines.push(format!(
        "- Details retained: {}",
        if s.return_details { "yes" } else { "no" }
    ));
    lines.join("\n")
}

fn truth_table_block(detail: &crate::sweep::PointDetail) -> String {
    let tt = &detail.truth_table;
    let k = tt.conditions.len();
    let mut widths: Vec<usize> = tt.conditions.iter().map(|c| char_width(c)).collect();
    let mut lines: Vec<Vec<String>> = Vec::new();

    let mut header: Vec<String> = tt.conditions.clone();
    header.extend(["n", "incl", "OUT", "cases"].map(String::from));
    for row in &tt.rows {
        let mut cells: Vec<String> = tt
            .config_bits(row.config)
            .iter()
            .map(|b| b.to_string())
            .collect();
        cells.push(row.n.to_string());
        cells.push(row.incl().map(fmt3).unwrap_or_else(|| "-".to_string()));
        cells.push(row.out.symbol().to_string());
        cells.push(row.cases.join(", "));
        lines.push(cells);
    }
    widths.extend([1usize, 5, 3, 5]);
    for cells in std::iter::once(&header).chain(lines.iter()) {
        for (w, cell) in widths.iter_mut().zip(cells) {
            *w = (*w).max(char_width(cell));
        }
    }

    let render = |cells: &[String]| {
        let mut line = String::new();
        for (i, (cell, &w)) in cells.iter().zip(&widths).enumerate() {
            line.push(' ');
            if i == k + 4 - 1 {
                // cases column is left-aligned
                line.push_str(cell);
            } else {
                line.push_str(&" ".repeat(w.saturating_sub(char_width(cell))));
                line.push_str(cell);
            }
        }
        line.trim_end().to_string()
    };
    let mut out = render(&header);
    for cells in &lines {
        out.push('\n');
        out.push_str(&render(cells));
    }
    out
}

fn detail_section(result: &SweepResult, index: usize) -> String {
    let detail = &result.details.as_ref().expect("caller checked")[index];
    let row = &result.summary[index];
    let conditions = &result.settings.conditions;
    let mut out = String::new();
    let _ = writeln!(out, "### {}\n", row_coordinate(result, row));
    let _ = writeln!(out, "Truth table:\n");
    let _ = writeln!(out, "```\n{}\n```\n", truth_table_block(detail));

    let solutions = &detail.solutions;
    if solutions.models.is_empty() {
        let _ = writeln!(out, "No solution.\n");
        return out;
    }
    let type_name = match solutions.solution_type {
        crate::minimize::SolutionType::Conservative => "conservative",
        crate::minimize::SolutionType::Parsimonious => "parsimonious",
        crate::minimize::SolutionType::Intermediate => "intermediate",
    };
    let _ = writeln!(
        out,
        "Models ({}, {}):\n",
        solutions.models.len(),
        type_name
    );
    for (i, model) in solutions.models.iter().enumerate() {
        let _ = writeln!(out, "- M{}: {}", i + 1, render_expression(model, conditions));
    }
    let render_terms = |terms: &[Implicant]| {
        if terms.is_empty() {
            "(none)".to_string()
        } else {
            terms
                .iter()
                .map(|t| t.render(conditions))
                .collect::<Vec<_>>()
                .join(", ")
        }
    };
    let _ = writeln!(out, "\nEPI: {}", render_terms(&solutions.epi));
    let _ = writeln!(out, "SPI: {}\n", render_terms(&solutions.spi));

    let _ = writeln!(out, "Fit:\n\n```");
    for (i, fit) in detail.fits.iter().enumerate() {
        let _ = writeln!(
            out,
            "M{}: inclS = {}, covS = {}",
            i + 1,
            fmt3_opt(fit.incl_s),
            fmt3_opt(fit.cov_s)
        );
        for term in &fit.per_term {
            let _ = writeln!(
                out,
                "  {}: incl = {}, cov = {}, covU = {}",
                term.term,
                fmt3_opt(term.incl),
                fmt3_opt(term.cov),
                fmt3_opt(term.cov_u)
            );
        }
    }
    let _ = writeln!(out, "```\n");

    let _ = writeln!(out, "Necessity:\n\n```");
    let name_width = detail
        .necessity
        .iter()
        .map(|r| char_width(&r.condition))
        .max()
        .unwrap_or(0)
        .max(char_width("condition"));
    let _ = writeln!(out, " {:>name_width$}  inclN   covN", "condition");
    for row in &detail.necessity {
        let _ = writeln!(
            out,
            " {:>name_width$}  {:>5}  {:>5}",
            row.condition,
            fmt3_opt(row.incl_n),
            fmt3_opt(row.cov_n)
        );
    }
    let _ = writeln!(out, "```\n");
    out
}

/// Render a Markdown report and write it to `path`. Prints the
/// confirmation line on success and returns the text.
pub fn generate_report(
    result: &SweepResult,
    path: impl AsRef<Path>,
    opts: &ReportOptions,
) -> Result<String> {
    let text = render_report(result, opts);
    let path = path.as_ref();
    fs::write(path, &text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    println!("Report generated: {}", path.display());
    Ok(text)
}

/// Render the Markdown report without touching the filesystem.
pub fn render_report(result: &SweepResult, opts: &ReportOptions) -> String {
    let timestamp = opts
        .timestamp
        .unwrap_or_else(Utc::now)
        .format("%Y-%m-%dT%H:%M:%SZ");
    let mut out = String::new();
    let _ = writeln!(out, "# {}\n", opts.title);
    let _ = writeln!(out, "Generated: {timestamp}\n");
    let _ = writeln!(out, "## Reproducibility\n");
    let _ = writeln!(out, "{}\n", settings_lines(result));
    let _ = writeln!(out, "```\n{}\n```\n", analysis_parameters_block(result));
    let _ = writeln!(out, "## Summary\n");
    let _ = writeln!(out, "```\n{}\n```\n", summary_table_plain(result));
    let _ = writeln!(out, "## Sweep Statistics\n");
    let _ = writeln!(out, "```\n{}\n```\n", stats_block(result));

    if opts.include_chart {
        let _ = writeln!(out, "## Configuration Chart\n");
        match config_chart(result, opts.chart_level) {
            Ok(chart) => {
                let rendered = render_chart(&chart, opts.chart_format);
                let _ = writeln!(out, "```\n{}```\n", rendered);
            }
            Err(Error::NothingToChart) => {
                let _ = writeln!(out, "No row has a solution; nothing to chart.\n");
            }
            Err(_) => unreachable!("chart construction only fails on empty results"),
        }
    }

    if opts.format == ReportFormat::Full && result.details.is_some() {
        let _ = writeln!(out, "## Details\n");
        for index in 0..result.summary.len() {
            out.push_str(&detail_section(result, index));
        }
    }
    // single trailing newline
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

/// Write the structured result file: settings, summary, stats, and optional
/// details as JSON with fixed key order, full-precision numbers, and
/// undefined values as null.
pub fn export_result(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(result).expect("result types serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Read a result file written by [`export_result`].
pub fn import_result(path: impl AsRef<Path>) -> Result<SweepResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::ResultFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

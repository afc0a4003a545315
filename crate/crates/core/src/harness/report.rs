//! Report tables and their CSV / Markdown renderings.
//!
//! CSV output is minimal: a header row, comma separators, no quoting and
//! `.` decimals. Accuracies and timings are rendered with two decimals.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::InvalidConfig(format!(
                "unknown report format `{other}`"
            ))),
        }
    }
}

pub trait Report {
    fn to_csv(&self) -> String;

    fn to_markdown(&self) -> String;

    fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }
}

/// Writes `report` to `path`.
pub fn emit_report(
    report: &impl Report,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, report.render(format))?;
    Ok(())
}

fn pct(v: f64) -> String {
    format!("{v:.2}")
}

fn md_row(cells: &[String]) -> String {
    format!("| {} |\n", cells.join(" | "))
}

fn md_rule(n: usize) -> String {
    format!("|{}\n", "---|".repeat(n))
}

/// Splits CSV text into rows of fields, checking the header.
fn csv_rows<'a>(text: &'a str, header: &[&str]) -> Result<Vec<Vec<&'a str>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Report("missing header".into()))?
        .split(',')
        .collect();
    if !header.is_empty() && head != header {
        return Err(Error::Report(format!("unexpected header {head:?}")));
    }
    Ok(lines.map(|l| l.split(',').collect()).collect())
}

fn num<T: FromStr>(field: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Report(format!("cannot parse `{field}`")))
}

fn field<'a>(row: &[&'a str], i: usize) -> Result<&'a str> {
    row.get(i)
        .copied()
        .ok_or_else(|| Error::Report(format!("row {row:?} has no field {i}")))
}

/// Accuracy of the best harmony for every (iterations, HMS) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    iterations: Vec<usize>,
    hms: Vec<usize>,
    /// `cells[r][c]` pairs `iterations[r]` with `hms[c]`.
    cells: Vec<Vec<f64>>,
    best: (usize, usize),
}

impl GridReport {
    pub fn new(iterations: Vec<usize>, hms: Vec<usize>, cells: Vec<Vec<f64>>) -> Result<Self> {
        if iterations.is_empty() || hms.is_empty() {
            return Err(Error::Report(
                "grid needs at least one row and column".into(),
            ));
        }
        if cells.len() != iterations.len() || cells.iter().any(|r| r.len() != hms.len()) {
            return Err(Error::Report("grid cells do not match labels".into()));
        }
        let mut best = (0, 0);
        for r in 0..iterations.len() {
            for c in 0..hms.len() {
                let (br, bc) = best;
                let better = cells[r][c] > cells[br][bc]
                    || (cells[r][c] == cells[br][bc]
                        && (iterations[r], hms[c]) < (iterations[br], hms[bc]));
                if better {
                    best = (r, c);
                }
            }
        }
        Ok(Self {
            iterations,
            hms,
            cells,
            best,
        })
    }

    pub fn iterations(&self) -> &[usize] {
        &self.iterations
    }

    pub fn hms(&self) -> &[usize] {
        &self.hms
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    /// `(row, column)` of the highest accuracy; ties go to fewer iterations,
    /// then to the smaller memory.
    pub fn best_cell(&self) -> (usize, usize) {
        self.best
    }

    pub fn best_accuracy(&self) -> f64 {
        self.cells[self.best.0][self.best.1]
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Report("missing header".into()))?
            .split(',')
            .collect();
        if head.first() != Some(&"iterations/hms") {
            return Err(Error::Report(
                "grid header must start with `iterations/hms`".into(),
            ));
        }
        let hms = head[1..]
            .iter()
            .map(|h| num(h))
            .collect::<Result<Vec<usize>>>()?;
        let mut iterations = Vec::new();
        let mut cells = Vec::new();
        for line in lines {
            let row: Vec<&str> = line.split(',').collect();
            iterations.push(num(field(&row, 0)?)?);
            cells.push(
                row[1..]
                    .iter()
                    .map(|v| num(v))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        Self::new(iterations, hms, cells)
    }
}

impl Report for GridReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("iterations/hms");
        for h in &self.hms {
            out.push_str(&format!(",{h}"));
        }
        out.push('\n');
        for (it, row) in self.iterations.iter().zip(&self.cells) {
            out.push_str(&it.to_string());
            for v in row {
                out.push(',');
                out.push_str(&pct(*v));
            }
            out.push('\n');
        }
        out
    }

    fn to_markdown(&self) -> String {
        let mut head = vec!["Iterations \\ HMS".to_string()];
        head.extend(self.hms.iter().map(ToString::to_string));
        let mut out = md_row(&head);
        out.push_str(&md_rule(head.len()));
        for (r, (it, row)) in self.iterations.iter().zip(&self.cells).enumerate() {
            let mut cells = vec![it.to_string()];
            cells.extend(row.iter().enumerate().map(|(c, v)| {
                if (r, c) == self.best {
                    format!("**{}**", pct(*v))
                } else {
                    pct(*v)
                }
            }));
            out.push_str(&md_row(&cells));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub optimizer: String,
    pub subset_size: usize,
    pub accuracy_percent: f64,
    /// Wall-clock seconds, `None` when timing was switched off.
    pub execution_seconds: Option<f64>,
}

/// One row per optimizer: best subset size, accuracy and run time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

const COMPARISON_HEADER: [&str; 4] = [
    "optimizer",
    "optimum_feature_subset",
    "classification_accuracy_percent",
    "execution_time_secs",
];

impl ComparisonReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &COMPARISON_HEADER)?
            .into_iter()
            .map(|r| {
                let secs = field(&r, 3)?;
                Ok(ComparisonRow {
                    optimizer: field(&r, 0)?.to_owned(),
                    subset_size: num(field(&r, 1)?)?,
                    accuracy_percent: num(field(&r, 2)?)?,
                    execution_seconds: if secs == "NA" { None } else { Some(num(secs)?) },
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }
}

/// Up to microsecond precision without trailing zeros, so short runs stay
/// distinguishable from zero.
fn secs(v: Option<f64>) -> String {
    match v {
        None => "NA".to_string(),
        Some(t) => {
            let s = format!("{t:.6}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            if s.contains('.') {
                s.to_string()
            } else {
                format!("{s}.00")
            }
        }
    }
}

impl Report for ComparisonReport {
    fn to_csv(&self) -> String {
        let mut out = COMPARISON_HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.optimizer,
                r.subset_size,
                pct(r.accuracy_percent),
                secs(r.execution_seconds)
            ));
        }
        out
    }

    fn to_markdown(&self) -> String {
        let head = [
            "Optimization Algorithm",
            "Optimum Feature Subset",
            "Classification Accuracy (%)",
            "Execution Time (secs.)",
        ]
        .map(String::from);
        let mut out = md_row(&head);
        out.push_str(&md_rule(head.len()));
        for r in &self.rows {
            out.push_str(&md_row(&[
                r.optimizer.clone(),
                r.subset_size.to_string(),
                pct(r.accuracy_percent),
                secs(r.execution_seconds),
            ]));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionRow {
    pub fraction_percent: f64,
    pub subset_size: usize,
    pub accuracy_percent: f64,
}

/// Accuracy of the best subset found at each requested size fraction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractionSweepReport {
    pub rows: Vec<FractionRow>,
}

const FRACTION_HEADER: [&str; 3] = ["fraction_percent", "subset_size", "accuracy_percent"];

impl FractionSweepReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &FRACTION_HEADER)?
            .into_iter()
            .map(|r| {
                Ok(FractionRow {
                    fraction_percent: num(field(&r, 0)?)?,
                    subset_size: num(field(&r, 1)?)?,
                    accuracy_percent: num(field(&r, 2)?)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }
}

impl Report for FractionSweepReport {
    fn to_csv(&self) -> String {
        let mut out = FRACTION_HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.fraction_percent,
                r.subset_size,
                pct(r.accuracy_percent)
            ));
        }
        out
    }

    fn to_markdown(&self) -> String {
        let head = ["Features (%)", "Subset Size", "Accuracy (%)"].map(String::from);
        let mut out = md_row(&head);
        out.push_str(&md_rule(head.len()));
        for r in &self.rows {
            out.push_str(&md_row(&[
                r.fraction_percent.to_string(),
                r.subset_size.to_string(),
                pct(r.accuracy_percent),
            ]));
        }
        out
    }
}

/// Outcome of scoring or searching one subset: the `select` and `eval` output.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub method: String,
    /// Sorted feature indices.
    pub features: Vec<usize>,
    pub accuracy_percent: f64,
    /// 95% Wilson interval, in percent.
    pub ci_low_percent: f64,
    pub ci_high_percent: f64,
    pub evaluations: usize,
}

const SELECTION_HEADER: [&str; 7] = [
    "method",
    "subset_size",
    "accuracy_percent",
    "ci95_low_percent",
    "ci95_high_percent",
    "evaluations",
    "features",
];

impl SelectionReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &SELECTION_HEADER)?;
        let [r] = rows.as_slice() else {
            return Err(Error::Report("selection report must hold one row".into()));
        };
        let features = field(r, 6)?
            .split(';')
            .map(num)
            .collect::<Result<Vec<usize>>>()?;
        Ok(Self {
            method: field(r, 0)?.to_owned(),
            features,
            accuracy_percent: num(field(r, 2)?)?,
            ci_low_percent: num(field(r, 3)?)?,
            ci_high_percent: num(field(r, 4)?)?,
            evaluations: num(field(r, 5)?)?,
        })
    }

    fn cells(&self) -> [String; 7] {
        [
            self.method.clone(),
            self.features.len().to_string(),
            pct(self.accuracy_percent),
            pct(self.ci_low_percent),
            pct(self.ci_high_percent),
            self.evaluations.to_string(),
            self.features
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        ]
    }
}

impl Report for SelectionReport {
    fn to_csv(&self) -> String {
        format!(
            "{}\n{}\n",
            SELECTION_HEADER.join(","),
            self.cells().join(",")
        )
    }

    fn to_markdown(&self) -> String {
        let head = SELECTION_HEADER.map(String::from);
        let mut out = md_row(&head);
        out.push_str(&md_rule(head.len()));
        out.push_str(&md_row(&self.cells()));
        out
    }
}

/// Accuracy per retained principal component count.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PcaSweepReport {
    pub rows: Vec<(usize, f64)>,
}

impl PcaSweepReport {
    /// Highest accuracy, ties to fewer components.
    pub fn best(&self) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .copied()
            .fold(None, |best, (r, a)| match best {
                Some((br, ba)) if ba > a || (ba == a && br <= r) => Some((br, ba)),
                _ => Some((r, a)),
            })
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &["components", "accuracy_percent"])?
            .into_iter()
            .map(|r| Ok((num(field(&r, 0)?)?, num(field(&r, 1)?)?)))
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }
}

impl Report for PcaSweepReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("components,accuracy_percent\n");
        for (r, a) in &self.rows {
            out.push_str(&format!("{r},{}\n", pct(*a)));
        }
        out
    }

    fn to_markdown(&self) -> String {
        let head = ["Components", "Accuracy (%)"].map(String::from);
        let mut out = md_row(&head);
        out.push_str(&md_rule(2));
        for (r, a) in &self.rows {
            out.push_str(&md_row(&[r.to_string(), pct(*a)]));
        }
        out
    }
}

/// Best and worst fitness per step of one search run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub best: Vec<f64>,
    pub worst: Vec<f64>,
}

impl Report for ConvergenceReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("step,best_percent,worst_percent\n");
        for (i, (b, w)) in self.best.iter().zip(&self.worst).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, pct(*b), pct(*w)));
        }
        out
    }

    fn to_markdown(&self) -> String {
        let head = ["Step", "Best (%)", "Worst (%)"].map(String::from);
        let mut out = md_row(&head);
        out.push_str(&md_rule(3));
        for (i, (b, w)) in self.best.iter().zip(&self.worst).enumerate() {
            out.push_str(&md_row(&[(i + 1).to_string(), pct(*b), pct(*w)]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_two() -> ComparisonReport {
        let row = |name: &str, k, acc, t| ComparisonRow {
            optimizer: name.into(),
            subset_size: k,
            accuracy_percent: acc,
            execution_seconds: Some(t),
        };
        ComparisonReport {
            rows: vec![
                row("GA", 45, 84.65, 1509.25),
                row("PSO", 40, 85.19, 1248.89),
                row("HS", 48, 90.29, 944.75),
            ],
        }
    }

    #[test]
    fn comparison_renders_fixture_rows() {
        assert_eq!(
            table_two().to_csv(),
            "optimizer,optimum_feature_subset,classification_accuracy_percent,execution_time_secs\n\
             GA,45,84.65,1509.25\nPSO,40,85.19,1248.89\nHS,48,90.29,944.75\n"
        );
        let md = table_two().to_markdown();
        assert!(md.contains("| HS | 48 | 90.29 | 944.75 |"));
        assert_eq!(
            ComparisonReport::from_csv(&table_two().to_csv()).unwrap(),
            table_two()
        );
    }

    #[test]
    fn grid_two_by_two_csv_has_three_lines() {
        let g = GridReport::new(
            vec![10, 20],
            vec![10, 20],
            vec![vec![89.31, 90.294], vec![89.37, 90.11]],
        )
        .unwrap();
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(
            csv,
            "iterations/hms,10,20\n10,89.31,90.29\n20,89.37,90.11\n"
        );
        assert_eq!(g.best_cell(), (0, 1));
        assert!(g.to_markdown().contains("**90.29**"));
        let back = GridReport::from_csv(&csv).unwrap();
        assert_eq!(back.best_cell(), (0, 1));
        assert!((back.cells()[0][1] - 90.294).abs() < 0.005);
    }

    #[test]
    fn grid_ties_prefer_fewer_iterations_then_smaller_memory() {
        let g = GridReport::new(
            vec![20, 10],
            vec![30, 20],
            vec![vec![5.0, 5.0], vec![5.0, 5.0]],
        )
        .unwrap();
        assert_eq!(g.best_cell(), (1, 1));
        let single = GridReport::new(vec![7], vec![3], vec![vec![1.0]]).unwrap();
        assert_eq!(single.best_cell(), (0, 0));
        assert!(GridReport::new(vec![], vec![1], vec![]).is_err());
        assert!(GridReport::new(vec![1], vec![1, 2], vec![vec![1.0]]).is_err());
    }

    #[test]
    fn selection_round_trip() {
        let s = SelectionReport {
            method: "hs".into(),
            features: vec![0, 2, 5],
            accuracy_percent: 90.294,
            ci_low_percent: 86.7,
            ci_high_percent: 93.0,
            evaluations: 30,
        };
        let back = SelectionReport::from_csv(&s.to_csv()).unwrap();
        assert_eq!(back.features, s.features);
        assert!((back.accuracy_percent - 90.29).abs() < 1e-12);
    }

    #[test]
    fn untimed_rows_render_na() {
        let mut t = table_two();
        t.rows[0].execution_seconds = None;
        assert!(t.to_csv().contains("GA,45,84.65,NA\n"));
        assert_eq!(ComparisonReport::from_csv(&t.to_csv()).unwrap(), t);
        t.rows[1].execution_seconds = Some(0.0004567);
        t.rows[2].execution_seconds = Some(12.0);
        assert!(t
            .to_csv()
            .ends_with("PSO,40,85.19,0.000457\nHS,48,90.29,12.00\n"));
    }

    #[test]
    fn pca_best_prefers_fewer_components_on_ties() {
        let r = PcaSweepReport {
            rows: vec![(1, 50.0), (2, 80.0), (3, 80.0)],
        };
        assert_eq!(r.best(), Some((2, 80.0)));
        assert_eq!(PcaSweepReport::from_csv(&r.to_csv()).unwrap(), r);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!(
            "markdown".parse::<ReportFormat>().unwrap(),
            ReportFormat::Markdown
        );
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::experiments::ExperimentConfig;
use super::metrics::Metrics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub key: String,
    /// One cell per section column, in column order.
    pub cells: Vec<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSection {
    pub name: String,
    /// What the row keys are (an algorithm, a stage, ...).
    pub row_label: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ReportSection {
    pub fn cell(&self, row: &str, column: &str) -> Option<&Metrics> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows
            .iter()
            .find(|r| r.key == row)
            .and_then(|r| r.cells.get(c))
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub train_size: usize,
    pub test_size: usize,
    pub sections: Vec<ReportSection>,
}

impl ExperimentReport {
    pub fn section(&self, name: &str) -> Option<&ReportSection> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn cell(&self, section: &str, row: &str, column: &str) -> Option<&Metrics> {
        self.section(section)?.cell(row, column)
    }

    pub fn accuracy(&self, section: &str, row: &str, column: &str) -> Option<f64> {
        self.cell(section, row, column).map(|m| m.accuracy)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per cell: section, row, column, accuracy, correct, total.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("section\trow\tcolumn\taccuracy\tcorrect\ttotal\n");
        for s in &self.sections {
            for r in &s.rows {
                for (col, m) in s.columns.iter().zip(&r.cells) {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{:.6}\t{}\t{}",
                        s.name,
                        r.key,
                        col,
                        m.accuracy,
                        m.correct(),
                        m.total
                    );
                }
            }
        }
        out
    }

    /// Accuracy tables in percent, one per section.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{} (seed {}, train {}, test {})\n",
            self.experiment, self.seed, self.train_size, self.test_size
        );
        for s in &self.sections {
            let first = s
                .rows
                .iter()
                .map(|r| r.key.len())
                .chain([s.row_label.len()])
                .max()
                .unwrap_or(0);
            let widths: Vec<usize> = s.columns.iter().map(|c| c.len().max(7)).collect();
            let _ = writeln!(out, "\n{} (accuracy %)", s.name);
            let _ = write!(out, "{:<first$}", s.row_label);
            for (c, w) in s.columns.iter().zip(&widths) {
                let _ = write!(out, "  {c:>w$}");
            }
            out.push('\n');
            let rule = first + widths.iter().map(|w| w + 2).sum::<usize>();
            let _ = writeln!(out, "{}", "-".repeat(rule));
            for r in &s.rows {
                let _ = write!(out, "{:<first$}", r.key);
                for (m, w) in r.cells.iter().zip(&widths) {
                    let _ = write!(out, "  {:>w$.2}", 100.0 * m.accuracy);
                }
                out.push('\n');
            }
        }
        out
    }
}

use serde::{Serialize, Serializer};

use super::{format_fixed, ReportError};
use crate::analysis::{MatchReport, PosAttentionTable};
use crate::corpus::UniquenessReport;
use crate::qamodel::TrainReport;

/// Decimal places for real-valued CSV cells.
pub const CSV_DECIMALS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_fixed(*x, CSV_DECIMALS),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Str(v) => s.serialize_str(v),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(_) | Cell::Null => s.serialize_none(),
            Cell::Bool(v) => s.serialize_bool(*v),
        }
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

/// Column-ordered table; JSON output keeps the column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), ReportError> {
        if row.len() != self.columns.len() {
            return Err(ReportError::RowWidth { row: self.rows.len(), got: row.len(), expected: self.columns.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 input"))
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: TableFormat) -> Result<String, ReportError> {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => self.to_json(),
        }
    }
}

pub fn pos_attention_table(table: &PosAttentionTable) -> Table {
    let mut t = Table::new(&["category", "mean_abs_attention_logit", "token_count"]);
    for r in &table.rows {
        t.rows.push(vec![r.category.as_str().into(), r.mean_abs_attention.into(), r.token_count.into()]);
    }
    t
}

pub fn match_report_table(report: &MatchReport) -> Table {
    let mut t = Table::new(&[
        "id",
        "matched",
        "answer_original",
        "answer_perturbed",
        "certainty_original",
        "certainty_perturbed",
    ]);
    for q in &report.per_question {
        t.rows.push(vec![
            q.id.clone().into(),
            q.matched.into(),
            q.answer_original.clone().into(),
            q.answer_perturbed.clone().into(),
            q.certainty_original.into(),
            q.certainty_perturbed.into(),
        ]);
    }
    t
}

pub fn uniqueness_table(report: &UniquenessReport) -> Table {
    let mut t = Table::new(&["context_index", "title", "nouns", "unique_nouns", "uniqueness_fraction"]);
    for c in &report.per_context {
        let unique = c.noun_sentence_counts.values().filter(|&&n| n == 1).count();
        t.rows.push(vec![
            c.context_index.into(),
            c.title.clone().into(),
            c.noun_sentence_counts.len().into(),
            unique.into(),
            c.uniqueness_fraction.into(),
        ]);
    }
    t
}

/// Per-epoch mean loss with its trailing moving average over `window`
/// epochs (empty until the window fills).
pub fn loss_curve_table(report: &TrainReport, window: usize) -> Table {
    let w = window.max(1);
    let mut t = Table::new(&["epoch", "mean_loss", "moving_average"]);
    for (e, loss) in report.epoch_losses.iter().enumerate() {
        let ma = (e + 1 >= w).then(|| report.epoch_losses[e + 1 - w..=e].iter().sum::<f64>() / w as f64);
        t.rows.push(vec![(e + 1).into(), (*loss).into(), ma.into()]);
    }
    t
}

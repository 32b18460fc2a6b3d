//! Output rendering: hidden-layer heatmaps and scatterplots as SVG, and
//! tables as CSV or JSON.
//!
//! Every renderer is a pure function of its inputs, so identical inputs give
//! identical bytes.

mod heatmap;
mod scatter;
mod table;

use thiserror::Error;

pub use heatmap::{render_heatmap, render_heatmap_batch, render_heatmap_scaled, shared_scale, HeatmapSpec};
pub use scatter::{render_scatter, ScatterLabels};
pub use table::{
    loss_curve_table, match_report_table, pos_attention_table, uniqueness_table, Cell, Table, TableFormat,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("ragged heatmap for {word:?}: row {row} has {got} values, expected {expected}")]
    Ragged { word: String, row: usize, got: usize, expected: usize },
    #[error("row {row} has {got} cells, table has {expected} columns")]
    RowWidth { row: usize, got: usize, expected: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Fixed-precision decimal rendering; never prints a negative zero.
pub fn format_fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_format_has_no_negative_zero() {
        assert_eq!(format_fixed(-0.00001, 3), "0.000");
        assert_eq!(format_fixed(-1.5, 2), "-1.50");
        assert_eq!(format_fixed(0.1234567, 4), "0.1235");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(xml_escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}

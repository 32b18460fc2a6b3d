use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{format_fixed, xml_escape, ReportError};

/// Hidden-layer values of one word: `values[layer][dim]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSpec {
    pub word: String,
    pub values: Vec<Vec<f64>>,
}

impl HeatmapSpec {
    fn validate(&self) -> Result<(usize, usize), ReportError> {
        let layers = self.values.len();
        if layers == 0 || self.values[0].is_empty() {
            return Err(ReportError::Empty("heatmap"));
        }
        let dim = self.values[0].len();
        for (row, v) in self.values.iter().enumerate() {
            if v.len() != dim {
                return Err(ReportError::Ragged { word: self.word.clone(), row, got: v.len(), expected: dim });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ReportError::NonFinite(format!("heatmap for {:?}", self.word)));
            }
        }
        Ok((layers, dim))
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

const NEG: (f64, f64, f64) = (33.0, 102.0, 172.0);
const MID: (f64, f64, f64) = (255.0, 255.0, 255.0);
const POS: (f64, f64, f64) = (178.0, 24.0, 43.0);

/// Diverging blue-white-red color for `t` in [-1, 1].
fn diverging(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (end, a) = if t < 0.0 { (NEG, -t) } else { (POS, t) };
    let mix = |m: f64, e: f64| (m + (e - m) * a).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(MID.0, end.0), mix(MID.1, end.1), mix(MID.2, end.2))
}

/// Largest |value| across all specs: the symmetric range of a shared scale.
pub fn shared_scale(specs: &[HeatmapSpec]) -> f64 {
    specs.iter().map(HeatmapSpec::max_abs).fold(0.0, f64::max)
}

/// Renders with the spec's own symmetric range.
pub fn render_heatmap(spec: &HeatmapSpec) -> Result<String, ReportError> {
    render_heatmap_scaled(spec, spec.max_abs())
}

/// Renders every spec against one shared color range.
pub fn render_heatmap_batch(specs: &[HeatmapSpec]) -> Result<Vec<String>, ReportError> {
    let scale = shared_scale(specs);
    specs.iter().map(|s| render_heatmap_scaled(s, scale)).collect()
}

/// Renders with the color range fixed to `[-max_abs, max_abs]`. A zero range
/// paints every cell with the midpoint color.
pub fn render_heatmap_scaled(spec: &HeatmapSpec, max_abs: f64) -> Result<String, ReportError> {
    let (layers, dim) = spec.validate()?;
    if !max_abs.is_finite() || max_abs < 0.0 {
        return Err(ReportError::NonFinite("heatmap scale".into()));
    }
    let cell_w = (768.0 / dim as f64).clamp(2.0, 24.0);
    let cell_h = 24.0;
    let left = 70.0;
    let top = 36.0;
    let grid_w = cell_w * dim as f64;
    let grid_h = cell_h * layers as f64;
    let legend_y = top + grid_h + 20.0;
    let width = left + grid_w.max(240.0) + 20.0;
    let height = legend_y + 44.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        f(width), f(height), f(width), f(height)
    );
    let _ = writeln!(
        svg,
        r##"<defs><linearGradient id="legend-gradient" x1="0" y1="0" x2="1" y2="0"><stop offset="0" stop-color="{}"/><stop offset="0.5" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"##,
        diverging(-1.0), diverging(0.0), diverging(1.0)
    );
    let _ = writeln!(
        svg,
        r#"<text class="word" x="{}" y="22" font-family="sans-serif" font-size="16">{}</text>"#,
        f(left),
        xml_escape(&spec.word)
    );
    for (l, row) in spec.values.iter().enumerate() {
        let y = top + cell_h * l as f64;
        let _ = writeln!(
            svg,
            r#"<text class="layer-label" x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">layer {}</text>"#,
            f(left - 6.0), f(y + cell_h * 0.65), l + 1
        );
        svg.push_str("<g>");
        for (d, v) in row.iter().enumerate() {
            let t = if max_abs > 0.0 { v / max_abs } else { 0.0 };
            let _ = write!(
                svg,
                r#"<rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                f(left + cell_w * d as f64), f(y), f(cell_w), f(cell_h), diverging(t)
            );
        }
        svg.push_str("</g>\n");
    }
    let legend_w = 200.0;
    let _ = writeln!(
        svg,
        r##"<rect class="legend" x="{}" y="{}" width="{}" height="12" fill="url(#legend-gradient)" stroke="#888888" stroke-width="0.5"/>"##,
        f(left), f(legend_y), f(legend_w)
    );
    for (x, value, anchor) in [
        (left, -max_abs, "start"),
        (left + legend_w / 2.0, 0.0, "middle"),
        (left + legend_w, max_abs, "end"),
    ] {
        let _ = writeln!(
            svg,
            r#"<text class="legend-label" x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{}</text>"#,
            f(x), f(legend_y + 26.0), format_fixed(value, 4)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn f(x: f64) -> String {
    format_fixed(x, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(svg: &str) -> Vec<String> {
        let doc = roxmltree::Document::parse(svg).expect("well-formed");
        doc.descendants()
            .filter(|n| n.attribute("class") == Some("cell"))
            .map(|n| n.attribute("fill").unwrap().to_string())
            .collect()
    }

    #[test]
    fn full_size_heatmap_has_one_cell_per_value() {
        let values = (0..3).map(|l| (0..256).map(|d| ((l * 256 + d) as f64).sin()).collect()).collect();
        let svg = render_heatmap(&HeatmapSpec { word: "Notre".into(), values }).unwrap();
        assert_eq!(cells(&svg).len(), 768);
        assert!(svg.contains("legend-gradient"));
        assert!(svg.contains(">Notre<"));
    }

    #[test]
    fn zero_values_use_midpoint() {
        let svg = render_heatmap(&HeatmapSpec { word: "x".into(), values: vec![vec![0.0; 4]; 2] }).unwrap();
        assert!(cells(&svg).iter().all(|c| c == "#ffffff"));
    }

    #[test]
    fn single_cell_and_scale_extremes() {
        let svg = render_heatmap(&HeatmapSpec { word: "a&b".into(), values: vec![vec![-3.0]] }).unwrap();
        assert_eq!(cells(&svg), vec![diverging(-1.0)]);
        assert!(svg.contains("a&amp;b"));
    }

    #[test]
    fn batch_shares_scale() {
        let specs = vec![
            HeatmapSpec { word: "a".into(), values: vec![vec![1.0]] },
            HeatmapSpec { word: "b".into(), values: vec![vec![4.0]] },
        ];
        let out = render_heatmap_batch(&specs).unwrap();
        assert_eq!(cells(&out[0]), vec![diverging(0.25)]);
        assert_eq!(cells(&out[1]), vec![diverging(1.0)]);
        assert_eq!(shared_scale(&specs), 4.0);
    }

    #[test]
    fn rejects_bad_input() {
        let nan = HeatmapSpec { word: "n".into(), values: vec![vec![1.0, f64::NAN]] };
        assert!(matches!(render_heatmap(&nan), Err(ReportError::NonFinite(_))));
        let ragged = HeatmapSpec { word: "r".into(), values: vec![vec![1.0, 2.0], vec![1.0]] };
        assert!(matches!(render_heatmap(&ragged), Err(ReportError::Ragged { .. })));
        let empty = HeatmapSpec { word: "e".into(), values: vec![] };
        assert!(render_heatmap(&empty).is_err());
    }

    #[test]
    fn diverging_is_symmetric_about_white() {
        assert_eq!(diverging(0.0), "#ffffff");
        assert_eq!(diverging(-1.0), "#2166ac");
        assert_eq!(diverging(1.0), "#b2182b");
        assert_eq!(diverging(7.0), diverging(1.0));
    }
}

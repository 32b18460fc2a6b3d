use std::fmt::Write;

use super::{format_fixed, xml_escape, ReportError};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScatterLabels {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Free text printed in the upper-right corner, e.g. correlation values.
    pub annotation: Option<String>,
}

const W: f64 = 560.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const TICKS: usize = 5;

fn range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

/// One circle marker per (x, y) point, with labeled axes.
pub fn render_scatter(x: &[f64], y: &[f64], labels: &ScatterLabels) -> Result<String, ReportError> {
    if x.len() != y.len() {
        return Err(ReportError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(ReportError::Empty("scatter series"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(ReportError::NonFinite("scatter series".into()));
    }
    let (x0, x1) = range(x);
    let (y0, y1) = range(y);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| TOP + ph - (v - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{W}" height="{H}" fill="#ffffff"/>"##);
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        f(W / 2.0),
        xml_escape(&labels.title)
    );
    let _ = writeln!(
        svg,
        r##"<path class="axes" d="M{} {} V{} H{}" fill="none" stroke="#333333"/>"##,
        f(LEFT), f(TOP), f(TOP + ph), f(LEFT + pw)
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + (x1 - x0) * t;
        let yv = y0 + (y1 - y0) * t;
        let _ = writeln!(
            svg,
            r#"<text class="tick" x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            f(sx(xv)), f(TOP + ph + 16.0), format_fixed(xv, 3)
        );
        let _ = writeln!(
            svg,
            r#"<text class="tick" x="{}" y="{}" font-size="10" text-anchor="end">{}</text>"#,
            f(LEFT - 6.0), f(sy(yv) + 3.0), format_fixed(yv, 3)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        f(LEFT + pw / 2.0), f(H - 14.0), xml_escape(&labels.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="16" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        f(TOP + ph / 2.0), f(TOP + ph / 2.0), xml_escape(&labels.y_label)
    );
    if let Some(note) = &labels.annotation {
        let _ = writeln!(
            svg,
            r#"<text class="annotation" x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            f(LEFT + pw - 4.0), f(TOP + 14.0), xml_escape(note)
        );
    }
    svg.push_str("<g>");
    for (a, b) in x.iter().zip(y) {
        let _ = write!(
            svg,
            r##"<circle class="marker" cx="{}" cy="{}" r="2.5" fill="#2166ac" fill-opacity="0.6"/>"##,
            f(sx(*a)), f(sy(*b))
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

fn f(x: f64) -> String {
    format_fixed(x, 2)
}

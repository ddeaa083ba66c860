//! Minimal SVG line plots with optional error bars.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Points,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub errs: Option<Vec<f64>>,
    pub style: Style,
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Horizontal reference lines `(y, label)`.
    pub hlines: Vec<(f64, String)>,
    /// Vertical reference lines `(x, label)`.
    pub vlines: Vec<(f64, String)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl Plot {
    pub fn render(&self) -> String {
        let xs = self
            .series
            .iter()
            .flat_map(|s| s.xs.iter().copied())
            .chain(self.vlines.iter().map(|v| v.0));
        let (x0, x1) = extent(xs);
        let ys = self
            .series
            .iter()
            .flat_map(|s| {
                let errs = s.errs.clone().unwrap_or_else(|| vec![0.0; s.ys.len()]);
                s.ys.iter()
                    .zip(errs)
                    .flat_map(|(y, e)| [y - e, y + e])
                    .collect::<Vec<_>>()
            })
            .chain(self.hlines.iter().map(|h| h.0));
        let (y0, y1) = extent(ys);
        let pw = WIDTH - MARGIN_L - MARGIN_R;
        let ph = HEIGHT - MARGIN_T - MARGIN_B;
        let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let py = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let f = f64::from(i) / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                px(xv),
                HEIGHT - MARGIN_B + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_L - 6.0,
                py(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_L + pw / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            MARGIN_T + ph / 2.0,
            MARGIN_T + ph / 2.0,
            escape(&self.y_label)
        );
        for (y, label) in &self.hlines {
            let _ = writeln!(
                out,
                r##"<line x1="{MARGIN_L}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="#666" stroke-dasharray="4 3"/><text x="{:.1}" y="{:.1}" text-anchor="end" fill="#666">{}</text>"##,
                MARGIN_L + pw,
                py(*y),
                py(*y),
                MARGIN_L + pw - 4.0,
                py(*y) - 4.0,
                escape(label)
            );
        }
        for (x, label) in &self.vlines {
            let _ = writeln!(
                out,
                r##"<line x1="{:.1}" x2="{:.1}" y1="{MARGIN_T}" y2="{:.1}" stroke="#666" stroke-dasharray="2 3"/><text x="{:.1}" y="{:.1}" fill="#666">{}</text>"##,
                px(*x),
                px(*x),
                MARGIN_T + ph,
                px(*x) + 4.0,
                MARGIN_T + 14.0,
                escape(label)
            );
        }
        for (k, s) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            if let Some(errs) = &s.errs {
                for ((x, y), e) in s.xs.iter().zip(&s.ys).zip(errs) {
                    if *e > 0.0 {
                        let _ = writeln!(
                            out,
                            r#"<line x1="{:.1}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="{color}" stroke-opacity="0.4"/>"#,
                            px(*x),
                            px(*x),
                            py(y - e),
                            py(y + e)
                        );
                    }
                }
            }
            match s.style {
                Style::Line => {
                    let pts: Vec<String> =
                        s.xs.iter()
                            .zip(&s.ys)
                            .map(|(x, y)| format!("{:.1},{:.1}", px(*x), py(*y)))
                            .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                        pts.join(" ")
                    );
                }
                Style::Points => {
                    for (x, y) in s.xs.iter().zip(&s.ys) {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.1}" cy="{:.1}" r="3.5" fill="{color}"/>"#,
                            px(*x),
                            py(*y)
                        );
                    }
                }
            }
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
                MARGIN_L + 8.0,
                MARGIN_T + 16.0 + 15.0 * k as f64,
                escape(&s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_document() {
        let plot = Plot {
            title: "a < b & c".into(),
            x_label: "t".into(),
            y_label: "y".into(),
            series: vec![Series {
                name: "curve".into(),
                xs: vec![0.0, 1.0, 2.0],
                ys: vec![0.0, 0.5, 0.7],
                errs: Some(vec![0.0, 0.1, 0.1]),
                style: Style::Line,
            }],
            hlines: vec![(0.6, "threshold".into())],
            vlines: vec![(1.5, "tau".into())],
        };
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(svg.contains("<polyline"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn degenerate_ranges() {
        let plot = Plot {
            series: vec![Series {
                name: "flat".into(),
                xs: vec![1.0],
                ys: vec![2.0],
                errs: None,
                style: Style::Points,
            }],
            ..Plot::default()
        };
        assert!(!plot.render().contains("NaN"));
        assert!(!Plot::default().render().contains("NaN"));
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick(0.0), "0");
        assert_eq!(tick(2.5), "2.5");
        assert_eq!(tick(12345.0), "1.23e4");
    }
}

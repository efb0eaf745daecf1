//! Quick-look SVG line plots. Derived artifacts only: rendering never feeds
//! back into the CSV content.

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

const PANEL_W: f64 = 860.0;
const PANEL_H: f64 = 220.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 38.0;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub series: Vec<Series>,
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

/// Render stacked panels sharing an x axis into an SVG document.
pub fn render(title: &str, x_label: &str, panels: &[Panel]) -> String {
    let height = MARGIN_T + panels.len() as f64 * PANEL_H + MARGIN_B;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PANEL_W}\" height=\"{height}\" \
         viewBox=\"0 0 {PANEL_W} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        PANEL_W / 2.0,
        escape(title)
    ));

    for (idx, panel) in panels.iter().enumerate() {
        let top = MARGIN_T + idx as f64 * PANEL_H + 14.0;
        let bottom = MARGIN_T + (idx + 1) as f64 * PANEL_H - 24.0;
        let left = MARGIN_L;
        let right = PANEL_W - MARGIN_R;

        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for series in &panel.series {
            for &(x, y) in &series.points {
                if x.is_finite() && y.is_finite() {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        if !x_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
        }
        if !y_min.is_finite() {
            y_min = 0.0;
            y_max = 1.0;
        }
        if x_max == x_min {
            x_max = x_min + 1.0;
        }
        if y_max == y_min {
            y_max = y_min + 1.0;
            y_min -= 1.0;
        }
        let pad = 0.05 * (y_max - y_min);
        let (y_lo, y_hi) = (y_min - pad, y_max + pad);

        let to_x = |x: f64| left + (x - x_min) / (x_max - x_min) * (right - left);
        let to_y = |y: f64| bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top);

        out.push_str(&format!(
            "<rect x=\"{left}\" y=\"{top}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
            right - left,
            bottom - top
        ));
        out.push_str(&format!(
            "<text x=\"{left}\" y=\"{}\" font-size=\"13\">{}</text>\n",
            top - 4.0,
            escape(&panel.title)
        ));

        for k in 0..=4 {
            let x = x_min + (x_max - x_min) * k as f64 / 4.0;
            let px = to_x(x);
            out.push_str(&format!(
                "<line x1=\"{px}\" y1=\"{bottom}\" x2=\"{px}\" y2=\"{}\" stroke=\"#444\"/>\n",
                bottom + 4.0
            ));
            out.push_str(&format!(
                "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                bottom + 16.0,
                tick_label(x)
            ));
        }
        for k in 0..=3 {
            let y = y_lo + (y_hi - y_lo) * k as f64 / 3.0;
            let py = to_y(y);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{py}\" x2=\"{left}\" y2=\"{py}\" stroke=\"#444\"/>\n",
                left - 4.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                left - 7.0,
                py + 4.0,
                tick_label(y)
            ));
        }
        if y_lo < 0.0 && y_hi > 0.0 {
            let py = to_y(0.0);
            out.push_str(&format!(
                "<line x1=\"{left}\" y1=\"{py}\" x2=\"{right}\" y2=\"{py}\" stroke=\"#bbb\" stroke-dasharray=\"4,3\"/>\n"
            ));
        }

        for (s_idx, series) in panel.series.iter().enumerate() {
            let color = PALETTE[s_idx % PALETTE.len()];
            let mut path = String::new();
            for &(x, y) in &series.points {
                if x.is_finite() && y.is_finite() {
                    path.push_str(&format!("{:.2},{:.2} ", to_x(x), to_y(y)));
                }
            }
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.3\"/>\n",
                path.trim_end()
            ));
            let lx = right - 110.0;
            let ly = top + 14.0 + 14.0 * s_idx as f64;
            out.push_str(&format!(
                "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
                lx + 18.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\">{}</text>\n",
                lx + 23.0,
                ly + 4.0,
                escape(&series.label)
            ));
        }
    }

    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        PANEL_W / 2.0,
        height - 8.0,
        escape(x_label)
    ));
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_document() {
        let panels = vec![Panel {
            title: "E12".into(),
            series: vec![Series {
                label: "alpha=1".into(),
                points: (0..50).map(|k| (k as f64 * 0.1, (k as f64 * 0.3).sin())).collect(),
            }],
        }];
        let doc = render("test", "t", &panels);
        assert!(doc.starts_with("<svg"));
        assert!(doc.ends_with("</svg>\n"));
        assert!(doc.contains("polyline"));
        assert!(doc.contains("alpha=1"));
    }
}

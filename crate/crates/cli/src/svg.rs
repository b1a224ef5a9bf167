//! Minimal SVG line charts: one polyline per series, axes with ticks, legend.

use std::fmt::Write;

pub struct Line<'a> {
    pub label: String,
    pub points: &'a [(f64, f64)],
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
// polylines with more vertices than this are decimated
const MAX_POINTS: usize = 4000;

/// `y` is plotted on a fixed `[0, 1]` axis.
pub fn line_chart(lines: &[Line<'_>], x_label: &str, y_label: &str) -> String {
    let x_max = lines
        .iter()
        .flat_map(|l| l.points.iter().map(|p| p.0))
        .fold(0.0f64, f64::max);
    let x_min = lines
        .iter()
        .flat_map(|l| l.points.iter().map(|p| p.0))
        .fold(x_max, f64::min);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / x_span * plot_w;
    let sy = |y: f64| TOP + (1.0 - y.clamp(0.0, 1.0)) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes
    let (x0, x1, y0, y1) = (sx(x_min), sx(x_min + x_span), sy(0.0), sy(1.0));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2} {y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let y = k as f64 / 5.0;
        let py = sy(y);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.1}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
    for k in 0..=5 {
        let x = x_min + x_span * k as f64 / 5.0;
        let px = sx(x);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            tick_label(x)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, line) in lines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let stride = line.points.len().div_ceil(MAX_POINTS).max(1);
        let mut pts = String::new();
        for (j, (x, y)) in line.points.iter().enumerate() {
            if j % stride == 0 || j + 1 == line.points.len() {
                let _ = write!(pts, "{:.2},{:.2} ", sx(*x), sy(*y));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
            pts.trim_end()
        );
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = WIDTH - RIGHT - 120.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&line.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let a = [(0.0, 1.0), (1.0, 0.0), (2.0, 1.0)];
        let b = [(0.0, 0.5), (2.0, 0.5)];
        let svg = line_chart(
            &[
                Line {
                    label: "M=1".into(),
                    points: &a,
                },
                Line {
                    label: "M<2>".into(),
                    points: &b,
                },
            ],
            "t",
            "P",
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("M&lt;2&gt;"));
        assert!(svg.contains(r#"points="64.00,24.00 420.00,424.00 776.00,24.00""#));
    }

    #[test]
    fn long_series_decimated() {
        let pts: Vec<(f64, f64)> = (0..20001).map(|i| (i as f64, 0.5)).collect();
        let svg = line_chart(
            &[Line {
                label: "x".into(),
                points: &pts,
            }],
            "t",
            "P",
        );
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let n = line.matches(',').count();
        assert!(n <= MAX_POINTS + 1, "{n}");
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick_label(0.0), "0");
        assert_eq!(tick_label(2.5), "2.5");
        assert_eq!(tick_label(12.566), "12.57");
        assert_eq!(tick_label(-0.001), "0");
    }
}

//! Minimal self-contained SVG line chart: axes, ticks, one polyline. No
//! plotting framework; the CSV table stays the canonical output and this
//! is a convenience rendering of it.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const TICKS: usize = 5;

/// Renders `points` (already sorted by x) as an SVG document.
pub fn line_chart(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    assert!(!points.is_empty(), "chart needs at least one point");

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    // degenerate ranges still need a nonzero span to map onto pixels
    if (x_max - x_min).abs() < f64::EPSILON {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < 1e-12 {
        y_max = y_min + 1e-12;
    }

    let to_px = |x: f64, y: f64| {
        let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let py = MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
        (px, py)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"##
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"##
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<text x="{}" y="28" text-anchor="middle" font-family="sans-serif" font-size="17" fill="#333">{}</text>"##,
        WIDTH / 2.0,
        escape(title)
    ));
    svg.push('\n');

    // gridlines and tick labels
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let x_val = x_min + frac * (x_max - x_min);
        let y_val = y_min + frac * (y_max - y_min);
        let (gx, _) = to_px(x_val, y_min);
        let (_, gy) = to_px(x_min, y_val);
        svg.push_str(&format!(
            r##"<line x1="{gx:.1}" y1="{}" x2="{gx:.1}" y2="{}" stroke="#ddd" stroke-width="1"/>"##,
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<line x1="{}" y1="{gy:.1}" x2="{}" y2="{gy:.1}" stroke="#ddd" stroke-width="1"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<text x="{gx:.1}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="#333">{}</text>"##,
            MARGIN_TOP + plot_h + 20.0,
            tick_label(x_val)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<text x="{}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="12" fill="#333">{}</text>"##,
            MARGIN_LEFT - 8.0,
            gy + 4.0,
            tick_label(y_val)
        ));
        svg.push('\n');
    }

    // axes
    svg.push_str(&format!(
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" stroke-width="1.5"/>"##,
        MARGIN_LEFT,
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" stroke-width="1.5"/>"##,
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        MARGIN_TOP + plot_h
    ));
    svg.push('\n');

    // axis labels
    svg.push_str(&format!(
        r##"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" fill="#333">{}</text>"##,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<text x="24" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" fill="#333" transform="rotate(-90 24 {})">{}</text>"##,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));
    svg.push('\n');

    // the data line
    let mut path = String::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        let (px, py) = to_px(x, y);
        if i > 0 {
            path.push(' ');
        }
        path.push_str(&format!("{px:.2},{py:.2}"));
    }
    svg.push_str(&format!(
        r##"<polyline points="{path}" fill="none" stroke="#2b6cb0" stroke-width="2"/>"##
    ));
    svg.push('\n');
    svg.push_str("</svg>\n");
    svg
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

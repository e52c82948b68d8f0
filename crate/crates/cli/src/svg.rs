//! Minimal deterministic SVG line charts (no plotting dependency; the CSV is
//! the contract, plots are a convenience).

use qtherm::output::sig12;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 55.0;
const COLORS: [&str; 2] = ["#1f6f8b", "#c85a2e"];

/// Render one or two (x, y) series as polylines with axis labels. Each
/// series is min–max normalized separately so differently scaled quantities
/// share the canvas.
pub fn line_chart(title: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"22\" font-family=\"monospace\" font-size=\"15\">{title}</text>\n",
        MARGIN
    ));
    out.push_str(&format!(
        "  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    for (index, (label, points)) in series.iter().enumerate() {
        if points.is_empty() {
            continue;
        }
        let color = COLORS[index % COLORS.len()];
        let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
        let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
        let y_span = if y_hi > y_lo { y_hi - y_lo } else { 1.0 };
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                let px = MARGIN + (x - x_lo) / x_span * (WIDTH - 2.0 * MARGIN);
                let py = HEIGHT - MARGIN - (y - y_lo) / y_span * (HEIGHT - 2.0 * MARGIN);
                format!("{},{}", sig12(px), sig12(py))
            })
            .collect();
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" fill=\"{color}\">{label} [{} .. {}]</text>\n",
            MARGIN,
            HEIGHT - 12.0 - 16.0 * index as f64,
            sig12(y_lo),
            sig12(y_hi)
        ));
    }
    out.push_str("</svg>\n");
    out
}

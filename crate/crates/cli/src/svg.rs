//! Self-contained SVG heatmap of a scan grid. Cell labels carry the exact
//! strings of the matrix CSV; the fill encodes the coefficient on a
//! blue-white-red scale centered at 1 (log2, clamped at +/-2).

use richclub::ScanResult;

use crate::output::format_value;

const CELL_W: usize = 170;
const CELL_H: usize = 26;
const LEFT: usize = 130;
const TOP: usize = 60;

fn cell_color(coefficient: Option<f64>) -> String {
    let Some(c) = coefficient else {
        return "#d9d9d9".to_string();
    };
    let t = if c <= 0.0 { -2.0 } else { c.log2().clamp(-2.0, 2.0) } / 2.0;
    let (r, g, b) = if t < 0.0 {
        // Blue toward white.
        let u = 1.0 + t;
        lerp((33, 102, 172), (255, 255, 255), u)
    } else {
        // White toward red.
        lerp((255, 255, 255), (178, 24, 43), t)
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn lerp(a: (u8, u8, u8), b: (u8, u8, u8), t: f64) -> (u8, u8, u8) {
    let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn text(x: usize, y: usize, anchor: &str, content: &str) -> String {
    format!(
        "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-family=\"monospace\" \
         font-size=\"10\">{content}</text>\n"
    )
}

/// Render the heatmap document.
pub fn heatmap_svg(result: &ScanResult) -> String {
    let cols = result.deltas.len();
    let rows = result.thresholds.len();
    let width = LEFT + cols * CELL_W + 20;
    let height = TOP + rows * CELL_H + 20;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" \
         height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&text(
        LEFT,
        20,
        "start",
        &format!("{} scan: normalized coefficient by richness threshold and delta",
                 result.metric.name()),
    ));

    for (j, delta) in result.deltas.iter().enumerate() {
        let x = LEFT + j * CELL_W + CELL_W / 2;
        svg.push_str(&text(x, TOP - 8, "middle", &format!("delta={delta}")));
    }
    for (i, k) in result.thresholds.iter().enumerate() {
        let y = TOP + i * CELL_H + CELL_H / 2 + 4;
        svg.push_str(&text(LEFT - 8, y, "end", &format!("k={}", format_value(*k))));
        for j in 0..cols {
            let cell = result.cell(i, j);
            let x = LEFT + j * CELL_W;
            let y0 = TOP + i * CELL_H;
            svg.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y0}\" width=\"{CELL_W}\" height=\"{CELL_H}\" \
                 fill=\"{}\" stroke=\"#888\" stroke-width=\"0.5\"/>\n",
                cell_color(cell.coefficient)
            ));
            let label = match cell.coefficient {
                Some(c) => format_value(c),
                None => "undefined".to_string(),
            };
            svg.push_str(&text(x + CELL_W / 2, y0 + CELL_H / 2 + 4, "middle", &label));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

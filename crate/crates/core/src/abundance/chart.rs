use std::fmt::Write as _;

use super::AbundanceSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 300.0;
const MARGIN: f64 = 40.0;

/// Line chart of raw (red) and filtered (green) counts per bin. Bins
/// without recorded frames are shaded grey.
pub fn series_to_svg(series: &AbundanceSeries) -> String {
    let n = series.bins.len();
    let max = series.bins.iter().map(|b| b.raw).max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let step = if n > 1 { plot_w / (n - 1) as f64 } else { 0.0 };
    let x = |i: usize| MARGIN + i as f64 * step;
    let y = |v: usize| HEIGHT - MARGIN - v as f64 / max * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, b) in series.bins.iter().enumerate() {
        if b.no_data {
            let _ = writeln!(
                s,
                r##"<rect x="{:.1}" y="{MARGIN}" width="{:.1}" height="{plot_h}" fill="#dddddd"/>"##,
                x(i) - step / 2.0,
                step.max(2.0)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<path d="M{MARGIN} {m0:.1} H{right:.1} M{MARGIN} {m0:.1} V{MARGIN}" stroke="black" fill="none"/>"#,
        m0 = HEIGHT - MARGIN,
        right = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.1}" font-size="12">{}</text>"#,
        MARGIN - 8.0,
        max as usize
    );
    for (name, color, pick) in [
        ("raw", "red", (|b: &super::Bin| b.raw) as fn(&super::Bin) -> usize),
        ("filtered", "green", |b: &super::Bin| b.filtered),
    ] {
        let pts: Vec<String> = series
            .bins
            .iter()
            .enumerate()
            .map(|(i, b)| format!("{:.1},{:.1}", x(i), y(pick(b))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="{name}" points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
            pts.join(" ")
        );
    }
    if let (Some(first), Some(last)) = (series.bins.first(), series.bins.last()) {
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN}" y="{:.1}" font-size="12">{}</text>"#,
            HEIGHT - 12.0,
            first.start.format("%Y-%m-%d")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{}</text>"#,
            WIDTH - MARGIN,
            HEIGHT - 12.0,
            last.start.format("%Y-%m-%d")
        );
    }
    s.push_str("</svg>\n");
    s
}

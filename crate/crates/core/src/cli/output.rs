use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::{Format, Outcome, Table};

/// `{:.16e}`: 17 significant digits, enough to round-trip any f64.
pub fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_summary(outcome: &Outcome) -> String {
    let mut s = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    s.push('\n');
    s
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Every non-abscissa column as a polyline. With `log_scale`, nonpositive
/// values are dropped and the y axis spans whole decades.
pub fn render_svg(table: &Table, title: &str, log_scale: bool) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let ys = |c: usize| table.rows.iter().map(move |r| r[c]);
    let map_y = |v: f64| if log_scale { v.log10() } else { v };
    let finite: Vec<f64> = (1..table.columns.len())
        .flat_map(ys)
        .filter(|v| v.is_finite() && (!log_scale || *v > 0.0))
        .map(map_y)
        .collect();
    let (mut y0, mut y1) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if log_scale {
        (y0, y1) = (y0.floor(), y1.ceil());
    } else if y0 >= 0.0 && y1 <= 1.0 {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let (x0, x1) = (xs.first().copied().unwrap_or(0.0), xs.last().copied().unwrap_or(1.0));
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    let ylabel = |v: f64| if log_scale { format!("1e{v}") } else { format!("{v:.3}") };
    for (v, anchor_y) in [(y0, H - MARGIN), (y1, MARGIN)] {
        let _ = writeln!(svg, r#"<text x="{}" y="{anchor_y}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#, MARGIN - 4.0, ylabel(v));
    }
    for (v, anchor_x) in [(x0, MARGIN), (x1, W - MARGIN)] {
        let _ = writeln!(svg, r#"<text x="{anchor_x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#, H - MARGIN + 16.0, fmt_num(v));
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#, W / 2.0, H - 10.0, escape(&table.columns[0]));

    for c in 1..table.columns.len() {
        let color = PALETTE[(c - 1) % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys(c))
            .filter(|(_, v)| v.is_finite() && (!log_scale || *v > 0.0))
            .map(|(&x, v)| format!("{:.2},{:.2}", px(x), py(map_y(v))))
            .collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, points.join(" "));
        let ly = MARGIN + 14.0 * c as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{a}" y1="{ly}" x2="{b}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{t}" y="{ty}" font-family="sans-serif" font-size="11">{}</text>"#,
            escape(&table.columns[c]),
            a = W - MARGIN - 130.0,
            b = W - MARGIN - 110.0,
            t = W - MARGIN - 105.0,
            ty = ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{}", (v * 1000.0).round() / 1000.0)
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Write the requested artifacts into `dir`, creating it. Returns the
/// files written, in a fixed order.
pub fn write_artifacts(outcome: &Outcome, dir: &Path, formats: &[Format], log_scale: bool) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = vec![];
    let mut sorted = formats.to_vec();
    sorted.sort();
    sorted.dedup();
    for f in sorted {
        let (name, body) = match f {
            Format::Csv => ("survival.csv", render_csv(&outcome.table)),
            Format::Json => ("summary.json", render_summary(outcome)),
            Format::Svg => (
                "plot.svg",
                render_svg(&outcome.table, outcome.summary.experiment.name(), log_scale),
            ),
        };
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

//! SVG plots drawn from the text of a written CSV table.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{CliError, CliResult};
use crate::table::{read_csv, Plot, TableSpec};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// The plot declared by `spec`, drawn from `csv` (as written by
/// [`crate::table::Table::write_csv`]); `None` when the table has no plot.
pub fn render(spec: &TableSpec, csv: &str) -> CliResult<Option<String>> {
    let Some(plot) = spec.plot else {
        return Ok(None);
    };
    let (header, rows) = read_csv(csv)?;
    let idx = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Io(format!("column `{name}` missing from table `{}`", spec.name)))
    };
    let num = |row: &[String], k: usize| row[k].parse::<f64>().unwrap_or(f64::NAN);
    let svg = match plot {
        Plot::Lines {
            x,
            y,
            group,
            log_x,
            log_y,
        } => {
            let xi = idx(x)?;
            let gi = group.map(idx).transpose()?;
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for col in y {
                let yi = idx(col)?;
                for r in &rows {
                    let label = match gi {
                        Some(g) if y.len() > 1 => format!("{} {col}", r[g]),
                        Some(g) => r[g].clone(),
                        None => col.to_string(),
                    };
                    let p = (axis(num(r, xi), log_x), axis(num(r, yi), log_y));
                    if p.0.is_finite() && p.1.is_finite() {
                        series.entry(label).or_default().push(p);
                    }
                }
            }
            let labels = (axis_label(x, log_x), axis_label(&y.join(", "), log_y));
            draw(spec.name, &series, labels, false, &[])
        }
        Plot::Curve { x, y, angle } => {
            let (xi, yi, ai) = (idx(x)?, idx(y)?, idx(angle)?);
            let pts: Vec<(f64, f64, f64)> = rows.iter().map(|r| (num(r, xi), num(r, yi), num(r, ai))).collect();
            let mut curve: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.1)).filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
            if let Some(&first) = curve.first() {
                curve.push(first);
            }
            // ticks where the straightened angle crosses a multiple of 2π/16
            let step = TAU / 16.0;
            let ticks: Vec<(f64, f64)> = pts
                .windows(2)
                .filter(|w| (w[0].2 / step).floor() != (w[1].2 / step).floor())
                .map(|w| (w[1].0, w[1].1))
                .collect();
            let mut series = BTreeMap::new();
            series.insert(format!("{y} against {x}"), curve);
            draw(spec.name, &series, (x.to_string(), y.to_string()), true, &ticks)
        }
    };
    Ok(Some(svg))
}

fn axis(v: f64, log: bool) -> f64 {
    if !log {
        v
    } else if v > 0.0 {
        v.log10()
    } else {
        f64::NAN
    }
}

fn axis_label(name: &str, log: bool) -> String {
    if log {
        format!("log10 {name}")
    } else {
        name.to_string()
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn draw(
    title: &str,
    series: &BTreeMap<String, Vec<(f64, f64)>>,
    labels: (String, String),
    equal: bool,
    ticks: &[(f64, f64)],
) -> String {
    let all = || series.values().flatten();
    let (mut x0, mut x1) = bounds(all().map(|p| p.0));
    let (mut y0, mut y1) = bounds(all().map(|p| p.1));
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    if equal {
        let scale = ((x1 - x0) / pw).max((y1 - y0) / ph);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        (x0, x1) = (cx - 0.5 * scale * pw, cx + 0.5 * scale * pw);
        (y0, y1) = (cy - 0.5 * scale * ph, cy + 0.5 * scale * ph);
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, esc(title)).unwrap();
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for (v, anchor, x, y) in [
        (x0, "start", MARGIN, HEIGHT - MARGIN + 14.0),
        (x1, "end", WIDTH - MARGIN, HEIGHT - MARGIN + 14.0),
    ] {
        writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, fmt(v)).unwrap();
    }
    for (v, y) in [(y0, HEIGHT - MARGIN), (y1, MARGIN + 10.0)] {
        writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#, MARGIN - 4.0, fmt(v)).unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        esc(&labels.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        esc(&labels.1)
    )
    .unwrap();
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        )
        .unwrap();
        if pts.len() <= 64 {
            for &(x, y) in pts {
                writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y)).unwrap();
            }
        }
        let ly = MARGIN + 14.0 * (k as f64 + 1.0);
        writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            esc(label)
        )
        .unwrap();
    }
    for &(x, y) in ticks {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#, sx(x), sy(y)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn fmt(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::row;
    use crate::table::{col, Table};

    static SPEC: TableSpec = TableSpec {
        name: "demo",
        description: "demo",
        columns: &[col("g", "label", "group"), col("x", "1", "x"), col("y", "1", "y")],
        plot: Some(Plot::Lines {
            x: "x",
            y: &["y"],
            group: Some("g"),
            log_x: false,
            log_y: true,
        }),
    };

    #[test]
    fn lines_plot_has_one_polyline_per_group() {
        let mut t = Table::new(&SPEC);
        for (g, x, y) in [("a", 1.0, 1.0), ("a", 2.0, 10.0), ("b", 1.0, 0.5), ("b", 2.0, 0.0)] {
            t.push(row![g, x, y]);
        }
        let mut buf = Vec::new();
        t.write_csv("demo", &mut buf).unwrap();
        let svg = render(&SPEC, std::str::from_utf8(&buf).unwrap()).unwrap().unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        // y = 0 has no logarithm and is dropped
        assert_eq!(svg.matches("<circle").count(), 3);
    }
}

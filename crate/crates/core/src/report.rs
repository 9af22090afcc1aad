//! Result tables and chart emission.
//!
//! Everything here renders to strings — CSV, Markdown, or standalone SVG —
//! so callers own file placement and tests can parse the output back.
//! Renderers are pure: the same input yields byte-identical output, and all
//! numeric labels are the half-up two-decimal rendering of the exact values.

use chrono::{Datelike, NaiveDate};
use num_traits::ToPrimitive;

use crate::engine::{fmt2, fmt2_f64, PmcResult, StatsSummary, Value};
use crate::error::{Error, Result};

/// One row per document: `doc_id,<main ids>,PMC,G,level`.
pub fn results_to_csv(results: &[PmcResult]) -> Result<String> {
    let ids = check_uniform(results)?;
    let mut out = String::from("doc_id");
    for id in ids {
        out.push(',');
        out.push_str(id);
    }
    out.push_str(",PMC,G,level\n");
    for r in results {
        out.push_str(&r.doc_id);
        for v in &r.main_values {
            out.push(',');
            out.push_str(&fmt2(*v));
        }
        out.push_str(&format!(",{},{},{}\n", fmt2(r.pmc), fmt2(r.g), r.level));
    }
    Ok(out)
}

/// Markdown table with variables as rows and documents as columns.
pub fn results_to_markdown(results: &[PmcResult]) -> Result<String> {
    let ids = check_uniform(results)?;
    let mut out = String::from("| Variable |");
    for r in results {
        out.push_str(&format!(" {} |", r.doc_id));
    }
    out.push('\n');
    out.push_str("| --- |");
    for _ in results {
        out.push_str(" --- |");
    }
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        out.push_str(&format!("| {id} |"));
        for r in results {
            out.push_str(&format!(" {} |", fmt2(r.main_values[i])));
        }
        out.push('\n');
    }
    out.push_str("| PMC |");
    for r in results {
        out.push_str(&format!(" {} |", fmt2(r.pmc)));
    }
    out.push('\n');
    out.push_str("| G |");
    for r in results {
        out.push_str(&format!(" {} |", fmt2(r.g)));
    }
    out.push('\n');
    out.push_str("| Level |");
    for r in results {
        out.push_str(&format!(" {} |", r.level));
    }
    out.push('\n');
    Ok(out)
}

/// `variable,count,mean,sd,min,max` at two decimals.
pub fn stats_to_csv(stats: &StatsSummary) -> String {
    let mut out = String::from("variable,count,mean,sd,min,max\n");
    for row in &stats.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.label,
            row.count,
            fmt2_f64(row.mean),
            fmt2_f64(row.sd),
            fmt2_f64(row.min),
            fmt2_f64(row.max),
        ));
    }
    out
}

fn check_uniform(results: &[PmcResult]) -> Result<&[String]> {
    if results.is_empty() {
        return Err(Error::EmptyInput {
            what: "result list",
        });
    }
    let ids = &results[0].main_ids;
    for r in results {
        if &r.main_ids != ids {
            return Err(Error::InvalidParameter {
                name: "results",
                message: format!(
                    "document {:?} was scored under a different schema",
                    r.doc_id
                ),
            });
        }
    }
    Ok(ids)
}

/// A chart request; the variants carry exactly the data their kind needs.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartSpec {
    /// 3×3 value grid, white-to-blue on [0, 1], values printed per cell.
    SurfaceHeatmap {
        title: String,
        matrix: [[Value; 3]; 3],
    },
    /// One axis per labeled value; polygon vertex at radius · value.
    Spider {
        title: String,
        axes: Vec<(String, Value)>,
    },
    /// (release date, intensity) series over release years, y on [0, 10].
    Trend {
        title: String,
        series: Vec<(NaiveDate, Value)>,
    },
}

pub fn render(spec: &ChartSpec) -> Result<String> {
    match spec {
        ChartSpec::SurfaceHeatmap { title, matrix } => render_surface(title, matrix),
        ChartSpec::Spider { title, axes } => render_spider(title, axes),
        ChartSpec::Trend { title, series } => render_trend(title, series),
    }
}

fn f(v: Value) -> f64 {
    v.to_f64().unwrap()
}

/// Linear white → blue over [0, 1].
fn heat_color(v: f64) -> String {
    let lerp = |a: f64, b: f64| (a + (b - a) * v).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(255.0, 8.0),
        lerp(255.0, 81.0),
        lerp(255.0, 156.0)
    )
}

pub fn render_surface(title: &str, matrix: &[[Value; 3]; 3]) -> Result<String> {
    for row in matrix {
        for v in row {
            if *v < Value::from_integer(0) || *v > Value::from_integer(1) {
                return Err(Error::ChartData {
                    message: format!("surface value {} outside [0, 1]", f(*v)),
                });
            }
        }
    }
    let cell = 100.0;
    let (x0, y0) = (40.0, 50.0);
    let mut svg = svg_open(380, 400);
    svg.push_str(&svg_title(title, 190.0, 28.0));
    for (r, row) in matrix.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let x = x0 + c as f64 * cell;
            let y = y0 + r as f64 * cell;
            let value = f(*v);
            let text_fill = if value > 0.6 { "#ffffff" } else { "#000000" };
            svg.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" \
                 fill=\"{}\" stroke=\"#555555\"/>\n",
                heat_color(value)
            ));
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
                 dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"18\" \
                 fill=\"{text_fill}\" class=\"cell\">{}</text>\n",
                x + cell / 2.0,
                y + cell / 2.0,
                fmt2(*v)
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_spider(title: &str, axes: &[(String, Value)]) -> Result<String> {
    if axes.len() < 3 {
        return Err(Error::ChartData {
            message: format!("spider chart needs at least 3 axes, got {}", axes.len()),
        });
    }
    for (label, v) in axes {
        if *v < Value::from_integer(0) || *v > Value::from_integer(1) {
            return Err(Error::ChartData {
                message: format!("axis {label:?} value {} outside [0, 1]", f(*v)),
            });
        }
    }
    let (cx, cy, radius) = (220.0, 230.0, 150.0);
    let n = axes.len();
    // Axis k points along 2πk/n − π/2, so axis 0 is straight up.
    let point = |k: usize, r: f64| -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
        (cx + r * theta.cos(), cy + r * theta.sin())
    };

    let mut svg = svg_open(440, 460);
    svg.push_str(&svg_title(title, 220.0, 28.0));
    for ring in [0.25, 0.5, 0.75, 1.0] {
        let pts: Vec<String> = (0..n)
            .map(|k| {
                let (x, y) = point(k, radius * ring);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
            pts.join(" ")
        ));
    }
    for (k, (label, _)) in axes.iter().enumerate() {
        let (x, y) = point(k, radius);
        let (lx, ly) = point(k, radius + 18.0);
        svg.push_str(&format!(
            "<line x1=\"{cx:.2}\" y1=\"{cy:.2}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"#999999\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{lx:.2}\" y=\"{ly:.2}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"13\" \
             class=\"axis\">{label}</text>\n"
        ));
    }
    let vertices: Vec<String> = axes
        .iter()
        .enumerate()
        .map(|(k, (_, v))| {
            let (x, y) = point(k, radius * f(*v));
            format!("{x:.2},{y:.2}")
        })
        .collect();
    svg.push_str(&format!(
        "<polygon points=\"{}\" fill=\"#2a6fb855\" stroke=\"#2a6fb8\" stroke-width=\"2\" \
         class=\"data\"/>\n",
        vertices.join(" ")
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_trend(title: &str, series: &[(NaiveDate, Value)]) -> Result<String> {
    if series.len() < 2 {
        return Err(Error::ChartData {
            message: format!("trend chart needs at least 2 points, got {}", series.len()),
        });
    }
    let mut sorted: Vec<(NaiveDate, Value)> = series.to_vec();
    sorted.sort_by_key(|(d, _)| *d);
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateDate {
                date: w[0].0.to_string(),
            });
        }
    }
    for (d, v) in &sorted {
        if *v < Value::from_integer(0) || *v > Value::from_integer(10) {
            return Err(Error::ChartData {
                message: format!("value {} at {d} outside [0, 10]", f(*v)),
            });
        }
    }

    // Monotone date-to-x mapping on a year scale: months and days advance a
    // point within its year without overtaking the next year.
    let year_x = |d: &NaiveDate| -> f64 {
        d.year() as f64 + (d.month() as f64 - 1.0) / 12.0 + (d.day() as f64 - 1.0) / 372.0
    };
    let (w, h) = (720.0, 420.0);
    let (left, right, top, bottom) = (60.0, 30.0, 50.0, 50.0);
    let x_min = sorted.first().map(|(d, _)| year_x(d)).unwrap();
    let x_max = sorted.last().map(|(d, _)| year_x(d)).unwrap();
    let span = (x_max - x_min).max(1e-9);
    let sx = |d: &NaiveDate| left + (year_x(d) - x_min) / span * (w - left - right);
    let sy = |v: f64| top + (10.0 - v) / 10.0 * (h - top - bottom);

    let mut svg = svg_open(w as u32, h as u32);
    svg.push_str(&svg_title(title, w / 2.0, 26.0));
    svg.push_str(&format!(
        "<line x1=\"{left:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\"/>\n",
        h - bottom,
        w - right,
        h - bottom
    ));
    svg.push_str(&format!(
        "<line x1=\"{left:.2}\" y1=\"{top:.2}\" x2=\"{left:.2}\" y2=\"{:.2}\" stroke=\"#333333\"/>\n",
        h - bottom
    ));
    for tick in 0..=10 {
        let y = sy(tick as f64);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{y:.2}\" text-anchor=\"end\" dominant-baseline=\"middle\" \
             font-family=\"sans-serif\" font-size=\"11\" class=\"ytick\">{tick}</text>\n",
            left - 8.0
        ));
    }
    let mut years: Vec<i32> = sorted.iter().map(|(d, _)| d.year()).collect();
    years.dedup();
    for year in years {
        let x = sx(&NaiveDate::from_ymd_opt(year, 1, 1).unwrap().max(sorted[0].0));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"11\" class=\"xtick\">{year}</text>\n",
            h - bottom + 20.0
        ));
    }
    let pts: Vec<String> = sorted
        .iter()
        .map(|(d, v)| format!("{:.2},{:.2}", sx(d), sy(f(*v))))
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#2a6fb8\" stroke-width=\"2\" \
         class=\"data\"/>\n",
        pts.join(" ")
    ));
    for (d, v) in &sorted {
        let (x, y) = (sx(d), sy(f(*v)));
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"#2a6fb8\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"11\" class=\"point\">{}</text>\n",
            y - 10.0,
            fmt2(*v)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn svg_open(width: u32, height: u32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"{width}\" height=\"{height}\" \
         fill=\"#ffffff\"/>\n"
    )
}

fn svg_title(title: &str, x: f64, y: f64) -> String {
    format!(
        "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\" font-weight=\"bold\" class=\"title\">{}</text>\n",
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

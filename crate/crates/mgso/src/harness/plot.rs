//! Static SVG convergence plots: one panel per (function, dimension), the
//! distance to the optimum on a log axis against evaluations, drawn as a
//! median line inside a first-to-third-quartile band per algorithm.
//!
//! The output is plain hand-assembled SVG with fixed-precision coordinates,
//! so a given table always renders to identical bytes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use super::config::AlgorithmId;
use super::quartiles::QuartileRow;
use super::HarnessError;

const PANEL_WIDTH: f64 = 340.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 58.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 44.0;
const PANELS_PER_ROW: usize = 3;
/// Floor for the log axis; exact zeros plot here.
const LOG_FLOOR: f64 = 1e-12;

fn color(algorithm: AlgorithmId) -> &'static str {
    match algorithm {
        AlgorithmId::Mgso => "#1f77b4",
        AlgorithmId::MgsoArd => "#9467bd",
        AlgorithmId::MgsoGreedy => "#ff7f0e",
        AlgorithmId::Random => "#7f7f7f",
        AlgorithmId::Cmaes => "#d62728",
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Panel {
    function: String,
    dim: usize,
    series: BTreeMap<AlgorithmId, Vec<(usize, f64, f64, f64)>>,
    x_max: f64,
    log_min: f64,
    log_max: f64,
}

/// Renders the quartile table to `path`. Fails on an empty table.
pub fn emit_plot(rows: &[QuartileRow], path: &Path) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Runtime("nothing to plot: the table is empty".into()));
    }

    let mut panels: BTreeMap<(String, usize), Panel> = BTreeMap::new();
    for r in rows {
        let key = (r.function.name().to_string(), r.dim);
        let panel = panels.entry(key.clone()).or_insert_with(|| Panel {
            function: key.0.clone(),
            dim: r.dim,
            series: BTreeMap::new(),
            x_max: 1.0,
            log_min: f64::INFINITY,
            log_max: f64::NEG_INFINITY,
        });
        panel.x_max = panel.x_max.max(r.checkpoint as f64);
        for v in [r.q1, r.median, r.q3] {
            let lv = v.max(LOG_FLOOR).log10();
            panel.log_min = panel.log_min.min(lv);
            panel.log_max = panel.log_max.max(lv);
        }
        panel
            .series
            .entry(r.algorithm)
            .or_default()
            .push((r.checkpoint, r.q1, r.median, r.q3));
    }

    let n_panels = panels.len();
    let cols = n_panels.clamp(1, PANELS_PER_ROW);
    let rows_count = n_panels.div_ceil(cols);
    let total_w = cols as f64 * PANEL_WIDTH;
    let total_h = rows_count as f64 * PANEL_HEIGHT;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{total_h}\" \
         viewBox=\"0 0 {total_w} {total_h}\" font-family=\"Helvetica, Arial, sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{total_w}\" height=\"{total_h}\" fill=\"white\"/>\n"
    ));

    for (idx, panel) in panels.values().enumerate() {
        let ox = (idx % cols) as f64 * PANEL_WIDTH;
        let oy = (idx / cols) as f64 * PANEL_HEIGHT;
        render_panel(&mut svg, panel, ox, oy);
    }

    svg.push_str("</svg>\n");
    let mut file = std::fs::File::create(path)?;
    file.write_all(svg.as_bytes())?;
    file.flush()?;
    Ok(())
}

fn render_panel(svg: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let plot_w = PANEL_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x0 = ox + MARGIN_LEFT;
    let y0 = oy + MARGIN_TOP;

    // Pad the log range to whole decades so ticks land on powers of ten.
    let log_lo = panel.log_min.floor();
    let log_hi = panel.log_max.ceil().max(log_lo + 1.0);
    let x_max = panel.x_max.max(2.0);

    let to_x = |eval: f64| x0 + (eval - 1.0) / (x_max - 1.0) * plot_w;
    let to_y = |v: f64| {
        let lv = v.max(LOG_FLOOR).log10().clamp(log_lo, log_hi);
        y0 + plot_h - (lv - log_lo) / (log_hi - log_lo) * plot_h
    };

    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
        fmt(x0), fmt(y0), fmt(plot_w), fmt(plot_h)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{} {}D</text>\n",
        fmt(x0 + plot_w / 2.0),
        fmt(oy + 18.0),
        panel.function,
        panel.dim
    ));

    // Y ticks at decades (at most ~6 labels).
    let decades = (log_hi - log_lo) as i64;
    let tick_step = ((decades as f64 / 6.0).ceil() as i64).max(1);
    let mut d = log_lo as i64;
    while d as f64 <= log_hi {
        let y = to_y(10f64.powi(d as i32));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n",
            fmt(x0), fmt(y), fmt(x0 + plot_w), fmt(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"end\">1e{}</text>\n",
            fmt(x0 - 4.0),
            fmt(y + 3.0),
            d
        ));
        d += tick_step;
    }

    // X ticks: five evenly spaced evaluation counts.
    for k in 0..=4 {
        let eval = 1.0 + (x_max - 1.0) * k as f64 / 4.0;
        let x = to_x(eval);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n",
            fmt(x), fmt(y0 + plot_h), fmt(x), fmt(y0 + plot_h + 4.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(y0 + plot_h + 14.0),
            eval.round() as usize
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">evaluations</text>\n",
        fmt(x0 + plot_w / 2.0),
        fmt(y0 + plot_h + 28.0)
    ));

    for (algorithm, points) in &panel.series {
        let mut points = points.clone();
        points.sort_by_key(|(c, _, _, _)| *c);
        let col = color(*algorithm);

        // q1..q3 band: forward along q3, back along q1.
        let mut band = String::from("<path d=\"");
        for (i, (c, _, _, q3)) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            band.push_str(&format!("{cmd}{} {} ", fmt(to_x(*c as f64)), fmt(to_y(*q3))));
        }
        for (c, q1, _, _) in points.iter().rev() {
            band.push_str(&format!("L{} {} ", fmt(to_x(*c as f64)), fmt(to_y(*q1))));
        }
        band.push_str(&format!("Z\" fill=\"{col}\" fill-opacity=\"0.18\" stroke=\"none\"/>\n"));
        svg.push_str(&band);

        let mut line = String::from("<polyline fill=\"none\" points=\"");
        for (c, _, median, _) in &points {
            line.push_str(&format!("{},{} ", fmt(to_x(*c as f64)), fmt(to_y(*median))));
        }
        line.push_str(&format!("\" stroke=\"{col}\" stroke-width=\"1.5\"/>\n"));
        svg.push_str(&line);
    }

    // Legend, one entry per algorithm present.
    let mut ly = y0 + 8.0;
    for algorithm in panel.series.keys() {
        let col = color(*algorithm);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{col}\" stroke-width=\"2\"/>\n",
            fmt(x0 + plot_w - 74.0),
            fmt(ly),
            fmt(x0 + plot_w - 58.0),
            fmt(ly)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"9\">{}</text>\n",
            fmt(x0 + plot_w - 54.0),
            fmt(ly + 3.0),
            algorithm.name()
        ));
        ly += 12.0;
    }
}

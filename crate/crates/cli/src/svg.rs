//! Minimal SVG line plots of a [`ResultTable`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::table::{Cell, ResultTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("column `{0}` is not in the table")]
    MissingColumn(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub y: String,
    /// Standard errors drawn as ±1 bars.
    pub se: Option<String>,
    /// Rows are grouped into one line per distinct value.
    pub series: Option<String>,
    /// Markers only, no connecting line.
    pub scatter: bool,
}

impl PlotSpec {
    pub fn new(title: &str, x: &str, y: &str) -> Self {
        Self { title: title.into(), x: x.into(), y: y.into(), se: None, series: None, scatter: false }
    }

    pub fn with_se(mut self, col: &str) -> Self {
        self.se = Some(col.into());
        self
    }

    pub fn with_series(mut self, col: &str) -> Self {
        self.series = Some(col.into());
        self
    }

    pub fn scatter(mut self) -> Self {
        self.scatter = true;
        self
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Scale {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>, from: f64, to: f64) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        } else if lo == hi {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
            (lo, hi) = (lo - pad, hi + pad);
        }
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).collect()
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn column(table: &ResultTable, name: &str) -> Result<usize, PlotError> {
    table.column_index(name).ok_or_else(|| PlotError::MissingColumn(name.to_string()))
}

fn num(c: &Cell) -> f64 {
    c.as_f64().unwrap_or(f64::NAN)
}

/// Renders `table` according to `spec`. Depends on nothing but its inputs.
pub fn emit_svg(table: &ResultTable, spec: &PlotSpec) -> Result<String, PlotError> {
    let xi = column(table, &spec.x)?;
    let yi = column(table, &spec.y)?;
    let si = spec.se.as_deref().map(|c| column(table, c)).transpose()?;
    let gi = spec.series.as_deref().map(|c| column(table, c)).transpose()?;
    let rows = table.rows();

    let se = |r: &[Cell]| si.map_or(0.0, |i| num(&r[i]).abs());
    let xs = Scale::new(rows.iter().map(|r| num(&r[xi])), LEFT, WIDTH - RIGHT);
    let ys = Scale::new(
        rows.iter().flat_map(|r| {
            let (y, e) = (num(&r[yi]), se(r));
            [y - e, y + e]
        }),
        HEIGHT - BOTTOM,
        TOP,
    );

    // Series in order of first appearance.
    let mut groups: Vec<(String, Vec<&[Cell]>)> = Vec::new();
    for r in rows {
        let key = gi.map_or_else(String::new, |i| r[i].to_string());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(r),
            None => groups.push((key, vec![r])),
        }
    }

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(&spec.title)
    )
    .unwrap();

    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    writeln!(s, r#"<g class="axes" stroke="black" font-family="sans-serif" font-size="11">"#).unwrap();
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#).unwrap();
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#).unwrap();
    for t in xs.ticks() {
        let px = xs.map(t);
        writeln!(s, r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}"/>"#, y0 + 5.0).unwrap();
        writeln!(s, r#"<text x="{px:.2}" y="{}" text-anchor="middle" stroke="none">{}</text>"#, y0 + 18.0, label(t))
            .unwrap();
    }
    for t in ys.ticks() {
        let py = ys.map(t);
        writeln!(s, r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}"/>"#, x0 - 5.0).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end" stroke="none">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            label(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" stroke="none">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" stroke="none" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&spec.y)
    )
    .unwrap();
    writeln!(s, "</g>").unwrap();

    for (n, (key, group)) in groups.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let pts: Vec<(f64, f64)> = group
            .iter()
            .map(|r| (num(&r[xi]), num(&r[yi])))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| (xs.map(x), ys.map(y)))
            .collect();
        writeln!(s, r#"<g class="series" data-name="{}" stroke="{color}" fill="{color}">"#, escape(key)).unwrap();
        if !spec.scatter && !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(s, r#"<polyline fill="none" stroke-width="1.5" points="{}"/>"#, coords.join(" ")).unwrap();
        }
        for (x, y) in &pts {
            writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" stroke="none"/>"#).unwrap();
        }
        if si.is_some() {
            for r in group {
                let (x, y, e) = (num(&r[xi]), num(&r[yi]), se(r));
                let (px, lo, hi) = (xs.map(x), ys.map(y - e), ys.map(y + e));
                writeln!(
                    s,
                    r#"<path class="errorbar" d="M{px:.2} {lo:.2}V{hi:.2}M{:.2} {lo:.2}H{:.2}M{:.2} {hi:.2}H{:.2}"/>"#,
                    px - 3.0,
                    px + 3.0,
                    px - 3.0,
                    px + 3.0
                )
                .unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
        if gi.is_some() {
            let ly = TOP + 10.0 + 18.0 * n as f64;
            let lx = WIDTH - RIGHT + 15.0;
            writeln!(
                s,
                r#"<g class="legend" font-family="sans-serif" font-size="11"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
                lx + 18.0,
                lx + 24.0,
                ly + 4.0,
                escape(&format!("{} = {key}", spec.series.as_deref().unwrap_or_default()))
            )
            .unwrap();
        }
    }
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

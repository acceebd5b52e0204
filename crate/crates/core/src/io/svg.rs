//! Deterministic SVG plot of traced components in the `(b, lambda_hat)` plane.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::table::LocusRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct PlotOptions {
    pub width: f64,
    pub height: f64,
    /// Plot `lambda` instead of `lambda_hat = -lambda`.
    pub raw_lambda: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 600.0,
            raw_lambda: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMeta {
    pub id: usize,
    pub n: usize,
    pub m: usize,
    pub points: usize,
}

/// Embedded in the SVG so a plot can be traced back to its table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotMetadata {
    #[serde(rename = "J")]
    pub j: Option<usize>,
    pub ordinate: String,
    pub components: Vec<ComponentMeta>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];
const DASHES: [&str; 3] = ["", "6 3", "2 3"];
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom

/// Tick positions with a 1-2-5 spacing covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let exp = raw.log10().floor() as i32;
    let mag = 10f64.powi(exp);
    let factor = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .find(|f| f * mag >= raw)
        .unwrap_or(10.0);
    let step = factor * mag;
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    // Divide by an exact power of ten so ticks like 0.3 come out exact.
    let at = |i: i64| {
        if exp < 0 {
            i as f64 * factor / 10f64.powi(-exp)
        } else {
            i as f64 * step
        }
    };
    (first..=last).map(at).collect()
}

fn label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e5 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo <= 0.0 {
        let d = lo.abs().max(1.0) * 0.5;
        return (lo - d, hi + d);
    }
    let pad = 0.03 * (hi - lo);
    (lo - pad, hi + pad)
}

pub fn render_svg(rows: &[LocusRow], opts: &PlotOptions) -> String {
    let y_of = |r: &LocusRow| if opts.raw_lambda { r.lambda } else { r.lambda_phys };
    let mut comps: BTreeMap<usize, Vec<&LocusRow>> = BTreeMap::new();
    for r in rows {
        comps.entry(r.component_id).or_default().push(r);
    }
    for pts in comps.values_mut() {
        pts.sort_by_key(|r| r.point_index);
    }
    let (bx0, bx1) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.b), b.max(r.b)));
    let (by0, by1) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(y_of(r)), b.max(y_of(r)))
    });
    let (x0, x1) = padded(bx0, bx1);
    let (y0, y1) = padded(by0, by1);

    let (ml, mr, mt, mb) = MARGIN;
    let pw = opts.width - ml - mr;
    let ph = opts.height - mt - mb;
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + (y1 - y) / (y1 - y0) * ph;

    let ordinate = if opts.raw_lambda { "lambda" } else { "lambda_hat" };
    let meta = PlotMetadata {
        j: rows.first().map(|r| r.j),
        ordinate: ordinate.into(),
        components: comps
            .iter()
            .map(|(id, pts)| ComponentMeta {
                id: *id,
                n: pts[0].n,
                m: pts[0].m,
                points: pts.len(),
            })
            .collect(),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(
        s,
        "<metadata id=\"qes-plot\">{}</metadata>",
        serde_json::to_string(&meta).expect("metadata serializes")
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        opts.width, opts.height
    );
    let _ = writeln!(
        s,
        r##"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>"##
    );
    for t in ticks(x0, x1, 8) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000000"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            mt + ph,
            mt + ph + 5.0,
            mt + ph + 18.0,
            label(t)
        );
    }
    for t in ticks(y0, y1, 6) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="#000000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            ml - 5.0,
            ml - 8.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">b</text>"#,
        ml + pw / 2.0,
        opts.height - 10.0
    );
    let ylabel = if opts.raw_lambda { "λ" } else { "λ̂ = −λ" };
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{ylabel}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0
    );

    for (id, pts) in &comps {
        let m = pts[0].m;
        let color = PALETTE[m % PALETTE.len()];
        let dash = DASHES[(m / PALETTE.len()) % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let coords: Vec<String> = pts
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.b), sy(y_of(r))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-component="{id}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
            coords.join(" ")
        );
    }

    let mut seen = Vec::new();
    for pts in comps.values() {
        let key = (pts[0].n, pts[0].m);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let y = mt + 15.0 + 18.0 * (seen.len() - 1) as f64;
        let x = ml + pw - 110.0;
        let color = PALETTE[key.1 % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">Γ({}, {})</text>"#,
            x + 25.0,
            x + 30.0,
            y + 4.0,
            key.0,
            key.1
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Recovers the metadata block written by [`render_svg`].
pub fn read_plot_metadata(svg: &str) -> Result<PlotMetadata> {
    let start = svg
        .find("<metadata id=\"qes-plot\">")
        .ok_or_else(|| Error::InvalidInput("no plot metadata".into()))?
        + "<metadata id=\"qes-plot\">".len();
    let end = svg[start..]
        .find("</metadata>")
        .ok_or_else(|| Error::InvalidInput("unterminated plot metadata".into()))?;
    Ok(serde_json::from_str(&svg[start..start + end])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola(id: usize, m: usize) -> Vec<LocusRow> {
        (0..21)
            .map(|i| {
                let b = -5.0 + 0.5 * i as f64;
                LocusRow {
                    j: 1,
                    n: 0,
                    m,
                    component_id: id,
                    point_index: i,
                    t: i as f64,
                    b,
                    lambda: -b * b,
                    lambda_phys: b * b,
                    n_real_zeros: 0,
                    beta: None,
                }
            })
            .collect()
    }

    #[test]
    fn deterministic_with_metadata() {
        let rows = parabola(0, 0);
        let a = render_svg(&rows, &PlotOptions::default());
        let b = render_svg(&rows, &PlotOptions::default());
        assert_eq!(a, b);
        let meta = read_plot_metadata(&a).unwrap();
        assert_eq!(meta.components.len(), 1);
        assert_eq!(meta.components[0].points, 21);
        assert_eq!(meta.ordinate, "lambda_hat");
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn empty_input_draws_axes_only() {
        let s = render_svg(&[], &PlotOptions::default());
        assert!(s.contains("<rect") && !s.contains("<polyline"));
        assert!(read_plot_metadata(&s).unwrap().components.is_empty());
    }

    #[test]
    fn raw_lambda_flips_the_ordinate() {
        let rows = parabola(0, 0);
        let s = render_svg(
            &rows,
            &PlotOptions {
                raw_lambda: true,
                ..PlotOptions::default()
            },
        );
        assert_eq!(read_plot_metadata(&s).unwrap().ordinate, "lambda");
    }

    #[test]
    fn tick_spacing() {
        assert_eq!(ticks(0.0, 10.0, 5), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(ticks(-0.3, 0.3, 6), vec![-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3]);
    }
}

//! Self-contained SVG renderings: scatter plots for maps of elections and
//! heatmaps for resampling matrices.

use crate::error::{invalid, Result};
use std::fmt::Write;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;
const LEGEND_W: f64 = 220.0;

/// Scatter plot of `points`; `labels[i]` names the group of point i and
/// `colors[i]` its fill. The legend lists each distinct (label, color) pair
/// once, in order of first appearance.
pub fn write_svg_scatter(points: &[(f64, f64)], labels: &[String], colors: &[String]) -> Result<String> {
    if labels.len() != points.len() || colors.len() != points.len() {
        return invalid("points, labels and colors must have equal lengths");
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return invalid("scatter coordinates must be finite");
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    // equal aspect ratio so map distances stay comparable
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let inner = SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x0) / span * inner;
    let sy = |y: f64| SIZE - MARGIN - (y - y0) / span * inner;

    let mut legend: Vec<(&str, &str)> = Vec::new();
    for (l, c) in labels.iter().zip(colors) {
        if !legend.iter().any(|&(a, b)| a == l && b == c) {
            legend.push((l, c));
        }
    }
    let height = SIZE.max(MARGIN * 2.0 + 18.0 * legend.len() as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}">"#,
        w = SIZE + LEGEND_W
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{height}" fill="white"/>"#, SIZE + LEGEND_W);
    for (((x, y), l), c) in points.iter().zip(labels).zip(colors) {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}" fill-opacity="0.8"><title>{}</title></circle>"#,
            sx(*x),
            sy(*y),
            esc(c),
            esc(l)
        );
    }
    for (i, (l, c)) in legend.iter().enumerate() {
        let y = MARGIN + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{y}" width="12" height="12" fill="{}"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            SIZE + 10.0,
            esc(c),
            SIZE + 28.0,
            y + 10.0,
            esc(l)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Color for a value in [0, 1]: white at 0 to dark blue at 1.
pub fn heat_color(v: f64) -> String {
    let t = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

/// Heatmap of a matrix of values in [0, 1] with row and column labels and
/// a legend of the color scale.
pub fn write_svg_heatmap(matrix: &[Vec<f64>], row_labels: &[String], col_labels: &[String], title: &str) -> Result<String> {
    let cols = col_labels.len();
    if matrix.len() != row_labels.len() || matrix.iter().any(|r| r.len() != cols) {
        return invalid("heatmap matrix shape does not match its labels");
    }
    let cell = 40.0;
    let left = 60.0;
    let top = 50.0;
    let width = left + cell * cols as f64 + 120.0;
    let height = top + cell * matrix.len() as f64 + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<text x="{left}" y="20" font-size="14">{}</text>"#, esc(title));
    for (j, l) in col_labels.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            left + cell * (j as f64 + 0.5),
            top - 6.0,
            esc(l)
        );
    }
    for (i, (row, l)) in matrix.iter().zip(row_labels).enumerate() {
        let y = top + cell * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            y + cell / 2.0 + 4.0,
            esc(l)
        );
        for (j, &v) in row.iter().enumerate() {
            let x = left + cell * j as f64;
            let ink = if v > 0.55 { "white" } else { "black" };
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{}"/><text x="{:.1}" y="{:.1}" text-anchor="middle" fill="{ink}">{:.2}</text>"#,
                heat_color(v),
                x + cell / 2.0,
                y + cell / 2.0 + 4.0,
                v
            );
        }
    }
    // legend: five swatches from 0 to 1
    let lx = left + cell * cols as f64 + 20.0;
    let _ = writeln!(out, r#"<text x="{lx}" y="{}">scale</text>"#, top - 6.0);
    for s in 0..=4 {
        let v = s as f64 / 4.0;
        let y = top + 20.0 * s as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{lx}" y="{y}" width="16" height="16" fill="{}" stroke="#999"/><text x="{}" y="{}">{v:.2}</text>"##,
            heat_color(v),
            lx + 22.0,
            y + 12.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

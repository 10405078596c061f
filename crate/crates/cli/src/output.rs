use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use resind::limitshape::ContinuousDiagram;
use serde::Serialize;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory `{}`", dir.display()))
}

pub fn write_csv<R: Serialize>(dir: &Path, name: &str, rows: &[R]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut w =
        csv::Writer::from_path(&path).with_context(|| format!("opening `{}`", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(path)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing `{}`", path.display()))?;
    Ok(path)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// One polyline per curve on a fixed 800x500 viewBox with equal axis scales.
pub fn shape_svg(curves: &[(String, &ContinuousDiagram)]) -> String {
    let (mut lo, mut hi, mut top) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for (_, d) in curves {
        for (&x, &y) in d.x.iter().zip(&d.omega) {
            lo = lo.min(x);
            hi = hi.max(x);
            top = top.max(y);
        }
    }
    if !lo.is_finite() || hi <= lo {
        (lo, hi) = (-1.0, 1.0);
    }
    let scale = ((WIDTH - 2.0 * MARGIN) / (hi - lo)).min((HEIGHT - 2.0 * MARGIN) / top.max(1e-9));
    let px = |x: f64| MARGIN + (x - lo) * scale;
    let py = |y: f64| HEIGHT - MARGIN - y * scale;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-width="1"/>"##,
        px(lo),
        py(0.0),
        px(hi),
        py(0.0)
    );
    if lo < 0.0 && hi > 0.0 {
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#ccc" stroke-dasharray="4 4"/>"##,
            px(0.0),
            py(0.0),
            px(0.0),
            py(top)
        );
    }
    for (i, (label, d)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> =
            d.x.iter()
                .zip(&d.omega)
                .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{label}</title></polyline>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12" fill="{color}">{label}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 * i as f64
        );
    }
    svg.push_str("</svg>\n");
    svg
}

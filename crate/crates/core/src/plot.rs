//! Self-contained SVG renderings with a numeric CSV alongside each one.

use std::fmt::Write;

use crate::featurize::{FeatureKind, FeatureVector};
use crate::mciq::{Characteristic, BINS};
use crate::persistence::PersistenceBarcode;

pub struct Plot {
    pub svg: String,
    pub csv: String,
}

const W: f64 = 640.0;
const H: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn svg_open(width: f64, height: f64, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{x}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
        x = width / 2.0
    )
}

fn axes(out: &mut String, x0: f64, y0: f64, x1: f64, y1: f64) {
    let _ = writeln!(
        out,
        "<g class=\"axes\" stroke=\"black\"><line x1=\"{x0}\" y1=\"{y1}\" x2=\"{x1}\" y2=\"{y1}\"/><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/></g>"
    );
}

/// Horizontal interval plot, dimension 0 above dimension 1.
pub fn barcode_plot(bc: &PersistenceBarcode) -> Plot {
    let mut svg = svg_open(W, H, "persistence barcode");
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    axes(&mut svg, x0, y0, x1, y1);
    let t = bc.threshold_used.max(f64::MIN_POSITIVE);
    let total = bc.dim0.len() + bc.dim1.len();
    let step = if total > 0 { (y1 - y0) / total as f64 } else { 0.0 };
    let mut csv = String::from("dim,birth,death,essential\n");
    let mut row = 0usize;
    for (dim, bars, color) in [(0, &bc.dim0, "#1f77b4"), (1, &bc.dim1, "#d62728")] {
        for bar in bars.iter() {
            let y = y0 + (row as f64 + 0.5) * step;
            let xa = x0 + (x1 - x0) * bar.birth / t;
            let xb = x0 + (x1 - x0) * bar.death.min(t) / t;
            let _ = writeln!(
                svg,
                "<line class=\"bar\" x1=\"{xa:.2}\" y1=\"{y:.2}\" x2=\"{xb:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"{:.2}\"/>",
                (step * 0.6).clamp(0.5, 4.0)
            );
            let _ = writeln!(csv, "{dim},{},{},{}", bar.birth, bar.death, bar.essential);
            row += 1;
        }
    }
    svg.push_str("</svg>\n");
    Plot { svg, csv }
}

/// Step curve of a Betti-binning vector.
pub fn step_curve_plot(values: &[f64], title: &str) -> Plot {
    let mut svg = svg_open(W, H, title);
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    axes(&mut svg, x0, y0, x1, y1);
    let ymax = values.iter().copied().fold(0.0, f64::max).max(1.0);
    let n = values.len().max(1) as f64;
    let px = |i: f64| x0 + (x1 - x0) * i / n;
    let py = |v: f64| y1 - (y1 - y0) * v / ymax;
    let mut path = String::new();
    for (i, &v) in values.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.2},{:.2} H{:.2} ", px(i as f64), py(v), px(i as f64 + 1.0));
    }
    let _ = writeln!(
        svg,
        "<path class=\"curve\" d=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>",
        path.trim_end()
    );
    svg.push_str("</svg>\n");
    let mut csv = String::from("v,count\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(csv, "{i},{v}");
    }
    Plot { svg, csv }
}

fn bar_rects(svg: &mut String, values: &[f64], x0: f64, x1: f64, y0: f64, y1: f64, ymax: f64) {
    let bw = (x1 - x0) / values.len().max(1) as f64;
    for (i, &v) in values.iter().enumerate() {
        let hgt = (y1 - y0) * v / ymax;
        let _ = writeln!(
            svg,
            "<rect class=\"bin\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#4c72b0\"/>",
            x0 + i as f64 * bw + 1.0,
            y1 - hgt,
            (bw - 2.0).max(0.5),
            hgt
        );
    }
}

/// Five 10-bin histogram panels, one per quality characteristic.
pub fn mciq_plot(values: &[f64]) -> Plot {
    let panel_w = 200.0;
    let width = panel_w * 5.0 + MARGIN;
    let mut svg = svg_open(width, H, "MCIQ histograms");
    let ymax = values.iter().copied().fold(0.0, f64::max).max(1.0);
    let mut csv = String::from("characteristic,bin,count\n");
    for (p, c) in Characteristic::ORDER.iter().enumerate() {
        let x0 = MARGIN / 2.0 + p as f64 * panel_w + 10.0;
        let x1 = x0 + panel_w - 20.0;
        let (y0, y1) = (MARGIN, H - MARGIN);
        axes(&mut svg, x0, y0, x1, y1);
        let seg = values.get(p * BINS..(p + 1) * BINS).unwrap_or(&[]);
        bar_rects(&mut svg, seg, x0, x1, y0, y1, ymax);
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            (x0 + x1) / 2.0,
            H - 15.0,
            c.name()
        );
        for (b, v) in seg.iter().enumerate() {
            let _ = writeln!(csv, "{},{b},{v}", c.name());
        }
    }
    svg.push_str("</svg>\n");
    Plot { svg, csv }
}

/// Plain bar chart, used for barcode statistics.
pub fn bar_plot(values: &[f64], title: &str) -> Plot {
    let mut svg = svg_open(W, H, title);
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    axes(&mut svg, x0, y0, x1, y1);
    let ymax = values.iter().copied().fold(0.0, f64::max).max(1.0);
    bar_rects(&mut svg, values, x0, x1, y0, y1, ymax);
    svg.push_str("</svg>\n");
    let mut csv = String::from("index,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(csv, "{i},{v}");
    }
    Plot { svg, csv }
}

pub fn feature_plot(fv: &FeatureVector) -> Plot {
    let title = format!("{} {} ({})", fv.kind, fv.sample_id, fv.label);
    match fv.kind {
        FeatureKind::Mciq => mciq_plot(&fv.values),
        FeatureKind::BbD0 | FeatureKind::BbD1 => step_curve_plot(&fv.values, &title),
        FeatureKind::BsD0 | FeatureKind::BsD1 => bar_plot(&fv.values, &title),
    }
}

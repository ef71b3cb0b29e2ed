//! Flat SVG raster of an atlas with the four boundary curves on top.

use std::fmt::Write as _;

use shift2d_core::axy_region::{semihypo_switch_y, y_hyponormal, y_subnormal, y_weakly_hyponormal, RegionLabel};

use crate::atlas::{labels_present, AtlasRow, Window};

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;
const MARGIN: f64 = 50.0;
const LEGEND_W: f64 = 210.0;
const CURVE_SAMPLES: usize = 400;

pub fn label_color(l: RegionLabel) -> &'static str {
    match l {
        RegionLabel::Subnormal => "#2b6cb0",
        RegionLabel::HypoNotSub => "#63b3ed",
        RegionLabel::ShAndWhNotH => "#48bb78",
        RegionLabel::ShNotWh => "#ecc94b",
        RegionLabel::WhNotSh => "#ed8936",
        RegionLabel::Neither => "#c53030",
    }
}

const OUT_COLOR: &str = "#e2e8f0";

struct Frame(Window);

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.0.xmin) / (self.0.xmax - self.0.xmin) * PLOT_W
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.0.ymax - y) / (self.0.ymax - self.0.ymin) * PLOT_H
    }
}

/// Consecutive samples inside the window, split where the curve leaves it.
fn segments(w: &Window, f: impl Fn(f64) -> Option<f64>) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for i in 0..=CURVE_SAMPLES {
        let x = w.xmin + (w.xmax - w.xmin) * i as f64 / CURVE_SAMPLES as f64;
        match f(x).filter(|y| y.is_finite() && *y >= w.ymin && *y <= w.ymax) {
            Some(y) => cur.push((x, y)),
            None if cur.is_empty() => {}
            None => out.push(std::mem::take(&mut cur)),
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out.retain(|s| s.len() > 1);
    out
}

type Curve<'a> = (&'static str, &'static str, Box<dyn Fn(f64) -> Option<f64> + 'a>);

pub fn render(w: &Window, rows: &[AtlasRow]) -> String {
    let fr = Frame(*w);
    let (cw, ch) = (PLOT_W / (w.nx - 1) as f64, PLOT_H / (w.ny - 1) as f64);
    let total_w = PLOT_W + 2.0 * MARGIN + LEGEND_W;
    let total_h = PLOT_H + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{total_w}" height="{total_h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for r in rows {
        let color = r.class.map_or(OUT_COLOR, |c| label_color(c.label));
        let x0 = (fr.px(r.x) - cw / 2.0).max(MARGIN);
        let y0 = (fr.py(r.y) - ch / 2.0).max(MARGIN);
        let x1 = (fr.px(r.x) + cw / 2.0).min(MARGIN + PLOT_W);
        let y1 = (fr.py(r.y) + ch / 2.0).min(MARGIN + PLOT_H);
        let _ = writeln!(
            s,
            r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{color}"/>"#,
            x1 - x0,
            y1 - y0
        );
    }
    s.push_str("</g>\n");

    let a = w.a;
    let curves: [Curve<'_>; 4] = [
        ("hyponormal bound", "#000000", Box::new(move |x| Some(y_hyponormal(a, x)))),
        ("subnormal bound", "#1a365d", Box::new(move |x| Some(y_subnormal(a, x)))),
        (
            "semi-hyponormal boundary",
            "#22543d",
            Box::new(move |x| {
                let top = (x / a).min(1.0) * (1.0 - 1e-12);
                semihypo_switch_y(a, x, w.ymin.max(1e-9), w.ymax.min(top), 200)
            }),
        ),
        ("weak hyponormality bound", "#7b341e", Box::new(move |x| Some(y_weakly_hyponormal(a, x)))),
    ];
    for (name, color, f) in &curves {
        for seg in segments(w, f) {
            let pts: Vec<String> = seg.iter().map(|&(x, y)| format!("{:.3},{:.3}", fr.px(x), fr.py(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{name}</title></polyline>"#,
                pts.join(" ")
            );
        }
    }

    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">x ({} to {})</text>"#,
        MARGIN + PLOT_W / 2.0,
        total_h - 15.0,
        w.xmin,
        w.xmax
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">y ({} to {})</text>"#,
        MARGIN + PLOT_H / 2.0,
        MARGIN + PLOT_H / 2.0,
        w.ymin,
        w.ymax
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="30">a = {a}</text>"#);

    let lx = MARGIN * 1.5 + PLOT_W;
    let mut ly = MARGIN;
    for l in labels_present(rows) {
        let _ = writeln!(s, r#"<rect x="{lx}" y="{ly}" width="14" height="14" fill="{}"/>"#, label_color(l));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 20.0, ly + 11.0, l.as_str());
        ly += 20.0;
    }
    ly += 10.0;
    for (name, color, _) in &curves {
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            ly + 7.0,
            lx + 14.0,
            ly + 7.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{name}</text>"#, lx + 20.0, ly + 11.0);
        ly += 20.0;
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::scan;
    use shift2d_core::axy_region::Method;
    use shift2d_core::PsdTolerance;

    #[test]
    fn draws_cells_curves_and_legend() {
        let w = Window { nx: 12, ny: 10, ..Window::default() };
        let rows = scan(&w, Method::ClosedForm, PsdTolerance::default()).unwrap();
        let svg = render(&w, &rows);
        assert_eq!(svg.matches("<rect").count(), 1 + rows.len() + 1 + labels_present(&rows).len());
        assert!(svg.contains("<title>hyponormal bound</title>"));
        assert!(svg.contains("<title>semi-hyponormal boundary</title>"));
        assert!(!svg.contains(">OUT<"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

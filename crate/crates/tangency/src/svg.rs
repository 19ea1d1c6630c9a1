//! SVG 1.1 drawing of a family (debug aid; floating-point coordinates).

use std::fmt::Write;

use crate::curve::{Family, Kind, ValidFamily};
use crate::geom::{to_f64, Q};

const W: f64 = 960.0;
const H: f64 = 640.0;
const PAD: f64 = 24.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

/// Curves as polylines; with `v`, tangency points in red, crossings in grey,
/// and the stabbing line `ell` dashed.
pub fn render(f: &Family, v: Option<&ValidFamily>, ell: Option<&Q>) -> String {
    let pts = f.curves.iter().flat_map(|c| c.vertices().iter().map(|p| (to_f64(&p.x), to_f64(&p.y))));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        (x0, x1, y0, y1) = (x0.min(x), x1.max(x), y0.min(y), y1.max(y));
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let sx = (W - 2.0 * PAD) / (x1 - x0).max(1e-9);
    let sy = (H - 2.0 * PAD) / (y1 - y0).max(1e-9);
    let px = |x: f64| PAD + (x - x0) * sx;
    let py = |y: f64| H - PAD - (y - y0) * sy;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(l) = ell {
        let x = px(to_f64(l));
        let _ =
            writeln!(s, r##"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{H}" stroke="#d62728" stroke-dasharray="6,4"/>"##);
    }
    for (k, c) in f.curves.iter().enumerate() {
        let path: Vec<String> =
            c.vertices().iter().map(|p| format!("{:.3},{:.3}", px(to_f64(&p.x)), py(to_f64(&p.y)))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            PALETTE[k % PALETTE.len()],
            path.join(" "),
            escape(&c.id)
        );
    }
    if let Some(v) = v {
        for r in &v.records {
            let (x, y) = (px(to_f64(&r.point.x)), py(to_f64(&r.point.y)));
            let (fill, rad) = match r.kind {
                Kind::Touching => ("#d62728", 4.0),
                Kind::Crossing => ("#aaaaaa", 2.0),
            };
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{rad}" fill="{fill}"><title>{} {}</title></circle>"#,
                escape(v.id(r.a)),
                escape(v.id(r.b))
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

use std::fmt::Write;

use super::trace::Trace;
use crate::model::{LinkageSpec, MM_PER_UNIT};

/// `theta,x,y,residual`, one row per sample.
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from("theta,x,y,residual\n");
    for s in &trace.samples {
        writeln!(
            out,
            "{},{},{},{:e}",
            s.theta, s.point[0], s.point[1], s.residual
        )
        .unwrap();
    }
    out
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// The pen path as a polyline with the anchors marked, drawn at 8 mm per unit
/// with y pointing up. Output is a pure function of its inputs.
pub fn trace_svg(spec: &LinkageSpec, trace: &Trace) -> String {
    let anchors: Vec<[f64; 2]> = spec.anchors().map(|(_, p)| p.to_f64()).collect();
    let to_mm = |p: [f64; 2]| [p[0] * MM_PER_UNIT, -p[1] * MM_PER_UNIT];
    let path: Vec<[f64; 2]> = trace.samples.iter().map(|s| to_mm(s.point)).collect();
    let marks: Vec<[f64; 2]> = anchors.iter().map(|p| to_mm(*p)).collect();

    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for p in path.iter().chain(&marks) {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, MM_PER_UNIT, MM_PER_UNIT);
    }
    let (w, h) = ((x1 - x0).max(MM_PER_UNIT), (y1 - y0).max(MM_PER_UNIT));
    let (px, py) = (0.1 * w, 0.1 * h);
    let (vx, vy, vw, vh) = (x0 - px, y0 - py, w + 2.0 * px, h + 2.0 * py);
    let cross = 0.02 * vw.max(vh);
    let stroke = 0.004 * vw.max(vh);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}mm" height="{}mm" viewBox="{} {} {} {}">"#,
        fmt(vw),
        fmt(vh),
        fmt(vx),
        fmt(vy),
        fmt(vw),
        fmt(vh)
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", xml_escape(&spec.name)).unwrap();
    let pts: Vec<String> = path
        .iter()
        .map(|p| format!("{},{}", fmt(p[0]), fmt(p[1])))
        .collect();
    writeln!(
        out,
        r#"  <polyline fill="none" stroke="navy" stroke-width="{}" points="{}"/>"#,
        fmt(stroke),
        pts.join(" ")
    )
    .unwrap();
    for m in &marks {
        writeln!(
            out,
            r#"  <path stroke="red" stroke-width="{}" d="M{} {}L{} {}M{} {}L{} {}"/>"#,
            fmt(stroke),
            fmt(m[0] - cross),
            fmt(m[1] - cross),
            fmt(m[0] + cross),
            fmt(m[1] + cross),
            fmt(m[0] - cross),
            fmt(m[1] + cross),
            fmt(m[0] + cross),
            fmt(m[1] - cross)
        )
        .unwrap();
    }
    let font = 0.035 * vw.max(vh);
    writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="{}" font-family="sans-serif">{}: pen path (navy), anchors (red), 8 mm per unit; built models draw about 7 cm (Watt) and 2 cm (Hart) of line</text>"#,
        fmt(vx + 0.5 * px),
        fmt(vy + 0.5 * py + font * 0.5),
        fmt(font),
        xml_escape(&spec.name)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

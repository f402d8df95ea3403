//! SVG rendering of packings.

use std::fmt::Write;

use crate::disks::{canonical_tridisk, Packing};
use crate::graph::Edge;

#[derive(Debug, Clone, Default)]
pub struct SvgOptions {
    /// Segments drawn between the centers of these pairs.
    pub contacts: Vec<Edge>,
    /// Pairs drawn as dashed segments, e.g. the edges being exchanged by a flip.
    pub highlight: Vec<Edge>,
    /// Draw the incircle of the canonical tridisk.
    pub incircle: bool,
    pub labels: bool,
    /// Text placed in the upper-left corner.
    pub caption: Option<String>,
}

const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948"];

fn bbox(p: &Packing) -> [f64; 4] {
    let canon = canonical_tridisk();
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for d in canon.disks.iter().chain(p.disks()) {
        b[0] = b[0].min(d.center.x - d.radius);
        b[1] = b[1].min(d.center.y - d.radius);
        b[2] = b[2].max(d.center.x + d.radius);
        b[3] = b[3].max(d.center.y + d.radius);
    }
    b
}

/// Renders `p` with the y axis pointing up. The view box covers the canonical tridisk
/// and every disk, with a 5% margin. Output depends only on the inputs.
pub fn render_svg(p: &Packing, opts: &SvgOptions) -> String {
    let [x0, y0, x1, y1] = bbox(p);
    let (w, h) = (x1 - x0, y1 - y0);
    let m = 0.05 * w.max(h);
    let (vx, vy, vw, vh) = (x0 - m, -y1 - m, w + 2.0 * m, h + 2.0 * m);
    let stroke = vw.max(vh) / 400.0;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="{:.0}" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}">"#,
        800.0 * vh / vw
    )
    .unwrap();
    writeln!(s, r#"<rect x="{vx:.6}" y="{vy:.6}" width="{vw:.6}" height="{vh:.6}" fill="white"/>"#).unwrap();
    if opts.incircle {
        let inc = canonical_tridisk().incircle();
        writeln!(
            s,
            r##"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="none" stroke="#999999" stroke-width="{stroke:.6}" stroke-dasharray="{:.6}"/>"##,
            inc.center.x,
            -inc.center.y,
            inc.radius,
            4.0 * stroke
        )
        .unwrap();
    }
    for (i, d) in p.disks().iter().enumerate() {
        writeln!(
            s,
            r##"<circle id="disk-{i}" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{}" fill-opacity="0.35" stroke="#222222" stroke-width="{stroke:.6}"/>"##,
            d.center.x,
            -d.center.y,
            d.radius,
            PALETTE[i % PALETTE.len()]
        )
        .unwrap();
    }
    let segment = |s: &mut String, e: &Edge, style: &str| {
        if e.0 >= p.len() || e.1 >= p.len() {
            return;
        }
        let (a, b) = (p.disk(e.0).center, p.disk(e.1).center);
        writeln!(
            s,
            r#"<line data-edge="{}-{}" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke-width="{stroke:.6}" {style}/>"#,
            e.0, e.1, a.x, -a.y, b.x, -b.y
        )
        .unwrap();
    };
    for e in &opts.contacts {
        segment(&mut s, e, r##"stroke="#222222""##);
    }
    for e in &opts.highlight {
        segment(&mut s, e, &format!(r##"stroke="#d62728" stroke-dasharray="{:.6}""##, 3.0 * stroke));
    }
    if opts.labels {
        for (i, d) in p.disks().iter().enumerate() {
            writeln!(
                s,
                r#"<text x="{:.6}" y="{:.6}" font-size="{:.6}" text-anchor="middle" dominant-baseline="central">{i}</text>"#,
                d.center.x,
                -d.center.y,
                (0.8 * d.radius).min(vw / 30.0)
            )
            .unwrap();
        }
    }
    if let Some(c) = &opts.caption {
        writeln!(
            s,
            r#"<text x="{:.6}" y="{:.6}" font-size="{:.6}" font-family="monospace">{}</text>"#,
            vx + m / 2.0,
            vy + m,
            vw / 40.0,
            escape(c)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

use std::fmt::Write;

use abelian_core::cycles::Constellation;

const SIZE: f64 = 520.0;
const RING: f64 = 200.0;

/// Star centers sit on a circle in branch order; a marked vertex sits at the pulled-in
/// centroid of the stars reaching it, nudged by its ray index so vertices never overlap.
pub fn render(c: &Constellation) -> String {
    let n = c.degree;
    let mid = SIZE / 2.0;
    let star: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
            (mid + RING * a.cos(), mid + RING * a.sin())
        })
        .collect();
    let rays = c.rays.len().max(1);
    let mut marked = Vec::new();
    for (s, verts) in c.vertices.iter().enumerate() {
        for k in 0..verts.len() {
            let hits: Vec<usize> = (0..n).filter(|&i| c.stars[i][s] == k).collect();
            let (sx, sy) = hits.iter().fold((0.0, 0.0), |acc, &i| (acc.0 + star[i].0, acc.1 + star[i].1));
            let m = hits.len().max(1) as f64;
            let pull = if hits.len() == 1 { 0.8 } else { 0.55 };
            let a = std::f64::consts::TAU * s as f64 / rays as f64;
            let (x, y) = (mid + pull * (sx / m - mid) + 12.0 * a.cos(), mid + pull * (sy / m - mid) + 12.0 * a.sin());
            marked.push((c.marked_id(s, k), s, x, y));
        }
    }
    let pos = |id: usize| -> (f64, f64) {
        if id < n {
            star[id]
        } else {
            marked.iter().find(|m| m.0 == id).map(|m| (m.2, m.3)).expect("known vertex")
        }
    };

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (a, b) in c.edges() {
        let (p, q) = (pos(a), pos(b));
        writeln!(out, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5"/>"#, p.0, p.1, q.0, q.1).unwrap();
    }
    for (i, (x, y)) in star.iter().enumerate() {
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="9" fill="white" stroke="black"/>"#).unwrap();
        writeln!(out, r#"<text x="{x:.3}" y="{:.3}" font-size="10" text-anchor="middle">{}</text>"#, y + 3.5, i + 1).unwrap();
    }
    for (_, s, x, y) in &marked {
        writeln!(out, r#"<rect x="{:.3}" y="{:.3}" width="8" height="8" fill="black"><title>critical value {}</title></rect>"#, x - 4.0, y - 4.0, s + 1).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

//! SVG rendering of two-variable instances: constraint lines with shaded
//! infeasible sides, objective contours with a descent arrow, and marked
//! vertices.
//!
//! The exact core never touches floats; conversion to f64 happens only here,
//! for geometry. With `--epsilon p/q` the perturbed right-hand sides are
//! instantiated numerically and the shading width of each constraint is
//! proportional to its perturbation, which reproduces the familiar picture of
//! a degenerate vertex splitting into nondegenerate ones.

use std::fmt::Write as _;

use lpcert::{enumerate_vertices, perturb, MixedLp, Rational, DEFAULT_SUBSET_CAP};

use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct RenderConfig {
    pub epsilon: Option<Rational>,
    pub order: Option<Vec<usize>>,
}

const SIZE: f64 = 560.0;
const PAD: f64 = 40.0;

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Frame {
    fn to_svg(&self, x: f64, y: f64) -> (f64, f64) {
        // Flip y: SVG grows downward.
        (
            PAD + (x - self.min_x) * self.scale,
            SIZE - PAD - (y - self.min_y) * self.scale,
        )
    }
}

pub fn render_svg(lp: &MixedLp, cfg: &RenderConfig) -> Result<String, CliError> {
    if lp.n() != 2 {
        return Err(CliError::NotTwoDimensional(lp.n()));
    }
    let display = match &cfg.epsilon {
        Some(eps) => perturb(lp, cfg.order.as_deref())?.instantiate(eps),
        None => lp.clone(),
    };
    let vertices = enumerate_vertices(&display, DEFAULT_SUBSET_CAP)?;

    // Frame the drawing around every pairwise line intersection plus the
    // vertices, with a margin.
    let mut anchor: Vec<(f64, f64)> = vertices
        .iter()
        .map(|v| (v[0].to_f64(), v[1].to_f64()))
        .collect();
    for i in 1..=display.m() {
        for j in i + 1..=display.m() {
            if let Some((x, y)) = intersect(&display, i, j) {
                anchor.push((x, y));
            }
        }
    }
    if anchor.is_empty() {
        anchor.push((0.0, 0.0));
    }
    let (mut lo_x, mut hi_x) = min_max(anchor.iter().map(|p| p.0));
    let (mut lo_y, mut hi_y) = min_max(anchor.iter().map(|p| p.1));
    let span = ((hi_x - lo_x).max(hi_y - lo_y)).max(2.0);
    let margin = span * 0.45;
    lo_x -= margin;
    hi_x += margin;
    lo_y -= margin;
    hi_y += margin;
    let span_x = hi_x - lo_x;
    let span_y = hi_y - lo_y;
    let frame = Frame {
        min_x: lo_x,
        min_y: lo_y,
        scale: (SIZE - 2.0 * PAD) / span_x.max(span_y),
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}" style="background-color:white;">"#,
        s = SIZE
    )
    .unwrap();
    writeln!(
        svg,
        r##"  <defs>
    <marker id="arrow" markerWidth="10" markerHeight="8" refX="8" refY="4" orient="auto" fill="#444">
      <polygon points="0 0, 9 4, 0 8"/>
    </marker>
  </defs>"##
    )
    .unwrap();

    // Constraint lines with shading strips on the infeasible side.
    for i in 1..=display.m() {
        let a = display.row(i);
        let (a1, a2) = (a[0].to_f64(), a[1].to_f64());
        let norm = (a1 * a1 + a2 * a2).sqrt();
        if norm == 0.0 {
            continue;
        }
        let Some((p, q)) = clip_line(&display, i, lo_x, hi_x, lo_y, hi_y) else {
            continue;
        };
        let (x1, y1) = frame.to_svg(p.0, p.1);
        let (x2, y2) = frame.to_svg(q.0, q.1);
        if !display.is_equality(i) {
            // Infeasible side lies opposite the row normal.
            let width = shade_width(cfg, &display, i, span);
            let (ux, uy) = (a1 / norm, a2 / norm);
            let (w1, z1) = frame.to_svg(p.0 - ux * width, p.1 - uy * width);
            let (w2, z2) = frame.to_svg(q.0 - ux * width, q.1 - uy * width);
            writeln!(
                svg,
                r##"  <polygon class="shade" points="{x1:.2} {y1:.2}, {x2:.2} {y2:.2}, {w2:.2} {z2:.2}, {w1:.2} {z1:.2}" fill="#9db7d6" fill-opacity="0.55" stroke="none"/>"##
            )
            .unwrap();
        }
        let stroke = if display.is_equality(i) {
            "#7a2d2d"
        } else {
            "#1f3a5f"
        };
        writeln!(
            svg,
            r#"  <line class="constraint" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="1.6"/>"#
        )
        .unwrap();
        let (lx, ly) = frame.to_svg(p.0 * 0.85 + q.0 * 0.15, p.1 * 0.85 + q.1 * 0.15);
        writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-size="13" fill="{stroke}">{}</text>"#,
            lx + 4.0,
            ly - 4.0,
            i
        )
        .unwrap();
    }

    // Objective contours with a descent arrow.
    let c = display.cost();
    let (c1, c2) = (c[0].to_f64(), c[1].to_f64());
    let cn = (c1 * c1 + c2 * c2).sqrt();
    if cn > 0.0 {
        let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
        let (tx, ty) = (-c2 / cn, c1 / cn); // contour direction
        let reach = span_x.max(span_y);
        for k in -1..=1i32 {
            let off = f64::from(k) * reach * 0.18;
            let (ox, oy) = (cx + c1 / cn * off, cy + c2 / cn * off);
            let (x1, y1) = frame.to_svg(ox - tx * reach, oy - ty * reach);
            let (x2, y2) = frame.to_svg(ox + tx * reach, oy + ty * reach);
            writeln!(
                svg,
                r##"  <line class="contour" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#999" stroke-width="0.9" stroke-dasharray="6 5"/>"##
            )
            .unwrap();
        }
        let (ax1, ay1) = frame.to_svg(cx, cy);
        let (ax2, ay2) = frame.to_svg(cx - c1 / cn * reach * 0.22, cy - c2 / cn * reach * 0.22);
        writeln!(
            svg,
            r##"  <line class="descent" x1="{ax1:.2}" y1="{ay1:.2}" x2="{ax2:.2}" y2="{ay2:.2}" stroke="#444" stroke-width="1.4" marker-end="url(#arrow)"/>
  <text x="{:.2}" y="{:.2}" font-size="14" fill="#666" font-style="italic">phi</text>"##,
            ax1 + 6.0,
            ay1 + 16.0
        )
        .unwrap();
    }

    // Vertices last, on top.
    for v in &vertices {
        let (x, y) = frame.to_svg(v[0].to_f64(), v[1].to_f64());
        writeln!(
            svg,
            r##"  <circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="4.5" fill="#b03030" stroke="white" stroke-width="1"><title>({}, {})</title></circle>"##,
            v[0], v[1]
        )
        .unwrap();
    }

    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Band width in world units, relative to the drawing span: a thin constant
/// strip without ε, otherwise proportional to the row's perturbation ε^k.
fn shade_width(cfg: &RenderConfig, display: &MixedLp, index: usize, span: f64) -> f64 {
    match &cfg.epsilon {
        None => span * 0.015,
        Some(eps) => {
            let local = index - display.m_eq();
            let power = cfg.order.as_ref().map(|o| o[local - 1]).unwrap_or(local);
            let e = eps.to_f64();
            span * 0.09 * e.powi(power as i32)
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Intersection of two constraint lines, in f64.
fn intersect(lp: &MixedLp, i: usize, j: usize) -> Option<(f64, f64)> {
    let (a, b) = (lp.row(i), lp.row(j));
    let det = &a[0] * &b[1] - &a[1] * &b[0];
    if det.is_zero() {
        return None;
    }
    let (bi, bj) = (lp.rhs(i), lp.rhs(j));
    let x = (bi * &b[1] - &a[1] * bj) / det.clone();
    let y = (&a[0] * bj - bi * &b[0]) / det;
    Some((x.to_f64(), y.to_f64()))
}

/// Clips the line a·x = b of constraint `i` to the world rectangle.
fn clip_line(
    lp: &MixedLp,
    i: usize,
    lo_x: f64,
    hi_x: f64,
    lo_y: f64,
    hi_y: f64,
) -> Option<((f64, f64), (f64, f64))> {
    let a = lp.row(i);
    let (a1, a2) = (a[0].to_f64(), a[1].to_f64());
    let b = lp.rhs(i).to_f64();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let eps = 1e-9;
    if a2.abs() > eps {
        for x in [lo_x, hi_x] {
            let y = (b - a1 * x) / a2;
            if (lo_y - eps..=hi_y + eps).contains(&y) {
                pts.push((x, y));
            }
        }
    }
    if a1.abs() > eps {
        for y in [lo_y, hi_y] {
            let x = (b - a2 * y) / a1;
            if (lo_x - eps..=hi_x + eps).contains(&x) {
                pts.push((x, y));
            }
        }
    }
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < eps && (p.1 - q.1).abs() < eps);
    if pts.len() < 2 {
        return None;
    }
    // Farthest pair among the (at most four) candidates.
    let mut best = (pts[0], pts[1]);
    let mut best_d = -1.0;
    for s in 0..pts.len() {
        for t in s + 1..pts.len() {
            let d = (pts[s].0 - pts[t].0).powi(2) + (pts[s].1 - pts[t].1).powi(2);
            if d > best_d {
                best_d = d;
                best = (pts[s], pts[t]);
            }
        }
    }
    Some(best)
}

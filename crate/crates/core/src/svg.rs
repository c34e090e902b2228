//! SVG picture of a wall set in the `(alpha, s)` half plane.
//!
//! Coordinates are the only approximate numbers in the crate's output: every
//! curve is evaluated exactly at rational `alpha` and rounded to 12
//! significant digits for display.

use num_traits::{Signed, Zero};

use crate::exact::rational::{qi, to_f64, Rational};
use crate::slice::{region_u_bound, QuiverRegion};
use crate::walls::WallSet;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const SAMPLES: i64 = 240;
const REGION_CELLS: i64 = 80;

/// Plot window `0 < alpha <= alpha_max`, `0 <= s <= s_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvgBounds {
    pub alpha_max: Rational,
    pub s_max: Rational,
}

impl SvgBounds {
    /// A window showing where the `U` boundary meets `s = 0`, with margin.
    pub fn default_for(ws: &WallSet) -> Self {
        // boundary hits s = 0 at alpha^2 = 6 k_U; round 5/4 of that alpha up to 1/8
        let a = (6.0 * to_f64(&ws.k_u)).sqrt() * 1.25;
        let eighths = (a * 8.0).ceil().max(1.0) as i64;
        SvgBounds {
            alpha_max: Rational::new(eighths.into(), 8.into()),
            s_max: qi(2),
        }
    }
}

/// Decimal with 12 significant digits and no trailing zeros.
pub fn fmt_coord(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

struct Frame {
    alpha_max: f64,
    s_max: f64,
}

impl Frame {
    fn px(&self, alpha: f64) -> f64 {
        MARGIN + alpha / self.alpha_max * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, s: f64) -> f64 {
        HEIGHT - MARGIN - s / self.s_max * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Polylines of `s = k / alpha^2 - 1/6` inside the window, split where the
/// curve leaves it.
fn wall_paths(k: &Rational, b: &SvgBounds, f: &Frame) -> Vec<String> {
    let mut paths = Vec::new();
    let mut cur: Vec<String> = Vec::new();
    let sixth = Rational::new(1.into(), 6.into());
    for i in 1..=SAMPLES {
        let alpha = &b.alpha_max * Rational::new(i.into(), SAMPLES.into());
        let s = k / (&alpha * &alpha) - &sixth;
        if s.is_negative() || s > b.s_max {
            if cur.len() > 1 {
                paths.push(cur.join(" "));
            }
            cur.clear();
            continue;
        }
        cur.push(format!("{},{}", fmt_coord(f.px(to_f64(&alpha))), fmt_coord(f.py(to_f64(&s)))));
    }
    if cur.len() > 1 {
        paths.push(cur.join(" "));
    }
    paths
}

/// Cells of the quiver region, merged into horizontal runs.
fn region_rects(ws: &WallSet, b: &SvgBounds, f: &Frame) -> Vec<String> {
    let mut out = Vec::new();
    let n = REGION_CELLS;
    let cell_w = (WIDTH - 2.0 * MARGIN) / n as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / n as f64;
    // both regions need alpha^2 < 1 (P3) or < 1/4 (Q3)
    let Ok(region) = QuiverRegion::new(&ws.variety) else {
        return out;
    };
    let alpha2_cap = if ws.variety.is_p3() { qi(1) } else { Rational::new(1.into(), 4.into()) };
    for j in 0..n {
        let s = &b.s_max * Rational::new((2 * j + 1).into(), (2 * n).into());
        let mut run: Option<i64> = None;
        for i in 0..=n {
            let inside = i < n && {
                let alpha = &b.alpha_max * Rational::new((2 * i + 1).into(), (2 * n).into());
                let alpha2 = &alpha * &alpha;
                alpha2 < alpha2_cap && region.contains(&alpha2, &s)
            };
            match (inside, run) {
                (true, None) => run = Some(i),
                (false, Some(start)) => {
                    let x = MARGIN + start as f64 * cell_w;
                    let y = f.py(to_f64(&s)) - cell_h / 2.0;
                    out.push(format!(
                        r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                        fmt_coord(x),
                        fmt_coord(y),
                        fmt_coord((i - start) as f64 * cell_w),
                        fmt_coord(cell_h)
                    ));
                    run = None;
                }
                _ => {}
            }
        }
    }
    out
}

/// Draws every wall `s = k/alpha^2 - 1/6`, the boundary of `U`, and on `P3`
/// and `Q3` the quiver region.
pub fn render_walls_svg(ws: &WallSet, bounds: &SvgBounds) -> String {
    let f = Frame {
        alpha_max: to_f64(&bounds.alpha_max),
        s_max: to_f64(&bounds.s_max),
    };
    let mut svg = String::new();
    let w = |svg: &mut String, line: &str| {
        svg.push_str(line);
        svg.push('\n');
    };
    w(
        &mut svg,
        &format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#),
    );
    w(&mut svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    w(
        &mut svg,
        &format!(
            r#"<text x="{}" y="30" font-family="sans-serif" font-size="16">{} v = (-{}, 0, {}, 0)</text>"#,
            MARGIN,
            ws.variety.name(),
            ws.r,
            ws.d
        ),
    );
    if ws.variety.is_p3() || ws.variety.is_q3() {
        w(&mut svg, r##"<g id="quiver-region" fill="#f2d43d" fill-opacity="0.5" stroke="none">"##);
        for r in region_rects(ws, bounds, &f) {
            w(&mut svg, &r);
        }
        w(&mut svg, "</g>");
    }
    let (x0, y0) = (fmt_coord(f.px(0.0)), fmt_coord(f.py(0.0)));
    let (x1, y1) = (fmt_coord(f.px(f.alpha_max)), fmt_coord(f.py(f.s_max)));
    w(&mut svg, r#"<g id="axes" stroke="black" stroke-width="1">"#);
    w(&mut svg, &format!(r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#));
    w(&mut svg, &format!(r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#));
    w(&mut svg, "</g>");
    w(
        &mut svg,
        &format!(
            r#"<text x="{x1}" y="{}" font-family="sans-serif" font-size="14" text-anchor="end">alpha (max {})</text>"#,
            fmt_coord(f.py(0.0) + 30.0),
            bounds.alpha_max
        ),
    );
    w(
        &mut svg,
        &format!(
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">s (max {})</text>"#,
            fmt_coord(f.px(0.0) + 6.0),
            fmt_coord(f.py(f.s_max) - 8.0),
            bounds.s_max
        ),
    );
    let k_u = region_u_bound(&ws.variety);
    w(
        &mut svg,
        &format!(r#"<g id="u-boundary" data-k="{k_u}" fill="none" stroke="black" stroke-width="2" stroke-dasharray="6 4">"#),
    );
    for p in wall_paths(&k_u, bounds, &f) {
        w(&mut svg, &format!(r#"<polyline points="{p}"/>"#));
    }
    w(&mut svg, "</g>");
    for wall in &ws.walls {
        if wall.k.is_zero() {
            continue;
        }
        let colour = if wall.inside_u { "#1f5fbf" } else { "#c0392b" };
        w(
            &mut svg,
            &format!(
                r#"<g class="wall" data-k="{}" data-candidates="{}" fill="none" stroke="{colour}" stroke-width="2">"#,
                wall.k,
                wall.candidates.len()
            ),
        );
        for p in wall_paths(&wall.k, bounds, &f) {
            w(&mut svg, &format!(r#"<polyline points="{p}"/>"#));
        }
        w(&mut svg, "</g>");
    }
    w(&mut svg, "</svg>");
    svg
}

/// Number of wall curves (groups) drawn, including the `U` boundary.
pub fn curve_count(svg: &str) -> usize {
    let mut n = 0;
    for line in svg.lines() {
        if line.starts_with(r#"<g class="wall""#) || line.starts_with(r#"<g id="u-boundary""#) {
            n += 1;
        }
    }
    n
}

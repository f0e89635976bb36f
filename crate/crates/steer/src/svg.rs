//! SVG snapshots: obstacles as filled polygons, each Bézier arc of the cable
//! as its own `<path>`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use elastica_core::bezier::{approximate, BezierChain};
use elastica_core::geometry::Aabb;
use elastica_core::planner::PlanResult;
use elastica_core::{Polygon, Vec2};

use crate::error::{Result, SteerError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    /// Pixels per length unit.
    pub scale: f64,
    pub control_points: bool,
    pub columns: usize,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { scale: 300.0, control_points: false, columns: 3 }
    }
}

/// One snapshot: a set of chains over the shared obstacles.
pub struct Panel {
    pub title: String,
    pub chains: Vec<BezierChain>,
}

fn num(v: f64) -> String {
    let s = format!("{v:.5}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn panel(out: &mut String, p: &Panel, bounds: &Aabb, obstacles: &[Polygon], style: &SvgStyle, ox: f64, oy: f64) {
    let w = bounds.max.x - bounds.min.x;
    let h = bounds.max.y - bounds.min.y;
    let s = style.scale;
    let _ = writeln!(
        out,
        "<g transform=\"translate({} {}) scale({} {}) translate({} {})\">",
        num(ox),
        num(oy + h * s),
        num(s),
        num(-s),
        num(-bounds.min.x),
        num(-bounds.min.y)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\" stroke-width=\"{}\"/>",
        num(bounds.min.x),
        num(bounds.min.y),
        num(w),
        num(h),
        num(1.0 / s)
    );
    for o in obstacles {
        let pts: Vec<String> = o.vertices().iter().map(|v| format!("{},{}", num(v.x), num(v.y))).collect();
        let _ = writeln!(out, "<polygon points=\"{}\" fill=\"#555\"/>", pts.join(" "));
    }
    for c in &p.chains {
        for a in c.arcs() {
            let _ = writeln!(
                out,
                "<path d=\"M {} {} Q {} {} {} {}\" fill=\"none\" stroke=\"#c22\" stroke-width=\"{}\"/>",
                num(a.p_start.x),
                num(a.p_start.y),
                num(a.q_ctrl.x),
                num(a.q_ctrl.y),
                num(a.p_end.x),
                num(a.p_end.y),
                num(2.0 / s)
            );
        }
        if style.control_points {
            for q in c.control_points() {
                let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#22c\"/>", num(q.x), num(q.y), num(3.0 / s));
            }
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
        num(ox + 4.0),
        num(oy + 14.0),
        p.title
    );
}

pub fn render_panels(panels: &[Panel], bounds: &Aabb, obstacles: &[Polygon], style: &SvgStyle) -> String {
    let cols = style.columns.clamp(1, panels.len().max(1));
    let rows = panels.len().div_ceil(cols).max(1);
    let pw = (bounds.max.x - bounds.min.x) * style.scale;
    let ph = (bounds.max.y - bounds.min.y) * style.scale;
    let gap = 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">",
        num(cols as f64 * (pw + gap) + gap),
        num(rows as f64 * (ph + gap) + gap)
    );
    for (i, p) in panels.iter().enumerate() {
        let (r, c) = (i / cols, i % cols);
        panel(&mut out, p, bounds, obstacles, style, gap + c as f64 * (pw + gap), gap + r as f64 * (ph + gap));
    }
    out.push_str("</svg>\n");
    out
}

/// Up to `count` evenly spaced waypoints of a plan, first and last included.
pub fn plan_panels(r: &PlanResult, length: f64, count: usize) -> Result<Vec<Panel>> {
    let n = r.path.len();
    let mut idx: Vec<usize> = if n <= count.max(1) {
        (0..n).collect()
    } else {
        (0..count).map(|i| i * (n - 1) / (count - 1)).collect()
    };
    idx.dedup();
    idx.iter()
        .map(|&i| {
            let c = &r.path[i];
            let chain = approximate(&c.params()?, &c.base, length)?;
            Ok(Panel { title: format!("{}/{}", i, n - 1), chains: vec![chain] })
        })
        .collect()
}

pub fn write_svg(text: &str, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| SteerError::io(path, e))
}

/// Bounds covering the chains with a margin.
pub fn fit_bounds(chains: &[BezierChain], obstacles: &[Polygon], margin: f64) -> Aabb {
    let mut pts: Vec<Vec2> = chains.iter().flat_map(|c| c.arcs().iter().flat_map(|a| [a.p_start, a.q_ctrl, a.p_end])).collect();
    for o in obstacles {
        pts.extend_from_slice(o.vertices());
    }
    let b = Aabb::from_points(&pts);
    Aabb { min: Vec2::new(b.min.x - margin, b.min.y - margin), max: Vec2::new(b.max.x + margin, b.max.y + margin) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use elastica_core::{BaseFrame, ElasticaParams};

    #[test]
    fn straight_cable_with_one_square() {
        let p = ElasticaParams::new(0.0, 0.0, 1.0).unwrap();
        let chain = approximate(&p, &BaseFrame::ORIGIN, 1.0).unwrap();
        let sq = Polygon::rect(Vec2::new(0.3, 0.2), Vec2::new(0.5, 0.4)).unwrap();
        let b = fit_bounds(std::slice::from_ref(&chain), std::slice::from_ref(&sq), 0.1);
        let svg = render_panels(&[Panel { title: "s".into(), chains: vec![chain] }], &b, &[sq], &SvgStyle::default());
        assert_eq!(svg.matches("<path ").count(), 1);
        assert_eq!(svg.matches("<polygon ").count(), 1);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn one_path_per_arc() {
        let p = ElasticaParams::new(0.7, 0.0, 1.0).unwrap();
        let chain = approximate(&p, &BaseFrame::ORIGIN, 1.0).unwrap();
        let n = chain.arcs().len();
        let b = fit_bounds(std::slice::from_ref(&chain), &[], 0.1);
        let style = SvgStyle { control_points: true, ..SvgStyle::default() };
        let svg = render_panels(&[Panel { title: "s".into(), chains: vec![chain] }], &b, &[], &style);
        assert_eq!(svg.matches("<path ").count(), n);
        assert_eq!(svg.matches("<circle ").count(), n + 1);
    }
}

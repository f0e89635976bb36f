//! Quadratic Bézier approximation of cable shapes and polygon collision.
//!
//! The cable is split at its inflection points and curvature extrema into at
//! most five convex pieces. Each piece becomes one quadratic arc whose middle
//! control point is the intersection of the end tangents.

use alloc::vec::Vec;

use crate::elastica::{BaseFrame, ElasticaParams};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, point_segment_distance, Aabb, Polygon, Vec2};

/// Calibrated bound on the chain-to-shape distance for `k <= K_MAX`, in units
/// of cable length.
pub const HAUSDORFF_BOUND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadArc {
    pub p_start: Vec2,
    pub q_ctrl: Vec2,
    pub p_end: Vec2,
}

impl QuadArc {
    pub fn new(p_start: Vec2, q_ctrl: Vec2, p_end: Vec2) -> Self {
        QuadArc { p_start, q_ctrl, p_end }
    }

    pub fn straight(a: Vec2, b: Vec2) -> Self {
        QuadArc::new(a, a.lerp(b, 0.5), b)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Vec2 {
        let u = 1.0 - t;
        self.p_start * (u * u) + self.q_ctrl * (2.0 * u * t) + self.p_end * (t * t)
    }

    #[inline]
    pub fn derivative(&self, t: f64) -> Vec2 {
        ((self.q_ctrl - self.p_start) * (1.0 - t) + (self.p_end - self.q_ctrl) * t) * 2.0
    }

    /// Box around the control triangle, which contains the arc.
    pub fn hull_box(&self) -> Aabb {
        Aabb::from_points(&[self.p_start, self.q_ctrl, self.p_end])
    }

    /// Arc length by composite Gauss-Legendre quadrature.
    pub fn length(&self) -> f64 {
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        const PANELS: usize = 16;
        let h = 1.0 / PANELS as f64;
        let mut s = 0.0;
        for p in 0..PANELS {
            let mid = (p as f64 + 0.5) * h;
            for i in 0..5 {
                s += W[i] * self.derivative(mid + 0.5 * h * X[i]).norm();
            }
        }
        0.5 * h * s
    }

    pub fn transformed(&self, base: &BaseFrame) -> QuadArc {
        QuadArc::new(base.to_world(self.p_start), base.to_world(self.q_ctrl), base.to_world(self.p_end))
    }
}

/// A point on the cable where the chain is split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub s: f64,
    pub point: Vec2,
    pub tangent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BezierChain {
    arcs: Vec<QuadArc>,
}

impl BezierChain {
    pub fn from_arcs(arcs: Vec<QuadArc>) -> Self {
        BezierChain { arcs }
    }

    #[inline]
    pub fn arcs(&self) -> &[QuadArc] {
        &self.arcs
    }

    /// On-curve points `p_0 .. p_n`.
    pub fn control_points(&self) -> Vec<Vec2> {
        let mut v: Vec<Vec2> = self.arcs.iter().map(|a| a.p_start).collect();
        if let Some(last) = self.arcs.last() {
            v.push(last.p_end);
        }
        v
    }

    pub fn length(&self) -> f64 {
        self.arcs.iter().map(QuadArc::length).sum()
    }

    /// Rigid transform of every arc by `base`.
    pub fn transformed(&self, base: &BaseFrame) -> BezierChain {
        BezierChain { arcs: self.arcs.iter().map(|a| a.transformed(base)).collect() }
    }

    /// `samples_per_arc + 1` points per arc, shared endpoints repeated once.
    pub fn sample(&self, samples_per_arc: usize) -> Vec<Vec2> {
        let n = samples_per_arc.max(1);
        let mut out = Vec::with_capacity(self.arcs.len() * n + 1);
        for (i, a) in self.arcs.iter().enumerate() {
            let start = if i == 0 { 0 } else { 1 };
            for j in start..=n {
                out.push(a.eval(j as f64 / n as f64));
            }
        }
        out
    }
}

/// Endpoints plus every interior point where `s + s0` is a multiple of a
/// quarter period.
pub fn select_control_points(p: &ElasticaParams, base: &BaseFrame, l: f64) -> Vec<ControlPoint> {
    let mut ss = Vec::with_capacity(6);
    ss.push(0.0);
    if p.k() > 1e-12 {
        let q = 0.25 * p.l_tilde();
        let tol = 1e-9 * p.l_tilde();
        let mut m = libm::floor(p.s0() / q) + 1.0;
        loop {
            let s = m * q - p.s0();
            if s >= l - tol {
                break;
            }
            if s > tol {
                ss.push(s);
            }
            m += 1.0;
        }
    }
    ss.push(l);
    ss.into_iter()
        .map(|s| ControlPoint { s, point: p.point(s, base), tangent: p.tangent_angle(s, base) })
        .collect()
}

/// One arc per consecutive pair of control points.
pub fn build_chain(points: &[ControlPoint]) -> Result<BezierChain> {
    let mut arcs = Vec::with_capacity(points.len().saturating_sub(1));
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let da = Vec2::from_angle(a.tangent);
        let db = Vec2::from_angle(b.tangent);
        let chord = b.point - a.point;
        let det = da.cross(db);
        let scale = chord.norm();
        if det.abs() < 1e-9 {
            if da.cross(chord).abs() <= 1e-9 * scale.max(1e-300) {
                arcs.push(QuadArc::straight(a.point, b.point));
                continue;
            }
            return Err(Error::DegenerateTangents);
        }
        let t = chord.cross(db) / det;
        arcs.push(QuadArc::new(a.point, a.point + da * t, b.point));
    }
    Ok(BezierChain { arcs })
}

/// Chain for the segment `[0, l]` of `p` placed at `base`.
pub fn approximate(p: &ElasticaParams, base: &BaseFrame, l: f64) -> Result<BezierChain> {
    build_chain(&select_control_points(p, base, l))
}

/// Relative length surplus of the chain over the cable.
pub fn excess_length(chain: &BezierChain, l: f64) -> f64 {
    (chain.length() - l) / l
}

/// Two-sided distance between the chain and the true shape, both sampled.
pub fn hausdorff_gap(chain: &BezierChain, p: &ElasticaParams, base: &BaseFrame, l: f64, samples_per_arc: usize) -> f64 {
    let cp = chain.sample(samples_per_arc);
    let ep = p.sample(base, l, 2000);
    let one_sided = |from: &[Vec2], to: &[Vec2]| {
        from.iter()
            .map(|&x| {
                to.windows(2)
                    .map(|w| point_segment_distance(x, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(&cp, &ep).max(one_sided(&ep, &cp))
}

/// Real roots of `a t^2 + b t + c` with a tolerance for double roots.
fn quadratic_roots(a: f64, b: f64, c: f64) -> ([f64; 2], usize) {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return ([0.0; 2], 0);
    }
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return ([0.0; 2], 0);
        }
        return ([-c / b, 0.0], 1);
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc >= -1e-12 * (b * b + (4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return ([0.0; 2], 0);
        }
    }
    let sq = libm::sqrt(disc);
    let qv = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    if qv == 0.0 {
        return ([0.0, 0.0], 1);
    }
    ([qv / a, c / qv], 2)
}

fn arc_crosses_edge(arc: &QuadArc, e0: Vec2, e1: Vec2) -> bool {
    let dir = e1 - e0;
    let len2 = dir.dot(dir);
    if len2 == 0.0 {
        return false;
    }
    let n = Vec2::new(-dir.y, dir.x);
    let d0 = n.dot(arc.p_start - e0);
    let d1 = n.dot(arc.q_ctrl - e0);
    let d2 = n.dot(arc.p_end - e0);
    let (roots, count) = quadratic_roots(d0 - 2.0 * d1 + d2, 2.0 * (d1 - d0), d0);
    const TOL: f64 = 1e-12;
    roots[..count].iter().any(|&t| {
        if !(-TOL..=1.0 + TOL).contains(&t) {
            return false;
        }
        let u = (arc.eval(t.clamp(0.0, 1.0)) - e0).dot(dir) / len2;
        (-TOL..=1.0 + TOL).contains(&u)
    })
}

/// True iff the arc meets the polygon boundary or starts or ends inside it.
pub fn arc_polygon_collision(arc: &QuadArc, poly: &Polygon) -> bool {
    if !arc.hull_box().overlaps(poly.bbox()) {
        return false;
    }
    if poly.contains(arc.p_start) || poly.contains(arc.p_end) {
        return true;
    }
    poly.edges().any(|(a, b)| arc_crosses_edge(arc, a, b))
}

/// Obstacle grown by an axis-aligned square of half side `clearance`, kept
/// as a union of polygons.
#[derive(Debug, Clone, PartialEq)]
pub struct InflatedObstacle {
    pieces: Vec<Polygon>,
    bbox: Aabb,
}

impl InflatedObstacle {
    pub fn new(poly: &Polygon, clearance: f64) -> Result<Self> {
        if !(clearance >= 0.0) {
            return Err(Error::InvalidParams("clearance must be non-negative"));
        }
        let offsets = [
            Vec2::new(clearance, clearance),
            Vec2::new(-clearance, clearance),
            Vec2::new(-clearance, -clearance),
            Vec2::new(clearance, -clearance),
        ];
        let grow = |pts: &[Vec2]| -> Result<Polygon> {
            let mut all = Vec::with_capacity(pts.len() * 4);
            for &p in pts {
                for &o in &offsets {
                    all.push(p + o);
                }
            }
            Polygon::new(convex_hull(&all))
        };
        let pieces = if clearance == 0.0 {
            alloc::vec![poly.clone()]
        } else if poly.is_convex() {
            alloc::vec![grow(poly.vertices())?]
        } else {
            let mut v = alloc::vec![poly.clone()];
            for (a, b) in poly.edges() {
                v.push(grow(&[a, b])?);
            }
            v
        };
        let corners: Vec<Vec2> = pieces.iter().flat_map(|p| [p.bbox().min, p.bbox().max]).collect();
        let bbox = Aabb::from_points(&corners);
        Ok(InflatedObstacle { pieces, bbox })
    }

    #[inline]
    pub fn pieces(&self) -> &[Polygon] {
        &self.pieces
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.pieces.iter().any(|q| q.contains(p))
    }

    pub fn collides_arc(&self, arc: &QuadArc) -> bool {
        arc.hull_box().overlaps(&self.bbox) && self.pieces.iter().any(|p| arc_polygon_collision(arc, p))
    }
}

/// Collision of a chain with pre-inflated obstacles.
pub fn chain_collides(chain: &BezierChain, obstacles: &[InflatedObstacle]) -> bool {
    chain.arcs().iter().any(|a| obstacles.iter().any(|o| o.collides_arc(a)))
}

/// Collision of a chain with obstacles grown by `clearance`.
pub fn chain_scene_collision(chain: &BezierChain, obstacles: &[Polygon], clearance: f64) -> Result<bool> {
    let inflated = obstacles
        .iter()
        .map(|p| InflatedObstacle::new(p, clearance))
        .collect::<Result<Vec<_>>>()?;
    Ok(chain_collides(chain, &inflated))
}

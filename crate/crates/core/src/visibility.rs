//! Shortest polygonal path for a point among polygonal obstacles, through the
//! visibility graph of obstacle vertices.

use alloc::vec::Vec;

use crate::bezier::InflatedObstacle;
use crate::error::{Error, Result};
use crate::geometry::{Polygon, Vec2};

fn edge_hit(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<f64> {
    let r = b - a;
    let s = d - c;
    let den = r.cross(s);
    let eps = 1e-12;
    if den.abs() < eps * r.norm() * s.norm() {
        return None;
    }
    let t = (c - a).cross(s) / den;
    let u = (c - a).cross(r) / den;
    ((-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u)).then_some(t.clamp(0.0, 1.0))
}

/// True iff the open segment passes through the interior of `poly`.
pub fn segment_enters(a: Vec2, b: Vec2, poly: &Polygon) -> bool {
    let mut ts: Vec<f64> = alloc::vec![0.0, 1.0];
    for (c, d) in poly.edges() {
        if let Some(t) = edge_hit(a, b, c, d) {
            ts.push(t);
        }
        for v in [c, d] {
            let ab = b - a;
            let len2 = ab.dot(ab);
            if len2 > 0.0 {
                let t = (v - a).dot(ab) / len2;
                if (0.0..=1.0).contains(&t) && a.lerp(b, t).dist(v) < 1e-12 {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    let tol = 1e-9 * (poly.bbox().max - poly.bbox().min).norm();
    ts.windows(2).any(|w| {
        if w[1] - w[0] < 1e-12 {
            return false;
        }
        let m = a.lerp(b, 0.5 * (w[0] + w[1]));
        poly.contains(m) && poly.boundary_distance(m) > tol
    })
}

/// Vertices of the shortest path from `start` to `goal`, both included.
/// Obstacles are grown by `inflate`; pieces that already contain `start` or
/// `goal` do not block.
pub fn shortest_path(start: Vec2, goal: Vec2, obstacles: &[Polygon], inflate: f64) -> Result<Vec<Vec2>> {
    let mut blockers: Vec<Polygon> = Vec::new();
    for o in obstacles {
        for p in InflatedObstacle::new(o, inflate)?.pieces() {
            if !p.contains(start) && !p.contains(goal) {
                blockers.push(p.clone());
            }
        }
    }
    let mut nodes = alloc::vec![start, goal];
    for (i, p) in blockers.iter().enumerate() {
        for &v in p.vertices() {
            let buried = blockers
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && q.contains(v) && q.boundary_distance(v) > 1e-12);
            if !buried {
                nodes.push(v);
            }
        }
    }
    let visible = |a: Vec2, b: Vec2| !blockers.iter().any(|p| segment_enters(a, b, p));
    let n = nodes.len();
    let mut dist = alloc::vec![f64::INFINITY; n];
    let mut prev = alloc::vec![usize::MAX; n];
    let mut done = alloc::vec![false; n];
    dist[0] = 0.0;
    loop {
        let mut u = usize::MAX;
        for i in 0..n {
            if !done[i] && dist[i].is_finite() && (u == usize::MAX || dist[i] < dist[u]) {
                u = i;
            }
        }
        if u == usize::MAX || u == 1 {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            let d = dist[u] + nodes[u].dist(nodes[v]);
            if d < dist[v] && visible(nodes[u], nodes[v]) {
                dist[v] = d;
                prev[v] = u;
            }
        }
    }
    if !dist[1].is_finite() {
        return Err(Error::NoEndpointPath);
    }
    let mut path = alloc::vec![goal];
    let mut at = 1;
    while at != 0 {
        at = prev[at];
        path.push(nodes[at]);
    }
    path.reverse();
    Ok(path)
}

/// Interior vertices of the shortest path, in order.
pub fn intermediate_targets(start: Vec2, goal: Vec2, obstacles: &[Polygon], inflate: f64) -> Result<Vec<Vec2>> {
    let p = shortest_path(start, goal, obstacles, inflate)?;
    Ok(p[1..p.len() - 1].to_vec())
}

//! Stability of equal-tangent shapes by inflection count, and the endpoint
//! regions reachable by stable shapes.

use alloc::vec::Vec;

use crate::elastica::ElasticaParams;
use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Vec2};

/// Modulus at which the full-period curve closes into a figure eight.
pub const K_C: f64 = 0.908_908_557_548_156_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityLabel {
    StableOneInflection,
    StableTwoInflection,
    Unstable,
}

impl StabilityLabel {
    #[inline]
    pub fn is_stable(self) -> bool {
        self != StabilityLabel::Unstable
    }
}

/// `2E(k) - K(k)`, proportional to the axis abscissa after one full period.
pub fn closure_gap(k: f64) -> Result<f64> {
    let m = Modulus::new(k)?;
    Ok(2.0 * m.complete_e() - m.complete_k())
}

/// Root of `closure_gap` on `(0.86, 0.95)` by bisection.
pub fn compute_k_c() -> f64 {
    let (mut lo, mut hi) = (0.86, 0.95);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if closure_gap(mid).unwrap() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Classifies the segment `[s0, s0 + l]` of an equal-tangent shape.
///
/// Interior inflections are counted; endpoints never count. A full-period
/// segment is `StableTwoInflection` even when both ends sit on inflections
/// (one interior inflection), the limiting shape between the two families.
pub fn classify_stability(p: &ElasticaParams, l: f64) -> StabilityLabel {
    let lt = p.l_tilde();
    let n = p.inflections(l).len();
    if n >= 3 {
        StabilityLabel::Unstable
    } else if (l - lt).abs() <= 1e-9 * lt {
        StabilityLabel::StableTwoInflection
    } else if l < lt && n == 1 {
        StabilityLabel::StableOneInflection
    } else {
        StabilityLabel::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    Inner,
    Outer,
    Infeasible,
}

/// Sampled boundary curves of the stable endpoint regions, with the start
/// frame at the origin and zero start angle.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRegions {
    pub length: f64,
    pub rho_flat: f64,
    pub k_c: f64,
    /// Maximal flattening, `k` from 0 to `k_c`, upper and lower phase choice.
    pub alpha_upper: Vec<Vec2>,
    pub alpha_lower: Vec<Vec2>,
    /// `k = k_c`, full period from `L/rho` down to `L`.
    pub beta_upper: Vec<Vec2>,
    pub beta_lower: Vec<Vec2>,
    /// Full-period shapes starting on an inflection, `k` from 0 to `k_c`.
    pub gamma_upper: Vec<Vec2>,
    pub gamma_lower: Vec<Vec2>,
    outer: Vec<Vec2>,
    inner: Vec<Vec2>,
}

fn endpoint(k: f64, s0: f64, lt: f64, l: f64) -> Vec2 {
    ElasticaParams::new(k, s0, lt).map(|p| p.relative_endpoint(l)).unwrap_or(Vec2::ZERO)
}

/// Samples each curve piece with `n` points.
pub fn build_stability_regions(l: f64, rho_flat: f64, n: usize) -> Result<StabilityRegions> {
    if !(rho_flat > 0.0 && rho_flat < 1.0) || !(l > 0.0) {
        return Err(Error::InvalidParams("need L > 0 and 0 < rho < 1"));
    }
    let n = n.max(2);
    let t = |i: usize| i as f64 / (n - 1) as f64;
    let lt_max = l / rho_flat;
    let up = |lt: f64| 0.75 * lt - 0.5 * l;
    let lo = |lt: f64| 1.25 * lt - 0.5 * l;
    let mut alpha_upper = Vec::with_capacity(n);
    let mut alpha_lower = Vec::with_capacity(n);
    let mut gamma_upper = Vec::with_capacity(n);
    let mut gamma_lower = Vec::with_capacity(n);
    for i in 0..n {
        let k = K_C * t(i);
        alpha_upper.push(endpoint(k, up(lt_max), lt_max, l));
        alpha_lower.push(endpoint(k, lo(lt_max), lt_max, l));
        gamma_upper.push(endpoint(k, 0.25 * l, l, l));
        gamma_lower.push(endpoint(k, 0.75 * l, l, l));
    }
    let mut beta_upper = Vec::with_capacity(n);
    let mut beta_lower = Vec::with_capacity(n);
    for i in 0..n {
        let lt = lt_max + (l - lt_max) * t(i);
        beta_upper.push(endpoint(K_C, up(lt), lt, l));
        beta_lower.push(endpoint(K_C, lo(lt), lt, l));
    }
    let mut outer = alpha_upper.clone();
    outer.extend_from_slice(&beta_upper[1..]);
    outer.extend(beta_lower.iter().rev().skip(1));
    outer.extend(alpha_lower.iter().rev().skip(1));
    let mut inner = gamma_upper.clone();
    inner.extend(gamma_lower.iter().rev().skip(1));
    Ok(StabilityRegions {
        length: l,
        rho_flat,
        k_c: K_C,
        alpha_upper,
        alpha_lower,
        beta_upper,
        beta_lower,
        gamma_upper,
        gamma_lower,
        outer,
        inner,
    })
}

fn ring_distance(ring: &[Vec2], p: Vec2) -> f64 {
    ring.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

fn ring_contains(ring: &[Vec2], p: Vec2) -> bool {
    let mut inside = false;
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

impl StabilityRegions {
    /// Closed boundary of the outer region (alpha and beta pieces).
    pub fn outer_loop(&self) -> &[Vec2] {
        &self.outer
    }

    /// Closed boundary of the inner region (gamma pieces).
    pub fn inner_loop(&self) -> &[Vec2] {
        &self.inner
    }

    /// Distance from `p` to the nearest region boundary.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        ring_distance(&self.inner, p).min(ring_distance(&self.outer, p))
    }

    /// Points on gamma are `Inner`, points on alpha or beta are `Outer`; the
    /// straight-cable point `(L, 0)` shared by all curves is `Outer`.
    pub fn classify(&self, p: Vec2) -> RegionLabel {
        let tol = 1e-9 * self.length;
        if p.dist(Vec2::new(self.length, 0.0)) <= tol {
            return RegionLabel::Outer;
        }
        if ring_distance(&self.inner, p) <= tol {
            return RegionLabel::Inner;
        }
        if ring_distance(&self.outer, p) <= tol {
            return RegionLabel::Outer;
        }
        if ring_contains(&self.inner, p) {
            RegionLabel::Inner
        } else if ring_contains(&self.outer, p) {
            RegionLabel::Outer
        } else {
            RegionLabel::Infeasible
        }
    }
}

/// One-shot classification with freshly sampled regions.
pub fn in_stable_region(p: Vec2, l: f64, rho_flat: f64) -> Result<RegionLabel> {
    Ok(build_stability_regions(l, rho_flat, 400)?.classify(p))
}

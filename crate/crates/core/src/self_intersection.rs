//! Self-intersection of elastica segments.
//!
//! Below `K_MAX` no segment of length at most one period can cross itself.
//! Above it, crossings occur in pairs of arc-length positions placed
//! symmetrically by `s_int` about each curvature extremum; a segment is
//! self-intersecting iff it contains such a pair.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::elastica::{canonical_abscissa, ElasticaParams};
use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::geometry::{segments_intersect, Aabb, Vec2};
use crate::num::rem_euclid;
use crate::stability::K_C;

/// Largest modulus for which fold points on opposite lobes stay apart.
pub const K_MAX: f64 = 0.855_092_407_720_366_5;

const BISECT_ITERS: usize = 40;

/// Modulus bands: `[0, K_MAX)`, `[K_MAX, K_C)`, `[K_C, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusRegion {
    Region1,
    Region2,
    Region3,
}

impl ModulusRegion {
    pub fn of(k: f64) -> Self {
        if k < K_MAX {
            ModulusRegion::Region1
        } else if k < K_C {
            ModulusRegion::Region2
        } else {
            ModulusRegion::Region3
        }
    }
}

fn fold_amplitude(k: f64) -> f64 {
    libm::asin((1.0 / (SQRT_2 * k)).min(1.0))
}

/// `(2E(psi) - F(psi)) - (4E - 2K)` with `psi = asin(1/(sqrt(2) k))`: the
/// fold-point abscissa minus the half-period abscissa, scaled by `sqrt(lambda)`.
pub fn fold_gap(k: f64) -> Result<f64> {
    if k < FRAC_1_SQRT_2 {
        return Err(Error::NoFoldPoint);
    }
    let m = Modulus::new(k)?;
    let psi = fold_amplitude(k);
    Ok(2.0 * m.e(psi) - m.f(psi) - (4.0 * m.complete_e() - 2.0 * m.complete_k()))
}

/// Root of `fold_gap` on `[1/sqrt(2), 0.95]` by bisection.
pub fn compute_k_max() -> f64 {
    let (mut lo, mut hi) = (FRAC_1_SQRT_2, 0.95);
    let mut flo = fold_gap(lo).unwrap();
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let fm = fold_gap(mid).unwrap();
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Arc length from a curvature extremum to the first fold point, where the
/// tangent is perpendicular to the axis.
pub fn s_fold(k: f64, lambda: f64) -> Result<f64> {
    if !(k > FRAC_1_SQRT_2) {
        return Err(Error::NoFoldPoint);
    }
    let m = Modulus::new(k)?;
    Ok(m.f(fold_amplitude(k)) / libm::sqrt(lambda))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, eps: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa.abs() <= eps {
        return Ok(a);
    }
    if fb.abs() <= eps {
        return Ok(b);
    }
    if (fa < 0.0) == (fb < 0.0) {
        return Err(Error::BracketFailure);
    }
    for _ in 0..BISECT_ITERS {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a <= eps {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Half-width of the crossing pairs, `None` in Region 1.
pub fn get_s_int(k: f64, l_tilde: f64, eps: f64) -> Result<Option<f64>> {
    let m = Modulus::new(k)?;
    let region = ModulusRegion::of(k);
    if region == ModulusRegion::Region1 {
        return Ok(None);
    }
    let sl = 4.0 * m.complete_k() / l_tilde;
    let fold = s_fold(k, sl * sl)?;
    let x = |s: f64| canonical_abscissa(&m, sl, s);
    let q = 0.25 * l_tilde;
    let root = match region {
        ModulusRegion::Region2 => bisect(x, q, 0.5 * l_tilde - fold, eps)?,
        _ => bisect(x, fold, q, eps)?,
    };
    Ok(Some(root))
}

/// Default bisection tolerance for a period of `l_tilde`.
#[inline]
pub fn default_eps(l_tilde: f64) -> f64 {
    1e-9 * l_tilde
}

// Smallest n >= 0 with n * l_tilde / 2 - s_int >= s0.
fn first_pair(l_tilde: f64, s0: f64, s_int: f64) -> f64 {
    libm::ceil((s0 + s_int) / (0.5 * l_tilde)).max(0.0)
}

/// True iff the segment `[s0, s0 + l]` of the elastica crosses itself.
pub fn check_self_intersection(k: f64, l_tilde: f64, s0: f64, l: f64, eps: f64) -> Result<bool> {
    if k <= K_MAX {
        Modulus::new(k)?;
        return Ok(false);
    }
    let Some(s_int) = get_s_int(k, l_tilde, eps)? else {
        return Ok(false);
    };
    let s0 = rem_euclid(s0, l_tilde);
    let n = first_pair(l_tilde, s0, s_int);
    Ok(s0 + l >= n * 0.5 * l_tilde + s_int)
}

/// Arc-length distance of the segment ends to the nearest crossing-pair
/// threshold; `None` in Region 1.
pub fn tangency_margin(k: f64, l_tilde: f64, s0: f64, l: f64, eps: f64) -> Result<Option<f64>> {
    let Some(s_int) = get_s_int(k, l_tilde, eps)? else {
        return Ok(None);
    };
    let s0 = rem_euclid(s0, l_tilde);
    let half = 0.5 * l_tilde;
    let mut best = f64::INFINITY;
    for n in 0..6 {
        let c = n as f64 * half;
        best = best.min((s0 - (c - s_int)).abs()).min((s0 + l - (c + s_int)).abs());
    }
    Ok(Some(best))
}

/// Polyline oracle: samples the segment and tests all non-adjacent pieces.
pub fn brute_force_self_intersection(k: f64, l_tilde: f64, s0: f64, l: f64, n_samples: usize) -> Result<bool> {
    let p = ElasticaParams::new(k, s0, l_tilde)?;
    let pts = p.sample(&crate::elastica::BaseFrame::ORIGIN, l, n_samples.max(512));
    Ok(polyline_self_intersects(&pts))
}

/// Sweep over segment boxes sorted by their left edge.
pub fn polyline_self_intersects(pts: &[Vec2]) -> bool {
    let n = pts.len().saturating_sub(1);
    let mut segs: Vec<(usize, Aabb)> = (0..n).map(|i| (i, Aabb::from_points(&pts[i..i + 2]))).collect();
    segs.sort_by(|a, b| a.1.min.x.total_cmp(&b.1.min.x));
    for (a, &(i, ba)) in segs.iter().enumerate() {
        for &(j, bb) in &segs[a + 1..] {
            if bb.min.x > ba.max.x {
                break;
            }
            if i.abs_diff(j) < 2 || !ba.overlaps(&bb) {
                continue;
            }
            if segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                return true;
            }
        }
    }
    false
}

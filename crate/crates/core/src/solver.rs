//! Inverse shape problem: find `(k, s0, L~)` placing the cable end at a given
//! relative position with a given tangent change.

use alloc::vec::Vec;

use crate::elastica::{ElasticaParams, Triplet};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vec2};
use crate::grid::EndpointGrid;
use crate::stability::K_C;

/// Relative endpoint target, start frame at the origin with zero tangent angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointConstraint {
    pub xl: f64,
    pub yl: f64,
    pub delta_phi: f64,
    pub length: f64,
}

impl EndpointConstraint {
    /// Equal end tangents.
    pub fn new(xl: f64, yl: f64, length: f64) -> Result<Self> {
        Self::with_delta_phi(xl, yl, 0.0, length)
    }

    pub fn with_delta_phi(xl: f64, yl: f64, delta_phi: f64, length: f64) -> Result<Self> {
        if !(length > 0.0) || !xl.is_finite() || !yl.is_finite() || !delta_phi.is_finite() {
            return Err(Error::InvalidParams("invalid endpoint constraint"));
        }
        if libm::hypot(xl, yl) > length * (1.0 + 1e-12) {
            return Err(Error::Unreachable);
        }
        Ok(EndpointConstraint { xl, yl, delta_phi, length })
    }

    #[inline]
    pub fn target(&self) -> Vec2 {
        Vec2::new(self.xl, self.yl)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rho_flat: f64,
    pub k_cap: f64,
    /// Position tolerance relative to `L`.
    pub tol_pos: f64,
    pub tol_ang: f64,
    pub max_iter: usize,
}

impl SolverOptions {
    pub fn new(rho_flat: f64) -> Self {
        SolverOptions { rho_flat, k_cap: K_C, tol_pos: 1e-8, tol_ang: 1e-8, max_iter: 60 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub params: ElasticaParams,
    pub iterations: usize,
    pub residual: [f64; 3],
}

const K_ITER_MAX: f64 = 0.999;

/// `(k, s0, L~)` with negative `k` folded onto the half-period shift.
fn normalize(x: [f64; 3]) -> [f64; 3] {
    if x[0] < 0.0 {
        [-x[0], x[1] + 0.5 * x[2], x[2]]
    } else {
        x
    }
}

fn residual(c: &EndpointConstraint, x: [f64; 3]) -> Result<[f64; 3]> {
    let [k, s0, lt] = normalize(x);
    let p = ElasticaParams::new(k, s0, lt)?;
    let e = p.relative_endpoint(c.length);
    Ok([
        (e.x - c.xl) / c.length,
        (e.y - c.yl) / c.length,
        wrap_angle(p.tangent_change(c.length) - c.delta_phi),
    ])
}

fn norm3(r: &[f64; 3]) -> f64 {
    libm::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for j in col..3 {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn jacobian(c: &EndpointConstraint, x: [f64; 3]) -> Result<[[f64; 3]; 3]> {
    let scales = [1.0, x[2], x[2]];
    let mut j = [[0.0; 3]; 3];
    for v in 0..3 {
        let h = 1e-6 * scales[v];
        let (mut xp, mut xm) = (x, x);
        xp[v] += h;
        xm[v] -= h;
        let (rp, rm) = (residual(c, xp)?, residual(c, xm)?);
        for r in 0..3 {
            j[r][v] = (rp[r] - rm[r]) / (2.0 * h);
        }
    }
    Ok(j)
}

fn converged(r: &[f64; 3], o: &SolverOptions) -> bool {
    r[0].abs() < o.tol_pos && r[1].abs() < o.tol_pos && r[2].abs() < o.tol_ang
}

fn in_family(p: &ElasticaParams, l: f64, o: &SolverOptions) -> bool {
    let lt = p.l_tilde();
    p.k() <= o.k_cap + 1e-9 && lt >= l * (1.0 - 1e-9) && lt <= l / o.rho_flat * (1.0 + 1e-9)
}

/// Least-squares step on the free variables with Levenberg damping `mu`.
fn damped_step(j: &[[f64; 3]; 3], r: &[f64; 3], mu: f64, free: [bool; 3]) -> Option<[f64; 3]> {
    let mut jtj = [[0.0; 3]; 3];
    let mut jtr = [0.0; 3];
    for a in 0..3 {
        for b in 0..3 {
            jtj[a][b] = (0..3).map(|i| j[i][a] * j[i][b]).sum();
        }
        jtr[a] = -(0..3).map(|i| j[i][a] * r[i]).sum::<f64>();
        jtj[a][a] += mu * (1.0 + jtj[a][a]);
    }
    for v in 0..3 {
        if !free[v] {
            for w in 0..3 {
                jtj[v][w] = 0.0;
                jtj[w][v] = 0.0;
            }
            jtj[v][v] = 1.0;
            jtr[v] = 0.0;
        }
    }
    solve3(jtj, jtr)
}

fn iterate(c: &EndpointConstraint, seed: [f64; 3], o: &SolverOptions, bounded: bool) -> Result<Solution> {
    let l = c.length;
    let (lo, hi) = (l, l / o.rho_flat);
    let project = |x: [f64; 3]| {
        let k = x[0].clamp(-K_ITER_MAX, K_ITER_MAX);
        let lt = if bounded { x[2].clamp(lo, hi) } else { x[2].max(0.25 * l) };
        [k, x[1], lt]
    };
    let mut x = project(seed);
    let mut r = residual(c, x)?;
    let mut mu = 0.0;
    for it in 0..=o.max_iter {
        if converged(&r, o) {
            let [k, s0, lt] = normalize(x);
            let params = ElasticaParams::new(k, s0, lt)?;
            if !in_family(&params, l, o) {
                return Err(Error::OutOfFamily);
            }
            return Ok(Solution { params, iterations: it, residual: r });
        }
        if it == o.max_iter {
            break;
        }
        let j = jacobian(c, x)?;
        let rn = norm3(&r);
        let mut d = if mu == 0.0 { solve3(j, [-r[0], -r[1], -r[2]]) } else { None };
        if bounded {
            let at_lo = x[2] <= lo && d.map_or(true, |d| d[2] < 0.0);
            let at_hi = x[2] >= hi && d.map_or(true, |d| d[2] > 0.0);
            if at_lo || at_hi {
                d = damped_step(&j, &r, mu, [true, true, false]);
            }
        }
        let free = [true, true, !(bounded && (x[2] <= lo || x[2] >= hi))];
        let mut accepted = false;
        for attempt in 0..3 {
            let step = match d {
                Some(d) => d,
                None => {
                    mu = if mu == 0.0 { 1e-6 } else { mu };
                    match damped_step(&j, &r, mu, free) {
                        Some(d) => d,
                        None => break,
                    }
                }
            };
            let mut alpha = 1.0;
            for _ in 0..30 {
                let xn = project([x[0] + alpha * step[0], x[1] + alpha * step[1], x[2] + alpha * step[2]]);
                if let Ok(rt) = residual(c, xn) {
                    if norm3(&rt) < rn {
                        x = xn;
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if accepted {
                mu *= 0.1;
                if mu < 1e-12 {
                    mu = 0.0;
                }
                break;
            }
            if attempt < 2 {
                d = None;
                mu = if mu == 0.0 { 1e-3 } else { mu * 100.0 };
            }
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it, residual: rn });
        }
    }
    Err(Error::NoConvergence { iterations: o.max_iter, residual: norm3(&r) })
}

/// Damped Newton iteration from `seed`. A free run that lands outside the
/// family is repeated with `L~` held inside `[L, L/rho]`.
pub fn solve_boundary_value(c: &EndpointConstraint, seed: &ElasticaParams, o: &SolverOptions) -> Result<Solution> {
    let l = c.length;
    let reach = libm::hypot(c.xl, c.yl);
    if reach > l * (1.0 + 1e-12) {
        return Err(Error::Unreachable);
    }
    if reach >= l * (1.0 - 1e-12) {
        if c.yl.abs() > 1e-9 * l || c.xl < 0.0 || wrap_angle(c.delta_phi).abs() > o.tol_ang {
            return Err(Error::Unreachable);
        }
        let lt = seed.l_tilde().clamp(l, l / o.rho_flat);
        let params = ElasticaParams::new(0.0, seed.s0(), lt)?;
        return Ok(Solution { params, iterations: 0, residual: residual(c, [0.0, seed.s0(), lt])? });
    }
    let x0 = [seed.k(), seed.s0(), seed.l_tilde()];
    let first = match iterate(c, x0, o, false) {
        Ok(s) => return Ok(s),
        Err(e) => e,
    };
    if let Ok(s) = iterate(c, x0, o, true) {
        return Ok(s);
    }
    continuation(c, seed, o).map_err(|e| if first == Error::OutOfFamily { first } else { e })
}

/// Tracks the solution while the target moves from the seed's own endpoint
/// to `c`, halving the step on failure.
fn continuation(c: &EndpointConstraint, seed: &ElasticaParams, o: &SolverOptions) -> Result<Solution> {
    let l = c.length;
    let start = seed.relative_endpoint(l);
    let dphi0 = seed.tangent_change(l);
    let dphi1 = dphi0 + wrap_angle(c.delta_phi - dphi0);
    let mut x = [seed.k(), seed.s0(), seed.l_tilde()];
    let (mut t, mut h) = (0.0f64, 0.125f64);
    let mut total = 0;
    while t < 1.0 {
        let tn = (t + h).min(1.0);
        let target = start.lerp(c.target(), tn);
        let ci = EndpointConstraint { xl: target.x, yl: target.y, delta_phi: dphi0 + (dphi1 - dphi0) * tn, length: l };
        let loose = SolverOptions { k_cap: 1.0, rho_flat: o.rho_flat * 0.5, ..*o };
        match iterate(&ci, x, if tn < 1.0 { &loose } else { o }, false) {
            Ok(s) => {
                total += s.iterations;
                x = [s.params.k(), s.params.s0(), s.params.l_tilde()];
                t = tn;
                if tn >= 1.0 {
                    return Ok(Solution { iterations: total, ..s });
                }
                h = (h * 2.0).min(0.25);
            }
            Err(Error::OutOfFamily) if tn >= 1.0 => return Err(Error::OutOfFamily),
            Err(e) => {
                h *= 0.5;
                if h < 1e-3 {
                    return Err(e);
                }
            }
        }
    }
    Err(Error::NoConvergence { iterations: total, residual: f64::NAN })
}

fn param_distance(a: &ElasticaParams, b: &ElasticaParams) -> f64 {
    if a.k() < 1e-9 && b.k() < 1e-9 {
        return 0.0;
    }
    let lt = a.l_tilde().max(b.l_tilde());
    let ds = crate::num::rem_euclid(a.s0() - b.s0() + 0.5 * lt, lt) - 0.5 * lt;
    let d = [a.k() - b.k(), ds / lt, (a.l_tilde() - b.l_tilde()) / lt];
    norm3(&d)
}

/// Solves from every triplet stored in the bin containing the target and in
/// its eight neighbours, keeping distinct converged solutions.
pub fn solve_with_multistart(c: &EndpointConstraint, grid: &EndpointGrid, o: &SolverOptions) -> Result<Vec<ElasticaParams>> {
    let (ix, iy) = grid.bin_of(c.target())?;
    if !grid.cell(ix, iy).is_feasible() {
        return Err(Error::EmptyCell);
    }
    let n = grid.n() as isize;
    let mut seeds: Vec<Triplet> = Vec::new();
    for dy in -1..=1isize {
        for dx in -1..=1isize {
            let (x, y) = (ix as isize + dx, iy as isize + dy);
            if x < 0 || y < 0 || x >= n || y >= n {
                continue;
            }
            seeds.extend_from_slice(grid.cell(x as usize, y as usize).triplets());
        }
    }
    let mut out: Vec<ElasticaParams> = Vec::new();
    for t in seeds {
        let seed = ElasticaParams::from_triplet(t)?;
        if let Ok(sol) = solve_boundary_value(c, &seed, o) {
            if out.iter().all(|p| param_distance(p, &sol.params) > 1e-4) {
                out.push(sol.params);
            }
        }
    }
    Ok(out)
}

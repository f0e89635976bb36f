//! Closed-form inflectional elastica.
//!
//! A shape is fixed by the triplet `(k, s0, l_tilde)`: modulus, phase offset
//! along the periodic curve and full period length. With `sqrt(lambda) =
//! 4K(k)/l_tilde` the curvature is `-2 k sqrt(lambda) cn(sqrt(lambda)(s + s0))`.

use alloc::vec::Vec;

use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vec2};
use crate::num::sq;

/// Parameter triplet as stored in grids and files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triplet {
    pub k: f64,
    pub s0: f64,
    pub l_tilde: f64,
}

impl Triplet {
    pub const fn new(k: f64, s0: f64, l_tilde: f64) -> Self {
        Triplet { k, s0, l_tilde }
    }
}

/// Cable start pose: position and start tangent angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseFrame {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl BaseFrame {
    pub const ORIGIN: BaseFrame = BaseFrame { x: 0.0, y: 0.0, phi: 0.0 };

    /// The angle is wrapped into (-pi, pi].
    pub fn new(x: f64, y: f64, phi: f64) -> Self {
        BaseFrame { x, y, phi: wrap_angle(phi) }
    }

    #[inline]
    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Maps a point given in this frame to the world.
    #[inline]
    pub fn to_world(&self, local: Vec2) -> Vec2 {
        self.position() + local.rotate(self.phi)
    }

    /// Inverse of [`BaseFrame::to_world`].
    #[inline]
    pub fn to_local(&self, world: Vec2) -> Vec2 {
        (world - self.position()).rotate(-self.phi)
    }
}

/// Physical cable data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableSpec {
    pub length: f64,
    pub ei: f64,
    pub rho_flat: f64,
}

impl CableSpec {
    pub fn new(length: f64, ei: f64, rho_flat: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidParams("cable length must be positive"));
        }
        if !(ei > 0.0) {
            return Err(Error::InvalidParams("stiffness must be positive"));
        }
        if !(rho_flat > 0.0 && rho_flat < 1.0) {
            return Err(Error::InvalidParams("flattening ratio must lie in (0, 1)"));
        }
        Ok(CableSpec { length, ei, rho_flat })
    }

    /// Longest admissible full period, `L / rho`.
    #[inline]
    pub fn max_l_tilde(&self) -> f64 {
        self.length / self.rho_flat
    }
}

/// Validated elastica parameters with cached derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticaParams {
    k: f64,
    s0: f64,
    l_tilde: f64,
    modulus: Modulus,
    sqrt_lambda: f64,
    sn0: f64,
    cn0: f64,
    g0: f64,
}

impl ElasticaParams {
    /// `s0` is reduced modulo `l_tilde`.
    pub fn new(k: f64, s0: f64, l_tilde: f64) -> Result<Self> {
        let modulus = Modulus::new(k)?;
        if !(l_tilde > 0.0 && l_tilde.is_finite()) {
            return Err(Error::InvalidParams("full period must be positive"));
        }
        if !s0.is_finite() {
            return Err(Error::InvalidParams("phase must be finite"));
        }
        let mut s0 = crate::num::rem_euclid(s0, l_tilde);
        if s0 >= l_tilde {
            s0 = 0.0;
        }
        let sqrt_lambda = 4.0 * modulus.complete_k() / l_tilde;
        let u0 = sqrt_lambda * s0;
        let am0 = modulus.am(u0);
        let g0 = modulus.e(am0) - modulus.kp() * modulus.kp() * u0;
        Ok(ElasticaParams {
            k,
            s0,
            l_tilde,
            modulus,
            sqrt_lambda,
            sn0: libm::sin(am0),
            cn0: libm::cos(am0),
            g0,
        })
    }

    pub fn from_triplet(t: Triplet) -> Result<Self> {
        Self::new(t.k, t.s0, t.l_tilde)
    }

    pub fn triplet(&self) -> Triplet {
        Triplet::new(self.k, self.s0, self.l_tilde)
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn s0(&self) -> f64 {
        self.s0
    }

    #[inline]
    pub fn l_tilde(&self) -> f64 {
        self.l_tilde
    }

    #[inline]
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    #[inline]
    pub fn sqrt_lambda(&self) -> f64 {
        self.sqrt_lambda
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.sqrt_lambda * self.sqrt_lambda
    }

    /// Half the peak-to-peak height of the curve about its axis, `2k/sqrt(lambda)`.
    #[inline]
    pub fn amplitude(&self) -> f64 {
        2.0 * self.k / self.sqrt_lambda
    }

    /// `1 - 2k^2`.
    #[inline]
    pub fn sigma(&self) -> f64 {
        1.0 - 2.0 * self.k * self.k
    }

    /// Hamiltonian value `lambda_r * sigma` for stiffness `ei`.
    #[inline]
    pub fn h_star(&self, ei: f64) -> f64 {
        ei * self.lambda() * self.sigma()
    }

    #[inline]
    fn u(&self, s: f64) -> f64 {
        self.sqrt_lambda * (s + self.s0)
    }

    pub fn curvature(&self, s: f64) -> f64 {
        let (_, cn, _) = self.modulus.sn_cn_dn(self.u(s));
        -2.0 * self.k * self.sqrt_lambda * cn
    }

    pub fn curvature_derivative(&self, s: f64) -> f64 {
        let (sn, _, dn) = self.modulus.sn_cn_dn(self.u(s));
        2.0 * self.k * self.lambda() * sn * dn
    }

    /// Angle of the curve axis.
    pub fn axis_angle(&self, base: &BaseFrame) -> f64 {
        base.phi + 2.0 * libm::asin(self.k * self.sn0)
    }

    pub fn tangent_angle(&self, s: f64, base: &BaseFrame) -> f64 {
        let (sn, _, _) = self.modulus.sn_cn_dn(self.u(s));
        self.axis_angle(base) - 2.0 * libm::asin(self.k * sn)
    }

    /// `phi(l) - phi(0)`.
    pub fn tangent_change(&self, l: f64) -> f64 {
        let (sn, _, _) = self.modulus.sn_cn_dn(self.u(l));
        2.0 * (libm::asin(self.k * self.sn0) - libm::asin(self.k * sn))
    }

    // Coordinates of the point at arc length s relative to the start, in the
    // axis-aligned frame (along axis, across axis).
    fn axis_offset(&self, s: f64) -> (f64, f64) {
        let u = self.u(s);
        let am = self.modulus.am(u);
        let kp2 = self.modulus.kp() * self.modulus.kp();
        let g = self.modulus.e(am) - kp2 * u;
        let along = 2.0 / self.sqrt_lambda * (g - self.g0) + self.sigma() * s;
        let across = 2.0 * self.k / self.sqrt_lambda * (self.cn0 - libm::cos(am));
        (along, across)
    }

    pub fn point(&self, s: f64, base: &BaseFrame) -> Vec2 {
        let (a, b) = self.axis_offset(s);
        let phi0 = self.axis_angle(base);
        let (sn, cs) = (libm::sin(phi0), libm::cos(phi0));
        Vec2::new(base.x + cs * a + sn * b, base.y + sn * a - cs * b)
    }

    /// Endpoint at `l` for the base frame at the origin with zero start angle.
    pub fn relative_endpoint(&self, l: f64) -> Vec2 {
        self.point(l, &BaseFrame::ORIGIN)
    }

    /// `n >= 2` points evenly spaced in arc length over `[0, l]`.
    pub fn sample(&self, base: &BaseFrame, l: f64, n: usize) -> Vec<Vec2> {
        let n = n.max(2);
        (0..n)
            .map(|i| self.point(l * i as f64 / (n - 1) as f64, base))
            .collect()
    }

    /// Relative deviation of the first integral from its constant value.
    pub fn hamiltonian_residual(&self, s: f64, ei: f64) -> f64 {
        hamiltonian_residual_from(self.curvature(s), self.curvature_derivative(s), self.lambda(), self.sigma(), ei)
    }

    /// Projection onto the axis of the canonical curve started at a
    /// curvature extremum.
    pub fn axis_abscissa(&self, sbar: f64) -> f64 {
        canonical_abscissa(&self.modulus, self.sqrt_lambda, sbar)
    }

    /// Arc-length positions in `(0, l)` of the inflection points.
    pub fn inflections(&self, l: f64) -> Vec<f64> {
        let half = 0.5 * self.l_tilde;
        let tol = 1e-12 * self.l_tilde;
        let mut out = Vec::new();
        let mut s = 0.25 * self.l_tilde - self.s0;
        while s <= tol {
            s += half;
        }
        while s < l - tol {
            out.push(s);
            s += half;
        }
        out
    }
}

/// `|LHS - lambda_r^2| / lambda_r^2` for the first integral
/// `(EI kappa^2/2 + lambda_r sigma)^2 + (EI kappa')^2 = lambda_r^2`.
pub fn hamiltonian_residual_from(kappa: f64, dkappa: f64, lambda: f64, sigma: f64, ei: f64) -> f64 {
    let lr = ei * lambda;
    let lhs = sq(0.5 * ei * kappa * kappa + lr * sigma) + sq(ei * dkappa);
    (lhs - lr * lr).abs() / (lr * lr)
}

/// `(2/sqrt(lambda)) E(am(sqrt(lambda) s)) - s`.
pub fn canonical_abscissa(modulus: &Modulus, sqrt_lambda: f64, s: f64) -> f64 {
    2.0 / sqrt_lambda * modulus.e(modulus.am(sqrt_lambda * s)) - s
}

/// Relative endpoint `(X_L, Y_L)` of the triplet for a cable of length `l`.
pub fn relative_endpoint(k: f64, s0: f64, l_tilde: f64, l: f64) -> Result<Vec2> {
    Ok(ElasticaParams::new(k, s0, l_tilde)?.relative_endpoint(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;
    use proptest::prelude::*;

    // Independent shooting oracle: the pendulum equation theta'' = -lambda sin(theta)
    // for the angle relative to the axis, with position integrated alongside.
    struct Shot {
        pos: Vec2,
        phi: f64,
        kappa: f64,
    }

    fn shoot(p: &ElasticaParams, base: &BaseFrame, s_end: f64, steps: usize) -> Shot {
        let lam = p.lambda();
        let phi0 = p.axis_angle(base);
        let deriv = |y: [f64; 4]| -> [f64; 4] {
            let phi = phi0 + y[2];
            [libm::cos(phi), libm::sin(phi), y[3], -lam * libm::sin(y[2])]
        };
        let mut y = [base.x, base.y, base.phi - phi0, p.curvature(0.0)];
        let h = s_end / steps as f64;
        for _ in 0..steps {
            let add = |a: [f64; 4], b: [f64; 4], t: f64| [a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2], a[3] + t * b[3]];
            let k1 = deriv(y);
            let k2 = deriv(add(y, k1, 0.5 * h));
            let k3 = deriv(add(y, k2, 0.5 * h));
            let k4 = deriv(add(y, k3, h));
            for i in 0..4 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        Shot { pos: Vec2::new(y[0], y[1]), phi: phi0 + y[2], kappa: y[3] }
    }

    #[test]
    fn validates_inputs() {
        assert!(ElasticaParams::new(1.0, 0.0, 1.0).is_err());
        assert!(ElasticaParams::new(0.5, 0.0, 0.0).is_err());
        let p = ElasticaParams::new(0.5, 2.3, 1.0).unwrap();
        assert!((p.s0() - 0.3).abs() < 1e-12);
        let p = ElasticaParams::new(0.5, -0.25, 1.0).unwrap();
        assert!((p.s0() - 0.75).abs() < 1e-12);
        assert!(CableSpec::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = ElasticaParams::new(0.7, 0.1, 1.3).unwrap();
        assert!((p.sqrt_lambda() * p.l_tilde() - 4.0 * p.modulus().complete_k()).abs() < 1e-14);
        assert!((p.amplitude() * p.sqrt_lambda() - 1.4).abs() < 1e-14);
        assert!((p.k() * p.k() - (1.0 - p.sigma()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn curvature_reference_values() {
        let p = ElasticaParams::new(0.6, 0.2, 1.0).unwrap();
        assert!(p.curvature(0.05).abs() < 1e-12);
        assert!((p.curvature(0.8) + 2.0 * 0.6 * p.sqrt_lambda()).abs() < 1e-12);
        let p = ElasticaParams::new(0.671, 0.0, 1.0).unwrap();
        let shot = shoot(&p, &BaseFrame::ORIGIN, 0.3, 3000);
        assert!((p.curvature(0.3) - shot.kappa).abs() < 1e-9);
    }

    #[test]
    fn tangent_reference_values() {
        let base = BaseFrame::new(0.2, -0.1, 0.4);
        let p = ElasticaParams::new(0.5, 0.37, 1.1).unwrap();
        assert!((p.tangent_angle(0.0, &base) - 0.4).abs() < 1e-14);
        let s = 0.25 * 1.1 - 0.37 + 1.1;
        assert!((p.tangent_angle(s, &base) - (p.axis_angle(&base) - 2.0 * libm::asin(0.5))).abs() < 1e-12);
        let p = ElasticaParams::new(0.7746, 0.0, 1.0).unwrap();
        let shot = shoot(&p, &BaseFrame::ORIGIN, 0.5, 4000);
        assert!((p.tangent_angle(0.5, &BaseFrame::ORIGIN) - shot.phi).abs() < 1e-9);
    }

    #[test]
    fn point_reference_values() {
        let base = BaseFrame::new(0.3, 0.4, -2.0);
        let p = ElasticaParams::new(0.8, 0.6, 1.7).unwrap();
        let q = p.point(0.0, &base);
        assert!(q.dist(base.position()) < 1e-15);
        let straight = ElasticaParams::new(0.0, 0.3, 1.0).unwrap();
        let end = straight.point(1.0, &base);
        assert!(end.dist(base.position() + Vec2::from_angle(-2.0)) < 1e-14);
        let e = relative_endpoint(0.0, 0.4, 1.0, 1.0).unwrap();
        assert!(e.dist(Vec2::new(1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn relative_endpoint_oracles() {
        let p = ElasticaParams::new(0.671, 0.0, 1.0).unwrap();
        let base = BaseFrame::ORIGIN;
        let phi0 = p.axis_angle(&base);
        let n = Vec2::from_angle(phi0 + FRAC_PI_2);
        let rel_height = n.dot(p.point(1.0, &base) - p.point(0.0, &base));
        assert!(rel_height.abs() < 1e-9);
        let p = ElasticaParams::new(0.5, 0.25, 1.0).unwrap();
        let shot = shoot(&p, &base, 1.0, 4000);
        assert!(p.relative_endpoint(1.0).dist(shot.pos) < 1e-9);
        let q = p.relative_endpoint(1.0);
        assert!((q.x - 0.370_509_803_038_163_6).abs() < 1e-12 && (q.y - 0.641_741_803_564_437).abs() < 1e-12, "{:?}", q);
    }

    #[test]
    fn hamiltonian_identity_and_sensitivity() {
        let p = ElasticaParams::new(0.855, 0.0, 1.0).unwrap();
        assert!(p.hamiltonian_residual(0.0, 1.0) < 1e-8);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let s = i as f64 * 0.02;
            let r = hamiltonian_residual_from(
                1.01 * p.curvature(s),
                1.01 * p.curvature_derivative(s),
                p.lambda(),
                p.sigma(),
                1.0,
            );
            worst = worst.max(r);
        }
        assert!(worst > 1e-3, "perturbed residual {worst}");
    }

    #[test]
    fn abscissa_values() {
        let p = ElasticaParams::new(0.5, 0.0, 1.0).unwrap();
        assert_eq!(p.axis_abscissa(0.0), 0.0);
        // x(L/2) = (1/lambda) int_0^{L/2} kappa^2/2 + sigma L/2 by quadrature.
        let n = 20000;
        let h = 0.5 / n as f64;
        let mut integral = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            let (_, cn, _) = p.modulus().sn_cn_dn(p.sqrt_lambda() * t);
            integral += 2.0 * 0.25 * p.lambda() * cn * cn * h;
        }
        let oracle = integral / p.lambda() + p.sigma() * 0.5;
        assert!((p.axis_abscissa(0.5) - oracle).abs() < 1e-8);
    }

    #[test]
    fn inflection_positions() {
        let p = ElasticaParams::new(0.6, 0.0, 1.0).unwrap();
        let f = p.inflections(1.0);
        assert_eq!(f.len(), 2);
        assert!((f[0] - 0.25).abs() < 1e-15 && (f[1] - 0.75).abs() < 1e-15);
        for &s in &f {
            assert!(p.curvature(s).abs() < 1e-12);
        }
        let p = ElasticaParams::new(0.6, 0.25, 1.0).unwrap();
        assert_eq!(p.inflections(1.0).len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn unit_speed_and_curvature(k in 0.0f64..0.98, s0 in 0.0f64..2.0, lt in 0.5f64..2.5, s in 0.01f64..2.0, phi in -3.0f64..3.0) {
            let p = ElasticaParams::new(k, s0, lt).unwrap();
            let base = BaseFrame::new(0.1, -0.2, phi);
            let h = 1e-5;
            let d = (p.point(s + h, &base) - p.point(s - h, &base)) * (0.5 / h);
            prop_assert!((d.norm() - 1.0).abs() < 1e-7);
            let t = Vec2::from_angle(p.tangent_angle(s, &base));
            prop_assert!((d - t).norm() < 1e-7);
            let dphi = (p.tangent_angle(s + h, &base) - p.tangent_angle(s - h, &base)) / (2.0 * h);
            prop_assert!((dphi - p.curvature(s)).abs() < 1e-6 * p.curvature(s).abs().max(1.0));
        }

        #[test]
        fn first_integral(k in 0.0f64..0.99, s0 in 0.0f64..1.0, lt in 0.5f64..3.0, s in 0.0f64..3.0) {
            let p = ElasticaParams::new(k, s0, lt).unwrap();
            prop_assert!(p.hamiltonian_residual(s, 1.0) < 1e-8);
        }

        #[test]
        fn closed_form_matches_shooting(k in 0.05f64..0.95, s0 in 0.0f64..1.0, lt in 1.0f64..2.0) {
            let p = ElasticaParams::new(k, s0 * lt, lt).unwrap();
            let base = BaseFrame::ORIGIN;
            let shot = shoot(&p, &base, 1.0, 4000);
            prop_assert!(p.point(1.0, &base).dist(shot.pos) < 1e-6);
        }
    }
}

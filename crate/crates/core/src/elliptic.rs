//! Jacobi elliptic functions and Legendre elliptic integrals.
//!
//! Every function takes the *modulus* `k` (not the parameter `m = k^2`).
//! Complete integrals and the amplitude use the arithmetic-geometric mean;
//! incomplete integrals use Carlson's symmetric forms with quasi-periodic
//! reduction of the amplitude.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Largest admissible modulus; the quarter period diverges at `k = 1`.
pub const K_LIMIT: f64 = 1.0 - 1e-12;

const AGM_STEPS: usize = 12;

/// A validated modulus with its cached quarter period and AGM tableau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    kp: f64,
    big_k: f64,
    big_e: f64,
    a: [f64; AGM_STEPS],
    c: [f64; AGM_STEPS],
    steps: usize,
}

impl Modulus {
    /// Accepts `0 <= k < 1 - 1e-12`.
    pub fn new(k: f64) -> Result<Self> {
        if !(k >= 0.0 && k < K_LIMIT) {
            return Err(Error::Domain("modulus must satisfy 0 <= k < 1"));
        }
        let kp = libm::sqrt((1.0 - k) * (1.0 + k));
        let mut a = [0.0; AGM_STEPS];
        let mut c = [0.0; AGM_STEPS];
        a[0] = 1.0;
        c[0] = k;
        let mut b = kp;
        let mut n = 0;
        let mut pow2 = 0.5;
        let mut csum = pow2 * k * k;
        while c[n].abs() > 1e-17 * a[n] && n + 1 < AGM_STEPS {
            let an = a[n];
            a[n + 1] = 0.5 * (an + b);
            c[n + 1] = 0.5 * (an - b);
            b = libm::sqrt(an * b);
            n += 1;
            pow2 *= 2.0;
            csum += pow2 * c[n] * c[n];
        }
        let big_k = FRAC_PI_2 / a[n];
        let big_e = big_k * (1.0 - csum);
        Ok(Modulus { k, kp, big_k, big_e, a, c, steps: n })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Complementary modulus `sqrt(1 - k^2)`.
    #[inline]
    pub fn kp(&self) -> f64 {
        self.kp
    }

    /// Complete integral of the first kind K(k).
    #[inline]
    pub fn complete_k(&self) -> f64 {
        self.big_k
    }

    /// Complete integral of the second kind E(k).
    #[inline]
    pub fn complete_e(&self) -> f64 {
        self.big_e
    }

    /// Amplitude am(u, k), quasi-periodic: am(u + 2K) = am(u) + pi.
    pub fn am(&self, u: f64) -> f64 {
        let n = self.steps;
        let mut phi = libm::ldexp(self.a[n] * u, n as i32);
        for i in (1..=n).rev() {
            phi = 0.5 * (phi + libm::asin(self.c[i] / self.a[i] * libm::sin(phi)));
        }
        phi
    }

    /// Returns (sn, cn, dn) at `u`.
    pub fn sn_cn_dn(&self, u: f64) -> (f64, f64, f64) {
        let phi = self.am(u);
        let (sn, cn) = (libm::sin(phi), libm::cos(phi));
        let dn = libm::sqrt(1.0 - self.k * self.k * sn * sn);
        (sn, cn, dn)
    }

    /// Incomplete integral of the first kind F(phi, k), any real phi.
    pub fn f(&self, phi: f64) -> f64 {
        let (n, r) = reduce(phi);
        let (s, c) = (libm::sin(r), libm::cos(r));
        let base = s * carlson_rf(c * c, 1.0 - self.k * self.k * s * s, 1.0);
        2.0 * n * self.big_k + base
    }

    /// Incomplete integral of the second kind E(phi, k), any real phi.
    pub fn e(&self, phi: f64) -> f64 {
        let (n, r) = reduce(phi);
        let (s, c) = (libm::sin(r), libm::cos(r));
        let k2 = self.k * self.k;
        let (x, y) = (c * c, 1.0 - k2 * s * s);
        let base = s * carlson_rf(x, y, 1.0) - k2 * s * s * s * carlson_rd(x, y, 1.0) / 3.0;
        2.0 * n * self.big_e + base
    }

    /// Smallest `u >= 0` with `sn(u) = x`, for `x` in [0, 1].
    pub fn inverse_sn(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= 1.0) {
            return Err(Error::Domain("inverse_sn needs |x| <= 1"));
        }
        Ok(self.f(libm::asin(x)))
    }
}

fn reduce(phi: f64) -> (f64, f64) {
    let n = libm::round(phi / PI);
    (n, phi - n * PI)
}

/// Carlson's symmetric integral R_F(x, y, z) by duplication.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    loop {
        let (sx, sy, sz) = (libm::sqrt(x), libm::sqrt(y), libm::sqrt(z));
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / libm::sqrt(ave);
        }
    }
}

/// Carlson's symmetric integral R_D(x, y, z) by duplication.
pub fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0005;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (libm::sqrt(x), libm::sqrt(y), libm::sqrt(z));
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = 0.2 * (x + y + 3.0 * z);
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let series = 1.0
                + ed * (-C1 + C5 * ed - C6 * dz * ee)
                + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea));
            return 3.0 * sum + fac * series / (ave * libm::sqrt(ave));
        }
    }
}

/// K(k) for modulus `k`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.complete_k())
}

/// E(k) for modulus `k`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.complete_e())
}

/// F(phi, k) for modulus `k`.
pub fn elliptic_f(phi: f64, k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.f(phi))
}

/// E(phi, k) for modulus `k`.
pub fn elliptic_e_incomplete(phi: f64, k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.e(phi))
}

/// am(u, k) for modulus `k`.
pub fn jacobi_am(u: f64, k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.am(u))
}

/// (sn, cn, dn)(u, k) for modulus `k`.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    Ok(Modulus::new(k)?.sn_cn_dn(u))
}

/// sn^-1(x, k) for modulus `k`.
pub fn inverse_sn(x: f64, k: f64) -> Result<f64> {
    Modulus::new(k)?.inverse_sn(x)
}

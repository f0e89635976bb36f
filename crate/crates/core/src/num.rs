//! Float helpers missing from `core`.

/// Euclidean remainder, result in `[0, b)` for `b > 0`.
#[inline]
pub fn rem_euclid(a: f64, b: f64) -> f64 {
    let r = libm::fmod(a, b);
    if r < 0.0 {
        r + b
    } else {
        r
    }
}

#[inline]
pub fn sq(x: f64) -> f64 {
    x * x
}

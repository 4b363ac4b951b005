/// Standard normal upper tail `Q(x) = P(Z > x)`, via `erfc`.
///
/// Values below `1e-300` are flushed to zero.
pub fn q_function(x: f64) -> f64 {
    let q = 0.5 * libm::erfc(x / std::f64::consts::SQRT_2);
    if q < 1e-300 {
        0.0
    } else {
        q
    }
}

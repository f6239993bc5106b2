use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};

/// Magnitude of `-f_xx - x f - i f_t` at `(x, t)` by central differences
/// with step `h` in both variables.
///
/// `f` returns `None` where the propagator has no value (forbidden region).
pub fn schrodinger_residual<F>(f: F, x: f64, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Option<Complex64>,
{
    require_finite("x", x)?;
    require_positive("t", t)?;
    require_positive("h", h)?;
    if x - h < 0.0 || t - h <= 0.0 {
        return Err(Error::StencilOutOfDomain);
    }
    let at = |xx: f64, tt: f64| f(xx, tt).filter(|v| v.re.is_finite() && v.im.is_finite()).ok_or(Error::StencilOutOfDomain);
    let centre = at(x, t)?;
    let second = (at(x + h, t)? - centre * 2.0 + at(x - h, t)?) / (h * h);
    let rate = (at(x, t + h)? - at(x, t - h)?) / (2.0 * h);
    Ok((-second - centre * x - Complex64::i() * rate).norm())
}

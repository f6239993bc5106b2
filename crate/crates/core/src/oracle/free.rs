use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_finite, Error, Result};

/// Propagator of the linear potential on the whole line (no ceiling).
///
/// Defined for any real `y`, `x` and any `t != 0`.
pub fn free_propagator(y: f64, x: f64, t: f64) -> Result<Complex64> {
    require_finite("y", y)?;
    require_finite("x", x)?;
    require_finite("t", t)?;
    if t == 0.0 {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let phase = (x - y) * (x - y) / (4.0 * t) + (x + y) * t / 2.0 - t * t * t / 12.0;
    let prefactor = Complex64::new(0.0, 4.0 * PI * t).sqrt().inv();
    Ok(prefactor * Complex64::from_polar(1.0, phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_unitary_prefactor() {
        let a = free_propagator(1.0, 3.0, 0.7).unwrap();
        let b = free_propagator(3.0, 1.0, 0.7).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!((a.norm() - (4.0 * PI * 0.7f64).sqrt().recip()).abs() < 1e-15);
        assert!(free_propagator(1.0, 1.0, 0.0).is_err());
    }
}

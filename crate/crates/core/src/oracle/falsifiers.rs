use serde::{Deserialize, Serialize};

use super::{free_propagator, schrodinger_residual};
use crate::error::Result;

const STEP: f64 = 1e-3;

/// Two ways an image-charge construction fails for the linear potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageFalsifiers {
    /// `|U(y -> 0) - U(-y -> 0)|`: the mirrored source does not cancel at the ceiling.
    pub boundary_mismatch: f64,
    /// Residual of `U(y -> -x)`, which solves the equation with the field reversed.
    pub mirrored_residual: f64,
    /// Residual of `U(y -> x)` itself with the same stencil.
    pub baseline_residual: f64,
}

pub fn image_method_falsifiers(y: f64, x: f64, t: f64) -> Result<ImageFalsifiers> {
    let boundary_mismatch = (free_propagator(y, 0.0, t)? - free_propagator(-y, 0.0, t)?).norm();
    let mirrored_residual = schrodinger_residual(|xx, tt| free_propagator(y, -xx, tt).ok(), x, t, STEP)?;
    let baseline_residual = schrodinger_residual(|xx, tt| free_propagator(y, xx, tt).ok(), x, t, STEP)?;
    Ok(ImageFalsifiers { boundary_mismatch, mirrored_residual, baseline_residual })
}

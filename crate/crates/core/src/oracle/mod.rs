//! Independent references used to check the semiclassical formulas.

pub mod airy;
mod falsifiers;
mod free;
mod residual;
mod shooting;
mod spectral;

pub use airy::{airy_eval, AiryPair};
pub use falsifiers::{image_method_falsifiers, ImageFalsifiers};
pub use free::free_propagator;
pub use residual::schrodinger_residual;
pub use shooting::{propagate_launch, shooting_solve_momentum, shooting_solve_position, Launch, ShootingRoot};
pub use spectral::{
    exact_propagator_ceiling, energy_scale, RegulatedValue, SpectralConfig, SpectralEstimate,
};

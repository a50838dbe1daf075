//! Small numerical kernels: central-difference stencils, adaptive Simpson
//! quadrature, monotone/cubic interpolation and a fixed-step RK4.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod stencil;

/// eps^(1/3); classical optimum scale for first-derivative stencils.
pub const EPS_CBRT: f64 = 6.055454452393343e-6;
/// eps^(1/6); optimum scale for 5-point second-derivative stencils.
pub const EPS_SIXTH: f64 = 2.4607833005759253e-3;
/// eps^(1/7); optimum scale for 7-point third-derivative stencils.
pub const EPS_SEVENTH: f64 = 5.8046651919412065e-3;

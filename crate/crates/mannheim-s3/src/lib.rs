//! Numerical differential geometry of curves immersed in the round 3-sphere
//! S³(r) ⊂ ℝ⁴, with a focus on Mannheim curve pairs.
//!
//! The library provides:
//!
//! * exact sphere geometry (geodesics, tangent projection, oriented frame
//!   completion) — [`sphere`];
//! * the intrinsic Frenet apparatus of immersed spherical curves, both
//!   extraction from parametrizations and synthesis of curves from a
//!   prescribed curvature/torsion profile — [`curve`], [`frenet`],
//!   [`synthesis`];
//! * construction and residual-based verification of Mannheim pairs
//!   (principal-normal geodesics of one curve coinciding with binormal
//!   geodesics of the other) — [`mannheim`];
//! * special Frenet curves in E⁴ and the generalized-Mannheim curvature
//!   criterion k₁ = c(k₁² + k₂²) — [`frenet_e4`];
//! * the binormal-integral pipeline taking a spherical curve to an
//!   arc-length parametrized curve in E⁴ with full curvature verification —
//!   [`gm4`];
//! * generators for the example families (ccr curves, conical helices,
//!   general helices, the constant-curvature torus curve) — [`zoo`];
//! * CSV/JSON serialization with deterministic 17-significant-digit
//!   rendering — [`io`].
//!
//! All types are immutable values and all operations are pure functions;
//! everything is safe to call from any number of threads.

// negated comparisons like !(b > a) double as NaN-rejecting guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod frenet_e4;
pub mod gm4;
pub mod io;
pub mod mannheim;
pub mod numerics;
pub mod sphere;
pub mod synthesis;
pub mod vec4;
pub mod zoo;

pub use error::{GeomError, Result};
pub use vec4::Vec4;

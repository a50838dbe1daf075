//! Exact geometry of the round sphere S³(r) ⊂ ℝ⁴: points, tangent vectors,
//! geodesics (great circles), oriented frame completion and geodesic
//! distance.

use crate::error::{GeomError, Result};
use crate::vec4::{cross4, Vec4};

/// Relative tolerance for the on-sphere and tangency invariants.
const SPHERE_TOL: f64 = 1e-9;
/// Orthonormality tolerance for frame completion.
const FRAME_TOL: f64 = 1e-8;

/// A point of S³(r), kept together with the sphere radius.
///
/// The main results of the library fix r = 1, but the radius is carried
/// explicitly so the Gauss-formula 1/r² terms can be exercised on their own.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    coords: Vec4,
    radius: f64,
}

impl SpherePoint {
    /// Validates |coords| = r within 1e-9·r.
    pub fn new(coords: Vec4, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !coords.is_finite() {
            return Err(GeomError::InvalidSphereData(format!(
                "radius {radius} or non-finite coordinates"
            )));
        }
        let err = (coords.norm() - radius).abs();
        if err > SPHERE_TOL * radius {
            return Err(GeomError::InvalidSphereData(format!(
                "|coords| deviates from r by {err:.3e}"
            )));
        }
        Ok(SpherePoint { coords, radius })
    }

    /// Point on the unit sphere S³(1).
    pub fn on_unit(coords: Vec4) -> Result<Self> {
        SpherePoint::new(coords, 1.0)
    }

    /// Rescales `coords` onto the sphere of radius `radius`. Used where a
    /// numerically computed point is known to be on the sphere up to
    /// integration drift.
    pub fn project(coords: Vec4, radius: f64) -> Result<Self> {
        let dir = coords
            .normalized()
            .ok_or_else(|| GeomError::InvalidSphereData("zero vector".into()))?;
        Ok(SpherePoint {
            coords: dir * radius,
            radius,
        })
    }

    #[inline]
    pub fn coords(&self) -> Vec4 {
        self.coords
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Unit outward normal coords/r.
    #[inline]
    pub fn unit(&self) -> Vec4 {
        self.coords / self.radius
    }
}

/// A vector tangent to the sphere at `base` (⟨dir, base⟩ = 0).
#[derive(Clone, Copy, Debug)]
pub struct TangentVector {
    base: SpherePoint,
    dir: Vec4,
}

impl TangentVector {
    pub fn new(base: SpherePoint, dir: Vec4) -> Result<Self> {
        let n = dir.norm();
        let tol = SPHERE_TOL * base.radius() * n.max(1e-300);
        if dir.dot(base.coords()).abs() > tol {
            return Err(GeomError::InvalidSphereData(format!(
                "direction not tangent: <dir, base> = {:.3e}",
                dir.dot(base.coords())
            )));
        }
        Ok(TangentVector { base, dir })
    }

    /// Projects `dir` onto the tangent space first; never fails for a
    /// nonzero projection.
    pub fn projected(base: SpherePoint, dir: Vec4) -> Self {
        TangentVector {
            dir: tangent_project(&base, dir),
            base,
        }
    }

    #[inline]
    pub fn base(&self) -> SpherePoint {
        self.base
    }

    #[inline]
    pub fn dir(&self) -> Vec4 {
        self.dir
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dir.norm()
    }
}

/// A geodesic (great circle) of S³(r): base point plus a unit tangent
/// direction.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicS3 {
    base: SpherePoint,
    dir: Vec4,
}

impl GeodesicS3 {
    /// `dir` must be tangent at `base`; it is normalized here.
    pub fn new(base: SpherePoint, dir: TangentVector) -> Result<Self> {
        let d = dir
            .dir()
            .normalized()
            .ok_or_else(|| GeomError::InvalidSphereData("zero geodesic direction".into()))?;
        Ok(GeodesicS3 { base, dir: d })
    }

    pub fn from_raw(base: SpherePoint, dir: Vec4) -> Result<Self> {
        GeodesicS3::new(base, TangentVector::new(base, dir)?)
    }

    #[inline]
    pub fn base(&self) -> SpherePoint {
        self.base
    }

    #[inline]
    pub fn dir(&self) -> Vec4 {
        self.dir
    }
}

/// Point of the geodesic at arc length `u` from its base:
/// cos(u/r)·base + r·sin(u/r)·dir.
pub fn geodesic_eval(g: &GeodesicS3, u: f64) -> SpherePoint {
    let r = g.base.radius();
    let (sin, cos) = (u / r).sin_cos();
    SpherePoint {
        coords: g.base.coords() * cos + g.dir * (r * sin),
        radius: r,
    }
}

/// Removes the radial component: x − (⟨x, p⟩/r²)·p.
pub fn tangent_project(p: &SpherePoint, x: Vec4) -> Vec4 {
    let r2 = p.radius() * p.radius();
    x - p.coords() * (x.dot(p.coords()) / r2)
}

/// The unique unit vector b with det(p/r, t, n, b) = +1.
///
/// Computed as the generalized cross product of the three inputs (cofactor
/// expansion of the formal 4×4 determinant), then normalized. Errors with
/// [`GeomError::FrameDegenerate`] when `{p/r, t, n}` is not orthonormal
/// within 1e-8.
pub fn oriented_complement(p: &SpherePoint, t: Vec4, n: Vec4) -> Result<Vec4> {
    let a = p.unit();
    let gram_err = [
        a.dot(a) - 1.0,
        t.dot(t) - 1.0,
        n.dot(n) - 1.0,
        a.dot(t),
        a.dot(n),
        t.dot(n),
    ]
    .iter()
    .fold(0.0f64, |m, e| m.max(e.abs()));
    if gram_err > FRAME_TOL {
        return Err(GeomError::FrameDegenerate { kappa: gram_err });
    }
    let b = cross4(a, t, n);
    b.normalized()
        .ok_or(GeomError::FrameDegenerate { kappa: 0.0 })
}

/// Geodesic distance r·arccos(⟨p, q⟩/r²), clamped into [0, πr].
pub fn geodesic_distance(p: &SpherePoint, q: &SpherePoint) -> Result<f64> {
    let (rp, rq) = (p.radius(), q.radius());
    if (rp - rq).abs() > SPHERE_TOL * rp.max(rq) {
        return Err(GeomError::RadiusMismatch(rp, rq));
    }
    let c = (p.coords().dot(q.coords()) / (rp * rp)).clamp(-1.0, 1.0);
    Ok(rp * c.acos())
}

/// Stereographic projection of a sphere point from `pole` (a unit-norm
/// direction scaled to the sphere) onto ℝ³.
///
/// The image coordinates are taken in an orthonormal basis of pole⊥
/// (for the default pole e₄ this is the classical x_i/(1 − x₄/r) map, so
/// the antipode of the pole lands at the origin). Errors when the point is
/// within `tol` of the pole.
pub fn stereographic_project(p: &SpherePoint, pole: Vec4, tol: f64) -> Result<[f64; 3]> {
    let r = p.radius();
    let n = pole
        .normalized()
        .ok_or_else(|| GeomError::InvalidSphereData("zero projection pole".into()))?;
    let q = p.coords() / r;
    let c = q.dot(n);
    if 1.0 - c < tol {
        return Err(GeomError::DomainError(
            "projection pole lies on the curve".into(),
        ));
    }
    let basis = pole_basis(n);
    let y = (q - n * c) / (1.0 - c);
    Ok([y.dot(basis[0]) * r, y.dot(basis[1]) * r, y.dot(basis[2]) * r])
}

/// Deterministic orthonormal basis of the hyperplane orthogonal to the
/// unit vector `n`: Gram-Schmidt over the coordinate axes, skipping the
/// axis most parallel to `n`.
fn pole_basis(n: Vec4) -> [Vec4; 3] {
    let axes = [Vec4::E1, Vec4::E2, Vec4::E3, Vec4::E4];
    let comps = n.to_array().map(f64::abs);
    let skip = comps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(3);
    let mut basis = [Vec4::ZERO; 3];
    let mut k = 0;
    for (i, axis) in axes.iter().enumerate() {
        if i == skip {
            continue;
        }
        let mut v = axis.reject_unit(n);
        for b in basis.iter().take(k) {
            v = v.reject_unit(*b);
        }
        basis[k] = v.normalized().expect("axes span the hyperplane");
        k += 1;
    }
    basis
}

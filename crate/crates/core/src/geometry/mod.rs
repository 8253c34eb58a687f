//! Manifold geometries, metrics and discretisations.
//!
//! Every manifold here lives in R^3. Points are carried in ambient
//! coordinates; the SPD cone uses the coordinates `(a, b, c)` of the matrix
//! `[[a, b], [b, c]]`.

mod graph;
mod grid;
mod index;
mod projection;
pub mod spd;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use graph::{GeodesicGraph, DEFAULT_NEIGHBORS};
pub use grid::{make_grid, EvaluationGrid, GridSpec};
pub use index::CellIndex;
pub use projection::StereographicProjection;
pub use spd::Spd2;

/// A point in ambient Euclidean coordinates.
pub type AmbientPoint = [f64; 3];

/// Tolerance of the on-manifold residual check.
pub const ON_MANIFOLD_TOL: f64 = 1e-9;

#[inline]
pub fn euclidean(x: &AmbientPoint, y: &AmbientPoint) -> f64 {
    squared_euclidean(x, y).sqrt()
}

#[inline]
pub fn squared_euclidean(x: &AmbientPoint, y: &AmbientPoint) -> f64 {
    let d0 = x[0] - y[0];
    let d1 = x[1] - y[1];
    let d2 = x[2] - y[2];
    d0 * d0 + d1 * d1 + d2 * d2
}

#[inline]
pub(crate) fn dot(x: &AmbientPoint, y: &AmbientPoint) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

#[inline]
pub(crate) fn norm(x: &AmbientPoint) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn normalize(x: &AmbientPoint) -> Result<AmbientPoint> {
    let n = norm(x);
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::domain("cannot normalize a zero or non-finite vector"));
    }
    Ok([x[0] / n, x[1] / n, x[2] / n])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ManifoldKind {
    Sphere,
    EmbeddedTorus,
    SpdCone2,
    Hemisphere,
}

/// A manifold geometry together with its parameters.
///
/// The sphere has unit radius. The torus is parametrised by
/// `((R + r cos phi) cos theta, (R + r cos phi) sin theta, r sin phi)`.
/// The hemisphere is the polar cap `{x in S^2 : polar angle <= cap_angle}`
/// and is the only manifold here with a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldSpec {
    Sphere,
    Torus { major_radius: f64, minor_radius: f64 },
    SpdCone,
    Hemisphere { cap_angle: f64 },
}

impl ManifoldSpec {
    pub fn torus(major_radius: f64, minor_radius: f64) -> Result<Self> {
        let spec = ManifoldSpec::Torus {
            major_radius,
            minor_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hemisphere(cap_angle: f64) -> Result<Self> {
        let spec = ManifoldSpec::Hemisphere { cap_angle };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ManifoldSpec::Torus {
                major_radius,
                minor_radius,
            } => {
                if !(minor_radius > 0.0 && minor_radius < major_radius && major_radius.is_finite())
                {
                    return Err(Error::domain(format!(
                        "torus radii must satisfy 0 < r < R, got R={major_radius}, r={minor_radius}"
                    )));
                }
            }
            ManifoldSpec::Hemisphere { cap_angle } => {
                if !(cap_angle > 0.0 && cap_angle <= PI) {
                    return Err(Error::domain(format!(
                        "cap angle must lie in (0, pi], got {cap_angle}"
                    )));
                }
            }
            ManifoldSpec::Sphere | ManifoldSpec::SpdCone => {}
        }
        Ok(())
    }

    pub fn kind(&self) -> ManifoldKind {
        match self {
            ManifoldSpec::Sphere => ManifoldKind::Sphere,
            ManifoldSpec::Torus { .. } => ManifoldKind::EmbeddedTorus,
            ManifoldSpec::SpdCone => ManifoldKind::SpdCone2,
            ManifoldSpec::Hemisphere { .. } => ManifoldKind::Hemisphere,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ManifoldSpec::Sphere => "sphere",
            ManifoldSpec::Torus { .. } => "torus",
            ManifoldSpec::SpdCone => "spd_cone",
            ManifoldSpec::Hemisphere { .. } => "hemisphere",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        3
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ManifoldSpec::SpdCone => 3,
            _ => 2,
        }
    }

    pub fn has_boundary(&self) -> bool {
        matches!(self, ManifoldSpec::Hemisphere { .. })
    }

    /// Distance of `x` from the manifold's defining equation. For the SPD cone
    /// this is zero inside the cone and `+inf` outside.
    pub fn residual(&self, x: &AmbientPoint) -> f64 {
        if !x.iter().all(|v| v.is_finite()) {
            return f64::INFINITY;
        }
        match *self {
            ManifoldSpec::Sphere => (norm(x) - 1.0).abs(),
            ManifoldSpec::Hemisphere { cap_angle } => {
                let radial = (norm(x) - 1.0).abs();
                let polar = x[2].clamp(-1.0, 1.0).acos();
                radial.max(polar - cap_angle).max(0.0)
            }
            ManifoldSpec::Torus {
                major_radius,
                minor_radius,
            } => {
                let rho = x[0].hypot(x[1]) - major_radius;
                (rho * rho + x[2] * x[2] - minor_radius * minor_radius).abs()
            }
            ManifoldSpec::SpdCone => {
                if x[0] > 0.0 && x[0] * x[2] - x[1] * x[1] > 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn check_on_manifold(&self, x: &AmbientPoint) -> Result<()> {
        let residual = self.residual(x);
        if residual <= ON_MANIFOLD_TOL {
            Ok(())
        } else {
            Err(Error::OffManifold { residual })
        }
    }

    /// Maps intrinsic chart coordinates to ambient coordinates.
    ///
    /// Sphere and hemisphere take `(theta, phi)` with polar angle `phi`; the
    /// torus takes `(theta, phi)` with `phi` the minor-circle angle; the SPD
    /// cone takes `(a, b, c)` and is the identity chart.
    pub fn embed(&self, u: &[f64]) -> Result<AmbientPoint> {
        if u.len() != self.intrinsic_dim() {
            return Err(Error::domain(format!(
                "expected {} intrinsic coordinates, got {}",
                self.intrinsic_dim(),
                u.len()
            )));
        }
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("non-finite intrinsic coordinate"));
        }
        match *self {
            ManifoldSpec::Sphere | ManifoldSpec::Hemisphere { .. } => {
                let (theta, phi) = (u[0], u[1]);
                let max_phi = match *self {
                    ManifoldSpec::Hemisphere { cap_angle } => cap_angle,
                    _ => PI,
                };
                if !(0.0..TAU).contains(&theta) || !(0.0..=max_phi).contains(&phi) {
                    return Err(Error::domain(format!(
                        "(theta, phi) = ({theta}, {phi}) outside the chart"
                    )));
                }
                Ok(sphere_point(theta, phi))
            }
            ManifoldSpec::Torus {
                major_radius,
                minor_radius,
            } => {
                let (theta, phi) = (u[0], u[1]);
                if !(0.0..TAU).contains(&theta) || !(0.0..TAU).contains(&phi) {
                    return Err(Error::domain(format!(
                        "(theta, phi) = ({theta}, {phi}) outside [0, 2pi)^2"
                    )));
                }
                Ok(torus_point(major_radius, minor_radius, theta, phi))
            }
            ManifoldSpec::SpdCone => {
                let x = [u[0], u[1], u[2]];
                Spd2::from_coords(x)?;
                Ok(x)
            }
        }
    }

    /// Inverse chart: intrinsic coordinates of an on-manifold point.
    pub fn intrinsic_coords(&self, x: &AmbientPoint) -> Vec<f64> {
        match *self {
            ManifoldSpec::Sphere | ManifoldSpec::Hemisphere { .. } => {
                let theta = x[1].atan2(x[0]).rem_euclid(TAU);
                let phi = (x[2] / norm(x)).clamp(-1.0, 1.0).acos();
                vec![theta, phi]
            }
            ManifoldSpec::Torus { major_radius, .. } => {
                let theta = x[1].atan2(x[0]).rem_euclid(TAU);
                let phi = x[2].atan2(x[0].hypot(x[1]) - major_radius).rem_euclid(TAU);
                vec![theta, phi]
            }
            ManifoldSpec::SpdCone => x.to_vec(),
        }
    }

    /// Closed-form geodesic distance.
    ///
    /// Available on the sphere, on caps no wider than a hemisphere (which are
    /// geodesically convex) and on the SPD cone under the affine-invariant
    /// metric. The embedded torus and wider caps need a [`GeodesicGraph`].
    pub fn geodesic_distance(&self, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
        self.check_on_manifold(x)?;
        self.check_on_manifold(y)?;
        match *self {
            ManifoldSpec::Sphere => Ok(great_circle(x, y)),
            ManifoldSpec::Hemisphere { cap_angle } if cap_angle <= PI / 2.0 => {
                Ok(great_circle(x, y))
            }
            ManifoldSpec::Hemisphere { .. } => Err(Error::NoClosedForm("a cap wider than pi/2")),
            ManifoldSpec::Torus { .. } => Err(Error::NoClosedForm("the embedded torus")),
            ManifoldSpec::SpdCone => {
                Spd2::from_coords(*x)?.affine_invariant_distance(&Spd2::from_coords(*y)?)
            }
        }
    }

    /// Geodesic distance from `x` to the manifold boundary, `+inf` when the
    /// manifold has none.
    pub fn boundary_distance(&self, x: &AmbientPoint) -> Result<f64> {
        self.check_on_manifold(x)?;
        Ok(self.boundary_distance_unchecked(x))
    }

    pub(crate) fn boundary_distance_unchecked(&self, x: &AmbientPoint) -> f64 {
        match *self {
            ManifoldSpec::Hemisphere { cap_angle } => {
                let polar = (x[2] / norm(x)).clamp(-1.0, 1.0).acos();
                (cap_angle - polar).max(0.0)
            }
            _ => f64::INFINITY,
        }
    }
}

pub(crate) fn sphere_point(theta: f64, phi: f64) -> AmbientPoint {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [sp * ct, sp * st, cp]
}

pub(crate) fn torus_point(major: f64, minor: f64, theta: f64, phi: f64) -> AmbientPoint {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rho = major + minor * cp;
    [rho * ct, rho * st, minor * sp]
}

/// Angle between unit vectors; equals `acos(clamp(<x, y>))` but keeps full
/// precision for nearly parallel or antipodal pairs.
fn great_circle(x: &AmbientPoint, y: &AmbientPoint) -> f64 {
    let cross = [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ];
    norm(&cross).atan2(dot(x, y))
}

/// Closed-form metrics on ambient points.
pub trait PointMetric: Sync {
    fn distance(&self, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64>;
}

/// Straight-line distance in R^3.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl PointMetric for Euclidean {
    fn distance(&self, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
        Ok(euclidean(x, y))
    }
}

impl PointMetric for ManifoldSpec {
    fn distance(&self, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
        self.geodesic_distance(x, y)
    }
}

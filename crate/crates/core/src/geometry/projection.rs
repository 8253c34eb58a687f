use serde::{Deserialize, Serialize};

use super::{dot, normalize, AmbientPoint};
use crate::error::{Error, Result};

/// Stereographic projection of the unit sphere from `pole` onto the plane
/// through the origin orthogonal to `pole`.
///
/// Plane coordinates are taken in the orthonormal basis `(e1, e2)` returned by
/// [`StereographicProjection::basis`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StereographicProjection {
    pub pole: [f64; 3],
}

impl StereographicProjection {
    pub fn new(pole: [f64; 3]) -> Result<Self> {
        Ok(StereographicProjection {
            pole: normalize(&pole)?,
        })
    }

    /// Orthonormal basis of the projection plane. The first vector is the
    /// coordinate axis least aligned with the pole, orthogonalised.
    pub fn basis(&self) -> Result<([f64; 3], [f64; 3])> {
        let p = normalize(&self.pole)?;
        let axis = (0..3)
            .min_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs()))
            .unwrap();
        let mut a = [0.0; 3];
        a[axis] = 1.0;
        let proj = dot(&a, &p);
        let e1 = normalize(&[a[0] - proj * p[0], a[1] - proj * p[1], a[2] - proj * p[2]])?;
        let e2 = [
            p[1] * e1[2] - p[2] * e1[1],
            p[2] * e1[0] - p[0] * e1[2],
            p[0] * e1[1] - p[1] * e1[0],
        ];
        Ok((e1, e2))
    }

    pub fn project(&self, x: &AmbientPoint) -> Result<[f64; 2]> {
        let p = normalize(&self.pole)?;
        let denom = 1.0 - dot(x, &p);
        if denom <= 1e-12 {
            return Err(Error::domain("cannot project the projection pole"));
        }
        let (e1, e2) = self.basis()?;
        Ok([dot(x, &e1) / denom, dot(x, &e2) / denom])
    }

    pub fn project_all(&self, xs: &[AmbientPoint]) -> Result<Vec<[f64; 2]>> {
        xs.iter().map(|x| self.project(x)).collect()
    }
}

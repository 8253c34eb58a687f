//! 2x2 symmetric positive-definite matrices and the affine-invariant metric
//! `d(A, B) = || log(A^{-1/2} B A^{-1/2}) ||_F`.

use crate::error::{Error, Result};

/// Eigenvalues at or below this floor are rejected rather than clamped.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// The matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spd2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Spectral decomposition `Q diag(values) Q^T` with `Q = [[cos t, -sin t], [sin t, cos t]]`.
#[derive(Debug, Clone, Copy)]
pub struct SymEigen2 {
    pub values: [f64; 2],
    pub cos: f64,
    pub sin: f64,
}

impl SymEigen2 {
    pub fn of(a: f64, b: f64, c: f64) -> Self {
        let mean = 0.5 * (a + c);
        let half_diff = 0.5 * (a - c);
        let radius = half_diff.hypot(b);
        let hi = mean + radius;
        let det = a * c - b * b;
        // small eigenvalue through the determinant avoids cancellation
        let lo = if hi != 0.0 { det / hi } else { mean - radius };
        let angle = 0.5 * (2.0 * b).atan2(a - c);
        let (sin, cos) = angle.sin_cos();
        SymEigen2 {
            values: [hi, lo],
            cos,
            sin,
        }
    }

    /// Rebuilds `Q diag(f(values)) Q^T` as `(a, b, c)`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> [f64; 3] {
        let f0 = f(self.values[0]);
        let f1 = f(self.values[1]);
        let (cs, sn) = (self.cos, self.sin);
        [
            f0 * cs * cs + f1 * sn * sn,
            (f0 - f1) * cs * sn,
            f0 * sn * sn + f1 * cs * cs,
        ]
    }
}

impl Spd2 {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::from_coords([a, b, c])
    }

    pub fn from_coords(x: [f64; 3]) -> Result<Self> {
        let [a, b, c] = x;
        if !(x.iter().all(|v| v.is_finite()) && a > 0.0 && a * c - b * b > 0.0) {
            return Err(Error::domain(format!(
                "({a}, {b}, {c}) is not a positive-definite matrix"
            )));
        }
        Ok(Spd2 { a, b, c })
    }

    pub fn identity() -> Self {
        Spd2 {
            a: 1.0,
            b: 0.0,
            c: 1.0,
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    pub fn inverse(&self) -> Spd2 {
        let det = self.det();
        Spd2 {
            a: self.c / det,
            b: -self.b / det,
            c: self.a / det,
        }
    }

    pub fn eigen(&self) -> SymEigen2 {
        SymEigen2::of(self.a, self.b, self.c)
    }

    fn checked_eigen(&self) -> Result<SymEigen2> {
        let eig = self.eigen();
        if eig.values[1] <= EIGENVALUE_FLOOR {
            return Err(Error::domain(format!(
                "eigenvalue {:e} below floor {EIGENVALUE_FLOOR:e}",
                eig.values[1]
            )));
        }
        Ok(eig)
    }

    /// Lower Cholesky factor `L` with `L L^T = self`, as `(l11, l21, l22)`.
    pub fn cholesky(&self) -> [f64; 3] {
        let l11 = self.a.sqrt();
        let l21 = self.b / l11;
        let l22 = (self.c - l21 * l21).sqrt();
        [l11, l21, l22]
    }

    pub fn inv_sqrt(&self) -> Result<[f64; 3]> {
        Ok(self.checked_eigen()?.map(|v| 1.0 / v.sqrt()))
    }

    /// Matrix logarithm as `(a, b, c)` of a symmetric matrix.
    pub fn log(&self) -> Result<[f64; 3]> {
        Ok(self.checked_eigen()?.map(f64::ln))
    }

    /// `P^T S P` for an arbitrary 2x2 matrix `P = [[p00, p01], [p10, p11]]`.
    pub fn congruence(&self, p: [[f64; 2]; 2]) -> Spd2 {
        let s = [[self.a, self.b], [self.b, self.c]];
        let mut sp = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                sp[i][j] = s[i][0] * p[0][j] + s[i][1] * p[1][j];
            }
        }
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = p[0][i] * sp[0][j] + p[1][i] * sp[1][j];
            }
        }
        Spd2 {
            a: out[0][0],
            b: 0.5 * (out[0][1] + out[1][0]),
            c: out[1][1],
        }
    }

    pub fn affine_invariant_distance(&self, other: &Spd2) -> Result<f64> {
        let w = self.inv_sqrt()?;
        let w = [[w[0], w[1]], [w[1], w[2]]];
        let [la, lb, lc] = other.congruence(w).log()?;
        Ok((la * la + 2.0 * lb * lb + lc * lc).sqrt())
    }
}

//! 2x2 complex matrices: fundamental, monodromy and asymptotic matrices.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Matrix2C {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl Matrix2C {
    pub fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Matrix2C { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Matrix2C::new(one, zero, zero, one)
    }

    pub fn mul(&self, o: &Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    pub fn inverse(&self) -> Result<Matrix2C> {
        let d = self.det();
        if d.norm() < 1e-14 * self.norm().powi(2).max(1e-300) {
            return Err(Error::Numeric("singular 2x2 matrix".into()));
        }
        Ok(Matrix2C::new(
            self.a22 / d,
            -self.a12 / d,
            -self.a21 / d,
            self.a11 / d,
        ))
    }

    pub fn sub(&self, o: &Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }

    /// Max-entry norm.
    pub fn norm(&self) -> f64 {
        self.a11
            .norm()
            .max(self.a12.norm())
            .max(self.a21.norm())
            .max(self.a22.norm())
    }

    pub fn eigenvalues(&self) -> (C64, C64) {
        let t = self.trace();
        let half = C64::new(0.5, 0.0);
        let disc = (t * t - self.det() * 4.0).sqrt();
        ((t + disc) * half, (t - disc) * half)
    }

    /// Eigendirections, deduplicated: one entry for a defective or scalar
    /// matrix, two otherwise. Directions are unit vectors.
    pub fn eigendirections(&self) -> Vec<[C64; 2]> {
        let scale = self.norm().max(1e-300);
        let (e1, e2) = self.eigenvalues();
        if self.a12.norm() < 1e-12 * scale && self.a21.norm() < 1e-12 * scale {
            if (self.a11 - self.a22).norm() < 1e-12 * scale {
                // scalar: every direction is an eigendirection
                return vec![[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]];
            }
            return vec![
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ];
        }
        let vec_for = |e: C64| -> [C64; 2] {
            let v = if self.a12.norm() >= self.a21.norm() {
                [self.a12, e - self.a11]
            } else {
                [e - self.a22, self.a21]
            };
            normalize(v)
        };
        let v1 = vec_for(e1);
        let v2 = vec_for(e2);
        if (e1 - e2).norm() < 1e-9 * scale.max(1.0) || principal_angle(&v1, &v2) < 1e-9 {
            vec![v1]
        } else {
            vec![v1, v2]
        }
    }

    pub fn is_scalar(&self) -> bool {
        let scale = self.norm().max(1e-300);
        self.a12.norm() < 1e-12 * scale
            && self.a21.norm() < 1e-12 * scale
            && (self.a11 - self.a22).norm() < 1e-12 * scale
    }
}

pub fn normalize(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n == 0.0 {
        v
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// Principal angle between two complex directions in C^2.
pub fn principal_angle(u: &[C64; 2], v: &[C64; 2]) -> f64 {
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let inner = (u[0].conj() * v[0] + u[1].conj() * v[1]).norm();
    (inner / (nu * nv)).min(1.0).acos()
}

//! Polynomial and rational-function algebra over complex coefficients.
//!
//! Everything the singularity analysis needs: Taylor shifts, vanishing
//! orders, limits of the form lim (z-z0)^k r(z), reciprocal substitution
//! for the point at infinity and companion-matrix root finding.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ORDER_TOL: f64 = 1e-9;

/// Dense polynomial, ascending coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::new(vec![C64::new(1.0, 0.0)])
    }

    /// The monomial z^k.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); k + 1];
        c[k] = C64::new(1.0, 0.0);
        Poly { coeffs: c }
    }

    fn trim(&mut self) {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= 1e-300 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Magnitude scale of the polynomial at |z|: sum |c_i| |z|^i.
    pub fn scale_at(&self, z: C64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            acc += c.norm() * p;
            p *= r;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Coefficients of p(z0 + t) in t (Taylor shift by synthetic division).
    pub fn shift(&self, z0: C64) -> Poly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let (lo, hi) = c.split_at_mut(j + 1);
                lo[j] = lo[j] + z0 * hi[0];
                let _ = hi;
            }
        }
        Poly { coeffs: c }
    }

    /// Vanishing order at z0 (index of the first significant Taylor
    /// coefficient). The zero polynomial reports usize::MAX.
    pub fn order_at(&self, z0: C64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.shift(z0);
        let scale = shifted
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        shifted
            .coeffs
            .iter()
            .position(|c| c.norm() > ORDER_TOL * scale)
            .unwrap_or(shifted.coeffs.len())
    }

    /// Taylor coefficient of (z - z0)^k.
    pub fn taylor_coeff(&self, z0: C64, k: usize) -> C64 {
        let shifted = self.shift(z0);
        shifted
            .coeffs
            .get(k)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Reversed coefficients: w^deg * p(1/w).
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// All complex roots via the companion matrix. Requires (numerically)
    /// real coefficients, which is all the census ever factors.
    pub fn roots(&self) -> Result<Vec<C64>> {
        if self.coeffs.len() <= 1 {
            return Ok(vec![]);
        }
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if self.coeffs.iter().any(|c| c.im.abs() > 1e-12 * scale) {
            return Err(Error::Numeric(
                "root finding requires real coefficients".into(),
            ));
        }
        let n = self.coeffs.len() - 1;
        let lead = self.coeffs[n];
        let m = DMatrix::<f64>::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -(self.coeffs[i] / lead).re
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let eig = m.complex_eigenvalues();
        Ok(eig.iter().map(|e| C64::new(e.re, e.im)).collect())
    }

    /// Roots clustered into (location, multiplicity) pairs.
    pub fn clustered_roots(&self) -> Result<Vec<(C64, usize)>> {
        let mut roots = self.roots()?;
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        let mut clusters: Vec<(C64, usize)> = Vec::new();
        for r in roots {
            let mut merged = false;
            for (c, m) in clusters.iter_mut() {
                let tol = 1e-5 * (1.0 + c.norm());
                if (*c - r).norm() < tol {
                    // running mean keeps double roots accurate
                    *c = (*c * *m as f64 + r) / (*m as f64 + 1.0);
                    *m += 1;
                    merged = true;
                    break;
                }
            }
            if !merged {
                clusters.push((r, 1));
            }
        }
        Ok(clusters)
    }
}

/// Ratio of two polynomials. Common factors are never cancelled
/// explicitly; order bookkeeping handles them.
#[derive(Clone, Debug)]
pub struct Rat {
    pub num: Poly,
    pub den: Poly,
}

impl Rat {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter(
                "denominator is the zero polynomial".into(),
            ));
        }
        Ok(Rat { num, den })
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let d = self.den.eval(z);
        let dscale = self.den.scale_at(z).max(1e-300);
        if d.norm() <= 1e-13 * dscale {
            let n = self.num.eval(z);
            let nscale = self.num.scale_at(z).max(1e-300);
            if n.norm() <= 1e-13 * nscale {
                return Err(Error::Pole(format!(
                    "common root of numerator and denominator at z = {z}"
                )));
            }
            return Err(Error::Pole(format!("pole at z = {z}")));
        }
        Ok(self.num.eval(z) / d)
    }

    pub fn add(&self, other: &Rat) -> Rat {
        Rat {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        Rat {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn scale(&self, s: C64) -> Rat {
        Rat {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Pole order at z0 (negative when the function vanishes there).
    pub fn pole_order_at(&self, z0: C64) -> isize {
        let on = self.num.order_at(z0);
        let od = self.den.order_at(z0);
        if on == usize::MAX {
            return isize::MIN; // identically zero
        }
        od as isize - on as isize
    }

    /// lim_{z->z0} (z - z0)^k r(z); errors when the limit is infinite.
    pub fn limit_mul_power(&self, z0: C64, k: isize) -> Result<C64> {
        if self.num.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let sn = self.num.shift(z0);
        let sd = self.den.shift(z0);
        let scale_n = sn.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale_d = sd.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let on = sn
            .coeffs
            .iter()
            .position(|c| c.norm() > ORDER_TOL * scale_n)
            .unwrap_or(sn.coeffs.len());
        let od = sd
            .coeffs
            .iter()
            .position(|c| c.norm() > ORDER_TOL * scale_d)
            .unwrap_or(sd.coeffs.len());
        let net = on as isize + k - od as isize;
        if net > 0 {
            Ok(C64::new(0.0, 0.0))
        } else if net == 0 {
            Ok(sn.coeffs[on] / sd.coeffs[od])
        } else {
            Err(Error::Numeric(format!(
                "infinite limit of (z-z0)^{k} r(z) at z0 = {z0}"
            )))
        }
    }

    /// r(1/w) as a rational function of w.
    pub fn subst_recip(&self) -> Rat {
        let n = self.num.degree();
        let m = self.den.degree();
        let rn = self.num.reversed();
        let rd = self.den.reversed();
        if m >= n {
            Rat {
                num: rn.mul(&Poly::monomial(m - n)),
                den: rd,
            }
        } else {
            Rat {
                num: rn,
                den: rd.mul(&Poly::monomial(n - m)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn shift_is_taylor() {
        // p(z) = z^2 - 3z + 2 = (z-1)(z-2); at z0=1: t(t-1)
        let p = Poly::from_real(&[2.0, -3.0, 1.0]);
        let s = p.shift(c(1.0));
        assert!((s.coeffs()[0]).norm() < 1e-14);
        assert!((s.coeffs()[1] - c(-1.0)).norm() < 1e-14);
        assert!((s.coeffs()[2] - c(1.0)).norm() < 1e-14);
        assert_eq!(p.order_at(c(1.0)), 1);
        assert_eq!(p.order_at(c(0.0)), 0);
    }

    #[test]
    fn limits() {
        // r = 1/(z(z-1)): lim z*r at 0 is -1
        let r = Rat::new(Poly::one(), Poly::from_real(&[0.0, -1.0, 1.0])).unwrap();
        let l = r.limit_mul_power(c(0.0), 1).unwrap();
        assert!((l - c(-1.0)).norm() < 1e-12);
        assert!(r.limit_mul_power(c(0.0), 0).is_err());
        assert!((r.limit_mul_power(c(0.0), 2).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn roots_and_clusters() {
        // (z-2)^2 (z+1)
        let p = Poly::from_real(&[4.0, 0.0, -3.0, 1.0]);
        let mut cl = p.clustered_roots().unwrap();
        cl.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        assert_eq!(cl.len(), 2);
        assert!((cl[0].0 - c(-1.0)).norm() < 1e-7);
        assert_eq!(cl[0].1, 1);
        assert!((cl[1].0 - c(2.0)).norm() < 1e-7);
        assert_eq!(cl[1].1, 2);
    }

    #[test]
    fn reciprocal_substitution() {
        // r(z) = (2z+1)/(z^2): r(1/w) = w(w+2)... = (w^2+2w)/1
        let r = Rat::new(Poly::from_real(&[1.0, 2.0]), Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let ri = r.subst_recip();
        let w = C64::new(0.3, 0.1);
        let direct = r.eval(1.0 / w).unwrap();
        assert!((ri.eval(w).unwrap() - direct).norm() < 1e-12 * direct.norm());
    }
}

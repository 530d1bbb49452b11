//! Explicit eigenfunctions at accepted candidates: peel off the local
//! exponents at 0 and 1, reduce to a Gauss series, keep the terminating
//! decaying solutions, and evaluate them back on the real line.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{normalize_to_01inf, p_symbol, MobiusMap, PSymbol};
use crate::problem::SLProblem;

const INT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HGParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

/// Parameters after peeling zeta^{rho1+} (1-zeta)^{rho2+} off the
/// normalized equation: a and b are the exponent sums with the two
/// infinity exponents, c the standard shift at zero.
pub fn hypergeometric_reduction(ps_normalized: &PSymbol) -> HGParams {
    let (r1p, r1m) = ps_normalized.exponents[0];
    let (r2p, _) = ps_normalized.exponents[1];
    let (r3p, r3m) = ps_normalized.exponents[2];
    HGParams {
        a: r1p + r2p + r3p,
        b: r1p + r2p + r3m,
        c: C64::new(1.0, 0.0) + r1p - r1m,
    }
}

fn nonpositive_integer(v: C64) -> Option<i64> {
    if v.im.abs() < INT_TOL && (v.re - v.re.round()).abs() < INT_TOL && v.re.round() <= 0.5 {
        Some(v.re.round() as i64)
    } else {
        None
    }
}

/// Partial (or exact, when terminating) sum of the Gauss series at zeta.
pub fn gauss_series(h: &HGParams, zeta: C64, n_max: usize) -> Result<C64> {
    let terminates = nonpositive_integer(h.a).is_some() || nonpositive_integer(h.b).is_some();
    if !terminates && zeta.norm() >= 1.0 {
        return Err(Error::Numeric(format!(
            "series diverges at |zeta| = {} without termination",
            zeta.norm()
        )));
    }
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for j in 0..n_max {
        let jf = j as f64;
        let num = (h.a + jf) * (h.b + jf);
        if terminates && num.norm() < INT_TOL {
            return Ok(sum);
        }
        let den = (1.0 + jf) * (h.c + jf);
        if den.norm() < 1e-12 {
            return Err(Error::Numeric(format!(
                "pole in series coefficients at term {j} (c = {})",
                h.c
            )));
        }
        term = term * num * zeta / den;
        sum += term;
        if term.norm() < 1e-16 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenFunction {
    pub mobius: MobiusMap,
    pub exp0: C64,
    pub exp1: C64,
    /// terminating series coefficients, ascending powers of zeta, [0] = 1
    pub coeffs: Vec<C64>,
    pub lambda: C64,
}

/// Attempts the explicit construction; None means no bounded solution of
/// this form exists at lambda.
pub fn build_eigenfunction(p: &SLProblem, lambda: C64) -> Result<Option<EigenFunction>> {
    let ps = p_symbol(p, lambda)?;
    let (mobius, nps) = normalize_to_01inf(p, &ps)?;
    let mut h = hypergeometric_reduction(&nps);
    if nonpositive_integer(h.c).is_some() {
        return Err(Error::Unsupported(format!(
            "degenerate local exponents (c = {}); the second-kind solution is not constructed",
            h.c
        )));
    }
    // the series is symmetric in a and b; put the terminating one in b
    if nonpositive_integer(h.b).is_none() && nonpositive_integer(h.a).is_some() {
        std::mem::swap(&mut h.a, &mut h.b);
    }
    let n = match nonpositive_integer(h.b) {
        Some(n) => (-n) as usize,
        None => return Ok(None),
    };
    let exp0 = nps.exponents[0].0;
    let exp1 = nps.exponents[1].0;
    if exp0.re <= 0.0 || exp1.re <= 0.0 {
        return Ok(None);
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut term = C64::new(1.0, 0.0);
    coeffs.push(term);
    for j in 0..n {
        let jf = j as f64;
        term = term * (h.a + jf) * (h.b + jf) / ((1.0 + jf) * (h.c + jf));
        coeffs.push(term);
    }
    Ok(Some(EigenFunction {
        mobius,
        exp0,
        exp1,
        coeffs,
        lambda,
    }))
}

impl EigenFunction {
    /// psi as a function of zeta, given zeta and 1-zeta separately so the
    /// factor that vanishes at either end keeps full relative accuracy.
    pub fn eval_in_zeta(&self, zeta: C64, one_minus_zeta: C64) -> C64 {
        let mut series = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            series = series * zeta + *c;
        }
        zeta.powc(self.exp0) * one_minus_zeta.powc(self.exp1) * series
    }

    /// (psi, dpsi/dz) at a complex z off the singular set.
    pub fn eval_with_derivative_z(&self, z: C64) -> (C64, C64) {
        let m = &self.mobius;
        let den = m.c * z + m.d;
        let zeta = (m.a * z + m.b) / den;
        let omz = (den - (m.a * z + m.b)) / den;
        let mut series = C64::new(0.0, 0.0);
        let mut dseries = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dseries = dseries * zeta + series;
            series = series * zeta + *c;
        }
        let head = zeta.powc(self.exp0) * omz.powc(self.exp1);
        let psi = head * series;
        let dpsi_dzeta = head * ((self.exp0 / zeta - self.exp1 / omz) * series + dseries);
        let dzeta_dz = (m.a * m.d - m.b * m.c) / (den * den);
        (psi, dpsi_dzeta * dzeta_dz)
    }
}

/// psi(x) along the orbit; zeta stays in (0, 1) so all powers are taken on
/// the positive real branch.
pub fn eval_eigenfunction(ef: &EigenFunction, p: &SLProblem, x: f64) -> C64 {
    let (gamma, wplus) = p.heteroclinic_parts(x);
    let m = &ef.mobius;
    let den = m.c * gamma + m.d;
    // numerator factors exactly: a*z + b = a(z - z_minus), and the
    // complement carries the stable z_plus - gamma part
    let zeta = m.a * (gamma - p.z_minus) / den;
    let omz = (m.a - m.c) * wplus / den;
    ef.eval_in_zeta(C64::new(zeta, 0.0), C64::new(omz, 0.0))
}

/// Max of |psi'' + mu psi' + (nu - lambda) psi| over xs, by five point
/// central differences, normalized by max |psi|.
pub fn residual(p: &SLProblem, lambda: C64, ef: &EigenFunction, xs: &[f64]) -> Result<f64> {
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    let mut amp: f64 = 0.0;
    for &x in xs {
        let s: Vec<C64> = (-2..=2)
            .map(|i| eval_eigenfunction(ef, p, x + i as f64 * h))
            .collect();
        let d2 = (-s[0] + 16.0 * s[1] - 30.0 * s[2] + 16.0 * s[3] - s[4]) / (12.0 * h * h);
        let d1 = (s[0] - 8.0 * s[1] + 8.0 * s[3] - s[4]) / (12.0 * h);
        let (mu, nu) = p.coefficient_values(x)?;
        let r = d2 + mu * d1 + (nu - lambda) * s[2];
        worst = worst.max(r.norm());
        amp = amp.max(s[2].norm());
    }
    if amp == 0.0 {
        return Err(Error::Numeric("eigenfunction vanishes on the sample set".into()));
    }
    Ok(worst / amp)
}

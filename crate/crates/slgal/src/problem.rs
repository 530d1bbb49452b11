//! Problem definitions: coefficient functions on the line obtained by
//! composing rational functions with a heteroclinic orbit of dz/dx = f(z).
//! Built-in Hulthen and Allen-Cahn families plus user-defined rational
//! problems loaded from JSON.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode;
use crate::poly::Poly;

/// Real rational function stored as ascending coefficient lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFn {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl RationalFn {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if den.iter().all(|&c| c == 0.0) || den.is_empty() {
            return Err(Error::InvalidParameter(
                "denominator is the zero polynomial".into(),
            ));
        }
        Ok(RationalFn { num, den })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        RationalFn {
            num: coeffs,
            den: vec![1.0],
        }
    }

    pub fn constant(c: f64) -> Self {
        RationalFn::polynomial(vec![c])
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1 && self.den[0] != 0.0
    }

    fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn poly_scale(coeffs: &[f64], x: f64) -> f64 {
        let r = x.abs();
        let mut acc = 0.0;
        let mut p = 1.0;
        for &c in coeffs {
            acc += c.abs() * p;
            p *= r;
        }
        acc
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let d = Self::eval_poly(&self.den, x);
        if d.abs() <= 1e-13 * Self::poly_scale(&self.den, x).max(1e-300) {
            let n = Self::eval_poly(&self.num, x);
            if n.abs() <= 1e-13 * Self::poly_scale(&self.num, x).max(1e-300) {
                return Err(Error::Pole(format!(
                    "common root of numerator and denominator at x = {x}"
                )));
            }
            return Err(Error::Pole(format!("pole at x = {x}")));
        }
        Ok(Self::eval_poly(&self.num, x) / d)
    }

    pub fn eval_complex(&self, z: C64) -> Result<C64> {
        crate::poly::Rat::new(Poly::from_real(&self.num), Poly::from_real(&self.den))
            .and_then(|r| r.eval(z))
    }

    /// Quotient-rule derivative.
    pub fn derivative(&self) -> RationalFn {
        let n = Poly::from_real(&self.num);
        let d = Poly::from_real(&self.den);
        let num = n.derivative().mul(&d).sub(&n.mul(&d.derivative()));
        let den = d.mul(&d);
        RationalFn {
            num: num.coeffs().iter().map(|c| c.re).collect(),
            den: den.coeffs().iter().map(|c| c.re).collect(),
        }
    }

    pub fn num_poly(&self) -> Poly {
        Poly::from_real(&self.num)
    }

    pub fn den_poly(&self) -> Poly {
        Poly::from_real(&self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Family {
    Hulthen { a1: f64, a2: f64, a3: f64 },
    AllenCahn { alpha: f64 },
    Custom,
}

/// Endpoint limits and linearization factors a = 1/f'(z) at both ends.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AsymptoticData {
    pub mu_minus: f64,
    pub mu_plus: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub a_minus: f64,
    pub a_plus: f64,
}

#[derive(Debug)]
pub struct SLProblem {
    pub f: RationalFn,
    pub g: RationalFn,
    pub h: RationalFn,
    pub z_minus: f64,
    pub z_plus: f64,
    pub gamma_init: f64,
    pub family: Family,
    gamma_table: OnceLock<GammaTable>,
}

#[derive(Debug)]
struct GammaTable {
    x_lo: f64,
    step: f64,
    values: Vec<f64>,
}

const TABLE_HALF_SPAN: f64 = 46.0;
const TABLE_STEP: f64 = 0.5;

impl SLProblem {
    pub fn custom(
        f: RationalFn,
        g: RationalFn,
        h: RationalFn,
        z_minus: f64,
        z_plus: f64,
        gamma_init: f64,
    ) -> Result<Self> {
        let p = SLProblem {
            f,
            g,
            h,
            z_minus,
            z_plus,
            gamma_init,
            family: Family::Custom,
            gamma_table: OnceLock::new(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !self.f.is_polynomial() {
            return Err(Error::InvalidProblem(
                "f must be a polynomial (trivial denominator)".into(),
            ));
        }
        if self.z_minus == self.z_plus {
            return Err(Error::InvalidProblem("z_minus equals z_plus".into()));
        }
        let fp = self.f.derivative();
        for (z, name) in [(self.z_minus, "z_minus"), (self.z_plus, "z_plus")] {
            let fv = self.f.eval(z)?;
            let scale = RationalFn::poly_scale(&self.f.num, z).max(1.0);
            if fv.abs() > 1e-9 * scale {
                return Err(Error::InvalidProblem(format!(
                    "f({name}) = {fv} is not zero"
                )));
            }
        }
        let fp_minus = fp.eval(self.z_minus)?;
        let fp_plus = fp.eval(self.z_plus)?;
        if fp_minus.abs() < 1e-12 || fp_plus.abs() < 1e-12 {
            return Err(Error::InvalidProblem(
                "f'(z_minus) = 0 or f'(z_plus) = 0, singularity not regular-linearizable".into(),
            ));
        }
        if fp_minus <= 0.0 {
            return Err(Error::InvalidProblem(format!(
                "f'(z_minus) = {fp_minus} must be positive (z_minus is the source)"
            )));
        }
        if fp_plus >= 0.0 {
            return Err(Error::InvalidProblem(format!(
                "f'(z_plus) = {fp_plus} must be negative (z_plus is the sink)"
            )));
        }
        for (r, name) in [(&self.g, "g"), (&self.h, "h")] {
            for z in [self.z_minus, self.z_plus] {
                r.eval(z).map_err(|_| {
                    Error::InvalidProblem(format!(
                        "{name} has a pole at z = {z} (must be holomorphic at the equilibria)"
                    ))
                })?;
            }
        }
        let lo = self.z_minus.min(self.z_plus);
        let hi = self.z_minus.max(self.z_plus);
        // f must not vanish strictly inside the heteroclinic segment
        for root in self.f.num_poly().roots()? {
            if root.im.abs() < 1e-9
                && root.re > lo + 1e-9
                && root.re < hi - 1e-9
            {
                return Err(Error::InvalidProblem(format!(
                    "f vanishes at z = {} inside the segment; no heteroclinic connects the endpoints",
                    root.re
                )));
            }
        }
        // coefficient functions must stay finite on the orbit
        for (r, name) in [(&self.g, "g"), (&self.h, "h")] {
            if r.den.len() > 1 {
                for root in r.den_poly().roots()? {
                    if root.im.abs() < 1e-9 && root.re >= lo - 1e-9 && root.re <= hi + 1e-9 {
                        return Err(Error::InvalidProblem(format!(
                            "{name} has a pole at z = {} on the heteroclinic segment",
                            root.re
                        )));
                    }
                }
            }
        }
        if !(self.gamma_init > lo && self.gamma_init < hi) {
            return Err(Error::InvalidProblem(
                "gamma_init must lie strictly between z_minus and z_plus".into(),
            ));
        }
        Ok(())
    }

    fn builtin(
        f: RationalFn,
        g: RationalFn,
        h: RationalFn,
        family: Family,
    ) -> Result<Self> {
        let p = SLProblem {
            f,
            g,
            h,
            z_minus: 0.0,
            z_plus: 1.0,
            gamma_init: 0.5,
            family,
            gamma_table: OnceLock::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn f_prime(&self) -> RationalFn {
        self.f.derivative()
    }

    pub fn endpoint_data(&self) -> AsymptoticData {
        let fp = self.f.derivative();
        // validity is checked at construction; these cannot fail
        AsymptoticData {
            mu_minus: self.g.eval(self.z_minus).unwrap(),
            mu_plus: self.g.eval(self.z_plus).unwrap(),
            nu_minus: self.h.eval(self.z_minus).unwrap(),
            nu_plus: self.h.eval(self.z_plus).unwrap(),
            a_minus: 1.0 / fp.eval(self.z_minus).unwrap(),
            a_plus: 1.0 / fp.eval(self.z_plus).unwrap(),
        }
    }

    /// The heteroclinic orbit value gamma(x).
    pub fn heteroclinic_value(&self, x: f64) -> f64 {
        self.heteroclinic_parts(x).0
    }

    /// (gamma(x), z_plus - gamma(x)), the second part computed without
    /// cancellation for the built-in families.
    pub fn heteroclinic_parts(&self, x: f64) -> (f64, f64) {
        match self.family {
            Family::Hulthen { .. } => sigmoid_parts(x),
            Family::AllenCahn { .. } => sigmoid_parts(x / std::f64::consts::SQRT_2),
            Family::Custom => {
                let g = self.gamma_numeric(x);
                (g, self.z_plus - g)
            }
        }
    }

    fn gamma_table(&self) -> &GammaTable {
        self.gamma_table.get_or_init(|| {
            let step = TABLE_STEP;
            let n_side = (TABLE_HALF_SPAN / step) as usize;
            let lo = self.z_minus.min(self.z_plus);
            let hi = self.z_minus.max(self.z_plus);
            let rhs = |_t: f64, y: &[C64; 1]| -> Result<[C64; 1]> {
                Ok([C64::new(self.f.eval(y[0].re).unwrap_or(0.0), 0.0)])
            };
            let clamp = move |_t: f64, y: &mut [C64; 1]| {
                y[0] = C64::new(y[0].re.clamp(lo, hi), 0.0);
            };
            let mut values = vec![0.0; 2 * n_side + 1];
            values[n_side] = self.gamma_init;
            let mut y = [C64::new(self.gamma_init, 0.0)];
            for i in 1..=n_side {
                y = ode::integrate_with(
                    rhs,
                    (i - 1) as f64 * step,
                    i as f64 * step,
                    y,
                    1e-12,
                    1e-14,
                    clamp,
                )
                .expect("heteroclinic integration is contracting and cannot fail");
                values[n_side + i] = y[0].re;
            }
            let mut y = [C64::new(self.gamma_init, 0.0)];
            for i in 1..=n_side {
                y = ode::integrate_with(
                    rhs,
                    -((i - 1) as f64) * step,
                    -(i as f64) * step,
                    y,
                    1e-12,
                    1e-14,
                    clamp,
                )
                .expect("heteroclinic integration is contracting and cannot fail");
                values[n_side - i] = y[0].re;
            }
            GammaTable {
                x_lo: -TABLE_HALF_SPAN,
                step,
                values,
            }
        })
    }

    fn gamma_numeric(&self, x: f64) -> f64 {
        let fp = self.f.derivative();
        if x > TABLE_HALF_SPAN {
            let table = self.gamma_table();
            let end = *table.values.last().unwrap();
            let rate = fp.eval(self.z_plus).unwrap();
            return self.z_plus + (end - self.z_plus) * (rate * (x - TABLE_HALF_SPAN)).exp();
        }
        if x < -TABLE_HALF_SPAN {
            let table = self.gamma_table();
            let start = table.values[0];
            let rate = fp.eval(self.z_minus).unwrap();
            return self.z_minus + (start - self.z_minus) * (rate * (x + TABLE_HALF_SPAN)).exp();
        }
        let table = self.gamma_table();
        let idx = (((x - table.x_lo) / table.step).floor() as isize)
            .clamp(0, table.values.len() as isize - 1) as usize;
        let x_anchor = table.x_lo + idx as f64 * table.step;
        let lo = self.z_minus.min(self.z_plus);
        let hi = self.z_minus.max(self.z_plus);
        let y = ode::integrate_with(
            |_t, y: &[C64; 1]| Ok([C64::new(self.f.eval(y[0].re).unwrap_or(0.0), 0.0)]),
            x_anchor,
            x,
            [C64::new(table.values[idx], 0.0)],
            1e-12,
            1e-14,
            |_t, y| y[0] = C64::new(y[0].re.clamp(lo, hi), 0.0),
        )
        .expect("heteroclinic integration is contracting and cannot fail");
        y[0].re
    }

    /// (mu(x), nu(x)) = (g(gamma(x)), h(gamma(x))).
    pub fn coefficient_values(&self, x: f64) -> Result<(f64, f64)> {
        match self.family {
            Family::Hulthen { a1, a2, a3 } => {
                // direct form, stable for large |x|
                let e = x.exp();
                let d = e + a1;
                Ok((0.0, a2 / d - a3 / (d * d)))
            }
            Family::AllenCahn { alpha } => {
                let phi = 1.0 / ((x / std::f64::consts::SQRT_2).exp() + 1.0);
                Ok((
                    std::f64::consts::SQRT_2 * (0.5 - alpha),
                    -3.0 * phi * phi + 2.0 * (alpha + 1.0) * phi - alpha,
                ))
            }
            Family::Custom => {
                let z = self.gamma_numeric(x);
                Ok((self.g.eval(z)?, self.h.eval(z)?))
            }
        }
    }

    /// sup over x of nu(x); closed-form for the built-in families,
    /// grid plus golden-section refinement otherwise.
    pub fn sup_nu(&self) -> f64 {
        match self.family {
            Family::Hulthen { a2, a3, .. } => a2 * a2 / (4.0 * a3),
            Family::AllenCahn { alpha } => (alpha * alpha - alpha + 1.0) / 3.0,
            Family::Custom => {
                let lo = self.z_minus.min(self.z_plus);
                let hi = self.z_minus.max(self.z_plus);
                let n = 2001;
                let eval = |z: f64| self.h.eval(z).unwrap_or(f64::NEG_INFINITY);
                let mut best_i = 0;
                let mut best = f64::NEG_INFINITY;
                for i in 0..n {
                    let z = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    let v = eval(z);
                    if v > best {
                        best = v;
                        best_i = i;
                    }
                }
                let step = (hi - lo) / (n - 1) as f64;
                let mut a = (lo + (best_i as f64 - 1.0) * step).max(lo);
                let mut b = (lo + (best_i as f64 + 1.0) * step).min(hi);
                // golden-section to 1e-10
                let phi = (5.0f64.sqrt() - 1.0) / 2.0;
                while b - a > 1e-10 {
                    let c = b - phi * (b - a);
                    let d = a + phi * (b - a);
                    if eval(c) > eval(d) {
                        b = d;
                    } else {
                        a = c;
                    }
                }
                eval(0.5 * (a + b)).max(best)
            }
        }
    }
}

fn sigmoid_parts(s: f64) -> (f64, f64) {
    if s >= 0.0 {
        let e = (-s).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = s.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

/// Generalized Hulthen potential family (f(z) = z(1-z)).
pub fn make_hulthen(a1: f64, a2: f64, a3: f64) -> Result<SLProblem> {
    if a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Hulthen parameters must be strictly positive, got ({a1}, {a2}, {a3})"
        )));
    }
    let f = RationalFn::polynomial(vec![0.0, 1.0, -1.0]);
    let g = RationalFn::constant(0.0);
    // h = [a2(z-1)d - a3(z-1)^2] / d^2 with d = (a1-1)z - a1
    let num = vec![
        a2 * a1 - a3,
        -a2 * (2.0 * a1 - 1.0) + 2.0 * a3,
        a2 * (a1 - 1.0) - a3,
    ];
    let den = vec![a1 * a1, -2.0 * a1 * (a1 - 1.0), (a1 - 1.0) * (a1 - 1.0)];
    let h = RationalFn::new(num, den)?;
    SLProblem::builtin(f, g, h, Family::Hulthen { a1, a2, a3 })
}

/// Allen-Cahn front linearization family (f(z) = z(1-z)/sqrt(2)).
pub fn make_allen_cahn(alpha: f64) -> Result<SLProblem> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Allen-Cahn parameter must satisfy 0 < alpha < 1, got {alpha}"
        )));
    }
    let s = 1.0 / std::f64::consts::SQRT_2;
    let f = RationalFn::polynomial(vec![0.0, s, -s]);
    let g = RationalFn::constant(std::f64::consts::SQRT_2 * (0.5 - alpha));
    let h = RationalFn::polynomial(vec![alpha - 1.0, 2.0 * (2.0 - alpha), -3.0]);
    SLProblem::builtin(f, g, h, Family::AllenCahn { alpha })
}

#[derive(Deserialize)]
struct RatCfg {
    num: Vec<f64>,
    den: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum ProblemConfig {
    Hulthen {
        params: [f64; 3],
    },
    AllenCahn {
        params: [f64; 1],
    },
    Custom {
        f: Vec<f64>,
        g: RatCfg,
        h: RatCfg,
        z_minus: f64,
        z_plus: f64,
        gamma_init: f64,
    },
}

/// Parse a problem config document (JSON, see the schema in the README).
pub fn parse_problem(document: &str) -> Result<SLProblem> {
    let cfg: ProblemConfig =
        serde_json::from_str(document).map_err(|e| Error::Config(e.to_string()))?;
    match cfg {
        ProblemConfig::Hulthen { params } => make_hulthen(params[0], params[1], params[2]),
        ProblemConfig::AllenCahn { params } => make_allen_cahn(params[0]),
        ProblemConfig::Custom {
            f,
            g,
            h,
            z_minus,
            z_plus,
            gamma_init,
        } => SLProblem::custom(
            RationalFn::polynomial(f),
            RationalFn::new(g.num, g.den)?,
            RationalFn::new(h.num, h.den)?,
            z_minus,
            z_plus,
            gamma_init,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hulthen_clone_custom() -> SLProblem {
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap();
        SLProblem::custom(h.f.clone(), h.g.clone(), h.h.clone(), 0.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn hulthen_construction() {
        let p = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let d = p.endpoint_data();
        assert!(d.nu_minus.abs() < 1e-12); // a2/a1 - a3/a1^2 = 0
        assert!(d.nu_plus.abs() < 1e-12);
        assert!((d.a_minus - 1.0).abs() < 1e-12);
        assert!((d.a_plus + 1.0).abs() < 1e-12);
        assert!(make_hulthen(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hulthen_pole_location() {
        // a1=2: h has a pole at z0 = a1/(a1-1) = 2, outside [0,1]
        let p = make_hulthen(2.0, 1.0, 1.0).unwrap();
        assert!(p.h.eval(2.0).is_err());
        assert!(p.h.eval(0.5).is_ok());
    }

    #[test]
    fn allen_cahn_construction() {
        let p = make_allen_cahn(0.3).unwrap();
        let d = p.endpoint_data();
        assert!((d.mu_minus - 0.2828427124746190).abs() < 1e-12);
        assert!((d.nu_minus - (-0.7)).abs() < 1e-12);
        assert!((d.nu_plus - (-0.3)).abs() < 1e-12);
        assert!((d.a_minus - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(make_allen_cahn(0.0).is_err());
        assert!(make_allen_cahn(1.0).is_err());

        let p = make_allen_cahn(0.5).unwrap();
        let d = p.endpoint_data();
        assert!(d.mu_minus.abs() < 1e-15);
        assert!((d.nu_minus + 0.5).abs() < 1e-12);
        assert!((d.nu_plus + 0.5).abs() < 1e-12);
    }

    #[test]
    fn heteroclinic_closed_forms() {
        let p = make_hulthen(1.0, 10.0, 10.0).unwrap();
        assert!((p.heteroclinic_value(0.0) - 0.5).abs() < 1e-15);
        let ac = make_allen_cahn(0.4).unwrap();
        let tail = 1.0 - ac.heteroclinic_value(30.0);
        assert!(tail > 0.0 && tail < (-30.0 / std::f64::consts::SQRT_2).exp() * 1.01);
    }

    #[test]
    fn custom_gamma_matches_closed_form() {
        let p = hulthen_clone_custom();
        for i in 0..=40 {
            let x = -20.0 + i as f64;
            let exact = 1.0 / (1.0 + (-x).exp());
            assert!(
                (p.heteroclinic_value(x) - exact).abs() < 1e-9,
                "x = {x}"
            );
        }
    }

    #[test]
    fn gamma_solves_the_flow() {
        // d/dx gamma = f(gamma) by central differences
        for p in [make_hulthen(1.0, 10.0, 10.0).unwrap(), make_allen_cahn(0.3).unwrap()] {
            for &x in &[-5.0, -1.0, 0.0, 0.7, 3.0] {
                let h = 1e-5;
                let d = (p.heteroclinic_value(x + h) - p.heteroclinic_value(x - h)) / (2.0 * h);
                let f = p.f.eval(p.heteroclinic_value(x)).unwrap();
                assert!((d - f).abs() < 1e-8, "x = {x}");
            }
        }
    }

    #[test]
    fn gamma_monotone() {
        let p = make_allen_cahn(0.62).unwrap();
        let mut prev = p.heteroclinic_value(-30.0);
        for i in 1..=60 {
            let v = p.heteroclinic_value(-30.0 + i as f64);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn coefficient_limits_decay_exponentially() {
        let p = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let d = p.endpoint_data();
        let ratio = |x: f64| {
            let (_, nu) = p.coefficient_values(x).unwrap();
            (nu - d.nu_plus).abs()
        };
        // |nu(x) - nu_plus| ~ e^{-x}: the decade ratio over 10 units is e^{-10}
        let r = ratio(20.0) / ratio(10.0);
        assert!(r < 3.0 * (-10.0f64).exp() && r > (-10.0f64).exp() / 3.0);
    }

    #[test]
    fn coefficient_values_examples() {
        let p = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let (mu, nu) = p.coefficient_values(0.0).unwrap();
        assert!(mu.abs() < 1e-15);
        assert!((nu - 2.5).abs() < 1e-12);

        let p = make_allen_cahn(0.3).unwrap();
        let (mu, _) = p.coefficient_values(7.3).unwrap();
        assert!((mu - 0.2828427124746190).abs() < 1e-12);

        let p = make_allen_cahn(0.5).unwrap();
        let (_, nu) = p.coefficient_values(0.0).unwrap();
        assert!((nu - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sup_nu_values() {
        assert!((make_hulthen(1.0, 10.0, 10.0).unwrap().sup_nu() - 2.5).abs() < 1e-12);
        assert!((make_allen_cahn(0.5).unwrap().sup_nu() - 0.25).abs() < 1e-12);
        let p = hulthen_clone_custom();
        assert!((p.sup_nu() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn parse_problem_variants() {
        let p = parse_problem(r#"{"family":"hulthen","params":[1,10,10]}"#).unwrap();
        assert!(matches!(p.family, Family::Hulthen { .. }));

        let hh = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let doc = format!(
            r#"{{"family":"custom","f":[0,1,-1],"g":{{"num":[0],"den":[1]}},"h":{{"num":{:?},"den":{:?}}},"z_minus":0,"z_plus":1,"gamma_init":0.5}}"#,
            hh.h.num, hh.h.den
        );
        let p = parse_problem(&doc).unwrap();
        assert!((p.heteroclinic_value(0.0) - 0.5).abs() < 1e-12);

        // f = z^2: f'(0) = 0 violates the linearizable-equilibrium assumption
        let bad = r#"{"family":"custom","f":[0,0,1],"g":{"num":[0],"den":[1]},"h":{"num":[1],"den":[1]},"z_minus":0,"z_plus":1,"gamma_init":0.5}"#;
        let err = parse_problem(bad).unwrap_err();
        assert!(err.to_string().contains("not zero") || err.to_string().contains("regular-linearizable"));
    }
}

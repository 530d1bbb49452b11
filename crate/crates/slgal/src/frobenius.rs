//! The complexified equation psi'' + p(z) psi' + q(z; lambda) psi = 0 on the
//! Riemann sphere: singularity census, indicial exponents, the three-point
//! symbol, and Moebius normalization of the singular locus to {0, 1, inf}.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use crate::problem::SLProblem;

const MATCH_TOL: f64 = 1e-8;
/// Generic probe for lambda-independent structure queries; off the real
/// axis so h(z) - lambda cannot cancel a denominator root.
const PROBE_LAMBDA: C64 = C64::new(0.37, 0.21);

pub struct ComplexODE {
    /// (g + f')/f
    pub p: Rat,
    f: Poly,
    hn: Poly,
    hd: Poly,
    /// hd * f^2
    q_den: Poly,
}

impl ComplexODE {
    pub fn q_rat(&self, lambda: C64) -> Rat {
        // (h - lambda)/f^2 = (hn - lambda*hd) / (hd*f^2)
        Rat::new(self.hn.sub(&self.hd.scale(lambda)), self.q_den.clone())
            .expect("q denominator is nonzero by construction")
    }

    pub fn p_at(&self, z: C64) -> Result<C64> {
        self.p.eval(z)
    }

    pub fn q_at(&self, z: C64, lambda: C64) -> Result<C64> {
        self.q_rat(lambda).eval(z)
    }

    pub fn f_at(&self, z: C64) -> C64 {
        self.f.eval(z)
    }
}

pub fn transformed_equation(p: &SLProblem) -> ComplexODE {
    let f = p.f.num_poly();
    let gn = p.g.num_poly();
    let gd = p.g.den_poly();
    let hn = p.h.num_poly();
    let hd = p.h.den_poly();
    let p_rat = Rat::new(gn.add(&f.derivative().mul(&gd)), gd.mul(&f))
        .expect("f is a nonzero polynomial");
    let q_den = hd.mul(&f).mul(&f);
    ComplexODE {
        p: p_rat,
        f,
        hn,
        hd,
        q_den,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Location {
    Finite(C64),
    Infinity,
}

impl Location {
    pub fn close_to(&self, z: f64) -> bool {
        match self {
            Location::Finite(w) => (w - z).norm() < MATCH_TOL * (1.0 + z.abs()),
            Location::Infinity => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingKind {
    Regular,
    Irregular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingSource {
    ZeroOfF,
    PoleOfG,
    PoleOfH,
    Infinity,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingularPoint {
    pub location: Location,
    pub kind: SingKind,
    pub source: SingSource,
}

/// All singular points of the equation on the sphere, deduplicated; the
/// kind comes from the pole orders of p (at most 1) and q (at most 2).
pub fn singularities(p: &SLProblem) -> Result<Vec<SingularPoint>> {
    let ode = transformed_equation(p);
    let q = ode.q_rat(PROBE_LAMBDA);
    let mut candidates: Vec<(C64, SingSource)> = Vec::new();
    let push = |z: C64, src: SingSource, list: &mut Vec<(C64, SingSource)>| {
        if !list
            .iter()
            .any(|(w, _)| (w - z).norm() < MATCH_TOL * (1.0 + z.norm()))
        {
            list.push((z, src));
        }
    };
    for (z, _) in ode.f.clustered_roots()? {
        push(z, SingSource::ZeroOfF, &mut candidates);
    }
    if p.g.den.len() > 1 {
        for (z, _) in p.g.den_poly().clustered_roots()? {
            push(z, SingSource::PoleOfG, &mut candidates);
        }
    }
    if p.h.den.len() > 1 {
        for (z, _) in p.h.den_poly().clustered_roots()? {
            push(z, SingSource::PoleOfH, &mut candidates);
        }
    }
    let mut out = Vec::new();
    for (z, source) in candidates {
        let op = ode.p.pole_order_at(z);
        let oq = q.pole_order_at(z);
        if op <= 0 && oq <= 0 {
            continue; // removable, ordinary point
        }
        let kind = if op <= 1 && oq <= 2 {
            SingKind::Regular
        } else {
            SingKind::Irregular
        };
        out.push(SingularPoint {
            location: Location::Finite(z),
            kind,
            source,
        });
    }
    // w = 1/z pullback: P(w) = 2/w - p(1/w)/w^2, Q(w) = q(1/w)/w^4
    let (cap_p, cap_q) = infinity_pullback(&ode, PROBE_LAMBDA);
    let zero = C64::new(0.0, 0.0);
    let op = cap_p.pole_order_at(zero);
    let oq = cap_q.pole_order_at(zero);
    if op > 0 || oq > 0 {
        let kind = if op <= 1 && oq <= 2 {
            SingKind::Regular
        } else {
            SingKind::Irregular
        };
        out.push(SingularPoint {
            location: Location::Infinity,
            kind,
            source: SingSource::Infinity,
        });
    }
    out.sort_by(|a, b| match (&a.location, &b.location) {
        (Location::Finite(x), Location::Finite(y)) => (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .unwrap(),
        (Location::Finite(_), Location::Infinity) => std::cmp::Ordering::Less,
        (Location::Infinity, Location::Finite(_)) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    Ok(out)
}

fn infinity_pullback(ode: &ComplexODE, lambda: C64) -> (Rat, Rat) {
    let w = Poly::monomial(1);
    let two_over_w = Rat::new(Poly::from_real(&[2.0]), w.clone()).unwrap();
    let inv_w2 = Rat::new(Poly::one(), w.mul(&w)).unwrap();
    let inv_w4 = Rat::new(Poly::one(), w.mul(&w).mul(&w).mul(&w)).unwrap();
    let cap_p = two_over_w.sub(&ode.p.subst_recip().mul(&inv_w2));
    let cap_q = ode.q_rat(lambda).subst_recip().mul(&inv_w4);
    (cap_p, cap_q)
}

fn order_pair(r1: C64, r2: C64) -> (C64, C64) {
    if (r1.re, r1.im) >= (r2.re, r2.im) {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

fn quadratic_roots(b: C64, c: C64) -> (C64, C64) {
    // roots of s^2 + b s + c, ordered
    let d = (b * b - 4.0 * c).sqrt();
    order_pair((-b + d) / 2.0, (-b - d) / 2.0)
}

/// Local exponents at a regular singular point, larger real part first.
pub fn indicial_roots(
    p: &SLProblem,
    point: &SingularPoint,
    lambda: C64,
) -> Result<(C64, C64)> {
    if point.kind != SingKind::Regular {
        return Err(Error::Unsupported(format!(
            "irregular singular point at {:?}; indicial analysis requires a regular point",
            point.location
        )));
    }
    let d = p.endpoint_data();
    match point.location {
        Location::Finite(_) if point.location.close_to(p.z_minus) => {
            let a = d.a_minus;
            Ok(quadratic_roots(
                C64::new(a * d.mu_minus, 0.0),
                a * a * (d.nu_minus - lambda),
            ))
        }
        Location::Finite(_) if point.location.close_to(p.z_plus) => {
            let a = d.a_plus;
            Ok(quadratic_roots(
                C64::new(a * d.mu_plus, 0.0),
                a * a * (d.nu_plus - lambda),
            ))
        }
        Location::Finite(z) => {
            // s(s-1) + p1 s + q2 with p1 = lim (z-z0)p, q2 = lim (z-z0)^2 q
            let ode = transformed_equation(p);
            let p1 = ode.p.limit_mul_power(z, 1)?;
            let q2 = ode.q_rat(lambda).limit_mul_power(z, 2)?;
            Ok(quadratic_roots(p1 - 1.0, q2))
        }
        Location::Infinity => {
            let ode = transformed_equation(p);
            let (cap_p, cap_q) = infinity_pullback(&ode, lambda);
            let zero = C64::new(0.0, 0.0);
            let p1 = cap_p.limit_mul_power(zero, 1)?;
            let q2 = cap_q.limit_mul_power(zero, 2)?;
            Ok(quadratic_roots(p1 - 1.0, q2))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PSymbol {
    /// ordered (z_minus, z_plus, third)
    pub points: [SingularPoint; 3],
    /// (rho_j^+, rho_j^-) pairs, "+" meaning larger real part
    pub exponents: [(C64, C64); 3],
    /// pair differs by an integer (log solutions possible)
    pub resonant: [bool; 3],
}

impl PSymbol {
    pub fn differences(&self) -> [C64; 3] {
        [
            self.exponents[0].0 - self.exponents[0].1,
            self.exponents[1].0 - self.exponents[1].1,
            self.exponents[2].0 - self.exponents[2].1,
        ]
    }

    pub fn exponent_sum(&self) -> C64 {
        self.exponents
            .iter()
            .map(|(a, b)| a + b)
            .sum()
    }
}

fn is_resonant(diff: C64) -> bool {
    diff.im.abs() < 1e-9 && (diff.re - diff.re.round()).abs() < 1e-9
}

/// Three-point symbol of the equation; errors when the singularity census
/// is not exactly three regular points.
pub fn p_symbol(p: &SLProblem, lambda: C64) -> Result<PSymbol> {
    let sings = singularities(p)?;
    if sings.len() != 3 {
        return Err(Error::OutOfScope(format!(
            "equation has {} singularities on the sphere ({:?}); only the three-point case is supported",
            sings.len(),
            sings.iter().map(|s| s.location).collect::<Vec<_>>()
        )));
    }
    if let Some(bad) = sings.iter().find(|s| s.kind != SingKind::Regular) {
        return Err(Error::OutOfScope(format!(
            "irregular singular point at {:?}",
            bad.location
        )));
    }
    let find = |z: f64| -> Result<SingularPoint> {
        sings
            .iter()
            .find(|s| s.location.close_to(z))
            .copied()
            .ok_or_else(|| {
                Error::InvalidProblem(format!("expected singular point at z = {z} is missing"))
            })
    };
    let s_minus = find(p.z_minus)?;
    let s_plus = find(p.z_plus)?;
    let third = sings
        .iter()
        .find(|s| !s.location.close_to(p.z_minus) && !s.location.close_to(p.z_plus))
        .copied()
        .ok_or_else(|| Error::InvalidProblem("third singular point is missing".into()))?;
    let points = [s_minus, s_plus, third];
    let mut exponents = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 3];
    let mut resonant = [false; 3];
    for (i, pt) in points.iter().enumerate() {
        let pair = indicial_roots(p, pt, lambda)?;
        resonant[i] = is_resonant(pair.0 - pair.1);
        exponents[i] = pair;
    }
    Ok(PSymbol {
        points,
        exponents,
        resonant,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusMap {
    pub fn identity() -> Self {
        MobiusMap {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.b == 0.0 && self.c == 0.0 && self.a == self.d
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// (zeta, 1 - zeta) with the complement formed before division so the
    /// two parts stay accurate near both anchors.
    pub fn apply_with_complement(&self, z: C64) -> (C64, C64) {
        let den = self.c * z + self.d;
        let num = self.a * z + self.b;
        (num / den, (den - num) / den)
    }
}

/// The Moebius map carrying (z_minus, z_plus, third) to (0, 1, inf) and the
/// relabelled symbol; exponents are carried over unchanged.
pub fn normalize_to_01inf(p: &SLProblem, ps: &PSymbol) -> Result<(MobiusMap, PSymbol)> {
    let z1 = p.z_minus;
    let z2 = p.z_plus;
    let map = match ps.points[2].location {
        Location::Infinity => {
            if z1 == 0.0 && z2 == 1.0 {
                MobiusMap::identity()
            } else {
                MobiusMap {
                    a: 1.0,
                    b: -z1,
                    c: 0.0,
                    d: z2 - z1,
                }
            }
        }
        Location::Finite(t) => {
            if t.im.abs() > 1e-9 * (1.0 + t.norm()) {
                return Err(Error::Geometry(format!(
                    "third singular point {t} is not real; normalization undefined"
                )));
            }
            let t = t.re;
            // zeta = (z - z1)(z2 - t) / ((z - t)(z2 - z1))
            MobiusMap {
                a: z2 - t,
                b: -z1 * (z2 - t),
                c: z2 - z1,
                d: -t * (z2 - z1),
            }
        }
    };
    let mut normalized = ps.clone();
    normalized.points = [
        SingularPoint {
            location: Location::Finite(C64::new(0.0, 0.0)),
            ..ps.points[0]
        },
        SingularPoint {
            location: Location::Finite(C64::new(1.0, 0.0)),
            ..ps.points[1]
        },
        SingularPoint {
            location: Location::Infinity,
            ..ps.points[2]
        },
    ];
    Ok((map, normalized))
}

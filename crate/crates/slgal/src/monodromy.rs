//! Numerical monodromy: continuation of the fundamental matrix along
//! complex paths, loop matrices around the singular points, and the
//! common-eigenvector triangularizability test.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{
    indicial_roots, singularities, transformed_equation, ComplexODE, Location, SingularPoint,
};
use crate::matrix::{principal_angle, Matrix2C};
use crate::ode;
use crate::problem::SLProblem;

pub const MIN_CLEARANCE: f64 = 0.05;
pub const ANGLE_TOL: f64 = 1e-6;
const CIRCLE_SIDES: usize = 32;
const RTOL: f64 = 1e-11;
const ATOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct ComplexPath {
    pub waypoints: Vec<C64>,
    pub closed: bool,
}

fn seg_point_dist(a: C64, b: C64, p: C64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

impl ComplexPath {
    pub fn new(waypoints: Vec<C64>, closed: bool) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::Geometry("path needs at least two waypoints".into()));
        }
        for w in waypoints.windows(2) {
            if (w[1] - w[0]).norm() < 1e-14 {
                return Err(Error::Geometry("repeated consecutive waypoint".into()));
            }
        }
        if closed && (waypoints[0] - waypoints[waypoints.len() - 1]).norm() > 1e-12 {
            return Err(Error::Geometry("closed path must end at its start".into()));
        }
        Ok(ComplexPath { waypoints, closed })
    }

    pub fn clearance(&self, sings: &[C64]) -> f64 {
        let mut best = f64::INFINITY;
        for w in self.waypoints.windows(2) {
            for &s in sings {
                best = best.min(seg_point_dist(w[0], w[1], s));
            }
        }
        best
    }

    fn check_clearance(&self, sings: &[C64]) -> Result<()> {
        let c = self.clearance(sings);
        if c < MIN_CLEARANCE {
            return Err(Error::Geometry(format!(
                "path passes within {c:.4} of a singularity (minimum clearance {MIN_CLEARANCE})"
            )));
        }
        Ok(())
    }
}

/// Continuation of the fundamental matrix (identity at the start) along
/// the path; columns are (psi, psi') solution vectors.
pub fn fundamental_along_path(
    ode_sys: &ComplexODE,
    lambda: C64,
    path: &ComplexPath,
) -> Result<Matrix2C> {
    let q = ode_sys.q_rat(lambda);
    let mut y = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    ];
    for w in path.waypoints.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        let dz = z1 - z0;
        y = ode::integrate(
            |t, y: &[C64; 4]| {
                let z = z0 + t * dz;
                let p = ode_sys.p_at(z)?;
                let qv = q.eval(z)?;
                // columns [y0,y1] and [y2,y3] obey (psi, psi')' = dz*(psi', -p psi' - q psi)
                Ok([
                    dz * y[1],
                    dz * (-p * y[1] - qv * y[0]),
                    dz * y[3],
                    dz * (-p * y[3] - qv * y[2]),
                ])
            },
            0.0,
            1.0,
            y,
            RTOL,
            ATOL,
        )?;
    }
    Ok(Matrix2C {
        a11: y[0],
        a12: y[2],
        a21: y[1],
        a22: y[3],
    })
}

fn finite_singularity_locations(p: &SLProblem) -> Result<Vec<C64>> {
    Ok(singularities(p)?
        .into_iter()
        .filter_map(|s| match s.location {
            Location::Finite(z) => Some(z),
            Location::Infinity => None,
        })
        .collect())
}

/// Base point for loops: the midpoint of the heteroclinic segment, pushed
/// off the axis when a third singularity crowds the segment's midline.
pub fn default_base(p: &SLProblem) -> Result<C64> {
    let mid = C64::new(0.5 * (p.z_minus + p.z_plus), 0.0);
    let sings = finite_singularity_locations(p)?;
    let crowding = sings.iter().any(|&s| {
        !Location::Finite(s).close_to(p.z_minus)
            && !Location::Finite(s).close_to(p.z_plus)
            && (s - mid).norm() < 0.25 * (p.z_plus - p.z_minus).abs()
    });
    Ok(if crowding {
        mid + C64::new(0.0, 0.1 * (p.z_plus - p.z_minus).abs())
    } else {
        mid
    })
}

pub fn default_radius(p: &SLProblem) -> f64 {
    0.4 * (p.z_plus - p.z_minus).abs()
}

fn loop_path(center: C64, radius: f64, base: C64, clockwise: bool) -> Result<ComplexPath> {
    let dir = {
        let v = base - center;
        if v.norm() < 1e-12 {
            C64::new(1.0, 0.0)
        } else {
            v / v.norm()
        }
    };
    let entry = center + radius * dir;
    let theta0 = dir.im.atan2(dir.re);
    let sign = if clockwise { -1.0 } else { 1.0 };
    let mut wp = Vec::with_capacity(CIRCLE_SIDES + 3);
    if (base - entry).norm() > 1e-12 {
        wp.push(base);
    }
    for i in 0..=CIRCLE_SIDES {
        let th = theta0 + sign * std::f64::consts::TAU * i as f64 / CIRCLE_SIDES as f64;
        wp.push(center + radius * C64::new(th.cos(), th.sin()));
    }
    if (base - entry).norm() > 1e-12 {
        wp.push(base);
    }
    ComplexPath::new(wp, true)
}

/// Big clockwise circle in the z chart, i.e. a counterclockwise loop
/// around infinity, entered vertically from the base.
fn infinity_loop(base: C64, radius: f64) -> Result<ComplexPath> {
    let top = C64::new(base.re, radius);
    let theta0 = top.im.atan2(top.re);
    let r = top.norm();
    let mut wp = vec![base, top];
    for i in 1..=CIRCLE_SIDES {
        let th = theta0 - std::f64::consts::TAU * i as f64 / CIRCLE_SIDES as f64;
        wp.push(r * C64::new(th.cos(), th.sin()));
    }
    wp.push(base);
    ComplexPath::new(wp, true)
}

fn exclude_near(sings: &[C64], z: C64) -> Vec<C64> {
    sings
        .iter()
        .copied()
        .filter(|s| (s - z).norm() > 1e-9)
        .collect()
}

/// Loop matrix around a singular point: segment to the circle, the circle
/// once around, and back.
pub fn monodromy_matrix(
    p: &SLProblem,
    lambda: C64,
    around: &SingularPoint,
    base: C64,
    radius: f64,
) -> Result<Matrix2C> {
    let ode_sys = transformed_equation(p);
    let sings = finite_singularity_locations(p)?;
    let path = match around.location {
        Location::Finite(z) => {
            let others = exclude_near(&sings, z);
            for &s in &others {
                if (s - z).norm() < radius + MIN_CLEARANCE {
                    return Err(Error::Geometry(format!(
                        "circle of radius {radius} around {z} comes too close to the singularity at {s}"
                    )));
                }
            }
            let path = loop_path(z, radius, base, false)?;
            path.check_clearance(&others)?;
            if path.clearance(&[z]) < MIN_CLEARANCE {
                return Err(Error::Geometry("loop touches its own center".into()));
            }
            path
        }
        Location::Infinity => {
            // just big enough to enclose every finite singularity with
            // clearance; growth along the circle amplifies integration error
            let far = sings.iter().map(|s| s.norm()).fold(0.0, f64::max);
            let r = radius.max(far + 6.0 * MIN_CLEARANCE).max(base.norm() + 6.0 * MIN_CLEARANCE);
            let path = infinity_loop(base, r)?;
            path.check_clearance(&sings)?;
            path
        }
    };
    fundamental_along_path(&ode_sys, lambda, &path)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyResult {
    pub m_minus: Matrix2C,
    pub m_plus: Matrix2C,
    pub base_point: C64,
    pub common_eigenvector: Option<[C64; 2]>,
    pub triangularizable: bool,
    pub angle: f64,
}

/// Smallest principal angle between eigendirections of the two matrices;
/// scalar matrices match anything, defective ones contribute their single
/// direction.
pub fn common_eigenvector_test(
    m1: &Matrix2C,
    m2: &Matrix2C,
    tol: f64,
) -> Result<(bool, Option<[C64; 2]>, f64)> {
    for m in [m1, m2] {
        if m.det().norm() < 1e-12 {
            return Err(Error::Numeric("non-invertible monodromy matrix".into()));
        }
    }
    if m1.is_scalar() {
        let v = m2.eigendirections()[0];
        return Ok((true, Some(v), 0.0));
    }
    if m2.is_scalar() {
        let v = m1.eigendirections()[0];
        return Ok((true, Some(v), 0.0));
    }
    let d1 = m1.eigendirections();
    let d2 = m2.eigendirections();
    let mut best = f64::INFINITY;
    let mut vec = d1[0];
    for u in &d1 {
        for v in &d2 {
            let a = principal_angle(u, v);
            if a < best {
                best = a;
                vec = *u;
            }
        }
    }
    Ok((best < tol, Some(vec), best))
}

/// Monodromy around both endpoint singularities from the default base,
/// with the common-eigenvector verdict.
pub fn monodromy_pair(p: &SLProblem, lambda: C64, tol: f64) -> Result<MonodromyResult> {
    let sings = singularities(p)?;
    let base = default_base(p)?;
    let radius = default_radius(p);
    let find = |z: f64| -> Result<SingularPoint> {
        sings
            .iter()
            .find(|s| s.location.close_to(z))
            .copied()
            .ok_or_else(|| Error::InvalidProblem(format!("no singular point at z = {z}")))
    };
    let m_minus = monodromy_matrix(p, lambda, &find(p.z_minus)?, base, radius)?;
    let m_plus = monodromy_matrix(p, lambda, &find(p.z_plus)?, base, radius)?;
    let (tri, vec, angle) = common_eigenvector_test(&m_minus, &m_plus, tol)?;
    Ok(MonodromyResult {
        m_minus,
        m_plus,
        base_point: base,
        common_eigenvector: vec,
        triangularizable: tri,
        angle,
    })
}

/// Compares the numeric loop eigenvalues with {e^{2 pi i rho}} from the
/// indicial exponents, matched as a set.
pub fn monodromy_eigen_check(
    p: &SLProblem,
    lambda: C64,
    around: &SingularPoint,
    tol: f64,
) -> Result<bool> {
    let base = default_base(p)?;
    let m = monodromy_matrix(p, lambda, around, base, default_radius(p))?;
    let (e1, e2) = m.eigenvalues();
    let (rp, rm) = indicial_roots(p, around, lambda)?;
    let tau = std::f64::consts::TAU;
    let wp = (C64::new(0.0, tau) * rp).exp();
    let wm = (C64::new(0.0, tau) * rm).exp();
    if (wp - wm).norm() < tol.sqrt() {
        // coincident predicted pair: the matrix is (nearly) defective and
        // the computed eigenvalues split by the square root of the matrix
        // error, so test the well-conditioned invariants instead
        let d = (m.trace() - (wp + wm)).norm().max((m.det() - wp * wm).norm());
        return Ok(d < tol);
    }
    let d_direct = (e1 - wp).norm().max((e2 - wm).norm());
    let d_swapped = (e1 - wm).norm().max((e2 - wp).norm());
    Ok(d_direct.min(d_swapped) < tol)
}

/// || M_inf * M_plus * M_minus - I || for the three loops based at the
/// same point with non-crossing tails.
pub fn cycle_defect(p: &SLProblem, lambda: C64) -> Result<f64> {
    let sings = singularities(p)?;
    if sings.len() != 3 {
        return Err(Error::OutOfScope(
            "cycle relation requires exactly three singularities".into(),
        ));
    }
    let base = default_base(p)?;
    let radius = default_radius(p);
    let mats: Result<Vec<Matrix2C>> = [p.z_minus, p.z_plus]
        .iter()
        .map(|&z| {
            let s = sings
                .iter()
                .find(|s| s.location.close_to(z))
                .copied()
                .ok_or_else(|| Error::InvalidProblem(format!("no singular point at {z}")))?;
            monodromy_matrix(p, lambda, &s, base, radius)
        })
        .collect();
    let mats = mats?;
    let third = sings
        .iter()
        .find(|s| !s.location.close_to(p.z_minus) && !s.location.close_to(p.z_plus))
        .copied()
        .unwrap();
    let m_third = monodromy_matrix(p, lambda, &third, base, radius)?;
    let prod = m_third.mul(&mats[1]).mul(&mats[0]);
    Ok(prod.sub(&Matrix2C::identity()).norm())
}

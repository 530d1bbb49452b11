//! Triangularizability of the monodromy group via the odd-integer test on
//! signed sums of exponent differences, and enumeration of candidate
//! eigenvalues by solving the signed-sum equation in closed form (with a
//! numeric scan fallback).

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::asymptotics::Side;
use crate::error::{Error, Result};
use crate::frobenius::{p_symbol, Location, PSymbol};
use crate::par;
use crate::problem::SLProblem;

pub const KIMURA_TOL: f64 = 1e-8;
const BACKSUB_TOL: f64 = 1e-9;
const TERMINATION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KimuraReport {
    /// the four signed sums of exponent differences, fixed order:
    /// +++, -++, +-+, ++-
    pub sums: [C64; 4],
    pub best_index: usize,
    pub nearest_odd: i64,
    pub distance: f64,
    pub triangularizable: bool,
}

fn nearest_odd(x: f64) -> i64 {
    2 * ((x - 1.0) / 2.0).round() as i64 + 1
}

pub fn kimura_sums(ps: &PSymbol) -> [C64; 4] {
    let [d1, d2, d3] = ps.differences();
    [d1 + d2 + d3, -d1 + d2 + d3, d1 - d2 + d3, d1 + d2 - d3]
}

fn report_from_sums(sums: [C64; 4], tol: f64) -> KimuraReport {
    let mut best_index = 0;
    let mut nearest = 1i64;
    let mut distance = f64::INFINITY;
    for (i, s) in sums.iter().enumerate() {
        let n = nearest_odd(s.re);
        let d = (s - n as f64).norm();
        if d < distance {
            distance = d;
            nearest = n;
            best_index = i;
        }
    }
    KimuraReport {
        sums,
        best_index,
        nearest_odd: nearest,
        distance,
        triangularizable: distance < tol,
    }
}

pub fn is_triangularizable(p: &SLProblem, lambda: C64, tol: f64) -> Result<KimuraReport> {
    let ps = p_symbol(p, lambda)?;
    Ok(report_from_sums(kimura_sums(&ps), tol))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CandidateEigenvalue {
    pub lambda: C64,
    pub k: i64,
    pub sign_pattern: (i8, i8, i8),
    pub verified_decay: bool,
    pub kimura_distance: f64,
}

/// r_i(lambda)^2 = A_i lambda + B_i at each endpoint, the squared exponent
/// difference as an affine function of lambda.
struct EdgeDiff {
    a: f64,
    b: f64,
}

impl EdgeDiff {
    fn at(p: &SLProblem, side: Side) -> EdgeDiff {
        let d = p.endpoint_data();
        let (aa, mu, nu) = match side {
            Side::Minus => (d.a_minus, d.mu_minus, d.nu_minus),
            Side::Plus => (d.a_plus, d.mu_plus, d.nu_plus),
        };
        EdgeDiff {
            a: 4.0 * aa * aa,
            b: aa * aa * (mu * mu - 4.0 * nu),
        }
    }

    fn r(&self, lambda: f64) -> f64 {
        (self.a * lambda + self.b).max(0.0).sqrt()
    }
}

/// Constant third exponent difference, verified lambda-independent.
fn rho3(p: &SLProblem) -> Result<f64> {
    let ps1 = p_symbol(p, C64::new(0.11, 0.0))?;
    let ps2 = p_symbol(p, C64::new(0.73, 0.0))?;
    if let Location::Finite(t) = ps1.points[2].location {
        let f = p.f.num_poly();
        if f.eval(t).norm() < 1e-9 * f.coeffs().iter().map(|c| c.norm()).sum::<f64>() {
            return Err(Error::Unsupported(
                "third singular point is an equilibrium of f, so its exponent difference varies with lambda; use scan_eigenvalues".into(),
            ));
        }
    }
    let d1 = ps1.differences()[2];
    let d2 = ps2.differences()[2];
    if (d1 - d2).norm() > 1e-8 || d1.im.abs() > 1e-9 {
        return Err(Error::Unsupported(
            "third exponent difference depends on lambda; use scan_eigenvalues".into(),
        ));
    }
    Ok(d1.re)
}

pub fn default_window(p: &SLProblem) -> (f64, f64) {
    let d = p.endpoint_data();
    (d.nu_minus.max(d.nu_plus) + 1e-9, p.sup_nu())
}

/// Terminating-series test at a real candidate: with the larger exponents
/// e0, e1 at the finite points and (r3p, r3m) at the third, one of
/// e0+e1+r3p or e0+e1+r3m must be a non-positive integer for the bounded
/// local solution to be polynomial-tailed at both ends.
fn terminates(p: &SLProblem, lambda: f64) -> bool {
    let ps = match p_symbol(p, C64::new(lambda, 0.0)) {
        Ok(ps) => ps,
        Err(_) => return false,
    };
    let e0 = ps.exponents[0].0;
    let e1 = ps.exponents[1].0;
    for r3 in [ps.exponents[2].0, ps.exponents[2].1] {
        let v = e0 + e1 + r3;
        if v.im.abs() < TERMINATION_TOL
            && (v.re - v.re.round()).abs() < TERMINATION_TOL
            && v.re.round() <= 0.5
        {
            return true;
        }
    }
    false
}

fn decays_both(p: &SLProblem, lambda: f64) -> bool {
    // strictly inside the decay region; boundary-exact candidates are the
    // continuous-spectrum edge, not discrete eigenvalues
    let d = p.endpoint_data();
    let l = C64::new(lambda, 0.0);
    crate::asymptotics::decay_margin(&d, l, Side::Minus) > crate::asymptotics::BOUNDARY_TOL
        && crate::asymptotics::decay_margin(&d, l, Side::Plus) > crate::asymptotics::BOUNDARY_TOL
}

const PATTERNS: [(i8, i8, i8); 8] = [
    (1, 1, -1),
    (1, 1, 1),
    (1, -1, 1),
    (1, -1, -1),
    (-1, 1, 1),
    (-1, 1, -1),
    (-1, -1, 1),
    (-1, -1, -1),
];

/// Solutions of s1 r1 + s2 r2 = m - s3 rho3 on [lo, hi]; roots of the
/// double-squared polynomial, Newton-polished and verified against the
/// unsquared equation.
fn solve_branch(
    e1: &EdgeDiff,
    e2: &EdgeDiff,
    s1: f64,
    s2: f64,
    rhs: f64,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let resid = |l: f64| s1 * e1.r(l) + s2 * e2.r(l) - rhs;
    let c = e1.a - e2.a;
    let g = rhs * rhs - (e1.b - e2.b);
    let mut raw: Vec<f64> = Vec::new();
    if rhs.abs() < 1e-12 {
        // r1 = -s1 s2 r2; admissible only when the squares agree
        if c.abs() > 1e-12 {
            raw.push(-(e1.b - e2.b) / c);
        } else if e1.a.abs() > 1e-12 {
            raw.push(-e1.b / e1.a);
        }
    } else {
        // (c l - g)^2 = 4 rhs^2 (a2 l + b2)
        let qa = c * c;
        let qb = -(2.0 * c * g + 4.0 * rhs * rhs * e2.a);
        let qc = g * g - 4.0 * rhs * rhs * e2.b;
        let scale = qa.abs().max(qb.abs()).max(qc.abs()).max(1.0);
        if qa.abs() < 1e-12 * scale {
            if qb.abs() > 1e-12 * scale {
                raw.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= -1e-10 * scale * scale {
                let sd = disc.max(0.0).sqrt();
                raw.push((-qb + sd) / (2.0 * qa));
                raw.push((-qb - sd) / (2.0 * qa));
            }
        }
    }
    let mut out = Vec::new();
    for mut l in raw {
        if !l.is_finite() {
            continue;
        }
        // Newton polish on the unsquared equation
        for _ in 0..4 {
            let (r1, r2) = (e1.r(l), e2.r(l));
            if r1 < 1e-12 || r2 < 1e-12 {
                break;
            }
            let f = s1 * r1 + s2 * r2 - rhs;
            let df = s1 * e1.a / (2.0 * r1) + s2 * e2.a / (2.0 * r2);
            if df.abs() < 1e-14 {
                break;
            }
            l -= f / df;
        }
        if l >= lo - 1e-12 && l <= hi + 1e-12 && resid(l).abs() < BACKSUB_TOL {
            out.push(l.clamp(lo, hi));
        }
    }
    out
}

/// Closed-form enumeration of real candidate eigenvalues on [lo, hi]:
/// every sign pattern, every reachable odd integer, filtered by the decay
/// conditions at both ends and by series termination.
pub fn candidate_eigenvalues(
    p: &SLProblem,
    lambda_min: f64,
    lambda_max: f64,
) -> Result<Vec<CandidateEigenvalue>> {
    if lambda_min >= lambda_max {
        return Err(Error::InvalidParameter(format!(
            "empty search range [{lambda_min}, {lambda_max}]"
        )));
    }
    let r3 = rho3(p)?;
    let e1 = EdgeDiff::at(p, Side::Minus);
    let e2 = EdgeDiff::at(p, Side::Plus);
    let jobs: Vec<((i8, i8, i8), i64)> = PATTERNS
        .iter()
        .flat_map(|&pat| {
            let (s1, s2, s3) = (pat.0 as f64, pat.1 as f64, pat.2 as f64);
            let sum_at = |l: f64| s1 * e1.r(l) + s2 * e2.r(l) + s3 * r3;
            let (a, b) = (sum_at(lambda_min), sum_at(lambda_max));
            let (lo, hi) = (a.min(b), a.max(b));
            let m_lo = nearest_odd(lo - 1.0).max(nearest_odd(lo) - 2);
            let m_hi = nearest_odd(hi + 1.0);
            (0..)
                .map(move |i| m_lo + 2 * i)
                .take_while(move |&m| m <= m_hi)
                .filter(move |&m| (m as f64) >= lo - 1e-9 && (m as f64) <= hi + 1e-9)
                .map(move |m| (pat, m))
        })
        .collect();
    let found: Vec<Vec<CandidateEigenvalue>> = par::map_collect(&jobs, |&(pat, m)| {
        let (s1, s2, s3) = (pat.0 as f64, pat.1 as f64, pat.2 as f64);
        solve_branch(&e1, &e2, s1, s2, m as f64 - s3 * r3, lambda_min, lambda_max)
            .into_iter()
            .filter(|&l| decays_both(p, l) && terminates(p, l))
            .map(|l| {
                let resid = s1 * e1.r(l) + s2 * e2.r(l) + s3 * r3 - m as f64;
                CandidateEigenvalue {
                    lambda: C64::new(l, 0.0),
                    k: (m - 1) / 2,
                    sign_pattern: pat,
                    verified_decay: true,
                    kimura_distance: resid.abs(),
                }
            })
            .collect()
    });
    let mut all: Vec<(usize, CandidateEigenvalue)> = Vec::new();
    for (job_idx, list) in found.into_iter().enumerate() {
        let pat_priority = PATTERNS
            .iter()
            .position(|&q| q == jobs[job_idx].0)
            .unwrap();
        all.extend(list.into_iter().map(|c| (pat_priority, c)));
    }
    // dedupe within 1e-9, keeping the earliest pattern in the fixed order
    all.sort_by(|x, y| {
        (x.1.lambda.re, x.0)
            .partial_cmp(&(y.1.lambda.re, y.0))
            .unwrap()
    });
    let mut out: Vec<CandidateEigenvalue> = Vec::new();
    for (_, c) in all {
        if let Some(last) = out.last() {
            if (c.lambda.re - last.lambda.re).abs() < 1e-9 {
                continue;
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// Real exponent differences from the symbol at a real lambda, or None
/// where some difference has left the real branch.
fn real_diffs(p: &SLProblem, l: f64) -> Option<[f64; 3]> {
    let ps = p_symbol(p, C64::new(l, 0.0)).ok()?;
    let d = ps.differences();
    let mut out = [0.0; 3];
    for i in 0..3 {
        if d[i].im.abs() > 1e-9 {
            return None;
        }
        out[i] = d[i].re;
    }
    Some(out)
}

/// Grid scan for odd-integer crossings of each signed sum of exponent
/// differences, bisected to 1e-10; same decay and termination filters as
/// the closed form. Makes no constancy assumption about the third
/// difference, so it also covers problems the closed form rejects.
/// A sum that sits identically on an odd integer has no isolated
/// crossings and contributes nothing; the eigenvalues of such a problem
/// are picked out by the remaining, varying sums.
pub fn scan_eigenvalues(
    p: &SLProblem,
    lambda_min: f64,
    lambda_max: f64,
    grid_n: usize,
) -> Result<Vec<CandidateEigenvalue>> {
    if grid_n < 100 {
        return Err(Error::InvalidParameter(format!(
            "grid_n = {grid_n} too small (need at least 100)"
        )));
    }
    if lambda_min >= lambda_max {
        return Err(Error::InvalidParameter(format!(
            "empty search range [{lambda_min}, {lambda_max}]"
        )));
    }
    let xs: Vec<f64> = (0..=grid_n)
        .map(|i| lambda_min + (lambda_max - lambda_min) * i as f64 / grid_n as f64)
        .collect();
    let diffs: Vec<Option<[f64; 3]>> = par::map_collect(&xs, |&l| real_diffs(p, l));
    let mut all: Vec<(usize, CandidateEigenvalue)> = Vec::new();
    for (prio, &pat) in PATTERNS.iter().enumerate() {
        let (s1, s2, s3) = (pat.0 as f64, pat.1 as f64, pat.2 as f64);
        let v_of = |d: &[f64; 3]| s1 * d[0] + s2 * d[1] + s3 * d[2];
        let v_at = |l: f64| real_diffs(p, l).map(|d| v_of(&d));
        for i in 1..=grid_n {
            let (Some(da), Some(db)) = (&diffs[i - 1], &diffs[i]) else {
                continue;
            };
            let (va, vb) = (v_of(da), v_of(db));
            let (lo, hi) = (va.min(vb), va.max(vb));
            let mut m = nearest_odd(lo);
            while (m as f64) < lo {
                m += 2;
            }
            while (m as f64) <= hi {
                let target = m as f64;
                let (mut a, mut b) = (xs[i - 1], xs[i]);
                let (mut fa, fb) = (va - target, vb - target);
                if fa * fb > 0.0 {
                    m += 2;
                    continue;
                }
                let mut ok = true;
                while b - a > 1e-10 {
                    let mid = 0.5 * (a + b);
                    let Some(fm) = v_at(mid).map(|v| v - target) else {
                        ok = false;
                        break;
                    };
                    if fa * fm <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                if ok {
                    let l = 0.5 * (a + b);
                    let resid = v_at(l).map(|v| (v - target).abs()).unwrap_or(f64::INFINITY);
                    if resid < KIMURA_TOL && decays_both(p, l) && terminates(p, l) {
                        all.push((
                            prio,
                            CandidateEigenvalue {
                                lambda: C64::new(l, 0.0),
                                k: (m - 1) / 2,
                                sign_pattern: pat,
                                verified_decay: true,
                                kimura_distance: resid,
                            },
                        ));
                    }
                }
                m += 2;
            }
        }
    }
    all.sort_by(|x, y| {
        (x.1.lambda.re, x.0)
            .partial_cmp(&(y.1.lambda.re, y.0))
            .unwrap()
    });
    let mut out: Vec<CandidateEigenvalue> = Vec::new();
    for (_, c) in all {
        if let Some(last) = out.last() {
            if (c.lambda.re - last.lambda.re).abs() < 1e-8 {
                continue;
            }
        }
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{make_allen_cahn, make_hulthen};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sums_examples() {
        let ps = p_symbol(&make_allen_cahn(0.5).unwrap(), c(0.0, 0.0)).unwrap();
        let s = kimura_sums(&ps);
        for (got, want) in s.iter().zip([9.0, 5.0, 5.0, -1.0]) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }

        let ps = p_symbol(&make_hulthen(1.0, 10.0, 10.0).unwrap(), c(1.824609, 0.0)).unwrap();
        let s = kimura_sums(&ps);
        assert!((s[3].re + 1.0).abs() < 1e-4);

        let rep = is_triangularizable(
            &make_hulthen(1.0, 10.0, 10.0).unwrap(),
            c(1.0, 0.0),
            KIMURA_TOL,
        )
        .unwrap();
        assert!(!rep.triangularizable);
        assert!(rep.distance > 1e-6);
    }

    #[test]
    fn triangularizable_examples() {
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap();
        assert!(is_triangularizable(&h, c(0.723828, 0.0), 1e-4)
            .unwrap()
            .triangularizable);
        for alpha in [0.2, 0.35, 0.5, 0.8] {
            assert!(is_triangularizable(&make_allen_cahn(alpha).unwrap(), c(0.0, 0.0), KIMURA_TOL)
                .unwrap()
                .triangularizable);
        }
        assert!(!is_triangularizable(&h, c(0.31, 0.2), KIMURA_TOL)
            .unwrap()
            .triangularizable);
    }

    #[test]
    fn hulthen_closed_form_list() {
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let cands = candidate_eigenvalues(&h, 1e-6, 2.5).unwrap();
        let want = [0.123047, 0.723828, 1.824609];
        let want_k = [-3i64, -2, -1];
        assert_eq!(cands.len(), 3, "{cands:?}");
        for (c, (w, k)) in cands.iter().zip(want.iter().zip(want_k)) {
            assert!((c.lambda.re - w).abs() < 1e-5);
            assert_eq!(c.k, k);
            assert_eq!(c.sign_pattern, (1, 1, -1));
            assert!(c.verified_decay);
            assert!(c.kimura_distance < 1e-9);
        }
        // printed radical form ((2k+1+rho3)^2)/16 at nu- = 0
        let rho3 = 41.0f64.sqrt();
        for (c, k) in cands.iter().zip(want_k) {
            let m = (2 * k + 1) as f64 + rho3;
            assert!((c.lambda.re - m * m / 16.0).abs() < 1e-10);
        }
    }

    #[test]
    fn allen_cahn_closed_form_list() {
        let ac = make_allen_cahn(0.35).unwrap();
        let cands = candidate_eigenvalues(&ac, -0.3499, 0.211).unwrap();
        assert_eq!(cands.len(), 2, "{cands:?}");
        assert!((cands[0].lambda.re + 0.34125).abs() < 1e-8);
        assert!(cands[1].lambda.re.abs() < 1e-8);

        // alpha outside (1/3, 2/3): the nonzero branch fails the decay test
        let ac = make_allen_cahn(0.3).unwrap();
        let cands = candidate_eigenvalues(&ac, -0.2999, 0.211).unwrap();
        assert_eq!(cands.len(), 1, "{cands:?}");
        assert!(cands[0].lambda.re.abs() < 1e-8);
        // yet the excluded value does solve the odd-integer condition
        assert!(is_triangularizable(&ac, c(-0.315, 0.0), 1e-6)
            .unwrap()
            .triangularizable);
    }

    #[test]
    fn scan_matches_closed_form() {
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let scanned = scan_eigenvalues(&h, 1e-6, 2.5, 2000).unwrap();
        let closed = candidate_eigenvalues(&h, 1e-6, 2.5).unwrap();
        assert_eq!(scanned.len(), closed.len());
        for (s, cf) in scanned.iter().zip(&closed) {
            assert!((s.lambda.re - cf.lambda.re).abs() < 1e-8);
        }

        let ac = make_allen_cahn(0.5).unwrap();
        let scanned = scan_eigenvalues(&ac, -0.4999, 0.25, 1000).unwrap();
        assert_eq!(scanned.len(), 2, "{scanned:?}");
        assert!((scanned[0].lambda.re + 0.375).abs() < 1e-8);
        assert!(scanned[1].lambda.re.abs() < 1e-8);

        // above the sup-nu bound nothing survives
        let empty = scan_eigenvalues(&h, 2.5, 3.5, 200).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn random_families_scan_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..20 {
            let (p, lo, hi) = if trial % 2 == 0 {
                let a3 = rng.gen_range(5.0..15.0);
                let a2 = rng.gen_range(5.0..15.0);
                let p = make_hulthen(1.0, a2, a3).unwrap();
                let hi = p.sup_nu();
                (p, 1e-6, hi)
            } else {
                let alpha = rng.gen_range(0.05..0.95);
                let p = make_allen_cahn(alpha).unwrap();
                let (lo, hi) = default_window(&p);
                (p, lo, hi)
            };
            let closed = candidate_eigenvalues(&p, lo, hi).unwrap();
            let scanned = scan_eigenvalues(&p, lo, hi, 1500).unwrap();
            assert_eq!(
                closed.len(),
                scanned.len(),
                "trial {trial}: {closed:?} vs {scanned:?}"
            );
            for (a, b) in closed.iter().zip(&scanned) {
                assert!(
                    (a.lambda.re - b.lambda.re).abs() < 1e-7,
                    "trial {trial}: {} vs {}",
                    a.lambda.re,
                    b.lambda.re
                );
            }
            for c in &closed {
                assert!(is_triangularizable(&p, c.lambda, 1e-6)
                    .unwrap()
                    .triangularizable);
            }
        }
    }

    #[test]
    fn k_window_and_rejections() {
        // accepted k sit inside (-(rho3+1)/2, 0)
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let cands = candidate_eigenvalues(&h, 1e-6, 2.5).unwrap();
        let lo = -(41.0f64.sqrt() + 1.0) / 2.0;
        for c in &cands {
            assert!((c.k as f64) > lo && c.k < 0);
        }
        assert!(!cands.iter().any(|c| c.k == -4));
        assert!(candidate_eigenvalues(&h, 2.0, 1.0).is_err());
    }
}

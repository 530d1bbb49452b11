//! Endpoint asymptotics: the constant coefficient matrices the problem
//! approaches as x goes to either infinity, their eigenvalue pairs (edge
//! rates), the decay predicate, and the spectrum classification table.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::matrix::Matrix2C;
use crate::problem::AsymptoticData;

pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl AsymptoticData {
    pub fn mu(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.mu_minus,
            Side::Plus => self.mu_plus,
        }
    }

    pub fn nu(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.nu_minus,
            Side::Plus => self.nu_plus,
        }
    }

    pub fn a(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.a_minus,
            Side::Plus => self.a_plus,
        }
    }
}

/// Constant system matrix [[0,1],[lambda-nu, -mu]] at the given end.
pub fn asymptotic_matrix(d: &AsymptoticData, lambda: C64, side: Side) -> Matrix2C {
    Matrix2C {
        a11: C64::new(0.0, 0.0),
        a12: C64::new(1.0, 0.0),
        a21: lambda - d.nu(side),
        a22: C64::new(-d.mu(side), 0.0),
    }
}

/// Principal-branch discriminant root sqrt(mu^2 + 4(lambda - nu)).
fn disc_sqrt(d: &AsymptoticData, lambda: C64, side: Side) -> C64 {
    let mu = d.mu(side);
    (C64::new(mu * mu, 0.0) + 4.0 * (lambda - d.nu(side))).sqrt()
}

/// Roots of s^2 + mu s - (lambda - nu) = 0, descending by real part
/// (ties by imaginary part).
pub fn edge_rates(d: &AsymptoticData, lambda: C64, side: Side) -> (C64, C64) {
    let mu = d.mu(side);
    let s = disc_sqrt(d, lambda, side);
    let k1 = (-mu + s) / 2.0;
    let k2 = (-mu - s) / 2.0;
    if (k1.re, k1.im) >= (k2.re, k2.im) {
        (k1, k2)
    } else {
        (k2, k1)
    }
}

/// Signed margin of the decay predicate; positive means a decaying and a
/// growing direction coexist at this end.
pub fn decay_margin(d: &AsymptoticData, lambda: C64, side: Side) -> f64 {
    disc_sqrt(d, lambda, side).re - d.mu(side).abs()
}

pub fn decay_condition(d: &AsymptoticData, lambda: C64, side: Side) -> bool {
    decay_margin(d, lambda, side) > 0.0
}

/// The printed form of the decay inequality, kept for diagnostics only;
/// it disagrees with the master predicate when mu = 0.
pub fn printed_decay_condition(d: &AsymptoticData, lambda: C64, side: Side) -> bool {
    let mu = d.mu(side);
    16.0 * mu * mu * (lambda.re - d.nu(side)) + lambda.im * lambda.im > 0.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SufficiencyCase {
    I,
    II,
    III,
    IV,
    V,
    None,
}

/// First matching sign/ordering condition on the endpoint limits under
/// which triangularizability alone settles the spectrum.
pub fn sufficiency_case(d: &AsymptoticData) -> SufficiencyCase {
    let t = BOUNDARY_TOL;
    let (mp, mm) = (d.mu_plus, d.mu_minus);
    let (np, nm) = (d.nu_plus, d.nu_minus);
    let zp = mp.abs() <= t;
    let zm = mm.abs() <= t;
    if zp && zm {
        SufficiencyCase::I
    } else if zp && mm > t {
        SufficiencyCase::II
    } else if mp < -t && zm {
        SufficiencyCase::III
    } else if mp > t && mm >= -t && nm >= np - t {
        SufficiencyCase::IV
    } else if mp <= t && mm < -t && np >= nm - t {
        SufficiencyCase::V
    } else {
        SufficiencyCase::None
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SideReport {
    pub kappa_pair: (C64, C64),
    pub decay_ok: bool,
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumTag {
    DiscreteCandidate,
    ContinuousSpectrum,
    NotEigenvalue,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectrumClass {
    pub tag: SpectrumTag,
    pub boundary: bool,
    pub minus: SideReport,
    pub plus: SideReport,
}

fn side_report(d: &AsymptoticData, lambda: C64, side: Side) -> SideReport {
    let margin = decay_margin(d, lambda, side);
    SideReport {
        kappa_pair: edge_rates(d, lambda, side),
        decay_ok: margin > 0.0,
        margin,
    }
}

/// Decision table on the signs of the endpoint rates. Classes:
/// both ends mixed -> DiscreteCandidate; one end fully one-signed in the
/// direction that forces decay while the other still offers the matching
/// mode -> ContinuousSpectrum; a fully growing plus end or fully decaying
/// minus end kills every candidate -> NotEigenvalue.
pub fn classify_lambda(d: &AsymptoticData, lambda: C64) -> SpectrumClass {
    let minus = side_report(d, lambda, Side::Minus);
    let plus = side_report(d, lambda, Side::Plus);
    if minus.margin.abs() < BOUNDARY_TOL || plus.margin.abs() < BOUNDARY_TOL {
        return SpectrumClass {
            tag: SpectrumTag::ContinuousSpectrum,
            boundary: true,
            minus,
            plus,
        };
    }
    let tag = if minus.decay_ok && plus.decay_ok {
        SpectrumTag::DiscreteCandidate
    } else {
        let plus_all_neg = plus.kappa_pair.0.re < 0.0 && plus.kappa_pair.1.re < 0.0;
        let plus_some_neg = plus.kappa_pair.1.re < 0.0;
        let minus_all_pos = minus.kappa_pair.0.re > 0.0 && minus.kappa_pair.1.re > 0.0;
        let minus_some_pos = minus.kappa_pair.0.re > 0.0;
        if (plus_all_neg && minus_some_pos) || (minus_all_pos && plus_some_neg) {
            SpectrumTag::ContinuousSpectrum
        } else {
            SpectrumTag::NotEigenvalue
        }
    };
    SpectrumClass {
        tag,
        boundary: false,
        minus,
        plus,
    }
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
    fn asymptotic_matrix_entries() {
        let d = make_allen_cahn(0.3).unwrap().endpoint_data();
        let m = asymptotic_matrix(&d, c(0.0, 0.0), Side::Plus);
        assert!((m.a21.re - 0.3).abs() < 1e-12);
        assert!((m.a22.re + 0.2828427124746190).abs() < 1e-12);

        let d = make_hulthen(1.0, 10.0, 10.0).unwrap().endpoint_data();
        let m = asymptotic_matrix(&d, c(1.0, 0.0), Side::Minus);
        assert!((m.a21 - c(1.0, 0.0)).norm() < 1e-12);
        assert!(m.a22.norm() < 1e-12);
    }

    #[test]
    fn edge_rates_examples() {
        let d = make_allen_cahn(0.3).unwrap().endpoint_data();
        let (k1, k2) = edge_rates(&d, c(-0.315, 0.0), Side::Plus);
        assert!((k1.re + 0.070711).abs() < 1e-6);
        assert!((k2.re + 0.212132).abs() < 1e-6);
        let (k1, k2) = edge_rates(&d, c(-0.315, 0.0), Side::Minus);
        assert!((k1.re - 0.494975).abs() < 1e-6);
        assert!((k2.re + 0.777817).abs() < 1e-6);
    }

    #[test]
    fn edge_rates_symmetric_when_mu_zero() {
        let d = make_hulthen(1.0, 10.0, 10.0).unwrap().endpoint_data();
        let (k1, k2) = edge_rates(&d, c(2.0, 0.0), Side::Plus);
        assert!((k1.re - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((k1 + k2).norm() < 1e-12);
    }

    #[test]
    fn vieta_on_random_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let d = make_allen_cahn(0.3).unwrap().endpoint_data();
        for _ in 0..10_000 {
            let l = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            for side in [Side::Minus, Side::Plus] {
                let (k1, k2) = edge_rates(&d, l, side);
                assert!((k1 + k2 + d.mu(side)).norm() < 1e-12);
                assert!((k1 * k2 + (l - d.nu(side))).norm() < 1e-11);
                // decay holds iff the roots straddle the imaginary axis
                let straddle = k1.re > 0.0 && k2.re < 0.0;
                assert_eq!(decay_condition(&d, l, side), straddle);
            }
        }
    }

    #[test]
    fn real_lambda_reduces_to_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2_000 {
            let d = AsymptoticData {
                mu_minus: rng.gen_range(-3.0..3.0),
                mu_plus: rng.gen_range(-3.0..3.0),
                nu_minus: rng.gen_range(-2.0..2.0),
                nu_plus: rng.gen_range(-2.0..2.0),
                a_minus: 1.0,
                a_plus: -1.0,
            };
            let l = rng.gen_range(-4.0..4.0);
            for side in [Side::Minus, Side::Plus] {
                assert_eq!(
                    decay_condition(&d, c(l, 0.0), side),
                    l > d.nu(side),
                    "mu = {}, nu = {}, l = {}",
                    d.mu(side),
                    d.nu(side),
                    l
                );
            }
        }
    }

    #[test]
    fn decay_examples() {
        let d = make_allen_cahn(0.3).unwrap().endpoint_data();
        assert!(!decay_condition(&d, c(-0.315, 0.0), Side::Plus));
        assert!(decay_condition(&d, c(-0.315, 0.0), Side::Minus));
    }

    #[test]
    fn sufficiency_cases() {
        let h = make_hulthen(2.0, 1.0, 3.0).unwrap().endpoint_data();
        assert_eq!(sufficiency_case(&h), SufficiencyCase::I);
        assert_eq!(
            sufficiency_case(&make_allen_cahn(0.5).unwrap().endpoint_data()),
            SufficiencyCase::I
        );
        assert_eq!(
            sufficiency_case(&make_allen_cahn(0.3).unwrap().endpoint_data()),
            SufficiencyCase::None
        );
        assert_eq!(
            sufficiency_case(&make_allen_cahn(0.7).unwrap().endpoint_data()),
            SufficiencyCase::None
        );
    }

    #[test]
    fn classification_examples() {
        let ac = make_allen_cahn(0.3).unwrap().endpoint_data();
        assert_eq!(
            classify_lambda(&ac, c(-0.5, 0.0)).tag,
            SpectrumTag::ContinuousSpectrum
        );
        assert_eq!(
            classify_lambda(&ac, c(-0.315, 0.0)).tag,
            SpectrumTag::ContinuousSpectrum
        );
        let h = make_hulthen(1.0, 10.0, 10.0).unwrap().endpoint_data();
        assert_eq!(
            classify_lambda(&h, c(1.824609, 0.0)).tag,
            SpectrumTag::DiscreteCandidate
        );
        // mu = 0: the real ray below both limits sits exactly on the margin
        let cl = classify_lambda(&h, c(-1.0, 0.0));
        assert_eq!(cl.tag, SpectrumTag::ContinuousSpectrum);
        assert!(cl.boundary);
    }

    #[test]
    fn classification_reflection_symmetry() {
        // x -> -x swaps endpoints and flips mu; the class is unchanged
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..2_000 {
            let d = AsymptoticData {
                mu_minus: rng.gen_range(-2.0..2.0),
                mu_plus: rng.gen_range(-2.0..2.0),
                nu_minus: rng.gen_range(-2.0..2.0),
                nu_plus: rng.gen_range(-2.0..2.0),
                a_minus: 1.0,
                a_plus: -1.0,
            };
            let r = AsymptoticData {
                mu_minus: -d.mu_plus,
                mu_plus: -d.mu_minus,
                nu_minus: d.nu_plus,
                nu_plus: d.nu_minus,
                a_minus: 1.0,
                a_plus: -1.0,
            };
            let l = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let c1 = classify_lambda(&d, l);
            let c2 = classify_lambda(&r, l);
            assert_eq!(c1.tag, c2.tag);
            assert_eq!(c1.boundary, c2.boundary);
        }
    }
}

//! Dataset assembly for the figure-style outputs: eigenvalue branches as
//! a family parameter sweeps, and rasterized spectrum-classification
//! grids over a complex-lambda window.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::asymptotics::{classify_lambda, SpectrumTag};
use crate::error::{Error, Result};
use crate::kimura::{candidate_eigenvalues, CandidateEigenvalue};
use crate::oracle::{default_l, shoot};
use crate::par;
use crate::problem::{make_allen_cahn, make_hulthen, SLProblem};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub eigenvalues: Vec<CandidateEigenvalue>,
    pub bound_lo: f64,
    pub bound_hi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub parameter: String,
    pub rows: Vec<SweepRow>,
}

fn verified_candidates(p: &SLProblem, lo: f64, hi: f64) -> Result<Vec<CandidateEigenvalue>> {
    let cands = candidate_eigenvalues(p, lo, hi)?;
    Ok(cands
        .into_iter()
        .filter(|c| {
            shoot(p, c.lambda, default_l(p, c.lambda))
                .map(|r| r.miss.norm() < 1e-5)
                .unwrap_or(false)
        })
        .collect())
}

/// Branches of sqrt(lambda) against the left-end limit nu_minus with
/// alpha1 and alpha3 held fixed and alpha2 back-solved.
pub fn sweep_hulthen(
    a1: f64,
    a3: f64,
    nu_minus_range: (f64, f64),
    n: usize,
) -> Result<SweepTable> {
    if n < 2 {
        return Err(Error::InvalidParameter("sweep needs at least 2 rows".into()));
    }
    let params: Vec<f64> = (0..n)
        .map(|i| {
            nu_minus_range.0 + (nu_minus_range.1 - nu_minus_range.0) * i as f64 / (n - 1) as f64
        })
        .collect();
    let rows: Vec<Result<SweepRow>> = par::map_collect(&params, |&nu| {
        let a2 = a1 * nu + a3 / a1;
        if a2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nu_minus = {nu} drives alpha2 to {a2} <= 0"
            )));
        }
        let p = make_hulthen(a1, a2, a3)?;
        let hi = p.sup_nu();
        let lo = nu.max(p.endpoint_data().nu_plus) + 1e-9;
        let eigenvalues = verified_candidates(&p, lo.max(1e-9), hi)?;
        Ok(SweepRow {
            param: nu,
            eigenvalues,
            bound_lo: nu.max(0.0).sqrt(),
            bound_hi: hi.sqrt(),
        })
    });
    Ok(SweepTable {
        parameter: "nu_minus".into(),
        rows: rows.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

pub fn sweep_allen_cahn(alpha_range: (f64, f64), n: usize) -> Result<SweepTable> {
    if n < 2 {
        return Err(Error::InvalidParameter("sweep needs at least 2 rows".into()));
    }
    let params: Vec<f64> = (0..n)
        .map(|i| alpha_range.0 + (alpha_range.1 - alpha_range.0) * i as f64 / (n - 1) as f64)
        .collect();
    let rows: Vec<Result<SweepRow>> = par::map_collect(&params, |&alpha| {
        let p = make_allen_cahn(alpha)?;
        let d = p.endpoint_data();
        let lo = d.nu_minus.max(d.nu_plus) + 1e-9;
        let eigenvalues = verified_candidates(&p, lo, p.sup_nu())?;
        Ok(SweepRow {
            param: alpha,
            eigenvalues,
            bound_lo: d.nu_minus.max(d.nu_plus),
            bound_hi: p.sup_nu(),
        })
    });
    Ok(SweepTable {
        parameter: "alpha".into(),
        rows: rows.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellClass {
    D,
    C,
    N,
    B,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionGrid {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub res: usize,
    /// row-major, im outer (ascending), re inner (ascending)
    pub cells: Vec<CellClass>,
}

impl RegionGrid {
    pub fn cell_center(&self, i_im: usize, i_re: usize) -> C64 {
        let re = self.re_range.0
            + (self.re_range.1 - self.re_range.0) * (i_re as f64 + 0.5) / self.res as f64;
        let im = self.im_range.0
            + (self.im_range.1 - self.im_range.0) * (i_im as f64 + 0.5) / self.res as f64;
        C64::new(re, im)
    }

    pub fn class_at(&self, i_im: usize, i_re: usize) -> CellClass {
        self.cells[i_im * self.res + i_re]
    }
}

/// Classification raster over a rectangle of complex lambda; boundary
/// cells are flagged B.
pub fn region_grid(
    p: &SLProblem,
    re_range: (f64, f64),
    im_range: (f64, f64),
    res: usize,
) -> Result<RegionGrid> {
    if res < 10 {
        return Err(Error::InvalidParameter(format!(
            "resolution {res} too small (need at least 10)"
        )));
    }
    let d = p.endpoint_data();
    let idx: Vec<usize> = (0..res * res).collect();
    let cells: Vec<CellClass> = par::map_collect(&idx, |&k| {
        let (i_im, i_re) = (k / res, k % res);
        let re = re_range.0 + (re_range.1 - re_range.0) * (i_re as f64 + 0.5) / res as f64;
        let im = im_range.0 + (im_range.1 - im_range.0) * (i_im as f64 + 0.5) / res as f64;
        let cl = classify_lambda(&d, C64::new(re, im));
        if cl.boundary {
            CellClass::B
        } else {
            match cl.tag {
                SpectrumTag::DiscreteCandidate => CellClass::D,
                SpectrumTag::ContinuousSpectrum => CellClass::C,
                SpectrumTag::NotEigenvalue => CellClass::N,
            }
        }
    });
    Ok(RegionGrid {
        re_range,
        im_range,
        res,
        cells,
    })
}

pub fn sweep_to_csv(t: &SweepTable) -> String {
    let mut out = String::from("param,branch_k,lambda,sqrt_lambda,bound_lo,bound_hi\n");
    for row in &t.rows {
        for c in &row.eigenvalues {
            let sq = if c.lambda.re >= 0.0 {
                c.lambda.re.sqrt()
            } else {
                f64::NAN
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.param, c.k, c.lambda.re, sq, row.bound_lo, row.bound_hi
            ));
        }
    }
    out
}

pub fn region_to_csv(g: &RegionGrid) -> String {
    let mut out = String::from("lam_re,lam_im,class\n");
    for i_im in 0..g.res {
        for i_re in 0..g.res {
            let z = g.cell_center(i_im, i_re);
            let c = match g.class_at(i_im, i_re) {
                CellClass::D => "D",
                CellClass::C => "C",
                CellClass::N => "N",
                CellClass::B => "B",
            };
            out.push_str(&format!("{},{},{}\n", z.re, z.im, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hulthen_sweep_branches() {
        let t = sweep_hulthen(1.0, 10.0, (0.0, 0.0), 2).unwrap();
        let sq: Vec<f64> = t.rows[0]
            .eigenvalues
            .iter()
            .map(|c| c.lambda.re.sqrt())
            .collect();
        assert_eq!(sq.len(), 3, "{sq:?}");
        for (got, want) in sq.iter().rev().zip([1.350781, 0.850781, 0.350781]) {
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
        // every branch sits strictly between the printed bounds
        for row in &t.rows {
            for c in &row.eigenvalues {
                let s = c.lambda.re.sqrt();
                assert!(s > row.bound_lo && s < row.bound_hi);
            }
        }
    }

    #[test]
    fn hulthen_sweep_spot_values() {
        let t = sweep_hulthen(1.0, 10.0, (3.5, 3.5), 2).unwrap();
        let top = t.rows[0]
            .eigenvalues
            .iter()
            .map(|c| c.lambda.re.sqrt())
            .fold(0.0f64, f64::max);
        assert!((top - 1.99855).abs() < 1e-4, "{top}");

        let t = sweep_hulthen(1.0, 10.0, (1.5, 1.5), 2).unwrap();
        assert!(
            t.rows[0]
                .eigenvalues
                .iter()
                .any(|c| (c.lambda.re.sqrt() - 1.29155).abs() < 1e-4),
            "{:?}",
            t.rows[0].eigenvalues
        );
    }

    #[test]
    fn allen_cahn_sweep() {
        let t = sweep_allen_cahn((0.2, 0.5), 4).unwrap();
        // alpha = 0.2: only the translation mode
        let r = &t.rows[0];
        assert_eq!(r.eigenvalues.len(), 1);
        assert!(r.eigenvalues[0].lambda.re.abs() < 1e-7);
        // alpha = 0.5: {-0.375, 0}
        let r = &t.rows[3];
        assert_eq!(r.eigenvalues.len(), 2);
        assert!((r.eigenvalues[0].lambda.re + 0.375).abs() < 1e-7);

        // boundary alpha = 1/3 keeps only the translation mode
        let t = sweep_allen_cahn((1.0 / 3.0, 1.0 / 3.0 + 1e-12), 2).unwrap();
        assert_eq!(t.rows[0].eigenvalues.len(), 1);
    }

    #[test]
    fn region_examples() {
        let p = make_allen_cahn(0.3).unwrap();
        let g = region_grid(&p, (-1.2, 0.2), (-1.0, 1.0), 200).unwrap();
        let d = p.endpoint_data();
        let class_of = |re: f64, im: f64| {
            let i_re = (((re - g.re_range.0) / (g.re_range.1 - g.re_range.0)) * g.res as f64)
                as usize;
            let i_im = (((im - g.im_range.0) / (g.im_range.1 - g.im_range.0)) * g.res as f64)
                as usize;
            g.class_at(i_im.min(g.res - 1), i_re.min(g.res - 1))
        };
        assert_eq!(class_of(-0.5, 0.0), CellClass::C);
        assert_ne!(class_of(0.1, 0.0), CellClass::C);
        // raster equals pointwise classification by construction; spot check
        let cl = classify_lambda(&d, g.cell_center(100, 30));
        let cell = g.class_at(100, 30);
        if cl.boundary {
            assert_eq!(cell, CellClass::B);
        }

        // conjugation symmetry of the raster
        for i_im in 0..g.res {
            for i_re in (0..g.res).step_by(7) {
                assert_eq!(
                    g.class_at(i_im, i_re),
                    g.class_at(g.res - 1 - i_im, i_re)
                );
            }
        }
    }

    #[test]
    fn region_boundary_vertex() {
        // equality locus passes through lambda = nu_plus on the real axis
        let p = make_allen_cahn(0.3).unwrap();
        // odd resolution so the middle cell is centered on the vertex itself
        let g = region_grid(&p, (-0.3005, -0.2995), (-0.0005, 0.0005), 11).unwrap();
        assert!(g.cells.contains(&CellClass::B), "{:?}", g.cells);
    }

    #[test]
    fn hulthen_continuous_ray() {
        // mu = 0 puts the whole real ray below both limits on the margin
        let p = make_hulthen(1.0, 10.0, 10.0).unwrap();
        let d = p.endpoint_data();
        for re in [-2.0, -1.0, -0.25, -0.001] {
            let cl = classify_lambda(&d, C64::new(re, 0.0));
            assert_eq!(cl.tag, SpectrumTag::ContinuousSpectrum);
            assert!(cl.boundary);
        }
    }
}

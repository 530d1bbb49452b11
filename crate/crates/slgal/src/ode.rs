//! Adaptive Dormand-Prince 5(4) integration for small complex systems.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const MAX_STEPS: usize = 20_000_000;

// Dormand-Prince coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate dy/dt = rhs(t, y) from t0 to t1 with adaptive stepping.
///
/// `post_step` runs after every accepted step (state clamping hooks).
pub fn integrate_with<const N: usize>(
    mut rhs: impl FnMut(f64, &[C64; N]) -> Result<[C64; N]>,
    t0: f64,
    t1: f64,
    y0: [C64; N],
    rtol: f64,
    atol: f64,
    mut post_step: impl FnMut(f64, &mut [C64; N]),
) -> Result<[C64; N]> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = (span.abs() * 0.01).min(0.1).max(1e-8) * dir;
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Numeric("integrator exceeded step budget".into()));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < 1e-15 * (1.0 + t.abs()) {
            return Err(Error::Numeric(format!(
                "step underflow at t = {t} (approaching a singularity?)"
            )));
        }
        let mut k: [[C64; N]; 7] = [[C64::new(0.0, 0.0); N]; 7];
        k[0] = rhs(t, &y)?;
        let mut failed = false;
        for stage in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += kj[i] * (a * h);
                    }
                }
            }
            match rhs(t + C[stage] * h, &ys) {
                Ok(v) => k[stage + 1] = v,
                Err(_) => {
                    // singular evaluation inside the step: retry smaller
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            h *= 0.25;
            continue;
        }
        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            for i in 0..N {
                y5[i] += kj[i] * (B5[j] * h);
                y4[i] += kj[i] * (B4[j] * h);
            }
        }
        let mut err: f64 = 0.0;
        for i in 0..N {
            let sc = atol + rtol * y[i].norm().max(y5[i].norm());
            err = err.max((y5[i] - y4[i]).norm() / sc);
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            post_step(t, &mut y);
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(y)
}

pub fn integrate<const N: usize>(
    rhs: impl FnMut(f64, &[C64; N]) -> Result<[C64; N]>,
    t0: f64,
    t1: f64,
    y0: [C64; N],
    rtol: f64,
    atol: f64,
) -> Result<[C64; N]> {
    integrate_with(rhs, t0, t1, y0, rtol, atol, |_, _| {})
}

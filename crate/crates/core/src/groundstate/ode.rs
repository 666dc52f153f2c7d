//! Dormand-Prince 5(4) for the two-component radial system.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn step<F: Fn(f64, &State) -> State>(f: &F, t: f64, y: &State, h: f64) -> (State, State) {
    let mut k = [[0.0; 2]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for c in 0..2 {
                ys[c] += h * A[s][j] * kj[c];
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y_new = *y;
    let mut err = [0.0; 2];
    for c in 0..2 {
        for s in 0..7 {
            y_new[c] += h * A[6].get(s).copied().unwrap_or(0.0) * k[s][c];
            err[c] += h * E[s] * k[s][c];
        }
    }
    (y_new, err)
}

/// Integrates `y' = f(t, y)` from `t0` and returns the state at each of the increasing
/// `targets`. `check` sees every accepted step and may abort the integration.
pub fn integrate<F, G>(f: F, t0: f64, y0: State, targets: &[f64], tol: Tolerances, mut check: G) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> State,
    G: FnMut(f64, &State) -> Result<()>,
{
    if !t0.is_finite() || targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("integration interval must be finite"));
    }
    let mut out = Vec::with_capacity(targets.len());
    let (mut t, mut y) = (t0, y0);
    let span = targets.last().map_or(0.0, |&e| (e - t0).abs());
    let mut h = (1e-3 * span).max(1e-12);
    for &target in targets {
        if target < t {
            return Err(Error::invalid("integration targets must be increasing"));
        }
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let hs = if last { remaining } else { h };
            let (y_new, err) = step(&f, t, &y, hs);
            let norm = (0..2)
                .map(|c| {
                    let sc = tol.atol + tol.rtol * y[c].abs().max(y_new[c].abs());
                    (err[c] / sc).powi(2)
                })
                .sum::<f64>()
                .sqrt()
                / std::f64::consts::SQRT_2;
            if !norm.is_finite() {
                h = 0.2 * hs;
            } else if norm <= 1.0 {
                t = if last { target } else { t + hs };
                y = y_new;
                check(t, &y)?;
                let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                // a step shortened to land on a target should not shrink the next one
                h = if last { h.max(hs * fac) } else { hs * fac };
            } else {
                h = hs * (0.9 * norm.powf(-0.2)).clamp(0.2, 1.0);
            }
            if h < 1e-15 * t.abs().max(1e-300) || h < f64::MIN_POSITIVE {
                return Err(Error::StepFailure { t, reason: "step size underflow".into() });
            }
        }
        out.push(y);
    }
    Ok(out)
}

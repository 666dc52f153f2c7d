//! `lambda_1` and `lambda_p` on the unit disk for radial profiles.
//!
//! Both use the piecewise-linear stiffness matrix (so `u^T K u` is exactly
//! [`RadialFunction::gradient_norm_sq`]) and the lumped trapezoid mass, with the node at
//! `r = 1` removed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{RadialFunction, RadialGrid};

/// Symmetric tridiagonal stiffness on the interior nodes `0..n-1`.
struct Stiffness {
    diag: Vec<f64>,
    off: Vec<f64>,
    mass: Vec<f64>,
}

impl Stiffness {
    fn new(grid: &RadialGrid) -> Self {
        let n = grid.len();
        let m = n - 1;
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for (i, (a, b)) in grid.cells().enumerate() {
            let kc = std::f64::consts::PI * (a + b) / (b - a);
            diag[i] += kc;
            if i + 1 < m {
                diag[i + 1] += kc;
                off[i] = -kc;
            }
        }
        let mut mass = grid.trapezoid_weights();
        mass.truncate(m);
        Self { diag, off, mass }
    }

    fn energy(&self, u: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..u.len() {
            s += self.diag[i] * u[i] * u[i];
            if i + 1 < u.len() {
                s += 2.0 * self.off[i] * u[i] * u[i + 1];
            }
        }
        s
    }

    /// Solves `K x = rhs` (Thomas algorithm).
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = rhs.len();
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut denom = self.diag[0];
        c[0] = if m > 1 { self.off[0] / denom } else { 0.0 };
        d[0] = rhs[0] / denom;
        for i in 1..m {
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            if i + 1 < m {
                c[i] = self.off[i] / denom;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }

    fn lp_norm(&self, u: &[f64], p: f64) -> f64 {
        self.mass.iter().zip(u).map(|(w, v)| w * v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn with_boundary(grid: &RadialGrid, mut u: Vec<f64>) -> Result<RadialFunction> {
    u.push(0.0);
    RadialFunction::new(grid.clone(), u, true)
}

/// First Dirichlet eigenvalue and eigenfunction (normalized to `max u = u(0) = 1`), by inverse
/// iteration.
pub fn lambda_1_eigenpair(grid: &RadialGrid) -> Result<(f64, RadialFunction)> {
    if grid.len() < 3 {
        return Err(Error::invalid("eigenvalue estimate needs at least 3 nodes"));
    }
    let k = Stiffness::new(grid);
    let mut u = vec![1.0; grid.len() - 1];
    let mut lambda = f64::INFINITY;
    for _ in 0..500 {
        let rhs: Vec<f64> = u.iter().zip(&k.mass).map(|(v, w)| v * w).collect();
        let x = k.solve(&rhs);
        let top = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        u = x.into_iter().map(|v| v / top).collect();
        let mass: f64 = u.iter().zip(&k.mass).map(|(v, w)| w * v * v).sum();
        let next = k.energy(&u) / mass;
        let done = (lambda - next).abs() <= 1e-15 * next;
        lambda = next;
        if done {
            break;
        }
    }
    if u[0] < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    Ok((lambda, with_boundary(grid, u)?))
}

/// First Dirichlet eigenvalue of the Laplacian on the unit disk.
pub fn estimate_lambda_1(grid: &RadialGrid) -> Result<f64> {
    Ok(lambda_1_eigenpair(grid)?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaPEstimate {
    pub p: f64,
    /// Best value found: an upper bound for `lambda_p`.
    pub value: f64,
    /// Largest minus smallest local minimum over the starts.
    pub spread: f64,
    pub minima: Vec<f64>,
    /// Minimizer, sign-fixed so that it is nonnegative, with `||u||_p = 1`.
    #[serde(skip)]
    pub profile: RadialFunction,
}

/// Sum of one to three Gaussian bumps, shifted to vanish at `r = 1`.
fn bump_start(grid: &RadialGrid, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let count = rng.gen_range(1..=3);
    let bumps: Vec<(f64, f64, f64)> =
        (0..count).map(|_| (rng.gen_range(0.2..1.0), rng.gen_range(0.0..0.8), rng.gen_range(0.05..0.5))).collect();
    let g = |r: f64| bumps.iter().map(|(a, c, w)| a * (-((r - c) / w).powi(2)).exp()).sum::<f64>();
    let g1 = g(1.0);
    let nodes = grid.nodes();
    nodes[..nodes.len() - 1].iter().map(|&r| g(r) - g1).collect()
}

/// Minimizes `u^T K u / ||u||_p^2` from `u` by damped Sobolev-gradient steps.
fn descend(k: &Stiffness, mut u: Vec<f64>, p: f64) -> (f64, Vec<f64>) {
    let normalize = |u: &mut Vec<f64>| {
        let n = k.lp_norm(u, p);
        u.iter_mut().for_each(|v| *v /= n);
    };
    normalize(&mut u);
    let mut r = k.energy(&u);
    let mut tau = 1.0;
    for _ in 0..4000 {
        let rhs: Vec<f64> = u.iter().zip(&k.mass).map(|(v, w)| w * v.abs().powf(p - 2.0) * v).collect();
        let t = k.solve(&rhs);
        let mut accepted = false;
        while tau > 1e-10 {
            let mut cand: Vec<f64> = u.iter().zip(&t).map(|(a, b)| (1.0 - tau) * a + tau * r * b).collect();
            normalize(&mut cand);
            let rc = k.energy(&cand);
            if rc <= r {
                let gain = r - rc;
                u = cand;
                r = rc;
                accepted = true;
                tau = (tau * 2.0).min(1.0);
                if gain <= 1e-14 * r {
                    return (r, u);
                }
                break;
            }
            tau *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r, u)
}

/// `inf { ||grad u||^2 : ||u||_p = 1 }` over radial profiles, from 32 seeded starts.
pub fn estimate_lambda_p(p: f64, grid: &RadialGrid) -> Result<LambdaPEstimate> {
    estimate_lambda_p_with(p, grid, 32, 0)
}

pub fn estimate_lambda_p_with(p: f64, grid: &RadialGrid, starts: usize, seed: u64) -> Result<LambdaPEstimate> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::invalid(format!("lambda_p needs finite p > 2, got {p}")));
    }
    if starts == 0 || grid.len() < 3 {
        return Err(Error::invalid("lambda_p needs at least one start and three nodes"));
    }
    let k = Stiffness::new(grid);
    let runs: Vec<(f64, Vec<f64>)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            descend(&k, bump_start(grid, &mut rng), p)
        })
        .collect();
    let minima: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let (best_i, _) = minima.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let lo = minima[best_i];
    let hi = minima.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut u = runs[best_i].1.clone();
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(LambdaPEstimate { p, value: lo, spread: hi - lo, minima, profile: with_boundary(grid, u)? })
}

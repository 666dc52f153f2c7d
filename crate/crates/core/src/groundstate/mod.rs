//! Positive radial solutions of `-(1/r)(r phi')' = V phi`, the coordinate change
//! `s(r) = exp(int_{1/e}^r dt / (t phi(t)^2))`, the ground state (Jacobi) identity and the
//! coercivity classifier built on them.
//!
//! The equation is integrated in `t = log r`, where it reads `phi_t = p`, `p_t = -r^2 V phi`.

pub mod ode;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::{log_inv, PotentialSpec};
use crate::radial::{fmt_f64, RadialFunction, RadialGrid};

pub use ode::Tolerances;

/// Default threshold below which `phi(1)` counts as zero.
pub const DEFAULT_DELTA: f64 = 1e-6;
/// Ratio of consecutive per-decade increments of `log s` at which `s(1)` is declared divergent.
pub const DIVERGENCE_RATIO: f64 = 0.95;

/// Initial data at `r0 = nodes[0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CenterStart {
    /// `phi = 1`, `r phi' = 0`.
    #[default]
    Flat,
    /// `phi = 1`, `r phi' = beta / log(1/r0)` with `beta` the smaller indicial root of the
    /// Euler equation `phi_LL + c phi / L^2 = 0`, `c = L0^2 r0^2 V(r0)` (clamped to `1/4`).
    /// This selects the solution that stays smallest towards the center, which matters for
    /// potentials of Hardy strength at `r = 0`.
    Principal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    WeaklyCoercive,
    GroundStateDetected,
    Indefinite,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::WeaklyCoercive => "WeaklyCoercive",
            Classification::GroundStateDetected => "GroundStateDetected",
            Classification::Indefinite => "Indefinite",
        };
        f.write_str(s)
    }
}

/// `s(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SAtOne {
    Finite(f64),
    Divergent,
}

impl SAtOne {
    pub fn finite(self) -> Option<f64> {
        match self {
            SAtOne::Finite(v) => Some(v),
            SAtOne::Divergent => None,
        }
    }
}

/// The transform `s(r)` tabulated at the grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct STransform {
    /// `log s` at every node; the last entry is `log s(1)` (`+inf` when divergent).
    pub log_s: Vec<f64>,
    pub s_at_1: SAtOne,
    /// Increments of `log s` over the decades `1 - r` in `[1e-5, 1e-4]`, ..., `[1e-8, 1e-7]`.
    pub decade_increments: Vec<f64>,
    /// Slope `gamma` of `s(r) ~ gamma r` fitted on the innermost decade.
    pub gamma: f64,
    /// Relative spread of `s(r) / r` over the innermost decade.
    pub gamma_spread: f64,
}

impl STransform {
    pub fn s(&self) -> Vec<f64> {
        self.log_s.iter().map(|l| l.exp()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    pub potential: PotentialSpec,
    pub start: CenterStart,
    /// `phi` normalized to `max phi = 1`; not Dirichlet unless `phi(1) = 0`.
    pub phi: RadialFunction,
    /// `r phi'(r)` at the nodes, same normalization as `phi`; the entry at `r = 1` repeats the
    /// last interior value.
    pub r_dphi: Vec<f64>,
    pub phi_at_1: f64,
    /// Whether `(1-r)^2 V(r)` is of Hardy size at the last interior node.
    pub boundary_singular: bool,
    /// Whether some Kato exponent in `{0.05, 0.1, 0.25, 0.5, 1}` passes.
    pub kato: bool,
    pub transform: Option<STransform>,
    pub classification: Option<Classification>,
}

/// Shoots from the center with the flat start.
pub fn shoot(spec: &PotentialSpec, grid: &RadialGrid) -> Result<GroundStateResult> {
    shoot_with(spec, grid, CenterStart::Flat, Tolerances::default())
}

pub fn shoot_with(spec: &PotentialSpec, grid: &RadialGrid, start: CenterStart, tol: Tolerances) -> Result<GroundStateResult> {
    let nodes = grid.nodes();
    let n = nodes.len();
    if n < 3 {
        return Err(Error::invalid("shooting needs at least 3 nodes"));
    }
    let ts: Vec<f64> = nodes[..n - 1].iter().map(|&r| -log_inv(r)).collect();
    let t0 = ts[0];
    let p0 = match start {
        CenterStart::Flat => 0.0,
        CenterStart::Principal => {
            let l0 = -t0;
            let c = (l0 * l0 * spec.log_weight(t0)).min(0.25);
            let beta = 0.5 * (1.0 - (1.0 - 4.0 * c).sqrt());
            -beta / l0
        }
    };
    let rhs = |t: f64, y: &ode::State| [y[1], -spec.log_weight(t) * y[0]];
    let mut states = vec![[1.0, p0]];
    let mut prev = (t0, 1.0);
    let rest = ode::integrate(rhs, t0, [1.0, p0], &ts[1..], tol, |t, y| {
        let (tp, fp) = std::mem::replace(&mut prev, (t, y[0]));
        if y[0] <= 0.0 {
            let tz = tp + (t - tp) * fp / (fp - y[0]);
            Err(Error::NodalSolution { radius: tz.exp() })
        } else if !y[0].is_finite() || !y[1].is_finite() {
            Err(Error::StepFailure { t, reason: "non-finite state".into() })
        } else {
            Ok(())
        }
    })?;
    states.extend(rest);

    let boundary_singular = spec.boundary_is_singular(grid);
    let (pl, tl) = (states[n - 2], ts[n - 2]);
    let mut phi_at_1 = if boundary_singular { 0.0 } else { pl[0] - pl[1] * tl };
    if phi_at_1 <= 0.0 && !boundary_singular {
        return Err(Error::NodalSolution { radius: 1.0 });
    }
    let scale = states.iter().map(|s| s[0]).fold(phi_at_1, f64::max);
    phi_at_1 /= scale;
    let mut phi: Vec<f64> = states.iter().map(|s| s[0] / scale).collect();
    let mut r_dphi: Vec<f64> = states.iter().map(|s| s[1] / scale).collect();
    phi.push(phi_at_1);
    r_dphi.push(pl[1] / scale);
    let kato = [0.05, 0.1, 0.25, 0.5, 1.0].iter().any(|&a| spec.check_kato(a).map(|k| k.holds).unwrap_or(false));
    Ok(GroundStateResult {
        potential: spec.clone(),
        start,
        phi: RadialFunction::new(grid.clone(), phi, phi_at_1 == 0.0)?,
        r_dphi,
        phi_at_1,
        boundary_singular,
        kato,
        transform: None,
        classification: None,
    })
}

/// Integral of the cubic Hermite interpolant of `g` over `[0, x h]` of a cell of width `h`.
fn hermite_partial(ga: f64, dga: f64, gb: f64, dgb: f64, h: f64, x: f64) -> f64 {
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let i00 = x4 / 2.0 - x3 + x;
    let i10 = x4 / 4.0 - 2.0 * x3 / 3.0 + x2 / 2.0;
    let i01 = -x4 / 2.0 + x3;
    let i11 = x4 / 4.0 - x3 / 3.0;
    h * (ga * i00 + h * dga * i10 + gb * i01 + h * dgb * i11)
}

/// Linear interpolation of `y` against `x` (increasing) at `x0`.
fn interp(x: &[f64], y: &[f64], x0: f64) -> f64 {
    let i = x.partition_point(|&v| v <= x0).clamp(1, x.len() - 1) - 1;
    let s = (x0 - x[i]) / (x[i + 1] - x[i]);
    y[i] + s * (y[i + 1] - y[i])
}

/// Fills in `s(r)` and decides whether `s(1)` is finite.
pub fn transform_s(mut gs: GroundStateResult) -> Result<GroundStateResult> {
    let grid = gs.phi.grid().clone();
    let nodes = grid.nodes();
    let n = nodes.len();
    let phi = gs.phi.values();
    if let Some(i) = phi[..n - 1].iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NodalSolution { radius: nodes[i] });
    }
    let ts: Vec<f64> = nodes[..n - 1].iter().map(|&r| -log_inv(r)).collect();
    // g = 1/phi^2, g_t = -2 phi_t / phi^3
    let g: Vec<f64> = phi[..n - 1].iter().map(|v| 1.0 / (v * v)).collect();
    let dg: Vec<f64> = phi[..n - 1].iter().zip(&gs.r_dphi).map(|(v, p)| -2.0 * p / (v * v * v)).collect();
    let mut cum = vec![0.0; n - 1];
    for i in 0..n - 2 {
        let h = ts[i + 1] - ts[i];
        cum[i + 1] = cum[i] + 0.5 * h * (g[i] + g[i + 1]) + h * h / 12.0 * (dg[i] - dg[i + 1]);
    }
    let t_ref = -1.0;
    let base = if t_ref <= ts[0] {
        // 1/e left of the grid: phi held at its first value
        cum[0] - (ts[0] - t_ref) * g[0]
    } else {
        let i = ts.partition_point(|&t| t <= t_ref).min(n - 2) - 1;
        let h = ts[i + 1] - ts[i];
        cum[i] + hermite_partial(g[i], dg[i], g[i + 1], dg[i + 1], h, (t_ref - ts[i]) / h)
    };
    let mut log_s: Vec<f64> = cum.iter().map(|c| c - base).collect();

    // per-decade increments of log s against log(1 - r)
    let log_d: Vec<f64> = nodes[..n - 1].iter().rev().map(|&r| (1.0 - r).ln()).collect();
    let ls_rev: Vec<f64> = log_s.iter().rev().copied().collect();
    let at = |d: f64| interp(&log_d, &ls_rev, d.ln());
    let d_last = 1.0 - nodes[n - 2];
    let decades: Vec<f64> = (4..=8).map(|k| 10f64.powi(-k)).filter(|&d| d >= d_last * (1.0 - 1e-9)).collect();
    let decade_increments: Vec<f64> = decades.windows(2).map(|w| at(w[1]) - at(w[0])).collect();

    let last = log_s[n - 2];
    let s_at_1 = if !gs.boundary_singular {
        let (pa, pe) = (phi[n - 2], gs.phi_at_1);
        if pe > 0.0 {
            SAtOne::Finite((last - ts[n - 2] / (pa * pe)).exp())
        } else {
            SAtOne::Divergent
        }
    } else {
        match decade_increments.as_slice() {
            [.., a, b] if *a > 0.0 => {
                let rho = b / a;
                if rho >= DIVERGENCE_RATIO {
                    SAtOne::Divergent
                } else {
                    let rho = rho.max(0.0);
                    SAtOne::Finite((last + b * rho / (1.0 - rho)).exp())
                }
            }
            _ => SAtOne::Finite(last.exp()),
        }
    };
    log_s.push(match s_at_1 {
        SAtOne::Finite(v) => v.ln(),
        SAtOne::Divergent => f64::INFINITY,
    });

    // s(r) ~ gamma r on the innermost decade
    let top = nodes[0] * 10.0;
    let ratios: Vec<f64> = nodes.iter().zip(&log_s).take_while(|(&r, _)| r <= top).map(|(&r, &l)| (l - r.ln()).exp()).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs())) / mean;
    gs.transform = Some(STransform { log_s, s_at_1, decade_increments, gamma: mean, gamma_spread: spread });
    Ok(gs)
}

impl GroundStateResult {
    /// Wraps an explicit positive profile `phi` (and `r phi'`) as a shooting result.
    pub fn from_profile(spec: &PotentialSpec, phi: RadialFunction, r_dphi: Vec<f64>) -> Result<Self> {
        if r_dphi.len() != phi.values().len() {
            return Err(Error::invalid("derivative table has the wrong length"));
        }
        let phi_at_1 = phi.values()[phi.values().len() - 1];
        let grid = phi.grid().clone();
        Ok(Self {
            potential: spec.clone(),
            start: CenterStart::Flat,
            boundary_singular: spec.boundary_is_singular(&grid),
            kato: [0.05, 0.1, 0.25, 0.5, 1.0].iter().any(|&a| spec.check_kato(a).map(|k| k.holds).unwrap_or(false)),
            phi,
            r_dphi,
            phi_at_1,
            transform: None,
            classification: None,
        })
    }

    pub fn s_at_1(&self) -> Option<SAtOne> {
        self.transform.as_ref().map(|t| t.s_at_1)
    }

    /// `s` at the nodes, `+inf` at `r = 1` when divergent.
    pub fn s_values(&self) -> Option<Vec<f64>> {
        self.transform.as_ref().map(|t| t.s())
    }

    /// Writes `r,phi,s` rows followed by `#` metadata lines.
    pub fn write_csv<W: Write>(&self, header: &[String], mut out: W) -> Result<()> {
        let io = |e| Error::Io { path: "<stream>".into(), source: e };
        for h in header {
            writeln!(out, "# {h}").map_err(io)?;
        }
        writeln!(out, "r,phi,s").map_err(io)?;
        let s = self.s_values();
        for (i, (r, p)) in self.phi.grid().nodes().iter().zip(self.phi.values()).enumerate() {
            let sv = s.as_ref().map_or(f64::NAN, |s| s[i]);
            writeln!(out, "{},{},{}", fmt_f64(*r), fmt_f64(*p), fmt_f64(sv)).map_err(io)?;
        }
        writeln!(out, "# phi_at_1={}", fmt_f64(self.phi_at_1)).map_err(io)?;
        if let Some(t) = &self.transform {
            let s1 = match t.s_at_1 {
                SAtOne::Finite(v) => fmt_f64(v),
                SAtOne::Divergent => "divergent".into(),
            };
            writeln!(out, "# s_at_1={s1}").map_err(io)?;
            writeln!(out, "# gamma={}", fmt_f64(t.gamma)).map_err(io)?;
        }
        if let Some(c) = self.classification {
            writeln!(out, "# classification={c}").map_err(io)?;
        }
        writeln!(out, "# kato={}", self.kato).map_err(io)?;
        Ok(())
    }
}

/// `|Q_V(u) - Q_jac(u)| / max(1, |Q_V(u)|)` where
/// `Q_jac(u) = 2 pi int phi^2 ((u/phi)')^2 r dr - 2 pi [r phi phi' (u/phi)^2]_{r = r0}`.
///
/// The flux term at the first node vanishes for the flat start.
pub fn jacobi_identity_residual(gs: &GroundStateResult, u: &RadialFunction) -> Result<f64> {
    if !u.is_dirichlet() {
        return Err(Error::invalid("Jacobi identity needs a Dirichlet profile"));
    }
    if u.grid() != gs.phi.grid() {
        return Err(Error::invalid("profile and ground state must share a grid"));
    }
    let v = &gs.potential;
    let q = u.gradient_norm_sq() - u.integral_weighted(|r| v.eval(r).unwrap_or(f64::NAN))?;
    let phi = gs.phi.values();
    let w: Vec<f64> = u.values().iter().zip(phi).map(|(&a, &b)| if a == 0.0 { 0.0 } else { a / b }).collect();
    if let Some(i) = w.iter().position(|x| !x.is_finite()) {
        return Err(Error::NodalSolution { radius: gs.phi.grid().nodes()[i] });
    }
    let mut sum = 0.0;
    for (i, (a, b)) in gs.phi.grid().cells().enumerate() {
        let pm = 0.5 * (phi[i] + phi[i + 1]);
        let dw = (w[i + 1] - w[i]) / (b - a);
        sum += pm * pm * dw * dw * 0.5 * (a + b) * (b - a);
    }
    let flux = gs.r_dphi[0] * phi[0] * w[0] * w[0];
    let jac = 2.0 * PI * (sum - flux);
    Ok((q - jac).abs() / q.abs().max(1.0))
}

/// Residual `-(1/r)(r phi')' - V phi` from `phi` and its second `log r` derivative
/// `phi_tt = r (r phi')'`.
pub fn ode_residual(spec: &PotentialSpec, r: f64, phi: f64, phi_tt: f64) -> Result<f64> {
    Ok(-phi_tt / (r * r) - spec.eval(r)? * phi)
}

/// Options for [`classify_coercivity_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub delta: f64,
    pub start: CenterStart,
    pub tol: Tolerances,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { delta: DEFAULT_DELTA, start: CenterStart::Principal, tol: Tolerances::default() }
    }
}

/// Outcome of the classifier, with the shooting result when one was produced.
#[derive(Debug, Clone)]
pub struct ClassifyOutcome {
    pub classification: Classification,
    pub result: Option<GroundStateResult>,
    pub diagnostic: String,
}

pub fn classify_coercivity(spec: &PotentialSpec, grid: &RadialGrid) -> ClassifyOutcome {
    classify_coercivity_with(spec, grid, ClassifyOptions::default())
}

/// Shoots, transforms and classifies.
///
/// At a Hardy-singular boundary `phi(1) = 0` holds for every positive solution, so there the
/// verdict rests on `s(1)` alone; elsewhere `phi(1) <= delta` also signals a ground state.
pub fn classify_coercivity_with(spec: &PotentialSpec, grid: &RadialGrid, opts: ClassifyOptions) -> ClassifyOutcome {
    let gs = shoot_with(spec, grid, opts.start, opts.tol).and_then(transform_s);
    match gs {
        Err(Error::NodalSolution { radius }) => ClassifyOutcome {
            classification: Classification::Indefinite,
            result: None,
            diagnostic: format!("phi changes sign near r = {radius:e}"),
        },
        Err(e) => ClassifyOutcome { classification: Classification::Indefinite, result: None, diagnostic: e.to_string() },
        Ok(mut gs) => {
            let s1 = gs.s_at_1().unwrap_or(SAtOne::Divergent);
            let small = !gs.boundary_singular && gs.phi_at_1 <= opts.delta;
            let c = if matches!(s1, SAtOne::Divergent) || small {
                Classification::GroundStateDetected
            } else {
                Classification::WeaklyCoercive
            };
            gs.classification = Some(c);
            let diagnostic = format!(
                "phi(1) = {:e}, s(1) = {}, kato = {}",
                gs.phi_at_1,
                match s1 {
                    SAtOne::Finite(v) => format!("{v:e}"),
                    SAtOne::Divergent => "divergent".into(),
                },
                gs.kato
            );
            ClassifyOutcome { classification: c, result: Some(gs), diagnostic }
        }
    }
}

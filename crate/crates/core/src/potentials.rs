//! The potential catalogue `V(r)` on the unit disk, class-V and Kato checks, and the
//! rearranged potential for radial tabulated data.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::radial::{read_two_columns, RadialFunction, RadialGrid};
use crate::rearrange::{rearrange_decreasing, MeasureProfile};

/// Slack for the monotonicity of `(1 - r^2)^2 V(r)`, relative to the compared value.
pub const CLASS_V_SLACK: f64 = 1e-12;

/// A potential sampled on a radial grid, interpolated linearly in `log r` and held constant
/// outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    grid: RadialGrid,
    values: Arc<[f64]>,
    log_r: Arc<[f64]>,
    source: Option<String>,
}

impl TabulatedPotential {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} potential values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!(
                "tabulated potential must be finite and nonnegative; node {i} has {}",
                values[i]
            )));
        }
        let log_r = grid.nodes().iter().map(|r| r.ln()).collect();
        Ok(Self { grid, values: values.into(), log_r, source: None })
    }

    /// Samples `spec` at the nodes of `grid`; at `r = 1` the value of the previous node is used.
    pub fn sample(spec: &PotentialSpec, grid: &RadialGrid) -> Result<Self> {
        let nodes = grid.nodes();
        let n = nodes.len();
        let mut values = Vec::with_capacity(n);
        for &r in &nodes[..n - 1] {
            let v = spec.eval(r)?;
            if !v.is_finite() {
                return Err(Error::SingularEvaluation { at: r });
            }
            values.push(v);
        }
        values.push(values[n - 2]);
        Self::new(grid.clone(), values)
    }

    /// Reads an `r,value` CSV file.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io { path: path.into(), source: e })?;
        let (r, v) = read_two_columns(file, "value")?;
        let mut tab = Self::new(RadialGrid::from_nodes(r)?, v)?;
        tab.source = Some(path.display().to_string());
        Ok(tab)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn interp_log(&self, t: f64) -> f64 {
        let lr = &self.log_r;
        if t <= lr[0] {
            return self.values[0];
        }
        let last = lr.len() - 1;
        if t >= lr[last] {
            return self.values[last];
        }
        let i = lr.partition_point(|&x| x <= t) - 1;
        let s = (t - lr[i]) / (lr[i + 1] - lr[i]);
        self.values[i] + s * (self.values[i + 1] - self.values[i])
    }
}

/// Symbolic description of a radial potential `V(r)`, `0 < r < 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `V = lambda`.
    Constant(f64),
    /// `1 / (4 r^2 L^2)` with `L = log(1/r)`.
    Leray,
    /// `1 / (4 r^2 L^2 max(L^gamma, 1))`.
    Gamma(f64),
    /// `1 / (1 - r^2)^2`.
    WangYe,
    Tabulated(TabulatedPotential),
}

/// `log(1/r)`, accurate near `r = 1`.
pub(crate) fn log_inv(r: f64) -> f64 {
    if r > 0.5 {
        -(r - 1.0).ln_1p()
    } else {
        -r.ln()
    }
}

impl PotentialSpec {
    pub fn gamma(g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::invalid(format!("gamma must be positive, got {g}")));
        }
        Ok(PotentialSpec::Gamma(g))
    }

    pub fn constant(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::invalid(format!("constant potential must be finite, got {lambda}")));
        }
        Ok(PotentialSpec::Constant(lambda))
    }

    /// Parses `constant:<l>`, `leray`, `gamma:<g>`, `wangye` or `tabulated:<path>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| Error::Parse(format!("`{s}` needs a numeric argument")))?;
            a.trim().parse().map_err(|_| Error::Parse(format!("cannot parse `{a}` as a number in `{s}`")))
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("leray", None) => Ok(PotentialSpec::Leray),
            ("wangye", None) => Ok(PotentialSpec::WangYe),
            ("constant", a) => PotentialSpec::constant(num(a)?),
            ("gamma", a) => PotentialSpec::gamma(num(a)?),
            ("tabulated", Some(p)) => Ok(PotentialSpec::Tabulated(TabulatedPotential::from_csv_path(Path::new(p))?)),
            _ => Err(Error::Parse(format!("unknown potential `{s}`"))),
        }
    }

    /// `V(r)` for `0 < r < 1`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(format!("potential evaluated at r = {r}, outside (0, 1)")));
        }
        Ok(match self {
            PotentialSpec::Constant(l) => *l,
            PotentialSpec::Leray => {
                let l = log_inv(r);
                1.0 / (4.0 * r * r * l * l)
            }
            PotentialSpec::Gamma(g) => {
                let l = log_inv(r);
                1.0 / (4.0 * r * r * l * l * l.powf(*g).max(1.0))
            }
            PotentialSpec::WangYe => {
                let c = (1.0 - r) * (1.0 + r);
                1.0 / (c * c)
            }
            PotentialSpec::Tabulated(t) => t.interp_log(r.ln()),
        })
    }

    /// `r^2 V(r)` at `r = e^t`, `t < 0`, computed from `L = -t` without forming `r`.
    /// This is the coefficient of the radial equation in the logarithmic variable.
    pub fn log_weight(&self, t: f64) -> f64 {
        let l = -t;
        match self {
            PotentialSpec::Constant(lam) => lam * (2.0 * t).exp(),
            PotentialSpec::Leray => 1.0 / (4.0 * l * l),
            PotentialSpec::Gamma(g) => 1.0 / (4.0 * l * l * l.powf(*g).max(1.0)),
            PotentialSpec::WangYe => {
                let s = l.sinh();
                1.0 / (4.0 * s * s)
            }
            PotentialSpec::Tabulated(tab) => (2.0 * t).exp() * tab.interp_log(t),
        }
    }

    /// Whether `(1 - r)^2 V(r)` is non-negligible at the last interior node, i.e. the potential
    /// has a Hardy-type singularity at the boundary.
    pub fn boundary_is_singular(&self, grid: &RadialGrid) -> bool {
        let nodes = grid.nodes();
        let r = nodes[nodes.len() - 2];
        match self.eval(r) {
            Ok(v) => (1.0 - r).powi(2) * v >= 1e-3,
            Err(_) => true,
        }
    }

    /// Checks that `(1 - r^2)^2 V(r)` is nonincreasing over the interior nodes of `grid`.
    pub fn check_class_v(&self, grid: &RadialGrid) -> Result<ClassVCheck> {
        let nodes = grid.nodes();
        let mut g = Vec::with_capacity(nodes.len() - 1);
        for &r in &nodes[..nodes.len() - 1] {
            let v = self.eval(r)?;
            if !v.is_finite() {
                return Err(Error::SingularEvaluation { at: r });
            }
            let c = (1.0 - r) * (1.0 + r);
            g.push(c * c * v);
        }
        for i in 0..g.len().saturating_sub(1) {
            if g[i + 1] - g[i] > CLASS_V_SLACK * g[i].abs().max(1.0) {
                return Ok(ClassVCheck {
                    holds: false,
                    violation: Some(ClassVViolation { index: i, r: (nodes[i], nodes[i + 1]), g: (g[i], g[i + 1]) }),
                });
            }
        }
        Ok(ClassVCheck { holds: true, violation: None })
    }

    /// Samples `h(r) = r^2 log(1/r)^(2+alpha) V(r)` at `r = 10^-m`, `m = 2..=12`.
    ///
    /// The condition holds when the last sample is below `1e-6`, or when the last five samples
    /// decrease strictly with a log-log slope against `log(1/r)` below `-0.05` (algebraic decay,
    /// which the fixed threshold cannot see at `r = 1e-12`).
    pub fn check_kato(&self, alpha: f64) -> Result<KatoCheck> {
        if !(alpha > 0.0) {
            return Err(Error::invalid(format!("Kato exponent must be positive, got {alpha}")));
        }
        let mut samples = Vec::with_capacity(11);
        for m in 2..=12 {
            let l = m as f64 * std::f64::consts::LN_10;
            let h = self.log_weight(-l) * l.powf(2.0 + alpha);
            if !h.is_finite() {
                return Err(Error::SingularEvaluation { at: (-l).exp() });
            }
            samples.push(KatoSample { r: (-l).exp(), log_inv_r: l, h });
        }
        let tail = &samples[samples.len() - 5..];
        let small = tail[4].h < 1e-6;
        let decreasing = tail.windows(2).all(|w| w[1].h < w[0].h);
        let slope = if tail.iter().all(|s| s.h > 0.0) {
            let (a, b) = (&tail[0], &tail[4]);
            (b.h.ln() - a.h.ln()) / (b.log_inv_r.ln() - a.log_inv_r.ln())
        } else {
            f64::NEG_INFINITY
        };
        let holds = small || (decreasing && slope < -0.05);
        Ok(KatoCheck { holds, slope, samples })
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Constant(l) => write!(f, "constant:{l}"),
            PotentialSpec::Leray => write!(f, "leray"),
            PotentialSpec::Gamma(g) => write!(f, "gamma:{g}"),
            PotentialSpec::WangYe => write!(f, "wangye"),
            PotentialSpec::Tabulated(t) => match &t.source {
                Some(p) => write!(f, "tabulated:{p}"),
                None => write!(f, "tabulated:<{} nodes>", t.grid.len()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassVViolation {
    /// The offending pair is `(index, index + 1)`.
    pub index: usize,
    pub r: (f64, f64),
    pub g: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassVCheck {
    pub holds: bool,
    pub violation: Option<ClassVViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatoSample {
    pub r: f64,
    pub log_inv_r: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KatoCheck {
    pub holds: bool,
    /// Log-log slope of `h` against `log(1/r)` over the last five samples.
    pub slope: f64,
    pub samples: Vec<KatoSample>,
}

/// Unit-disk potential of a radial potential given on the disk of radius `radius`.
///
/// `tab` holds the original potential sampled at `|x| = radius * rho` on a grid in the
/// normalized radius `rho`. The result is
/// `[(1 - rho^2)^2 radius^2 V]^#(r) / (1 - r^2)^2` with `#` the hyperbolic decreasing
/// rearrangement, tabulated on the same grid.
pub fn rearranged_potential(tab: &TabulatedPotential, radius: f64) -> Result<PotentialSpec> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {radius}")));
    }
    let grid = tab.grid();
    let nodes = grid.nodes();
    let n = nodes.len();
    let scale = radius * radius;
    let mut g: Vec<f64> = nodes[..n - 1]
        .iter()
        .zip(tab.values())
        .map(|(&r, &v)| {
            let c = (1.0 - r) * (1.0 + r);
            c * c * scale * v
        })
        .collect();
    g.push(g[n - 2]);
    let g = RadialFunction::new(grid.clone(), g, false)?;
    let gs = rearrange_decreasing(&g, MeasureProfile::Hyperbolic)?;
    let mut out: Vec<f64> = nodes[..n - 1]
        .iter()
        .zip(gs.values())
        .map(|(&r, &v)| {
            let c = (1.0 - r) * (1.0 + r);
            v / (c * c)
        })
        .collect();
    out.push(out[n - 2]);
    Ok(PotentialSpec::Tabulated(TabulatedPotential::new(grid.clone(), out)?))
}

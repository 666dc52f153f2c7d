//! Growth classification of `J` along a trial family.

use std::fmt;

use serde::Serialize;

/// Thresholds of the growth detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthOptions {
    /// Number of trailing rows used for the fits.
    pub window: usize,
    /// Minimum number of usable rows for any verdict other than an immediate one.
    pub min_rows: usize,
    /// A growth model must beat the bounded model's residual by this factor.
    pub residual_ratio: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { window: 8, min_rows: 5, residual_ratio: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Bounded,
    Divergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Bounded => "Bounded",
            Verdict::Divergent => "Divergent",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `J = A + B / log k`.
    Bounded,
    /// `J = A k^b`.
    Power,
    /// `J = A e^{c k}`.
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelFit {
    pub model: GrowthModel,
    pub params: [f64; 2],
    /// Root-mean-square residual in `J`, relative to the mean of the fitted `J`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    /// The preferred model.
    pub model: GrowthModel,
    pub params: [f64; 2],
    pub residual: f64,
    pub fits: Vec<ModelFit>,
    pub increments: Vec<f64>,
}

/// Least squares `y ~ a + b x`.
fn linear_fit(x: &[f64], y: &[f64]) -> [f64; 2] {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    [my - b * mx, b]
}

fn rel_rms(j: &[f64], fit: impl Fn(usize) -> f64) -> f64 {
    let n = j.len() as f64;
    let mean = j.iter().sum::<f64>() / n;
    let ss: f64 = (0..j.len()).map(|i| (j[i] - fit(i)).powi(2)).sum();
    (ss / n).sqrt() / mean.abs().max(f64::MIN_POSITIVE)
}

/// Fits the three models to `(k, J)` and returns the fit with the detector's verdict.
///
/// Divergent needs positive, non-decreasing increments and a growth model with positive rate
/// whose residual is below `residual_ratio` times the bounded one. Bounded needs the sequence
/// to stop growing: either the later increments are all nonpositive or their mean magnitude is
/// no larger than that of the earlier ones.
pub fn classify_growth(k: &[f64], j: &[f64], opts: &GrowthOptions) -> (Option<GrowthFit>, Verdict) {
    if k.len() < opts.min_rows.max(3) {
        return (None, Verdict::Inconclusive);
    }
    let start = k.len().saturating_sub(opts.window);
    let (k, j) = (&k[start..], &j[start..]);
    let x: Vec<f64> = k.iter().map(|v| v.ln()).collect();
    let lj: Vec<f64> = j.iter().map(|v| v.ln()).collect();

    let inv: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();
    let b = linear_fit(&inv, j);
    let bounded = ModelFit { model: GrowthModel::Bounded, params: b, residual: rel_rms(j, |i| b[0] + b[1] * inv[i]) };
    let p = linear_fit(&x, &lj);
    let power = ModelFit { model: GrowthModel::Power, params: p, residual: rel_rms(j, |i| (p[0] + p[1] * x[i]).exp()) };
    let e = linear_fit(k, &lj);
    let expo = ModelFit { model: GrowthModel::Exponential, params: e, residual: rel_rms(j, |i| (e[0] + e[1] * k[i]).exp()) };

    let increments: Vec<f64> = j.windows(2).map(|w| w[1] - w[0]).collect();
    let growing = increments.iter().all(|&d| d > 0.0) && increments.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    let half = increments.len() / 2;
    let mean_abs = |d: &[f64]| d.iter().map(|v| v.abs()).sum::<f64>() / d.len() as f64;
    let declining = increments[half..].iter().all(|&d| d <= 0.0);
    let settling = mean_abs(&increments[half..]) <= mean_abs(&increments[..half]);

    // a growth model only counts with a positive rate
    let rising = [&power, &expo].into_iter().filter(|f| f.params[1] > 0.0);
    let best_growth = rising.min_by(|a, b| a.residual.total_cmp(&b.residual));
    let verdict = match best_growth {
        Some(g) if growing && g.residual < opts.residual_ratio * bounded.residual => Verdict::Divergent,
        _ if !growing && (declining || settling) => Verdict::Bounded,
        _ => Verdict::Inconclusive,
    };
    let chosen = match verdict {
        Verdict::Divergent => best_growth.cloned().expect("divergent verdict has a growth model"),
        _ => {
            let fits = [&bounded, &power, &expo];
            (*fits.iter().min_by(|a, b| a.residual.total_cmp(&b.residual)).unwrap()).clone()
        }
    };
    let fit = GrowthFit {
        model: chosen.model,
        params: chosen.params,
        residual: chosen.residual,
        fits: vec![bounded, power, expo],
        increments,
    };
    (Some(fit), verdict)
}

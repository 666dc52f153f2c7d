//! Trial families: Moser functions and the cutoffs `w_k` composed with the ground state
//! transform.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::FormSpec;
use crate::groundstate::{classify_coercivity_with, ClassifyOptions, GroundStateResult};
use crate::radial::{RadialFunction, RadialGrid};

/// `m_k(r) = (2 pi)^{-1/2} min(sqrt(log k), log(1/r) / sqrt(log k))`.
pub fn moser(grid: &RadialGrid, k: f64) -> Result<RadialFunction> {
    if !(k >= 2.0 && k.is_finite()) {
        return Err(Error::invalid(format!("Moser parameter must be at least 2, got {k}")));
    }
    let lk = k.ln();
    let c = (2.0 * PI).powf(-0.5);
    RadialFunction::from_fn(grid, true, |r| {
        let l = crate::potentials::log_inv(r);
        c * lk.sqrt().min(l / lk.sqrt())
    })
}

/// Which reading of the cutoff to use on `k <= s < k^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WkVariant {
    /// `log(k^2/s) / k`: jumps from 1 to `log(k)/k` at `s = k`.
    Printed,
    /// `log(k^2/s) / log k`: continuous, with planar energy `2 pi / log k`.
    #[default]
    Logarithmic,
}

/// `w_k(s)` in the printed form: 1 for `s < k`, `log(k^2/s)/k` on `[k, k^2)`, 0 beyond.
pub fn wk_cutoff(k: f64, s: f64) -> f64 {
    wk_cutoff_ln(k, s.ln(), WkVariant::Printed)
}

/// `w_k` as a function of `log s`, so that huge `s` does not overflow.
pub fn wk_cutoff_ln(k: f64, ln_s: f64, variant: WkVariant) -> f64 {
    let lk = k.ln();
    if ln_s < lk {
        1.0
    } else if ln_s < 2.0 * lk {
        let num = 2.0 * lk - ln_s;
        match variant {
            WkVariant::Printed => num / k,
            WkVariant::Logarithmic => num / lk,
        }
    } else {
        0.0
    }
}

/// Planar Dirichlet energy `2 pi int_k^{k^2} w_k'(s)^2 s ds` of the smooth part of `w_k`,
/// from the piecewise-linear interpolant on `cells` log-spaced cells.
/// The jump of the printed variant at `s = k` is not included; see [`wk_jump`].
pub fn wk_energy(k: f64, variant: WkVariant, cells: usize) -> f64 {
    let (a, b) = (k.ln(), 2.0 * k.ln());
    let node = |i: usize| a + (b - a) * i as f64 / cells as f64;
    // evaluate just inside [k, k^2) so the jump at s = k is excluded
    let val = |ls: f64| {
        let ls = ls.clamp(a, b);
        let num = b - ls;
        match variant {
            WkVariant::Printed => num / k,
            WkVariant::Logarithmic => num / a,
        }
    };
    let mut sum = 0.0;
    for i in 0..cells {
        let (l0, l1) = (node(i), node(i + 1));
        let (s0, s1) = (l0.exp(), l1.exp());
        let dw = (val(l1) - val(l0)) / (s1 - s0);
        sum += dw * dw * 0.5 * (s0 + s1) * (s1 - s0);
    }
    2.0 * PI * sum
}

/// Size of the jump of `w_k` at `s = k`.
pub fn wk_jump(k: f64, variant: WkVariant) -> f64 {
    match variant {
        WkVariant::Printed => 1.0 - k.ln() / k,
        WkVariant::Logarithmic => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialFamily {
    Moser,
    /// `w_k(s(r))`.
    WkCutoff(WkVariant),
    /// `phi(r) w_k(s(r))`.
    GroundStateApprox(WkVariant),
}

impl TrialFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "moser" => Ok(TrialFamily::Moser),
            "wk" | "wkcutoff" => Ok(TrialFamily::WkCutoff(WkVariant::Logarithmic)),
            "wk-printed" | "wkcutoff-printed" => Ok(TrialFamily::WkCutoff(WkVariant::Printed)),
            "gsapprox" | "groundstateapprox" => Ok(TrialFamily::GroundStateApprox(WkVariant::Logarithmic)),
            "gsapprox-printed" => Ok(TrialFamily::GroundStateApprox(WkVariant::Printed)),
            other => Err(Error::Parse(format!("unknown trial family `{other}`"))),
        }
    }
}

impl fmt::Display for TrialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrialFamily::Moser => "moser",
            TrialFamily::WkCutoff(WkVariant::Logarithmic) => "wk",
            TrialFamily::WkCutoff(WkVariant::Printed) => "wk-printed",
            TrialFamily::GroundStateApprox(WkVariant::Logarithmic) => "gsapprox",
            TrialFamily::GroundStateApprox(WkVariant::Printed) => "gsapprox-printed",
        };
        f.write_str(s)
    }
}

/// A trial family bound to a grid and, for the `s`-based families, a ground state.
#[derive(Debug, Clone)]
pub struct FamilyGenerator {
    family: TrialFamily,
    grid: RadialGrid,
    ground_state: Option<GroundStateResult>,
}

impl FamilyGenerator {
    /// Prepares `family` for `form`. The `s`-based families need a potential remainder and
    /// run the ground state solver (principal start) once.
    pub fn new(family: TrialFamily, form: &FormSpec, grid: &RadialGrid) -> Result<Self> {
        let ground_state = match family {
            TrialFamily::Moser => None,
            _ => {
                let spec = form.potential().ok_or_else(|| {
                    Error::invalid(format!("family `{family}` needs a potential remainder, got `{form}`"))
                })?;
                let out = classify_coercivity_with(spec, grid, ClassifyOptions::default());
                Some(out.result.ok_or_else(|| Error::Parameter(format!("no positive solution: {}", out.diagnostic)))?)
            }
        };
        Ok(Self { family, grid: grid.clone(), ground_state })
    }

    /// Uses an existing ground state run for the `s`-based families.
    pub fn with_ground_state(family: TrialFamily, gs: GroundStateResult) -> Result<Self> {
        if gs.transform.is_none() {
            return Err(Error::invalid("ground state result has no s transform"));
        }
        Ok(Self { family, grid: gs.phi.grid().clone(), ground_state: Some(gs) })
    }

    pub fn family(&self) -> TrialFamily {
        self.family
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn ground_state(&self) -> Option<&GroundStateResult> {
        self.ground_state.as_ref()
    }

    /// `log s` at `r = 1`, or at the last interior node when `s(1)` is divergent.
    fn ln_s_range(&self) -> Option<(f64, f64)> {
        let t = self.ground_state.as_ref()?.transform.as_ref()?;
        let n = t.log_s.len();
        let hi = if t.log_s[n - 1].is_finite() { t.log_s[n - 1] } else { t.log_s[n - 2] };
        Some((t.log_s[0], hi))
    }

    /// Default parameters: `k = 2, 4, ..., 2^14` for Moser; for the `s`-based families
    /// `log k = 1, 2, 3, ...` while `k^2` stays below the tabulated `s` range (at most 48 values).
    pub fn default_k_list(&self) -> Vec<f64> {
        match self.family {
            TrialFamily::Moser => (1..=14).map(|j| 2f64.powi(j)).collect(),
            _ => {
                let Some((_, hi)) = self.ln_s_range() else { return Vec::new() };
                (1..=48).map(|m| m as f64).filter(|&lk| 2.0 * lk <= hi).map(f64::exp).collect()
            }
        }
    }

    pub fn generate(&self, k: f64) -> Result<RadialFunction> {
        let variant = match self.family {
            TrialFamily::Moser => return moser(&self.grid, k),
            TrialFamily::WkCutoff(v) | TrialFamily::GroundStateApprox(v) => v,
        };
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::invalid(format!("cutoff parameter must exceed 1, got {k}")));
        }
        let gs = self.ground_state.as_ref().expect("s-based family has a ground state");
        let t = gs.transform.as_ref().expect("checked at construction");
        let n = t.log_s.len();
        let ln_s1 = t.log_s[n - 1];
        if ln_s1.is_finite() && 2.0 * k.ln() > ln_s1 {
            return Err(Error::Parameter(format!(
                "k^2 = {:e} exceeds s(1) = {:e}",
                k * k,
                ln_s1.exp()
            )));
        }
        let with_phi = matches!(self.family, TrialFamily::GroundStateApprox(_));
        let phi = gs.phi.values();
        let mut values: Vec<f64> = t
            .log_s
            .iter()
            .zip(phi)
            .map(|(&ls, &p)| {
                let w = wk_cutoff_ln(k, ls, variant);
                if with_phi {
                    p * w
                } else {
                    w
                }
            })
            .collect();
        values[n - 1] = 0.0;
        RadialFunction::new(self.grid.clone(), values, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::PotentialSpec;

    #[test]
    fn moser_endpoint_and_energy() {
        let g = RadialGrid::default();
        for k in [2.0, 16.0, 1024.0] {
            let m = moser(&g, k).unwrap();
            assert_eq!(*m.values().last().unwrap(), 0.0);
            assert!((m.gradient_norm_sq() - 1.0).abs() < 1e-3);
            let r = 0.5;
            let expect = (2.0 * PI).powf(-0.5) * (2.0f64).ln() / k.ln().sqrt();
            assert!((m.eval(r) - expect).abs() < 1e-4);
        }
        assert!(moser(&g, 1.5).is_err());
    }

    #[test]
    fn cutoff_values() {
        let k: f64 = 10.0;
        assert_eq!(wk_cutoff(k, 0.0), 1.0);
        assert_eq!(wk_cutoff(k, k * k), 0.0);
        assert!((wk_cutoff(k, k) - k.ln() / k).abs() < 1e-15);
        assert_eq!(wk_cutoff_ln(k, k.ln(), WkVariant::Logarithmic), 1.0);
    }

    #[test]
    fn cutoff_energy_closed_forms() {
        for k in [4.0, 64.0, 1000.0] {
            let e = wk_energy(k, WkVariant::Printed, 20_000);
            let expect = 2.0 * PI * f64::ln(k) / (k * k);
            assert!((e - expect).abs() < 1e-6 * expect.max(1.0), "{k}: {e} vs {expect}");
            let e = wk_energy(k, WkVariant::Logarithmic, 20_000);
            assert!((e - 2.0 * PI / f64::ln(k)).abs() < 1e-6);
        }
    }

    #[test]
    fn gs_families_are_dirichlet_and_nonincreasing() {
        let g = RadialGrid::graded(1024).unwrap();
        let form = FormSpec::Potential(PotentialSpec::Leray);
        for fam in [TrialFamily::WkCutoff(WkVariant::Logarithmic), TrialFamily::GroundStateApprox(WkVariant::Printed)] {
            let gen = FamilyGenerator::new(fam, &form, &g).unwrap();
            assert!(!gen.default_k_list().is_empty());
            let u = gen.generate(20.0).unwrap();
            assert!(u.is_dirichlet());
            assert!(u.values().windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
    }

    #[test]
    fn finite_s_limits_k() {
        let g = RadialGrid::graded(1024).unwrap();
        let form = FormSpec::Potential(PotentialSpec::Constant(1.0));
        let gen = FamilyGenerator::new(TrialFamily::GroundStateApprox(WkVariant::Logarithmic), &form, &g).unwrap();
        assert!(matches!(gen.generate(1e6), Err(Error::Parameter(_))));
        assert!(FamilyGenerator::new(TrialFamily::WkCutoff(WkVariant::Printed), &FormSpec::None, &g).is_err());
    }
}

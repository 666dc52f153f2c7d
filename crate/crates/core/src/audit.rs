//! Randomized audits of the Onofri-type, Adimurthi–Druet-type and Orlicz inequalities.
//!
//! Profiles are sums of one to four Gaussian bumps `a exp(-((r - c)/w)^2)` with
//! `a` in `[-4, 4]`, `w` in `[0.05, 0.5]`, `c` in `[0, 0.9]`, shifted to vanish at `r = 1`.
//! All randomness comes from a `ChaCha8` stream seeded by the caller.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{eval_j, luxemburg_norm, onofri_slack, FormSpec};
use crate::radial::{fmt_f64, RadialFunction, RadialGrid};

/// Slack below this counts as a violation.
pub const VIOLATION_TOLERANCE: f64 = -1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// `log A + 1/A <= 1 + ||grad u||^2 / (16 pi)` with `A` the mean of `e^u`.
    Onofri,
    /// The same with `||grad u||^2` replaced by `Q(u)`.
    OnofriRefined,
    /// `e^{4 pi (1 + psi) v^2} <= e^{4 pi v^2 / (1 - psi)}` integrated, for `||grad v|| = 1`.
    AdimurthiDruet,
    /// `Q(u) / ||u||_Orl^2`, whose minimum is the empirical constant.
    Orlicz,
}

impl Inequality {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "onofri" => Ok(Inequality::Onofri),
            "onofri-refined" => Ok(Inequality::OnofriRefined),
            "adimurthi-druet" | "ad" => Ok(Inequality::AdimurthiDruet),
            "orlicz" => Ok(Inequality::Orlicz),
            other => Err(Error::Parse(format!("unknown inequality `{other}`"))),
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::Onofri => "onofri",
            Inequality::OnofriRefined => "onofri-refined",
            Inequality::AdimurthiDruet => "adimurthi-druet",
            Inequality::Orlicz => "orlicz",
        })
    }
}

/// Draws one sample profile.
pub fn sample_profile(grid: &RadialGrid, rng: &mut impl Rng) -> Result<RadialFunction> {
    let count = rng.gen_range(1..=4);
    let bumps: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(-4.0..=4.0), rng.gen_range(0.0..=0.9), rng.gen_range(0.05..=0.5)))
        .collect();
    let g = |r: f64| bumps.iter().map(|(a, c, w)| a * (-((r - c) / w).powi(2)).exp()).sum::<f64>();
    let g1 = g(1.0);
    RadialFunction::from_fn(grid, true, |r| g(r) - g1)
}

/// Draws `count` profiles from the stream seeded by `seed`.
pub fn sample_profiles(grid: &RadialGrid, count: usize, seed: u64) -> Result<Vec<RadialFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_profile(grid, &mut rng)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub index: usize,
    /// Right side minus left side; absent when the sample is outside the inequality's range.
    pub slack: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityAudit {
    pub inequality: Inequality,
    pub form: String,
    pub seed: u64,
    pub records: Vec<AuditRecord>,
    /// Indices with slack below [`VIOLATION_TOLERANCE`].
    pub violations: Vec<usize>,
    pub min_slack: Option<f64>,
    /// For the Orlicz audit, the smallest ratio `Q(u) / ||u||_Orl^2` seen.
    pub empirical_constant: Option<f64>,
    pub skipped: usize,
}

impl InequalityAudit {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, comments: &[String], mut out: W) -> Result<()> {
        let io = |e| Error::Io { path: "<output>".into(), source: e };
        for c in comments {
            writeln!(out, "# {c}").map_err(io)?;
        }
        writeln!(
            out,
            "# inequality={} form={} violations={} skipped={}",
            self.inequality,
            self.form,
            self.violations.len(),
            self.skipped
        )
        .map_err(io)?;
        if let Some(c) = self.empirical_constant {
            writeln!(out, "# empirical_constant={}", fmt_f64(c)).map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "slack", "note"])?;
        for r in &self.records {
            w.write_record([r.index.to_string(), r.slack.map(fmt_f64).unwrap_or_default(), r.note.clone().unwrap_or_default()])?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }
}

/// `b - a` from two possibly overflowing `J` values.
fn j_difference(a: crate::forms::JValue, b: crate::forms::JValue) -> f64 {
    if !a.overflow && !b.overflow {
        b.value - a.value
    } else if b.log_value >= a.log_value {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Slack of one inequality for one profile.
pub fn audit_profile(u: &RadialFunction, inequality: Inequality, form: &FormSpec) -> Result<AuditRecord> {
    let mut rec = AuditRecord { index: 0, slack: None, note: None };
    match inequality {
        Inequality::Onofri => rec.slack = Some(onofri_slack(u, &FormSpec::None)?),
        Inequality::OnofriRefined => rec.slack = Some(onofri_slack(u, form)?),
        Inequality::AdimurthiDruet => {
            let e = u.gradient_norm_sq();
            if e == 0.0 {
                rec.note = Some("zero profile".into());
                return Ok(rec);
            }
            let v = u.scaled(1.0 / e.sqrt());
            let psi = form.psi(&v)?;
            if !(psi > 0.0 && psi < 1.0) {
                rec.note = Some(format!("psi = {} outside (0, 1)", fmt_f64(psi)));
                return Ok(rec);
            }
            let lhs = eval_j(&v, 4.0 * PI * (1.0 + psi));
            let rhs = eval_j(&v, 4.0 * PI / (1.0 - psi));
            rec.slack = Some(j_difference(lhs, rhs));
        }
        Inequality::Orlicz => {
            let norm = luxemburg_norm(u);
            if norm == 0.0 {
                rec.note = Some("zero profile".into());
                return Ok(rec);
            }
            rec.slack = Some(form.eval_q(u)? / (norm * norm));
        }
    }
    Ok(rec)
}

/// Audits `samples` seeded random profiles.
pub fn run_audit(
    inequality: Inequality,
    form: &FormSpec,
    grid: &RadialGrid,
    samples: usize,
    seed: u64,
) -> Result<InequalityAudit> {
    let profiles = sample_profiles(grid, samples, seed)?;
    audit_profiles(inequality, form, &profiles, seed)
}

/// Audits the given profiles; `seed` is only recorded.
pub fn audit_profiles(
    inequality: Inequality,
    form: &FormSpec,
    profiles: &[RadialFunction],
    seed: u64,
) -> Result<InequalityAudit> {
    let records: Vec<AuditRecord> = profiles
        .par_iter()
        .enumerate()
        .map(|(i, u)| audit_profile(u, inequality, form).map(|r| AuditRecord { index: i, ..r }))
        .collect::<Result<_>>()?;
    let violations = records
        .iter()
        .filter(|r| r.slack.is_some_and(|s| s < VIOLATION_TOLERANCE))
        .map(|r| r.index)
        .collect();
    let slacks = records.iter().filter_map(|r| r.slack);
    let min_slack = slacks.clone().reduce(f64::min);
    let skipped = records.iter().filter(|r| r.slack.is_none()).count();
    Ok(InequalityAudit {
        inequality,
        form: form.to_string(),
        seed,
        empirical_constant: if inequality == Inequality::Orlicz { min_slack } else { None },
        records,
        violations,
        min_slack,
        skipped,
    })
}

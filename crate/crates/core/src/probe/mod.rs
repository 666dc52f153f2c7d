//! Probing the constrained supremum `S = sup { J(u) : Q(u) <= 1 }`.
//!
//! Trial families are normalized to `Q = 1` and `J` is followed along the family; a growth
//! detector turns the sequence into a verdict. [`maximize`] searches directly, [`eigen`]
//! estimates the thresholds `lambda_1` and `lambda_p`.

pub mod classify;
pub mod eigen;
pub mod families;
pub mod maximize;
pub mod pava;

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::forms::{eval_j, FormSpec};
use crate::radial::{fmt_f64, RadialGrid};

pub use classify::{classify_growth, GrowthFit, GrowthModel, GrowthOptions, ModelFit, Verdict};
pub use eigen::{estimate_lambda_1, estimate_lambda_p, lambda_1_eigenpair, LambdaPEstimate};
pub use families::{moser, wk_cutoff, wk_cutoff_ln, wk_energy, wk_jump, FamilyGenerator, TrialFamily, WkVariant};
pub use maximize::{maximize_j_constrained, MaximizeOptions, MaximizeResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeOptions {
    /// Exponent coefficient `c` in `J(u) = int e^{c u^2}`.
    pub exponent: f64,
    pub growth: GrowthOptions,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { exponent: 4.0 * PI, growth: GrowthOptions::default() }
    }
}

/// One family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub k: f64,
    /// `Q(u_k)` before normalization.
    pub q: Option<f64>,
    /// `J(u_k / sqrt(Q(u_k)))`; `+inf` on overflow, absent when `Q <= 0`.
    pub j: Option<f64>,
    pub log_j: Option<f64>,
    pub overflow: bool,
    /// `Q` of the normalized profile, kept as a consistency check.
    pub q_normalized: Option<f64>,
    pub error: Option<String>,
}

impl ProbeRow {
    /// A usable row: `Q > 0` and a finite `J`.
    pub fn is_regular(&self) -> bool {
        self.error.is_none() && self.q.is_some_and(|q| q > 0.0) && self.j.is_some_and(f64::is_finite)
    }

    /// `Q <= 0` or overflow.
    pub fn is_divergence_witness(&self) -> bool {
        self.error.is_none() && (self.overflow || self.q.is_some_and(|q| q <= 0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub family: String,
    pub form: String,
    pub exponent: f64,
    pub rows: Vec<ProbeRow>,
    pub fit: Option<GrowthFit>,
    pub verdict: Verdict,
    /// Why the verdict was reached.
    pub reason: String,
}

impl ProbeReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per `k`, preceded by `#` comment lines.
    pub fn write_csv<W: Write>(&self, comments: &[String], mut out: W) -> Result<()> {
        for c in comments {
            writeln!(out, "# {c}").map_err(io_err)?;
        }
        writeln!(out, "# family={} form={} verdict={}", self.family, self.form, self.verdict).map_err(io_err)?;
        if let Some(fit) = &self.fit {
            writeln!(
                out,
                "# fit model={:?} params={},{} residual={}",
                fit.model,
                fmt_f64(fit.params[0]),
                fmt_f64(fit.params[1]),
                fmt_f64(fit.residual)
            )
            .map_err(io_err)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "q", "j", "log_j", "overflow", "q_normalized", "error"])?;
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                fmt_f64(r.k),
                opt(r.q),
                opt(r.j),
                opt(r.log_j),
                r.overflow.to_string(),
                opt(r.q_normalized),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(io_err)?;
        Ok(())
    }
}

fn io_err(e: std::io::Error) -> crate::Error {
    crate::Error::Io { path: "<output>".into(), source: e }
}

fn probe_row(gen: &FamilyGenerator, form: &FormSpec, k: f64, c: f64) -> ProbeRow {
    let mut row = ProbeRow { k, q: None, j: None, log_j: None, overflow: false, q_normalized: None, error: None };
    let u = match gen.generate(k) {
        Ok(u) => u,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let q = match form.eval_q(&u) {
        Ok(q) => q,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.q = Some(q);
    if q <= 0.0 {
        return row;
    }
    let v = u.scaled(1.0 / q.sqrt());
    let j = eval_j(&v, c);
    row.j = Some(j.value);
    row.log_j = Some(j.log_value);
    row.overflow = j.overflow;
    row.q_normalized = form.eval_q(&v).ok();
    row
}

/// Sweeps `k_list` (the family default when `None`), normalizes every member to `Q = 1` and
/// classifies the growth of `J`.
///
/// A member with `Q <= 0` or an overflowing `J` makes the verdict Divergent. Generation
/// failures are recorded in the row and skipped.
pub fn probe_supremum(
    form: &FormSpec,
    family: TrialFamily,
    grid: &RadialGrid,
    k_list: Option<&[f64]>,
    opts: &ProbeOptions,
) -> Result<ProbeReport> {
    let gen = FamilyGenerator::new(family, form, grid)?;
    Ok(probe_with(&gen, form, k_list, opts))
}

/// [`probe_supremum`] with a prepared generator.
pub fn probe_with(gen: &FamilyGenerator, form: &FormSpec, k_list: Option<&[f64]>, opts: &ProbeOptions) -> ProbeReport {
    let ks = match k_list {
        Some(ks) => ks.to_vec(),
        None => gen.default_k_list(),
    };
    let rows: Vec<ProbeRow> = ks.par_iter().map(|&k| probe_row(gen, form, k, opts.exponent)).collect();

    let (fit, verdict, reason) = if let Some(w) = rows.iter().find(|r| r.is_divergence_witness()) {
        let why = if w.overflow { "J overflows" } else { "Q <= 0" };
        let (ks, js) = regular_series(&rows);
        let (fit, _) = classify_growth(&ks, &js, &opts.growth);
        (fit, Verdict::Divergent, format!("{why} at k = {}", fmt_f64(w.k)))
    } else {
        let (ks, js) = regular_series(&rows);
        let (fit, v) = classify_growth(&ks, &js, &opts.growth);
        let reason = match v {
            Verdict::Divergent => "J grows monotonically".to_string(),
            Verdict::Bounded => "J levels off".to_string(),
            Verdict::Inconclusive if ks.len() < opts.growth.min_rows => format!("only {} usable rows", ks.len()),
            Verdict::Inconclusive => "no model separates".to_string(),
        };
        (fit, v, reason)
    };
    ProbeReport {
        family: gen.family().to_string(),
        form: form.to_string(),
        exponent: opts.exponent,
        rows,
        fit,
        verdict,
        reason,
    }
}

fn regular_series(rows: &[ProbeRow]) -> (Vec<f64>, Vec<f64>) {
    rows.iter().filter(|r| r.is_regular()).map(|r| (r.k, r.j.unwrap())).unzip()
}

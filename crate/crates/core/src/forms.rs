//! Scalar functionals on radial profiles: the quadratic forms `Q`, the Trudinger-Moser
//! functional `J`, the Onofri functional and the Luxemburg norm of `e^{4 pi s^2} - 1`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::radial::RadialFunction;

/// Largest exponent evaluated directly; beyond it `J` is reported as overflowed.
pub const EXP_LIMIT: f64 = 700.0;

/// The remainder term `psi(u)` subtracted from the Dirichlet energy.
#[derive(Debug, Clone, PartialEq)]
pub enum FormSpec {
    None,
    /// `psi(u) = int V u^2`.
    Potential(PotentialSpec),
    /// `psi(u) = lambda ||u||_p^2`, `p > 2`.
    Lp { lambda: f64, p: f64 },
}

impl FormSpec {
    pub fn lp(lambda: f64, p: f64) -> Result<Self> {
        if !(p > 2.0 && p.is_finite()) {
            return Err(Error::invalid(format!("L^p remainder needs finite p > 2, got {p}")));
        }
        if !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda must be finite, got {lambda}")));
        }
        Ok(FormSpec::Lp { lambda, p })
    }

    /// Parses `none`, `lp:<lambda>:<p>`, `potential:<spec>` or a bare potential spec.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(FormSpec::None);
        }
        if let Some(rest) = s.strip_prefix("lp:") {
            let (l, p) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("`{s}` should read lp:<lambda>:<p>")))?;
            let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("cannot parse `{x}` in `{s}`")));
            return FormSpec::lp(num(l)?, num(p)?);
        }
        let pot = s.strip_prefix("potential:").unwrap_or(s);
        Ok(FormSpec::Potential(PotentialSpec::parse(pot)?))
    }

    pub fn potential(&self) -> Option<&PotentialSpec> {
        match self {
            FormSpec::Potential(p) => Some(p),
            _ => None,
        }
    }

    /// `psi(u)`.
    pub fn psi(&self, u: &RadialFunction) -> Result<f64> {
        match self {
            FormSpec::None => Ok(0.0),
            FormSpec::Potential(v) => u.integral_weighted(|r| v.eval(r).unwrap_or(f64::NAN)),
            FormSpec::Lp { lambda, p } => {
                let n = u.lp_norm(*p)?;
                Ok(lambda * n * n)
            }
        }
    }

    /// `Q(u) = ||grad u||^2 - psi(u)`; may be negative.
    pub fn eval_q(&self, u: &RadialFunction) -> Result<f64> {
        if !u.is_dirichlet() {
            return Err(Error::invalid("quadratic forms are evaluated on Dirichlet profiles"));
        }
        Ok(u.gradient_norm_sq() - self.psi(u)?)
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::None => write!(f, "none"),
            FormSpec::Potential(p) => write!(f, "potential:{p}"),
            FormSpec::Lp { lambda, p } => write!(f, "lp:{lambda}:{p}"),
        }
    }
}

/// Value of `J`. On overflow `value` is `+inf` and `log_value` still carries the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JValue {
    pub value: f64,
    pub log_value: f64,
    pub overflow: bool,
}

/// `J(u) = 2 pi int_0^1 e^{c u^2} r dr` by the midpoint rule with exact cell areas.
pub fn eval_j(u: &RadialFunction, c: f64) -> JValue {
    let nodes = u.grid().nodes();
    let v = u.values();
    let r0 = nodes[0];
    let mids = u.midpoint_values();
    let expo = |x: f64| c * x * x;
    let max_e = mids.iter().map(|&m| expo(m)).fold(expo(v[0]), f64::max);
    if max_e <= EXP_LIMIT {
        let mut sum = r0 * r0 * expo(v[0]).exp_m1();
        for ((a, b), m) in u.grid().cells().zip(&mids) {
            sum += (b - a) * (b + a) * expo(*m).exp_m1();
        }
        let value = PI * (1.0 + sum);
        return JValue { value, log_value: value.ln(), overflow: false };
    }
    // log-sum-exp of pi * area * e^{c u^2}
    let mut terms = Vec::with_capacity(mids.len() + 1);
    terms.push((r0 * r0).ln() + expo(v[0]));
    for ((a, b), m) in u.grid().cells().zip(&mids) {
        terms.push(((b - a) * (b + a)).ln() + expo(*m));
    }
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    JValue { value: f64::INFINITY, log_value: PI.ln() + top + s.ln(), overflow: true }
}

/// `A - 1` where `A = (1/pi) int_B e^u`.
fn onofri_excess(u: &RadialFunction) -> f64 {
    u.area_integral(f64::exp_m1) / PI
}

/// `F(t) - 1` at `t = 1 + eps`, with `F(t) = log t + 1/t`.
fn f_minus_one(eps: f64) -> f64 {
    eps.ln_1p() - eps / (1.0 + eps)
}

/// `log A + 1/A` with `A = (1/pi) int_B e^u`.
pub fn eval_onofri_lhs(u: &RadialFunction) -> f64 {
    1.0 + f_minus_one(onofri_excess(u))
}

/// `1 + Q(u) / (16 pi)`.
pub fn eval_onofri_rhs(u: &RadialFunction, form: &FormSpec) -> Result<f64> {
    Ok(1.0 + form.eval_q(u)? / (16.0 * PI))
}

/// Right side minus left side of the (refined) Onofri inequality, computed without the
/// cancellation of the leading 1, so that `u = 0` gives exactly zero.
pub fn onofri_slack(u: &RadialFunction, form: &FormSpec) -> Result<f64> {
    Ok(form.eval_q(u)? / (16.0 * PI) - f_minus_one(onofri_excess(u)))
}

/// `2 pi int (e^{4 pi (u/t)^2} - 1) r dr`, `+inf` on overflow.
fn orlicz_modular(u: &RadialFunction, t: f64) -> f64 {
    let c = 4.0 * PI / (t * t);
    let top = c * u.max_abs().powi(2);
    if top > EXP_LIMIT {
        return f64::INFINITY;
    }
    u.area_integral(|x| (c * x * x).exp_m1())
}

/// Luxemburg norm `inf{t > 0 : 2 pi int (e^{4 pi (u/t)^2} - 1) r dr <= 1}`.
pub fn luxemburg_norm(u: &RadialFunction) -> f64 {
    if u.max_abs() == 0.0 {
        return 0.0;
    }
    let mut lo = 1e-12;
    let mut hi = f64::max(1.0, 10.0 * u.max_abs());
    while orlicz_modular(u, hi) > 1.0 {
        lo = hi;
        hi *= 10.0;
    }
    if orlicz_modular(u, lo) <= 1.0 {
        return lo;
    }
    // geometric bisection: the bracket spans many decades
    while hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if orlicz_modular(u, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `F(t1 + t2) <= F(t1) + F(t2)` with `F(t) = log t + 1/t`.
pub fn subadditivity_check(t1: f64, t2: f64) -> Result<bool> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::domain(format!("subadditivity needs positive arguments, got {t1}, {t2}")));
    }
    let f = |t: f64| t.ln() + 1.0 / t;
    Ok(f(t1 + t2) <= f(t1) + f(t2))
}

/// `||u||_p^{p-2} ||phi||_p^2 - int |u|^{p-2} phi^2` with the nodal trapezoid weights used by
/// [`RadialFunction::lp_norm`]; nonnegative by Holder's inequality.
pub fn holder_slack(u: &RadialFunction, phi: &RadialFunction, p: f64) -> Result<f64> {
    if u.grid() != phi.grid() {
        return Err(Error::invalid("profiles must share a grid"));
    }
    if !(p > 2.0) {
        return Err(Error::invalid(format!("Holder step needs p > 2, got {p}")));
    }
    let w = u.grid().trapezoid_weights();
    let lhs: f64 = w
        .iter()
        .zip(u.values().iter().zip(phi.values()))
        .map(|(w, (a, b))| w * a.abs().powf(p - 2.0) * b * b)
        .sum();
    let nu = u.lp_norm(p)?;
    let nphi = phi.lp_norm(p)?;
    Ok(nu.powf(p - 2.0) * nphi * nphi - lhs)
}

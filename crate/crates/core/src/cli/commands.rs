use std::f64::consts::PI;
use std::fs::File;
use std::io::Write;

use serde_json::{json, Value};

use super::{config::pick, Context, OutputFormat, EXIT_OK, EXIT_VIOLATION};
use crate::audit::{run_audit, Inequality};
use crate::error::{Error, Result};
use crate::forms::{eval_j, eval_onofri_lhs, eval_onofri_rhs, luxemburg_norm, onofri_slack, FormSpec};
use crate::groundstate::{classify_coercivity_with, CenterStart, ClassifyOptions, SAtOne, Tolerances, DEFAULT_DELTA};
use crate::potentials::PotentialSpec;
use crate::probe::{
    estimate_lambda_1, eigen::estimate_lambda_p_with, moser, probe_supremum, GrowthOptions, ProbeOptions, TrialFamily,
};
use crate::radial::{fmt_f64, read_profile_csv, RadialFunction, RadialGrid};
use crate::rearrange::{check_equimeasurable, lp_measure, polya_szego_gap, rearrange_decreasing, MeasureProfile};

/// `zero`, `moser:K` or `file:PATH`.
fn parse_profile(spec: &str, grid: &RadialGrid) -> Result<RadialFunction> {
    let spec = spec.trim();
    if spec == "zero" {
        return Ok(RadialFunction::zero(grid));
    }
    if let Some(k) = spec.strip_prefix("moser:") {
        let k: f64 = k.parse().map_err(|_| Error::Parse(format!("bad Moser parameter `{k}`")))?;
        return moser(grid, k);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let f = File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
        return read_profile_csv(f);
    }
    Err(Error::Parse(format!("unknown profile `{spec}` (expected zero, moser:K or file:PATH)")))
}

fn parse_measure(s: &str) -> Result<MeasureProfile> {
    match s.trim().to_ascii_lowercase().as_str() {
        "hyperbolic" => Ok(MeasureProfile::Hyperbolic),
        "euclidean" => Ok(MeasureProfile::Euclidean),
        other => Err(Error::Parse(format!("unknown measure `{other}`"))),
    }
}

fn write_rows(ctx: &Context, header: Vec<String>, cols: &[&str], rows: &[Vec<String>], footer: &[String]) -> Result<()> {
    let mut w = ctx.writer()?;
    let io = |e| ctx.io_error(e);
    for h in &header {
        writeln!(w, "# {h}").map_err(io)?;
    }
    {
        let mut c = csv::Writer::from_writer(&mut w);
        c.write_record(cols)?;
        for r in rows {
            c.write_record(r)?;
        }
        c.flush().map_err(io)?;
    }
    for f in footer {
        writeln!(w, "# {f}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub(super) fn eval(ctx: &mut Context, u: Option<String>, form: Option<String>, exponent: Option<f64>) -> Result<i32> {
    let u_spec = pick(u, ctx.file.u.clone(), "zero".into());
    let form_spec = pick(form, ctx.file.form.clone(), "none".into());
    let c = pick(exponent, ctx.file.exponent, 4.0 * PI);
    ctx.set("u", &u_spec);
    ctx.set("form", &form_spec);
    ctx.set("exponent", c);
    let form = FormSpec::parse(&form_spec)?;
    let u = parse_profile(&u_spec, &ctx.grid)?;
    if u.grid() != &ctx.grid {
        ctx.grid = u.grid().clone();
    }

    let j = eval_j(&u, c);
    let values: Vec<(&str, f64)> = vec![
        ("gradient_norm_sq", u.gradient_norm_sq()),
        ("psi", form.psi(&u)?),
        ("q", form.eval_q(&u)?),
        ("j", j.value),
        ("log_j", j.log_value),
        ("j_overflow", if j.overflow { 1.0 } else { 0.0 }),
        ("onofri_lhs", eval_onofri_lhs(&u)),
        ("onofri_rhs", eval_onofri_rhs(&u, &form)?),
        ("onofri_slack", onofri_slack(&u, &form)?),
        ("luxemburg_norm", luxemburg_norm(&u)),
    ];
    match ctx.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = values.iter().map(|(k, v)| vec![k.to_string(), fmt_f64(*v)]).collect();
            write_rows(ctx, ctx.header(None), &["quantity", "value"], &rows, &[])?;
        }
        OutputFormat::Json => {
            let map: serde_json::Map<String, Value> = values.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            ctx.write_json(&json!({"metadata": ctx.metadata(None), "values": map}))?;
        }
    }
    let q = values[2].1;
    ctx.say(&format!("q={} j={}", fmt_f64(q), fmt_f64(j.value)));
    Ok(EXIT_OK)
}

pub(super) fn groundstate(
    ctx: &mut Context,
    potential: Option<String>,
    start: Option<String>,
    delta: Option<f64>,
    rtol: Option<f64>,
    atol: Option<f64>,
) -> Result<i32> {
    let pot_spec = pick(potential, ctx.file.potential.clone(), "constant:0".into());
    let start_s = pick(start, ctx.file.start.clone(), "principal".into());
    let delta = pick(delta, ctx.file.delta, DEFAULT_DELTA);
    let def = Tolerances::default();
    let tol = Tolerances { rtol: pick(rtol, ctx.file.rtol, def.rtol), atol: pick(atol, ctx.file.atol, def.atol) };
    ctx.set("potential", &pot_spec);
    ctx.set("start", &start_s);
    ctx.set("delta", delta);
    let spec = PotentialSpec::parse(&pot_spec)?;
    let start = match start_s.as_str() {
        "principal" => CenterStart::Principal,
        "flat" => CenterStart::Flat,
        other => return Err(Error::Parse(format!("unknown start `{other}` (principal or flat)"))),
    };
    let out = classify_coercivity_with(&spec, &ctx.grid, ClassifyOptions { delta, start, tol });
    let header = ctx.header(Some(tol));
    match ctx.format {
        OutputFormat::Csv => {
            let mut w = ctx.writer()?;
            match &out.result {
                Some(gs) => gs.write_csv(&header, &mut w)?,
                None => {
                    let io = |e| ctx.io_error(e);
                    for h in &header {
                        writeln!(w, "# {h}").map_err(io)?;
                    }
                    writeln!(w, "r,phi,s").map_err(io)?;
                    writeln!(w, "# classification={}", out.classification).map_err(io)?;
                }
            }
            writeln!(w, "# diagnostic={}", out.diagnostic).map_err(|e| ctx.io_error(e))?;
            w.flush().map_err(|e| ctx.io_error(e))?;
        }
        OutputFormat::Json => {
            let mut v = json!({
                "metadata": ctx.metadata(Some(tol)),
                "classification": out.classification,
                "diagnostic": out.diagnostic,
            });
            if let Some(gs) = &out.result {
                v["phi_at_1"] = json!(gs.phi_at_1);
                v["boundary_singular"] = json!(gs.boundary_singular);
                v["kato"] = json!(gs.kato);
                v["r"] = json!(gs.phi.grid().nodes());
                v["phi"] = json!(gs.phi.values());
                if let Some(t) = &gs.transform {
                    v["s_at_1"] = match t.s_at_1 {
                        SAtOne::Finite(x) => json!(x),
                        SAtOne::Divergent => json!("divergent"),
                    };
                    v["log_s"] = json!(t.log_s.iter().map(|&x| if x.is_finite() { json!(x) } else { json!("inf") }).collect::<Vec<_>>());
                }
            }
            ctx.write_json(&v)?;
        }
    }
    ctx.say(&format!("classification: {}", out.classification));
    Ok(EXIT_OK)
}

pub(super) fn probe(
    ctx: &mut Context,
    form: Option<String>,
    family: Option<String>,
    k: Option<Vec<f64>>,
    exponent: Option<f64>,
    window: Option<usize>,
    residual_ratio: Option<f64>,
) -> Result<i32> {
    let form_spec = pick(form, ctx.file.form.clone(), "none".into());
    let family_s = pick(family, ctx.file.family.clone(), "moser".into());
    let k = k.or_else(|| ctx.file.k.clone());
    let def = GrowthOptions::default();
    let opts = ProbeOptions {
        exponent: pick(exponent, ctx.file.exponent, 4.0 * PI),
        growth: GrowthOptions {
            window: pick(window, ctx.file.window, def.window),
            residual_ratio: pick(residual_ratio, ctx.file.residual_ratio, def.residual_ratio),
            ..def
        },
    };
    ctx.set("form", &form_spec);
    ctx.set("family", &family_s);
    ctx.set("k", &k);
    ctx.set("exponent", opts.exponent);
    ctx.set("growth", opts.growth);
    let form = FormSpec::parse(&form_spec)?;
    let family = TrialFamily::parse(&family_s)?;
    let report = probe_supremum(&form, family, &ctx.grid, k.as_deref(), &opts)?;
    match ctx.format {
        OutputFormat::Csv => {
            let mut w = ctx.writer()?;
            report.write_csv(&ctx.header(None), &mut w)?;
            w.flush().map_err(|e| ctx.io_error(e))?;
        }
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["metadata"] = ctx.metadata(None);
            ctx.write_json(&v)?;
        }
    }
    ctx.say(&format!("verdict: {} ({})", report.verdict, report.reason));
    Ok(EXIT_OK)
}

pub(super) fn audit(
    ctx: &mut Context,
    ineq: Option<String>,
    form: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<i32> {
    let ineq_s = pick(ineq, ctx.file.ineq.clone(), "onofri".into());
    let form_spec = pick(form, ctx.file.form.clone(), "none".into());
    let samples = pick(samples, ctx.file.samples, 100);
    let seed = pick(seed, ctx.file.seed, 0);
    ctx.set("ineq", &ineq_s);
    ctx.set("form", &form_spec);
    ctx.set("samples", samples);
    ctx.set("seed", seed);
    let inequality = Inequality::parse(&ineq_s)?;
    let form = FormSpec::parse(&form_spec)?;
    let audit = run_audit(inequality, &form, &ctx.grid, samples, seed)?;
    match ctx.format {
        OutputFormat::Csv => {
            let mut w = ctx.writer()?;
            audit.write_csv(&ctx.header(None), &mut w)?;
            w.flush().map_err(|e| ctx.io_error(e))?;
        }
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&audit)?;
            v["metadata"] = ctx.metadata(None);
            ctx.write_json(&v)?;
        }
    }
    let mut line = format!("violations: {} of {} (skipped {})", audit.violations.len(), samples, audit.skipped);
    if let Some(c) = audit.empirical_constant {
        line.push_str(&format!(", empirical constant {}", fmt_f64(c)));
    }
    ctx.say(&line);
    Ok(if audit.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
}

pub(super) fn rearrange(ctx: &mut Context, u: Option<String>, measure: Option<String>) -> Result<i32> {
    let u_spec = pick(u, ctx.file.u.clone(), "moser:8".into());
    let measure_s = pick(measure, ctx.file.measure.clone(), "hyperbolic".into());
    ctx.set("u", &u_spec);
    ctx.set("measure", &measure_s);
    let measure = parse_measure(&measure_s)?;
    let u = parse_profile(&u_spec, &ctx.grid)?;
    if u.grid() != &ctx.grid {
        ctx.grid = u.grid().clone();
    }
    let star = rearrange_decreasing(&u, measure)?;
    let dev = check_equimeasurable(&u, &star, measure, 2048)?;
    let mut summary = vec![("equimeasurable_deviation".to_string(), dev)];
    for p in [1.0, 2.0, 4.0] {
        summary.push((format!("lp_measure_{p}"), lp_measure(&u, measure, p)));
        summary.push((format!("lp_measure_star_{p}"), lp_measure(&star, measure, p)));
    }
    if u.is_dirichlet() && measure == MeasureProfile::Hyperbolic {
        summary.push(("polya_szego_gap".into(), polya_szego_gap(&u)?));
    }
    match ctx.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = u
                .grid()
                .nodes()
                .iter()
                .zip(u.values())
                .zip(star.values())
                .map(|((r, a), b)| vec![fmt_f64(*r), fmt_f64(*a), fmt_f64(*b)])
                .collect();
            let footer: Vec<String> = summary.iter().map(|(k, v)| format!("{k}={}", fmt_f64(*v))).collect();
            write_rows(ctx, ctx.header(None), &["r", "u", "u_star"], &rows, &footer)?;
        }
        OutputFormat::Json => {
            let s: serde_json::Map<String, Value> = summary.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            ctx.write_json(&json!({
                "metadata": ctx.metadata(None),
                "r": u.grid().nodes(),
                "u": u.values(),
                "u_star": star.values(),
                "summary": s,
            }))?;
        }
    }
    ctx.say(&format!("equimeasurable deviation {}", fmt_f64(dev)));
    Ok(EXIT_OK)
}

pub(super) fn lambda(ctx: &mut Context, p: Option<f64>, seed: Option<u64>, starts: Option<usize>) -> Result<i32> {
    let p = p.or(ctx.file.p);
    let seed = pick(seed, ctx.file.seed, 0);
    let starts = pick(starts, ctx.file.starts, 32);
    ctx.set("p", p);
    let mut values = vec![("lambda_1".to_string(), estimate_lambda_1(&ctx.grid)?)];
    if let Some(p) = p {
        ctx.set("seed", seed);
        ctx.set("starts", starts);
        let est = estimate_lambda_p_with(p, &ctx.grid, starts, seed)?;
        values.push((format!("lambda_p({p})"), est.value));
        values.push(("lambda_p_spread".into(), est.spread));
    }
    match ctx.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = values.iter().map(|(k, v)| vec![k.clone(), fmt_f64(*v)]).collect();
            write_rows(ctx, ctx.header(None), &["quantity", "value"], &rows, &[])?;
        }
        OutputFormat::Json => {
            let m: serde_json::Map<String, Value> = values.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            ctx.write_json(&json!({"metadata": ctx.metadata(None), "values": m}))?;
        }
    }
    let last = values.last().unwrap();
    ctx.say(&format!("{} = {}", last.0, fmt_f64(last.1)));
    Ok(EXIT_OK)
}

//! Random audits of the Onofri-type inequalities.
//!
//! The refined inequality fails already on the torsion profile a(1 - r^2): the flat
//! inequality is sharp to second order in a there, so no remainder of order a^2 fits.
use tm_lab::audit::{audit_profile, run_audit, Inequality};
use tm_lab::forms::FormSpec;
use tm_lab::potentials::PotentialSpec;
use tm_lab::radial::{RadialFunction, RadialGrid};

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::default();
    let gamma = FormSpec::Potential(PotentialSpec::Gamma(0.5));
    for (ineq, form) in [
        (Inequality::Onofri, FormSpec::None),
        (Inequality::OnofriRefined, gamma.clone()),
        (Inequality::AdimurthiDruet, FormSpec::Potential(PotentialSpec::Constant(2.0))),
        (Inequality::Orlicz, FormSpec::Potential(PotentialSpec::WangYe)),
    ] {
        let a = run_audit(ineq, &form, &grid, 100, 7)?;
        print!("{:<16} form {:<20} violations {:>3}, skipped {:>3}", ineq.to_string(), form.to_string(), a.violations.len(), a.skipped);
        match a.empirical_constant {
            Some(c) => println!(", empirical constant {c:.4}"),
            None => println!(", min slack {:.3e}", a.min_slack.unwrap_or(f64::NAN)),
        }
    }

    for amp in [0.25, 0.5, 1.0] {
        let u = RadialFunction::from_fn(&grid, true, |r| amp * (1.0 - r * r))?;
        let rec = audit_profile(&u, Inequality::OnofriRefined, &gamma)?;
        println!("torsion a = {amp}: refined slack {:.3e}", rec.slack.unwrap_or(f64::NAN));
    }
    Ok(())
}

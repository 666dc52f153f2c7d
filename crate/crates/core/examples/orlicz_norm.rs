//! Luxemburg norm of the exponential Orlicz space and the empirical embedding constant.
use tm_lab::audit::{run_audit, sample_profiles, Inequality};
use tm_lab::forms::{luxemburg_norm, FormSpec};
use tm_lab::potentials::PotentialSpec;
use tm_lab::radial::RadialGrid;

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::default();
    let u = &sample_profiles(&grid, 1, 3)?[0];
    let n = luxemburg_norm(u);
    for c in [1e-3, 1.0, 1e3] {
        println!("||{c} u|| / ({c} ||u||) = {:.12}", luxemburg_norm(&u.scaled(c)) / (c * n));
    }
    for form in [FormSpec::None, FormSpec::Potential(PotentialSpec::WangYe), FormSpec::Potential(PotentialSpec::Gamma(0.5))] {
        let a = run_audit(Inequality::Orlicz, &form, &grid, 200, 11)?;
        println!("{:<18} C = {:.5}", form.to_string(), a.empirical_constant.unwrap_or(f64::NAN));
    }
    Ok(())
}

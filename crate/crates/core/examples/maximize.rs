//! Projected ascent for sup J under Q <= 1.
use tm_lab::forms::FormSpec;
use tm_lab::potentials::PotentialSpec;
use tm_lab::probe::{maximize_j_constrained, MaximizeOptions};
use tm_lab::radial::RadialGrid;

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::graded(1024)?;
    let opts = MaximizeOptions { budget: 80, ..Default::default() };
    for form in [
        FormSpec::None,
        FormSpec::Potential(PotentialSpec::Constant(2.0)),
        FormSpec::Potential(PotentialSpec::WangYe),
        FormSpec::Potential(PotentialSpec::Constant(12.0)),
    ] {
        let res = maximize_j_constrained(&form, &grid, &opts)?;
        println!(
            "{:<22} best J {:>12.6} (log bound {:>8.3}) from {:<14} divergence: {}",
            form.to_string(),
            res.best.value,
            res.log_bound,
            res.start,
            res.reason.as_deref().unwrap_or("none")
        );
    }

    // a witness for the Leray form needs a first node far below the default
    let deep = RadialGrid::logit(8192, 1e-100, 1e-8)?;
    let res = maximize_j_constrained(&FormSpec::Potential(PotentialSpec::Leray), &deep, &opts)?;
    println!("leray on a deep grid: log J {:.2}, {}", res.best.log_value, res.reason.as_deref().unwrap_or("no witness"));
    Ok(())
}

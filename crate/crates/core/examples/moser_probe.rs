//! Sweeps of trial families and the growth classifier.
use std::f64::consts::PI;

use tm_lab::forms::FormSpec;
use tm_lab::potentials::PotentialSpec;
use tm_lab::probe::{probe_supremum, ProbeOptions, TrialFamily, WkVariant};
use tm_lab::radial::RadialGrid;

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::default();
    for c in [4.0 * PI, 4.4 * PI] {
        let opts = ProbeOptions { exponent: c, ..Default::default() };
        let rep = probe_supremum(&FormSpec::None, TrialFamily::Moser, &grid, None, &opts)?;
        println!("moser, c = {:.2} pi: {} ({})", c / PI, rep.verdict, rep.reason);
        for row in rep.rows.iter().step_by(3) {
            println!("   k = {:>8}  J = {:.6}", row.k, row.j.unwrap_or(f64::NAN));
        }
    }

    let leray = FormSpec::Potential(PotentialSpec::Leray);
    let fam = TrialFamily::GroundStateApprox(WkVariant::Logarithmic);
    let rep = probe_supremum(&leray, fam, &grid, None, &ProbeOptions::default())?;
    println!("leray, ground state family: {} ({})", rep.verdict, rep.reason);

    let mut stdout = std::io::stdout().lock();
    rep.write_csv(&["leray sweep".into()], &mut stdout)?;
    Ok(())
}

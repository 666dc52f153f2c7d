//! Hyperbolic decreasing rearrangement and its inequalities.
use tm_lab::radial::{RadialFunction, RadialGrid};
use tm_lab::rearrange::{
    check_equimeasurable, hardy_littlewood_gap, lp_measure, polya_szego_gap, rearrange_decreasing, MeasureProfile,
};

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::graded(2048)?;
    let bump = |c: f64, w: f64| move |r: f64| (-((r - c) / w).powi(2)).exp();
    let (a, b) = (bump(0.2, 0.08), bump(0.6, 0.1));
    let f = RadialFunction::from_fn(&grid, true, |r| (a(r) + 1.5 * b(r)) * (1.0 - r))?;
    let g = RadialFunction::from_fn(&grid, true, |r| b(r) * (1.0 - r))?;

    for m in [MeasureProfile::Hyperbolic, MeasureProfile::Euclidean] {
        let fs = rearrange_decreasing(&f, m)?;
        println!("{m:?}: max f = {:.4}, f#(0) = {:.4}", f.max_abs(), fs.values()[0]);
        println!("   equimeasurability deviation {:.2e}", check_equimeasurable(&f, &fs, m, 2048)?);
        for p in [1.0, 2.0, 4.0] {
            println!("   L^{p}: {:.8} -> {:.8}", lp_measure(&f, m, p), lp_measure(&fs, m, p));
        }
        println!("   Hardy-Littlewood gap {:.6}", hardy_littlewood_gap(&f, &g, m)?);
    }
    println!("Polya-Szego gap {:.6}", polya_szego_gap(&f)?);
    Ok(())
}

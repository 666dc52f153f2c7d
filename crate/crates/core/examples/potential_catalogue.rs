//! The built-in potentials, their class-V and Kato checks.
use tm_lab::potentials::PotentialSpec;
use tm_lab::radial::RadialGrid;

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::default();
    let catalogue = ["constant:2.0", "leray", "gamma:0.5", "gamma:1.0", "wangye"];
    println!("{:<14} {:>12} {:>12} {:>12} {:>8} {:>8}", "potential", "V(0.01)", "V(0.5)", "V(0.99)", "class V", "kato");
    for s in catalogue {
        let v = PotentialSpec::parse(s)?;
        let class_v = v.check_class_v(&grid)?.holds;
        let kato = v.check_kato(0.25)?.holds;
        println!(
            "{s:<14} {:>12.5e} {:>12.5e} {:>12.5e} {:>8} {:>8}",
            v.eval(0.01)?,
            v.eval(0.5)?,
            v.eval(0.99)?,
            class_v,
            kato
        );
    }
    Ok(())
}

//! Shooting the radial equation and classifying the quadratic form.
use tm_lab::groundstate::{classify_coercivity, SAtOne};
use tm_lab::potentials::PotentialSpec;
use tm_lab::radial::RadialGrid;

fn main() {
    let grid = RadialGrid::default();
    let l1 = 2.404825557695773f64.powi(2);
    let cases = [
        PotentialSpec::Constant(0.0),
        PotentialSpec::Constant(0.5 * l1),
        PotentialSpec::Constant(2.0 * l1),
        PotentialSpec::Leray,
        PotentialSpec::Gamma(0.5),
        PotentialSpec::WangYe,
    ];
    for v in cases {
        let out = classify_coercivity(&v, &grid);
        let s1 = match out.result.as_ref().and_then(|g| g.s_at_1()) {
            Some(SAtOne::Finite(x)) => format!("{x:.6e}"),
            Some(SAtOne::Divergent) => "divergent".into(),
            None => "-".into(),
        };
        println!("{:<32} {:<20} s(1) = {s1}", v.to_string(), out.classification.to_string());
    }
}

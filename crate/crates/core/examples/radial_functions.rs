//! Grids, profiles, energies and the J functional.
use std::f64::consts::PI;

use tm_lab::forms::{eval_j, eval_onofri_lhs, eval_onofri_rhs, FormSpec};
use tm_lab::probe::moser;
use tm_lab::radial::{RadialFunction, RadialGrid};

fn main() -> tm_lab::Result<()> {
    let grid = RadialGrid::default();
    println!("grid: {} nodes, first {:e}", grid.len(), grid.inner());

    let bump = RadialFunction::from_fn(&grid, true, |r| (PI * r / 2.0).cos())?;
    println!("cos(pi r/2): energy {:.10} (exact {:.10})", bump.gradient_norm_sq(), PI.powi(3) / 8.0 + PI / 2.0);
    println!("             L^4 norm {:.10}", bump.lp_norm(4.0)?);

    for k in [4.0, 64.0, 1024.0] {
        let m = moser(&grid, k)?;
        let j = eval_j(&m, 4.0 * PI);
        println!("moser k={k:>6}: |grad|^2 = {:.6}, J = {:.6}", m.gradient_norm_sq(), j.value);
    }

    let u = bump.scaled(0.8);
    println!(
        "Onofri for 0.8 cos: lhs {:.6} <= rhs {:.6}",
        eval_onofri_lhs(&u),
        eval_onofri_rhs(&u, &FormSpec::None)?
    );
    Ok(())
}

//! First Dirichlet eigenvalue and the L^p constants.
use tm_lab::probe::{estimate_lambda_1, estimate_lambda_p};
use tm_lab::radial::RadialGrid;

fn main() -> tm_lab::Result<()> {
    let exact = 2.404825557695773f64.powi(2);
    let mut grid = RadialGrid::graded(512)?;
    for _ in 0..4 {
        let l1 = estimate_lambda_1(&grid)?;
        println!("n = {:>5}: lambda_1 = {l1:.9}, error {:.2e}", grid.len(), (l1 - exact).abs());
        grid = grid.refined()?;
    }
    let grid = RadialGrid::graded(1024)?;
    for p in [3.0, 4.0, 6.0] {
        let est = estimate_lambda_p(p, &grid)?;
        println!("lambda_{p} = {:.6} (spread over starts {:.1e})", est.value, est.spread);
    }
    Ok(())
}

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::RadialGrid;

/// Piecewise-linear radial profile on a [`RadialGrid`].
///
/// Between nodes the profile is the linear interpolant; left of the first node it is held
/// constant. With the Dirichlet flag set the value at `r = 1` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    dirichlet: bool,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>, dirichlet: bool) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at node {i}")));
        }
        if dirichlet && values[values.len() - 1] != 0.0 {
            return Err(Error::invalid("Dirichlet profile must vanish at r = 1"));
        }
        Ok(Self { grid, values, dirichlet })
    }

    /// Samples `f` at the nodes. With `dirichlet` the value at `r = 1` is forced to zero.
    pub fn from_fn(grid: &RadialGrid, dirichlet: bool, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = grid.nodes().iter().map(|&r| f(r)).collect();
        if dirichlet {
            *values.last_mut().unwrap() = 0.0;
        }
        Self::new(grid.clone(), values, dirichlet)
    }

    pub fn zero(grid: &RadialGrid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()], dirichlet: true }
    }

    pub fn constant(grid: &RadialGrid, c: f64) -> Self {
        Self { grid: grid.clone(), values: vec![c; grid.len()], dirichlet: c == 0.0 }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_dirichlet(&self) -> bool {
        self.dirichlet
    }

    pub fn eval(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        if r <= nodes[0] {
            return self.values[0];
        }
        if r >= 1.0 {
            return self.values[self.values.len() - 1];
        }
        let i = self.grid.locate(r);
        let (a, b) = (nodes[i], nodes[i + 1]);
        let t = (r - a) / (b - a);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Values at cell midpoints.
    pub fn midpoint_values(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let values = self.values.iter().map(|v| c * v).collect();
        Self { grid: self.grid.clone(), values, dirichlet: self.dirichlet }
    }

    pub fn abs(&self) -> Self {
        let values = self.values.iter().map(|v| v.abs()).collect();
        Self { grid: self.grid.clone(), values, dirichlet: self.dirichlet }
    }

    /// Applies `f` nodewise. The Dirichlet flag survives only if `f` keeps the boundary value zero.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let dirichlet = self.dirichlet && values[values.len() - 1] == 0.0;
        Self::new(self.grid.clone(), values, dirichlet)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Per-cell slopes `du/dr`.
    pub fn derivative(&self) -> Vec<f64> {
        self.grid
            .cells()
            .zip(self.values.windows(2))
            .map(|((a, b), w)| (w[1] - w[0]) / (b - a))
            .collect()
    }

    /// Dirichlet energy `2 pi int_0^1 u'(r)^2 r dr`, exact for the piecewise-linear profile.
    pub fn gradient_norm_sq(&self) -> f64 {
        let sum: f64 = self
            .grid
            .cells()
            .zip(self.values.windows(2))
            .map(|((a, b), w)| {
                let h = b - a;
                let du = w[1] - w[0];
                du * du / h * 0.5 * (a + b)
            })
            .sum();
        2.0 * PI * sum
    }

    /// `(2 pi int_0^1 |u|^p r dr)^(1/p)` by the nodal trapezoid rule.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::invalid(format!("L^p norm needs finite p >= 1, got {p}")));
        }
        let w = self.grid.trapezoid_weights();
        let s: f64 = w.iter().zip(&self.values).map(|(w, v)| w * v.abs().powf(p)).sum();
        Ok(s.powf(1.0 / p))
    }

    /// `2 pi int w(r) u(r)^2 r dr` by the composite midpoint rule over the cells.
    ///
    /// The weight is only sampled at cell midpoints, never at `r = 0` or `r = 1`.
    /// The region left of the first node is not integrated.
    pub fn integral_weighted(&self, w: impl Fn(f64) -> f64) -> Result<f64> {
        let mut sum = 0.0;
        for ((a, b), v) in self.grid.cells().zip(self.values.windows(2)) {
            let m = 0.5 * (a + b);
            let wm = w(m);
            if !wm.is_finite() {
                return Err(Error::SingularEvaluation { at: m });
            }
            let um = 0.5 * (v[0] + v[1]);
            sum += wm * um * um * m * (b - a);
        }
        Ok(2.0 * PI * sum)
    }

    /// `2 pi int_0^1 F(u(r)) r dr` where `F(0) = 0`, by the midpoint rule with exact cell areas.
    /// The constant extension on `[0, nodes[0]]` is included.
    pub(crate) fn area_integral(&self, f: impl Fn(f64) -> f64) -> f64 {
        let r0 = self.grid.inner();
        let mut sum = r0 * r0 * f(self.values[0]);
        for ((a, b), v) in self.grid.cells().zip(self.values.windows(2)) {
            let um = 0.5 * (v[0] + v[1]);
            sum += (b - a) * (b + a) * f(um);
        }
        PI * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graded() -> RadialGrid {
        RadialGrid::graded(4096).unwrap()
    }

    #[test]
    fn zero_function_integrals() {
        let u = RadialFunction::zero(&graded());
        assert_eq!(u.gradient_norm_sq(), 0.0);
        assert_eq!(u.lp_norm(2.0).unwrap(), 0.0);
        assert_eq!(u.integral_weighted(|_| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn linear_profile_energy_is_pi() {
        let g = RadialGrid::uniform(4096).unwrap();
        let u = RadialFunction::from_fn(&g, true, |r| 1.0 - r).unwrap();
        let r0 = g.inner();
        assert!((u.gradient_norm_sq() - PI * (1.0 - r0 * r0)).abs() < 1e-9);
        assert!(u.derivative().iter().all(|s| (s + 1.0).abs() < 1e-9));
    }

    #[test]
    fn lp_norm_closed_forms() {
        let g = graded();
        let one = RadialFunction::constant(&g, 1.0);
        assert!((one.lp_norm(2.0).unwrap() - PI.sqrt()).abs() < 1e-12);
        let g = RadialGrid::uniform(4096).unwrap();
        let u = RadialFunction::from_fn(&g, true, |r| 1.0 - r).unwrap();
        assert!((u.lp_norm(1.0).unwrap() - PI / 3.0).abs() < 1e-7);
    }

    #[test]
    fn lp_norm_rejects_small_p() {
        let u = RadialFunction::zero(&graded());
        assert!(matches!(u.lp_norm(0.5), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn weighted_unit_integral_is_area() {
        let one = RadialFunction::constant(&graded(), 1.0);
        assert!((one.integral_weighted(|_| 1.0).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn singular_weight_names_abscissa() {
        let u = RadialFunction::constant(&RadialGrid::uniform(4).unwrap(), 1.0);
        let err = u.integral_weighted(|r| if r > 0.5 { f64::NAN } else { 1.0 }).unwrap_err();
        match err {
            Error::SingularEvaluation { at } => assert!((at - 0.625).abs() < 1e-15),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn constant_slopes_vanish() {
        let u = RadialFunction::constant(&graded(), 3.5);
        assert!(u.derivative().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn slopes_are_divided_differences() {
        let g = graded();
        let phi = |r: f64| (1.0 / r).ln().sqrt();
        let u = RadialFunction::from_fn(&g, true, phi).unwrap();
        let d = u.derivative();
        let r = g.nodes();
        for i in [0, 100, 2000, 4000] {
            let expect = (phi(r[i + 1]) - phi(r[i])) / (r[i + 1] - r[i]);
            assert_eq!(d[i], expect);
        }
    }

    #[test]
    fn energy_converges_at_second_order() {
        let profile = |r: f64| (PI * r / 2.0).cos();
        // exact: 2 pi (pi/2)^2 int_0^1 sin^2(pi r/2) r dr = pi^3/2 (1/4 + 1/pi^2)
        let exact = PI.powi(3) / 2.0 * (0.25 + 1.0 / (PI * PI));
        let mut g = RadialGrid::graded(256).unwrap();
        let mut errs = Vec::new();
        for _ in 0..4 {
            let u = RadialFunction::from_fn(&g, true, profile).unwrap();
            errs.push((u.gradient_norm_sq() - exact).abs());
            g = g.refined().unwrap();
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}, errs {errs:?}");
        }
    }

    #[test]
    fn eval_interpolates_and_extends() {
        let g = RadialGrid::uniform(4).unwrap();
        let u = RadialFunction::new(g, vec![4.0, 3.0, 1.0, 0.0], true).unwrap();
        assert_eq!(u.eval(0.1), 4.0);
        assert_eq!(u.eval(0.625), 2.0);
        assert_eq!(u.eval(1.0), 0.0);
    }

    #[test]
    fn dirichlet_flag_checked() {
        let g = RadialGrid::uniform(3).unwrap();
        assert!(RadialFunction::new(g, vec![1.0, 1.0, 1.0], true).is_err());
    }
}

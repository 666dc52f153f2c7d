//! Decreasing rearrangement of radial profiles with respect to a radial measure on the unit
//! disk, and the property harnesses (equimeasurability, Hardy-Littlewood, Polya-Szego) that
//! back the reduction to radial decreasing profiles.
//!
//! The default measure is the hyperbolic area of the Poincare disk, `4 dx / (1 - r^2)^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial::RadialFunction;

/// A rotation-invariant measure on the unit disk, described by its radial density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MeasureProfile {
    /// `dmu = 4 dx / (1 - r^2)^2`, radial density `8 pi r / (1 - r^2)^2`.
    #[default]
    Hyperbolic,
    /// Lebesgue area, radial density `2 pi r`.
    Euclidean,
}

impl MeasureProfile {
    /// Density per unit `dr`.
    pub fn density(self, r: f64) -> f64 {
        match self {
            MeasureProfile::Hyperbolic => {
                let c = (1.0 - r) * (1.0 + r);
                8.0 * PI * r / (c * c)
            }
            MeasureProfile::Euclidean => 2.0 * PI * r,
        }
    }

    /// Measure of the disk of radius `r`; infinite at `r = 1` for the hyperbolic measure.
    pub fn cumulative(self, r: f64) -> f64 {
        match self {
            MeasureProfile::Hyperbolic => {
                if r >= 1.0 {
                    f64::INFINITY
                } else {
                    4.0 * PI * r * r / ((1.0 - r) * (1.0 + r))
                }
            }
            MeasureProfile::Euclidean => PI * r.min(1.0).powi(2),
        }
    }

    /// Radius of the disk with measure `m` (clamped to 1).
    pub fn radius_of(self, m: f64) -> f64 {
        if m <= 0.0 {
            return 0.0;
        }
        match self {
            MeasureProfile::Hyperbolic => {
                if m.is_infinite() {
                    1.0
                } else {
                    (m / (4.0 * PI + m)).sqrt()
                }
            }
            MeasureProfile::Euclidean => (m / PI).sqrt().min(1.0),
        }
    }

    /// Measure of the annulus `a < r < b`.
    pub fn annulus(self, a: f64, b: f64) -> f64 {
        match self {
            MeasureProfile::Hyperbolic => {
                if b >= 1.0 {
                    return f64::INFINITY;
                }
                let ca = (1.0 - a) * (1.0 + a);
                let cb = (1.0 - b) * (1.0 + b);
                4.0 * PI * (b - a) * (b + a) / (ca * cb)
            }
            MeasureProfile::Euclidean => PI * (b - a) * (b + a),
        }
    }
}

/// `mu{f > t}` and `mu{f >= t}` at each of the ascending `levels`.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub levels: Vec<f64>,
    pub above: Vec<f64>,
    pub at_or_above: Vec<f64>,
}

/// Accumulates measures that may be infinite without producing `inf - inf`.
///
/// Contributions that cover every level below an index are summed from the top level down, so
/// small superlevel measures are not polluted by the large measures near the boundary.
struct LevelAccumulator {
    finite: Vec<f64>,
    infinite: Vec<bool>,
    below: Vec<f64>,
    below_inf: Vec<bool>,
}

impl LevelAccumulator {
    fn new(n: usize) -> Self {
        Self { finite: vec![0.0; n], infinite: vec![false; n], below: vec![0.0; n], below_inf: vec![false; n] }
    }

    /// Adds `m` to every level index `< k`.
    fn add_below(&mut self, k: usize, m: f64) {
        if k == 0 {
            return;
        }
        if m.is_infinite() {
            self.below_inf[k - 1] = true;
        } else {
            self.below[k - 1] += m;
        }
    }

    fn add_at(&mut self, k: usize, m: f64) {
        if m.is_infinite() {
            self.infinite[k] = true;
        } else {
            self.finite[k] += m;
        }
    }

    fn finish(self) -> Vec<f64> {
        let n = self.finite.len();
        let mut out = vec![0.0; n];
        let (mut acc, mut inf) = (0.0, false);
        for i in (0..n).rev() {
            acc += self.below[i];
            inf |= self.below_inf[i];
            out[i] = if inf || self.infinite[i] { f64::INFINITY } else { (acc + self.finite[i]).max(0.0) };
        }
        out
    }
}

/// Distribution function of `f` at the given ascending levels.
pub fn distribution(f: &RadialFunction, measure: MeasureProfile, levels: &[f64]) -> Distribution {
    let nl = levels.len();
    let mut above = LevelAccumulator::new(nl);
    let mut plateau = LevelAccumulator::new(nl);
    let below = |x: f64| levels.partition_point(|&t| t < x);

    let v = f.values();
    let nodes = f.grid().nodes();

    // constant extension on [0, nodes[0])
    let core = measure.cumulative(nodes[0]);
    let k = below(v[0]);
    above.add_below(k, core);
    if k < nl && levels[k] == v[0] {
        plateau.add_at(k, core);
    }

    for (i, w) in nodes.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (v[i], v[i + 1]);
        let (lo, hi) = if fa <= fb { (fa, fb) } else { (fb, fa) };
        let cell = measure.annulus(a, b);
        let k_lo = below(lo);
        above.add_below(k_lo, cell);
        if lo == hi {
            if k_lo < nl && levels[k_lo] == lo {
                plateau.add_at(k_lo, cell);
            }
            continue;
        }
        let k_hi = below(hi);
        for j in k_lo..k_hi {
            let t = levels[j];
            let rc = a + (b - a) * (t - fa) / (fb - fa);
            let m = if fb > fa { measure.annulus(rc, b) } else { measure.annulus(a, rc) };
            above.add_at(j, m);
        }
    }

    let above = above.finish();
    let plateau = plateau.finish();
    let at_or_above = above.iter().zip(&plateau).map(|(a, p)| a + p).collect();
    Distribution { levels: levels.to_vec(), above, at_or_above }
}

fn require_nonnegative(f: &RadialFunction) -> Result<()> {
    match f.values().iter().position(|&x| x < 0.0) {
        Some(i) => Err(Error::domain(format!(
            "rearrangement needs nonnegative data; value {} at node {i}",
            f.values()[i]
        ))),
        None => Ok(()),
    }
}

/// Decreasing rearrangement `f#`: the nonincreasing radial profile with the same distribution
/// function as `f` with respect to `measure`.
///
/// Levels are the distinct nodal values of `f`. Between two consecutive levels the radius of the
/// superlevel disk is interpolated linearly, which reproduces monotone inputs exactly.
pub fn rearrange_decreasing(f: &RadialFunction, measure: MeasureProfile) -> Result<RadialFunction> {
    require_nonnegative(f)?;
    let mut levels = f.values().to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let dist = distribution(f, measure, &levels);
    let rho_above: Vec<f64> = dist.above.iter().map(|&m| measure.radius_of(m)).collect();
    let rho_at: Vec<f64> = dist.at_or_above.iter().map(|&m| measure.radius_of(m)).collect();

    let nodes = f.grid().nodes();
    let mut out = Vec::with_capacity(nodes.len());
    for &r in nodes {
        let target = measure.cumulative(r);
        // smallest j with mu{f > v_j} <= target
        let j = dist.above.partition_point(|&m| m > target);
        let t = if j == 0 {
            levels[0]
        } else if dist.at_or_above[j] > target {
            levels[j]
        } else {
            let (r0, r1) = (rho_above[j - 1], rho_at[j]);
            let rt = measure.radius_of(target);
            let frac = if r0 > r1 { ((r0 - rt) / (r0 - r1)).clamp(0.0, 1.0) } else { 1.0 };
            levels[j - 1] + frac * (levels[j] - levels[j - 1])
        };
        out.push(t);
    }
    let dirichlet = out[out.len() - 1] == 0.0;
    RadialFunction::new(f.grid().clone(), out, dirichlet)
}

/// Largest normalized discrepancy `|mu{f>t} - mu{g>t}| / max(1, mu{f>t}, mu{g>t})` over
/// `levels` equispaced midpoint levels in `(0, max(f, g))`.
///
/// Two infinite measures agree; one infinite and one finite count as a discrepancy of 1.
pub fn check_equimeasurable(
    f: &RadialFunction,
    g: &RadialFunction,
    measure: MeasureProfile,
    levels: usize,
) -> Result<f64> {
    require_nonnegative(f)?;
    require_nonnegative(g)?;
    let top = f.max_abs().max(g.max_abs());
    if top == 0.0 || levels == 0 {
        return Ok(0.0);
    }
    let ts: Vec<f64> = (0..levels).map(|j| top * (j as f64 + 0.5) / levels as f64).collect();
    let df = distribution(f, measure, &ts);
    let dg = distribution(g, measure, &ts);
    let dev = df
        .above
        .iter()
        .zip(&dg.above)
        .map(|(&a, &b)| match (a.is_infinite(), b.is_infinite()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => 1.0,
            _ => (a - b).abs() / a.max(b).max(1.0),
        })
        .fold(0.0, f64::max);
    Ok(dev)
}

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// `int F(f(r), g(r)) dmu` with three-point Gauss-Legendre per cell (never sampling `r = 1`)
/// plus the constant extension on `[0, nodes[0])`. `F(0, 0)` must be zero.
pub fn measure_integral(
    f: &RadialFunction,
    g: &RadialFunction,
    measure: MeasureProfile,
    integrand: impl Fn(f64, f64) -> f64,
) -> f64 {
    let nodes = f.grid().nodes();
    let (fv, gv) = (f.values(), g.values());
    let mut sum = integrand(fv[0], gv[0]) * measure.cumulative(nodes[0]);
    for (i, w) in nodes.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut cell = 0.0;
        for (x, wt) in GAUSS3 {
            let s = 0.5 * (1.0 + x);
            let r = mid + half * x;
            let fr = fv[i] + s * (fv[i + 1] - fv[i]);
            let gr = gv[i] + s * (gv[i + 1] - gv[i]);
            let val = integrand(fr, gr);
            if val != 0.0 {
                cell += wt * val * measure.density(r);
            }
        }
        sum += half * cell;
    }
    sum
}

/// `int f# g# dmu - int f g dmu`; nonnegative up to discretization error.
pub fn hardy_littlewood_gap(f: &RadialFunction, g: &RadialFunction, measure: MeasureProfile) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::invalid("profiles must share a grid"));
    }
    let fs = rearrange_decreasing(f, measure)?;
    let gs = rearrange_decreasing(g, measure)?;
    let prod = |a: f64, b: f64| a * b;
    Ok(measure_integral(&fs, &gs, measure, prod) - measure_integral(f, g, measure, prod))
}

/// Dirichlet energy of `f` minus that of its hyperbolic rearrangement.
pub fn polya_szego_gap(f: &RadialFunction) -> Result<f64> {
    if !f.is_dirichlet() {
        return Err(Error::invalid("Polya-Szego gap needs a Dirichlet profile"));
    }
    let fs = rearrange_decreasing(f, MeasureProfile::Hyperbolic)?;
    Ok(f.gradient_norm_sq() - fs.gradient_norm_sq())
}

/// `int |f|^p dmu`.
pub fn lp_measure(f: &RadialFunction, measure: MeasureProfile, p: f64) -> f64 {
    measure_integral(f, f, measure, |a, _| a.abs().powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::RadialGrid;

    fn grid() -> RadialGrid {
        RadialGrid::graded(2048).unwrap()
    }

    #[test]
    fn closed_form_cumulative_matches_density() {
        for m in [MeasureProfile::Hyperbolic, MeasureProfile::Euclidean] {
            let (a, b) = (0.3, 0.31);
            let h = b - a;
            let simpson = h / 6.0 * (m.density(a) + 4.0 * m.density(0.5 * (a + b)) + m.density(b));
            assert!((m.annulus(a, b) - simpson).abs() < 1e-7 * simpson);
            assert!((m.annulus(a, b) - (m.cumulative(b) - m.cumulative(a))).abs() < 1e-12);
            let r = 0.77;
            assert!((m.radius_of(m.cumulative(r)) - r).abs() < 1e-14);
        }
        assert!(MeasureProfile::Hyperbolic.cumulative(1.0).is_infinite());
    }

    #[test]
    fn monotone_profile_is_fixed() {
        let g = grid();
        let f = RadialFunction::from_fn(&g, true, |r| (1.0 - r * r).powi(2) + 0.5 * (1.0 - r)).unwrap();
        let fs = rearrange_decreasing(&f, MeasureProfile::Hyperbolic).unwrap();
        let err = f.values().iter().zip(fs.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn constant_is_fixed() {
        let f = RadialFunction::constant(&grid(), 2.5);
        for m in [MeasureProfile::Hyperbolic, MeasureProfile::Euclidean] {
            let fs = rearrange_decreasing(&f, m).unwrap();
            assert!(fs.values().iter().all(|&v| v == 2.5));
        }
    }

    #[test]
    fn euclidean_ramp_becomes_quarter_circle() {
        let g = RadialGrid::uniform(2000).unwrap();
        let f = RadialFunction::from_fn(&g, false, |r| r).unwrap();
        let fs = rearrange_decreasing(&f, MeasureProfile::Euclidean).unwrap();
        let err = g
            .nodes()
            .iter()
            .zip(fs.values())
            .filter(|(&r, _)| r < 0.999)
            .map(|(&r, &v)| (v - (1.0 - r * r).sqrt()).abs())
            .fold(0.0, f64::max);
        // the flat top of f# has a square-root profile, so the error there is O(h)
        assert!(err < 5e-4, "{err}");
    }

    #[test]
    fn negative_input_rejected() {
        let f = RadialFunction::from_fn(&grid(), true, |r| r - 0.5).unwrap();
        assert!(matches!(rearrange_decreasing(&f, MeasureProfile::Hyperbolic), Err(Error::Domain(_))));
    }

    #[test]
    fn scaling_breaks_equimeasurability() {
        let f = RadialFunction::from_fn(&grid(), true, |r| 1.0 - r).unwrap();
        let dev = check_equimeasurable(&f, &f.scaled(2.0), MeasureProfile::Hyperbolic, 256).unwrap();
        assert!(dev > 0.1);
        let dev = check_equimeasurable(&f, &f, MeasureProfile::Hyperbolic, 256).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn hardy_littlewood_strict_for_opposed_steps() {
        let g = grid();
        // f increasing step, g decreasing step, both supported in r < 0.8
        let f = RadialFunction::from_fn(&g, true, |r| if r > 0.4 && r < 0.8 { 1.0 } else { 0.0 }).unwrap();
        let h = RadialFunction::from_fn(&g, true, |r| if r < 0.4 { 1.0 } else { 0.0 }).unwrap();
        let gap = hardy_littlewood_gap(&f, &h, MeasureProfile::Hyperbolic).unwrap();
        // int f h dmu = 0 up to a ramp cell; f# is the disk of measure mu(0.4 < r < 0.8) and h# = h,
        // so the rearranged product is mu(B_0.4).
        let expect = MeasureProfile::Hyperbolic.cumulative(0.4);
        assert!((gap - expect).abs() < 0.02 * expect, "gap {gap} vs {expect}");
    }

    #[test]
    fn polya_szego_positive_for_two_bumps() {
        let g = grid();
        let bump = |c: f64, w: f64| move |r: f64| (-((r - c) / w).powi(2)).exp();
        let (b1, b2) = (bump(0.2, 0.08), bump(0.6, 0.08));
        let f = RadialFunction::from_fn(&g, true, |r| b1(r) + 0.8 * b2(r) - (b1(1.0) + 0.8 * b2(1.0))).unwrap();
        assert!(polya_szego_gap(&f).unwrap() > 0.1);
    }

    #[test]
    fn rearrangement_is_idempotent() {
        let g = grid();
        let f = RadialFunction::from_fn(&g, true, |r| (6.0 * r).sin().abs() * (1.0 - r)).unwrap();
        let a = rearrange_decreasing(&f, MeasureProfile::Hyperbolic).unwrap();
        let b = rearrange_decreasing(&a, MeasureProfile::Hyperbolic).unwrap();
        let err = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}

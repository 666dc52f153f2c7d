use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of nodes.
pub const DEFAULT_NODES: usize = 4096;
/// Default innermost node, and the default gap between the last interior node and `r = 1`.
pub const DEFAULT_ENDPOINT_GAP: f64 = 1e-8;

/// How the nodes of a [`RadialGrid`] were laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grading {
    /// Uniform in `log(r / (1 - r))`: geometric in `r` near 0 and geometric in `1 - r` near 1.
    Logit { inner: f64, outer_gap: f64 },
    Uniform,
    Explicit,
}

/// Ordered radii in `(0, 1]`; the last node is always `1`.
///
/// Cloning is cheap, the node table is shared.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    nodes: Arc<[f64]>,
    grading: Grading,
}

impl PartialEq for RadialGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes[..] == other.nodes[..]
    }
}

impl RadialGrid {
    /// The default graded grid: `n` nodes, first node `1e-8`, `1 - nodes[n-2] = 1e-8`.
    pub fn graded(n: usize) -> Result<Self> {
        Self::logit(n, DEFAULT_ENDPOINT_GAP, DEFAULT_ENDPOINT_GAP)
    }

    pub fn logit(n: usize, inner: f64, outer_gap: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("graded grid needs at least 3 nodes, got {n}")));
        }
        if !(inner > 0.0 && inner < 0.5 && outer_gap > 0.0 && outer_gap < 0.5) {
            return Err(Error::invalid("grading endpoints must lie in (0, 0.5)"));
        }
        let logit = |r: f64| (r / (1.0 - r)).ln();
        let lo = logit(inner);
        let hi = logit(1.0 - outer_gap);
        let m = n - 1;
        let mut nodes = Vec::with_capacity(n);
        for i in 0..m {
            let x = lo + (hi - lo) * i as f64 / (m - 1) as f64;
            nodes.push(1.0 / (1.0 + (-x).exp()));
        }
        nodes[0] = inner;
        nodes[m - 1] = 1.0 - outer_gap;
        nodes.push(1.0);
        Self::build(nodes, Grading::Logit { inner, outer_gap })
    }

    /// `n` equispaced nodes `1/n, 2/n, ..., 1`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 nodes, got {n}")));
        }
        let nodes = (1..=n).map(|i| i as f64 / n as f64).collect();
        Self::build(nodes, Grading::Uniform)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        Self::build(nodes, Grading::Explicit)
    }

    fn build(nodes: Vec<f64>, grading: Grading) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 nodes, got {}", nodes.len())));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::invalid("first node must be positive"));
        }
        if nodes[nodes.len() - 1] != 1.0 {
            return Err(Error::invalid("last node must equal 1"));
        }
        if let Some(i) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(format!(
                "nodes must be strictly increasing (violated at index {})",
                i + 1
            )));
        }
        Ok(Self { nodes: nodes.into(), grading })
    }

    /// Same grading with twice as many nodes (`2n - 1` for explicit grids is not defined).
    pub fn refined(&self) -> Result<Self> {
        match self.grading {
            Grading::Logit { inner, outer_gap } => Self::logit(2 * self.len(), inner, outer_gap),
            Grading::Uniform => Self::uniform(2 * self.len()),
            Grading::Explicit => {
                let mut nodes = Vec::with_capacity(2 * self.len());
                nodes.push(0.5 * self.nodes[0]);
                for (a, b) in self.cells() {
                    nodes.push(a);
                    nodes.push(0.5 * (a + b));
                }
                nodes.push(1.0);
                Self::from_nodes(nodes)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn inner(&self) -> f64 {
        self.nodes[0]
    }

    pub fn cell_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Consecutive node pairs `(a, b)`.
    pub fn cells(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    /// Index `i` of the cell `[nodes[i], nodes[i+1]]` containing `r`, clamped to the valid range.
    pub fn locate(&self, r: f64) -> usize {
        let idx = self.nodes.partition_point(|&x| x <= r);
        idx.saturating_sub(1).min(self.cell_count() - 1)
    }

    /// Index of the node closest to `r`.
    pub fn nearest(&self, r: f64) -> usize {
        let i = self.locate(r);
        if (r - self.nodes[i]).abs() <= (self.nodes[i + 1] - r).abs() {
            i
        } else {
            i + 1
        }
    }

    /// Nodal weights `w_i` such that `sum_i w_i f(r_i)` is the trapezoid value of
    /// `2 pi int_0^1 f(r) r dr`, with `f` held constant on `[0, nodes[0]]`.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut w = vec![0.0; self.len()];
        w[0] = two_pi * 0.5 * self.nodes[0] * self.nodes[0];
        for (i, (a, b)) in self.cells().enumerate() {
            let h = b - a;
            w[i] += two_pi * 0.5 * a * h;
            w[i + 1] += two_pi * 0.5 * b * h;
        }
        w
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::graded(DEFAULT_NODES).expect("default grid parameters are valid")
    }
}

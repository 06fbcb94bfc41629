use std::f64::consts::PI;
use std::fmt;

use super::quadrature::{derivative_weights, gauss_legendre};
use super::OracleError;

/// Coordinate chart on the sphere. Both use `(theta, phi)`; they differ in
/// the local trivialization of the bundle and in the domain where local
/// potentials are trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `theta <= 2pi/3`.
    North,
    /// `theta >= pi/3`.
    South,
}

impl Chart {
    pub fn contains(self, theta: f64) -> bool {
        match self {
            Chart::North => theta <= 2.0 * PI / 3.0 + 1e-12,
            Chart::South => theta >= PI / 3.0 - 1e-12,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Chart::North => "north",
            Chart::South => "south",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

const STENCIL: usize = 5;

/// Gauss-Legendre nodes in `cos(theta)` times `n_phi` uniform periodic
/// nodes in `phi`. Values on the grid are stored row-major, `theta` outer.
///
/// Products of a polynomial of degree `< 2 n_theta` in `cos(theta)` with a
/// trigonometric polynomial of degree `< n_phi` in `phi` integrate exactly
/// (up to rounding).
#[derive(Clone, Debug)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    chart: Chart,
    theta: Vec<f64>,
    phi: Vec<f64>,
    weights: Vec<f64>,
    stencil_start: Vec<usize>,
    stencil_weights: Vec<[f64; STENCIL]>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize, chart: Chart) -> Result<Self, OracleError> {
        if n_theta < STENCIL || n_phi < 4 {
            return Err(OracleError::InvalidGrid { n_theta, n_phi });
        }
        let (x, w) = gauss_legendre(n_theta);
        let theta: Vec<f64> = x.iter().map(|c| c.acos()).collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let phi = (0..n_phi).map(|j| j as f64 * dphi).collect();
        let weights = w.iter().map(|w| w * dphi).collect();
        let mut stencil_start = Vec::with_capacity(n_theta);
        let mut stencil_weights = Vec::with_capacity(n_theta);
        for i in 0..n_theta {
            let start = i.saturating_sub(STENCIL / 2).min(n_theta - STENCIL);
            let dw = derivative_weights(theta[i], &theta[start..start + STENCIL]);
            let mut arr = [0.0; STENCIL];
            arr.copy_from_slice(&dw);
            stencil_start.push(start);
            stencil_weights.push(arr);
        }
        Ok(SphereGrid {
            n_theta,
            n_phi,
            chart,
            theta,
            phi,
            weights,
            stencil_start,
            stencil_weights,
        })
    }

    /// Same nodes, other chart label.
    pub fn with_chart(&self, chart: Chart) -> Self {
        SphereGrid { chart, ..self.clone() }
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn phis(&self) -> &[f64] {
        &self.phi
    }

    /// Area weight of the node row `i`: Gauss weight times `2pi/n_phi`.
    pub fn row_weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    /// `(theta, phi)` of every node, row-major.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.n_theta).flat_map(move |i| (0..self.n_phi).map(move |j| (self.index(i, j), self.theta[i], self.phi[j])))
    }

    /// Samples `f(theta, phi)` at every node.
    pub fn sample<T>(&self, f: impl Fn(f64, f64) -> T) -> Vec<T> {
        self.nodes().map(|(_, t, p)| f(t, p)).collect()
    }

    /// Whether row `i` lies in the grid's chart domain.
    pub fn in_domain(&self, i: usize) -> bool {
        self.chart.contains(self.theta[i])
    }

    /// Sum of all area weights; `4 pi` up to rounding.
    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum::<f64>() * self.n_phi as f64
    }

    /// Five-point, fourth-order derivative in `theta` on the Gauss nodes,
    /// one-sided near the poles.
    pub(crate) fn theta_stencil(&self, i: usize) -> (usize, &[f64; STENCIL]) {
        (self.stencil_start[i], &self.stencil_weights[i])
    }
}

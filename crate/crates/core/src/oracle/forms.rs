use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{Chart, SphereGrid};
use super::quadrature::pairwise_sum;
use super::OracleError;

/// A differential form on the sphere sampled at grid nodes, in the
/// coordinate basis `1`, `(dtheta, dphi)` or `dtheta ∧ dphi`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledForm {
    degree: u8,
    chart: Chart,
    components: Vec<Vec<Complex64>>,
}

impl SampledForm {
    pub fn function(chart: Chart, values: Vec<Complex64>) -> Self {
        SampledForm {
            degree: 0,
            chart,
            components: vec![values],
        }
    }

    /// `a dtheta + b dphi`.
    pub fn one_form(chart: Chart, dtheta: Vec<Complex64>, dphi: Vec<Complex64>) -> Self {
        SampledForm {
            degree: 1,
            chart,
            components: vec![dtheta, dphi],
        }
    }

    /// `f dtheta ∧ dphi`.
    pub fn two_form(chart: Chart, f: Vec<Complex64>) -> Self {
        SampledForm {
            degree: 2,
            chart,
            components: vec![f],
        }
    }

    pub fn zero(degree: u8, chart: Chart, len: usize) -> Self {
        let n = if degree == 1 { 2 } else { 1 };
        SampledForm {
            degree,
            chart,
            components: vec![vec![Complex64::new(0.0, 0.0); len]; n],
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &[Complex64] {
        &self.components[k]
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SampledForm {
            degree: self.degree,
            chart: self.chart,
            components: self.components.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
        }
    }

    /// Pointwise product with a function.
    pub fn mul_function(&self, f: &[Complex64]) -> Self {
        SampledForm {
            degree: self.degree,
            chart: self.chart,
            components: self
                .components
                .iter()
                .map(|v| v.iter().zip(f).map(|(x, y)| x * y).collect())
                .collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.degree, other.degree, "form degrees differ");
        SampledForm {
            degree: self.degree,
            chart: self.chart,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect())
                .collect(),
        }
    }

    /// Largest absolute value over grid rows accepted by `rows`.
    pub fn max_abs_where(&self, grid: &SphereGrid, rows: impl Fn(usize) -> bool) -> f64 {
        let mut m: f64 = 0.0;
        for comp in &self.components {
            for i in (0..grid.n_theta()).filter(|&i| rows(i)) {
                for j in 0..grid.n_phi() {
                    m = m.max(comp[grid.index(i, j)].norm());
                }
            }
        }
        m
    }
}

/// A real vector field `v^theta d/dtheta + v^phi d/dphi` sampled on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl VectorField {
    pub fn sample(grid: &SphereGrid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let values = grid.sample(f);
        VectorField {
            theta: values.iter().map(|v| v.0).collect(),
            phi: values.iter().map(|v| v.1).collect(),
        }
    }
}

/// `d/dtheta` with the grid's five-point stencil.
pub fn d_theta(values: &[Complex64], grid: &SphereGrid) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    for i in 0..grid.n_theta() {
        let (start, w) = grid.theta_stencil(i);
        for j in 0..grid.n_phi() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, wk) in w.iter().enumerate() {
                acc += values[grid.index(start + s, j)] * wk;
            }
            out[grid.index(i, j)] = acc;
        }
    }
    out
}

/// Spectral `d/dphi` on each latitude ring; the Nyquist mode is dropped.
pub fn d_phi(values: &[Complex64], grid: &SphereGrid) -> Vec<Complex64> {
    let n = grid.n_phi();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut out = Vec::with_capacity(values.len());
    for row in values.chunks(n) {
        let mut buf = row.to_vec();
        forward.process(&mut buf);
        for (m, c) in buf.iter_mut().enumerate() {
            let wave = if 2 * m < n {
                m as f64
            } else if 2 * m > n {
                m as f64 - n as f64
            } else {
                0.0
            };
            *c *= Complex64::new(0.0, wave / n as f64);
        }
        inverse.process(&mut buf);
        out.extend(buf);
    }
    out
}

/// Exterior derivative by finite differences: fourth order in `theta`,
/// spectral in `phi`.
pub fn fd_exterior_derivative(form: &SampledForm, grid: &SphereGrid) -> Result<SampledForm, OracleError> {
    match form.degree {
        0 => {
            let f = form.component(0);
            Ok(SampledForm::one_form(form.chart, d_theta(f, grid), d_phi(f, grid)))
        }
        1 => {
            let dth_aphi = d_theta(form.component(1), grid);
            let dphi_ath = d_phi(form.component(0), grid);
            let f = dth_aphi.iter().zip(&dphi_ath).map(|(a, b)| a - b).collect();
            Ok(SampledForm::two_form(form.chart, f))
        }
        d => Err(OracleError::DegreeTooHigh(d)),
    }
}

/// Interior product with a vector field.
pub fn contraction(v: &VectorField, form: &SampledForm) -> Result<SampledForm, OracleError> {
    match form.degree {
        0 => Err(OracleError::WrongDegree { expected: 1, found: 0 }),
        1 => {
            let (a, b) = (form.component(0), form.component(1));
            let f = (0..a.len()).map(|k| a[k] * v.theta[k] + b[k] * v.phi[k]).collect();
            Ok(SampledForm::function(form.chart, f))
        }
        _ => {
            // iota_v (f dtheta ∧ dphi) = f (v^theta dphi - v^phi dtheta)
            let f = form.component(0);
            let dth = (0..f.len()).map(|k| -f[k] * v.phi[k]).collect();
            let dph = (0..f.len()).map(|k| f[k] * v.theta[k]).collect();
            Ok(SampledForm::one_form(form.chart, dth, dph))
        }
    }
}

/// `∫ f dtheta ∧ dphi` by Gauss-Legendre in `cos(theta)` and the trapezoid
/// rule in `phi`, summed pairwise in a fixed order.
pub fn integrate(form: &SampledForm, grid: &SphereGrid) -> Result<Complex64, OracleError> {
    if form.degree != 2 {
        return Err(OracleError::WrongDegree {
            expected: 2,
            found: form.degree,
        });
    }
    let f = form.component(0);
    let terms: Vec<Complex64> = grid
        .nodes()
        .map(|(k, theta, _)| {
            let i = k / grid.n_phi();
            f[k] * (grid.row_weight(i) / theta.sin())
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

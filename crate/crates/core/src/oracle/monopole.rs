use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::forms::{contraction, d_phi, d_theta, fd_exterior_derivative, integrate, SampledForm, VectorField};
use super::grid::{Chart, SphereGrid};
use super::OracleError;
use crate::scalar::{Rational, Scalar};

const CHARTS: [Chart; 2] = [Chart::North, Chart::South];

/// so(3) rotation field `xi_a` at `(theta, phi)` as `(xi^theta, xi^phi)`.
/// The three fields satisfy `[xi_a, xi_b] = epsilon_{abc} xi_c`.
pub fn rotation_field(a: usize, theta: f64, phi: f64) -> (f64, f64) {
    let cot = theta.cos() / theta.sin();
    match a {
        0 => (-phi.sin(), -cot * phi.cos()),
        1 => (-phi.cos(), cot * phi.sin()),
        _ => (0.0, 1.0),
    }
}

/// `[[d_theta xi^theta, d_phi xi^theta], [d_theta xi^phi, d_phi xi^phi]]`.
fn rotation_jacobian(a: usize, theta: f64, phi: f64) -> [[f64; 2]; 2] {
    let cot = theta.cos() / theta.sin();
    let csc2 = 1.0 / (theta.sin() * theta.sin());
    match a {
        0 => [[0.0, -phi.cos()], [csc2 * phi.cos(), cot * phi.sin()]],
        1 => [[0.0, phi.sin()], [-csc2 * phi.sin(), cot * phi.cos()]],
        _ => [[0.0, 0.0], [0.0, 0.0]],
    }
}

/// The three rotation fields sampled on the grid. They do not depend on the
/// chart.
pub fn rotation_fields(grid: &SphereGrid) -> [VectorField; 3] {
    [0, 1, 2].map(|a| VectorField::sample(grid, |t, p| rotation_field(a, t, p)))
}

/// Largest deviation of `[xi_a, xi_b] - epsilon_{abc} xi_c` over the grid
/// rows with `band.0 <= theta <= band.1`, with derivatives of the fields from
/// Richardson-extrapolated central differences of step `h`.
pub fn commutator_residual(grid: &SphereGrid, h: f64, band: (f64, f64)) -> f64 {
    let deriv = |f: &dyn Fn(f64, f64) -> f64, t: f64, p: f64, along_theta: bool| {
        let central = |s: f64| {
            if along_theta {
                (f(t + s, p) - f(t - s, p)) / (2.0 * s)
            } else {
                (f(t, p + s) - f(t, p - s)) / (2.0 * s)
            }
        };
        (4.0 * central(h / 2.0) - central(h)) / 3.0
    };
    let mut worst: f64 = 0.0;
    for (_, t, p) in grid.nodes().filter(|&(_, t, _)| t >= band.0 && t <= band.1) {
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let x = rotation_field(a, t, p);
            let y = rotation_field(b, t, p);
            let expected = rotation_field(c, t, p);
            for comp in 0..2 {
                let pick = |k: usize| move |tt: f64, pp: f64| {
                    let v = rotation_field(k, tt, pp);
                    if comp == 0 {
                        v.0
                    } else {
                        v.1
                    }
                };
                let (yc, xc) = (pick(b), pick(a));
                let bracket = x.0 * deriv(&yc, t, p, true) + x.1 * deriv(&yc, t, p, false)
                    - y.0 * deriv(&xc, t, p, true)
                    - y.1 * deriv(&xc, t, p, false);
                let want = if comp == 0 { expected.0 } else { expected.1 };
                worst = worst.max((bracket - want).abs());
            }
        }
    }
    worst
}

/// Identities checked node by node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `L_xi A + d lambda = 0`: the connection is invariant up to the
    /// chart's gauge compensator.
    Invariance,
    /// `iota_b iota_a F = f^c_{ab} mu_c` (the bracket of moments vanishes
    /// for `u(1)`).
    DoubleContraction,
    /// `d mu_a + iota_a F = 0`, the closedness of `F - chi^a mu_a`.
    EquivariantClosedness,
}

impl Identity {
    pub const ALL: [Identity; 3] = [
        Identity::Invariance,
        Identity::DoubleContraction,
        Identity::EquivariantClosedness,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Identity::Invariance => "invariance",
            Identity::DoubleContraction => "double_contraction",
            Identity::EquivariantClosedness => "equivariant_closedness",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Identity {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.label() == s.trim())
            .ok_or_else(|| OracleError::UnknownIdentity(s.into()))
    }
}

/// Residuals of one identity, per rotation generator and chart, taken over
/// the rows inside each chart's domain.
#[derive(Clone, Debug, PartialEq)]
pub struct PointwiseReport {
    pub identity: Identity,
    pub charge: i64,
    /// `(generator, chart, max |residual|)`.
    pub residuals: Vec<(usize, Chart, f64)>,
    pub max_residual: f64,
    /// `iota_z A_N - iota_z A_S`: the moment seen through the bare local
    /// potentials differs between charts by this constant.
    pub axial_shift: Complex64,
}

/// Rounds values below print precision to `+0` so the sign is stable.
fn tidy(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

impl fmt::Display for PointwiseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (k = {}): max residual {:.3e}", self.identity, self.charge, self.max_residual)?;
        for (a, chart, r) in &self.residuals {
            writeln!(f, "  generator {} {chart}: {r:.3e}", a + 1)?;
        }
        write!(
            f,
            "  axial chart shift: {:+.6}{:+.6}i",
            tidy(self.axial_shift.re),
            tidy(self.axial_shift.im)
        )
    }
}

/// Charge-`k` monopole bundle over the sphere with its rotation action.
///
/// ```text
/// A_N = -(ik/2)(1 - cos theta) dphi      A_S = +(ik/2)(1 + cos theta) dphi
/// F   = -(ik/2) sin theta dtheta ∧ dphi   A_N - A_S = -ik dphi
/// mu  = (ik/2) (sin theta cos phi, -sin theta sin phi, cos theta)
/// ```
///
/// `mu_a = iota_a A + lambda_a` chart by chart, with the compensator
/// `lambda_a` making `mu_a` global. With these signs `(-tau^-1) ∫ F = k`.
#[derive(Clone, Debug)]
pub struct MonopoleScenario {
    charge: i64,
    grid: SphereGrid,
}

impl MonopoleScenario {
    pub fn new(charge: i64, grid: SphereGrid) -> Self {
        MonopoleScenario { charge, grid }
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    fn half_ik(&self) -> Complex64 {
        Complex64::new(0.0, self.charge as f64 / 2.0)
    }

    fn chart_grid(&self, chart: Chart) -> SphereGrid {
        self.grid.with_chart(chart)
    }

    pub fn potential(&self, chart: Chart) -> SampledForm {
        let c = self.half_ik();
        let dphi = self.grid.sample(|t, _| match chart {
            Chart::North => -c * (1.0 - t.cos()),
            Chart::South => c * (1.0 + t.cos()),
        });
        SampledForm::one_form(chart, vec![Complex64::zero(); self.grid.len()], dphi)
    }

    /// Analytic curvature, identical in both charts.
    pub fn curvature(&self, chart: Chart) -> SampledForm {
        let c = self.half_ik();
        SampledForm::two_form(chart, self.grid.sample(|t, _| -c * t.sin()))
    }

    /// `dA` by finite differences of the chart potential.
    pub fn fd_curvature(&self, chart: Chart) -> SampledForm {
        fd_exterior_derivative(&self.potential(chart), &self.chart_grid(chart)).expect("one-form")
    }

    /// `lambda_a` in the given chart.
    pub fn compensator(&self, a: usize, chart: Chart) -> Result<Vec<Complex64>, OracleError> {
        check_generator(a)?;
        let c = self.half_ik();
        Ok(self.grid.sample(|t, p| {
            let s = match chart {
                Chart::North => (t / 2.0).tan(),
                Chart::South => 1.0 / (t / 2.0).tan(),
            };
            match (a, chart) {
                (0, _) => c * p.cos() * s,
                (1, _) => -c * p.sin() * s,
                (_, Chart::North) => c,
                (_, Chart::South) => -c,
            }
        }))
    }

    /// `mu_a = iota_a A + lambda_a` from the chart's potential.
    pub fn moment(&self, a: usize, chart: Chart) -> Result<SampledForm, OracleError> {
        let lambda = self.compensator(a, chart)?;
        let xi = VectorField::sample(&self.grid, |t, p| rotation_field(a, t, p));
        let bare = contraction(&xi, &self.potential(chart))?;
        let values = bare.component(0).iter().zip(&lambda).map(|(x, l)| x + l).collect();
        Ok(SampledForm::function(chart, values))
    }

    /// `mu_a` from its closed form.
    pub fn moment_exact(&self, a: usize) -> Result<Vec<Complex64>, OracleError> {
        check_generator(a)?;
        let c = self.half_ik();
        Ok(self.grid.sample(|t, p| match a {
            0 => c * t.sin() * p.cos(),
            1 => -c * t.sin() * p.sin(),
            _ => c * t.cos(),
        }))
    }

    /// `iota_z A_N - iota_z A_S`, which equals `-ik`.
    pub fn axial_shift(&self) -> Complex64 {
        let n = self.potential(Chart::North);
        let s = self.potential(Chart::South);
        n.component(1)[0] - s.component(1)[0]
    }

    /// Max of `|A_N - A_S + ik dphi|` over rows where both charts apply.
    pub fn transition_residual(&self) -> f64 {
        let jump = self.potential(Chart::North).sub(&self.potential(Chart::South));
        let shift = Complex64::new(0.0, self.charge as f64);
        let fixed = SampledForm::one_form(
            Chart::North,
            jump.component(0).to_vec(),
            jump.component(1).iter().map(|x| x + shift).collect(),
        );
        fixed.max_abs_where(&self.grid, |i| {
            let t = self.grid.thetas()[i];
            Chart::North.contains(t) && Chart::South.contains(t)
        })
    }

    /// `(-tau^-1) ∫ F = ∫ F / (-2 pi i)`.
    pub fn chern_number(&self) -> Complex64 {
        let total = integrate(&self.curvature(Chart::North), &self.grid).expect("two-form");
        total / Complex64::new(0.0, -2.0 * PI)
    }

    pub fn verify_pointwise(&self, identity: &str) -> Result<PointwiseReport, OracleError> {
        let identity: Identity = identity.parse()?;
        self.verify(identity)
    }

    pub fn verify(&self, identity: Identity) -> Result<PointwiseReport, OracleError> {
        let mut residuals = Vec::new();
        for chart in CHARTS {
            let grid = self.chart_grid(chart);
            for a in 0..3 {
                let r = match identity {
                    Identity::Invariance => self.invariance_residual(a, &grid)?,
                    Identity::DoubleContraction => self.double_contraction_residual(a, &grid)?,
                    Identity::EquivariantClosedness => self.closedness_residual(a, &grid)?,
                };
                residuals.push((a, chart, r));
            }
        }
        let max_residual = residuals.iter().map(|r| r.2).fold(0.0, f64::max);
        Ok(PointwiseReport {
            identity,
            charge: self.charge,
            residuals,
            max_residual,
            axial_shift: self.axial_shift(),
        })
    }

    fn in_chart(grid: &SphereGrid) -> impl Fn(usize) -> bool + '_ {
        move |i| grid.in_domain(i)
    }

    /// `(L_xi A)_j = xi^i d_i A_j + A_i d_j xi^i`, with `d A` from finite
    /// differences and the field derivatives exact.
    fn invariance_residual(&self, a: usize, grid: &SphereGrid) -> Result<f64, OracleError> {
        let chart = grid.chart();
        let pot = self.potential(chart);
        let lambda = SampledForm::function(chart, self.compensator(a, chart)?);
        let dlambda = fd_exterior_derivative(&lambda, grid)?;
        let partials: Vec<[Vec<Complex64>; 2]> = (0..2)
            .map(|j| [d_theta(pot.component(j), grid), d_phi(pot.component(j), grid)])
            .collect();
        let mut lie = [Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len())];
        for (k, t, p) in grid.nodes() {
            let xi = rotation_field(a, t, p);
            let jac = rotation_jacobian(a, t, p);
            let at = pot.component(0)[k];
            let ap = pot.component(1)[k];
            for (j, out) in lie.iter_mut().enumerate() {
                let transport = partials[j][0][k] * xi.0 + partials[j][1][k] * xi.1;
                let twist = at * jac[0][j] + ap * jac[1][j];
                out.push(transport + twist);
            }
        }
        let [lt, lp] = lie;
        let residual = SampledForm::one_form(chart, lt, lp).add(&dlambda);
        Ok(residual.max_abs_where(grid, Self::in_chart(grid)))
    }

    /// `iota_b iota_a dA - epsilon_{abc} mu_c` over all `b`.
    fn double_contraction_residual(&self, a: usize, grid: &SphereGrid) -> Result<f64, OracleError> {
        let chart = grid.chart();
        let f = self.fd_curvature(chart);
        let fields = rotation_fields(grid);
        let once = contraction(&fields[a], &f)?;
        let mut worst: f64 = 0.0;
        for (b, field) in fields.iter().enumerate() {
            let twice = contraction(field, &once)?;
            let expected = match (a, b) {
                (x, y) if x == y => SampledForm::zero(0, chart, grid.len()),
                _ => {
                    let c = 3 - a - b;
                    let sign = if (a + 1) % 3 == b { 1.0 } else { -1.0 };
                    self.moment(c, chart)?.scale(Complex64::new(sign, 0.0))
                }
            };
            worst = worst.max(twice.sub(&expected).max_abs_where(grid, Self::in_chart(grid)));
        }
        Ok(worst)
    }

    /// `d mu_a + iota_a F` with `d` by finite differences.
    fn closedness_residual(&self, a: usize, grid: &SphereGrid) -> Result<f64, OracleError> {
        let chart = grid.chart();
        let dmu = fd_exterior_derivative(&self.moment(a, chart)?, grid)?;
        let xi = VectorField::sample(grid, |t, p| rotation_field(a, t, p));
        let contracted = contraction(&xi, &self.curvature(chart))?;
        Ok(dmu.add(&contracted).max_abs_where(grid, Self::in_chart(grid)))
    }
}

fn check_generator(a: usize) -> Result<(), OracleError> {
    if a < 3 {
        Ok(())
    } else {
        Err(OracleError::UnknownGenerator(a))
    }
}

fn double_factorial(n: i64) -> Rational {
    let mut out = Rational::one();
    let mut k = n;
    while k > 1 {
        out *= Rational::from_integer(k.into());
        k -= 2;
    }
    out
}

/// `∫_{S^2} x^a y^b z^c dA` exactly:
/// `4 pi (a-1)!! (b-1)!! (c-1)!! / (a+b+c+1)!!` for even exponents, else 0.
pub fn sphere_monomial_integral(a: u32, b: u32, c: u32) -> Scalar {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return Scalar::zero();
    }
    let num = double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1) * double_factorial(c as i64 - 1);
    let den = double_factorial((a + b + c) as i64 + 1);
    Scalar::pi().scale_rational(&(num / den * Rational::from_integer(4.into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nt: usize, np: usize) -> SphereGrid {
        SphereGrid::new(nt, np, Chart::North).unwrap()
    }

    #[test]
    fn flux_gives_charge() {
        let g = grid(200, 400);
        for k in -2..=2 {
            let m = MonopoleScenario::new(k, g.clone());
            let total = integrate(&m.curvature(Chart::North), &g).unwrap();
            let expected = Complex64::new(0.0, -2.0 * PI * k as f64);
            let err = (total - expected).norm();
            if k == 0 {
                assert_eq!(err, 0.0);
            } else {
                assert!(err / expected.norm() < 1e-12, "k={k} err={err}");
            }
            assert!((m.chern_number() - Complex64::new(k as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn area_and_stokes() {
        let g = grid(60, 64);
        let area = SampledForm::two_form(Chart::North, g.sample(|t, _| Complex64::new(t.sin(), 0.0)));
        let a = integrate(&area, &g).unwrap();
        assert!((a.re - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        // d(f dphi) with f = sin^2(theta) cos(phi)
        let one = SampledForm::one_form(
            Chart::North,
            vec![Complex64::zero(); g.len()],
            g.sample(|t, p| Complex64::new(t.sin().powi(2) * p.cos(), 0.0)),
        );
        let exact = fd_exterior_derivative(&one, &g).unwrap();
        assert!(integrate(&exact, &g).unwrap().norm() < 1e-10);
        assert!(matches!(
            integrate(&one, &g),
            Err(OracleError::WrongDegree { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn derivative_of_cos_theta() {
        let g = grid(200, 400);
        let f = SampledForm::function(Chart::North, g.sample(|t, _| Complex64::new(t.cos(), 0.0)));
        let df = fd_exterior_derivative(&f, &g).unwrap();
        let exact = SampledForm::one_form(
            Chart::North,
            g.sample(|t, _| Complex64::new(-t.sin(), 0.0)),
            vec![Complex64::zero(); g.len()],
        );
        assert!(df.sub(&exact).max_abs_where(&g, |_| true) < 1e-8);
        assert!(df.component(1).iter().all(|x| x.norm() < 1e-12));
        let two = SampledForm::two_form(Chart::North, vec![Complex64::zero(); g.len()]);
        assert_eq!(fd_exterior_derivative(&two, &g), Err(OracleError::DegreeTooHigh(2)));
    }

    #[test]
    fn axial_field_and_dphi() {
        let g = grid(20, 16);
        let [_, _, z] = rotation_fields(&g);
        assert!(z.theta.iter().all(|&x| x == 0.0) && z.phi.iter().all(|&x| x == 1.0));
        let dphi = SampledForm::one_form(Chart::North, vec![Complex64::zero(); g.len()], vec![Complex64::one(); g.len()]);
        let c = contraction(&z, &dphi).unwrap();
        assert!(c.component(0).iter().all(|&x| x == Complex64::one()));
    }

    #[test]
    fn rotation_fields_close_under_bracket() {
        let g = grid(40, 32);
        let r = commutator_residual(&g, 1e-4, (PI / 6.0, 5.0 * PI / 6.0));
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn transition_and_moments() {
        let m = MonopoleScenario::new(3, grid(60, 32));
        assert!(m.transition_residual() < 1e-10);
        assert!((m.axial_shift() - Complex64::new(0.0, -3.0)).norm() < 1e-14);
        for a in 0..3 {
            let exact = m.moment_exact(a).unwrap();
            for chart in CHARTS {
                let mu = m.moment(a, chart).unwrap();
                let g = m.grid().with_chart(chart);
                let diff = SampledForm::function(chart, exact.clone()).sub(&mu);
                assert!(diff.max_abs_where(&g, |i| g.in_domain(i)) < 1e-12);
            }
        }
        assert_eq!(m.moment(3, Chart::North), Err(OracleError::UnknownGenerator(3)));
    }

    #[test]
    fn identities_hold_for_unit_charge() {
        let m = MonopoleScenario::new(1, grid(200, 64));
        for id in Identity::ALL {
            let r = m.verify(id).unwrap();
            assert!(r.max_residual < 1e-6, "{r}");
        }
        assert!(matches!(m.verify_pointwise("eq"), Err(OracleError::UnknownIdentity(_))));
    }

    #[test]
    fn flat_case_is_exact() {
        let m = MonopoleScenario::new(0, grid(40, 16));
        for id in Identity::ALL {
            assert_eq!(m.verify(id).unwrap().max_residual, 0.0);
        }
    }

    #[test]
    fn closedness_converges_at_fourth_order() {
        let r: Vec<f64> = [24, 48, 96]
            .iter()
            .map(|&n| MonopoleScenario::new(1, grid(n, 16)).verify(Identity::EquivariantClosedness).unwrap().max_residual)
            .collect();
        for w in r.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 3.5, "residuals {r:?}");
        }
    }

    #[test]
    fn charts_agree_on_integrals() {
        let m = MonopoleScenario::new(2, grid(120, 64));
        let g = m.grid();
        let n = integrate(&m.fd_curvature(Chart::North), g).unwrap();
        let s = integrate(&m.fd_curvature(Chart::South), g).unwrap();
        assert!((n - s).norm() < 1e-10, "{n} {s}");
        let area: Vec<Complex64> = g.sample(|t, _| Complex64::new(t.sin(), 0.0));
        for a in 0..3 {
            let by_chart: Vec<Complex64> = CHARTS
                .iter()
                .map(|&c| {
                    let mu = m.moment(a, c).unwrap().mul_function(&area);
                    integrate(&SampledForm::two_form(c, mu.component(0).to_vec()), g).unwrap()
                })
                .collect();
            assert!((by_chart[0] - by_chart[1]).norm() < 1e-10, "{by_chart:?}");
        }
    }

    #[test]
    fn exact_monomial_integrals() {
        assert_eq!(sphere_monomial_integral(0, 0, 0), Scalar::pi().scale_rational(&Rational::from_integer(4.into())));
        assert_eq!(sphere_monomial_integral(0, 0, 2), Scalar::pi().scale_rational(&Rational::new(4.into(), 3.into())));
        assert!(sphere_monomial_integral(1, 0, 0).is_zero());
        let g = grid(20, 16);
        for (a, b, c) in [(2, 2, 0), (0, 2, 4), (2, 2, 2), (4, 0, 0)] {
            let f = SampledForm::two_form(
                Chart::North,
                g.sample(|t, p| {
                    let (x, y, z) = (t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
                    Complex64::new(x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32) * t.sin(), 0.0)
                }),
            );
            let num = integrate(&f, &g).unwrap();
            assert!((num - sphere_monomial_integral(a, b, c).eval()).norm() < 1e-13);
        }
    }
}

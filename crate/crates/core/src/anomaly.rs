//! Moment maps of determinant-line curvature: the equivariant pushforward of
//! a characteristic series, its degree-2 component `(omega, mu)`, the closed
//! form `-tau (-tau^-1)^n / n! ∫ tr(v F^n)`, and a dual-path cross-check on
//! the monopole bundle.
//!
//! Conventions: `tau = 2 pi i`, so `i/2pi = -tau^-1`. An equivariant 2-form
//! is `omega - chi^a mu_a`; the degree-2 component of a pushforward `c` is
//! turned into `(omega, mu)` by multiplying with `tau`, giving
//! `omega = tau [c]_2|_{chi = 0}` and `mu_a = -tau * (chi^a coefficient)`.
//!
//! The closed form carries one more factor of `tau` than the extraction:
//! `closed_form = tau * moment`. Both are reported; the `stripped` value of
//! an [`AnomalyValue`] is the one that matches the extraction.
//!
//! The monopole setting uses `g = so(3) ⊕ u(1)` acting on the charge-`k`
//! bundle over the sphere, with index [`GAUGE`] the constant gauge rotation
//! (`mu_gauge = 1`), and `h = u(1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::connection::{big_omega, mu, UniversalConnectionAlgebra};
use crate::graded::{substitute, AlgebraError, Generator, GradedElement, IndexClass, Monomial};
use crate::lie::{LieAlgebraData, MatrixRep};
use crate::oracle::{integrate, sphere_monomial_integral, Chart, MonopoleScenario, OracleError, SampledForm};
use crate::scalar::{factorial, Rational, Scalar};
use crate::series::{equivariant_substitute, CharSeries, MatrixCurvature, SeriesError, SeriesKind};
use crate::weil::{self, CartanElement, CHI};

/// Index of the gauge direction in `so(3) ⊕ u(1)`.
pub const GAUGE: usize = 3;
/// Real dimension of the sphere.
pub const FIBER_DIM: u32 = 2;
/// Total degree kept in the integrand: `2 + FIBER_DIM`.
const TOP: u32 = 2 + FIBER_DIM;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnomalyError {
    #[error("integrand kept to degree {available}, need {needed}")]
    TruncationTooLow { needed: u32, available: u32 },
    #[error("dim X = {fiber_dim} does not match F^{n} (need dim X = 2n)")]
    DimensionMismatch { n: u32, fiber_dim: u32 },
    #[error("integrand `{0}` has no monopole realization")]
    UnsupportedIntegrand(String),
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("moment vector has {found} entries, expected {expected}")]
    WrongGDim { expected: usize, found: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `(omega, mu)` with the Cartan element `omega - sum_a chi^a mu_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantTwoForm {
    pub omega: GradedElement,
    pub moment: Vec<GradedElement>,
}

impl EquivariantTwoForm {
    pub fn zero(g_dim: usize) -> Self {
        EquivariantTwoForm {
            omega: GradedElement::zero(),
            moment: vec![GradedElement::zero(); g_dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.omega.is_zero() && self.moment.iter().all(GradedElement::is_zero)
    }

    /// `omega - chi^a mu_a`.
    pub fn reconstruct(&self) -> CartanElement {
        let mut x = self.omega.clone();
        for (a, m) in self.moment.iter().enumerate() {
            x = &x - &(&GradedElement::generator(weil::chi(a)) * m);
        }
        CartanElement::new(x)
    }

    /// `mu(xi) = xi^a mu_a`.
    pub fn moment_on(&self, xi: &[Scalar]) -> Result<GradedElement, AnomalyError> {
        if xi.len() != self.moment.len() {
            return Err(AnomalyError::WrongGDim {
                expected: self.moment.len(),
                found: xi.len(),
            });
        }
        let mut out = GradedElement::zero();
        for (m, x) in self.moment.iter().zip(xi) {
            if !x.is_zero() {
                out += &m.scale(x);
            }
        }
        Ok(out)
    }
}

/// A fiber integral kept as an opaque degree-0 symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberIntegral {
    pub symbol: Generator,
    pub integrand: Monomial,
}

/// Result of integrating a Cartan element over the fiber with a point base.
#[derive(Clone, Debug, PartialEq)]
pub struct Pushforward {
    pub element: CartanElement,
    pub integrals: Vec<FiberIntegral>,
    pub fiber_dim: u32,
    /// Total degree to which the integrand was kept.
    pub truncation: u32,
}

impl Pushforward {
    pub fn two_form_component(&self, g_dim: usize) -> Result<EquivariantTwoForm, AnomalyError> {
        two_form_component(&self.element, g_dim, self.fiber_dim, self.truncation)
    }

    /// Replaces every integral symbol with the exact value from `value`.
    pub fn evaluate_exact(
        &self,
        x: &GradedElement,
        value: impl Fn(&Monomial) -> Result<Scalar, AnomalyError>,
    ) -> Result<GradedElement, AnomalyError> {
        let mut images = BTreeMap::new();
        for fi in &self.integrals {
            images.insert(fi.symbol.clone(), GradedElement::constant(value(&fi.integrand)?));
        }
        Ok(substitute(&images, x, None)?)
    }

    /// Numeric value of a symbol-only element.
    pub fn evaluate_numeric(
        &self,
        x: &GradedElement,
        value: impl Fn(&Monomial) -> Result<Complex64, AnomalyError>,
    ) -> Result<Complex64, AnomalyError> {
        let mut values = BTreeMap::new();
        for fi in &self.integrals {
            values.insert(fi.symbol.clone(), value(&fi.integrand)?);
        }
        Ok(x.evaluate(&|g| values.get(g).copied())?)
    }
}

/// `∫_{X/pt}`: each carrier monomial of form degree `fiber_dim` becomes a
/// degree-0 symbol `int(...)`; carrier monomials of any other degree
/// integrate to zero over a point base. `chi` factors pass through.
pub fn integrate_over_fiber(c: &CartanElement, fiber_dim: u32, truncation: u32) -> Pushforward {
    let mut out = GradedElement::zero();
    let mut symbols: BTreeMap<Monomial, Generator> = BTreeMap::new();
    for (m, coeff) in c.element().terms() {
        let (_, chi_part, carrier) = m.split_by(|g| g.name() == CHI);
        if carrier.degree() != fiber_dim {
            continue;
        }
        let symbol = symbols
            .entry(carrier.clone())
            .or_insert_with(|| Generator::new(&format!("int({carrier})"), 0, &[]))
            .clone();
        let (_, mono) = chi_part.mul(&Monomial::generator(symbol)).expect("even factors commute");
        out.add_term(mono, coeff.clone());
    }
    Pushforward {
        element: CartanElement::new(out),
        integrals: symbols
            .into_iter()
            .map(|(integrand, symbol)| FiberIntegral { symbol, integrand })
            .collect(),
        fiber_dim,
        truncation,
    }
}

/// Degree-2 component of a fiber-integrated element, times `tau`:
/// `omega = tau * (chi-free part)`, `mu_a = -tau * (chi^a coefficient)`.
pub fn two_form_component(
    c: &CartanElement,
    g_dim: usize,
    fiber_dim: u32,
    truncation: u32,
) -> Result<EquivariantTwoForm, AnomalyError> {
    let needed = 2 + fiber_dim;
    if truncation < needed {
        return Err(AnomalyError::TruncationTooLow {
            needed,
            available: truncation,
        });
    }
    let tau = Scalar::tau_pow(1);
    let mut out = EquivariantTwoForm::zero(g_dim);
    for (chi_mono, coeff) in CartanElement::new(c.element().homogeneous_part(2)).chi_expansion() {
        match chi_mono.factors() {
            [] => out.omega += &coeff.scale(&tau),
            [(g, 1)] => {
                let a = g.indices()[0].1;
                if a >= g_dim {
                    return Err(AlgebraError::IndexOutOfRange { index: a, dim: g_dim }.into());
                }
                out.moment[a] += &coeff.scale(&-&tau);
            }
            _ => unreachable!("degree-2 part has at most one chi"),
        }
    }
    Ok(out)
}

/// A value in both normalizations: `with_tau` carries the extra `tau`
/// prefactor, `stripped = with_tau / tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyValue<T> {
    pub with_tau: T,
    pub stripped: T,
}

/// `-tau (-tau^-1)^n / n!`.
fn closed_form_prefactor(n: u32) -> Scalar {
    let p = Scalar::tau_pow(-(n as i32)).scale_rational(&(Rational::from_integer(1.into()) / factorial(n)));
    let sign = if n.is_multiple_of(2) { -1 } else { 1 };
    p.mul_tau_pow(1).scale_rational(&Rational::from_integer(sign.into()))
}

/// `-tau (-tau^-1)^n (1/n!) ∫ tr(v F^n)` exactly, with `integrate` the
/// pushforward of a degree-`2n` element to a scalar.
pub fn covariant_anomaly(
    n: u32,
    v: &MatrixCurvature,
    f: &MatrixCurvature,
    integrate: impl Fn(&GradedElement) -> Result<Scalar, AnomalyError>,
) -> Result<AnomalyValue<Scalar>, AnomalyError> {
    if v.size() != f.size() {
        return Err(AnomalyError::SizeMismatch(v.size(), f.size()));
    }
    f.check_homogeneous(2)?;
    v.check_homogeneous(0)?;
    let top = 2 * n;
    let mut p = v.clone();
    for _ in 0..n {
        p = p.mul(f, Some(top));
    }
    let integral = integrate(&p.trace())?;
    let with_tau = &closed_form_prefactor(n) * &integral;
    let stripped = with_tau.mul_tau_pow(-1);
    Ok(AnomalyValue { with_tau, stripped })
}

/// Row-major complex matrix at each node.
type NodeMatrices = Vec<Vec<Complex64>>;

/// The closed form from sampled `v` and `F` (coefficient of
/// `dtheta ∧ dphi`), integrated by quadrature over the sphere.
pub fn covariant_anomaly_sampled(
    n: u32,
    v: &NodeMatrices,
    f: &NodeMatrices,
    size: usize,
    scenario: &MonopoleScenario,
) -> Result<AnomalyValue<Complex64>, AnomalyError> {
    if 2 * n != FIBER_DIM {
        return Err(AnomalyError::DimensionMismatch { n, fiber_dim: FIBER_DIM });
    }
    let grid = scenario.grid();
    let trace: Vec<Complex64> = v
        .iter()
        .zip(f)
        .map(|(v, f)| {
            let mut p = v.clone();
            for _ in 0..n {
                p = cmat_mul(&p, f, size);
            }
            (0..size).map(|i| p[i * size + i]).sum()
        })
        .collect();
    let integral = integrate(&SampledForm::two_form(grid.chart(), trace), grid)?;
    let with_tau = closed_form_prefactor(n).eval() * integral;
    let stripped = with_tau / Scalar::tau_pow(1).eval();
    Ok(AnomalyValue { with_tau, stripped })
}

fn cmat_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// `so(3) ⊕ u(1)`.
pub fn monopole_symmetry() -> LieAlgebraData {
    LieAlgebraData::so3().direct_sum(&LieAlgebraData::u1())
}

/// `u(1)` for the Chern character, the real form `so(2)` for A-hat.
pub fn representation_for(series: &CharSeries) -> MatrixRep {
    match series.kind() {
        SeriesKind::Additive => MatrixRep::u1(),
        SeriesKind::Multiplicative => MatrixRep::so2(),
    }
}

/// Symbolic side: the series on `Omega_G` of the universal algebra,
/// integrated over the fiber, and its degree-2 component.
#[derive(Clone, Debug)]
pub struct SymbolicAnomaly {
    pub integrand: CartanElement,
    pub pushforward: Pushforward,
    pub two_form: EquivariantTwoForm,
}

pub fn symbolic_pipeline(series: &CharSeries) -> Result<SymbolicAnomaly, AnomalyError> {
    let g = monopole_symmetry();
    let g_dim = g.dim();
    let u = UniversalConnectionAlgebra::build(g, LieAlgebraData::u1(), TOP)?;
    let omega_g = u.equivariant_curvature();
    let m = MatrixCurvature::from_cartan(&omega_g, &representation_for(series));
    let top = series.degree().max(TOP);
    let full = equivariant_substitute(series, &m, top)?;
    let integrand = CartanElement::new(full.element().truncate(TOP));
    let pushforward = integrate_over_fiber(&integrand, FIBER_DIM, TOP);
    let two_form = pushforward.two_form_component(g_dim)?;
    Ok(SymbolicAnomaly {
        integrand,
        pushforward,
        two_form,
    })
}

/// Exponents of an integrand `Omega^1 mu_0^ex mu_1^ey mu_2^ez mu_gauge^eg`.
fn integrand_exponents(m: &Monomial) -> Result<[u32; 4], AnomalyError> {
    let unsupported = || AnomalyError::UnsupportedIntegrand(m.to_string());
    let mut omega = 0;
    let mut e = [0u32; 4];
    for (g, p) in m.factors() {
        if *g == big_omega(0) {
            omega += p;
            continue;
        }
        match (g.name(), g.indices()) {
            ("mu", [(IndexClass::G, a), (IndexClass::H, 0)]) if *a < 4 => e[*a] += p,
            _ => return Err(unsupported()),
        }
    }
    if omega != 1 {
        return Err(unsupported());
    }
    Ok(e)
}

/// Values of universal integrands on a monopole: `Omega^1 = F / i` and
/// `mu_a^1 = mu_a / i`, the `u(1)` components of the chart data.
#[derive(Clone, Debug)]
pub struct MonopoleIntegrals<'a> {
    scenario: &'a MonopoleScenario,
    chart: Chart,
}

impl<'a> MonopoleIntegrals<'a> {
    pub fn new(scenario: &'a MonopoleScenario, chart: Chart) -> Self {
        MonopoleIntegrals { scenario, chart }
    }

    /// With `Omega^1 = -(k/2) dA` and `mu^1 = (k/2)(x, -y, z)`, from exact
    /// sphere monomial integrals.
    pub fn exact(&self, m: &Monomial) -> Result<Scalar, AnomalyError> {
        let e = integrand_exponents(m)?;
        let half_k = Rational::new(self.scenario.charge().into(), 2.into());
        let mut coeff = -half_k.clone();
        for (a, &p) in e.iter().take(3).enumerate() {
            let base = if a == 1 { -half_k.clone() } else { half_k.clone() };
            for _ in 0..p {
                coeff *= &base;
            }
        }
        Ok(sphere_monomial_integral(e[0], e[1], e[2]).scale_rational(&coeff))
    }

    /// Quadrature of the sampled chart data.
    pub fn numeric(&self, m: &Monomial) -> Result<Complex64, AnomalyError> {
        let e = integrand_exponents(m)?;
        let i = Complex64::i();
        let mut values: Vec<Complex64> = self.scenario.curvature(self.chart).component(0).iter().map(|x| x / i).collect();
        for (a, &p) in e.iter().take(3).enumerate() {
            if p == 0 {
                continue;
            }
            let mu = self.scenario.moment(a, self.chart)?;
            for (v, x) in values.iter_mut().zip(mu.component(0)) {
                *v *= (x / i).powu(p);
            }
        }
        Ok(integrate(&SampledForm::two_form(self.chart, values), self.scenario.grid())?)
    }
}

/// Polynomial jet in `t` (weight 2) and `eps` (weight 2, `eps^2 = 0`),
/// truncated at total weight 4: the pointwise value of a Cartan element
/// evaluated on `chi -> t xi` at a node, with `eps = dtheta ∧ dphi`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Jet([[Complex64; 2]; 3]);

impl Jet {
    fn constant(c: Complex64) -> Self {
        let mut j = Jet::default();
        j.0[0][0] = c;
        j
    }

    fn add(&self, o: &Jet) -> Jet {
        let mut r = *self;
        for p in 0..3 {
            for q in 0..2 {
                r.0[p][q] += o.0[p][q];
            }
        }
        r
    }

    fn scale(&self, c: Complex64) -> Jet {
        let mut r = *self;
        r.0.iter_mut().flatten().for_each(|x| *x *= c);
        r
    }

    fn mul(&self, o: &Jet) -> Jet {
        let mut r = Jet::default();
        for p1 in 0..3 {
            for q1 in 0..2 {
                for p2 in 0..3 - p1 {
                    for q2 in 0..2 - q1 {
                        if p1 + p2 + q1 + q2 <= 2 {
                            r.0[p1 + p2][q1 + q2] += self.0[p1][q1] * o.0[p2][q2];
                        }
                    }
                }
            }
        }
        r
    }
}

fn jet_mat_mul(a: &[Jet], b: &[Jet], n: usize) -> Vec<Jet> {
    let mut out = vec![Jet::default(); n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i * n + j] = out[i * n + j].add(&a[i * n + k].mul(&b[k * n + j]));
            }
        }
    }
    out
}

/// The series applied pointwise to `R = M (Omega^1 eps - t xi^a mu_a^1)`,
/// with coefficients and normalization taken as floating-point numbers.
fn series_on_jets(series: &CharSeries, rep: &MatrixRep, curvature: Jet) -> Jet {
    let n = rep.dim_v;
    let norm = series.normalization().eval();
    let x: Vec<Jet> = (0..n * n)
        .map(|k| curvature.scale(rep.matrices[0].get(k / n, k % n).eval() * norm))
        .collect();
    let mut traces = Vec::with_capacity(3);
    let mut p: Vec<Jet> = (0..n * n)
        .map(|k| Jet::constant(if k / n == k % n { Complex64::new(1.0, 0.0) } else { Complex64::zero() }))
        .collect();
    for k in 0..3 {
        if k > 0 {
            p = jet_mat_mul(&p, &x, n);
        }
        traces.push((0..n).fold(Jet::default(), |acc, i| acc.add(&p[i * n + i])));
    }
    match series.kind() {
        SeriesKind::Additive => {
            let f = series.function();
            traces.iter().enumerate().fold(Jet::default(), |acc, (k, t)| {
                let c = if k < f.order() { to_f64(&f.coeff(k)) } else { 0.0 };
                acc.add(&t.scale(Complex64::new(c, 0.0)))
            })
        }
        SeriesKind::Multiplicative => {
            let logs = series.log_coefficients();
            let exponent = traces.iter().enumerate().skip(1).fold(Jet::default(), |acc, (k, t)| {
                let c = logs.get(&(k as u32)).map(|s| s.eval()).unwrap_or_default();
                acc.add(&t.scale(c * 0.5))
            });
            let one = Jet::constant(Complex64::new(1.0, 0.0));
            one.add(&exponent).add(&exponent.mul(&exponent).scale(Complex64::new(0.5, 0.0)))
        }
    }
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("finite rational")
}

/// Numeric path: `-tau * ∫ [series(Omega_G(xi))]_{t eps}` from sampled
/// chart data, node by node.
pub fn numeric_moment(
    scenario: &MonopoleScenario,
    series: &CharSeries,
    xi: &[Rational],
    chart: Chart,
) -> Result<Complex64, AnomalyError> {
    if xi.len() != 4 {
        return Err(AnomalyError::WrongGDim { expected: 4, found: xi.len() });
    }
    let rep = representation_for(series);
    let grid = scenario.grid();
    let i = Complex64::i();
    let omega: Vec<Complex64> = scenario.curvature(chart).component(0).iter().map(|x| x / i).collect();
    let mut v = vec![Complex64::new(to_f64(&xi[GAUGE]), 0.0); grid.len()];
    for (a, x) in xi.iter().take(3).enumerate() {
        if x.is_zero() {
            continue;
        }
        let mu = scenario.moment(a, chart)?;
        for (vk, m) in v.iter_mut().zip(mu.component(0)) {
            *vk += m / i * to_f64(x);
        }
    }
    let density: Vec<Complex64> = omega
        .iter()
        .zip(&v)
        .map(|(w, v)| {
            let mut r = Jet::default();
            r.0[0][1] = *w;
            r.0[1][0] = -v;
            series_on_jets(series, &rep, r).0[1][1]
        })
        .collect();
    let c = integrate(&SampledForm::two_form(chart, density), grid)?;
    Ok(-Scalar::tau_pow(1).eval() * c)
}

/// `|a - b| <= 1e-8 max(|a|, |b|) + 1e-12`.
pub fn agree(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-8 * a.norm().max(b.norm()) + 1e-12
}

/// One evaluation point `xi = e_generator + lambda e_gauge`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentComparison {
    pub generator: usize,
    pub lambda: Rational,
    /// Symbolic extraction with exact integrals.
    pub exact: Scalar,
    /// Symbolic extraction with quadrature integrals.
    pub symbolic: Complex64,
    /// Sampled forms end to end.
    pub numeric: Complex64,
    /// Closed form, exact and by quadrature (Chern character only).
    pub closed_form_exact: Option<AnomalyValue<Scalar>>,
    pub closed_form: Option<AnomalyValue<Complex64>>,
    /// Largest absolute difference among the compared values.
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub charge: i64,
    pub series: String,
    /// `∫` of the chi-free degree-0 part: the index density integral.
    pub index: Scalar,
    /// The chi-free degree-2 part vanishes over a point base.
    pub omega_vanishes: bool,
    pub comparisons: Vec<MomentComparison>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.omega_vanishes && self.comparisons.iter().all(|c| c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.comparisons.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

impl fmt::Display for CrossValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "series {} on monopole k = {}", self.series, self.charge)?;
        writeln!(f, "  index {}", self.index)?;
        writeln!(f, "  generator lambda exact | symbolic | numeric | closed form (with tau, stripped)")?;
        for c in &self.comparisons {
            write!(
                f,
                "  e{} {} {} | {} | {}",
                c.generator + 1,
                c.lambda,
                c.exact,
                fmt_complex(c.symbolic),
                fmt_complex(c.numeric)
            )?;
            if let Some(cf) = &c.closed_form_exact {
                write!(f, " | {}, {}", cf.with_tau, cf.stripped)?;
            }
            writeln!(f, " {}", if c.passed { "PASS" } else { "FAIL" })?;
        }
        write!(f, "  max deviation {:.3e}", self.max_deviation())
    }
}

/// `e_generator + lambda e_gauge` in `so(3) ⊕ u(1)`.
pub fn evaluation_point(generator: usize, lambda: &Rational) -> Vec<Rational> {
    let mut xi = vec![Rational::zero(); 4];
    xi[generator] += Rational::from_integer(1.into());
    xi[GAUGE] += lambda;
    xi
}

/// Runs the symbolic and numeric pipelines for each rotation generator in
/// `generators` and each `lambda`, plus the closed form for the Chern
/// character, and compares.
pub fn cross_validate(
    scenario: &MonopoleScenario,
    series: &CharSeries,
    generators: &[usize],
    lambdas: &[Rational],
) -> Result<CrossValidation, AnomalyError> {
    let chart = Chart::North;
    let sym = symbolic_pipeline(series)?;
    let ints = MonopoleIntegrals::new(scenario, chart);
    let push = &sym.pushforward;

    let chi_free = CartanElement::new(push.element.element().clone()).chi_expansion();
    let index_part = chi_free
        .get(&Monomial::one())
        .map(|x| x.homogeneous_part(0))
        .unwrap_or_default();
    let index = constant_of(&push.evaluate_exact(&index_part, |m| ints.exact(m))?);
    let omega_vanishes = sym.two_form.omega.is_zero();

    let rep = representation_for(series);
    let with_closed_form = series.kind() == SeriesKind::Additive;
    let mut comparisons = Vec::new();
    for &a in generators {
        if a >= 3 {
            return Err(OracleError::UnknownGenerator(a).into());
        }
        for lambda in lambdas {
            let xi = evaluation_point(a, lambda);
            let xi_s: Vec<Scalar> = xi.iter().cloned().map(Scalar::from_rational).collect();
            let moment = sym.two_form.moment_on(&xi_s)?;
            let exact = constant_of(&push.evaluate_exact(&moment, |m| ints.exact(m))?);
            let symbolic = push.evaluate_numeric(&moment, |m| ints.numeric(m))?;
            let numeric = numeric_moment(scenario, series, &xi, chart)?;

            let mut values = vec![exact.eval(), symbolic, numeric];
            let mut exact_ok = true;
            let (closed_form_exact, closed_form) = if with_closed_form {
                let cfe = closed_form_exact(push, &ints, &rep, &xi_s)?;
                exact_ok = cfe.stripped == exact && cfe.with_tau == exact.mul_tau_pow(1);
                let cf = closed_form_sampled(scenario, &rep, &xi, chart)?;
                values.push(cf.stripped);
                (Some(cfe), Some(cf))
            } else {
                (None, None)
            };
            let mut deviation: f64 = 0.0;
            let mut passed = exact_ok;
            for p in &values {
                for q in &values {
                    deviation = deviation.max((p - q).norm());
                    passed &= agree(*p, *q);
                }
            }
            comparisons.push(MomentComparison {
                generator: a,
                lambda: lambda.clone(),
                exact,
                symbolic,
                numeric,
                closed_form_exact,
                closed_form,
                deviation,
                passed,
            });
        }
    }
    Ok(CrossValidation {
        charge: scenario.charge(),
        series: series.name().to_string(),
        index,
        omega_vanishes,
        comparisons,
    })
}

fn constant_of(x: &GradedElement) -> Scalar {
    x.coefficient(&Monomial::one())
}

/// `v = M xi^a mu_a^1`, `F = M Omega^1` in the universal algebra, with the
/// fiber integral evaluated exactly.
fn closed_form_exact(
    push: &Pushforward,
    ints: &MonopoleIntegrals<'_>,
    rep: &MatrixRep,
    xi: &[Scalar],
) -> Result<AnomalyValue<Scalar>, AnomalyError> {
    let mut v_elem = GradedElement::zero();
    for (a, x) in xi.iter().enumerate() {
        v_elem += &GradedElement::generator(mu(a, 0)).scale(x);
    }
    let v = MatrixCurvature::from_h_valued(&[v_elem], rep);
    let f = MatrixCurvature::from_h_valued(&[GradedElement::generator(big_omega(0))], rep);
    covariant_anomaly(1, &v, &f, |x| {
        let p = integrate_over_fiber(&CartanElement::new(x.clone()), FIBER_DIM, push.truncation);
        Ok(constant_of(&p.evaluate_exact(p.element.element(), |m| ints.exact(m))?))
    })
}

/// `v` and `F` sampled at each node from the chart data.
fn closed_form_sampled(
    scenario: &MonopoleScenario,
    rep: &MatrixRep,
    xi: &[Rational],
    chart: Chart,
) -> Result<AnomalyValue<Complex64>, AnomalyError> {
    let n = rep.dim_v;
    let i = Complex64::i();
    let m: Vec<Complex64> = (0..n * n).map(|k| rep.matrices[0].get(k / n, k % n).eval()).collect();
    let omega = scenario.curvature(chart);
    let mut v = vec![Complex64::new(to_f64(&xi[GAUGE]), 0.0); scenario.grid().len()];
    for (a, x) in xi.iter().take(3).enumerate() {
        if !x.is_zero() {
            let mu = scenario.moment(a, chart)?;
            for (vk, y) in v.iter_mut().zip(mu.component(0)) {
                *vk += y / i * to_f64(x);
            }
        }
    }
    let vm: NodeMatrices = v.iter().map(|s| m.iter().map(|e| e * s).collect()).collect();
    let fm: NodeMatrices = omega.component(0).iter().map(|w| m.iter().map(|e| e * (w / i)).collect()).collect();
    covariant_anomaly_sampled(1, &vm, &fm, n, scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SphereGrid;
    use crate::series::AHatConvention;

    fn scenario(k: i64) -> MonopoleScenario {
        MonopoleScenario::new(k, SphereGrid::new(48, 16, Chart::North).unwrap())
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn two_form_of_chi_free_element() {
        let x: GradedElement = Generator::new("int(w)", 0, &[]).into();
        let y: GradedElement = Generator::new("b", 2, &[]).into();
        let c = CartanElement::new(&x + &y);
        let t = two_form_component(&c, 2, 2, 4).unwrap();
        assert_eq!(t.omega, y.scale(&Scalar::tau_pow(1)));
        assert!(t.moment.iter().all(GradedElement::is_zero));
        assert!(two_form_component(&CartanElement::zero(), 2, 2, 4).unwrap().is_zero());
        assert_eq!(
            two_form_component(&c, 2, 2, 3),
            Err(AnomalyError::TruncationTooLow { needed: 4, available: 3 })
        );
    }

    #[test]
    fn reconstruction_is_tau_times_degree_two_part() {
        let sym = symbolic_pipeline(&CharSeries::chern_character(4)).unwrap();
        let deg2 = sym.pushforward.element.element().homogeneous_part(2);
        assert_eq!(sym.two_form.reconstruct().element(), &deg2.scale(&Scalar::tau_pow(1)));
    }

    #[test]
    fn abelian_chern_character_moment() {
        // ch_2 on Omega_G = i(Omega - chi mu) has chi-linear part
        // tau^-2 chi^a mu_a Omega, so mu_a = -tau^-1 int(Omega mu_a)
        let sym = symbolic_pipeline(&CharSeries::chern_character(4)).unwrap();
        for a in 0..4 {
            let integrand = Monomial::generator(big_omega(0)).mul(&Monomial::generator(mu(a, 0))).unwrap().1;
            let fi = sym.pushforward.integrals.iter().find(|f| f.integrand == integrand).unwrap();
            let expected = GradedElement::generator(fi.symbol.clone()).scale(&-Scalar::tau_pow(-1));
            assert_eq!(sym.two_form.moment[a], expected);
        }
    }

    #[test]
    fn gauge_moment_is_exact() {
        let m = scenario(2);
        let cv = cross_validate(&m, &CharSeries::chern_character(4), &[2], &[r(1, 1)]).unwrap();
        assert_eq!(cv.index, Scalar::from_int(2));
        let c = &cv.comparisons[0];
        // mu(e_z + e_gauge) = -ik
        assert_eq!(c.exact, &Scalar::i() * &Scalar::from_int(-2));
        assert!(c.passed, "{cv}");
        let cf = c.closed_form_exact.as_ref().unwrap();
        assert_eq!(cf.with_tau, c.exact.mul_tau_pow(1));
    }

    #[test]
    fn all_generators_pass_for_both_series() {
        let lambdas = [r(1, 1), r(-1, 2), r(3, 4)];
        for k in [-3, 1] {
            let m = scenario(k);
            let ch = cross_validate(&m, &CharSeries::chern_character(4), &[0, 1, 2], &lambdas).unwrap();
            assert!(ch.passed(), "{ch}");
            let ah = cross_validate(&m, &CharSeries::a_hat(4, AHatConvention::TwoPi), &[0, 1, 2], &lambdas).unwrap();
            assert!(ah.passed(), "{ah}");
            assert!(ah.index.is_zero());
        }
    }

    #[test]
    fn flat_bundle_has_no_anomaly() {
        let m = scenario(0);
        let cv = cross_validate(&m, &CharSeries::chern_character(4), &[0, 1, 2], &[r(1, 3)]).unwrap();
        assert!(cv.comparisons.iter().all(|c| c.exact.is_zero() && c.numeric == Complex64::zero()));
    }

    #[test]
    fn moment_is_linear() {
        let m = scenario(1);
        let series = CharSeries::chern_character(4);
        let sym = symbolic_pipeline(&series).unwrap();
        let (al, be) = (Scalar::ratio(2, 3), Scalar::ratio(-5, 7));
        let mut xi = vec![Scalar::zero(); 4];
        xi[0] = al.clone();
        xi[GAUGE] = be.clone();
        let lhs = sym.two_form.moment_on(&xi).unwrap();
        let rhs = &sym.two_form.moment[0].scale(&al) + &sym.two_form.moment[GAUGE].scale(&be);
        assert_eq!(lhs, rhs);

        let e = |a: usize| {
            let mut v = vec![Rational::zero(); 4];
            v[a] = r(1, 1);
            v
        };
        let combo = vec![r(2, 3), r(0, 1), r(0, 1), r(-5, 7)];
        let n = numeric_moment(&m, &series, &combo, Chart::North).unwrap();
        let parts = numeric_moment(&m, &series, &e(0), Chart::North).unwrap() * (2.0 / 3.0)
            + numeric_moment(&m, &series, &e(GAUGE), Chart::North).unwrap() * (-5.0 / 7.0);
        assert!((n - parts).norm() < 1e-10);
    }

    #[test]
    fn closed_form_scales_with_v() {
        let m = scenario(1);
        let ints = MonopoleIntegrals::new(&m, Chart::North);
        let rep = MatrixRep::u1();
        let f = MatrixCurvature::from_h_valued(&[GradedElement::generator(big_omega(0))], &rep);
        let v = MatrixCurvature::from_h_valued(&[GradedElement::generator(mu(GAUGE, 0))], &rep);
        let integ = |x: &GradedElement| {
            let p = integrate_over_fiber(&CartanElement::new(x.clone()), FIBER_DIM, TOP);
            Ok(constant_of(&p.evaluate_exact(p.element.element(), |mm| ints.exact(mm))?))
        };
        let base = covariant_anomaly(1, &v, &f, integ).unwrap();
        let c = Scalar::ratio(-7, 3);
        let scaled = covariant_anomaly(1, &v.scale(&c), &f, integ).unwrap();
        assert_eq!(scaled.with_tau, &base.with_tau * &c);
        let zero = covariant_anomaly(1, &MatrixCurvature::zero(1), &f, integ).unwrap();
        assert!(zero.with_tau.is_zero());
    }

    #[test]
    fn sampled_closed_form_needs_matching_dimension() {
        let m = scenario(1);
        assert_eq!(
            covariant_anomaly_sampled(2, &vec![], &vec![], 1, &m),
            Err(AnomalyError::DimensionMismatch { n: 2, fiber_dim: 2 })
        );
    }
}

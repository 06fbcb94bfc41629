//! Characteristic series (Chern character, A-hat) evaluated on matrices of
//! curvature elements, with exact coefficients from formal power series.
//!
//! The coefficients are never tabulated. The Chern character uses `exp(u)`;
//! A-hat uses the even series `log((u/2)/sinh(u/2)) = sum b_2k u^2k`, both
//! computed by exact series division, `log` and `exp` over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::graded::{AlgebraError, GradedElement};
use crate::lie::{MatrixRep, ScalarMatrix};
use crate::scalar::{factorial, rat, Rational, Scalar};
use crate::weil::{self, CartanElement};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("power series with zero constant term is not invertible")]
    NotInvertible,
    #[error("log needs constant term 1")]
    LogNeedsUnitConstant,
    #[error("exp needs constant term 0")]
    ExpNeedsZeroConstant,
    #[error("curvature entry ({row}, {col}) is not homogeneous of degree {expected}")]
    NonHomogeneous { row: usize, col: usize, expected: u32 },
    #[error("curvature matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },
    #[error("truncation {available} cannot hold components up to degree {requested}")]
    TruncationTooSmall { requested: u32, available: u32 },
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Truncated formal power series `sum c_k u^k`, `k < order`, over the
/// rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Keeps the first `order` coefficients, padding with zeros.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order, Rational::zero());
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..order).map(f).collect(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 0 { Rational::one() } else { Rational::zero() })
    }

    /// The series `u`.
    pub fn variable(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 1 { Rational::one() } else { Rational::zero() })
    }

    /// `exp(u)`.
    pub fn exponential(order: usize) -> Self {
        Self::from_fn(order, |k| Rational::one() / factorial(k as u32))
    }

    /// `sinh(u/2)/(u/2) = sum (1/2)^2k u^2k / (2k+1)!`.
    pub fn sinh_half_over_half(order: usize) -> Self {
        Self::from_fn(order, |k| {
            if k % 2 == 1 {
                Rational::zero()
            } else {
                rat(1, 1 << k) / factorial(k as u32 + 1)
            }
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_fn(self.order(), |k| &self.coeffs[k] * r)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| {
            (0..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &other.coeffs[k - j])
        })
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let c0_inv = Rational::one() / &self.coeffs[0];
        let mut out = vec![Rational::zero(); n];
        out[0] = c0_inv.clone();
        for k in 1..n {
            let s = (1..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &out[k - j]);
            out[k] = -(s * &c0_inv);
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    fn derivative(&self) -> Self {
        let n = self.order();
        Self::from_fn(n, |k| if k + 1 < n { &self.coeffs[k + 1] * rat(k as i64 + 1, 1) } else { Rational::zero() })
    }

    fn integral(&self) -> Self {
        let n = self.order();
        Self::from_fn(n, |k| if k == 0 { Rational::zero() } else { &self.coeffs[k - 1] / rat(k as i64, 1) })
    }

    /// `log f = integral(f'/f)`, for `f(0) = 1`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogNeedsUnitConstant);
        }
        Ok(self.derivative().div(self)?.integral())
    }

    /// `g = exp f` from `g' = f' g`, for `f(0) = 0`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpNeedsZeroConstant);
        }
        let mut g = vec![Rational::zero(); n];
        g[0] = Rational::one();
        for m in 1..n {
            let s = (1..=m).fold(Rational::zero(), |acc, k| {
                acc + &self.coeffs[k] * rat(k as i64, 1) * &g[m - k]
            });
            g[m] = s / rat(m as i64, 1);
        }
        Ok(PowerSeries { coeffs: g })
    }
}

/// Square matrix of graded elements. Entries of even degree commute, so
/// powers and traces of degree-2 matrices are well defined.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCurvature {
    n: usize,
    entries: Vec<GradedElement>,
}

impl MatrixCurvature {
    pub fn zero(n: usize) -> Self {
        MatrixCurvature {
            n,
            entries: vec![GradedElement::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = GradedElement::one();
        }
        m
    }

    /// Row-major construction; panics unless square.
    pub fn from_rows(rows: Vec<Vec<GradedElement>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        MatrixCurvature {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// `1x1` matrix.
    pub fn scalar(x: GradedElement) -> Self {
        MatrixCurvature { n: 1, entries: vec![x] }
    }

    /// `sum_i alpha^i M_i` for an h-valued element and a representation of h.
    pub fn from_h_valued(alpha: &[GradedElement], rep: &MatrixRep) -> Self {
        let n = rep.dim_v;
        let mut out = Self::zero(n);
        for (a, m) in alpha.iter().zip(&rep.matrices) {
            out = out.add(&Self::from_scalar_matrix(m).scale_by(a));
        }
        out
    }

    pub fn from_cartan(alpha: &[CartanElement], rep: &MatrixRep) -> Self {
        let elems: Vec<GradedElement> = alpha.iter().map(|c| c.element().clone()).collect();
        Self::from_h_valued(&elems, rep)
    }

    pub fn from_scalar_matrix(m: &ScalarMatrix) -> Self {
        let n = m.size();
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[r * n + c] = GradedElement::constant(m.get(r, c).clone());
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut out = Self::zero(n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.entries[r * n + c] = self.get(r, c).clone();
            }
        }
        for r in 0..other.n {
            for c in 0..other.n {
                out.entries[(r + self.n) * n + c + self.n] = other.get(r, c).clone();
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &GradedElement {
        &self.entries[r * self.n + c]
    }

    pub fn add(&self, other: &Self) -> Self {
        MatrixCurvature {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        MatrixCurvature {
            n: self.n,
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Multiplies every entry by an even element `x`.
    pub fn scale_by(&self, x: &GradedElement) -> Self {
        MatrixCurvature {
            n: self.n,
            entries: self.entries.iter().map(|a| x * a).collect(),
        }
    }

    pub fn mul(&self, other: &Self, max: Option<u32>) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += &a.mul_trunc(b, max);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> GradedElement {
        (0..self.n).fold(GradedElement::zero(), |acc, i| &acc + &self.entries[i * self.n + i])
    }

    /// Errors unless every entry is homogeneous of degree `d` (zero allowed).
    pub fn check_homogeneous(&self, d: u32) -> Result<(), SeriesError> {
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.get(r, c).is_homogeneous_of(d) {
                    return Err(SeriesError::NonHomogeneous { row: r, col: c, expected: d });
                }
            }
        }
        Ok(())
    }

    pub fn check_antisymmetric(&self) -> Result<(), SeriesError> {
        for r in 0..self.n {
            for c in r..self.n {
                if !(self.get(r, c) + self.get(c, r)).is_zero() {
                    return Err(SeriesError::NotAntisymmetric { row: r, col: c });
                }
            }
        }
        Ok(())
    }

    /// `tr(self^k)` for `k = 0..=kmax`, truncated.
    fn trace_powers(&self, kmax: usize, max: u32) -> Vec<GradedElement> {
        let mut out = Vec::with_capacity(kmax + 1);
        let mut p = Self::identity(self.n);
        out.push(p.trace());
        for _ in 1..=kmax {
            p = p.mul(self, Some(max));
            out.push(p.trace());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// `tr f(X)` with `f(u) = e^u`.
    Additive,
    /// `exp(1/2 sum b_k tr X^k)`: a product over eigenvalue pairs.
    Multiplicative,
}

/// Curvature rescaling for A-hat: `R/2pi` or `R/4pi` as the eigenvalue
/// variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AHatConvention {
    TwoPi,
    FourPi,
}

impl AHatConvention {
    pub fn label(self) -> &'static str {
        match self {
            AHatConvention::TwoPi => "2pi",
            AHatConvention::FourPi => "4pi",
        }
    }
}

impl std::str::FromStr for AHatConvention {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2pi" => Ok(AHatConvention::TwoPi),
            "4pi" => Ok(AHatConvention::FourPi),
            other => Err(SeriesError::UnknownSeries(format!("normalization {other}"))),
        }
    }
}

/// A characteristic series: the defining function, the coefficients of its
/// logarithm, and the factor applied to curvature before substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSeries {
    name: String,
    kind: SeriesKind,
    degree: u32,
    function: PowerSeries,
    log_coefficients: BTreeMap<u32, Scalar>,
    normalization: Scalar,
    convention: String,
}

impl CharSeries {
    /// `ch(F) = tr exp(iF/2pi)`, i.e. curvature scaled by `-tau^-1`, valid up
    /// to form degree `degree`.
    pub fn chern_character(degree: u32) -> Self {
        let order = (degree / 2) as usize + 1;
        let log = PowerSeries::variable(order);
        let function = log.exp().expect("u has zero constant term");
        CharSeries {
            name: "ch".into(),
            kind: SeriesKind::Additive,
            degree,
            function,
            log_coefficients: collect_nonzero(&log),
            normalization: -Scalar::tau_pow(-1),
            convention: "i/2pi".into(),
        }
    }

    /// `A-hat(R) = exp(1/2 sum_k b_2k tr((tau^-1 R)^2k))`, `b_2k` the
    /// coefficients of `log((u/2)/sinh(u/2))`. With `tau^-1 R = R/(2 pi i)`
    /// each trace equals `(-1)^k tr((R/2pi)^2k)`, which reproduces the product
    /// of `(x_j/2)/sin(x_j/2)` over the skew eigenvalues of `R/2pi`.
    pub fn a_hat(degree: u32, convention: AHatConvention) -> Self {
        let order = (degree / 2) as usize + 1;
        let function = PowerSeries::one(order)
            .div(&PowerSeries::sinh_half_over_half(order))
            .expect("constant term is 1");
        let log = function.log().expect("constant term is 1");
        let normalization = match convention {
            AHatConvention::TwoPi => Scalar::tau_pow(-1),
            AHatConvention::FourPi => Scalar::tau_pow(-1).scale_rational(&rat(1, 2)),
        };
        CharSeries {
            name: "a_hat".into(),
            kind: SeriesKind::Multiplicative,
            degree,
            function,
            log_coefficients: collect_nonzero(&log),
            normalization,
            convention: convention.label().into(),
        }
    }

    pub fn by_name(name: &str, degree: u32, convention: AHatConvention) -> Result<Self, SeriesError> {
        match name.trim() {
            "ch" => Ok(Self::chern_character(degree)),
            "a_hat" => Ok(Self::a_hat(degree, convention)),
            other => Err(SeriesError::UnknownSeries(other.into())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients of the defining function `f(u)`.
    pub fn function(&self) -> &PowerSeries {
        &self.function
    }

    /// Non-zero coefficients of `log f(u)`, keyed by power of `u`.
    pub fn log_coefficients(&self) -> &BTreeMap<u32, Scalar> {
        &self.log_coefficients
    }

    pub fn normalization(&self) -> &Scalar {
        &self.normalization
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    fn function_at(&self, order: usize) -> PowerSeries {
        if order <= self.function.order() {
            return PowerSeries::new(self.function.coeffs().to_vec(), order);
        }
        match self.kind {
            SeriesKind::Additive => PowerSeries::exponential(order),
            SeriesKind::Multiplicative => PowerSeries::one(order)
                .div(&PowerSeries::sinh_half_over_half(order))
                .expect("constant term is 1"),
        }
    }

    fn log_at(&self, order: usize) -> PowerSeries {
        self.function_at(order).log().expect("constant term is 1")
    }

    /// Evaluates the series on a matrix of degree-2 elements, keeping
    /// components up to degree `top`.
    pub fn apply(&self, m: &MatrixCurvature, top: u32) -> Result<GradedElement, SeriesError> {
        m.check_homogeneous(2)?;
        let kmax = (top / 2) as usize;
        let x = m.scale(&self.normalization);
        let traces = x.trace_powers(kmax, top);
        match self.kind {
            SeriesKind::Additive => {
                let f = self.function_at(kmax + 1);
                let mut out = GradedElement::zero();
                for (k, t) in traces.iter().enumerate() {
                    out += &t.scale(&Scalar::from_rational(f.coeff(k)));
                }
                Ok(out)
            }
            SeriesKind::Multiplicative => {
                m.check_antisymmetric()?;
                let log = self.log_at(kmax + 1);
                let half = rat(1, 2);
                let mut exponent = GradedElement::zero();
                for (k, t) in traces.iter().enumerate().skip(1) {
                    let c = log.coeff(k);
                    if !c.is_zero() {
                        exponent += &t.scale(&Scalar::from_rational(c * &half));
                    }
                }
                Ok(exp_nilpotent(&exponent, top))
            }
        }
    }
}

fn collect_nonzero(s: &PowerSeries) -> BTreeMap<u32, Scalar> {
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u32, Scalar::from_rational(c.clone())))
        .collect()
}

/// `exp(x)` for `x` without constant term, truncated at degree `top`.
pub fn exp_nilpotent(x: &GradedElement, top: u32) -> GradedElement {
    debug_assert!(x.homogeneous_part(0).is_zero());
    let mut out = GradedElement::one();
    let mut power = GradedElement::one();
    let mut m = 1u32;
    loop {
        power = power.mul_trunc(x, Some(top));
        if power.is_zero() {
            break;
        }
        out += &power.scale(&Scalar::from_rational(Rational::one() / factorial(m)));
        m += 1;
    }
    out
}

/// `sum_k (1/k!) tr((-tau^-1 F~)^k)` up to degree `top`, where
/// `F~ = F - chi^1 v` when a degree-0 matrix `v` is given and `F~ = F`
/// otherwise.
pub fn chern_character(
    f: &MatrixCurvature,
    v: Option<&MatrixCurvature>,
    top: u32,
) -> Result<GradedElement, SeriesError> {
    f.check_homogeneous(2)?;
    let ftilde = match v {
        Some(v) => {
            if v.size() != f.size() {
                return Err(SeriesError::SizeMismatch(f.size(), v.size()));
            }
            v.check_homogeneous(0)?;
            f.add(&v.scale_by(&GradedElement::generator(weil::chi(0))).scale(&Scalar::from_int(-1)))
        }
        None => f.clone(),
    };
    CharSeries::chern_character(top).apply(&ftilde, top)
}

/// `A-hat(R)` in the `R/2pi` convention, up to degree `top`.
pub fn a_hat(r: &MatrixCurvature, top: u32) -> Result<GradedElement, SeriesError> {
    CharSeries::a_hat(top, AHatConvention::TwoPi).apply(r, top)
}

/// Applies `series` to a Cartan-valued curvature matrix, counting each
/// `chi` as degree 2.
pub fn equivariant_substitute(
    series: &CharSeries,
    omega_g: &MatrixCurvature,
    top_total_degree: u32,
) -> Result<CartanElement, SeriesError> {
    if top_total_degree < series.degree() {
        return Err(SeriesError::TruncationTooSmall {
            requested: series.degree(),
            available: top_total_degree,
        });
    }
    Ok(CartanElement::new(series.apply(omega_g, top_total_degree)?))
}

impl fmt::Display for CharSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (normalization {}, curvature scale {})",
            self.name, self.convention, self.normalization
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Generator;

    fn x(i: usize) -> GradedElement {
        Generator::h("x", 2, i).into()
    }

    /// `B_0..B_n` from `sum_{j<=m} C(m+1, j) B_j = 0`.
    fn bernoulli(n: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for m in 1..=n {
            let mut s = Rational::zero();
            let mut binom = Rational::one();
            for (j, bj) in b.iter().enumerate() {
                s += &binom * bj;
                binom *= rat((m + 1 - j) as i64, (j + 1) as i64);
            }
            b.push(-s / rat(m as i64 + 1, 1));
        }
        b
    }

    #[test]
    fn series_arithmetic() {
        let e = PowerSeries::exponential(9);
        assert_eq!(e.log().unwrap(), PowerSeries::variable(9));
        assert_eq!(PowerSeries::variable(9).exp().unwrap(), e);
        let inv = e.inverse().unwrap();
        assert_eq!(e.mul(&inv), PowerSeries::one(9));
        assert!(PowerSeries::variable(3).inverse().is_err());
        assert!(e.exp().is_err());
        assert!(PowerSeries::variable(3).log().is_err());
    }

    #[test]
    fn a_hat_log_coefficients_match_bernoulli() {
        let s = CharSeries::a_hat(16, AHatConvention::TwoPi);
        let b = bernoulli(8);
        for k in 1..=4usize {
            let expected = -(&b[2 * k]) / (rat(2 * k as i64, 1) * factorial(2 * k as u32));
            assert_eq!(s.log_coefficients()[&(2 * k as u32)], Scalar::from_rational(expected));
        }
        assert_eq!(s.log_coefficients()[&2], Scalar::ratio(-1, 24));
        assert_eq!(s.function().coeff(2), rat(-1, 24));
    }

    #[test]
    fn chern_character_examples() {
        let zero = MatrixCurvature::scalar(GradedElement::zero());
        assert_eq!(chern_character(&zero, None, 6).unwrap(), GradedElement::one());
        let f = MatrixCurvature::scalar(x(0));
        let expected = &(&GradedElement::one() - &x(0).scale(&Scalar::tau_pow(-1)))
            + &(&x(0) * &x(0)).scale(&Scalar::tau_pow(-2).scale_rational(&rat(1, 2)));
        assert_eq!(chern_character(&f, None, 4).unwrap(), expected);
        assert!(matches!(
            chern_character(&MatrixCurvature::scalar(GradedElement::one()), None, 4),
            Err(SeriesError::NonHomogeneous { .. })
        ));
    }

    #[test]
    fn a_hat_examples() {
        assert_eq!(a_hat(&MatrixCurvature::zero(2), 8).unwrap(), GradedElement::one());
        let r = MatrixCurvature::from_rows(vec![
            vec![GradedElement::zero(), x(0)],
            vec![-x(0), GradedElement::zero()],
        ]);
        let out = a_hat(&r, 6).unwrap();
        // 1 - (1/24)(x/2pi)^2 = 1 + (1/24) tau^-2 x^2
        let expected = &GradedElement::one() + &(&x(0) * &x(0)).scale(&Scalar::tau_pow(-2).scale_rational(&rat(1, 24)));
        assert_eq!(out, expected);
        let sym = MatrixCurvature::from_rows(vec![vec![x(0), x(1)], vec![x(1), x(0)]]);
        assert!(matches!(a_hat(&sym, 4), Err(SeriesError::NotAntisymmetric { .. })));
    }

    #[test]
    fn equivariant_substitute_guards_truncation() {
        let s = CharSeries::chern_character(6);
        let m = MatrixCurvature::scalar(x(0));
        assert!(matches!(
            equivariant_substitute(&s, &m, 4),
            Err(SeriesError::TruncationTooSmall { .. })
        ));
        assert_eq!(equivariant_substitute(&s, &m, 6).unwrap().element(), &chern_character(&m, None, 6).unwrap());
    }
}

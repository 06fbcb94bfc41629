//! Exact coefficients: Laurent polynomials in the formal unit `tau = 2*pi*i`
//! with Gaussian-rational coefficients.
//!
//! Every normalization constant that appears in characteristic forms is a
//! rational multiple of an integer power of `2*pi*i`, possibly times `i`.
//! For instance `i/(2*pi) = -tau^-1` and `(2*pi)^2 = -tau^2`. Keeping `tau`
//! formal makes all of those prefactors exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// `a + b*i` with `a, b` rational.
pub type GaussRational = Complex<Rational>;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn gauss(re: Rational, im: Rational) -> GaussRational {
    Complex::new(re, im)
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range; fall back on the quotient
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// An element of `Q(i)[tau, tau^-1]`.
///
/// Stored as a list of `(exponent, coefficient)` pairs sorted by exponent with
/// no zero coefficients, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(i32, GaussRational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::monomial(gauss(r, Rational::zero()), 0)
    }

    /// `num/den` as a scalar.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::monomial(gauss(Rational::zero(), Rational::one()), 0)
    }

    /// `re + im*i` with rational parts.
    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::monomial(gauss(re, im), 0)
    }

    /// `tau^k`.
    pub fn tau_pow(k: i32) -> Self {
        Self::monomial(GaussRational::one(), k)
    }

    /// `c * tau^k`.
    pub fn monomial(c: GaussRational, k: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Scalar { terms: vec![(k, c)] }
        }
    }

    /// `pi` written as `-i*tau/2`.
    pub fn pi() -> Self {
        Self::monomial(gauss(Rational::zero(), rat(-1, 2)), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Terms as `(tau exponent, coefficient)`, sorted by exponent.
    pub fn terms(&self) -> &[(i32, GaussRational)] {
        &self.terms
    }

    /// The coefficient of `tau^k`.
    pub fn coefficient(&self, k: i32) -> GaussRational {
        self.terms
            .iter()
            .find(|(e, _)| *e == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussRational::zero)
    }

    /// Returns the plain rational value if this is a real constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, Complex::new(&c.re * r, &c.im * r)))
                .collect(),
        }
    }

    /// Shifts every tau exponent by `k`.
    pub fn mul_tau_pow(&self, k: i32) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Complex conjugation with `tau` treated as the complex number `2*pi*i`,
    /// i.e. `conj(tau) = -tau`.
    pub fn conj(&self) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut c = c.conj();
                    if k.rem_euclid(2) == 1 {
                        c = -c;
                    }
                    (*k, c)
                })
                .collect(),
        }
    }

    /// Integer power; negative exponents are allowed for single-term scalars.
    pub fn pow(&self, n: i32) -> Option<Self> {
        if n >= 0 {
            let mut acc = Self::one();
            for _ in 0..n {
                acc = &acc * self;
            }
            Some(acc)
        } else {
            self.inverse()?.pow(-n)
        }
    }

    /// Inverse of a single-term scalar `c * tau^k`.
    pub fn inverse(&self) -> Option<Self> {
        match self.terms.as_slice() {
            [(k, c)] => {
                let norm = &c.re * &c.re + &c.im * &c.im;
                let inv = Complex::new(&c.re / &norm, -(&c.im / &norm));
                Some(Scalar {
                    terms: vec![(-k, inv)],
                })
            }
            _ => None,
        }
    }

    /// Numerical value with `tau = 2*pi*i`.
    pub fn eval(&self) -> Complex64 {
        let tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        self.terms.iter().fold(Complex64::zero(), |acc, (k, c)| {
            acc + Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im)) * tau.powi(*k)
        })
    }

    fn push_term(terms: &mut Vec<(i32, GaussRational)>, k: i32, c: GaussRational) {
        match terms.binary_search_by(|(e, _)| e.cmp(&k)) {
            Ok(pos) => {
                terms[pos].1 = &terms[pos].1 + &c;
                if terms[pos].1.is_zero() {
                    terms.remove(pos);
                }
            }
            Err(pos) => {
                if !c.is_zero() {
                    terms.insert(pos, (k, c));
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a Gaussian rational as `p/q`, `p/q*i` or `(p/q + r/s*i)`.
pub fn fmt_gauss(c: &GaussRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{}*i", fmt_rational(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            format!("({} {} {}*i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
        }
    }
}

impl fmt::Display for Scalar {
    /// Terms are printed as `p/q * tau^k` joined by ` + `; the zero scalar
    /// prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{} * tau^{}", fmt_gauss(c), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Error from parsing a scalar literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts sums of terms of the form `[coef][*i][ * tau^k]`, e.g. `1`,
    /// `-1/2`, `3*i`, `i`, `1/2 * tau^-1`, `(1 + 2*i) * tau^0`. This covers
    /// everything the `Display` impl writes.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err());
        }
        let mut total = Scalar::zero();
        for term in split_top_level_plus(trimmed) {
            let term = term.trim();
            let (coef_part, tau_exp) = match term.find("tau^") {
                Some(pos) => {
                    let exp: i32 = term[pos + 4..].trim().parse().map_err(|_| err())?;
                    let head = term[..pos].trim().trim_end_matches('*').trim();
                    (head, exp)
                }
                None => (term, 0),
            };
            let coef = parse_gauss(coef_part).ok_or_else(err)?;
            total = &total + &Scalar::monomial(coef, tau_exp);
        }
        Ok(total)
    }
}

fn split_top_level_plus(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    for (idx, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && idx > 0 && bytes[idx - 1] == b' ' => {
                parts.push(&s[start..idx]);
                start = idx + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

fn parse_gauss(s: &str) -> Option<GaussRational> {
    let s = s.trim();
    if s.is_empty() {
        return Some(GaussRational::one());
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        // (a + b*i) or (a - b*i)
        let inner = inner.trim();
        let (re_s, sign, im_s) = if let Some(pos) = inner.rfind(" + ") {
            (&inner[..pos], 1, &inner[pos + 3..])
        } else {
            let pos = inner.rfind(" - ")?;
            (&inner[..pos], -1, &inner[pos + 3..])
        };
        let re = parse_rational(re_s)?;
        let im = parse_gauss(im_s)?;
        if !im.re.is_zero() {
            return None;
        }
        let im = if sign < 0 { -im.im } else { im.im };
        return Some(gauss(re, im));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let value = if body == "i" {
        gauss(Rational::zero(), Rational::one())
    } else if let Some(r) = body.strip_suffix("*i") {
        gauss(Rational::zero(), parse_rational(r)?)
    } else {
        gauss(parse_rational(body)?, Rational::zero())
    };
    Some(if neg { -value } else { value })
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// An arbitrary but total order, used only to keep containers
    /// deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |s: &Scalar| -> Vec<(i32, Rational, Rational)> {
            s.terms.iter().map(|(k, c)| (*k, c.re.clone(), c.im.clone())).collect()
        };
        key(self).cmp(&key(other))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            Scalar::push_term(&mut self.terms, *k, c.clone());
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if let ([(ka, ca)], [(kb, cb)]) = (self.terms.as_slice(), rhs.terms.as_slice()) {
            return Scalar::monomial(ca * cb, ka + kb);
        }
        let mut terms = Vec::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                Scalar::push_term(&mut terms, ka + kb, ca * cb);
            }
        }
        Scalar { terms }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k, 1))
}

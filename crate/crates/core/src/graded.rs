//! Free graded-commutative algebras over [`Scalar`] and their derivations.
//!
//! An element is a finite sum of monomials. A monomial is a product of
//! generators written in canonical order (lexicographic on name, then
//! indices); odd generators occur at most once, even generators carry an
//! exponent. Reordering a product into canonical order costs the Koszul sign
//! of the permutation restricted to odd generators, and any product with a
//! repeated odd generator is zero. Two elements are equal iff their term maps
//! are equal.
//!
//! Algebras built on top of this module carry a truncation degree; the
//! `*_trunc` operations drop monomials above it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use crate::scalar::{rat, Scalar};

/// Which Lie algebra an index ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexClass {
    /// Symmetry algebra `g` (indices `a, b, c`).
    G,
    /// Structure algebra `h` (indices `i, j, k`).
    H,
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Hash)]
struct GeneratorData {
    name: Arc<str>,
    indices: Vec<(IndexClass, usize)>,
    degree: u32,
}

/// A named, indexed, degree-labelled generator. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<GeneratorData>);

impl Generator {
    pub fn new(name: &str, degree: u32, indices: &[(IndexClass, usize)]) -> Self {
        Generator(Arc::new(GeneratorData {
            name: Arc::from(name),
            indices: indices.to_vec(),
            degree,
        }))
    }

    /// Generator carrying a single `g`-index.
    pub fn g(name: &str, degree: u32, a: usize) -> Self {
        Self::new(name, degree, &[(IndexClass::G, a)])
    }

    /// Generator carrying a single `h`-index.
    pub fn h(name: &str, degree: u32, i: usize) -> Self {
        Self::new(name, degree, &[(IndexClass::H, i)])
    }

    /// Generator carrying a `g`-index followed by an `h`-index.
    pub fn gh(name: &str, degree: u32, a: usize, i: usize) -> Self {
        Self::new(name, degree, &[(IndexClass::G, a), (IndexClass::H, i)])
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn indices(&self) -> &[(IndexClass, usize)] {
        &self.0.indices
    }

    pub fn is_odd(&self) -> bool {
        self.0.degree % 2 == 1
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if !self.indices().is_empty() {
            let idx: Vec<String> = self
                .indices()
                .iter()
                .map(|(class, n)| match class {
                    IndexClass::G => format!("g{}", n + 1),
                    IndexClass::H => format!("h{}", n + 1),
                })
                .collect();
            write!(f, "[{}]", idx.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonically ordered product of generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn generator(g: Generator) -> Self {
        Monomial {
            factors: vec![(g, 1)],
        }
    }

    /// Generators with their exponents, in canonical order.
    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(g, e)| g.degree() * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Canonical product `self * other`, with the Koszul sign (`true` means
    /// negative). `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        // odd factors of `a` not yet emitted
        let mut odd_left_in_a = a.iter().filter(|(g, _)| g.is_odd()).count();
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ga, ea) = &a[i];
            let (gb, eb) = &b[j];
            match ga.cmp(gb) {
                std::cmp::Ordering::Less => {
                    if ga.is_odd() {
                        odd_left_in_a -= 1;
                    }
                    out.push((ga.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if gb.is_odd() && odd_left_in_a % 2 == 1 {
                        negative = !negative;
                    }
                    out.push((gb.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if ga.is_odd() {
                        return None;
                    }
                    out.push((ga.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Some((negative, Monomial { factors: out }))
    }

    fn from_slice(factors: &[(Generator, u32)]) -> Self {
        Monomial {
            factors: factors.to_vec(),
        }
    }

    /// Splits into (factors satisfying `pred`, the rest). Both halves keep
    /// canonical order; the sign of moving the selected factors to the front
    /// is returned as the first component (`true` means negative).
    pub fn split_by(&self, pred: impl Fn(&Generator) -> bool) -> (bool, Monomial, Monomial) {
        let mut front = Vec::new();
        let mut back = Vec::new();
        let mut negative = false;
        let mut odd_in_back = 0usize;
        for (g, e) in &self.factors {
            if pred(g) {
                if g.is_odd() && odd_in_back % 2 == 1 {
                    negative = !negative;
                }
                front.push((g.clone(), *e));
            } else {
                if g.is_odd() {
                    odd_in_back += 1;
                }
                back.push((g.clone(), *e));
            }
        }
        (negative, Monomial { factors: front }, Monomial { factors: back })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Errors raised by algebraic operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("derivation `{derivation}` has no image for generator {generator}")]
    UnknownGenerator { derivation: String, generator: String },
    #[error("image of {generator} must be homogeneous of degree {expected}, found {found}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: String,
    },
    #[error("no numeric value supplied for generator {0}")]
    MissingValue(String),
    #[error("index {index} out of range for algebra of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected a homogeneous element of degree {expected}, found {found}")]
    NotHomogeneous { expected: u32, found: String },
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

/// Normal-form element of a free graded-commutative algebra.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedElement { terms }
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Monomial::generator(g), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// The common degree of all monomials, or `None` for zero or mixed
    /// elements.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        GradedElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops monomials of degree above `max`.
    pub fn truncate(&self, max: u32) -> Self {
        self.filter(|m| m.degree() <= max)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// All generators occurring in the element.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(g, _)| g.clone()))
            .collect()
    }

    /// Product, dropping monomials above `max` when given.
    pub fn mul_trunc(&self, other: &Self, max: Option<u32>) -> Self {
        let mut out = GradedElement::zero();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if max.is_some_and(|m| da > m) {
                continue;
            }
            for (mb, cb) in &other.terms {
                if max.is_some_and(|m| da + mb.degree() > m) {
                    continue;
                }
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `self^n`, truncated.
    pub fn pow_trunc(&self, n: u32, max: Option<u32>) -> Self {
        let mut acc = GradedElement::one();
        for _ in 0..n {
            acc = acc.mul_trunc(self, max);
        }
        acc
    }

    /// Numeric value with `tau = 2*pi*i` and generators replaced by `values`.
    pub fn evaluate(
        &self,
        values: &impl Fn(&Generator) -> Option<Complex64>,
    ) -> Result<Complex64, AlgebraError> {
        let mut total = Complex64::zero();
        for (m, c) in &self.terms {
            let mut v = c.eval();
            for (g, e) in m.factors() {
                let x = values(g).ok_or_else(|| AlgebraError::MissingValue(g.to_string()))?;
                v *= x.powu(*e);
            }
            total += v;
        }
        Ok(total)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AddAssign<&GradedElement> for GradedElement {
    fn add_assign(&mut self, rhs: &GradedElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add<&GradedElement> for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(mut self, rhs: GradedElement) -> GradedElement {
        self += &rhs;
        self
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

impl Sub<&GradedElement> for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: GradedElement) -> GradedElement {
        &self - &rhs
    }
}

/// Untruncated graded-commutative product.
impl Mul<&GradedElement> for &GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        self.mul_trunc(rhs, None)
    }
}

impl Mul for GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: GradedElement) -> GradedElement {
        &self * &rhs
    }
}

impl From<Generator> for GradedElement {
    fn from(g: Generator) -> Self {
        GradedElement::generator(g)
    }
}

impl From<Scalar> for GradedElement {
    fn from(c: Scalar) -> Self {
        GradedElement::constant(c)
    }
}

/// A derivation of fixed degree, given by its values on generators and
/// extended by the graded Leibniz rule
/// `D(xy) = D(x) y + (-1)^(deg D * deg x) x D(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    name: String,
    degree: i32,
    action: BTreeMap<Generator, GradedElement>,
}

impl Derivation {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Derivation {
            name: name.into(),
            degree,
            action: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn set(&mut self, g: Generator, image: GradedElement) {
        self.action.insert(g, image);
    }

    pub fn image(&self, g: &Generator) -> Option<&GradedElement> {
        self.action.get(g)
    }

    pub fn table(&self) -> &BTreeMap<Generator, GradedElement> {
        &self.action
    }

    /// Copy of `self` that also sends each of `constants` to zero.
    pub fn with_constants<'a>(&self, constants: impl IntoIterator<Item = &'a Generator>) -> Self {
        let mut out = self.clone();
        for g in constants {
            out.action.entry(g.clone()).or_insert_with(GradedElement::zero);
        }
        out
    }

    /// Derivation acting by `self` on its generators and by `other` on the
    /// rest. On a tensor product with disjoint generator sets this is
    /// `D ⊗ 1 + 1 ⊗ D'`.
    pub fn union(&self, other: &Derivation, name: impl Into<String>) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        out.name = name.into();
        for (g, img) in &other.action {
            out.action.entry(g.clone()).or_insert_with(|| img.clone());
        }
        out
    }

    fn image_or_err(&self, g: &Generator) -> Result<&GradedElement, AlgebraError> {
        self.action.get(g).ok_or_else(|| AlgebraError::UnknownGenerator {
            derivation: self.name.clone(),
            generator: g.to_string(),
        })
    }

    /// Leibniz extension to `x`, dropping monomials above `max`.
    pub fn apply(&self, x: &GradedElement, max: Option<u32>) -> Result<GradedElement, AlgebraError> {
        let mut out = GradedElement::zero();
        for (m, c) in x.terms() {
            let factors = m.factors();
            let mut prefix_degree = 0u32;
            for (k, (g, e)) in factors.iter().enumerate() {
                let image = self.image_or_err(g)?;
                if !image.is_zero() {
                    // D(g^e) = e * g^(e-1) * D(g); g^(e-1) has even degree
                    // whenever e > 1, so no extra sign.
                    let mut coeff = c.scale_rational(&rat(*e as i64, 1));
                    if (self.degree.rem_euclid(2) == 1) && prefix_degree % 2 == 1 {
                        coeff = -coeff;
                    }
                    let mut left = Monomial::from_slice(&factors[..k]);
                    if *e > 1 {
                        let (_, l) = left
                            .mul(&Monomial {
                                factors: vec![(g.clone(), e - 1)],
                            })
                            .expect("even generator powers never vanish");
                        left = l;
                    }
                    let right = Monomial::from_slice(&factors[k + 1..]);
                    let piece = GradedElement::term(left, coeff)
                        .mul_trunc(image, max)
                        .mul_trunc(&GradedElement::term(right, Scalar::one()), max);
                    out += &piece;
                }
                prefix_degree += g.degree() * e;
            }
        }
        Ok(match max {
            Some(mx) => out.truncate(mx),
            None => out,
        })
    }
}

/// `D1(D2 x) - (-1)^(deg D1 * deg D2) D2(D1 x)`.
pub fn graded_commutator(
    d1: &Derivation,
    d2: &Derivation,
    probe: &GradedElement,
    max: Option<u32>,
) -> Result<GradedElement, AlgebraError> {
    let a = d1.apply(&d2.apply(probe, max)?, max)?;
    let b = d2.apply(&d1.apply(probe, max)?, max)?;
    Ok(if (d1.degree() * d2.degree()).rem_euclid(2) == 1 {
        &a + &b
    } else {
        &a - &b
    })
}

/// Extends `images` to an algebra map and applies it to `x`. Generators
/// without an image are left unchanged. Each image must be homogeneous of
/// its generator's degree (zero is allowed).
pub fn substitute(
    images: &BTreeMap<Generator, GradedElement>,
    x: &GradedElement,
    max: Option<u32>,
) -> Result<GradedElement, AlgebraError> {
    for (g, img) in images {
        if !img.is_homogeneous_of(g.degree()) {
            return Err(AlgebraError::DegreeMismatch {
                generator: g.to_string(),
                expected: g.degree(),
                found: format!("{:?}", img.max_degree()),
            });
        }
    }
    let mut out = GradedElement::zero();
    for (m, c) in x.terms() {
        let mut piece = GradedElement::constant(c.clone());
        for (g, e) in m.factors() {
            let factor = match images.get(g) {
                Some(img) => img.clone(),
                None => GradedElement::generator(g.clone()),
            };
            for _ in 0..*e {
                piece = piece.mul_trunc(&factor, max);
            }
            if piece.is_zero() {
                break;
            }
        }
        out += &piece;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(a: usize) -> GradedElement {
        Generator::g("theta", 1, a).into()
    }
    fn chi(a: usize) -> GradedElement {
        Generator::g("chi", 2, a).into()
    }

    #[test]
    fn koszul_signs() {
        assert!((&theta(0) * &theta(0)).is_zero());
        assert_eq!(&theta(1) * &theta(0), -(&theta(0) * &theta(1)));
        assert_eq!(&chi(0) * &theta(0), &theta(0) * &chi(0));
        // theta1 chi1 theta2 vs theta2 chi1 theta1
        let a = &(&theta(0) * &chi(0)) * &theta(1);
        let b = &(&theta(1) * &chi(0)) * &theta(0);
        assert_eq!(a, -b);
    }

    fn weil_d() -> Derivation {
        let mut d = Derivation::new("d", 1);
        for a in 0..2 {
            d.set(Generator::g("theta", 1, a), chi(a));
            d.set(Generator::g("chi", 2, a), GradedElement::zero());
        }
        d
    }

    #[test]
    fn leibniz_examples() {
        let d = weil_d();
        let x = &theta(0) * &theta(1);
        let expected = &(&chi(0) * &theta(1)) - &(&theta(0) * &chi(1));
        assert_eq!(d.apply(&x, None).unwrap(), expected);
        assert!(d.apply(&(&chi(0) * &chi(1)), None).unwrap().is_zero());

        let mut iota = Derivation::new("iota", -1);
        iota.set(Generator::g("theta", 1, 0), GradedElement::one());
        iota.set(Generator::g("theta", 1, 1), GradedElement::zero());
        assert_eq!(iota.apply(&x, None).unwrap(), theta(1));

        // power rule on an even generator
        let sq = &chi(0) * &chi(0);
        assert!(d.apply(&sq, None).unwrap().is_zero());
        let mut d2 = Derivation::new("e", 0);
        d2.set(Generator::g("chi", 2, 0), chi(1));
        let out = d2.apply(&(&sq * &chi(0)), None).unwrap();
        assert_eq!(out, (&(&chi(0) * &chi(0)) * &chi(1)).scale(&Scalar::from_int(3)));
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let d = weil_d();
        let x: GradedElement = Generator::g("rho", 1, 0).into();
        assert!(matches!(d.apply(&x, None), Err(AlgebraError::UnknownGenerator { .. })));
    }

    #[test]
    fn commutator_of_d_with_itself_is_twice_d_squared() {
        let d = weil_d();
        let probe = &theta(0) * &theta(1);
        let c = graded_commutator(&d, &d, &probe, None).unwrap();
        let twice = d.apply(&d.apply(&probe, None).unwrap(), None).unwrap().scale(&Scalar::from_int(2));
        assert_eq!(c, twice);
        assert!(c.is_zero());
    }

    #[test]
    fn substitution() {
        let mut images = BTreeMap::new();
        images.insert(Generator::g("theta", 1, 0), GradedElement::zero());
        images.insert(Generator::g("theta", 1, 1), GradedElement::zero());
        let x = &theta(0) * &chi(1);
        assert!(substitute(&images, &x, None).unwrap().is_zero());
        assert_eq!(substitute(&BTreeMap::new(), &x, None).unwrap(), x);
        let mut bad = BTreeMap::new();
        bad.insert(Generator::g("theta", 1, 0), chi(0));
        assert!(matches!(
            substitute(&bad, &x, None),
            Err(AlgebraError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let x = &chi(0) + &theta(0);
        let sq = x.mul_trunc(&x, Some(3));
        // chi^2 (deg 4) dropped, 2 chi theta (deg 3) kept
        assert_eq!(sq, (&chi(0) * &theta(0)).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn split_by_sign() {
        let m = (&(&theta(0) * &chi(0)) * &theta(1)).terms().next().unwrap().0.clone();
        let (neg, front, back) = m.split_by(|g| g.name() == "theta" && g.indices()[0].1 == 1);
        // theta1 chi1 theta2 = - theta2 theta1 chi1
        assert!(neg);
        assert_eq!(front.to_string(), "theta[g2]");
        assert_eq!(back.to_string(), "chi[g1]*theta[g1]");
    }
}

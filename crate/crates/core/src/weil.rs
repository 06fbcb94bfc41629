//! The Weil algebra `W(g)`, Cartan calculus on g-differential algebras, and
//! the augmentation into the Cartan model.
//!
//! A g-differential algebra here is a free graded-commutative algebra with a
//! degree +1 derivation `d` and degree -1 derivations `iota_a`, one per basis
//! element of `g`. Lie derivatives are always derived as
//! `L_a = d iota_a + iota_a d`.

use std::collections::BTreeMap;

use crate::graded::{AlgebraError, Derivation, GradedElement, Generator};
use crate::lie::LieAlgebraData;
use crate::scalar::Scalar;

/// Name of the Cartan symbols. Shared with the Weil curvature generators,
/// which augmentation maps identically onto them.
pub const CHI: &str = "chi";
pub const THETA: &str = "theta";

/// `chi^a`, degree 2.
pub fn chi(a: usize) -> Generator {
    Generator::g(CHI, 2, a)
}

/// `theta^a`, degree 1.
pub fn theta(a: usize) -> Generator {
    Generator::g(THETA, 1, a)
}

/// An algebra with `d` and contractions `iota_a`, truncated at a fixed degree.
pub trait GDifferentialAlgebra {
    fn g(&self) -> &LieAlgebraData;
    fn d(&self) -> &Derivation;
    fn iota(&self, a: usize) -> &Derivation;
    fn truncation(&self) -> u32;

    fn g_dim(&self) -> usize {
        self.g().dim()
    }

    fn apply_d(&self, x: &GradedElement) -> Result<GradedElement, AlgebraError> {
        self.d().apply(x, Some(self.truncation()))
    }

    fn apply_iota(&self, a: usize, x: &GradedElement) -> Result<GradedElement, AlgebraError> {
        self.check_index(a)?;
        self.iota(a).apply(x, Some(self.truncation()))
    }

    /// `L_a x = d(iota_a x) + iota_a(d x)`.
    fn lie_derivative(&self, a: usize, x: &GradedElement) -> Result<GradedElement, AlgebraError> {
        let first = self.apply_d(&self.apply_iota(a, x)?)?;
        let second = self.apply_iota(a, &self.apply_d(x)?)?;
        Ok(&first + &second)
    }

    fn check_index(&self, a: usize) -> Result<(), AlgebraError> {
        if a < self.g_dim() {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange {
                index: a,
                dim: self.g_dim(),
            })
        }
    }

    /// Checks `iota_a x = 0` and `L_a x = 0` for every `a`.
    fn is_basic(&self, x: &GradedElement) -> Result<BasicReport, AlgebraError> {
        for a in 0..self.g_dim() {
            let i = self.apply_iota(a, x)?;
            if !i.is_zero() {
                return Ok(BasicReport::failing(format!("iota_{}", a + 1), i));
            }
            let l = self.lie_derivative(a, x)?;
            if !l.is_zero() {
                return Ok(BasicReport::failing(format!("L_{}", a + 1), l));
            }
        }
        Ok(BasicReport {
            basic: true,
            witness: None,
        })
    }
}

/// Result of a basic-subcomplex test. The witness names the first operator
/// that does not annihilate the element, with its image.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicReport {
    pub basic: bool,
    pub witness: Option<(String, GradedElement)>,
}

impl BasicReport {
    fn failing(op: String, image: GradedElement) -> Self {
        BasicReport {
            basic: false,
            witness: Some((op, image)),
        }
    }
}

/// `W(g)`: free on `theta^a` (degree 1) and `chi^a = d theta^a` (degree 2).
#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    g: LieAlgebraData,
    truncation: u32,
    d: Derivation,
    iotas: Vec<Derivation>,
}

impl WeilAlgebra {
    pub fn new(g: LieAlgebraData, truncation: u32) -> Self {
        let n = g.dim();
        let mut d = Derivation::new("d_W", 1);
        for a in 0..n {
            d.set(theta(a), chi(a).into());
            d.set(chi(a), GradedElement::zero());
        }
        let mut iotas = Vec::with_capacity(n);
        for b in 0..n {
            let mut iota = Derivation::new(format!("iota_W{}", b + 1), -1);
            for a in 0..n {
                let delta = if a == b { GradedElement::one() } else { GradedElement::zero() };
                iota.set(theta(a), delta);
                // iota_b chi^a = -f^a_{bc} theta^c
                let mut img = GradedElement::zero();
                for c in 0..n {
                    let f = g.f(b, c, a);
                    if !f.is_zero() {
                        img += &GradedElement::generator(theta(c)).scale(&-f);
                    }
                }
                iota.set(chi(a), img);
            }
            iotas.push(iota);
        }
        WeilAlgebra { g, truncation, d, iotas }
    }

    pub fn theta(&self, a: usize) -> GradedElement {
        theta(a).into()
    }

    pub fn chi(&self, a: usize) -> GradedElement {
        chi(a).into()
    }

    /// `nu^a = chi^a + 1/2 f^a_{bc} theta^b theta^c`.
    pub fn nu(&self, a: usize) -> Result<GradedElement, AlgebraError> {
        self.check_index(a)?;
        let n = self.g.dim();
        let half = Scalar::ratio(1, 2);
        let mut out = self.chi(a);
        for b in 0..n {
            for c in 0..n {
                let f = self.g.f(b, c, a);
                if !f.is_zero() {
                    out += &(&self.theta(b) * &self.theta(c)).scale(&(f * &half));
                }
            }
        }
        Ok(out)
    }

    /// Algebra map `theta^a -> 0`, `chi^a -> chi^a`.
    pub fn augmentation(&self, x: &GradedElement) -> CartanElement {
        augmentation(self.g.dim(), x)
    }
}

impl GDifferentialAlgebra for WeilAlgebra {
    fn g(&self) -> &LieAlgebraData {
        &self.g
    }
    fn d(&self) -> &Derivation {
        &self.d
    }
    fn iota(&self, a: usize) -> &Derivation {
        &self.iotas[a]
    }
    fn truncation(&self) -> u32 {
        self.truncation
    }
}

/// Substitutes `theta^a -> 0` for `a < g_dim`; Weil `chi^a` become Cartan
/// symbols. Other generators pass through unchanged.
pub fn augmentation(g_dim: usize, x: &GradedElement) -> CartanElement {
    let images: BTreeMap<Generator, GradedElement> =
        (0..g_dim).map(|a| (theta(a), GradedElement::zero())).collect();
    let element = crate::graded::substitute(&images, x, None).expect("zero images are homogeneous");
    CartanElement::new(element)
}

/// Element of `Sym(g*) ⊗ A`: a graded element in which the generators named
/// `chi` are the Cartan symbols and every other generator belongs to the
/// carrier algebra `A`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CartanElement {
    element: GradedElement,
}

impl CartanElement {
    pub fn new(element: GradedElement) -> Self {
        CartanElement { element }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn chi(a: usize) -> Self {
        Self::new(chi(a).into())
    }

    pub fn element(&self) -> &GradedElement {
        &self.element
    }

    pub fn into_element(self) -> GradedElement {
        self.element
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    /// Total degree counting each `chi` as 2, if homogeneous.
    pub fn total_degree(&self) -> Option<u32> {
        self.element.degree()
    }

    /// Splits off the coefficient of each chi-monomial: returns pairs
    /// `(chi-monomial, carrier coefficient)` with `x = sum chi-mono * coeff`.
    pub fn chi_expansion(&self) -> BTreeMap<crate::graded::Monomial, GradedElement> {
        let mut out: BTreeMap<_, GradedElement> = BTreeMap::new();
        for (m, c) in self.element.terms() {
            // chi is even, so the split carries no sign
            let (_, chi_part, rest) = m.split_by(|g| g.name() == CHI);
            out.entry(chi_part)
                .or_default()
                .add_term(rest, c.clone());
        }
        out
    }

    /// Replaces every `chi^a` by the scalar `values[a]`.
    pub fn evaluate_chi(&self, values: &[Scalar]) -> Result<GradedElement, AlgebraError> {
        let mut out = GradedElement::zero();
        for (chi_mono, coeff) in self.chi_expansion() {
            let mut s = Scalar::one();
            for (g, e) in chi_mono.factors() {
                let a = g.indices()[0].1;
                let v = values.get(a).ok_or(AlgebraError::IndexOutOfRange {
                    index: a,
                    dim: values.len(),
                })?;
                s = &s * &v.pow(*e as i32).expect("non-negative power");
            }
            out += &coeff.scale(&s);
        }
        Ok(out)
    }
}

impl std::fmt::Display for CartanElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.element)
    }
}

fn chi_symbols(g_dim: usize) -> Vec<Generator> {
    (0..g_dim).map(chi).collect()
}

fn ensure_chi_free(carrier: &(impl GDifferentialAlgebra + ?Sized)) -> Result<(), AlgebraError> {
    if carrier.d().table().keys().any(|g| g.name() == CHI) {
        return Err(AlgebraError::Consistency(
            "carrier algebra already uses the Cartan symbol name `chi`".into(),
        ));
    }
    Ok(())
}

/// `(d - chi^a iota_a) c`, with `chi` constant for both `d` and `iota_a`.
pub fn cartan_differential(
    carrier: &(impl GDifferentialAlgebra + ?Sized),
    c: &CartanElement,
) -> Result<CartanElement, AlgebraError> {
    ensure_chi_free(carrier)?;
    let n = carrier.g_dim();
    let max = Some(carrier.truncation());
    let chis = chi_symbols(n);
    let d = carrier.d().with_constants(&chis);
    let mut out = d.apply(&c.element, max)?;
    for a in 0..n {
        let iota = carrier.iota(a).with_constants(&chis);
        let contracted = iota.apply(&c.element, max)?;
        if !contracted.is_zero() {
            out = &out - &GradedElement::generator(chi(a)).mul_trunc(&contracted, max);
        }
    }
    Ok(CartanElement::new(out))
}

/// A carrier with no generators: the Cartan model of a point,
/// `Sym(g*)` with zero differential.
#[derive(Clone, Debug)]
pub struct PointCarrier {
    g: LieAlgebraData,
    truncation: u32,
    d: Derivation,
    iotas: Vec<Derivation>,
}

impl PointCarrier {
    pub fn new(g: LieAlgebraData, truncation: u32) -> Self {
        let iotas = (0..g.dim()).map(|a| Derivation::new(format!("iota{}", a + 1), -1)).collect();
        PointCarrier {
            g,
            truncation,
            d: Derivation::new("d", 1),
            iotas,
        }
    }
}

impl GDifferentialAlgebra for PointCarrier {
    fn g(&self) -> &LieAlgebraData {
        &self.g
    }
    fn d(&self) -> &Derivation {
        &self.d
    }
    fn iota(&self, a: usize) -> &Derivation {
        &self.iotas[a]
    }
    fn truncation(&self) -> u32 {
        self.truncation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::graded_commutator;

    fn el(g: Generator) -> GradedElement {
        g.into()
    }

    fn probes(w: &WeilAlgebra) -> Vec<GradedElement> {
        let n = w.g().dim();
        let mut out = vec![GradedElement::one()];
        for a in 0..n {
            out.push(w.theta(a));
            out.push(w.chi(a));
            out.push(w.nu(a).unwrap());
            for b in 0..n {
                out.push(&w.theta(a) * &w.chi(b));
                out.push(&(&w.theta(a) * &w.theta(b)) * &w.chi((a + b) % n));
            }
        }
        out
    }

    fn algebras() -> Vec<WeilAlgebra> {
        vec![
            WeilAlgebra::new(LieAlgebraData::abelian(2), 8),
            WeilAlgebra::new(LieAlgebraData::su2(), 8),
            WeilAlgebra::new(LieAlgebraData::so3(), 8),
        ]
    }

    #[test]
    fn d_squared_vanishes() {
        for w in algebras() {
            for p in probes(&w) {
                assert!(w.apply_d(&w.apply_d(&p).unwrap()).unwrap().is_zero(), "{p}");
            }
        }
    }

    #[test]
    fn nu_examples() {
        let w = WeilAlgebra::new(LieAlgebraData::abelian(2), 6);
        assert_eq!(w.nu(1).unwrap(), w.chi(1));
        let w = WeilAlgebra::new(LieAlgebraData::su2(), 6);
        assert_eq!(w.nu(0).unwrap(), &w.chi(0) + &(&w.theta(1) * &w.theta(2)));
        assert!(matches!(w.nu(3), Err(AlgebraError::IndexOutOfRange { .. })));
        for a in 0..3 {
            for b in 0..3 {
                assert!(w.apply_iota(b, &w.nu(a).unwrap()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn cartan_calculus_identities() {
        for w in algebras() {
            let n = w.g().dim();
            for p in probes(&w) {
                for a in 0..n {
                    for b in 0..n {
                        let anti = graded_commutator(w.iota(a), w.iota(b), &p, Some(8)).unwrap();
                        assert!(anti.is_zero());
                        // [L_a, iota_b] = f^c_{ab} iota_c
                        let lhs = &w.lie_derivative(a, &w.apply_iota(b, &p).unwrap()).unwrap()
                            - &w.apply_iota(b, &w.lie_derivative(a, &p).unwrap()).unwrap();
                        let mut rhs = GradedElement::zero();
                        for c in 0..n {
                            rhs += &w.apply_iota(c, &p).unwrap().scale(w.g().f(a, b, c));
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn d_iota_commutator_is_lie_derivative() {
        let w = WeilAlgebra::new(LieAlgebraData::su2(), 6);
        for a in 0..3 {
            for b in 0..3 {
                let l = graded_commutator(w.d(), w.iota(a), &w.theta(b), Some(6)).unwrap();
                let mut expected = GradedElement::zero();
                for c in 0..3 {
                    expected += &w.theta(c).scale(&-w.g().f(a, c, b));
                }
                assert_eq!(l, expected);
            }
        }
    }

    #[test]
    fn bianchi() {
        for w in algebras() {
            let n = w.g().dim();
            for a in 0..n {
                let mut rhs = GradedElement::zero();
                for b in 0..n {
                    for c in 0..n {
                        let f = w.g().f(b, c, a);
                        if !f.is_zero() {
                            rhs += &(&w.theta(b) * &w.nu(c).unwrap()).scale(&-f);
                        }
                    }
                }
                assert_eq!(w.apply_d(&w.nu(a).unwrap()).unwrap(), rhs);
            }
        }
    }

    fn casimir(w: &WeilAlgebra) -> GradedElement {
        (0..w.g().dim()).fold(GradedElement::zero(), |acc, a| {
            let nu = w.nu(a).unwrap();
            &acc + &(&nu * &nu)
        })
    }

    #[test]
    fn basic_elements() {
        let w = WeilAlgebra::new(LieAlgebraData::su2(), 8);
        assert!(w.is_basic(&casimir(&w)).unwrap().basic);
        let r = w.is_basic(&w.theta(0)).unwrap();
        assert!(!r.basic);
        assert_eq!(r.witness.unwrap().0, "iota_1");
        assert!(w.is_basic(&GradedElement::one()).unwrap().basic);
        // horizontal but not invariant
        let r = w.is_basic(&w.nu(0).unwrap()).unwrap();
        // L_1 nu^1 = 0, so the first failure is L_2
        assert_eq!(r.witness.unwrap().0, "L_2");
    }

    #[test]
    fn augmentation_examples() {
        let w = WeilAlgebra::new(LieAlgebraData::su2(), 8);
        assert!(w.augmentation(&(&w.theta(0) * &w.chi(1))).is_zero());
        let x = &w.nu(0).unwrap() * &w.nu(1).unwrap();
        assert_eq!(w.augmentation(&x).into_element(), &el(chi(0)) * &el(chi(1)));
    }

    #[test]
    fn augmentation_is_a_chain_map_on_basic_elements() {
        let w = WeilAlgebra::new(LieAlgebraData::su2(), 8);
        let point = PointCarrier::new(LieAlgebraData::su2(), 8);
        let x = casimir(&w);
        let x2 = &x * &x;
        for p in [x, x2] {
            let lhs = w.augmentation(&w.apply_d(&p).unwrap());
            let rhs = cartan_differential(&point, &w.augmentation(&p)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cartan_differential_of_chi_vanishes() {
        let point = PointCarrier::new(LieAlgebraData::su2(), 8);
        assert!(cartan_differential(&point, &CartanElement::chi(0)).unwrap().is_zero());
    }

    #[test]
    fn evaluate_chi_substitutes_values() {
        let c = CartanElement::new(&(&el(chi(0)) * &el(chi(0))) + &el(chi(1)).scale(&Scalar::from_int(3)));
        let out = c.evaluate_chi(&[Scalar::from_int(2), Scalar::i()]).unwrap();
        assert_eq!(out, GradedElement::constant(&Scalar::from_int(4) + &(&Scalar::i() * &Scalar::from_int(3))));
    }
}

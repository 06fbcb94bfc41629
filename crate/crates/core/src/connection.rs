//! The universal algebra of a G-invariant connection on a principal
//! H-bundle, its tensor product with the Weil algebra, and exact checks of the
//! equivariant curvature identities.
//!
//! Generators (with `c^i_{jk}` the structure constants of `h`):
//!
//! | generator     | degree | meaning                 |
//! |---------------|--------|-------------------------|
//! | `Theta^i`     | 1      | connection form         |
//! | `Omega^i`     | 2      | curvature               |
//! | `mu_a^i`      | 0      | `iota_a Theta`, moment  |
//! | `rho_a^i`     | 1      | `iota_a Omega`          |
//!
//! ```text
//! d Theta = Omega - 1/2 c Theta Theta      iota_a Theta = mu_a
//! d Omega = c Omega Theta                   iota_a Omega = rho_a
//! d mu_a  = -rho_a + c mu_a Theta           iota_b mu_a  = 0
//! d rho_a = -c (rho_a Theta + Omega mu_a)   iota_b rho_a = f^c_{ab} mu_c + c mu_a mu_b
//! ```

use crate::graded::{AlgebraError, Derivation, GradedElement, Generator};
use crate::lie::{LieAlgebraData, MatrixRep};
use crate::scalar::Scalar;
use crate::series::MatrixCurvature;
use crate::weil::{self, cartan_differential, CartanElement, GDifferentialAlgebra, WeilAlgebra};

pub fn big_theta(i: usize) -> Generator {
    Generator::h("Theta", 1, i)
}

pub fn big_omega(i: usize) -> Generator {
    Generator::h("Omega", 2, i)
}

pub fn mu(a: usize, i: usize) -> Generator {
    Generator::gh("mu", 0, a, i)
}

pub fn rho(a: usize, i: usize) -> Generator {
    Generator::gh("rho", 1, a, i)
}

fn el(g: Generator) -> GradedElement {
    g.into()
}

/// `[alpha ∧ beta]^i = c^i_{jk} alpha^j beta^k` for h-valued elements.
pub fn h_bracket(
    h: &LieAlgebraData,
    alpha: &[GradedElement],
    beta: &[GradedElement],
    max: Option<u32>,
) -> Vec<GradedElement> {
    let mut out = vec![GradedElement::zero(); h.dim()];
    for (j, k, i, c) in h.nonzero_constants() {
        out[i] += &alpha[j].mul_trunc(&beta[k], max).scale(c);
    }
    out
}

/// `Theta^i, Omega^i, mu_a^i, rho_a^i` with the tables above.
#[derive(Clone, Debug)]
pub struct UniversalConnectionAlgebra {
    g: LieAlgebraData,
    h: LieAlgebraData,
    truncation: u32,
    d: Derivation,
    iotas: Vec<Derivation>,
}

impl UniversalConnectionAlgebra {
    /// Builds the tables and runs the consistency suite; any violation is an
    /// error.
    pub fn build(g: LieAlgebraData, h: LieAlgebraData, truncation: u32) -> Result<Self, AlgebraError> {
        for alg in [&g, &h] {
            let report = alg.validate();
            if !report.accepted() {
                return Err(AlgebraError::Consistency(report.to_string()));
            }
        }
        let u = Self::build_unchecked(g, h, truncation);
        u.consistency_suite()?;
        Ok(u)
    }

    /// The tables without the consistency suite.
    pub fn build_unchecked(g: LieAlgebraData, h: LieAlgebraData, truncation: u32) -> Self {
        let (ng, nh) = (g.dim(), h.dim());
        let cs = h.nonzero_constants();
        let half = Scalar::ratio(1, 2);

        let mut d = Derivation::new("d_U", 1);
        for i in 0..nh {
            let mut d_theta = el(big_omega(i));
            let mut d_omega = GradedElement::zero();
            for &(j, k, ii, c) in &cs {
                if ii != i {
                    continue;
                }
                d_theta += &(&el(big_theta(j)) * &el(big_theta(k))).scale(&-(c * &half));
                d_omega += &(&el(big_omega(j)) * &el(big_theta(k))).scale(c);
            }
            d.set(big_theta(i), d_theta);
            d.set(big_omega(i), d_omega);
            for a in 0..ng {
                let mut d_mu = -el(rho(a, i));
                let mut d_rho = GradedElement::zero();
                for &(j, k, ii, c) in &cs {
                    if ii != i {
                        continue;
                    }
                    d_mu += &(&el(mu(a, j)) * &el(big_theta(k))).scale(c);
                    let t = &(&el(rho(a, j)) * &el(big_theta(k))) + &(&el(big_omega(j)) * &el(mu(a, k)));
                    d_rho += &t.scale(&-c);
                }
                d.set(mu(a, i), d_mu);
                d.set(rho(a, i), d_rho);
            }
        }

        let mut iotas = Vec::with_capacity(ng);
        for b in 0..ng {
            let mut iota = Derivation::new(format!("iota_U{}", b + 1), -1);
            for i in 0..nh {
                iota.set(big_theta(i), el(mu(b, i)));
                iota.set(big_omega(i), el(rho(b, i)));
                for a in 0..ng {
                    iota.set(mu(a, i), GradedElement::zero());
                    let mut img = GradedElement::zero();
                    for c in 0..ng {
                        let f = g.f(a, b, c);
                        if !f.is_zero() {
                            img += &el(mu(c, i)).scale(f);
                        }
                    }
                    for &(j, k, ii, cc) in &cs {
                        if ii == i {
                            img += &(&el(mu(a, j)) * &el(mu(b, k))).scale(cc);
                        }
                    }
                    iota.set(rho(a, i), img);
                }
            }
            iotas.push(iota);
        }
        UniversalConnectionAlgebra {
            g,
            h,
            truncation,
            d,
            iotas,
        }
    }

    pub fn h(&self) -> &LieAlgebraData {
        &self.h
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.d.table().keys().cloned().collect()
    }

    /// `d^2 = 0`, `{iota_a, iota_b} = 0`, `L_a Theta = L_a Omega = 0`,
    /// `L_a mu_b = f^c_{ab} mu_c`, `L_a rho_b = f^c_{ab} rho_c` on generators,
    /// and antisymmetry of `iota_b rho_a` in `(a, b)`.
    pub fn consistency_suite(&self) -> Result<(), AlgebraError> {
        let fail = |what: String| Err(AlgebraError::Consistency(what));
        let (ng, nh) = (self.g.dim(), self.h.dim());
        for x in self.generators() {
            let xe = el(x.clone());
            if !self.apply_d(&self.apply_d(&xe)?)?.is_zero() {
                return fail(format!("d^2 {x} != 0"));
            }
            for a in 0..ng {
                for b in 0..ng {
                    let s = &self.apply_iota(a, &self.apply_iota(b, &xe)?)?
                        + &self.apply_iota(b, &self.apply_iota(a, &xe)?)?;
                    if !s.is_zero() {
                        return fail(format!("{{iota_{}, iota_{}}} {x} != 0", a + 1, b + 1));
                    }
                }
            }
        }
        for a in 0..ng {
            for i in 0..nh {
                for x in [big_theta(i), big_omega(i)] {
                    if !self.lie_derivative(a, &el(x.clone()))?.is_zero() {
                        return fail(format!("L_{} {x} != 0", a + 1));
                    }
                }
                for b in 0..ng {
                    for (make, label) in [(mu as fn(usize, usize) -> Generator, "mu"), (rho, "rho")] {
                        let lhs = self.lie_derivative(a, &el(make(b, i)))?;
                        let mut rhs = GradedElement::zero();
                        for c in 0..ng {
                            rhs += &el(make(c, i)).scale(self.g.f(a, b, c));
                        }
                        if lhs != rhs {
                            return fail(format!("L_{} {label}_{}^{}: {lhs} != {rhs}", a + 1, b + 1, i + 1));
                        }
                    }
                    let s = &self.apply_iota(b, &el(rho(a, i)))? + &self.apply_iota(a, &el(rho(b, i)))?;
                    if !s.is_zero() {
                        return fail(format!("iota_{} rho_{} not antisymmetric", b + 1, a + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Omega_G^i = Omega^i - chi^a mu_a^i`.
    pub fn equivariant_curvature(&self) -> Vec<CartanElement> {
        (0..self.h.dim())
            .map(|i| {
                let mut x = el(big_omega(i));
                for a in 0..self.g.dim() {
                    x = &x - &(&el(weil::chi(a)) * &el(mu(a, i)));
                }
                CartanElement::new(x)
            })
            .collect()
    }

    /// `(d + [Theta, .] - chi^a iota_a)` on an h-valued Cartan element.
    pub fn covariant_cartan_differential(
        &self,
        alpha: &[CartanElement],
    ) -> Result<Vec<CartanElement>, AlgebraError> {
        let max = Some(self.truncation);
        let thetas: Vec<GradedElement> = (0..self.h.dim()).map(|i| el(big_theta(i))).collect();
        let elems: Vec<GradedElement> = alpha.iter().map(|c| c.element().clone()).collect();
        let br = h_bracket(&self.h, &thetas, &elems, max);
        alpha
            .iter()
            .zip(br)
            .map(|(c, b)| Ok(CartanElement::new(cartan_differential(self, c)?.element() + &b)))
            .collect()
    }

    /// Exact check that `Omega_G` is covariantly Cartan-closed and, given a
    /// representation of `h`, that `tr(Omega_G^m)` is Cartan-closed for
    /// `2m <= truncation`.
    pub fn verify_equivariant_closedness(&self, rep: Option<&MatrixRep>) -> Result<ClosednessReport, AlgebraError> {
        let omega_g = self.equivariant_curvature();
        let residual = self.covariant_cartan_differential(&omega_g)?;
        let mut report = ClosednessReport {
            covariant_closed: residual.iter().all(CartanElement::is_zero),
            residual,
            trace_checks: Vec::new(),
        };
        if let Some(rep) = rep {
            let matrix = MatrixCurvature::from_cartan(&omega_g, rep);
            let mut power = MatrixCurvature::identity(matrix.size());
            for m in 1..=(self.truncation / 2) {
                power = power.mul(&matrix, Some(self.truncation));
                let tr = CartanElement::new(power.trace());
                let closed = cartan_differential(self, &tr)?.is_zero();
                report.trace_checks.push((m, closed));
            }
        }
        Ok(report)
    }
}

impl GDifferentialAlgebra for UniversalConnectionAlgebra {
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

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessReport {
    pub covariant_closed: bool,
    pub residual: Vec<CartanElement>,
    /// `(m, tr(Omega_G^m) is closed)`.
    pub trace_checks: Vec<(u32, bool)>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.covariant_closed && self.trace_checks.iter().all(|(_, ok)| *ok)
    }
}

/// `W(g) ⊗ U(g, h)` with total `d` and total contractions.
#[derive(Clone, Debug)]
pub struct TensorWeilAlgebra {
    weil: WeilAlgebra,
    universal: UniversalConnectionAlgebra,
    d: Derivation,
    iotas: Vec<Derivation>,
}

impl TensorWeilAlgebra {
    pub fn new(universal: UniversalConnectionAlgebra) -> Self {
        let weil = WeilAlgebra::new(universal.g.clone(), universal.truncation);
        // generator names are disjoint, so the union is D ⊗ 1 + 1 ⊗ D
        let d = weil.d().union(universal.d(), "d_tot");
        let iotas = (0..universal.g.dim())
            .map(|a| weil.iota(a).union(universal.iota(a), format!("iota_tot{}", a + 1)))
            .collect();
        TensorWeilAlgebra {
            weil,
            universal,
            d,
            iotas,
        }
    }

    pub fn weil(&self) -> &WeilAlgebra {
        &self.weil
    }

    pub fn universal(&self) -> &UniversalConnectionAlgebra {
        &self.universal
    }

    /// `Theta_W^i = Theta^i - theta^a mu_a^i`.
    pub fn universal_connection(&self) -> Vec<GradedElement> {
        (0..self.universal.h.dim())
            .map(|i| {
                let mut x = el(big_theta(i));
                for a in 0..self.universal.g.dim() {
                    x = &x - &(&el(weil::theta(a)) * &el(mu(a, i)));
                }
                x
            })
            .collect()
    }

    /// `Omega^i - theta^a rho_a^i + 1/2 theta^a theta^b (iota_b rho_a)^i
    /// - nu^a mu_a^i`.
    pub fn weil_curvature(&self) -> Result<Vec<GradedElement>, AlgebraError> {
        let ng = self.universal.g.dim();
        let max = Some(self.universal.truncation);
        let half = Scalar::ratio(1, 2);
        (0..self.universal.h.dim())
            .map(|i| {
                let mut x = el(big_omega(i));
                for a in 0..ng {
                    let th_a = el(weil::theta(a));
                    x = &x - &th_a.mul_trunc(&el(rho(a, i)), max);
                    for b in 0..ng {
                        let ibra = self.universal.apply_iota(b, &el(rho(a, i)))?;
                        let piece = th_a.mul_trunc(&el(weil::theta(b)), max).mul_trunc(&ibra, max);
                        x += &piece.scale(&half);
                    }
                    x = &x - &self.weil.nu(a)?.mul_trunc(&el(mu(a, i)), max);
                }
                Ok(x)
            })
            .collect()
    }

    /// Compares `d Theta_W + 1/2 [Theta_W ∧ Theta_W]` with the Weil curvature.
    pub fn verify_structure_equation(&self) -> Result<StructureEquationReport, AlgebraError> {
        let max = Some(self.universal.truncation);
        let tw = self.universal_connection();
        let br = h_bracket(&self.universal.h, &tw, &tw, max);
        let half = Scalar::ratio(1, 2);
        let lhs = tw
            .iter()
            .zip(&br)
            .map(|(t, b)| Ok(&self.apply_d(t)? + &b.scale(&half)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let rhs = self.weil_curvature()?;
        Ok(StructureEquationReport {
            passed: lhs == rhs,
            lhs,
            rhs,
        })
    }

    /// Checks that the augmentation of the Weil curvature is `Omega_G`.
    pub fn augmentation_matches(&self) -> Result<bool, AlgebraError> {
        let ng = self.universal.g.dim();
        let images: Vec<CartanElement> = self
            .weil_curvature()?
            .iter()
            .map(|x| weil::augmentation(ng, x))
            .collect();
        Ok(images == self.universal.equivariant_curvature())
    }
}

impl GDifferentialAlgebra for TensorWeilAlgebra {
    fn g(&self) -> &LieAlgebraData {
        &self.universal.g
    }
    fn d(&self) -> &Derivation {
        &self.d
    }
    fn iota(&self, a: usize) -> &Derivation {
        &self.iotas[a]
    }
    fn truncation(&self) -> u32 {
        self.universal.truncation
    }
}

/// Both sides of the structure equation for the universal connection.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureEquationReport {
    pub passed: bool,
    pub lhs: Vec<GradedElement>,
    pub rhs: Vec<GradedElement>,
}

impl std::fmt::Display for StructureEquationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            return write!(f, "structure equation holds on {} components", self.lhs.len());
        }
        for (i, (l, r)) in self.lhs.iter().zip(&self.rhs).enumerate() {
            if l != r {
                writeln!(f, "component {}: lhs = {l}", i + 1)?;
                writeln!(f, "component {}: rhs = {r}", i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<LieAlgebraData> {
        vec![
            LieAlgebraData::u1(),
            LieAlgebraData::abelian(2),
            LieAlgebraData::su2(),
            LieAlgebraData::so3(),
        ]
    }

    #[test]
    fn abelian_tables() {
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::u1(), LieAlgebraData::u1(), 6).unwrap();
        assert_eq!(u.apply_d(&el(mu(0, 0))).unwrap(), -el(rho(0, 0)));
        assert!(u.apply_d(&el(rho(0, 0))).unwrap().is_zero());
    }

    #[test]
    fn builds_and_lie_derivative_of_mu() {
        for h in [LieAlgebraData::u1(), LieAlgebraData::su2()] {
            let u = UniversalConnectionAlgebra::build(LieAlgebraData::su2(), h.clone(), 6).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    let l = u.lie_derivative(a, &el(mu(b, 0))).unwrap();
                    let mut expected = GradedElement::zero();
                    for c in 0..3 {
                        expected += &el(mu(c, 0)).scale(u.g().f(a, b, c));
                    }
                    assert_eq!(l, expected);
                }
            }
        }
    }

    #[test]
    fn invalid_algebra_rejected() {
        let mut bad = LieAlgebraData::su2();
        bad.set_f(0, 1, 2, Scalar::from_int(2));
        assert!(UniversalConnectionAlgebra::build(bad, LieAlgebraData::u1(), 4).is_err());
    }

    #[test]
    fn tampered_table_fails_consistency() {
        let mut u = UniversalConnectionAlgebra::build_unchecked(LieAlgebraData::su2(), LieAlgebraData::u1(), 6);
        u.iotas[1].set(rho(0, 0), el(mu(2, 0)).scale(&Scalar::from_int(-1)));
        assert!(matches!(u.consistency_suite(), Err(AlgebraError::Consistency(_))));
    }

    #[test]
    fn structure_equation_closedness_and_augmentation_on_grid() {
        for g in grid() {
            for h in grid() {
                let u = UniversalConnectionAlgebra::build(g.clone(), h.clone(), 6).unwrap();
                let rep = crate::lie::MatrixRep::default_for(&h);
                let closed = u.verify_equivariant_closedness(rep.as_ref()).unwrap();
                assert!(closed.passed(), "{} {}", g.name(), h.name());
                let t = TensorWeilAlgebra::new(u);
                let r = t.verify_structure_equation().unwrap();
                assert!(r.passed, "{} {}: {r}", g.name(), h.name());
                assert!(t.augmentation_matches().unwrap());
            }
        }
    }

    #[test]
    fn abelian_weil_curvature_collapses() {
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::u1(), LieAlgebraData::u1(), 6).unwrap();
        let t = TensorWeilAlgebra::new(u);
        let expected = &(&el(big_omega(0)) - &(&el(weil::theta(0)) * &el(rho(0, 0))))
            - &(&el(weil::chi(0)) * &el(mu(0, 0)));
        assert_eq!(t.weil_curvature().unwrap()[0], expected);
    }

    #[test]
    fn universal_connection_is_horizontal() {
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::su2(), LieAlgebraData::su2(), 6).unwrap();
        let t = TensorWeilAlgebra::new(u);
        for th in t.universal_connection() {
            for a in 0..3 {
                assert!(t.apply_iota(a, &th).unwrap().is_zero());
            }
        }
        let trivial = UniversalConnectionAlgebra::build(LieAlgebraData::abelian(0), LieAlgebraData::u1(), 4).unwrap();
        let t = TensorWeilAlgebra::new(trivial);
        assert_eq!(t.universal_connection()[0], el(big_theta(0)));
        assert_eq!(t.universal().equivariant_curvature()[0].element(), &el(big_omega(0)));
    }

    #[test]
    fn total_d_squares_to_zero() {
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::su2(), LieAlgebraData::su2(), 6).unwrap();
        let t = TensorWeilAlgebra::new(u);
        for x in t.weil_curvature().unwrap().iter().chain(&t.universal_connection()) {
            assert!(t.apply_d(&t.apply_d(x).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn chain_map_on_basic_tensor_elements() {
        // Theta_W is basic for h = u(1); augmentation intertwines d and the
        // Cartan differential.
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::su2(), LieAlgebraData::u1(), 6).unwrap();
        let t = TensorWeilAlgebra::new(u);
        let tw = t.universal_connection()[0].clone();
        let ow = t.weil_curvature().unwrap()[0].clone();
        for x in [tw.clone(), &tw * &ow, &ow * &ow] {
            assert!(t.is_basic(&x).unwrap().basic);
            let lhs = weil::augmentation(3, &t.apply_d(&x).unwrap());
            let rhs = cartan_differential(t.universal(), &weil::augmentation(3, &x)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cartan_differential_squares_to_zero_on_invariants() {
        let u = UniversalConnectionAlgebra::build(LieAlgebraData::su2(), LieAlgebraData::u1(), 8).unwrap();
        let og = u.equivariant_curvature().remove(0);
        let sq = CartanElement::new(og.element() * og.element());
        let theta = CartanElement::new(el(big_theta(0)));
        for p in [og, sq, theta] {
            let once = cartan_differential(&u, &p).unwrap();
            assert!(cartan_differential(&u, &once).unwrap().is_zero());
        }
    }
}

//! Named pass/fail checks, shared by the command-line runner and the test
//! suites. Each check reports either an exact verdict or a numeric residual.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anomaly::{cross_validate, CrossValidation};
use crate::connection::{TensorWeilAlgebra, UniversalConnectionAlgebra};
use crate::graded::{graded_commutator, AlgebraError, Generator, GradedElement};
use crate::lie::{LieAlgebraData, MatrixRep};
use crate::oracle::{commutator_residual, integrate, Chart, Identity, MonopoleScenario, SphereGrid};
use crate::scalar::{factorial, rat, Rational, Scalar};
use crate::series::{CharSeries, MatrixCurvature, PowerSeries, SeriesError};
use crate::weil::{augmentation, cartan_differential, CartanElement, GDifferentialAlgebra, WeilAlgebra};

/// Fixed seed for randomized probes; reports must not depend on the run.
pub const SEED: u64 = 0x5eed_c4a7;

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Exact,
    Value(f64),
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Exact => f.write_str("exact"),
            Residual::Value(v) => write!(f, "{v:.3e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: Residual,
    /// Shown in the human section, mostly on failure.
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            residual: Residual::Exact,
            detail: None,
        }
    }

    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            passed: residual <= tol,
            residual: Residual::Value(residual),
            detail: None,
        }
    }

    pub fn failed(name: impl Into<String>, why: impl fmt::Display) -> Self {
        Check::exact(name, false).with_detail(why.to_string())
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// `CHECK <name> <PASS|FAIL> <residual>`.
    pub fn machine_line(&self) -> String {
        format!("CHECK {} {} {}", self.name, if self.passed { "PASS" } else { "FAIL" }, self.residual)
    }
}

fn tag(name: &str, g: &LieAlgebraData) -> String {
    format!("{name}[{}]", g.name())
}

/// Every monomial in `theta^a` and `chi^a` of degree at most `max`.
pub fn weil_monomials(w: &WeilAlgebra, max: u32) -> Vec<GradedElement> {
    let n = w.g_dim();
    let mut gens: Vec<GradedElement> = (0..n).map(|a| w.theta(a)).collect();
    gens.extend((0..n).map(|a| w.chi(a)));
    let mut out = Vec::new();
    fn walk(gens: &[GradedElement], k: usize, acc: GradedElement, deg: u32, max: u32, out: &mut Vec<GradedElement>) {
        if k == gens.len() {
            out.push(acc);
            return;
        }
        let d = gens[k].degree().unwrap_or(0);
        let mut cur = acc;
        let mut cur_deg = deg;
        loop {
            walk(gens, k + 1, cur.clone(), cur_deg, max, out);
            cur_deg += d;
            if cur_deg > max {
                break;
            }
            cur = &cur * &gens[k];
            if cur.is_zero() {
                break;
            }
        }
    }
    walk(&gens, 0, GradedElement::one(), 0, max, &mut out);
    out
}

/// Exact relations of the Weil algebra on every basis monomial up to the
/// truncation: `d^2 = 0`, `{iota_a, iota_b} = 0`,
/// `[L_a, iota_b] = f^c_{ab} iota_c`, and `d nu^a = -f^a_{bc} theta^b nu^c`.
/// The algebra keeps two degrees beyond the probes so that no side of an
/// identity is cut off by the truncation.
pub fn weil_suite(g: &LieAlgebraData, truncation: u32) -> Result<Vec<Check>, AlgebraError> {
    let w = WeilAlgebra::new(g.clone(), truncation + 2);
    let n = g.dim();
    let max = Some(truncation + 2);
    let basis = weil_monomials(&w, truncation);
    let (mut d2, mut anti, mut lie_iota) = (None, None, None);
    for p in &basis {
        if d2.is_none() && !w.apply_d(&w.apply_d(p)?)?.is_zero() {
            d2 = Some(format!("d^2 ({p}) != 0"));
        }
        for a in 0..n {
            let la = w.lie_derivative(a, p)?;
            for b in 0..n {
                if anti.is_none() && !graded_commutator(w.iota(a), w.iota(b), p, max)?.is_zero() {
                    anti = Some(format!("{{iota_{}, iota_{}}} ({p}) != 0", a + 1, b + 1));
                }
                if lie_iota.is_some() {
                    continue;
                }
                let lhs = &w.lie_derivative(a, &w.apply_iota(b, p)?)? - &w.apply_iota(b, &la)?;
                let mut rhs = GradedElement::zero();
                for c in 0..n {
                    let f = g.f(a, b, c);
                    if !f.is_zero() {
                        rhs += &w.apply_iota(c, p)?.scale(f);
                    }
                }
                if lhs != rhs {
                    lie_iota = Some(format!("[L_{}, iota_{}] ({p}): {lhs} != {rhs}", a + 1, b + 1));
                }
            }
        }
    }
    let mut bianchi = None;
    for a in 0..n {
        let mut rhs = GradedElement::zero();
        for b in 0..n {
            for c in 0..n {
                let f = g.f(b, c, a);
                if !f.is_zero() {
                    rhs += &(&w.theta(b) * &w.nu(c)?).scale(&-f);
                }
            }
        }
        let lhs = w.apply_d(&w.nu(a)?)?;
        if lhs != rhs && bianchi.is_none() {
            bianchi = Some(format!("d nu^{}: {lhs} != {rhs}", a + 1));
        }
    }
    let mk = |name: &str, fail: Option<String>| {
        let c = Check::exact(tag(name, g), fail.is_none());
        match fail {
            Some(why) => c.with_detail(why),
            None => c.with_detail(format!("{} basis monomials up to degree {truncation}", basis.len())),
        }
    };
    Ok(vec![
        mk("weil_d_squared", d2),
        mk("weil_iota_anticommute", anti),
        mk("weil_lie_iota", lie_iota),
        mk("weil_bianchi", bianchi),
    ])
}

/// Augmentation sends `nu^a` to `chi^a` and intertwines `d_W` with the
/// Cartan differential on the invariant quadratic `sum nu^a nu^a`.
pub fn augmentation_check(g: &LieAlgebraData, truncation: u32) -> Result<Check, AlgebraError> {
    let w = WeilAlgebra::new(g.clone(), truncation);
    let n = g.dim();
    let mut ok = true;
    for a in 0..n {
        ok &= w.augmentation(&w.nu(a)?) == CartanElement::chi(a);
    }
    let mut q = GradedElement::zero();
    for a in 0..n {
        let nu = w.nu(a)?;
        q += &(&nu * &nu);
    }
    let point = crate::weil::PointCarrier::new(g.clone(), truncation);
    let lhs = augmentation(n, &w.apply_d(&q)?);
    let rhs = cartan_differential(&point, &augmentation(n, &q))?;
    ok &= lhs == rhs;
    Ok(Check::exact(tag("weil_augmentation", g), ok))
}

fn random_element(rng: &mut ChaCha8Rng, gens: &[GradedElement], terms: usize) -> GradedElement {
    let mut x = GradedElement::zero();
    for _ in 0..terms {
        let mut m = GradedElement::constant(Scalar::from_rational(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        for _ in 0..rng.gen_range(0..=3) {
            m = &m * &gens[rng.gen_range(0..gens.len())];
        }
        x += &m;
    }
    x
}

/// Randomized exact checks of the graded-commutative kernel: associativity,
/// graded commutativity on homogeneous parts, and the graded Leibniz rule
/// for `d` on `W(su2)`.
pub fn graded_suite(seed: u64, samples: usize) -> Result<Vec<Check>, AlgebraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = WeilAlgebra::new(LieAlgebraData::su2(), 12);
    let mut gens: Vec<GradedElement> = (0..3).map(|a| w.theta(a)).collect();
    gens.extend((0..3).map(|a| w.chi(a)));
    gens.push(Generator::new("s", 3, &[]).into());
    let (mut assoc, mut comm, mut leibniz) = (true, true, true);
    for _ in 0..samples {
        let x = random_element(&mut rng, &gens, 3);
        let y = random_element(&mut rng, &gens, 3);
        let z = random_element(&mut rng, &gens, 3);
        assoc &= &(&x * &y) * &z == &x * &(&y * &z);
        for dx in 0..=4 {
            for dy in 0..=4 {
                let (xp, yp) = (x.homogeneous_part(dx), y.homogeneous_part(dy));
                let sign = if dx * dy % 2 == 1 { -Scalar::one() } else { Scalar::one() };
                comm &= &xp * &yp == (&yp * &xp).scale(&sign);
            }
        }
        let xw = x.filter(|m| m.factors().iter().all(|(g, _)| g.name() != "s"));
        let yw = y.filter(|m| m.factors().iter().all(|(g, _)| g.name() != "s"));
        for dx in 0..=4 {
            let xp = xw.homogeneous_part(dx);
            let sign = if dx % 2 == 1 { -Scalar::one() } else { Scalar::one() };
            let lhs = w.apply_d(&(&xp * &yw))?;
            let rhs = &(&w.apply_d(&xp)? * &yw) + &(&xp * &w.apply_d(&yw)?).scale(&sign);
            leibniz &= lhs == rhs;
        }
    }
    let detail = format!("{samples} random triples, seed {seed:#x}");
    Ok(vec![
        Check::exact("graded_associativity", assoc).with_detail(detail.clone()),
        Check::exact("graded_commutativity", comm).with_detail(detail.clone()),
        Check::exact("graded_leibniz", leibniz).with_detail(detail),
    ])
}

/// Antisymmetry and Jacobi of a structure-constant table; violations are
/// listed in the detail.
pub fn lie_check(label: &str, g: &LieAlgebraData) -> Check {
    let report = g.validate();
    let c = Check::exact(format!("lie_valid[{label}]"), report.accepted());
    if report.accepted() {
        c
    } else {
        c.with_detail(report.to_string())
    }
}

/// The universal connection algebra: consistency of its tables, the
/// structure equation, augmentation of the Weil curvature, and equivariant
/// closedness of `Omega_G` and of `tr(Omega_G^m)`.
pub fn universal_suite(g: &LieAlgebraData, h: &LieAlgebraData, truncation: u32) -> Vec<Check> {
    let pair = format!("{},{}", g.name(), h.name());
    let name = |s: &str| format!("{s}[{pair}]");
    let u = match UniversalConnectionAlgebra::build(g.clone(), h.clone(), truncation) {
        Ok(u) => u,
        Err(e) => return vec![Check::failed(name("universal_consistency"), e)],
    };
    let mut out = vec![Check::exact(name("universal_consistency"), true)];
    let t = TensorWeilAlgebra::new(u.clone());
    out.push(match t.verify_structure_equation() {
        Ok(r) if r.passed => Check::exact(name("structure_equation"), true),
        Ok(r) => Check::failed(name("structure_equation"), r),
        Err(e) => Check::failed(name("structure_equation"), e),
    });
    out.push(match t.augmentation_matches() {
        Ok(ok) => Check::exact(name("augmentation_curvature"), ok),
        Err(e) => Check::failed(name("augmentation_curvature"), e),
    });
    let rep = MatrixRep::default_for(h);
    out.push(match u.verify_equivariant_closedness(rep.as_ref()) {
        Ok(r) => {
            let traces: Vec<String> = r.trace_checks.iter().map(|(m, ok)| format!("m={m}:{ok}")).collect();
            Check::exact(name("equivariant_closedness"), r.passed())
                .with_detail(format!("covariant {}; traces {}", r.covariant_closed, traces.join(" ")))
        }
        Err(e) => Check::failed(name("equivariant_closedness"), e),
    });
    out
}

/// `B_0..B_n` from `sum_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
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

fn x_gen(i: usize) -> GradedElement {
    Generator::h("x", 2, i).into()
}

/// `sum_k c_k (s x)^k` truncated at degree `top`.
fn series_in(coeffs: &PowerSeries, s: &Scalar, x: &GradedElement, top: u32) -> GradedElement {
    let mut out = GradedElement::zero();
    let mut p = GradedElement::one();
    let sx = x.scale(s);
    for k in 0..coeffs.order() {
        if 2 * k as u32 > top {
            break;
        }
        out += &p.scale(&Scalar::from_rational(coeffs.coeff(k)));
        p = p.mul_trunc(&sx, Some(top));
    }
    out
}

/// Exact series checks to degree `degree`:
/// log/exp round trips, `ch` on a diagonal matrix against `sum exp`,
/// additivity of `ch` and multiplicativity of A-hat on direct sums,
/// A-hat log coefficients against Bernoulli numbers, and A-hat on skew
/// blocks against the direct expansion of `(u/2)/sinh(u/2)`.
pub fn series_suite(degree: u32) -> Result<Vec<Check>, SeriesError> {
    let order = (degree / 2) as usize + 1;
    let mut out = Vec::new();

    let e = PowerSeries::exponential(order);
    let roundtrip = e.log()? == PowerSeries::variable(order) && PowerSeries::variable(order).exp()? == e;
    let f = PowerSeries::one(order).div(&PowerSeries::sinh_half_over_half(order))?;
    let roundtrip = roundtrip && f.log()?.exp()? == f;
    out.push(Check::exact("series_log_exp_roundtrip", roundtrip));

    let ch = CharSeries::chern_character(degree);
    let d = MatrixCurvature::from_rows(vec![
        vec![x_gen(0), GradedElement::zero()],
        vec![GradedElement::zero(), x_gen(1)],
    ]);
    let direct = &series_in(&e, ch.normalization(), &x_gen(0), degree) + &series_in(&e, ch.normalization(), &x_gen(1), degree);
    out.push(Check::exact("ch_direct_expansion", ch.apply(&d, degree)? == direct));
    let a = MatrixCurvature::scalar(x_gen(0));
    let b = MatrixCurvature::scalar(x_gen(1));
    out.push(Check::exact(
        "ch_additive",
        ch.apply(&a.direct_sum(&b), degree)? == &ch.apply(&a, degree)? + &ch.apply(&b, degree)?,
    ));

    let ah = CharSeries::a_hat(degree, crate::series::AHatConvention::TwoPi);
    let bern = bernoulli(degree as usize);
    let mut bern_ok = true;
    for (k, b) in bern.iter().enumerate().take(degree as usize / 2 + 1).skip(1) {
        let logc = ah.log_coefficients().get(&(k as u32)).cloned().unwrap_or_else(Scalar::zero);
        let expected = if k % 2 == 1 {
            Scalar::zero()
        } else {
            Scalar::from_rational(-b / (rat(k as i64, 1) * factorial(k as u32)))
        };
        bern_ok &= logc == expected;
    }
    out.push(Check::exact("a_hat_bernoulli", bern_ok));

    // skew block with entry x: eigenvalue variable u = i tau^-1 x
    let block = |i: usize| {
        MatrixCurvature::from_rows(vec![
            vec![GradedElement::zero(), -x_gen(i)],
            vec![x_gen(i), GradedElement::zero()],
        ])
    };
    let u_scale = &Scalar::i() * &Scalar::tau_pow(-1);
    let one_block = series_in(&f, &u_scale, &x_gen(0), degree);
    out.push(Check::exact("a_hat_direct_expansion", ah.apply(&block(0), degree)? == one_block));
    let two = block(0).direct_sum(&block(1));
    let product = one_block.mul_trunc(&series_in(&f, &u_scale, &x_gen(1), degree), Some(degree));
    out.push(Check::exact("a_hat_multiplicative", ah.apply(&two, degree)? == product));
    Ok(out)
}

/// Human-readable exact coefficients of a series.
pub fn series_table(series: &CharSeries) -> String {
    let mut s = format!("{series}\n");
    let f = series.function();
    for k in 0..f.order() {
        s.push_str(&format!("  f[{k}] = {}\n", Scalar::from_rational(f.coeff(k))));
    }
    for (k, c) in series.log_coefficients() {
        s.push_str(&format!("  log[{k}] = {c}\n"));
    }
    s
}

/// Monopole oracle checks: flux, transition, the three pointwise
/// identities, rotation-field brackets and the finite-difference order.
pub fn monopole_suite(charge: i64, n_theta: usize, n_phi: usize) -> Vec<Check> {
    let k = format!("k={charge}");
    let grid = match SphereGrid::new(n_theta, n_phi, Chart::North) {
        Ok(g) => g,
        Err(e) => return vec![Check::failed(format!("monopole_grid[{k}]"), e)],
    };
    let m = MonopoleScenario::new(charge, grid.clone());
    let mut out = Vec::new();
    let flux = integrate(&m.curvature(Chart::North), &grid).expect("two-form");
    let expected = Complex64::new(0.0, -2.0 * std::f64::consts::PI * charge as f64);
    let rel = if charge == 0 { flux.norm() } else { (flux - expected).norm() / expected.norm() };
    out.push(Check::within(format!("monopole_flux[{k}]"), rel, 1e-12));
    out.push(Check::within(format!("monopole_transition[{k}]"), m.transition_residual(), 1e-10));
    for id in Identity::ALL {
        let r = m.verify(id).expect("known identity");
        out.push(
            Check::within(format!("monopole_{}[{k}]", id.label()), r.max_residual, 1e-6)
                .with_detail(r.to_string()),
        );
    }
    let band = (std::f64::consts::PI / 6.0, 5.0 * std::f64::consts::PI / 6.0);
    out.push(Check::within(
        "rotation_bracket",
        commutator_residual(&SphereGrid::new(40, 32, Chart::North).expect("valid grid"), 1e-4, band),
        1e-6,
    ));
    out.push(fd_order_check(charge));
    out
}

/// Observed order of the closedness residual when `n_theta` doubles
/// (24 -> 48 -> 96); passes at 3.5 or better.
pub fn fd_order_check(charge: i64) -> Check {
    let name = format!("monopole_fd_order[k={charge}]");
    if charge == 0 {
        return Check::exact(name, true).with_detail("flat bundle: residuals vanish identically");
    }
    let r: Vec<f64> = [24, 48, 96]
        .iter()
        .map(|&n| {
            let g = SphereGrid::new(n, 16, Chart::North).expect("valid grid");
            MonopoleScenario::new(charge, g)
                .verify(Identity::EquivariantClosedness)
                .expect("known identity")
                .max_residual
        })
        .collect();
    let order = r.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
    Check {
        name,
        passed: order >= 3.5,
        residual: Residual::Value(order),
        detail: Some(format!(
            "residuals {}, observed order {order:.2}",
            r.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
        )),
    }
}

/// Dual-path moment checks on the monopole, one check per evaluation point.
pub fn anomaly_suite(
    charge: i64,
    n_theta: usize,
    n_phi: usize,
    series: &CharSeries,
    generators: &[usize],
    lambdas: &[Rational],
) -> (Vec<Check>, Option<CrossValidation>) {
    let prefix = format!("anomaly_{}", series.name());
    let grid = match SphereGrid::new(n_theta, n_phi, Chart::North) {
        Ok(g) => g,
        Err(e) => return (vec![Check::failed(format!("{prefix}[k={charge}]"), e)], None),
    };
    let m = MonopoleScenario::new(charge, grid);
    match cross_validate(&m, series, generators, lambdas) {
        Ok(cv) => {
            let mut out = vec![Check::exact(format!("{prefix}_omega_vanishes[k={charge}]"), cv.omega_vanishes)];
            for c in &cv.comparisons {
                out.push(Check {
                    name: format!("{prefix}_moment[k={charge},e{},lambda={}]", c.generator + 1, c.lambda),
                    passed: c.passed,
                    residual: Residual::Value(c.deviation),
                    detail: Some(format!("exact {}", c.exact)),
                });
            }
            (out, Some(cv))
        }
        Err(e) => (vec![Check::failed(format!("{prefix}[k={charge}]"), e)], None),
    }
}

/// A degree-`d` monomial count helper used by tests.
pub fn monomial_count(w: &WeilAlgebra, max: u32) -> usize {
    weil_monomials(w, max).iter().filter(|x| !x.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        // u1: theta^e chi^j, degree <= 4: 1, chi, chi^2, theta, theta chi
        let w = WeilAlgebra::new(LieAlgebraData::u1(), 4);
        assert_eq!(monomial_count(&w, 4), 5);
        let m = weil_monomials(&w, 4);
        assert!(m.iter().all(|x| x.max_degree().unwrap_or(0) <= 4));
    }

    #[test]
    fn suites_pass_on_builtins() {
        for g in [LieAlgebraData::u1(), LieAlgebraData::su2()] {
            for c in weil_suite(&g, 6).unwrap() {
                assert!(c.passed, "{c:?}");
            }
            assert!(augmentation_check(&g, 6).unwrap().passed);
        }
        for c in graded_suite(SEED, 10).unwrap() {
            assert!(c.passed, "{c:?}");
        }
        for c in series_suite(8).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn broken_table_fails_lie_check() {
        let mut g = LieAlgebraData::su2();
        g.set_f(0, 1, 2, Scalar::from_int(2));
        let c = lie_check("sym", &g);
        assert!(!c.passed);
        assert_eq!(c.machine_line(), "CHECK lie_valid[sym] FAIL exact");
        assert!(c.detail.unwrap().contains("antisymmetry"));
    }

    #[test]
    fn machine_lines() {
        assert_eq!(Check::within("x", 1.5e-9, 1e-6).machine_line(), "CHECK x PASS 1.500e-9");
    }
}

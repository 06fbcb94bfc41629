//! Finite-dimensional Lie algebras given by structure constants, with exact
//! validation and explicit matrix realizations.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("vector of length {found} given for algebra of dimension {dim}")]
    LengthMismatch { dim: usize, found: usize },
    #[error("unknown Lie algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("structure constant table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
}

/// Basis labels plus structure constants `f^c_{ab}` defined by
/// `[e_a, e_b] = f^c_{ab} e_c`.
#[derive(Clone, PartialEq)]
pub struct LieAlgebraData {
    name: String,
    dim: usize,
    basis_names: Vec<String>,
    // f[(a * dim + b) * dim + c] = f^c_{ab}
    f: Vec<Scalar>,
}

impl fmt::Debug for LieAlgebraData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebraData({}, dim {})", self.name, self.dim)
    }
}

fn epsilon(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

impl LieAlgebraData {
    /// Builds an algebra from a full `dim^3` table indexed as
    /// `table[(a*dim + b)*dim + c] = f^c_{ab}`. No validation is done here;
    /// see [`LieAlgebraData::validate`].
    pub fn from_table(name: &str, dim: usize, table: Vec<Scalar>) -> Result<Self, LieError> {
        if table.len() != dim * dim * dim {
            return Err(LieError::TableSize {
                expected: dim * dim * dim,
                found: table.len(),
            });
        }
        Ok(LieAlgebraData {
            name: name.to_string(),
            dim,
            basis_names: (1..=dim).map(|a| format!("e{a}")).collect(),
            f: table,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        let name = if dim == 1 { "u1".to_string() } else { format!("abelian({dim})") };
        Self::from_table(&name, dim, vec![Scalar::zero(); dim * dim * dim]).unwrap()
    }

    pub fn u1() -> Self {
        Self::abelian(1)
    }

    fn epsilon_algebra(name: &str) -> Self {
        let mut table = vec![Scalar::zero(); 27];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    table[(a * 3 + b) * 3 + c] = Scalar::from_int(epsilon(a, b, c));
                }
            }
        }
        Self::from_table(name, 3, table).unwrap()
    }

    /// `su(2)` with `f^c_{ab} = epsilon_{abc}`.
    pub fn su2() -> Self {
        Self::epsilon_algebra("su2")
    }

    /// `so(3)` in the basis of infinitesimal rotations, `f^c_{ab} = epsilon_{abc}`.
    pub fn so3() -> Self {
        Self::epsilon_algebra("so3")
    }

    /// `u(2)`: index 0 is the centre, indices 1..=3 span `su(2)`.
    pub fn u2() -> Self {
        let mut table = vec![Scalar::zero(); 64];
        for a in 1..4 {
            for b in 1..4 {
                for c in 1..4 {
                    table[(a * 4 + b) * 4 + c] = Scalar::from_int(epsilon(a - 1, b - 1, c - 1));
                }
            }
        }
        Self::from_table("u2", 4, table).unwrap()
    }

    /// Built-in algebra by name: `u1`, `su2`, `so3`, `u2`, `abelian(n)`.
    pub fn by_name(name: &str) -> Result<Self, LieError> {
        let name = name.trim();
        match name {
            "u1" => Ok(Self::u1()),
            "su2" => Ok(Self::su2()),
            "so3" => Ok(Self::so3()),
            "u2" => Ok(Self::u2()),
            "trivial" => Ok(Self::abelian(0)),
            _ => {
                if let Some(n) = name.strip_prefix("abelian(").and_then(|s| s.strip_suffix(')')) {
                    let n: usize = n.trim().parse().map_err(|_| LieError::UnknownAlgebra(name.into()))?;
                    Ok(Self::abelian(n))
                } else {
                    Err(LieError::UnknownAlgebra(name.into()))
                }
            }
        }
    }

    /// `g1 ⊕ g2`, with the basis of `g1` first.
    pub fn direct_sum(&self, other: &LieAlgebraData) -> Self {
        let n = self.dim + other.dim;
        let mut table = vec![Scalar::zero(); n * n * n];
        for a in 0..self.dim {
            for b in 0..self.dim {
                for c in 0..self.dim {
                    table[(a * n + b) * n + c] = self.f(a, b, c).clone();
                }
            }
        }
        let o = self.dim;
        for a in 0..other.dim {
            for b in 0..other.dim {
                for c in 0..other.dim {
                    table[((a + o) * n + b + o) * n + c + o] = other.f(a, b, c).clone();
                }
            }
        }
        let mut out = Self::from_table(&format!("{}+{}", self.name, other.name), n, table).unwrap();
        out.basis_names = self
            .basis_names
            .iter()
            .cloned()
            .chain(other.basis_names.iter().map(|s| format!("{s}'")))
            .collect();
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim);
        self.basis_names = names;
        self
    }

    /// `f^c_{ab}`.
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.f[(a * self.dim + b) * self.dim + c]
    }

    pub fn set_f(&mut self, a: usize, b: usize, c: usize, value: Scalar) {
        let d = self.dim;
        self.f[(a * d + b) * d + c] = value;
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(Scalar::is_zero)
    }

    /// Non-zero `(a, b, c, f^c_{ab})` entries in index order.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, &Scalar)> {
        let d = self.dim;
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = self.f(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v));
                    }
                }
            }
        }
        out
    }

    /// Exact check of antisymmetry and the Jacobi identity.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim;
        let mut antisymmetry = Vec::new();
        for a in 0..d {
            for b in a..d {
                for c in 0..d {
                    if !(self.f(a, b, c) + self.f(b, a, c)).is_zero() {
                        antisymmetry.push((a, b, c));
                    }
                }
            }
        }
        let mut jacobi = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    'outer: for g in 0..d {
                        let mut sum = Scalar::zero();
                        for c in 0..d {
                            sum += &(self.f(a, b, c) * self.f(c, e, g));
                            sum += &(self.f(b, e, c) * self.f(c, a, g));
                            sum += &(self.f(e, a, c) * self.f(c, b, g));
                        }
                        if !sum.is_zero() {
                            jacobi.push((a, b, e));
                            break 'outer;
                        }
                    }
                }
            }
        }
        ValidationReport {
            algebra: self.name.clone(),
            antisymmetry,
            jacobi,
        }
    }

    /// `[v, w]^c = f^c_{ab} v^a w^b`.
    pub fn bracket(&self, v: &[Scalar], w: &[Scalar]) -> Result<Vec<Scalar>, LieError> {
        for x in [v, w] {
            if x.len() != self.dim {
                return Err(LieError::LengthMismatch {
                    dim: self.dim,
                    found: x.len(),
                });
            }
        }
        let mut out = vec![Scalar::zero(); self.dim];
        for (a, b, c, f) in self.nonzero_constants() {
            out[c] += &(&(f * &v[a]) * &w[b]);
        }
        Ok(out)
    }

    /// Checks `[M_a, M_b] = f^c_{ab} M_c` exactly for all pairs.
    pub fn check_rep(&self, rep: &MatrixRep) -> RepReport {
        let mut report = RepReport {
            algebra: self.name.clone(),
            count_mismatch: None,
            violations: Vec::new(),
        };
        if rep.matrices.len() != self.dim {
            report.count_mismatch = Some((self.dim, rep.matrices.len()));
            return report;
        }
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                let lhs = rep.matrices[a].commutator(&rep.matrices[b]);
                let mut rhs = ScalarMatrix::zero(rep.dim_v);
                for c in 0..self.dim {
                    let f = self.f(a, b, c);
                    if !f.is_zero() {
                        rhs = rhs.add(&rep.matrices[c].scale(f));
                    }
                }
                if lhs != rhs {
                    report.violations.push((a, b));
                }
            }
        }
        report
    }
}

/// Outcome of [`LieAlgebraData::validate`]; indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub algebra: String,
    /// `(a, b, c)` with `f^c_{ab} + f^c_{ba} != 0`.
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// `(a, b, d)` triples whose cyclic Jacobi sum is non-zero.
    pub jacobi: Vec<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted() {
            return write!(f, "{}: antisymmetry and Jacobi hold", self.algebra);
        }
        write!(f, "{}:", self.algebra)?;
        for (a, b, c) in &self.antisymmetry {
            write!(f, " antisymmetry({},{};{})", a + 1, b + 1, c + 1)?;
        }
        for (a, b, d) in &self.jacobi {
            write!(f, " jacobi({},{},{})", a + 1, b + 1, d + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepReport {
    pub algebra: String,
    /// `(expected, found)` when the number of matrices is wrong.
    pub count_mismatch: Option<(usize, usize)>,
    /// Zero-based pairs `(a, b)` with `[M_a, M_b] != f^c_{ab} M_c`.
    pub violations: Vec<(usize, usize)>,
}

impl RepReport {
    pub fn accepted(&self) -> bool {
        self.count_mismatch.is_none() && self.violations.is_empty()
    }
}

/// Square matrix with exact (Gaussian-rational, possibly tau-graded) entries.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zero(n: usize) -> Self {
        ScalarMatrix {
            n,
            entries: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one();
        }
        m
    }

    /// Row-major construction. Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        ScalarMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        ScalarMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).scale(&Scalar::from_int(-1)))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(Scalar::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (self.get(i, j) + self.get(j, i)).is_zero()))
    }

    /// Inverse by Gauss-Jordan elimination. Entries must be plain Gaussian
    /// rationals (no mixed tau powers); `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(col * n + j, pivot * n + j);
                    inv.entries.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.get(col, col).inverse()?;
            for j in 0..n {
                a.entries[col * n + j] = a.get(col, j) * &p;
                inv.entries[col * n + j] = inv.get(col, j) * &p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = &factor * a.get(col, j);
                    let di = &factor * inv.get(col, j);
                    a.entries[r * n + j] = a.get(r, j) - &da;
                    inv.entries[r * n + j] = inv.get(r, j) - &di;
                }
            }
        }
        Some(inv)
    }
}

/// One matrix per basis element of a Lie algebra, acting on `C^dim_v`.
#[derive(Clone, PartialEq, Debug)]
pub struct MatrixRep {
    pub dim_v: usize,
    pub matrices: Vec<ScalarMatrix>,
}

fn s(text: &str) -> Scalar {
    text.parse().expect("valid scalar literal")
}

impl MatrixRep {
    pub fn new(matrices: Vec<ScalarMatrix>) -> Self {
        let dim_v = matrices.first().map_or(0, ScalarMatrix::size);
        MatrixRep { dim_v, matrices }
    }

    /// `u(1)` acting on `C` by `i`.
    pub fn u1() -> Self {
        Self::new(vec![ScalarMatrix::from_rows(vec![vec![Scalar::i()]])])
    }

    /// `u(1) = so(2)` acting on `R^2` by the rotation generator
    /// `[[0, -1], [1, 0]]` (antisymmetric, as the A-hat series requires).
    pub fn so2() -> Self {
        Self::new(vec![ScalarMatrix::from_rows(vec![
            vec![s("0"), s("-1")],
            vec![s("1"), s("0")],
        ])])
    }

    /// `M_a = -(i/2) sigma_a`.
    pub fn su2_fundamental() -> Self {
        Self::new(pauli_halves())
    }

    /// `(L_a)_{bc} = -epsilon_{abc}`.
    pub fn so3_vector() -> Self {
        let mats = (0..3)
            .map(|a| {
                let mut m = ScalarMatrix::zero(3);
                for b in 0..3 {
                    for c in 0..3 {
                        m.set(b, c, Scalar::from_int(-epsilon(a, b, c)));
                    }
                }
                m
            })
            .collect();
        Self::new(mats)
    }

    /// Defining representation of `u(2)`: `-(i/2) 1` then `-(i/2) sigma_a`.
    pub fn u2_fundamental() -> Self {
        let centre = ScalarMatrix::identity(2).scale(&s("-1/2*i"));
        let mut mats = vec![centre];
        mats.extend(pauli_halves());
        Self::new(mats)
    }

    /// Defining representation of a built-in algebra, if it has one.
    pub fn default_for(g: &LieAlgebraData) -> Option<Self> {
        match g.name() {
            "u1" => Some(Self::u1()),
            "su2" => Some(Self::su2_fundamental()),
            "so3" => Some(Self::so3_vector()),
            "u2" => Some(Self::u2_fundamental()),
            _ => None,
        }
    }

    /// Antisymmetric real representation of a built-in algebra, if any.
    pub fn orthogonal_for(g: &LieAlgebraData) -> Option<Self> {
        match g.name() {
            "u1" => Some(Self::so2()),
            "so3" => Some(Self::so3_vector()),
            _ => None,
        }
    }

    /// `P M_a P^-1` for every `a`.
    pub fn conjugate(&self, p: &ScalarMatrix) -> Option<Self> {
        let pinv = p.inverse()?;
        Some(Self::new(self.matrices.iter().map(|m| p.mul(m).mul(&pinv)).collect()))
    }
}

fn pauli_halves() -> Vec<ScalarMatrix> {
    let h = s("-1/2*i");
    let sx = ScalarMatrix::from_rows(vec![vec![s("0"), s("1")], vec![s("1"), s("0")]]);
    let sy = ScalarMatrix::from_rows(vec![vec![s("0"), s("-1*i")], vec![s("i"), s("0")]]);
    let sz = ScalarMatrix::from_rows(vec![vec![s("1"), s("0")], vec![s("0"), s("-1")]]);
    vec![sx.scale(&h), sy.scale(&h), sz.scale(&h)]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute-force Jacobi check on the bracket of basis vectors.
    fn jacobi_brute_force(g: &LieAlgebraData) -> bool {
        let d = g.dim();
        let basis = |a: usize| -> Vec<Scalar> {
            (0..d).map(|i| if i == a { Scalar::one() } else { Scalar::zero() }).collect()
        };
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let (x, y, z) = (basis(a), basis(b), basis(c));
                    let t1 = g.bracket(&x, &g.bracket(&y, &z).unwrap()).unwrap();
                    let t2 = g.bracket(&y, &g.bracket(&z, &x).unwrap()).unwrap();
                    let t3 = g.bracket(&z, &g.bracket(&x, &y).unwrap()).unwrap();
                    if (0..d).any(|i| !(&(&t1[i] + &t2[i]) + &t3[i]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn builtins_validate() {
        for g in [
            LieAlgebraData::abelian(3),
            LieAlgebraData::su2(),
            LieAlgebraData::so3(),
            LieAlgebraData::u2(),
            LieAlgebraData::su2().direct_sum(&LieAlgebraData::u1()),
        ] {
            assert!(g.validate().accepted(), "{}", g.validate());
            assert!(jacobi_brute_force(&g));
        }
    }

    #[test]
    fn perturbed_su2_is_rejected() {
        let mut g = LieAlgebraData::su2();
        g.set_f(0, 1, 2, Scalar::from_int(2));
        let report = g.validate();
        assert!(!report.accepted());
        assert_eq!(report.antisymmetry, vec![(0, 1, 2)]);
        assert!(!report.jacobi.is_empty());
        assert!(!jacobi_brute_force(&g));
        assert!(report.to_string().contains("antisymmetry(1,2;3)"));
    }

    #[test]
    fn brackets() {
        let g = LieAlgebraData::su2();
        let e = |a: usize| -> Vec<Scalar> {
            (0..3).map(|i| if i == a { Scalar::one() } else { Scalar::zero() }).collect()
        };
        assert_eq!(g.bracket(&e(0), &e(1)).unwrap(), e(2));
        let v = vec![s("1/2"), s("-3"), s("2*i")];
        assert!(g.bracket(&v, &v).unwrap().iter().all(Scalar::is_zero));
        let ab = LieAlgebraData::abelian(3);
        assert!(ab.bracket(&v, &e(1)).unwrap().iter().all(Scalar::is_zero));
        assert!(matches!(g.bracket(&v[..2], &v), Err(LieError::LengthMismatch { .. })));
    }

    #[test]
    fn representations() {
        assert!(LieAlgebraData::su2().check_rep(&MatrixRep::su2_fundamental()).accepted());
        assert!(LieAlgebraData::so3().check_rep(&MatrixRep::so3_vector()).accepted());
        assert!(LieAlgebraData::u2().check_rep(&MatrixRep::u2_fundamental()).accepted());
        assert!(LieAlgebraData::u1().check_rep(&MatrixRep::u1()).accepted());
        assert!(LieAlgebraData::u1().check_rep(&MatrixRep::so2()).accepted());
        let wrong = LieAlgebraData::abelian(3).check_rep(&MatrixRep::su2_fundamental());
        assert!(!wrong.accepted());
        assert_eq!(wrong.violations.len(), 3);
        let count = LieAlgebraData::su2().check_rep(&MatrixRep::u1());
        assert_eq!(count.count_mismatch, Some((3, 1)));
    }

    #[test]
    fn inverse_round_trip() {
        let p = ScalarMatrix::from_rows(vec![
            vec![s("2"), s("1/3")],
            vec![s("i"), s("-1")],
        ]);
        assert_eq!(p.mul(&p.inverse().unwrap()), ScalarMatrix::identity(2));
        let singular = ScalarMatrix::from_rows(vec![vec![s("1"), s("2")], vec![s("2"), s("4")]]);
        assert!(singular.inverse().is_none());
    }
}

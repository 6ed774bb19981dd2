//! ω-Lie algebras given by structure constants.
//!
//! An algebra is a basis, an antisymmetric tensor `c[i][j][k]` with
//! `[e_i, e_j] = sum_k c[i][j][k] e_k`, and a skew-symmetric form
//! `omega[i][j] = ω(e_i, e_j)`. The ω-Jacobi identity
//!
//! ```text
//! [[x,y],z] + [[y,z],x] + [[z,x],y] = ω(x,y) z + ω(y,z) x + ω(z,x) y
//! ```
//!
//! is checked by [`AlgebraSpec::validate`], never assumed.

use std::fmt;
use std::ops::Deref;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Raw algebra data. Use [`Algebra::new`] to obtain a validated algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSpec {
    basis: Vec<String>,
    c: Vec<Scalar>,
    omega: Vec<Scalar>,
}

impl AlgebraSpec {
    /// The algebra with zero bracket and zero form on the named basis.
    pub fn zero<S: Into<String>>(basis: impl IntoIterator<Item = S>) -> Self {
        let basis: Vec<String> = basis.into_iter().map(Into::into).collect();
        let n = basis.len();
        AlgebraSpec {
            basis,
            c: vec![Scalar::zero(); n * n * n],
            omega: vec![Scalar::zero(); n * n],
        }
    }

    /// Zero algebra on `e1, ..., en`.
    pub fn abelian(n: usize) -> Self {
        AlgebraSpec::zero((1..=n).map(|i| format!("e{i}")))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.c[(i * n + j) * n + k]
    }

    pub fn omega(&self, i: usize, j: usize) -> &Scalar {
        &self.omega[i * self.dim() + j]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        &self.c[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Sets `[e_i, e_j] = out` and `[e_j, e_i] = -out`.
    pub fn set_bracket(&mut self, i: usize, j: usize, out: Vec<Scalar>) {
        let n = self.dim();
        assert_eq!(out.len(), n, "bracket output has wrong length");
        for (k, v) in out.into_iter().enumerate() {
            self.c[(j * n + i) * n + k] = -&v;
            self.c[(i * n + j) * n + k] = v;
        }
    }

    /// Sets `ω(e_i, e_j) = v` and `ω(e_j, e_i) = -v`.
    pub fn set_omega(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.dim();
        self.omega[j * n + i] = -&v;
        self.omega[i * n + j] = v;
    }

    /// Overwrites one tensor entry without touching its mirror.
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim();
        self.c[(i * n + j) * n + k] = v;
    }

    /// Overwrites one form entry without touching its mirror.
    pub fn set_omega_entry(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.dim();
        self.omega[i * n + j] = v;
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let coeff = ui * vj;
                for (o, c) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                    if !c.is_zero() {
                        *o += &coeff * c;
                    }
                }
            }
        }
        out
    }

    pub fn omega_eval(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.omega_unchecked(u, v))
    }

    pub(crate) fn omega_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let w = self.omega(i, j);
                if !vj.is_zero() && !w.is_zero() {
                    acc += &(ui * vj) * w;
                }
            }
        }
        acc
    }

    /// Standard basis vector `e_i`.
    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        unit(self.dim(), i)
    }

    /// Checks bracket antisymmetry, skew-symmetry of ω, and the ω-Jacobi
    /// identity on all basis triples `i < j < k`.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut report = ValidationReport {
            basis: self.basis.clone(),
            antisymmetry: Vec::new(),
            skew: Vec::new(),
            jacobi: Vec::new(),
        };
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if !(self.c(i, j, k) + self.c(j, i, k)).is_zero() {
                        report.antisymmetry.push((i, j, k));
                    }
                }
                if !(self.omega(i, j) + self.omega(j, i)).is_zero() {
                    report.skew.push((i, j));
                }
            }
        }
        // Both sides are alternating trilinear once the two checks above
        // pass, so strictly increasing triples suffice.
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (lhs, rhs) = self.jacobi_sides(i, j, k);
                    if lhs != rhs {
                        report.jacobi.push(JacobiViolation {
                            triple: [i, j, k],
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        report
    }

    /// Both sides of the ω-Jacobi identity on `(e_i, e_j, e_k)`.
    pub fn jacobi_sides(&self, i: usize, j: usize, k: usize) -> (Vec<Scalar>, Vec<Scalar>) {
        let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
        let mut lhs = self.bracket_unchecked(self.bracket_basis(i, j), &ek);
        for (o, t) in lhs.iter_mut().zip(self.bracket_unchecked(self.bracket_basis(j, k), &ei)) {
            *o += t;
        }
        for (o, t) in lhs.iter_mut().zip(self.bracket_unchecked(self.bracket_basis(k, i), &ej)) {
            *o += t;
        }
        let mut rhs = vec![Scalar::zero(); self.dim()];
        rhs[k] += self.omega(i, j);
        rhs[i] += self.omega(j, k);
        rhs[j] += self.omega(k, i);
        (lhs, rhs)
    }

    /// The same algebra written in the basis `f_a = e_{perm[a]}`.
    pub fn permuted(&self, perm: &[usize]) -> AlgebraSpec {
        let n = self.dim();
        assert_eq!(perm.len(), n, "permutation length");
        let mut inverse = vec![usize::MAX; n];
        for (a, &p) in perm.iter().enumerate() {
            inverse[p] = a;
        }
        assert!(inverse.iter().all(|&x| x != usize::MAX), "not a permutation");
        let mut out = AlgebraSpec::zero(perm.iter().map(|&p| self.basis[p].clone()));
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    out.set_structure_constant(a, b, inverse[k], self.c(perm[a], perm[b], k).clone());
                }
                out.set_omega_entry(a, b, self.omega(perm[a], perm[b]).clone());
            }
        }
        out
    }

    /// Transports the algebra along an invertible change of basis whose
    /// columns are the new basis vectors in old coordinates.
    pub fn change_basis(&self, p: &Matrix) -> Option<AlgebraSpec> {
        let n = self.dim();
        let p_inv = p.inverse()?;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|a| p.column(a)).collect();
        let mut out = AlgebraSpec::zero((1..=n).map(|i| format!("f{i}")));
        for a in 0..n {
            for b in a + 1..n {
                let image = self.bracket_unchecked(&cols[a], &cols[b]);
                out.set_bracket(a, b, p_inv.mul_vec(&image));
                out.set_omega(a, b, self.omega_unchecked(&cols[a], &cols[b]));
            }
        }
        Some(out)
    }

    /// Same structure with renamed basis vectors.
    pub fn with_basis_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert_eq!(names.len(), self.dim());
        self.basis = names;
        self
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// One failed ω-Jacobi check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: [usize; 3],
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub basis: Vec<String>,
    /// `(i, j, k)` with `c[i][j][k] != -c[j][i][k]`, `i <= j`.
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// `(i, j)` with `omega[i][j] != -omega[j][i]`, `i <= j`.
    pub skew: Vec<(usize, usize)>,
    pub jacobi: Vec<JacobiViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry.is_empty() && self.skew.is_empty() && self.jacobi.is_empty()
    }
}

fn render_vector(v: &[Scalar], names: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| format!("{c}*{n}"))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.basis;
        if self.is_valid() {
            return writeln!(f, "valid: omega-Jacobi identity holds on all basis triples");
        }
        for &(i, j, k) in &self.antisymmetry {
            writeln!(f, "bracket not antisymmetric: [{}, {}] component {}", b[i], b[j], b[k])?;
        }
        for &(i, j) in &self.skew {
            writeln!(f, "omega not skew-symmetric on pair ({}, {})", b[i], b[j])?;
        }
        for v in &self.jacobi {
            let [i, j, k] = v.triple;
            writeln!(
                f,
                "omega-Jacobi fails on ({}, {}, {}): lhs = {}, rhs = {}",
                b[i],
                b[j],
                b[k],
                render_vector(&v.lhs, b),
                render_vector(&v.rhs, b)
            )?;
        }
        Ok(())
    }
}

/// An algebra whose defining identities have been checked, together with
/// its center and derived subalgebra.
#[derive(Clone, Debug)]
pub struct Algebra {
    spec: AlgebraSpec,
    center: Subspace,
    derived: Subspace,
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Algebra> {
        let report = spec.validate();
        if !report.is_valid() {
            return Err(Error::Invalid(Box::new(report)));
        }
        Ok(Algebra::assume_valid(spec))
    }

    /// Wraps a spec without running [`AlgebraSpec::validate`]. The derivation
    /// machinery only needs bilinearity, so this is how algebras that are
    /// known to violate the ω-Jacobi identity (such as doubled algebras with
    /// nonzero form) are analysed.
    pub fn assume_valid(spec: AlgebraSpec) -> Algebra {
        let center = center_of(&spec);
        let derived = derived_of(&spec);
        Algebra {
            spec,
            center,
            derived,
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    /// `{w : [w, e_j] = 0 for all j}`.
    pub fn center(&self) -> &Subspace {
        &self.center
    }

    /// `[L, L]`, the span of all `[e_i, e_j]`.
    pub fn derived(&self) -> &Subspace {
        &self.derived
    }
}

impl Deref for Algebra {
    type Target = AlgebraSpec;
    fn deref(&self) -> &AlgebraSpec {
        &self.spec
    }
}

fn center_of(spec: &AlgebraSpec) -> Subspace {
    let n = spec.dim();
    // unknown w_i; equation (j, k): sum_i w_i c[i][j][k] = 0
    let m = Matrix::from_fn(n * n, n, |row, i| {
        let (j, k) = (row / n, row % n);
        spec.c(i, j, k).clone()
    });
    m.nullspace()
}

fn derived_of(spec: &AlgebraSpec) -> Subspace {
    let n = spec.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(spec.bracket_basis(i, j).to_vec());
        }
    }
    Subspace::span(n, gens)
}

/// Center of a spec, computed without validation.
pub fn center(spec: &AlgebraSpec) -> Subspace {
    center_of(spec)
}

/// Derived subalgebra of a spec, computed without validation.
pub fn derived_subalgebra(spec: &AlgebraSpec) -> Subspace {
    derived_of(spec)
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn vector() -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), 3)
            .prop_map(|xs| xs.into_iter().map(|(n, d)| Scalar::ratio(n, d)).collect())
    }

    fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn scale(k: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|x| k * x).collect()
    }

    proptest! {
        #[test]
        fn bracket_bilinear_alternating(u in vector(), v in vector(), w in vector(), k in -4i64..4) {
            for spec in [catalog::l1(), catalog::l2()] {
                let k = Scalar::from_int(k);
                prop_assert!(spec.bracket(&u, &u).unwrap().iter().all(Zero::is_zero));
                let lhs = spec.bracket(&add(&scale(&k, &u), &v), &w).unwrap();
                let rhs = add(&scale(&k, &spec.bracket(&u, &w).unwrap()), &spec.bracket(&v, &w).unwrap());
                prop_assert_eq!(lhs, rhs);
                prop_assert!(spec.omega_eval(&u, &u).unwrap().is_zero());
                let lhs = spec.omega_eval(&u, &add(&v, &scale(&k, &w))).unwrap();
                let rhs = spec.omega_eval(&u, &v).unwrap() + &k * &spec.omega_eval(&u, &w).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn center_elements_commute(u in vector()) {
            for spec in [catalog::l1(), catalog::l2(), catalog::heisenberg()] {
                let alg = Algebra::new(spec).unwrap();
                for z in alg.center().basis() {
                    prop_assert!(alg.bracket(z, &u).unwrap().iter().all(Zero::is_zero));
                }
            }
        }

        #[test]
        fn derived_ignores_generator_order(seed in 0u64..1000) {
            let spec = catalog::l2();
            let mut gens: Vec<Vec<Scalar>> = vec![];
            for i in 0..3 { for j in i + 1..3 { gens.push(spec.bracket_basis(i, j).to_vec()); } }
            let r = (seed % 3) as usize;
            gens.rotate_left(r);
            if seed % 2 == 0 { gens.reverse(); }
            let alg = Algebra::new(spec).unwrap();
            prop_assert_eq!(&Subspace::span(3, gens), alg.derived());
        }
    }
}

//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::Zero;
use omegader::catalog::Catalog;
use omegader::linalg::Matrix;
use omegader::spaces::{ConstraintSystem, SpaceKind};
use omegader::{Algebra, AlgebraSpec, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixtures() -> Catalog {
    Catalog::new(fixture_dir())
}

/// Loads a catalog algebra, with `alpha` bound when given.
pub fn load(name: &str, alpha: Option<Scalar>) -> AlgebraSpec {
    let mut params = BTreeMap::new();
    if let Some(a) = alpha {
        params.insert("alpha".to_string(), a);
    }
    fixtures().resolve(name, &params).unwrap_or_else(|e| panic!("{name}: {e}")).spec
}

pub fn algebra(name: &str, alpha: Option<Scalar>) -> Algebra {
    Algebra::new(load(name, alpha)).unwrap()
}

/// Sample values of the parameter for each family.
pub fn alphas() -> [Scalar; 3] {
    [Scalar::ratio(1, 2), Scalar::from_int(2), Scalar::from_int(-3)]
}

/// `(label, spec)` for every parametrized fixture instance present.
pub fn fixture_instances() -> Vec<(String, AlgebraSpec)> {
    let present = fixtures().present_fixtures();
    let mut out = Vec::new();
    if present.contains(&"B") {
        out.push(("B".to_string(), load("B", None)));
    }
    for fam in ["A_alpha", "C_alpha"] {
        if present.contains(&fam) {
            for a in alphas() {
                out.push((format!("{fam} (alpha = {a})"), load(fam, Some(a))));
            }
        }
    }
    out
}

/// Oracle dimension of the `f`-block projection of a kind's solution space.
pub fn oracle_dim(alg: &Algebra, kind: SpaceKind) -> usize {
    let sys = ConstraintSystem::build(alg, kind);
    let n = alg.dim();
    oracle::projected_nullity(&sys.matrix.to_rows(), sys.matrix.cols(), n * n)
}

pub fn small_rational(r: &mut impl Rng) -> Scalar {
    let num = r.gen_range(-4..=4);
    let den = r.gen_range(1..=3);
    Scalar::ratio(num, den)
}

pub fn nonzero_rational(r: &mut impl Rng) -> Scalar {
    loop {
        let s = small_rational(r);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn small_gaussian(r: &mut impl Rng) -> Scalar {
    let re = small_rational(r);
    if r.gen_bool(0.3) {
        re + small_rational(r) * Scalar::i()
    } else {
        re
    }
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize, density: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        if r.gen_bool(density) {
            small_gaussian(r)
        } else {
            Scalar::zero()
        }
    })
}

/// A random unimodular integer matrix: a permutation followed by shears
/// `e_i += k e_j`. Keeps transformed structure constants small.
pub fn random_unimodular(r: &mut impl Rng, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    let mut m = Matrix::from_fn(n, n, |a, b| if perm[a] == b { Scalar::from_int(1) } else { Scalar::zero() });
    for _ in 0..n {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i == j {
            continue;
        }
        let k = Scalar::from_int(r.gen_range(-2..=2));
        let mut shear = Matrix::identity(n);
        shear[(i, j)] = k;
        m = m.mul(&shear);
    }
    m
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{}", i + 1)).collect()
}

/// `e_0` acting on the abelian ideal `span(e_1..)` by a random matrix.
pub fn semidirect(r: &mut impl Rng, n: usize) -> AlgebraSpec {
    let a = Matrix::from_fn(n - 1, n - 1, |_, _| {
        if r.gen_bool(0.5) {
            Scalar::from_int(r.gen_range(-2..=2))
        } else {
            Scalar::zero()
        }
    });
    let mut s = AlgebraSpec::zero(names(n));
    for j in 1..n {
        let mut out = vec![Scalar::zero(); n];
        for k in 1..n {
            out[k] = a[(k - 1, j - 1)].clone();
        }
        s.set_bracket(0, j, out);
    }
    s
}

pub fn direct_sum(a: &AlgebraSpec, b: &AlgebraSpec) -> AlgebraSpec {
    let (n, m) = (a.dim(), b.dim());
    let mut s = AlgebraSpec::zero(names(n + m));
    for i in 0..n + m {
        for j in i + 1..n + m {
            let mut out = vec![Scalar::zero(); n + m];
            if j < n {
                out[..n].clone_from_slice(a.bracket_basis(i, j));
            } else if i >= n {
                out[n..].clone_from_slice(b.bracket_basis(i - n, j - n));
            } else {
                continue;
            }
            s.set_bracket(i, j, out);
        }
    }
    s
}

/// A random Lie algebra (`ω = 0`) of dimension `n` in `2..=6`, presented in
/// a random basis.
pub fn random_lie(r: &mut impl Rng, n: usize) -> AlgebraSpec {
    let base = match r.gen_range(0..4) {
        0 => semidirect(r, n),
        1 if n >= 3 => direct_sum(&omegader::catalog::sl2(), &AlgebraSpec::abelian(n - 3)),
        2 if n >= 3 => {
            let rest = if n > 3 { semidirect(r, n - 3) } else { AlgebraSpec::abelian(0) };
            direct_sum(&omegader::catalog::heisenberg(), &rest)
        }
        _ if n >= 4 => {
            let k = r.gen_range(2..=n - 2);
            direct_sum(&semidirect(r, k), &semidirect(r, n - k))
        }
        _ => semidirect(r, n),
    };
    let p = random_unimodular(r, n);
    base.change_basis(&p).expect("invertible change of basis")
}

/// Replaces one upper entry of `c` (with its mirror) or `ω` by a different
/// value. Returns a description of the change.
pub fn perturb(r: &mut impl Rng, spec: &AlgebraSpec) -> (AlgebraSpec, String) {
    let n = spec.dim();
    let mut s = spec.clone();
    let i = r.gen_range(0..n - 1);
    let j = r.gen_range(i + 1..n);
    let delta = nonzero_rational(r);
    if r.gen_bool(0.7) {
        let k = r.gen_range(0..n);
        let v = spec.c(i, j, k) + &delta;
        s.set_structure_constant(i, j, k, v.clone());
        s.set_structure_constant(j, i, k, -v.clone());
        (s, format!("c[{i}][{j}][{k}] := {v}"))
    } else {
        let v = spec.omega(i, j) + &delta;
        s.set_omega_entry(i, j, v.clone());
        s.set_omega_entry(j, i, -v.clone());
        (s, format!("omega[{i}][{j}] := {v}"))
    }
}

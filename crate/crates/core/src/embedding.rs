//! The doubled algebra `L~ = L·t ⊕ L·t²` and the embedding `δ_U` of
//! quasiderivations of `L` as derivations of `L~`.
//!
//! Slots `0..n` of `L~` hold `e_i·t`, slots `n..2n` hold `e_i·t²`. The only
//! nonzero products are `[e_i·t, e_s·t] = [e_i, e_s]·t²`, and the form pairs
//! only `t`-slots: `ω~(e_i·t, e_s·t) = ω(e_i, e_s)`.
//!
//! For a quasiderivation pair `(f, f')` and a complement `U` of `[L,L]`,
//! `δ_U(f)` sends `a·t + b·t² + u·t²` to `f(a)·t + f'(b)·t²` for `b` in
//! `[L,L]` and `u` in `U`. It reads `f'` only on `[L,L]`, where `f'` is
//! determined by `f`.

use num_traits::Zero;

use crate::algebra::{Algebra, AlgebraSpec, ValidationReport};
use crate::error::{Error, Result};
use crate::linalg::{LinMap, Matrix, Subspace};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::spaces::{canonical_f_prime, is_compatible, is_derivation, DerSpace, QDerPair, SpaceKind};

#[derive(Clone, Debug)]
pub struct DoubledAlgebra {
    base: Algebra,
    doubled: Algebra,
    complement: Subspace,
    /// Projection onto `[L,L]` along `U`.
    projector: Matrix,
}

/// Builds `L~` with the greedy complement of `[L,L]`.
pub fn build_doubled(alg: &Algebra) -> DoubledAlgebra {
    let u = alg.derived().complement();
    build_doubled_with_complement(alg, u).expect("greedy complement is a complement")
}

/// Builds `L~` with a caller-chosen complement `U` of `[L,L]`.
pub fn build_doubled_with_complement(alg: &Algebra, complement: Subspace) -> Result<DoubledAlgebra> {
    let n = alg.dim();
    let derived = alg.derived();
    if complement.ambient() != n {
        return Err(Error::AmbientMismatch {
            left: n,
            right: complement.ambient(),
        });
    }
    if derived.dim() + complement.dim() != n || !derived.intersect(&complement)?.is_zero() {
        return Err(Error::NotComplement(format!(
            "dim [L,L] = {}, dim U = {}, n = {n}",
            derived.dim(),
            complement.dim()
        )));
    }
    // columns: basis of [L,L], then basis of U
    let columns: Vec<Vec<Scalar>> = derived.basis().iter().chain(complement.basis()).cloned().collect();
    let basis = Matrix::from_columns(n, &columns);
    let inverse = basis.inverse().expect("direct sum basis is invertible");
    let keep = Matrix::from_fn(n, n, |r, c| {
        if r == c && r < derived.dim() {
            Scalar::from_int(1)
        } else {
            Scalar::zero()
        }
    });
    let projector = basis.mul(&keep).mul(&inverse);

    Ok(DoubledAlgebra {
        base: alg.clone(),
        doubled: Algebra::assume_valid(double_spec(alg)),
        complement,
        projector,
    })
}

fn double_spec(alg: &AlgebraSpec) -> AlgebraSpec {
    let n = alg.dim();
    let names = alg
        .basis_names()
        .iter()
        .map(|b| format!("{b}*t"))
        .chain(alg.basis_names().iter().map(|b| format!("{b}*t^2")));
    let mut d = AlgebraSpec::zero(names);
    for i in 0..n {
        for s in i + 1..n {
            let br = alg.bracket_basis(i, s);
            if br.iter().any(|x| !x.is_zero()) {
                let mut out = vec![Scalar::zero(); 2 * n];
                out[n..].clone_from_slice(br);
                d.set_bracket(i, s, out);
            }
            let w = alg.omega(i, s);
            if !w.is_zero() {
                d.set_omega(i, s, w.clone());
            }
        }
    }
    d
}

impl DoubledAlgebra {
    pub fn base(&self) -> &Algebra {
        &self.base
    }

    /// The `2n`-dimensional spec.
    pub fn doubled(&self) -> &Algebra {
        &self.doubled
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    /// Result of checking the defining identities on `L~`.
    pub fn validate(&self) -> ValidationReport {
        self.doubled.spec().validate()
    }

    /// `δ_U(f)` as a `2n x 2n` matrix.
    pub fn delta_u(&self, pair: &QDerPair) -> Result<LinMap> {
        let n = self.base.dim();
        for m in [&pair.f, &pair.f_prime] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.rows(),
                });
            }
        }
        if !pair.is_valid(&self.base) {
            return Err(Error::InvalidPair(
                "[f(x),y] + [x,f(y)] = f'([x,y]) fails on a basis pair".into(),
            ));
        }
        let lower = pair.f_prime.mul(&self.projector);
        Ok(Matrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
            (true, true) => pair.f[(r, c)].clone(),
            (false, false) => lower[(r - n, c - n)].clone(),
            _ => Scalar::zero(),
        }))
    }

    /// `δ_U(f)` with the canonical associated map.
    pub fn delta_u_of(&self, f: &LinMap) -> Result<LinMap> {
        self.delta_u(&canonical_f_prime(&self.base, f)?)
    }
}

/// A complement of `[L,L]` different from the greedy one whenever `[L,L]`
/// is a proper nonzero subspace: each greedy vector is shifted by the first
/// basis vector of `[L,L]`.
pub fn shifted_complement(alg: &Algebra) -> Subspace {
    let n = alg.dim();
    let greedy = alg.derived().complement();
    match alg.derived().basis().first() {
        None => greedy,
        Some(w) => Subspace::span(
            n,
            greedy
                .basis()
                .iter()
                .map(|u| u.iter().zip(w).map(|(a, b)| a + b).collect::<Vec<_>>()),
        ),
    }
}

fn pairs_for(alg: &Algebra, space: &DerSpace) -> Result<Vec<QDerPair>> {
    space.f_basis().iter().map(|f| canonical_f_prime(alg, f)).collect()
}

/// Each `δ_U(f)` for `f` in a `qder` basis is a derivation of `L~`, and it
/// is compatible exactly when `f` is.
pub fn verify_derivation_embedding(d: &DoubledAlgebra) -> Report {
    let alg = d.base();
    let mut r = Report::new("δ_U images are derivations");
    let mut pairs = Vec::new();
    for kind in [SpaceKind::Qder, SpaceKind::QderC] {
        match pairs_for(alg, &DerSpace::compute(alg, kind)) {
            Ok(p) => pairs.extend(p),
            Err(e) => {
                r.fail("associated maps exist", e.to_string());
                return r;
            }
        }
    }
    let mut derivation = Ok(());
    let mut equivalence = Ok(());
    let (mut compatible, mut incompatible) = (0, 0);
    for (a, p) in pairs.iter().enumerate() {
        let delta = match d.delta_u(p) {
            Ok(m) => m,
            Err(e) => {
                derivation = Err(format!("pair {a}: {e}"));
                break;
            }
        };
        if derivation.is_ok() && !is_derivation(d.doubled(), &delta) {
            derivation = Err(format!("δ_U of pair {a} is not a derivation: {delta:?}"));
        }
        let base_c = is_compatible(alg, &p.f);
        if base_c {
            compatible += 1;
        } else {
            incompatible += 1;
        }
        if equivalence.is_ok() && base_c != is_compatible(d.doubled(), &delta) {
            equivalence = Err(format!(
                "pair {a}: f compatible = {base_c}, δ_U(f) compatible = {}",
                !base_c
            ));
        }
    }
    r.record("derivation identity on all basis pairs of L~", derivation);
    r.record("f compatible iff δ_U(f) compatible", equivalence);
    let witnesses = format!("{compatible} compatible and {incompatible} incompatible witnesses");
    if compatible > 0 && incompatible > 0 {
        r.pass(format!("both directions exercised ({witnesses})"));
    } else {
        r.not_applicable("both directions exercised", witnesses);
    }
    r.check("zero pair maps to a compatible zero map", {
        let z = d.delta_u(&QDerPair::zero(alg.dim()));
        matches!(z, Ok(m) if m.is_zero() && is_compatible(d.doubled(), &m))
    }, || "δ_U(0) is not the zero map".into());
    r
}

fn flat(m: &Matrix) -> Vec<Scalar> {
    m.row_major().to_vec()
}

/// `δ_U` is linear, injective on `qder`, and preserves brackets.
pub fn verify_homomorphism(d: &DoubledAlgebra) -> Report {
    let alg = d.base();
    let mut r = Report::new("δ_U is an injective homomorphism");
    let space = DerSpace::compute(alg, SpaceKind::Qder);
    let pairs = match pairs_for(alg, &space) {
        Ok(p) => p,
        Err(e) => {
            r.fail("associated maps exist", e.to_string());
            return r;
        }
    };
    let deltas: Vec<LinMap> = match pairs.iter().map(|p| d.delta_u(p)).collect::<Result<_>>() {
        Ok(v) => v,
        Err(e) => {
            r.fail("δ_U defined on the basis", e.to_string());
            return r;
        }
    };

    let c = Scalar::ratio(3, 2) + Scalar::i();
    let mut linear = Ok(());
    'lin: for (a, p) in pairs.iter().enumerate() {
        for (b, s) in pairs.iter().enumerate() {
            let combo = QDerPair {
                f: p.f.scale(&c).add(&s.f),
                f_prime: p.f_prime.scale(&c).add(&s.f_prime),
            };
            let expected = deltas[a].scale(&c).add(&deltas[b]);
            if !matches!(d.delta_u(&combo), Ok(m) if m == expected) {
                linear = Err(format!("δ_U(c f{a} + f{b}) differs from c δ_U(f{a}) + δ_U(f{b})"));
                break 'lin;
            }
        }
    }
    r.record("linear", linear);

    let images = Subspace::span(4 * alg.dim() * alg.dim(), deltas.iter().map(flat));
    r.check("injective on qder", images.dim() == space.dim(), || {
        format!("rank {} against dim qder {}", images.dim(), space.dim())
    });
    r.check(
        "t-slot block of δ_U(f) reproduces f",
        pairs.iter().zip(&deltas).all(|(p, m)| {
            let n = alg.dim();
            (0..n).all(|i| (0..n).all(|j| m[(i, j)] == p.f[(i, j)]))
        }),
        || "a t-slot block differs from f".into(),
    );

    let mut hom = Ok(());
    'hom: for (a, p) in pairs.iter().enumerate() {
        for (b, s) in pairs.iter().enumerate() {
            let lhs = d.delta_u(&p.commutator(s));
            let rhs = deltas[a].commutator(&deltas[b]);
            if !matches!(&lhs, Ok(m) if *m == rhs) {
                hom = Err(format!("δ_U([f{a}, f{b}]) differs from [δ_U(f{a}), δ_U(f{b})]"));
                break 'hom;
            }
        }
    }
    r.record("δ_U([f,g]) = [δ_U(f), δ_U(g)]", hom);
    r
}

/// Dimensions from a semidirect decomposition check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionDims {
    pub der_c: usize,
    pub image: usize,
    pub zder: usize,
}

/// With `c(L) = 0`, `der_c(L~) = δ_U(qder_c(L)) ⊕ zder(L~)` with `zder(L~)` an
/// ideal of compatible maps.
pub fn verify_semidirect(d: &DoubledAlgebra) -> (Report, Option<DecompositionDims>) {
    let alg = d.base();
    let mut r = Report::new("semidirect decomposition of der_c(L~)");
    if !alg.center().is_zero() {
        r.not_applicable(
            "der_c(L~) = δ_U(qder_c(L)) ⊕ zder(L~)",
            format!("center of L has dimension {}", alg.center().dim()),
        );
        return (r, None);
    }
    r.pass("c(L) = 0");
    let m = 2 * alg.dim();
    let der_c = DerSpace::compute(d.doubled(), SpaceKind::DerC);
    let zder = DerSpace::compute(d.doubled(), SpaceKind::Zder);
    let qder_c = DerSpace::compute(alg, SpaceKind::QderC);
    let deltas: Vec<Vec<Scalar>> = match qder_c
        .f_basis()
        .iter()
        .map(|f| d.delta_u_of(f).map(|x| flat(&x)))
        .collect::<Result<_>>()
    {
        Ok(v) => v,
        Err(e) => {
            r.fail("δ_U defined on qder_c", e.to_string());
            return (r, None);
        }
    };
    let image = Subspace::span(m * m, deltas);
    let z = &zder.f_space;
    let meet = image.intersect(z).expect("same ambient");
    r.check("δ_U(qder_c(L)) ∩ zder(L~) = 0", meet.is_zero(), || {
        format!("intersection has dimension {}", meet.dim())
    });
    let sum = image.sum(z).expect("same ambient");
    r.check("δ_U(qder_c(L)) + zder(L~) = der_c(L~)", sum == der_c.f_space, || {
        format!("sum has dimension {}, der_c(L~) has dimension {}", sum.dim(), der_c.dim())
    });
    let mut ideal = Ok(());
    'ideal: for (a, b) in der_c.f_basis().iter().enumerate() {
        for (c, zb) in zder.f_basis().iter().enumerate() {
            if !z.contains_vector(b.commutator(zb).row_major()) {
                ideal = Err(format!("[der_c basis {a}, zder basis {c}] leaves zder(L~)"));
                break 'ideal;
            }
        }
    }
    r.record("[der_c(L~), zder(L~)] ⊆ zder(L~)", ideal);
    r.check(
        "zder(L~) consists of compatible maps",
        zder.f_basis().iter().all(|f| is_compatible(d.doubled(), f)),
        || "a zder(L~) basis element is not compatible".into(),
    );
    let dims = DecompositionDims {
        der_c: der_c.dim(),
        image: image.dim(),
        zder: zder.dim(),
    };
    r.check(
        "dim der_c(L~) = dim qder_c(L) + dim zder(L~)",
        dims.der_c == qder_c.dim() + dims.zder,
        || format!("{} against {} + {}", dims.der_c, qder_c.dim(), dims.zder),
    );
    (r, Some(dims))
}

/// All embedding reports for one algebra, with the greedy complement and
/// again with a shifted one when that differs.
pub fn embedding_suite(alg: &Algebra) -> Vec<Report> {
    let mut out = Vec::new();
    let greedy = build_doubled(alg);
    out.push(verify_derivation_embedding(&greedy));
    out.push(verify_homomorphism(&greedy));
    out.push(verify_semidirect(&greedy).0);
    let shifted = shifted_complement(alg);
    if &shifted != greedy.complement() {
        let d = build_doubled_with_complement(alg, shifted).expect("shifted complement");
        let mut r = verify_semidirect(&d).0;
        r.title = format!("{} (second complement)", r.title);
        out.push(r);
    }
    out
}

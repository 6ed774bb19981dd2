//! Structural properties of the computed spaces, checked on exact bases.

use num_traits::One;

use crate::algebra::Algebra;
use crate::linalg::{LinMap, Matrix, Subspace};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::spaces::{canonical_f_prime, is_compatible, BlockRole, DerSpace, QDerPair, SpaceKind};

/// All eleven spaces of one algebra.
#[derive(Clone, Debug)]
pub struct SpaceTable {
    spaces: Vec<DerSpace>,
}

impl SpaceTable {
    pub fn compute(alg: &Algebra) -> Self {
        SpaceTable {
            spaces: SpaceKind::ALL.iter().map(|&k| DerSpace::compute(alg, k)).collect(),
        }
    }

    pub fn get(&self, kind: SpaceKind) -> &DerSpace {
        let i = SpaceKind::ALL.iter().position(|&k| k == kind).expect("kind listed");
        &self.spaces[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DerSpace> {
        self.spaces.iter()
    }
}

fn to_map(n: usize, v: &[Scalar]) -> LinMap {
    Matrix::from_row_major(n, v)
}

/// Index of the first basis vector of `small` outside `big`.
fn first_outside(big: &Subspace, small: &Subspace) -> Option<usize> {
    small.basis().iter().position(|v| !big.contains_vector(v))
}

fn containment(report: &mut Report, n: usize, big: &DerSpace, small: &DerSpace) {
    let name = format!("{} ⊆ {}", small.kind, big.kind);
    match first_outside(&big.f_space, &small.f_space) {
        None => report.pass(name),
        Some(i) => report.fail(
            name,
            format!("basis element {i} {:?} lies outside", to_map(n, &small.f_space.basis()[i])),
        ),
    }
}

/// `[S, T] ⊆ target` on basis elements, reporting the first witness.
fn bracket_within(n: usize, s: &Subspace, t: &Subspace, target: &Subspace) -> Result<(), String> {
    for (a, u) in s.basis().iter().enumerate() {
        for (b, v) in t.basis().iter().enumerate() {
            let c = to_map(n, u).commutator(&to_map(n, v));
            if !target.contains_vector(c.row_major()) {
                return Err(format!("commutator of basis elements {a} and {b} is {c:?}"));
            }
        }
    }
    Ok(())
}

/// Chains `der_c ⊆ qder_c ⊆ gder_c ⊆ gder`, `der ⊆ qder ⊆ gder` and
/// `cent ⊆ qcent`, `cent_c ⊆ qcent_c`.
pub fn check_tower(alg: &Algebra) -> Report {
    check_tower_with(alg, &SpaceTable::compute(alg))
}

pub fn check_tower_with(alg: &Algebra, table: &SpaceTable) -> Report {
    use SpaceKind::*;
    let mut r = Report::new("tower");
    for (small, big) in [
        (DerC, QderC),
        (QderC, GderC),
        (GderC, Gder),
        (Der, Qder),
        (Qder, Gder),
        (Cent, Qcent),
        (CentC, QcentC),
    ] {
        containment(&mut r, alg.dim(), table.get(big), table.get(small));
    }
    r
}

/// Commutators of basis elements stay in the space; for compatible kinds
/// they are also compatible.
pub fn check_lie_closure(alg: &Algebra, space: &DerSpace) -> Report {
    let mut r = Report::new(format!("Lie closure of {}", space.kind));
    let basis = space.f_basis();
    let mut closed = Ok(());
    let mut compatible = Ok(());
    'outer: for (a, f) in basis.iter().enumerate() {
        for (b, g) in basis.iter().enumerate().skip(a + 1) {
            let c = f.commutator(g);
            if !space.f_space.contains_vector(c.row_major()) {
                closed = Err(format!("[{a}, {b}] = {c:?} leaves the space"));
                break 'outer;
            }
            if space.kind.compatible() && compatible.is_ok() && !is_compatible(alg, &c) {
                compatible = Err(format!("[{a}, {b}] = {c:?} is not compatible"));
            }
        }
    }
    r.record("closed under commutator", closed);
    if space.kind.compatible() {
        r.record("commutators compatible", compatible);
    }
    r
}

/// Closure for `gder`, `gder_c`, `qder`, `qder_c`, `der` and `der_c`.
pub fn check_lie_closure_all(alg: &Algebra, table: &SpaceTable) -> Report {
    use SpaceKind::*;
    let mut r = Report::new("Lie closure");
    for kind in [Der, DerC, Gder, GderC, Qder, QderC] {
        r.absorb(check_lie_closure(alg, table.get(kind)));
    }
    r
}

fn on_derived(alg: &Algebra, m: &LinMap) -> Vec<Vec<Scalar>> {
    alg.derived().basis().iter().map(|v| m.mul_vec(v)).collect()
}

/// Associated-map identities on a `qder` basis: `[f',g']` associates
/// `[f,g]`, and `f -> f'` is linear on `[L,L]`, where `f'` is determined.
pub fn check_associate_bracket(alg: &Algebra) -> Report {
    let q = DerSpace::compute(alg, SpaceKind::Qder);
    check_associate_bracket_with(alg, &q)
}

pub fn check_associate_bracket_with(alg: &Algebra, q: &DerSpace) -> Report {
    let n = alg.dim();
    let mut r = Report::new("associated maps");
    let pairs: Vec<QDerPair> = match q
        .f_basis()
        .iter()
        .map(|f| canonical_f_prime(alg, f))
        .collect::<crate::error::Result<_>>()
    {
        Ok(p) => p,
        Err(e) => {
            r.fail("canonical associated maps exist", e.to_string());
            return r;
        }
    };
    r.pass("canonical associated maps exist");

    let mut bracket = Ok(());
    'outer: for (a, p) in pairs.iter().enumerate() {
        for (b, s) in pairs.iter().enumerate() {
            if !p.commutator(s).is_valid(alg) {
                bracket = Err(format!("([f{a},f{b}], [f{a}',f{b}']) violates the identity"));
                break 'outer;
            }
        }
    }
    r.record("[f',g'] associates [f,g]", bracket);

    let zero = QDerPair::zero(n);
    r.check(
        "[f',0] associates [f,0]",
        pairs.iter().all(|p| p.commutator(&zero).is_valid(alg)),
        || "a commutator with the zero pair fails".into(),
    );

    let scalars = [Scalar::from_int(2), Scalar::ratio(-1, 3), Scalar::one() + Scalar::i()];
    let mut homogeneous = Ok(());
    for (a, p) in pairs.iter().enumerate() {
        for c in &scalars {
            match canonical_f_prime(alg, &p.f.scale(c)) {
                Ok(cp) if on_derived(alg, &cp.f_prime) == on_derived(alg, &p.f_prime.scale(c)) => {}
                Ok(_) => homogeneous = Err(format!("(c f{a})' differs from c f{a}' for c = {c}")),
                Err(e) => homogeneous = Err(format!("c f{a} for c = {c}: {e}")),
            }
        }
    }
    r.record("(c f)' = c f' on [L,L]", homogeneous);

    let mut additive = Ok(());
    'add: for (a, p) in pairs.iter().enumerate() {
        for (b, s) in pairs.iter().enumerate().skip(a) {
            let sum = canonical_f_prime(alg, &p.f.add(&s.f));
            let expected = on_derived(alg, &p.f_prime.add(&s.f_prime));
            if !matches!(&sum, Ok(x) if on_derived(alg, &x.f_prime) == expected) {
                additive = Err(format!("(f{a} + f{b})' differs from f{a}' + f{b}'"));
                break 'add;
            }
        }
    }
    r.record("(f+g)' = f'+g' on [L,L]", additive);

    // every associate in the solved pair space agrees with the canonical
    // one on [L,L]
    let mut determined = Ok(());
    for (a, v) in q.pair_space.basis().iter().enumerate() {
        let f = q.layout.map(BlockRole::F, v).expect("f block");
        let fp = q.layout.map(BlockRole::FPrime, v).expect("f' block");
        match canonical_f_prime(alg, &f) {
            Ok(c) if on_derived(alg, &c.f_prime) == on_derived(alg, &fp) => {}
            _ => {
                determined = Err(format!("pair-space basis element {a} has a different f' on [L,L]"));
                break;
            }
        }
    }
    r.record("f' determined on [L,L]", determined);
    r
}

/// When `qder_c = qder` or `qcent_c = qcent`, `gder_c = qder_c + qcent_c`.
pub fn check_compatible_decomposition(alg: &Algebra) -> Report {
    check_compatible_decomposition_with(&SpaceTable::compute(alg))
}

pub fn check_compatible_decomposition_with(table: &SpaceTable) -> Report {
    use SpaceKind::*;
    let mut r = Report::new("compatible decomposition");
    let f = |k| &table.get(k).f_space;
    let q_eq = f(QderC) == f(Qder);
    let c_eq = f(QcentC) == f(Qcent);
    let sum = f(QderC).sum(f(QcentC)).expect("same ambient");
    let holds = &sum == f(GderC);
    if q_eq || c_eq {
        let which = if q_eq { "qder_c = qder" } else { "qcent_c = qcent" };
        r.pass(format!("hypothesis holds ({which})"));
        r.check("gder_c = qder_c + qcent_c", holds, || {
            format!("dim of sum {} against dim gder_c {}", sum.dim(), f(GderC).dim())
        });
    } else {
        r.not_applicable(
            "gder_c = qder_c + qcent_c",
            format!(
                "hypothesis not satisfied: dim qder_c {} < dim qder {}, dim qcent_c {} < dim qcent {} (sum equality {})",
                f(QderC).dim(),
                f(Qder).dim(),
                f(QcentC).dim(),
                f(Qcent).dim(),
                if holds { "holds anyway" } else { "fails" }
            ),
        );
    }
    r
}

/// `[der_c, cent_c] ⊆ cent_c`, `[qder_c, qcent_c] ⊆ qcent_c`,
/// `cent_c ⊆ qcent_c` and `[qcent_c, qcent_c] ⊆ qder_c`.
pub fn check_bracket_containments(alg: &Algebra) -> Report {
    check_bracket_containments_with(alg.dim(), &SpaceTable::compute(alg))
}

pub fn check_bracket_containments_with(n: usize, table: &SpaceTable) -> Report {
    use SpaceKind::*;
    let mut r = Report::new("bracket containments");
    let f = |k| &table.get(k).f_space;
    r.record("[der_c, cent_c] ⊆ cent_c", bracket_within(n, f(DerC), f(CentC), f(CentC)));
    r.record("[qder_c, qcent_c] ⊆ qcent_c", bracket_within(n, f(QderC), f(QcentC), f(QcentC)));
    r.check("cent_c ⊆ qcent_c", first_outside(f(QcentC), f(CentC)).is_none(), || {
        "a cent_c basis element is not in qcent_c".into()
    });
    r.record("[qcent_c, qcent_c] ⊆ qder_c", bracket_within(n, f(QcentC), f(QcentC), f(QderC)));
    r
}

/// Every structural check on one algebra.
pub fn structural_suite(alg: &Algebra) -> Vec<Report> {
    let table = SpaceTable::compute(alg);
    vec![
        check_tower_with(alg, &table),
        check_lie_closure_all(alg, &table),
        check_associate_bracket_with(alg, table.get(SpaceKind::Qder)),
        check_bracket_containments_with(alg.dim(), &table),
        check_compatible_decomposition_with(&table),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::catalog;
    use crate::report::Outcome;

    fn all_builtins() -> Vec<Algebra> {
        [catalog::l1(), catalog::l2(), catalog::sl2(), catalog::heisenberg()]
            .into_iter()
            .map(|s| Algebra::new(s).unwrap())
            .collect()
    }

    #[test]
    fn structural_suite_passes_on_builtins() {
        for alg in all_builtins() {
            for report in structural_suite(&alg) {
                assert!(report.passed, "{}", report);
            }
        }
    }

    #[test]
    fn abelian_decomposition_hypothesis_holds() {
        let a = Algebra::new(AlgebraSpec::abelian(3)).unwrap();
        let r = check_compatible_decomposition(&a);
        assert!(r.passed);
        assert!(r.clauses.iter().all(|c| c.outcome == Outcome::Pass), "{r}");
    }

    #[test]
    fn l1_decomposition_reports_hypothesis() {
        let a = Algebra::new(catalog::l1()).unwrap();
        let r = check_compatible_decomposition(&a);
        assert!(r.passed);
        assert!(r.clauses[0].name.contains("hypothesis") || r.clauses[0].detail.contains("hypothesis"));
    }

    #[test]
    fn broken_space_fails_closure() {
        // span of two elementary maps whose commutator leaves the span
        let alg = Algebra::new(AlgebraSpec::abelian(2)).unwrap();
        let mut space = DerSpace::compute(&alg, SpaceKind::Der);
        let e12 = Matrix::from_fn(2, 2, |r, c| if (r, c) == (0, 1) { Scalar::one() } else { 0.into() });
        let e21 = e12.transpose();
        space.f_space = Subspace::span(4, vec![e12.row_major().to_vec(), e21.row_major().to_vec()]);
        assert!(!check_lie_closure(&alg, &space).passed);
    }
}

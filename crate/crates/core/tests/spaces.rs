mod common;

use num_traits::Zero;
use omegader::catalog;
use omegader::linalg::{Matrix, Subspace};
use omegader::spaces::{
    canonical_f_prime, is_derivation, verify_member, BlockRole, ConstraintSystem, DerSpace, SpaceKind,
    SystemOptions,
};
use omegader::{Algebra, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn l1() -> Algebra {
    Algebra::new(catalog::l1()).unwrap()
}

fn row(names: &[String], terms: &[(i64, &str)]) -> Vec<Scalar> {
    let mut r = vec![Scalar::zero(); names.len()];
    for &(c, name) in terms {
        let i = names.iter().position(|n| n == name).unwrap();
        r[i] = Scalar::from_int(c);
    }
    r
}

#[test]
fn l1_gder_off_diagonal_system_matches_hand_derivation() {
    let alg = l1();
    let sys = ConstraintSystem::build_with(&alg, SpaceKind::Gder, SystemOptions { gder_diagonal: false });
    let names = sys.layout.names();
    let hand: Vec<Vec<Scalar>> = [
        &[(1, "x21")][..],
        &[(1, "x23")],
        &[(1, "x11"), (1, "a22"), (-1, "b22")],
        &[(1, "x13"), (1, "b23")],
        &[(1, "x22"), (1, "a33"), (-1, "b33")],
        &[(1, "x31"), (1, "b32")],
        &[(1, "x33"), (1, "a22"), (-1, "b33")],
        &[(1, "a11"), (-1, "a33"), (-1, "b22"), (1, "b33")],
        &[(1, "a13"), (1, "b23")],
        &[(1, "a21")],
        &[(1, "a23")],
        &[(1, "a31"), (1, "b32")],
        &[(1, "b12")],
        &[(1, "b13")],
    ]
    .iter()
    .map(|t| row(&names, t))
    .collect();
    let hand = Subspace::span(names.len(), hand);
    assert_eq!(hand.dim(), 14);
    assert!(sys.row_space().equals(&hand).unwrap(), "{:?}", sys.reduced());
}

#[test]
fn diagonal_pairs_add_rank_but_not_f_dimension() {
    let alg = l1();
    let off = ConstraintSystem::build_with(&alg, SpaceKind::Gder, SystemOptions { gder_diagonal: false });
    let on = ConstraintSystem::build(&alg, SpaceKind::Gder);
    assert!(on.row_space().contains(&off.row_space()).unwrap());
    assert!(on.matrix.rank() > off.matrix.rank());
    let (d_off, d_on) = (DerSpace::from_system(off), DerSpace::from_system(on));
    assert!(d_on.f_space.equals(&d_off.f_space).unwrap());
    assert_eq!(d_on.dim(), 7);
}

#[test]
fn catalog_dimensions_match_oracle() {
    for name in catalog::BUILTIN {
        let alg = Algebra::new(catalog::builtin(name).unwrap()).unwrap();
        for kind in SpaceKind::ALL {
            let ours = DerSpace::compute(&alg, kind).dim();
            assert_eq!(ours, common::oracle_dim(&alg, kind), "{name} {kind}");
        }
    }
}

#[test]
fn fixture_dimensions_match_oracle() {
    for (label, spec) in common::fixture_instances() {
        let alg = Algebra::new(spec).unwrap();
        for kind in [SpaceKind::Gder, SpaceKind::GderC, SpaceKind::Qder, SpaceKind::Der] {
            assert_eq!(DerSpace::compute(&alg, kind).dim(), common::oracle_dim(&alg, kind), "{label} {kind}");
        }
    }
}

#[test]
fn gder_first_auxiliary_block_lies_in_gder() {
    // Skew symmetry turns a triple (f, f1, f2) into (f1, f, f2).
    for name in catalog::BUILTIN {
        let alg = Algebra::new(catalog::builtin(name).unwrap()).unwrap();
        let g = DerSpace::compute(&alg, SpaceKind::Gder);
        let f1s = g.pair_space.project(g.layout.block(BlockRole::F1).unwrap());
        assert!(g.f_space.contains(&f1s).unwrap(), "{name}");
    }
}

#[test]
fn der_is_qder_with_equal_blocks() {
    for name in catalog::BUILTIN {
        let alg = Algebra::new(catalog::builtin(name).unwrap()).unwrap();
        let q = DerSpace::compute(&alg, SpaceKind::Qder);
        let d = DerSpace::compute(&alg, SpaceKind::Der);
        let n = alg.dim();
        let layout = &q.layout;
        let diag: Vec<Vec<Scalar>> = (0..n * n)
            .map(|k| {
                let mut r = vec![Scalar::zero(); layout.unknowns()];
                r[layout.var(BlockRole::F, k / n, k % n)] = Scalar::from_int(1);
                r[layout.var(BlockRole::FPrime, k / n, k % n)] = Scalar::from_int(-1);
                r
            })
            .collect();
        let equal_blocks = Matrix::from_rows(diag).nullspace();
        let meet = q.pair_space.intersect(&equal_blocks).unwrap();
        assert!(meet.project(layout.f_block()).equals(&d.f_space).unwrap(), "{name}");
        for f in d.f_basis() {
            assert!(is_derivation(alg.spec(), &f), "{name}");
        }
    }
}

#[test]
fn canonical_f_prime_is_a_valid_partner() {
    for name in catalog::BUILTIN {
        let alg = Algebra::new(catalog::builtin(name).unwrap()).unwrap();
        for f in DerSpace::compute(&alg, SpaceKind::Qder).f_basis() {
            let pair = canonical_f_prime(&alg, &f).unwrap();
            assert!(pair.is_valid(alg.spec()), "{name}");
        }
    }
}

#[test]
fn pair_space_members_verify_by_direct_evaluation() {
    let alg = l1();
    for kind in SpaceKind::ALL {
        let s = DerSpace::compute(&alg, kind);
        for v in s.pair_space.basis() {
            verify_member(&alg, kind, v).unwrap_or_else(|e| panic!("{kind}: {e}"));
        }
    }
}

fn arb_algebra() -> impl Strategy<Value = Algebra> {
    (any::<u64>(), 2usize..=4).prop_map(|(seed, n)| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        Algebra::new(common::random_lie(&mut r, n)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dimensions_invariant_under_basis_permutation(alg in arb_algebra(), seed in any::<u64>()) {
        let n = alg.dim();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rand::Rng::gen_range(&mut r, 0..=i));
        }
        let permuted = Algebra::new(alg.spec().permuted(&perm)).unwrap();
        for kind in SpaceKind::ALL {
            prop_assert_eq!(
                DerSpace::compute(&alg, kind).dim(),
                DerSpace::compute(&permuted, kind).dim(),
                "{}", kind
            );
        }
    }

    #[test]
    fn dimensions_agree_with_oracle(alg in arb_algebra()) {
        for kind in [SpaceKind::Gder, SpaceKind::Qder, SpaceKind::Der, SpaceKind::Cent] {
            prop_assert_eq!(DerSpace::compute(&alg, kind).dim(), common::oracle_dim(&alg, kind));
        }
    }

    #[test]
    fn basis_members_verify(alg in arb_algebra()) {
        for kind in [SpaceKind::Gder, SpaceKind::Qder, SpaceKind::Zder] {
            let s = DerSpace::compute(&alg, kind);
            for v in s.pair_space.basis() {
                prop_assert!(verify_member(&alg, kind, v).is_ok());
            }
        }
    }
}

//! Linear constraint systems for derivation-type spaces and their exact
//! solution.
//!
//! Every space is described by a block of unknown matrices stacked
//! row-major: `vec(f) ++ vec(f1) ++ vec(f2)` for generalized derivations,
//! `vec(f) ++ vec(f')` for quasiderivations and `vec(f)` otherwise. A map
//! `f` acts in column convention, `f(e_i) = sum_j f[j][i] e_j`, so the
//! unknown `x_ji` is the `e_j` coefficient of `f(e_i)`.
//!
//! The reported space for a kind with auxiliary maps is the projection of
//! the full solution space onto the `f` block: the set of `f` for which the
//! auxiliary maps exist.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{unit, Algebra, AlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{generic_form, AffineDescription, LinExpr, LinMap, Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Der,
    DerC,
    Gder,
    GderC,
    Qder,
    QderC,
    Cent,
    CentC,
    Qcent,
    QcentC,
    Zder,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 11] = [
        SpaceKind::Der,
        SpaceKind::DerC,
        SpaceKind::Gder,
        SpaceKind::GderC,
        SpaceKind::Qder,
        SpaceKind::QderC,
        SpaceKind::Cent,
        SpaceKind::CentC,
        SpaceKind::Qcent,
        SpaceKind::QcentC,
        SpaceKind::Zder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Der => "der",
            SpaceKind::DerC => "der_c",
            SpaceKind::Gder => "gder",
            SpaceKind::GderC => "gder_c",
            SpaceKind::Qder => "qder",
            SpaceKind::QderC => "qder_c",
            SpaceKind::Cent => "cent",
            SpaceKind::CentC => "cent_c",
            SpaceKind::Qcent => "qcent",
            SpaceKind::QcentC => "qcent_c",
            SpaceKind::Zder => "zder",
        }
    }

    /// Whether the kind adds `ω(f(x),y) + ω(x,f(y)) = 0`.
    pub fn compatible(self) -> bool {
        matches!(
            self,
            SpaceKind::DerC | SpaceKind::GderC | SpaceKind::QderC | SpaceKind::CentC | SpaceKind::QcentC
        )
    }

    /// The kind without the compatibility condition.
    pub fn base(self) -> SpaceKind {
        match self {
            SpaceKind::DerC => SpaceKind::Der,
            SpaceKind::GderC => SpaceKind::Gder,
            SpaceKind::QderC => SpaceKind::Qder,
            SpaceKind::CentC => SpaceKind::Cent,
            SpaceKind::QcentC => SpaceKind::Qcent,
            other => other,
        }
    }

    fn roles(self) -> &'static [BlockRole] {
        match self.base() {
            SpaceKind::Gder => &[BlockRole::F, BlockRole::F1, BlockRole::F2],
            SpaceKind::Qder => &[BlockRole::F, BlockRole::FPrime],
            _ => &[BlockRole::F],
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SpaceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown space kind {s:?}")))
    }
}

impl Serialize for SpaceKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Which unknown matrix a block of the stacked vector holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockRole {
    F,
    F1,
    F2,
    FPrime,
}

impl BlockRole {
    /// Letter used for this block's unknowns: `x` for `f`, `a` for `f1`
    /// and `f'`, `b` for `f2`.
    pub fn letter(self) -> char {
        match self {
            BlockRole::F => 'x',
            BlockRole::F1 | BlockRole::FPrime => 'a',
            BlockRole::F2 => 'b',
        }
    }
}

/// Layout of the stacked unknown vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    n: usize,
    roles: Vec<BlockRole>,
}

impl BlockLayout {
    pub fn new(n: usize, roles: &[BlockRole]) -> Self {
        BlockLayout {
            n,
            roles: roles.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn roles(&self) -> &[BlockRole] {
        &self.roles
    }

    pub fn unknowns(&self) -> usize {
        self.roles.len() * self.n * self.n
    }

    pub fn block(&self, role: BlockRole) -> Option<Range<usize>> {
        let nn = self.n * self.n;
        self.roles
            .iter()
            .position(|&r| r == role)
            .map(|b| b * nn..(b + 1) * nn)
    }

    pub fn f_block(&self) -> Range<usize> {
        0..self.n * self.n
    }

    /// Index of entry `(row, col)` of the map in block `role`.
    pub fn var(&self, role: BlockRole, row: usize, col: usize) -> usize {
        self.block(role).expect("role in layout").start + row * self.n + col
    }

    pub fn names(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.unknowns());
        for role in &self.roles {
            for r in 1..=n {
                for c in 1..=n {
                    out.push(entry_name(role.letter(), r, c, n));
                }
            }
        }
        out
    }

    /// Extracts the map held in block `role` of a stacked vector.
    pub fn map(&self, role: BlockRole, stacked: &[Scalar]) -> Option<LinMap> {
        self.block(role)
            .map(|range| Matrix::from_row_major(self.n, &stacked[range]))
    }
}

pub(crate) fn entry_name(letter: char, r: usize, c: usize, n: usize) -> String {
    if n <= 9 {
        format!("{letter}{r}{c}")
    } else {
        format!("{letter}{r}_{c}")
    }
}

/// Names `x11, x12, ...` for an `n x n` map.
pub fn f_names(n: usize) -> Vec<String> {
    BlockLayout::new(n, &[BlockRole::F]).names()
}

/// Knobs for system construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemOptions {
    /// Impose the generalized-derivation identity on diagonal pairs
    /// `(e_i, e_i)` as well. The identity is not antisymmetric, so these
    /// pairs carry information about `f1`; they never change the `f` block.
    pub gder_diagonal: bool,
}

impl Default for SystemOptions {
    fn default() -> Self {
        SystemOptions { gder_diagonal: true }
    }
}

/// Homogeneous linear system over the stacked unknowns.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub kind: SpaceKind,
    pub layout: BlockLayout,
    pub matrix: Matrix,
    /// Human-readable origin of each row.
    pub origins: Vec<String>,
}

struct Builder<'a> {
    alg: &'a AlgebraSpec,
    layout: BlockLayout,
    rows: Vec<Vec<Scalar>>,
    origins: Vec<String>,
}

/// One vector-valued equation: row `k` is the `e_k` coefficient.
struct VectorEq {
    rows: Vec<Vec<Scalar>>,
}

impl<'a> Builder<'a> {
    fn n(&self) -> usize {
        self.alg.dim()
    }

    fn vector_eq(&self) -> VectorEq {
        VectorEq {
            rows: vec![vec![Scalar::zero(); self.layout.unknowns()]; self.n()],
        }
    }

    /// `sign * [g(e_i), e_j]`
    fn map_bracket(&self, eq: &mut VectorEq, role: BlockRole, i: usize, j: usize, sign: &Scalar) {
        let n = self.n();
        for p in 0..n {
            let var = self.layout.var(role, p, i);
            for (k, c) in self.alg.bracket_basis(p, j).iter().enumerate() {
                if !c.is_zero() {
                    eq.rows[k][var] += sign * c;
                }
            }
        }
    }

    /// `sign * [e_i, g(e_j)]`
    fn bracket_map(&self, eq: &mut VectorEq, role: BlockRole, i: usize, j: usize, sign: &Scalar) {
        let n = self.n();
        for p in 0..n {
            let var = self.layout.var(role, p, j);
            for (k, c) in self.alg.bracket_basis(i, p).iter().enumerate() {
                if !c.is_zero() {
                    eq.rows[k][var] += sign * c;
                }
            }
        }
    }

    /// `sign * g([e_i, e_j])`
    fn map_of_bracket(&self, eq: &mut VectorEq, role: BlockRole, i: usize, j: usize, sign: &Scalar) {
        let n = self.n();
        for (m, c) in self.alg.bracket_basis(i, j).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..n {
                eq.rows[k][self.layout.var(role, k, m)] += sign * c;
            }
        }
    }

    fn push_vector(&mut self, eq: VectorEq, origin: impl Fn(usize) -> String) {
        for (k, row) in eq.rows.into_iter().enumerate() {
            if row.iter().any(|x| !x.is_zero()) {
                self.rows.push(row);
                self.origins.push(origin(k));
            }
        }
    }

    fn push_row(&mut self, row: Vec<Scalar>, origin: String) {
        if row.iter().any(|x| !x.is_zero()) {
            self.rows.push(row);
            self.origins.push(origin);
        }
    }

    fn pair_label(&self, tag: &str, i: usize, j: usize, k: Option<usize>) -> String {
        let b = self.alg.basis_names();
        match k {
            Some(k) => format!("{tag} ({}, {}) coefficient of {}", b[i], b[j], b[k]),
            None => format!("{tag} ({}, {})", b[i], b[j]),
        }
    }

    fn compatibility(&mut self) {
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                let mut row = vec![Scalar::zero(); self.layout.unknowns()];
                for p in 0..n {
                    // ω(f(e_i), e_j) + ω(e_i, f(e_j))
                    let a = self.alg.omega(p, j);
                    if !a.is_zero() {
                        row[self.layout.var(BlockRole::F, p, i)] += a;
                    }
                    let b = self.alg.omega(i, p);
                    if !b.is_zero() {
                        row[self.layout.var(BlockRole::F, p, j)] += b;
                    }
                }
                let label = self.pair_label("compatibility", i, j, None);
                self.push_row(row, label);
            }
        }
    }
}

impl ConstraintSystem {
    pub fn build(alg: &Algebra, kind: SpaceKind) -> Self {
        Self::build_with(alg, kind, SystemOptions::default())
    }

    pub fn build_with(alg: &Algebra, kind: SpaceKind, options: SystemOptions) -> Self {
        let n = alg.dim();
        let layout = BlockLayout::new(n, kind.roles());
        let mut b = Builder {
            alg: alg.spec(),
            layout: layout.clone(),
            rows: Vec::new(),
            origins: Vec::new(),
        };
        let one = Scalar::one();
        let minus = -Scalar::one();
        use BlockRole::*;
        match kind.base() {
            SpaceKind::Der => {
                // antisymmetric in (i, j): pairs i < j suffice
                for i in 0..n {
                    for j in i + 1..n {
                        let mut eq = b.vector_eq();
                        b.map_bracket(&mut eq, F, i, j, &one);
                        b.bracket_map(&mut eq, F, i, j, &one);
                        b.map_of_bracket(&mut eq, F, i, j, &minus);
                        let lab = |k| b.pair_label("derivation", i, j, Some(k));
                        let labels: Vec<String> = (0..n).map(lab).collect();
                        b.push_vector(eq, |k| labels[k].clone());
                    }
                }
            }
            SpaceKind::Gder => {
                for i in 0..n {
                    for j in 0..n {
                        if i == j && !options.gder_diagonal {
                            continue;
                        }
                        let mut eq = b.vector_eq();
                        b.map_bracket(&mut eq, F, i, j, &one);
                        b.bracket_map(&mut eq, F1, i, j, &one);
                        b.map_of_bracket(&mut eq, F2, i, j, &minus);
                        let labels: Vec<String> = (0..n)
                            .map(|k| b.pair_label("generalized derivation", i, j, Some(k)))
                            .collect();
                        b.push_vector(eq, |k| labels[k].clone());
                    }
                }
            }
            SpaceKind::Qder => {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut eq = b.vector_eq();
                        b.map_bracket(&mut eq, F, i, j, &one);
                        b.bracket_map(&mut eq, F, i, j, &one);
                        b.map_of_bracket(&mut eq, FPrime, i, j, &minus);
                        let labels: Vec<String> = (0..n)
                            .map(|k| b.pair_label("quasiderivation", i, j, Some(k)))
                            .collect();
                        b.push_vector(eq, |k| labels[k].clone());
                    }
                }
            }
            SpaceKind::Qcent | SpaceKind::Cent => {
                // [f(x),y] - [x,f(y)] is symmetric in (x, y): diagonal
                // pairs are not automatic, so use every ordered pair.
                for i in 0..n {
                    for j in 0..n {
                        let mut eq = b.vector_eq();
                        b.map_bracket(&mut eq, F, i, j, &one);
                        b.bracket_map(&mut eq, F, i, j, &minus);
                        let labels: Vec<String> = (0..n)
                            .map(|k| b.pair_label("quasicentroid", i, j, Some(k)))
                            .collect();
                        b.push_vector(eq, |k| labels[k].clone());
                        if kind.base() == SpaceKind::Cent {
                            let mut eq = b.vector_eq();
                            b.map_bracket(&mut eq, F, i, j, &one);
                            b.map_of_bracket(&mut eq, F, i, j, &minus);
                            let labels: Vec<String> = (0..n)
                                .map(|k| b.pair_label("centroid", i, j, Some(k)))
                                .collect();
                            b.push_vector(eq, |k| labels[k].clone());
                        }
                    }
                }
            }
            SpaceKind::Zder => {
                // f(e_j) in c(L): annihilated by every functional vanishing on c(L)
                let ann = alg.center().annihilator();
                for (a, phi) in ann.basis().iter().enumerate() {
                    for j in 0..n {
                        let mut row = vec![Scalar::zero(); layout.unknowns()];
                        for (i, p) in phi.iter().enumerate() {
                            row[layout.var(F, i, j)] = p.clone();
                        }
                        let label = format!("center membership of f({}), functional {a}", alg.basis_names()[j]);
                        b.push_row(row, label);
                    }
                }
                // f vanishes on a basis of [L, L]
                for (a, v) in alg.derived().basis().iter().enumerate() {
                    for i in 0..n {
                        let mut row = vec![Scalar::zero(); layout.unknowns()];
                        for (j, x) in v.iter().enumerate() {
                            row[layout.var(F, i, j)] = x.clone();
                        }
                        let label = format!(
                            "f kills derived basis vector {a}, coefficient of {}",
                            alg.basis_names()[i]
                        );
                        b.push_row(row, label);
                    }
                }
            }
            _ => unreachable!("base kinds are exhaustive"),
        }
        if kind.compatible() {
            b.compatibility();
        }
        let matrix = if b.rows.is_empty() {
            Matrix::zeros(0, layout.unknowns())
        } else {
            Matrix::from_rows(b.rows)
        };
        ConstraintSystem {
            kind,
            layout,
            matrix,
            origins: b.origins,
        }
    }

    fn render_row(&self, row: &[Scalar], names: &[String]) -> String {
        let expr = LinExpr::from_terms(row.iter().cloned().enumerate());
        format!("{} = 0", expr.render(names))
    }

    /// Every equation as generated, `... = 0`.
    pub fn equations(&self) -> Vec<String> {
        let names = self.layout.names();
        (0..self.matrix.rows())
            .map(|r| self.render_row(self.matrix.row(r), &names))
            .collect()
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn reduced_matrix(&self) -> Matrix {
        let (r, pivots) = self.matrix.rref();
        let rows: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        if rows.is_empty() {
            Matrix::zeros(0, self.matrix.cols())
        } else {
            Matrix::from_rows(rows)
        }
    }

    /// The reduced system, one rendered equation per pivot.
    pub fn reduced(&self) -> Vec<String> {
        let names = self.layout.names();
        let m = self.reduced_matrix();
        (0..m.rows()).map(|r| self.render_row(m.row(r), &names)).collect()
    }

    /// Row space of the system, for comparing equation sets.
    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.matrix.cols(), self.matrix.to_rows())
    }
}

/// Human-readable equation list after reduction.
pub fn constraint_set(alg: &Algebra, kind: SpaceKind) -> Vec<String> {
    ConstraintSystem::build(alg, kind).reduced()
}

/// A solved derivation-type space.
#[derive(Clone, Debug)]
pub struct DerSpace {
    pub kind: SpaceKind,
    pub layout: BlockLayout,
    pub system: ConstraintSystem,
    /// Solutions over all stacked unknowns.
    pub pair_space: Subspace,
    /// Projection of `pair_space` onto the `f` block.
    pub f_space: Subspace,
    /// Generic form of the `f` block in unknowns `x_ij`.
    pub generic: AffineDescription,
}

impl DerSpace {
    pub fn compute(alg: &Algebra, kind: SpaceKind) -> DerSpace {
        Self::from_system(ConstraintSystem::build(alg, kind))
    }

    pub fn from_system(system: ConstraintSystem) -> DerSpace {
        let layout = system.layout.clone();
        let pair_space = system.matrix.nullspace();
        let f_space = pair_space.project(layout.f_block());
        let generic = generic_form(&f_space, &f_names(layout.n()));
        DerSpace {
            kind: system.kind,
            layout,
            system,
            pair_space,
            f_space,
            generic,
        }
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    /// Dimension of the `f`-block projection.
    pub fn dim(&self) -> usize {
        self.f_space.dim()
    }

    pub fn pair_dim(&self) -> usize {
        self.pair_space.dim()
    }

    pub fn f_basis(&self) -> Vec<LinMap> {
        self.f_space
            .basis()
            .iter()
            .map(|v| Matrix::from_row_major(self.n(), v))
            .collect()
    }

    pub fn contains_map(&self, f: &LinMap) -> bool {
        self.f_space.contains_vector(f.row_major())
    }

    /// Generic form over all stacked unknowns; `f` unknowns come first so
    /// auxiliary entries are expressed through free `x_ij` where possible.
    pub fn pair_generic(&self) -> AffineDescription {
        generic_form(&self.pair_space, &self.layout.names())
    }

    /// Generic `f` as a matrix of rendered entries.
    pub fn generic_matrix(&self) -> Vec<Vec<String>> {
        generic_matrix(&self.generic, BlockRole::F, &self.layout_f_only())
    }

    fn layout_f_only(&self) -> BlockLayout {
        BlockLayout::new(self.n(), &[BlockRole::F])
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .f_basis()
            .iter()
            .map(|m| serde_json::to_value(m).expect("matrix json"))
            .collect();
        json!({
            "kind": self.kind.name(),
            "dim": self.dim(),
            "pair_dim": self.pair_dim(),
            "blocks": self.layout.roles().iter().map(|r| format!("{r:?}")).collect::<Vec<_>>(),
            "f_basis": basis,
            "free": self.generic.free_names(),
            "constraints": self.generic.constraints(),
        })
    }
}

/// Entries of block `role` of a generic form, rendered as a matrix.
pub fn generic_matrix(desc: &AffineDescription, role: BlockRole, layout: &BlockLayout) -> Vec<Vec<String>> {
    let n = layout.n();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| desc.expr(layout.var(role, r, c)).render(&desc.names))
                .collect()
        })
        .collect()
}

/// Validates `spec`, then solves for `kind`.
pub fn compute_space(spec: &AlgebraSpec, kind: SpaceKind) -> Result<DerSpace> {
    let alg = Algebra::new(spec.clone())?;
    Ok(DerSpace::compute(&alg, kind))
}

fn apply(f: &LinMap, v: &[Scalar]) -> Vec<Scalar> {
    f.mul_vec(v)
}

fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `ω(f(x),y) + ω(x,f(y)) = 0` on every ordered basis pair.
pub fn is_compatible(alg: &AlgebraSpec, f: &LinMap) -> bool {
    let n = alg.dim();
    let images: Vec<Vec<Scalar>> = (0..n).map(|i| f.column(i)).collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let (ei, ej) = (unit(n, i), unit(n, j));
            (alg.omega_unchecked(&images[i], &ej) + alg.omega_unchecked(&ei, &images[j])).is_zero()
        })
    })
}

/// `[f(x),y] + [x,f(y)] = f'([x,y])` on every ordered basis pair.
pub fn is_quasiderivation_pair(alg: &AlgebraSpec, f: &LinMap, f_prime: &LinMap) -> bool {
    let n = alg.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let lhs = add(
                &alg.bracket_unchecked(&apply(f, &ei), &ej),
                &alg.bracket_unchecked(&ei, &apply(f, &ej)),
            );
            lhs == apply(f_prime, alg.bracket_basis(i, j))
        })
    })
}

/// `f` is a derivation on every ordered basis pair.
pub fn is_derivation(alg: &AlgebraSpec, f: &LinMap) -> bool {
    is_quasiderivation_pair(alg, f, f)
}

/// Re-checks a stacked solution by direct bracket evaluation on every
/// ordered basis pair, independent of how the constraint rows were built.
/// Returns a description of the first failure.
pub fn verify_member(alg: &Algebra, kind: SpaceKind, stacked: &[Scalar]) -> std::result::Result<(), String> {
    let n = alg.dim();
    let layout = BlockLayout::new(n, kind.roles());
    if stacked.len() != layout.unknowns() {
        return Err(format!("expected {} unknowns, got {}", layout.unknowns(), stacked.len()));
    }
    let f = layout.map(BlockRole::F, stacked).expect("f block");
    let names = alg.basis_names();
    let fail = |what: &str, i: usize, j: usize| Err(format!("{what} fails on ({}, {})", names[i], names[j]));
    if kind.compatible() && !is_compatible(alg, &f) {
        return Err("compatibility fails".into());
    }
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let fx_y = alg.bracket_unchecked(&apply(&f, &ei), &ej);
            let x_fy = alg.bracket_unchecked(&ei, &apply(&f, &ej));
            let xy = alg.bracket_basis(i, j);
            match kind.base() {
                SpaceKind::Der => {
                    if add(&fx_y, &x_fy) != apply(&f, xy) {
                        return fail("derivation identity", i, j);
                    }
                }
                SpaceKind::Gder => {
                    let f1 = layout.map(BlockRole::F1, stacked).expect("f1 block");
                    let f2 = layout.map(BlockRole::F2, stacked).expect("f2 block");
                    let rhs = sub(&apply(&f2, xy), &alg.bracket_unchecked(&ei, &apply(&f1, &ej)));
                    if fx_y != rhs {
                        return fail("generalized derivation identity", i, j);
                    }
                }
                SpaceKind::Qder => {
                    let fp = layout.map(BlockRole::FPrime, stacked).expect("f' block");
                    if add(&fx_y, &x_fy) != apply(&fp, xy) {
                        return fail("quasiderivation identity", i, j);
                    }
                }
                SpaceKind::Qcent => {
                    if fx_y != x_fy {
                        return fail("quasicentroid identity", i, j);
                    }
                }
                SpaceKind::Cent => {
                    if fx_y != x_fy || fx_y != apply(&f, xy) {
                        return fail("centroid identity", i, j);
                    }
                }
                SpaceKind::Zder => {
                    if !vec_is_zero(&alg.bracket_unchecked(&apply(&f, &ei), &ej)) {
                        return Err(format!("f({}) is not central", names[i]));
                    }
                    if !vec_is_zero(&apply(&f, xy)) {
                        return fail("f([L,L]) = 0", i, j);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    Ok(())
}

/// A quasiderivation together with an associated map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDerPair {
    pub f: LinMap,
    pub f_prime: LinMap,
}

impl QDerPair {
    pub fn is_valid(&self, alg: &AlgebraSpec) -> bool {
        is_quasiderivation_pair(alg, &self.f, &self.f_prime)
    }

    pub fn zero(n: usize) -> Self {
        QDerPair {
            f: Matrix::zeros(n, n),
            f_prime: Matrix::zeros(n, n),
        }
    }

    /// `([f,g], [f',g'])`.
    pub fn commutator(&self, other: &QDerPair) -> QDerPair {
        QDerPair {
            f: self.f.commutator(&other.f),
            f_prime: self.f_prime.commutator(&other.f_prime),
        }
    }
}

/// The associated map with `f'([e_i,e_j]) = [f(e_i),e_j] + [e_i,f(e_j)]` on
/// `[L,L]` and `f' = 0` on the greedy complement of `[L,L]`.
pub fn canonical_f_prime(alg: &Algebra, f: &LinMap) -> Result<QDerPair> {
    let n = alg.dim();
    if f.rows() != n || f.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.rows(),
        });
    }
    // unknowns: f' row-major; f'(v)_k = sum_m f'[k][m] v_m
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut push = |v: &[Scalar], target: Vec<Scalar>| {
        for (k, t) in target.into_iter().enumerate() {
            let mut row = vec![Scalar::zero(); n * n];
            for (m, x) in v.iter().enumerate() {
                row[k * n + m] = x.clone();
            }
            rows.push(row);
            rhs.push(t);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let target = add(
                &alg.bracket_unchecked(&apply(f, &ei), &ej),
                &alg.bracket_unchecked(&ei, &apply(f, &ej)),
            );
            push(alg.bracket_basis(i, j), target);
        }
    }
    for u in alg.derived().complement().basis() {
        push(u, vec![Scalar::zero(); n]);
    }
    let system = Matrix::from_rows(rows);
    let solution = system.solve(&rhs).ok_or(Error::NotQuasiDerivation)?;
    Ok(QDerPair {
        f: f.clone(),
        f_prime: Matrix::from_row_major(n, &solution),
    })
}

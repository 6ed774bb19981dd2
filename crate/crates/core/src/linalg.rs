//! Deterministic exact linear algebra over `Q(i)`.
//!
//! Pivoting is always "leftmost nonzero column, first row at or below the
//! current one", so every reduced form and every rendered generic form is
//! reproducible.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix of scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// A linear map on an `n`-dimensional space, stored in column convention:
/// column `i` holds the coordinates of the image of basis vector `i`.
pub type LinMap = Matrix;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<Scalar>]) -> Self {
        Matrix::from_fn(len, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Square matrix from a row-major vectorization.
    pub fn from_row_major(n: usize, entries: &[Scalar]) -> Self {
        assert_eq!(entries.len(), n * n, "vectorized map has wrong length");
        Matrix {
            rows: n,
            cols: n,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Row-major vectorization, the stacking order used for unknowns.
    pub fn row_major(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| k * &self[(r, c)])
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&mut rows, self.cols);
        let mut out = Matrix::from_rows(rows);
        if self.rows == 0 {
            out.cols = self.cols;
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : Mv = 0}`, canonicalized.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut vectors = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        for free in 0..self.cols {
            if pivot_iter.peek() == Some(&&free) {
                pivot_iter.next();
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                let entry = &r[(row, free)];
                if !entry.is_zero() {
                    v[p] = -entry;
                }
            }
            debug_assert!(self.mul_vec(&v).iter().all(Zero::is_zero));
            vectors.push(v);
        }
        Subspace::span(self.cols, vectors)
    }

    /// One solution of `Mx = rhs` (free unknowns set to zero), or `None` if
    /// the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        let pivots = rref_in_place(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = rows[row][self.cols].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        let pivots = rref_in_place(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            rows.into_iter().map(|row| row[n..].to_vec()).collect(),
        ))
    }
}

/// In-place Gauss-Jordan elimination restricted to the first `cols` columns
/// for pivot search (trailing columns ride along). Returns pivot columns.
fn rref_in_place(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&q| !rows[q][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        let support: Vec<usize> = (c..width).filter(|&j| !rows[r][j].is_zero()).collect();
        if !inv.is_one() {
            for &j in &support {
                rows[r][j] *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (q, row) in rows.iter_mut().enumerate() {
            if q == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Serializes as an array of rows of scalar strings.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// A subspace of `Q(i)^ambient`, stored as the nonzero rows of the RREF of
/// any spanning set. Two subspaces are equal iff their stored bases are.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient).to_rows(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors; panics if a vector has the wrong length.
    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length does not match ambient"))
            .collect();
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Subspace::span(
            ambient,
            indices.into_iter().map(|i| {
                let mut v = vec![Scalar::zero(); ambient];
                v[i] = Scalar::one();
                v
            }),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reduction against the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient");
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    *o -= &factor * b;
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// True iff `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vector(v)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self == other)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        ))
    }

    /// Intersection via the nullspace of `[S | -T]` acting on coefficients.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let s = self.dim();
        let columns: Vec<Vec<Scalar>> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|v| v.iter().map(|x| -x).collect()))
            .collect();
        let stacked = Matrix::from_columns(self.ambient, &columns);
        let kernel = stacked.nullspace();
        let vectors = kernel.basis.iter().map(|coeffs| {
            let mut v = vec![Scalar::zero(); self.ambient];
            for (a, row) in coeffs[..s].iter().zip(&self.basis) {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in v.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
            v
        });
        Ok(Subspace::span(self.ambient, vectors))
    }

    /// Image under the coordinate projection onto `block`.
    pub fn project(&self, block: Range<usize>) -> Subspace {
        assert!(block.end <= self.ambient, "block exceeds ambient dimension");
        let len = block.len();
        Subspace::span(len, self.basis.iter().map(|v| v[block.clone()].to_vec()))
    }

    /// Complement obtained by greedily adding standard basis vectors in
    /// index order.
    pub fn complement(&self) -> Subspace {
        let mut current = self.clone();
        let mut chosen = Vec::new();
        for k in 0..self.ambient {
            if current.dim() == self.ambient {
                break;
            }
            let mut e = vec![Scalar::zero(); self.ambient];
            e[k] = Scalar::one();
            if !current.contains_vector(&e) {
                current = Subspace::span(
                    self.ambient,
                    current.basis.iter().cloned().chain(std::iter::once(e)),
                );
                chosen.push(k);
            }
        }
        Subspace::coordinate(self.ambient, chosen)
    }

    /// `{phi : phi(v) = 0 for all v in self}` in dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        Matrix::from_rows(self.basis.clone()).nullspace()
    }

    pub fn to_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zeros(0, self.ambient);
        }
        Matrix::from_rows(self.basis.clone())
    }
}

/// A linear combination of named unknowns.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinExpr {
    terms: Vec<(usize, Scalar)>,
}

impl LinExpr {
    pub fn var(index: usize) -> Self {
        LinExpr {
            terms: vec![(index, Scalar::one())],
        }
    }

    /// Terms with zero coefficients dropped, sorted by variable index.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
        for (v, c) in terms {
            *acc.entry(v).or_insert_with(Scalar::zero) += c;
        }
        LinExpr {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(usize, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (v, c)) in self.terms.iter().enumerate() {
            let name = &names[*v];
            let (negative, body) = if c.is_one() {
                (false, name.clone())
            } else if (-c).is_one() {
                (true, name.clone())
            } else if c.is_real() {
                if c.re() < &num_rational::BigRational::zero() {
                    (true, format!("{}*{}", -c, name))
                } else {
                    (false, format!("{c}*{name}"))
                }
            } else {
                (false, format!("({c})*{name}"))
            };
            match (k, negative) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

/// Parametrized description of a subspace: the free unknowns are the RREF
/// pivot columns of its basis, every other unknown is an explicit linear
/// combination of free ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineDescription {
    pub names: Vec<String>,
    pub free: Vec<usize>,
    pub determined: Vec<(usize, LinExpr)>,
}

impl AffineDescription {
    /// Expression for any unknown, free or determined.
    pub fn expr(&self, var: usize) -> LinExpr {
        if self.free.contains(&var) {
            return LinExpr::var(var);
        }
        self.determined
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, e)| e.clone())
            .expect("variable outside description")
    }

    /// Rendered constraints such as `x22 = -x11`, in unknown order.
    pub fn constraints(&self) -> Vec<String> {
        self.determined
            .iter()
            .map(|(v, e)| format!("{} = {}", self.names[*v], e.render(&self.names)))
            .collect()
    }

    pub fn free_names(&self) -> Vec<String> {
        self.free.iter().map(|&v| self.names[v].clone()).collect()
    }
}

/// Generic form of `space`, whose ambient coordinates are labelled by `names`.
pub fn generic_form(space: &Subspace, names: &[String]) -> AffineDescription {
    assert_eq!(names.len(), space.ambient(), "one name per unknown");
    let free = space.pivots().to_vec();
    let determined = (0..space.ambient())
        .filter(|v| !free.contains(v))
        .map(|v| {
            let expr = LinExpr::from_terms(
                space
                    .basis()
                    .iter()
                    .zip(&free)
                    .map(|(row, &p)| (p, row[v].clone())),
            );
            (v, expr)
        })
        .collect();
    AffineDescription {
        names: names.to_vec(),
        free,
        determined,
    }
}

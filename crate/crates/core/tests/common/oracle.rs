//! Rank by fraction-free elimination over the Gaussian integers.
//!
//! Shares no code with the library's elimination: rows are cleared of
//! denominators and reduced with Bareiss' integer-preserving update, where
//! every division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use omegader::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn one() -> Self {
        GaussInt { re: BigInt::one(), im: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient; panics when `o` does not divide `self`.
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let norm = &o.re * &o.re + &o.im * &o.im;
        // self * conj(o) / |o|^2
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        let (qr, rr) = re.div_rem(&norm);
        let (qi, ri) = im.div_rem(&norm);
        assert!(rr.is_zero() && ri.is_zero(), "inexact Bareiss division");
        GaussInt { re: qr, im: qi }
    }
}

/// Clears denominators of one row.
fn integer_row(row: &[Scalar]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for s in row {
        l = l.lcm(s.re().denom()).lcm(s.im().denom());
    }
    row.iter()
        .map(|s| {
            let re = s.re() * &l;
            let im = s.im() * &l;
            assert!(re.is_integer() && im.is_integer());
            GaussInt { re: re.to_integer(), im: im.to_integer() }
        })
        .collect()
}

pub fn rank(rows: &[Vec<Scalar>], cols: usize) -> usize {
    let mut m: Vec<Vec<GaussInt>> = rows.iter().map(|r| integer_row(r)).collect();
    for r in &m {
        assert_eq!(r.len(), cols);
    }
    let mut rank = 0;
    let mut prev = GaussInt::one();
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..m.len() {
            let factor = m[r][c].clone();
            for j in c..cols {
                let v = pivot.mul(&m[r][j]).sub(&factor.mul(&m[rank][j]));
                m[r][j] = v.div_exact(&prev);
            }
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn nullity(rows: &[Vec<Scalar>], cols: usize) -> usize {
    cols - rank(rows, cols)
}

/// Dimension of the projection of `{v : Mv = 0}` onto coordinates
/// `0..f_cols`: full nullity minus the nullity with those coordinates forced
/// to zero.
pub fn projected_nullity(rows: &[Vec<Scalar>], cols: usize, f_cols: usize) -> usize {
    let tail: Vec<Vec<Scalar>> = rows.iter().map(|r| r[f_cols..].to_vec()).collect();
    nullity(rows, cols) - nullity(&tail, cols - f_cols)
}

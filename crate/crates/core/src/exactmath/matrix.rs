//! Dense exact rational matrices and the elimination routines built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rat::{factorial, format_rat, Rat, RatVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Linear operators on the underlying space of an algebra are square
/// matrices; column `j` holds the coordinates of the image of basis vector `j`.
pub type LinOp = RatMatrix;

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Rat) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diagonal(diag: &[Rat]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let nrows = rows.len();
        Ok(RatMatrix {
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, columns: &[RatVec]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != n_rows) {
            return Err(Error::DimensionMismatch {
                expected: n_rows,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(n_rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Rat::from_integer(BigInt::from(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> RatVec {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn checked_mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rat]) -> Result<RatVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| super::rat::dot(self.row(i), v)).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &RatMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// Smallest `k` with `self^k = 0`, if the matrix is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut power = Self::identity(n);
        for k in 0..=n {
            if power.is_zero() {
                return Some(k);
            }
            power = &power * self;
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl<'a> Mul<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix shapes do not match")
    }
}

impl<'a> Add<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shapes do not match"
        );
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shapes do not match"
        );
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rings where Bareiss elimination can divide exactly by the previous pivot.
pub(crate) trait BareissRing: Clone {
    fn vanishes(&self) -> bool;
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    /// `a·d − b·c`, divided exactly by `prev`.
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Self;
    /// Cost used to prefer cheap pivots. Lower is better.
    fn weight(&self) -> usize {
        0
    }
}

impl BareissRing for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Self {
        let num = a * d - b * c;
        if prev.is_one() {
            num
        } else {
            debug_assert!((&num % prev).is_zero());
            num / prev
        }
    }
    fn weight(&self) -> usize {
        self.bits() as usize
    }
}

/// Rank by fraction-free (Bareiss) elimination, skipping zero columns.
pub(crate) fn bareiss_rank<R: BareissRing>(mut a: Vec<Vec<R>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = R::ring_one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows)
            .filter(|&i| !a[i][c].vanishes())
            .min_by_key(|&i| a[i][c].weight());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                row[j] = R::cross_div(&pivot_row[c], &row[j], &lead, &pivot_row[j], &prev);
            }
            row[c] = R::ring_zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix. Rows are scaled to integers and reduced by
/// Bareiss elimination, so intermediate entries stay bounded by minors.
pub fn rank_exact(m: &RatMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !Zero::is_zero(x)))
        .collect();
    bareiss_rank(rows, m.cols())
}

/// Rank of the span of a list of vectors of equal length.
pub fn span_rank(vectors: &[RatVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank_exact(&RatMatrix::from_rows(vectors.to_vec()).expect("vectors of unequal length"))
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] *= &inv;
            }
        }
        let pivot_row: Vec<(usize, Rat)> = (c..cols)
            .filter(|&j| !a[(r, j)].is_zero())
            .map(|j| (j, a[(r, j)].clone()))
            .collect();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for (j, v) in &pivot_row {
                let delta = &factor * v;
                a[(i, *j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right null space `{v : m·v = 0}`; its size is `cols − rank`.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatVec> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// One solution of `m·x = rhs`, or `None` when the system is inconsistent.
pub fn solve(m: &RatMatrix, rhs: &[Rat]) -> Option<RatVec> {
    assert_eq!(m.rows(), rhs.len(), "right-hand side length");
    let cols = m.cols();
    let aug = RatMatrix::from_fn(m.rows(), cols + 1, |i, j| {
        if j < cols {
            m[(i, j)].clone()
        } else {
            rhs[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, cols)].clone();
    }
    Some(x)
}

/// `exp(s·m) = I + s·m + s²m²/2! + …` for nilpotent `m`; the series is finite.
pub fn nilpotent_exp(m: &RatMatrix, s: &Rat) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let index = m.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let sm = m.scale(s);
    let mut term = RatMatrix::identity(m.rows());
    let mut sum = term.clone();
    for k in 1..index {
        term = &term * &sm;
        let coeff = Rat::from_integer(factorial(k)).recip();
        sum = &sum + &term.scale(&coeff);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::{int, rat};

    #[test]
    fn rank_examples() {
        assert_eq!(rank_exact(&RatMatrix::identity(2)), 2);
        assert_eq!(rank_exact(&RatMatrix::zeros(3, 3)), 0);
        assert_eq!(rank_exact(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = RatMatrix::from_rows(vec![
            vec![int(0), rat(1, 2), rat(1, 3)],
            vec![int(0), int(3), int(2)],
            vec![int(0), int(0), rat(5, 7)],
        ])
        .unwrap();
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(kernel_basis(&m).len(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RatMatrix::zeros(2, 2)).len(), 2);
        let k = kernel_basis(&RatMatrix::from_i64(&[&[1, 1], &[0, 0]]));
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(solve(&m, &[int(1), int(3)]).is_none());
        let x = solve(&m, &[int(1), int(2)]).unwrap();
        assert_eq!(m.apply(&x).unwrap(), vec![int(1), int(2)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RatMatrix::identity(3));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            nilpotent_exp(&RatMatrix::zeros(3, 3), &int(5)).unwrap(),
            RatMatrix::identity(3)
        );
        let n = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            nilpotent_exp(&n, &int(1)).unwrap(),
            RatMatrix::from_i64(&[&[1, 1], &[0, 1]])
        );
        assert_eq!(
            nilpotent_exp(&RatMatrix::identity(2), &int(1)),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn exp_of_three_step_nilpotent_has_half_square() {
        let n = RatMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = nilpotent_exp(&n, &int(2)).unwrap();
        // I + 2N + 2N²
        let expected = RatMatrix::from_i64(&[&[1, 2, 2], &[0, 1, 2], &[0, 0, 1]]);
        assert_eq!(e, expected);
    }
}

//! Exact rational scalars and dense rational matrices.
//!
//! Everything here is exact: ranks and determinants come from fraction-free
//! (Bareiss) elimination on integer-scaled rows, solves from Gauss-Jordan
//! elimination over the rationals.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(RMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for tests and literals: integer-pair entries `(num, den)`.
    pub fn from_i64(rows: &[&[(i64, i64)]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "submatrix out of range"
        );
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn vstack(blocks: &[RMatrix]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        Ok(RMatrix {
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            data: blocks.iter().flat_map(|b| b.data.iter().cloned()).collect(),
        })
    }

    pub fn checked_mul(&self, rhs: &RMatrix) -> Result<RMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &RMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<RMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &RMatrix) -> Result<RMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &RMatrix) -> Result<RMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Kronecker product: block `(i, j)` is `self[i, j] * rhs`.
    pub fn kron(&self, rhs: &RMatrix) -> RMatrix {
        let (p, q) = rhs.shape();
        Self::from_fn(self.rows * p, self.cols * q, |i, j| {
            &self[(i / p, j / q)] * &rhs[(i % p, j % q)]
        })
    }

    /// Rows scaled to integers (each row multiplied by the lcm of its
    /// denominators). Returns the integer rows and the per-row scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let l = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(self.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scales.push(l);
        }
        (rows, scales)
    }

    /// Bareiss elimination in place. Returns the rank and, for square input,
    /// the determinant of the integer matrix.
    fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
        let rows = m.len();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            if piv != rank {
                m.swap(piv, rank);
                sign = -sign;
            }
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                    m[r][c] = v;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        let det = if rank == rows && rows == cols {
            sign * prev
        } else {
            BigInt::zero()
        };
        (rank, det)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.integer_rows();
        Self::bareiss(&mut m, self.cols).0
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut m, scales) = self.integer_rows();
        let (_, det) = Self::bareiss(&mut m, self.cols);
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(Rational::new(det, denom))
    }

    /// Reduced row echelon form over the rationals on the augmented matrix
    /// `[self | rhs]`, pivoting only within the first `self.cols` columns.
    /// Returns the reduced augmented matrix and the pivot columns.
    fn rref_augmented(&self, rhs: &RMatrix) -> (RMatrix, Vec<usize>) {
        let n = self.cols;
        let width = n + rhs.cols;
        let mut m = RMatrix::from_fn(self.rows, width, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - n)].clone()
            }
        });
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if piv != row {
                for c in 0..width {
                    m.data.swap(piv * width + c, row * width + c);
                }
            }
            let inv = m[(row, col)].recip();
            for c in col..width {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..width {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, c)] - &factor * &m[(row, c)];
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn solve_nonsingular(&self, b: &RMatrix) -> Result<RMatrix> {
        let (m, pivots) = self.rref_augmented(b);
        if pivots.len() < self.cols {
            return Err(Error::Singular);
        }
        Ok(m.submatrix(0, self.cols, self.rows, b.cols))
    }

    pub fn inverse(&self) -> Result<RMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        self.solve_nonsingular(&RMatrix::identity(self.rows))
    }

    /// One exact solution of `self * X = b`.
    ///
    /// Square nonsingular systems get the unique solution. Otherwise the
    /// minimum-norm solution is returned: dependent rows are dropped after
    /// row reduction and `X = Rᵗ (R Rᵗ)⁻¹ c` for the reduced system `R X = c`.
    pub fn solve(&self, b: &RMatrix) -> Result<RMatrix> {
        if self.rows != b.rows {
            return Err(Error::ShapeMismatch(format!(
                "system with {} equations, right-hand side has {} rows",
                self.rows, b.rows
            )));
        }
        let (m, pivots) = self.rref_augmented(b);
        let r = pivots.len();
        for i in r..m.rows {
            if (self.cols..m.cols).any(|c| !m[(i, c)].is_zero()) {
                return Err(Error::Inconsistent);
            }
        }
        let reduced = m.submatrix(0, 0, r, self.cols);
        let rhs = m.submatrix(0, self.cols, r, b.cols);
        if r == self.cols {
            // Unique solution: the reduced system is the identity on pivots.
            return Ok(rhs);
        }
        let rt = reduced.transpose();
        let gram = reduced.checked_mul(&rt)?;
        let y = gram.solve_nonsingular(&rhs)?;
        rt.checked_mul(&y)
    }

    /// Canonical left generalized inverse `(AᵗA)⁻¹Aᵗ`.
    pub fn left_inverse(&self) -> Result<RMatrix> {
        let rank = self.rank();
        if rank < self.cols {
            return Err(Error::RankDeficient {
                context: format!("{}x{} matrix", self.rows, self.cols),
                rank,
                expected: self.cols,
            });
        }
        let at = self.transpose();
        at.checked_mul(self)?.solve_nonsingular(&at)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    /// `true` when every leading principal minor is positive.
    pub fn leading_minors_positive(&self) -> bool {
        self.is_square()
            && (1..=self.rows).all(|k| {
                self.submatrix(0, 0, k, k)
                    .det()
                    .map(|d| d.is_positive())
                    .unwrap_or(false)
            })
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RMatrix {
    type Output = RMatrix;

    fn mul(self, rhs: &RMatrix) -> RMatrix {
        self.checked_mul(rhs).expect("matrix product shape")
    }
}

impl Add for &RMatrix {
    type Output = RMatrix;

    fn add(self, rhs: &RMatrix) -> RMatrix {
        self.checked_add(rhs).expect("matrix sum shape")
    }
}

impl Sub for &RMatrix {
    type Output = RMatrix;

    fn sub(self, rhs: &RMatrix) -> RMatrix {
        self.checked_sub(rhs).expect("matrix difference shape")
    }
}

impl Neg for &RMatrix {
    type Output = RMatrix;

    fn neg(self) -> RMatrix {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RMatrix{:?}", self.to_strings())
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RMatrix {
        RMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RMatrix::identity(3).rank(), 3);
        assert_eq!(RMatrix::zeros(2, 4).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        let frac = RMatrix::from_i64(&[&[(1, 2), (1, 3)], &[(1, 4), (1, 6)]]);
        assert_eq!(frac.rank(), 1);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = RMatrix::from_i64(&[
            &[(1, 2), (3, 1), (0, 1)],
            &[(2, 3), (1, 1), (5, 1)],
            &[(1, 1), (-1, 4), (2, 1)],
        ]);
        // cofactor expansion along the first row
        let e = |i: usize, j: usize| a[(i, j)].clone();
        let expected = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        assert_eq!(a.det().unwrap(), expected);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), int(0));
    }

    #[test]
    fn solve_examples() {
        let b = m(&[&[3, -1], &[7, 2]]);
        assert_eq!(RMatrix::identity(2).solve(&b).unwrap(), b);
        let a = m(&[&[2, 0], &[0, 4]]);
        assert_eq!(
            a.solve(&RMatrix::identity(2)).unwrap(),
            RMatrix::from_i64(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 4)]])
        );
        let under = m(&[&[1, 1]]);
        assert_eq!(
            under.solve(&m(&[&[3]])).unwrap(),
            RMatrix::from_i64(&[&[(3, 2)], &[(3, 2)]])
        );
    }

    #[test]
    fn solve_rank_deficient_consistent_is_min_norm() {
        // Duplicate equation: x + y = 3 twice.
        let a = m(&[&[1, 1], &[1, 1]]);
        let x = a.solve(&m(&[&[3], &[3]])).unwrap();
        assert_eq!(x, RMatrix::from_i64(&[&[(3, 2)], &[(3, 2)]]));
    }

    #[test]
    fn solve_inconsistent() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(a.solve(&m(&[&[1], &[2]])), Err(Error::Inconsistent));
    }

    #[test]
    fn left_inverse_examples() {
        assert_eq!(RMatrix::identity(3).left_inverse().unwrap(), RMatrix::identity(3));
        assert_eq!(
            m(&[&[1], &[1]]).left_inverse().unwrap(),
            RMatrix::from_i64(&[&[(1, 2), (1, 2)]])
        );
        assert!(matches!(
            m(&[&[1, 2], &[2, 4]]).left_inverse(),
            Err(Error::RankDeficient {
                rank: 1,
                expected: 2,
                ..
            })
        ));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(RMatrix::identity(2).kron(&RMatrix::identity(3)), RMatrix::identity(6));
        let b = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(m(&[&[2]]).kron(&b), b.scale(&int(2)));
        let k = m(&[&[1, 0], &[0, 0]]).kron(&m(&[&[0, 1], &[0, 0]]));
        let mut expected = RMatrix::zeros(4, 4);
        expected[(0, 1)] = int(1);
        assert_eq!(k, expected);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn positive_definite_check() {
        let h = RMatrix::from_i64(&[&[(1, 18), (-1, 36)], &[(-1, 36), (1, 18)]]);
        assert!(h.leading_minors_positive());
        assert!(!m(&[&[1, 2], &[2, 1]]).leading_minors_positive());
    }
}

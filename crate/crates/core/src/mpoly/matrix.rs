use std::fmt;

use num_traits::Zero;

use super::MPoly;
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Rational};

/// Dense matrix of polynomials sharing one ambient dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    dim: usize,
    data: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, dim: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            dim,
            data: vec![MPoly::zero(dim); rows * cols],
        }
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        Self::from_constant(&RMatrix::identity(n), dim)
    }

    pub fn from_fn(rows: usize, cols: usize, dim: usize, mut f: impl FnMut(usize, usize) -> MPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.dim(), dim, "entry dimension");
                data.push(p);
            }
        }
        PolyMatrix { rows, cols, dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::ShapeMismatch("empty polynomial matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let dim = rows[0][0].dim();
        if let Some(p) = rows.iter().flatten().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(PolyMatrix {
            rows: r,
            cols: c,
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Column vector from its entries; panics on an empty list.
    pub fn column(entries: Vec<MPoly>) -> Self {
        let dim = entries[0].dim();
        let rows = entries.len();
        Self::from_fn(rows, 1, dim, |i, _| entries[i].clone())
    }

    pub fn row_vector(entries: Vec<MPoly>) -> Self {
        Self::column(entries).transpose()
    }

    pub fn from_constant(m: &RMatrix, dim: usize) -> Self {
        Self::from_fn(m.rows(), m.cols(), dim, |i, j| MPoly::constant(dim, m[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MPoly) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        assert_eq!(p.dim(), self.dim, "entry dimension");
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[MPoly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(MPoly::is_zero)
    }

    /// Maximum entry degree; `None` when every entry is zero.
    pub fn degree(&self) -> Option<usize> {
        self.data.iter().filter_map(MPoly::degree).max()
    }

    pub fn degree_at_most(&self, bound: i64) -> bool {
        self.data.iter().all(|p| p.degree_at_most(bound))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, f: &MPoly) -> Self {
        self.map(|p| p * f)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "submatrix out of range"
        );
        Self::from_fn(rows, cols, self.dim, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    fn check(&self, other: &PolyMatrix, same_shape: bool, op: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let ok = if same_shape {
            self.shape() == other.shape()
        } else {
            self.cols == other.rows
        };
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "{op}: {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check(other, true, "sum")?;
        Ok(Self::from_fn(self.rows, self.cols, self.dim, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check(other, true, "difference")?;
        Ok(Self::from_fn(self.rows, self.cols, self.dim, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check(other, false, "product")?;
        Ok(Self::from_fn(self.rows, other.cols, self.dim, |i, j| {
            let mut acc = MPoly::zero(self.dim);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    /// `self · m` for a constant matrix `m`.
    pub fn mul_const(&self, m: &RMatrix) -> Result<PolyMatrix> {
        if self.cols != m.rows() {
            return Err(Error::ShapeMismatch(format!(
                "product: {}x{} and {}x{}",
                self.rows,
                self.cols,
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self::from_fn(self.rows, m.cols(), self.dim, |i, j| {
            let mut acc = MPoly::zero(self.dim);
            for k in 0..self.cols {
                if !m[(k, j)].is_zero() {
                    acc = &acc + &self.get(i, k).scale(&m[(k, j)]);
                }
            }
            acc
        }))
    }

    /// `m · self` for a constant matrix `m`.
    pub fn const_mul(m: &RMatrix, p: &PolyMatrix) -> Result<PolyMatrix> {
        Ok(p.transpose().mul_const(&m.transpose())?.transpose())
    }

    pub fn kron(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (p, q) = other.shape();
        Ok(Self::from_fn(self.rows * p, self.cols * q, self.dim, |i, j| {
            self.get(i / p, j / q) * other.get(i % p, j % q)
        }))
    }

    /// For a column `P = (P_1, ..., P_r)ᵗ`, the `d×r` matrix `∇Pᵗ` with
    /// entry `(i, j) = ∂_i P_j`.
    pub fn grad_row(&self) -> Result<PolyMatrix> {
        if self.cols != 1 {
            return Err(Error::ShapeMismatch(format!(
                "grad_row expects a column, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(self.dim, self.rows, self.dim, |i, j| {
            self.get(j, 0).partial(i)
        }))
    }

    /// Row vector of column divergences `Σ_i ∂_i φ_ij`.
    pub fn column_divergence(&self) -> Result<PolyMatrix> {
        if self.rows != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "divergence needs {} rows, got {}",
                self.dim, self.rows
            )));
        }
        Ok(Self::from_fn(1, self.cols, self.dim, |_, j| {
            (0..self.rows).fold(MPoly::zero(self.dim), |acc, i| &acc + &self.get(i, j).partial(i))
        }))
    }

    /// Splits a `(blocks·n)×c` matrix into `blocks` vertical pieces.
    pub fn vsplit(&self, blocks: usize) -> Vec<PolyMatrix> {
        assert!(blocks > 0 && self.rows.is_multiple_of(blocks), "uneven vertical split");
        let n = self.rows / blocks;
        (0..blocks).map(|b| self.submatrix(b * n, 0, n, self.cols)).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn eval(&self, point: &[Rational]) -> RMatrix {
        RMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(point))
    }

    /// Constant term of each entry, as long as every entry is constant.
    pub fn as_constant(&self) -> Option<RMatrix> {
        if !self.degree_at_most(0) {
            return None;
        }
        let origin = vec![Rational::zero(); self.dim];
        Some(self.eval(&origin))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix[d={}]{:?}", self.dim, self.to_strings())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn grad_row_examples() {
        let monic1 = PolyMatrix::column(vec![p("x1"), p("x2")]);
        assert_eq!(monic1.grad_row().unwrap(), PolyMatrix::identity(2, 2));
        let one = PolyMatrix::column(vec![p("1")]);
        assert_eq!(one.grad_row().unwrap(), PolyMatrix::zeros(2, 1, 2));
        let quad = PolyMatrix::column(vec![p("x1^2"), p("x1*x2"), p("x2^2")]);
        let expected =
            PolyMatrix::from_rows(vec![vec![p("2*x1"), p("x2"), p("0")], vec![p("0"), p("x1"), p("2*x2")]]).unwrap();
        assert_eq!(quad.grad_row().unwrap(), expected);
    }

    #[test]
    fn divergence_examples() {
        assert!(PolyMatrix::identity(3, 3).column_divergence().unwrap().is_zero());
        let appell =
            PolyMatrix::from_rows(vec![vec![p("x1^2 - x1"), p("x1*x2")], vec![p("x1*x2"), p("x2^2 - x2")]]).unwrap();
        let div = appell.column_divergence().unwrap();
        assert_eq!(div.get(0, 0), &p("3*x1 - 1"));
        assert_eq!(div.get(0, 1), &p("3*x2 - 1"));
        let diag = PolyMatrix::from_rows(vec![vec![p("x1"), p("0")], vec![p("0"), p("x2")]]).unwrap();
        assert_eq!(
            diag.column_divergence().unwrap(),
            PolyMatrix::row_vector(vec![p("1"), p("1")])
        );
    }

    #[test]
    fn identity_times_gradient() {
        let f = p("x1^3*x2 - 4*x2^2");
        let g = f.gradient();
        assert_eq!(PolyMatrix::identity(2, 2).try_mul(&g).unwrap(), g);
    }

    #[test]
    fn shape_errors() {
        let a = PolyMatrix::zeros(2, 3, 2);
        assert!(matches!(a.try_mul(&a), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            a.try_add(&PolyMatrix::zeros(2, 3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kron_with_identity_blocks() {
        let row = PolyMatrix::row_vector(vec![p("x1"), p("x2 + 1")]);
        let k = PolyMatrix::identity(2, 2).kron(&row).unwrap();
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k.get(1, 3), &p("x2 + 1"));
        assert!(k.get(0, 2).is_zero());
    }

    #[test]
    fn constant_products() {
        let col = PolyMatrix::column(vec![p("x1"), p("x2")]);
        let m = RMatrix::from_i64(&[&[(1, 1), (2, 1)]]);
        let prod = PolyMatrix::const_mul(&m, &col).unwrap();
        assert_eq!(prod.get(0, 0), &p("x1 + 2*x2"));
        let row = col.transpose().mul_const(&m.transpose()).unwrap();
        assert_eq!(row.get(0, 0), &p("x1 + 2*x2"));
        assert_eq!(PolyMatrix::from_constant(&m, 2).as_constant().unwrap(), m);
        assert_eq!(prod.scale(&int(0)), PolyMatrix::zeros(1, 1, 2));
    }
}

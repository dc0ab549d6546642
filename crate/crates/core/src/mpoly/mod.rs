//! Multivariate polynomials over the rationals.
//!
//! Monomials within a total degree are ordered descending-lexicographically,
//! so `x1^n` comes first; [`monomial_basis`] fixes the ordering of every
//! vector polynomial in the crate.

mod matrix;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub use matrix::PolyMatrix;

/// Exponent vector `(α_1, ..., α_d)`.
///
/// Ordered by total degree first, then lexicographically; iterating a
/// `BTreeMap<MultiIndex, _>` therefore runs from low to high degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index needs d >= 1");
        MultiIndex(exponents)
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        Self::new(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Underscore-joined exponents, e.g. `1_0`.
    pub fn key(&self) -> String {
        self.0.iter().map(u32::to_string).collect::<Vec<_>>().join("_")
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `r_n = C(n + d - 1, n)`, the number of monomials of total degree `n`.
pub fn r_n(d: usize, n: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (d as u128 - 1 + k) / k;
    }
    acc as usize
}

/// All exponents with `|α| = n`, descending lexicographically.
pub fn monomial_basis(d: usize, n: usize) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, left: usize, rest: usize, out: &mut Vec<MultiIndex>) {
        if rest == 1 {
            prefix.push(left as u32);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a as u32);
            fill(prefix, left - a, rest - 1, out);
            prefix.pop();
        }
    }
    assert!(d >= 1, "dimension must be positive");
    let mut out = Vec::with_capacity(r_n(d, n));
    fill(&mut Vec::with_capacity(d), n, d, &mut out);
    out
}

/// All exponents with `|α| <= n`, by increasing degree.
pub fn graded_basis(d: usize, n: usize) -> Vec<MultiIndex> {
    (0..=n).flat_map(|k| monomial_basis(d, k)).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl MPoly {
    pub fn zero(dim: usize) -> Self {
        MPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate `x_{i+1}` (zero-based `i`).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for d = {dim}");
        Self::monomial(MultiIndex::unit(dim, i), Rational::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Self::zero(dim);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(MultiIndex::total_degree)
    }

    /// `true` when no stored term has total degree above `bound`
    /// (a negative bound admits only the zero polynomial).
    pub fn degree_at_most(&self, bound: i64) -> bool {
        self.degree().is_none_or(|d| (d as i64) <= bound)
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        assert_eq!(alpha.dim(), self.dim, "monomial dimension");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &MPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_dim(other)?;
        let mut out = MPoly::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, e) in &other.terms {
                out.add_term(a.plus(b), c * e);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.dim);
        }
        MPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.dim), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.dim);
        for (a, c) in &self.terms {
            let e = a.0[i];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b.0[i] -= 1;
            out.add_term(b, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Column `(∂_1 f, ..., ∂_d f)ᵗ`.
    pub fn gradient(&self) -> PolyMatrix {
        PolyMatrix::column((0..self.dim).map(|i| self.partial(i)).collect())
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim, "evaluation point dimension");
        self.terms
            .iter()
            .map(|(a, c)| {
                a.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Re-embeds a univariate polynomial as a polynomial in `x_{var+1}` of a
    /// `dim`-variate ring.
    pub fn embed_univariate(&self, dim: usize, var: usize) -> MPoly {
        assert_eq!(self.dim, 1, "embedding expects a univariate polynomial");
        MPoly::from_terms(
            dim,
            self.terms.iter().map(|(a, c)| {
                let mut e = vec![0; dim];
                e[var] = a.0[0];
                (MultiIndex::new(e), c.clone())
            }),
        )
    }

    /// `x_den^k · p(x_num / x_den)` for a univariate `p` of degree at most `k`.
    pub fn homogenize_univariate(&self, k: u32, dim: usize, num: usize, den: usize) -> Result<MPoly> {
        assert_eq!(self.dim, 1, "homogenization expects a univariate polynomial");
        if self.degree().is_some_and(|deg| deg > k as usize) {
            return Err(Error::BadParameter(format!(
                "degree {} exceeds homogenization degree {k}",
                self.degree().unwrap_or(0)
            )));
        }
        Ok(MPoly::from_terms(
            dim,
            self.terms.iter().map(|(a, c)| {
                let j = a.0[0];
                let mut e = vec![0; dim];
                e[num] += j;
                e[den] += k - j;
                (MultiIndex::new(e), c.clone())
            }),
        ))
    }

    /// Parses text such as `"x1^2 - 1/3*x1*x2 + 2"` in a `dim`-variate ring.
    pub fn parse(text: &str, dim: usize) -> Result<MPoly> {
        parse::parse_poly(text, dim)
    }
}

fn render_monomial(a: &MultiIndex) -> String {
    a.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{e}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms by total degree descending, then lexicographically descending;
/// coefficients as `p/q`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = render_monomial(a);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[d={}]({self})", self.dim)
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("polynomial dimensions")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("polynomial dimensions")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("polynomial dimensions")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn x(d: usize, i: usize) -> MPoly {
        MPoly::var(d, i)
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(monomial_basis(2, 2), vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
        assert_eq!(
            monomial_basis(3, 1),
            vec![mi(&[1, 0, 0]), mi(&[0, 1, 0]), mi(&[0, 0, 1])]
        );
        assert_eq!(monomial_basis(1, 5), vec![mi(&[5])]);
    }

    #[test]
    fn basis_counts_match_binomials() {
        for d in 1..5 {
            for n in 0..7 {
                let b = monomial_basis(d, n);
                assert_eq!(b.len(), r_n(d, n));
                assert!(b.windows(2).all(|w| w[0].exponents() > w[1].exponents()));
            }
        }
        assert_eq!(r_n(3, 4), 15);
    }

    #[test]
    fn gradient_examples() {
        let f = &(&x(2, 0) * &x(2, 0)) * &x(2, 1);
        let g = f.gradient();
        assert_eq!(g.get(0, 0), &(&x(2, 0) * &x(2, 1)).scale(&int(2)));
        assert_eq!(g.get(1, 0), &(&x(2, 0) * &x(2, 0)));
        assert!(MPoly::one(2).gradient().is_zero());
        let lin = &(&x(3, 0) + &x(3, 1)) + &x(3, 2);
        let g = lin.gradient();
        assert!((0..3).all(|i| g.get(i, 0) == &MPoly::one(3)));
    }

    #[test]
    fn arithmetic_examples() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        assert_eq!(&x1 * &x1, MPoly::monomial(mi(&[2, 0]), int(1)));
        let lhs = &(&x1 + &x2) * &(&x1 - &x2);
        assert_eq!(lhs, &(&x1 * &x1) - &(&x2 * &x2));
        assert!(matches!(x1.try_mul(&x(3, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degree_and_zero() {
        assert_eq!(MPoly::zero(2).degree(), None);
        assert!(MPoly::zero(2).degree_at_most(-1));
        assert!(!MPoly::one(2).degree_at_most(-1));
        let p = &(&x(2, 0) * &x(2, 1)) + &MPoly::one(2);
        assert_eq!(p.degree(), Some(2));
        let cancel = &p - &p;
        assert!(cancel.is_zero());
    }

    #[test]
    fn rendering() {
        let x1 = x(2, 0);
        let p = &x1 - &MPoly::constant(2, rat(1, 3));
        assert_eq!(p.to_string(), "x1 - 1/3");
        let q = MPoly::from_terms(
            2,
            [
                (mi(&[0, 2]), rat(-3, 2)),
                (mi(&[2, 0]), int(1)),
                (mi(&[1, 1]), int(-1)),
                (mi(&[0, 0]), int(2)),
            ],
        );
        assert_eq!(q.to_string(), "x1^2 - x1*x2 - 3/2*x2^2 + 2");
        assert_eq!((-&MPoly::one(1)).to_string(), "-1");
        assert_eq!(MPoly::zero(3).to_string(), "0");
    }

    #[test]
    fn homogenization() {
        // p(t) = 3t^2 - t + 5, k = 2  ->  3 x2^2 - x1 x2 + 5 x1^2
        let t = MPoly::var(1, 0);
        let p = &(&(&t * &t).scale(&int(3)) - &t) + &MPoly::constant(1, int(5));
        let h = p.homogenize_univariate(2, 2, 1, 0).unwrap();
        assert_eq!(h, MPoly::parse("3*x2^2 - x1*x2 + 5*x1^2", 2).unwrap());
        assert!(p.homogenize_univariate(1, 2, 1, 0).is_err());
    }

    #[test]
    fn eval_and_embed() {
        let p = MPoly::parse("x1^2*x2 - 2", 2).unwrap();
        assert_eq!(p.eval(&[int(3), rat(1, 2)]), rat(5, 2));
        let t = &MPoly::var(1, 0) + &MPoly::one(1);
        assert_eq!(t.embed_univariate(3, 2), MPoly::parse("x3 + 1", 3).unwrap());
    }
}

//! Three-term recurrence `x_i ℙ_n = A_{n,i} ℙ_{n+1} + B_{n,i} ℙ_n + C_{n,i} ℙ_{n-1}`
//! and its forward and backward inversions.
//!
//! Every identity is checked as an exact polynomial identity before data is
//! returned, and the rank conditions are checked rather than assumed.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::functionals::MomentFunctional;
use crate::linalg::{RMatrix, Rational};
use crate::mpoly::{monomial_basis, MPoly, MultiIndex, PolyMatrix};
use crate::wops::WopsBasis;

/// `(A_{n,i}, B_{n,i}, C_{n,i})` for one degree and coordinate.
/// `c` is `None` at `n = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeTerm {
    pub n: usize,
    pub coord: usize,
    pub a: RMatrix,
    pub b: RMatrix,
    pub c: Option<RMatrix>,
}

/// Left inverse of the stacked `A_n` split into `D_{n,i}ᵗ`, with the
/// closed-form `E_n^{n+1} = -Σ D_{n,i}ᵗ B_{n,i}` and
/// `E_{n-1}^{n+1} = -Σ D_{n,i}ᵗ C_{n,i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardInverse {
    pub n: usize,
    pub d_blocks: Vec<RMatrix>,
    pub e_same: RMatrix,
    pub e_prev: Option<RMatrix>,
}

#[derive(Debug, Clone)]
pub struct DegreeRecurrence {
    pub n: usize,
    pub terms: Vec<ThreeTerm>,
    pub forward: ForwardInverse,
    /// `G_{n,i}` per coordinate; empty at `n = 0`.
    pub backward: Vec<RMatrix>,
}

#[derive(Debug, Clone)]
pub struct RecurrenceData {
    pub dim: usize,
    pub degrees: Vec<DegreeRecurrence>,
}

/// The 0/1 shift matrix sending `α` to `α + e_i` between consecutive
/// monomial bases.
pub fn shift_matrix(d: usize, n: usize, coord: usize) -> RMatrix {
    let rows = monomial_basis(d, n);
    let cols = monomial_basis(d, n + 1);
    let step = MultiIndex::unit(d, coord);
    RMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        if rows[i].plus(&step) == cols[j] {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

fn column_times(m: &RMatrix, p: &PolyMatrix) -> Result<PolyMatrix> {
    PolyMatrix::const_mul(m, p)
}

/// `A_{n,i}`, `B_{n,i}`, `C_{n,i}` with the recurrence verified exactly.
/// `coord` is zero-based.
pub fn recurrence_matrices(u: &MomentFunctional, basis: &WopsBasis, n: usize, coord: usize) -> Result<ThreeTerm> {
    let d = basis.dim();
    if coord >= d {
        return Err(Error::BadIndex(format!("coordinate {coord} for d = {d}")));
    }
    if n + 1 > basis.max_degree() {
        return Err(Error::DegreeOverflow {
            degree: n + 1,
            max: basis.max_degree(),
        });
    }
    let xi = MPoly::var(d, coord);
    let xp = basis.p(n).scale_poly(&xi);
    let a = shift_matrix(d, n, coord);
    let b = u.pair_outer(&xp, basis.p(n))?.checked_mul(basis.h_inv(n))?;
    let c = if n == 0 {
        None
    } else {
        Some(u.pair_outer(&xp, basis.p(n - 1))?.checked_mul(basis.h_inv(n - 1))?)
    };
    let mut rhs = column_times(&a, basis.p(n + 1))?.try_add(&column_times(&b, basis.p(n))?)?;
    if let Some(c) = &c {
        rhs = rhs.try_add(&column_times(c, basis.p(n - 1))?)?;
    }
    if rhs != xp {
        return Err(Error::IdentityViolation(format!(
            "three-term recurrence fails at n = {n}, i = {}",
            coord + 1
        )));
    }
    Ok(ThreeTerm { n, coord, a, b, c })
}

/// `D_{n,i}ᵗ` and the E-matrices from the per-coordinate recurrences of one
/// degree.
pub fn forward_inverse_from(terms: &[ThreeTerm]) -> Result<ForwardInverse> {
    let n = terms.first().map(|t| t.n).unwrap_or(0);
    let stacked = RMatrix::vstack(&terms.iter().map(|t| t.a.clone()).collect::<Vec<_>>())?;
    let expected = stacked.cols();
    let rank = stacked.rank();
    if rank != expected {
        return Err(Error::RankDeficient {
            context: format!("stacked A_{n}"),
            rank,
            expected,
        });
    }
    let dt = stacked.left_inverse()?;
    let rn = terms[0].a.rows();
    let d_blocks: Vec<RMatrix> = (0..terms.len())
        .map(|i| dt.submatrix(0, i * rn, dt.rows(), rn))
        .collect();
    let mut e_same = RMatrix::zeros(dt.rows(), rn);
    let mut e_prev: Option<RMatrix> = None;
    for (blk, t) in d_blocks.iter().zip(terms) {
        e_same = e_same.checked_sub(&blk.checked_mul(&t.b)?)?;
        if let Some(c) = &t.c {
            let term = blk.checked_mul(c)?;
            e_prev = Some(match e_prev {
                Some(e) => e.checked_sub(&term)?,
                None => -&term,
            });
        }
    }
    Ok(ForwardInverse {
        n,
        d_blocks,
        e_same,
        e_prev,
    })
}

/// Checks `ℙ_{n+1} = Σ_i x_i D_{n,i}ᵗ ℙ_n + E_n^{n+1} ℙ_n + E_{n-1}^{n+1} ℙ_{n-1}`.
pub fn verify_forward(basis: &WopsBasis, fi: &ForwardInverse) -> Result<()> {
    let n = fi.n;
    let d = basis.dim();
    let mut rhs = column_times(&fi.e_same, basis.p(n))?;
    for (i, blk) in fi.d_blocks.iter().enumerate() {
        rhs = rhs.try_add(&column_times(blk, basis.p(n))?.scale_poly(&MPoly::var(d, i)))?;
    }
    if let Some(e) = &fi.e_prev {
        rhs = rhs.try_add(&column_times(e, basis.p(n - 1))?)?;
    }
    if &rhs != basis.p(n + 1) {
        return Err(Error::IdentityViolation(format!(
            "forward inverted recurrence fails at n = {n}"
        )));
    }
    Ok(())
}

/// `G_{n,i}`, the canonical left inverse of `C_{n,i}`.
pub fn backward_inverse_from(t: &ThreeTerm) -> Result<RMatrix> {
    let c =
        t.c.as_ref()
            .ok_or_else(|| Error::BadIndex("backward inversion needs n >= 1".into()))?;
    c.left_inverse().map_err(|e| match e {
        Error::RankDeficient { rank, expected, .. } => Error::RankDeficient {
            context: format!("C_{{{},{}}}", t.n, t.coord + 1),
            rank,
            expected,
        },
        other => other,
    })
}

/// Checks `ℙ_{n-1} = -G A ℙ_{n+1} + (x_i G - G B) ℙ_n`.
pub fn verify_backward(basis: &WopsBasis, t: &ThreeTerm, g: &RMatrix) -> Result<()> {
    let n = t.n;
    let xi = MPoly::var(basis.dim(), t.coord);
    let ga = g.checked_mul(&t.a)?;
    let gb = g.checked_mul(&t.b)?;
    let rhs = column_times(&ga, basis.p(n + 1))?
        .scale(&-Rational::one())
        .try_add(&column_times(g, basis.p(n))?.scale_poly(&xi))?
        .try_sub(&column_times(&gb, basis.p(n))?)?;
    if &rhs != basis.p(n - 1) {
        return Err(Error::IdentityViolation(format!(
            "backward inverted recurrence fails at n = {n}, i = {}",
            t.coord + 1
        )));
    }
    Ok(())
}

fn check_rank(m: &RMatrix, expected: usize, context: String) -> Result<()> {
    let rank = m.rank();
    if rank != expected {
        return Err(Error::RankDeficient {
            context,
            rank,
            expected,
        });
    }
    Ok(())
}

/// All recurrence data for `n = 0..N-1`, with every identity and rank
/// condition verified.
pub fn recurrence_data(u: &MomentFunctional, basis: &WopsBasis) -> Result<RecurrenceData> {
    let d = basis.dim();
    let mut degrees = Vec::new();
    for n in 0..basis.max_degree() {
        let terms = (0..d)
            .map(|i| recurrence_matrices(u, basis, n, i))
            .collect::<Result<Vec<_>>>()?;
        for t in &terms {
            check_rank(&t.a, basis.r(n), format!("A_{{{n},{}}}", t.coord + 1))?;
            if let Some(c) = &t.c {
                check_rank(c, basis.r(n - 1), format!("C_{{{n},{}}}", t.coord + 1))?;
            }
        }
        let forward = forward_inverse_from(&terms)?;
        verify_forward(basis, &forward)?;
        let mut backward = Vec::new();
        if n >= 1 {
            for t in &terms {
                let g = backward_inverse_from(t)?;
                verify_backward(basis, t, &g)?;
                backward.push(g);
            }
        }
        degrees.push(DegreeRecurrence {
            n,
            terms,
            forward,
            backward,
        });
    }
    Ok(RecurrenceData { dim: d, degrees })
}

impl RecurrenceData {
    pub fn degree(&self, n: usize) -> &DegreeRecurrence {
        &self.degrees[n]
    }

    pub fn forward_inverse(&self, n: usize) -> &ForwardInverse {
        &self.degrees[n].forward
    }

    pub fn backward_inverse(&self, n: usize, coord: usize) -> Option<&RMatrix> {
        self.degrees[n].backward.get(coord)
    }
}

/// `⟨u, x_i ℙ_n ℙ_{n+1}ᵗ⟩ H_{n+1}⁻¹`, which must reproduce the structural
/// shift matrix.
pub fn a_from_moments(u: &MomentFunctional, basis: &WopsBasis, n: usize, coord: usize) -> Result<RMatrix> {
    let xp = basis.p(n).scale_poly(&MPoly::var(basis.dim(), coord));
    u.pair_outer(&xp, basis.p(n + 1))?.checked_mul(basis.h_inv(n + 1))
}

//! Pearson pairs `(Φ, Ψ)` and the weak form of `div(Φu) = Ψᵗu`:
//! `⟨u, Φ∇f + Ψf⟩ = 0` for every polynomial `f`.
//!
//! Verification is finite-degree: residuals are checked for every monomial
//! up to a caller-chosen degree.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::{LaguerreJacobiParams, MomentFunctional, SimplexJacobiParams};
use crate::linalg::{RMatrix, Rational};
use crate::mpoly::{graded_basis, MPoly, MultiIndex, PolyMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PearsonPair {
    phi: PolyMatrix,
    psi: PolyMatrix,
    psi_tilde: PolyMatrix,
    p: usize,
    q: usize,
    s: usize,
}

impl PearsonPair {
    /// Validates shapes, symmetry of `Φ`, `Φ ≠ 0` and `deg Ψ ≥ 1`.
    pub fn new(phi: PolyMatrix, psi: PolyMatrix) -> Result<Self> {
        let d = phi.dim();
        if phi.shape() != (d, d) {
            return Err(Error::ShapeMismatch(format!(
                "Φ must be {d}x{d}, got {}x{}",
                phi.rows(),
                phi.cols()
            )));
        }
        if psi.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: psi.dim(),
            });
        }
        if psi.shape() != (d, 1) {
            return Err(Error::ShapeMismatch(format!(
                "Ψ must be {d}x1, got {}x{}",
                psi.rows(),
                psi.cols()
            )));
        }
        if !phi.is_symmetric() {
            return Err(Error::BadParameter("Φ must be symmetric".into()));
        }
        let p = phi
            .degree()
            .ok_or_else(|| Error::BadParameter("Φ must be nonzero".into()))?;
        let q = psi.degree().unwrap_or(0);
        if q < 1 {
            return Err(Error::BadParameter(format!("deg Ψ = {q}, must be at least 1")));
        }
        let s = (p as i64 - 2).max(q as i64 - 1) as usize;
        let psi_tilde = psi.try_sub(&phi.column_divergence()?.transpose())?;
        Ok(PearsonPair {
            phi,
            psi,
            psi_tilde,
            p,
            q,
            s,
        })
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &PolyMatrix {
        &self.psi
    }

    /// `Ψ̃ = Ψ - (div Φ)ᵗ`.
    pub fn psi_tilde(&self) -> &PolyMatrix {
        &self.psi_tilde
    }

    /// `deg Φ`.
    pub fn p(&self) -> usize {
        self.p
    }

    /// `deg Ψ`.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Class number `max(p - 2, q - 1)`.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Same `Φ`, replaced `Ψ`.
    pub fn with_psi(&self, psi: PolyMatrix) -> Result<Self> {
        Self::new(self.phi.clone(), psi)
    }
}

fn rational_u(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

fn appell_phi(d: usize) -> PolyMatrix {
    PolyMatrix::from_fn(d, d, d, |i, j| {
        let xi = MPoly::var(d, i);
        if i == j {
            &xi * &(&xi - &MPoly::one(d))
        } else {
            &xi * &MPoly::var(d, j)
        }
    })
}

/// Appell pair: `φ_ii = x_i(x_i - 1)`, `φ_ij = x_i x_j`,
/// `ψ_i = (|α| + β + d + 1) x_i - (α_i + 1)`.
pub fn appell_pair(params: &SimplexJacobiParams) -> Result<PearsonPair> {
    params.validate()?;
    let d = params.dim();
    let total = params.alpha.iter().fold(Rational::zero(), |a, x| a + x);
    let lead = total + &params.beta + rational_u(d + 1);
    let psi = PolyMatrix::column(
        (0..d)
            .map(|i| &MPoly::var(d, i).scale(&lead) - &MPoly::constant(d, &params.alpha[i] + Rational::one()))
            .collect(),
    );
    PearsonPair::new(appell_phi(d), psi)
}

/// `Ψ` with the leading coefficient `|α| + d` exactly as it is usually
/// printed. It does not satisfy the weak Pearson equation on the simplex
/// functional; kept for comparison against [`appell_pair`].
pub fn appell_psi_as_printed(params: &SimplexJacobiParams) -> PolyMatrix {
    let d = params.dim();
    let total = params.alpha.iter().fold(Rational::zero(), |a, x| a + x);
    let lead = total + rational_u(d);
    PolyMatrix::column(
        (0..d)
            .map(|i| &MPoly::var(d, i).scale(&lead) - &MPoly::constant(d, &params.alpha[i] + Rational::one()))
            .collect(),
    )
}

/// Pair for `u + λδ_0` obtained from the Appell pair by multiplying with
/// `x_i`: `Φ̂ = x_i Φ`, `Ψ̂ = Φ e_i + x_i Ψ`. `index` is zero-based.
pub fn appell_type_pair(params: &SimplexJacobiParams, index: usize) -> Result<PearsonPair> {
    let base = appell_pair(params)?;
    let d = params.dim();
    if index >= d {
        return Err(Error::BadParameter(format!(
            "modification index {} outside 1..={d}",
            index + 1
        )));
    }
    let xi = MPoly::var(d, index);
    let phi = base.phi().scale_poly(&xi);
    let psi = PolyMatrix::from_fn(d, 1, d, |j, _| base.phi().get(index, j) + &(&xi * base.psi().get(j, 0)));
    PearsonPair::new(phi, psi)
}

/// Laguerre × Jacobi pair: diagonal `Φ` with `x_1(x_1 - x_d)`,
/// `x_2, ..., x_{d-1}`, `x_1²(x_1 - x_d)`.
pub fn example2_pair(params: &LaguerreJacobiParams) -> Result<PearsonPair> {
    params.validate()?;
    let d = params.dim();
    let x = |i: usize| MPoly::var(d, i);
    let c = |r: Rational| MPoly::constant(d, r);
    let a = &params.a;
    let gap = &x(0) - &x(d - 1);
    let phi = PolyMatrix::from_fn(d, d, d, |i, j| {
        if i != j {
            MPoly::zero(d)
        } else if i == 0 {
            &x(0) * &gap
        } else if i == d - 1 {
            &(&x(0) * &x(0)) * &gap
        } else {
            x(i)
        }
    });
    let one = Rational::one();
    let two = rational_u(2);
    let psi = PolyMatrix::from_fn(d, 1, d, |i, _| {
        if i == 0 {
            let mut f = &(&x(0) * &x(d - 1)) - &(&x(0) * &x(0));
            f = &f + &x(0).scale(&(&a[0] + &two));
            &f + &x(d - 1).scale(&(&a[d - 1] - &a[0] - &one))
        } else if i == d - 1 {
            (&x(0) * &x(0)).scale(&-(&a[d - 1] + &one))
        } else {
            &c(a[i].clone()) - &x(i)
        }
    });
    PearsonPair::new(phi, psi)
}

/// `⟨u, Φ∇f + Ψf⟩` as a `d × 1` matrix.
pub fn weak_residual(u: &MomentFunctional, pair: &PearsonPair, f: &MPoly) -> Result<RMatrix> {
    pearson_residual(u, pair.phi(), pair.psi(), f)
}

/// [`weak_residual`] for an unvalidated `(Φ, Ψ)`.
pub fn pearson_residual(u: &MomentFunctional, phi: &PolyMatrix, psi: &PolyMatrix, f: &MPoly) -> Result<RMatrix> {
    if u.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: u.dim(),
        });
    }
    let expr = phi.try_mul(&f.gradient())?.try_add(&psi.scale_poly(f))?;
    u.pair_matrix(&expr)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalReport {
    pub residuals_zero: bool,
    pub det_condition: Rational,
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub degree: usize,
    /// Monomials with a nonzero residual, in graded order.
    pub failures: Vec<(MultiIndex, RMatrix)>,
}

impl SemiclassicalReport {
    pub fn passed(&self) -> bool {
        self.residuals_zero && !self.det_condition.is_zero() && self.q >= 1
    }
}

pub fn is_semiclassical(u: &MomentFunctional, pair: &PearsonPair, degree: usize) -> Result<SemiclassicalReport> {
    is_semiclassical_with(Execution::default(), u, pair, degree)
}

/// Weak residuals for every monomial `|α| <= degree`, `det⟨u, Φ⟩`, and `s`.
pub fn is_semiclassical_with(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    degree: usize,
) -> Result<SemiclassicalReport> {
    let failures = residual_sweep(exec, u, pair, degree)?;
    let det_condition = u.pair_matrix(pair.phi())?.det()?;
    Ok(SemiclassicalReport {
        residuals_zero: failures.is_empty(),
        det_condition,
        p: pair.p(),
        q: pair.q(),
        s: pair.s(),
        degree,
        failures,
    })
}

/// Nonzero weak residuals among the monomials of degree `<= degree`.
pub fn residual_sweep(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    degree: usize,
) -> Result<Vec<(MultiIndex, RMatrix)>> {
    let monomials = graded_basis(pair.dim(), degree);
    let residuals = exec.map(&monomials, |a| {
        weak_residual(u, pair, &MPoly::monomial(a.clone(), Rational::one())).map(|r| (a.clone(), r))
    });
    let mut out = Vec::new();
    for r in residuals {
        let (a, r) = r?;
        if !r.is_zero() {
            out.push((a, r));
        }
    }
    Ok(out)
}

/// Weak residual of `div((Φ⊗I_h)u) = (Ψᵗ⊗I_h)u` against an `h × 1` test
/// polynomial `F`: `⟨u, (Φ⊗I_h)∇F + (Ψ⊗I_h)F⟩`, where `∇F` stacks
/// `∂_1F, ..., ∂_dF`. Entry `i·h + k` pairs Pearson row `i` with `F_k`.
pub fn kronecker_weak_residual(
    u: &MomentFunctional,
    pair: &PearsonPair,
    h: usize,
    test: &PolyMatrix,
) -> Result<RMatrix> {
    let d = pair.dim();
    if test.dim() != d || u.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if test.dim() != d { test.dim() } else { u.dim() },
        });
    }
    if h == 0 || test.shape() != (h, 1) {
        return Err(Error::ShapeMismatch(format!(
            "test polynomial must be {h}x1, got {}x{}",
            test.rows(),
            test.cols()
        )));
    }
    let ih = PolyMatrix::identity(h, d);
    let phi_k = pair.phi().kron(&ih)?;
    let psi_k = pair.psi().kron(&ih)?;
    let grad = PolyMatrix::from_fn(d * h, 1, d, |row, _| test.get(row % h, 0).partial(row / h));
    let expr = phi_k.try_mul(&grad)?.try_add(&psi_k.try_mul(test)?)?;
    u.pair_matrix(&expr)
}

/// `L[f] = Σ φ_ij ∂²_ij f + Σ ψ_i ∂_i f`, cross-checked against
/// `div(Φ∇f) + Ψ̃ᵗ∇f`.
pub fn l_apply(pair: &PearsonPair, f: &MPoly) -> MPoly {
    let explicit = l_explicit(pair, f);
    let divergence_form = l_divergence_form(pair, f);
    assert_eq!(
        explicit, divergence_form,
        "the two forms of L disagree on {f}: transcription error in Φ, Ψ or Ψ̃"
    );
    explicit
}

fn l_explicit(pair: &PearsonPair, f: &MPoly) -> MPoly {
    let d = pair.dim();
    let mut out = MPoly::zero(d);
    for i in 0..d {
        let di = f.partial(i);
        if di.is_zero() {
            continue;
        }
        out = &out + &(pair.psi().get(i, 0) * &di);
        for j in 0..d {
            let phi = pair.phi().get(i, j);
            if !phi.is_zero() {
                out = &out + &(phi * &di.partial(j));
            }
        }
    }
    out
}

fn l_divergence_form(pair: &PearsonPair, f: &MPoly) -> MPoly {
    let grad = f.gradient();
    let flux = pair.phi().try_mul(&grad).expect("Φ∇f shape");
    let div = (0..pair.dim()).fold(MPoly::zero(pair.dim()), |acc, i| &acc + &flux.get(i, 0).partial(i));
    let first = pair.psi_tilde().transpose().try_mul(&grad).expect("Ψ̃ᵗ∇f shape");
    &div + first.get(0, 0)
}

/// Entrywise `L` on a row of polynomials.
pub fn l_apply_row(pair: &PearsonPair, row: &PolyMatrix) -> PolyMatrix {
    row.map(|f| l_apply(pair, f))
}

/// `⟨u, L[x^α]⟩ = ⟨L*[u], x^α⟩` for every `|α| <= degree`.
pub fn l_star_moments(u: &MomentFunctional, pair: &PearsonPair, degree: usize) -> Result<Vec<(MultiIndex, Rational)>> {
    l_star_moments_with(Execution::default(), u, pair, degree)
}

pub fn l_star_moments_with(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    degree: usize,
) -> Result<Vec<(MultiIndex, Rational)>> {
    let monomials = graded_basis(pair.dim(), degree);
    exec.map(&monomials, |a| {
        let lf = l_apply(pair, &MPoly::monomial(a.clone(), Rational::one()));
        u.pair(&lf).map(|v| (a.clone(), v))
    })
    .into_iter()
    .collect()
}

//! Structure relations of a semiclassical functional.
//!
//! Given a quasi-definite `u`, its monic basis and a Pearson pair, this
//! module computes
//! - the coefficients `F_j^n` of `Φ∇ℙ_nᵗ = Σ_j (I_d ⊗ ℙ_jᵗ) F_j^n`,
//! - the gradient Gram blocks `Q_{m,n} = ⟨u, (∇ℙ_mᵗ)ᵗ Φ ∇ℙ_nᵗ⟩`,
//! - the coefficients `Λ_i^n` of `L[ℙ_nᵗ] = Σ_i ℙ_iᵗ Λ_i^n`,
//! - the two-term compressed forms of both expansions,
//! - `Ψ` recovered from `Φ` alone.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::MomentFunctional;
use crate::linalg::{RMatrix, Rational};
use crate::mpoly::{graded_basis, MPoly, MultiIndex, PolyMatrix};
use crate::pearson::{l_apply_row, pearson_residual, PearsonPair};
use crate::wops::{expand_in_basis, WopsBasis};

/// Whether a coefficient outside its band is an error or only recorded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheckMode {
    #[default]
    Strict,
    Explore,
}

fn overflow(degree: usize, basis: &WopsBasis) -> Result<()> {
    if degree > basis.max_degree() {
        return Err(Error::DegreeOverflow {
            degree,
            max: basis.max_degree(),
        });
    }
    Ok(())
}

fn check_dims(u: &MomentFunctional, pair: &PearsonPair, basis: &WopsBasis) -> Result<()> {
    for found in [u.dim(), basis.dim()] {
        if found != pair.dim() {
            return Err(Error::DimensionMismatch {
                expected: pair.dim(),
                found,
            });
        }
    }
    Ok(())
}

/// `∇ℙ_nᵗ`, `d × r_n`.
pub fn grad_block(basis: &WopsBasis, n: usize) -> PolyMatrix {
    basis.p(n).grad_row().expect("ℙ_n is a column")
}

/// `Q_{m,n} = ⟨u, (∇ℙ_mᵗ)ᵗ Φ ∇ℙ_nᵗ⟩`, `r_m × r_n`.
pub fn gradient_gram(
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    m: usize,
    n: usize,
) -> Result<RMatrix> {
    check_dims(u, pair, basis)?;
    overflow(m.max(n), basis)?;
    gram_from_grads(u, pair, &grad_block(basis, m), &grad_block(basis, n))
}

fn gram_from_grads(u: &MomentFunctional, pair: &PearsonPair, gm: &PolyMatrix, gn: &PolyMatrix) -> Result<RMatrix> {
    let expr = gm.transpose().try_mul(pair.phi())?.try_mul(gn)?;
    u.pair_matrix(&expr)
}

/// `Q_{m,n}` for all `m, n <= N`, indexed `[m][n]`.
pub fn gradient_gram_table(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
) -> Result<Vec<Vec<RMatrix>>> {
    check_dims(u, pair, basis)?;
    let top = basis.max_degree() + 1;
    let grads: Vec<PolyMatrix> = (0..top).map(|n| grad_block(basis, n)).collect();
    let flat = exec.map_range(0..top * top, |k| {
        gram_from_grads(u, pair, &grads[k / top], &grads[k % top])
    });
    let mut table = Vec::with_capacity(top);
    let mut it = flat.into_iter();
    for _ in 0..top {
        table.push(it.by_ref().take(top).collect::<Result<Vec<_>>>()?);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureCoeffs {
    pub n: usize,
    /// `F_j^n` for `j = 0..=n+p-1`, each `d·r_j × r_n`.
    pub f: Vec<RMatrix>,
    /// Degrees `j` with a nonzero `F_j^n` outside the band (explore mode).
    pub band_violations: Vec<usize>,
}

impl StructureCoeffs {
    pub fn nonzero_indices(&self) -> Vec<usize> {
        nonzero(&self.f)
    }
}

fn nonzero(blocks: &[RMatrix]) -> Vec<usize> {
    (0..blocks.len()).filter(|&j| !blocks[j].is_zero()).collect()
}

pub fn structure_coeffs(
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    n: usize,
    mode: CheckMode,
) -> Result<StructureCoeffs> {
    structure_coeffs_with(Execution::default(), u, pair, basis, n, mode)
}

/// Fourier expansion of each row block of `Φ∇ℙ_nᵗ`, with the
/// reconstruction verified and the band `n-s-1 <= j <= n+p-1` checked when
/// `n >= s+1`.
pub fn structure_coeffs_with(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    n: usize,
    mode: CheckMode,
) -> Result<StructureCoeffs> {
    check_dims(u, pair, basis)?;
    let (d, p, s) = (pair.dim(), pair.p(), pair.s());
    let top = (n + p).saturating_sub(1);
    overflow(top, basis)?;
    let lhs = pair.phi().try_mul(&grad_block(basis, n))?;
    let rn = basis.r(n);
    let expansions = exec.map_range(0..d * rn, |e| expand_in_basis(u, basis, lhs.get(e / rn, e % rn)));
    let expansions = expansions.into_iter().collect::<Result<Vec<_>>>()?;

    let mut f = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let rj = basis.r(j);
        let mut block = RMatrix::zeros(d * rj, rn);
        for i in 0..d {
            for k in 0..rn {
                if let Some(c) = expansions[i * rn + k].get(j) {
                    // Expansion of the zero polynomial is a single 1x1 block.
                    for l in 0..c.cols() {
                        block[(i * rj + l, k)] = c[(0, l)].clone();
                    }
                }
            }
        }
        f.push(block);
    }

    let mut rebuilt = PolyMatrix::zeros(d, rn, d);
    for (j, fj) in f.iter().enumerate() {
        let ip = PolyMatrix::identity(d, d).kron(&basis.p(j).transpose())?;
        rebuilt = rebuilt.try_add(&ip.mul_const(fj)?)?;
    }
    if rebuilt != lhs {
        return Err(Error::IdentityViolation(format!(
            "structure relation does not reconstruct Φ∇ℙ_{n}ᵗ"
        )));
    }

    let mut band_violations = Vec::new();
    if n > s {
        let low = n - s - 1;
        for j in nonzero(&f) {
            if j < low || j > n + p - 1 {
                band_violations.push(j);
            }
        }
    }
    if mode == CheckMode::Strict {
        if let Some(&index) = band_violations.first() {
            return Err(Error::BandViolation { family: "F", n, index });
        }
    }
    Ok(StructureCoeffs { n, f, band_violations })
}

/// Multipliers `m_l` with `deg m_l <= bounds[l]` and `Σ m_l g_l = t` for
/// each target `t`, the minimum-norm solution in coefficient space. A
/// negative bound forces `m_l = 0`. All targets share one elimination.
pub fn solve_degree_bounded(generators: &[&MPoly], bounds: &[i64], targets: &[&MPoly]) -> Result<Vec<Vec<MPoly>>> {
    let Some(d) = targets.first().map(|t| t.dim()) else {
        return Ok(Vec::new());
    };
    let mut columns: Vec<(usize, MPoly, MultiIndex)> = Vec::new();
    for (l, (g, &b)) in generators.iter().zip(bounds).enumerate() {
        if b < 0 {
            continue;
        }
        for beta in graded_basis(d, b as usize) {
            let mono = MPoly::monomial(beta.clone(), Rational::one());
            columns.push((l, g.try_mul(&mono)?, beta));
        }
    }
    let mut rows: Vec<MultiIndex> = targets.iter().flat_map(|t| t.terms().map(|(a, _)| a.clone())).collect();
    for (_, c, _) in &columns {
        rows.extend(c.terms().map(|(a, _)| a.clone()));
    }
    rows.sort();
    rows.dedup();
    let mut out = vec![vec![MPoly::zero(d); generators.len()]; targets.len()];
    if columns.is_empty() {
        if let Some(t) = targets.iter().find(|t| !t.is_zero()) {
            return Err(Error::NoSolution(format!("{t} with all multipliers forced to zero")));
        }
        return Ok(out);
    }
    let a = RMatrix::from_fn(rows.len(), columns.len(), |i, j| columns[j].1.coeff(&rows[i]));
    let b = RMatrix::from_fn(rows.len(), targets.len(), |i, k| targets[k].coeff(&rows[i]));
    let x = a.solve(&b).map_err(|e| match e {
        Error::Inconsistent => Error::NoSolution("target outside the degree-bounded span".into()),
        other => other,
    })?;
    for (k, sol) in out.iter_mut().enumerate() {
        for (j, (l, _, beta)) in columns.iter().enumerate() {
            if !x[(j, k)].is_zero() {
                sol[*l].add_term(beta.clone(), x[(j, k)].clone());
            }
        }
    }
    Ok(out)
}

fn require_above_class(pair: &PearsonPair, n: usize) -> Result<()> {
    if n <= pair.s() {
        return Err(Error::BadParameter(format!(
            "compressed form needs n >= s + 1 = {}, got n = {n}",
            pair.s() + 1
        )));
    }
    Ok(())
}

/// `M_1^n` (`d·r_{n+1} × r_n`, degree `<= s`) and `M_2^n` (`d·r_n × r_n`,
/// degree `<= s+1`) with
/// `Φ∇ℙ_nᵗ = (I_d ⊗ ℙ_{n+1}ᵗ) M_1^n + (I_d ⊗ ℙ_nᵗ) M_2^n`.
pub fn compress_structure(pair: &PearsonPair, basis: &WopsBasis, n: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    require_above_class(pair, n)?;
    overflow(n + 1, basis)?;
    let (d, s) = (pair.dim(), pair.s() as i64);
    let (r1, r0) = (basis.r(n + 1), basis.r(n));
    let lhs = pair.phi().try_mul(&grad_block(basis, n))?;
    let gens: Vec<&MPoly> = basis.p(n + 1).entries().iter().chain(basis.p(n).entries()).collect();
    let bounds: Vec<i64> = (0..r1).map(|_| s).chain((0..r0).map(|_| s + 1)).collect();
    let targets: Vec<&MPoly> = lhs.entries().iter().collect();
    let sols = solve_degree_bounded(&gens, &bounds, &targets)?;
    let mut m1 = PolyMatrix::zeros(d * r1, r0, d);
    let mut m2 = PolyMatrix::zeros(d * r0, r0, d);
    for (e, sol) in sols.into_iter().enumerate() {
        let (i, k) = (e / r0, e % r0);
        for (l, m) in sol.into_iter().enumerate() {
            if l < r1 {
                m1.set(i * r1 + l, k, m);
            } else {
                m2.set(i * r0 + l - r1, k, m);
            }
        }
    }
    let ip1 = PolyMatrix::identity(d, d).kron(&basis.p(n + 1).transpose())?;
    let ip0 = PolyMatrix::identity(d, d).kron(&basis.p(n).transpose())?;
    if ip1.try_mul(&m1)?.try_add(&ip0.try_mul(&m2)?)? != lhs {
        return Err(Error::IdentityViolation(format!(
            "compressed structure relation at n = {n}"
        )));
    }
    Ok((m1, m2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdrCoeffs {
    pub n: usize,
    /// `Λ_i^n` for `i = 0..=N`, each `r_i × r_n`.
    pub lambda: Vec<RMatrix>,
    /// Indices `i` with a nonzero `Λ_i^n` outside the band, or `0` when
    /// `Λ_0^n ≠ 0` (explore mode).
    pub band_violations: Vec<usize>,
}

impl DdrCoeffs {
    pub fn nonzero_indices(&self) -> Vec<usize> {
        nonzero(&self.lambda)
    }
}

pub fn ddr_coeffs(
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    n: usize,
    mode: CheckMode,
) -> Result<DdrCoeffs> {
    ddr_coeffs_with(Execution::default(), u, pair, basis, n, mode)
}

/// `Λ_m^n` for every `m <= N`, computed both as
/// `H_m⁻¹ ⟨u, ℙ_m L[ℙ_nᵗ]⟩` and as `-H_m⁻¹ Q_{m,n}`; the two must agree.
pub fn ddr_coeffs_with(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    n: usize,
    mode: CheckMode,
) -> Result<DdrCoeffs> {
    check_dims(u, pair, basis)?;
    let s = pair.s();
    overflow(n + s, basis)?;
    let lp = l_apply_row(pair, &basis.p(n).transpose());
    let gn = grad_block(basis, n);
    let routes = exec.map_range(0..basis.max_degree() + 1, |m| -> Result<(RMatrix, RMatrix)> {
        let direct = basis.h_inv(m).checked_mul(&u.pair_matrix(&basis.p(m).try_mul(&lp)?)?)?;
        let q = gram_from_grads(u, pair, &grad_block(basis, m), &gn)?;
        let via_gram = -&basis.h_inv(m).checked_mul(&q)?;
        Ok((direct, via_gram))
    });
    let mut lambda = Vec::with_capacity(routes.len());
    for (m, r) in routes.into_iter().enumerate() {
        let (direct, via_gram) = r?;
        if direct != via_gram {
            return Err(Error::CrossCheckFailure(format!(
                "H_m Λ_m^n ≠ -Q_{{m,n}} at m = {m}, n = {n}"
            )));
        }
        lambda.push(direct);
    }

    let mut rebuilt = PolyMatrix::zeros(1, basis.r(n), pair.dim());
    for (i, li) in lambda.iter().enumerate() {
        rebuilt = rebuilt.try_add(&basis.p(i).transpose().mul_const(li)?)?;
    }
    if rebuilt != lp {
        return Err(Error::IdentityViolation(format!(
            "L[ℙ_{n}ᵗ] is not reconstructed by its Λ coefficients"
        )));
    }

    let mut band_violations = Vec::new();
    for i in nonzero(&lambda) {
        let below = n > s && i < n - s;
        if i == 0 || below || i > n + s {
            band_violations.push(i);
        }
    }
    if mode == CheckMode::Strict {
        if let Some(&index) = band_violations.first() {
            return Err(Error::BandViolation {
                family: "Lambda",
                n,
                index,
            });
        }
    }
    Ok(DdrCoeffs {
        n,
        lambda,
        band_violations,
    })
}

/// `N_1^n` (`r_{n+1} × r_n`, degree `<= s-1`) and `N_2^n` (`r_n × r_n`,
/// degree `<= s`) with `L[ℙ_nᵗ] = ℙ_{n+1}ᵗ N_1^n + ℙ_nᵗ N_2^n`.
pub fn compress_ddr(pair: &PearsonPair, basis: &WopsBasis, n: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    require_above_class(pair, n)?;
    overflow(n + 1, basis)?;
    let (d, s) = (pair.dim(), pair.s() as i64);
    let (r1, r0) = (basis.r(n + 1), basis.r(n));
    let lp = l_apply_row(pair, &basis.p(n).transpose());
    let gens: Vec<&MPoly> = basis.p(n + 1).entries().iter().chain(basis.p(n).entries()).collect();
    let bounds: Vec<i64> = (0..r1).map(|_| s - 1).chain((0..r0).map(|_| s)).collect();
    let targets: Vec<&MPoly> = lp.entries().iter().collect();
    let sols = solve_degree_bounded(&gens, &bounds, &targets)?;
    let mut n1 = PolyMatrix::zeros(r1, r0, d);
    let mut n2 = PolyMatrix::zeros(r0, r0, d);
    for (k, sol) in sols.into_iter().enumerate() {
        for (l, m) in sol.into_iter().enumerate() {
            if l < r1 {
                n1.set(l, k, m);
            } else {
                n2.set(l - r1, k, m);
            }
        }
    }
    let rhs = basis
        .p(n + 1)
        .transpose()
        .try_mul(&n1)?
        .try_add(&basis.p(n).transpose().try_mul(&n2)?)?;
    if rhs != lp {
        return Err(Error::IdentityViolation(format!("compressed L[ℙ_{n}ᵗ] at n = {n}")));
    }
    Ok((n1, n2))
}

/// `Ψ = -Σ_{i=0}^{s_bound+1} ⟨u, Φ∇ℙ_iᵗ⟩ H_i⁻¹ ℙ_i`, verified against the
/// weak Pearson equation for every monomial up to the basis degree.
pub fn recover_psi(u: &MomentFunctional, phi: &PolyMatrix, basis: &WopsBasis, s_bound: usize) -> Result<PolyMatrix> {
    let d = phi.dim();
    if u.dim() != d || basis.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if u.dim() != d { u.dim() } else { basis.dim() },
        });
    }
    overflow(s_bound + 1, basis)?;
    if grad_block(basis, 1) != PolyMatrix::identity(d, d) {
        return Err(Error::BadParameter(
            "recover_psi needs a monic basis (∇ℙ_1ᵗ = I)".into(),
        ));
    }
    let mut psi = PolyMatrix::zeros(d, 1, d);
    for i in 1..=s_bound + 1 {
        let moments = u.pair_matrix(&phi.try_mul(&grad_block(basis, i))?)?;
        let coeff = moments.checked_mul(basis.h_inv(i))?;
        psi = psi.try_sub(&PolyMatrix::const_mul(&coeff, basis.p(i))?)?;
    }
    for a in graded_basis(d, basis.max_degree()) {
        let f = MPoly::monomial(a.clone(), Rational::one());
        let r = pearson_residual(u, phi, &psi, &f)?;
        if !r.is_zero() {
            return Err(Error::VerificationFailure(format!(
                "recovered Ψ = {:?} leaves residual {:?} at x^{}",
                psi.to_strings(),
                r.to_strings(),
                a.key()
            )));
        }
    }
    Ok(psi)
}

/// `(m, n)` with `m < n - s` and `Q_{m,n} ≠ 0`.
pub fn quasi_orthogonality_violations(table: &[Vec<RMatrix>], s: usize) -> Vec<(usize, usize)> {
    (0..table.len())
        .flat_map(|n| (0..n.saturating_sub(s)).map(move |m| (m, n)))
        .filter(|&(m, n)| !table[m][n].is_zero())
        .collect()
}

/// Whether every block is zero.
pub fn all_zero(blocks: &[RMatrix]) -> bool {
    blocks.iter().all(|b| b.entries().iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{PointMassParams, SimplexJacobiParams};
    use crate::linalg::{int, rat};
    use crate::pearson::{appell_pair, appell_type_pair};
    use crate::wops::build_monic_wops;

    struct Case {
        u: MomentFunctional,
        pair: PearsonPair,
        basis: WopsBasis,
    }

    fn appell(n: usize) -> Case {
        let params = SimplexJacobiParams::uniform(2);
        let u = MomentFunctional::simplex_jacobi(params.clone()).unwrap();
        let basis = build_monic_wops(&u, n).unwrap();
        Case {
            pair: appell_pair(&params).unwrap(),
            u,
            basis,
        }
    }

    fn appell_type(n: usize) -> Case {
        let params = SimplexJacobiParams::uniform(2);
        let u = MomentFunctional::sum(
            &MomentFunctional::simplex_jacobi(params.clone()).unwrap(),
            &MomentFunctional::point_mass(PointMassParams::origin(2, int(1))).unwrap(),
        )
        .unwrap();
        let basis = build_monic_wops(&u, n).unwrap();
        Case {
            pair: appell_type_pair(&params, 0).unwrap(),
            u,
            basis,
        }
    }

    #[test]
    fn gram_examples() {
        let c = appell(6);
        assert!(gradient_gram(&c.u, &c.pair, &c.basis, 0, 3).unwrap().is_zero());
        assert_eq!(
            gradient_gram(&c.u, &c.pair, &c.basis, 1, 1).unwrap(),
            RMatrix::from_i64(&[&[(-1, 6), (1, 12)], &[(1, 12), (-1, 6)]])
        );
        let table = gradient_gram_table(Execution::Parallel, &c.u, &c.pair, &c.basis).unwrap();
        assert!(quasi_orthogonality_violations(&table, 0).is_empty());
        assert_eq!(
            table,
            gradient_gram_table(Execution::Sequential, &c.u, &c.pair, &c.basis).unwrap()
        );
    }

    #[test]
    fn structure_bands() {
        let c = appell(4);
        let sc = structure_coeffs(&c.u, &c.pair, &c.basis, 1, CheckMode::Strict).unwrap();
        assert!(sc.nonzero_indices().iter().all(|j| *j <= 2));
        for n in 1..=3 {
            structure_coeffs(&c.u, &c.pair, &c.basis, n, CheckMode::Strict).unwrap();
        }
        let t = appell_type(5);
        let sc = structure_coeffs(&t.u, &t.pair, &t.basis, 2, CheckMode::Strict).unwrap();
        assert!(sc.nonzero_indices().iter().all(|j| *j <= 4));
        assert_eq!(sc.f[4].shape(), (2 * 5, 3));
    }

    #[test]
    fn structure_band_violation_and_explore() {
        // Appell-type functional with the classical Appell pair: not a Pearson
        // pair for it.
        let t = appell_type(4);
        let c = appell(0);
        let strict = structure_coeffs(&t.u, &c.pair, &t.basis, 2, CheckMode::Strict);
        let explore = structure_coeffs(&t.u, &c.pair, &t.basis, 2, CheckMode::Explore).unwrap();
        match strict {
            Err(Error::BandViolation {
                family: "F",
                n: 2,
                index,
            }) => {
                assert_eq!(explore.band_violations.first(), Some(&index))
            }
            Ok(_) => assert!(explore.band_violations.is_empty()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn compressed_structure_degrees() {
        let c = appell(4);
        for n in 1..=3 {
            let (m1, m2) = compress_structure(&c.pair, &c.basis, n).unwrap();
            assert!(m1.degree_at_most(0) && m2.degree_at_most(1));
            assert_eq!(m1.shape(), (2 * c.basis.r(n + 1), c.basis.r(n)));
        }
        assert!(compress_structure(&c.pair, &c.basis, 0).is_err());
        let t = appell_type(4);
        let (m1, m2) = compress_structure(&t.pair, &t.basis, 2).unwrap();
        assert!(m1.degree_at_most(1) && m2.degree_at_most(2));
    }

    #[test]
    fn ddr_classical_single_band() {
        let c = appell(6);
        for n in 0..=5 {
            let dc = ddr_coeffs(&c.u, &c.pair, &c.basis, n, CheckMode::Strict).unwrap();
            assert!(dc.lambda[0].is_zero());
            let nz = dc.nonzero_indices();
            assert!(nz.is_empty() || nz == vec![n]);
            let lp = l_apply_row(&c.pair, &c.basis.p(n).transpose());
            assert_eq!(lp, c.basis.p(n).transpose().mul_const(&dc.lambda[n]).unwrap());
        }
        // L[x1 - 1/3] = 3x1 - 1, so Λ_1^1 = 3 I.
        let dc = ddr_coeffs(&c.u, &c.pair, &c.basis, 1, CheckMode::Strict).unwrap();
        assert_eq!(dc.lambda[1], RMatrix::identity(2).scale(&int(3)));
    }

    #[test]
    fn ddr_appell_type_band() {
        let t = appell_type(6);
        let dc = ddr_coeffs(&t.u, &t.pair, &t.basis, 3, CheckMode::Strict).unwrap();
        assert!(dc.nonzero_indices().iter().all(|i| (2..=4).contains(i)));
        for n in 0..=5 {
            assert!(ddr_coeffs(&t.u, &t.pair, &t.basis, n, CheckMode::Strict)
                .unwrap()
                .lambda[0]
                .is_zero());
        }
    }

    #[test]
    fn compressed_ddr() {
        let c = appell(4);
        for n in 1..=3 {
            let (n1, n2) = compress_ddr(&c.pair, &c.basis, n).unwrap();
            assert!(n1.is_zero());
            let lambda = ddr_coeffs(&c.u, &c.pair, &c.basis, n, CheckMode::Strict)
                .unwrap()
                .lambda;
            assert_eq!(n2.as_constant().unwrap(), lambda[n]);
        }
        let t = appell_type(4);
        let (n1, n2) = compress_ddr(&t.pair, &t.basis, 2).unwrap();
        assert!(n1.degree_at_most(0) && n2.degree_at_most(1));
    }

    #[test]
    fn degree_bounded_solver() {
        let p = |s: &str| MPoly::parse(s, 2).unwrap();
        let (g1, g2) = (p("x1"), p("x2"));
        let sol = solve_degree_bounded(&[&g1, &g2], &[1, 0], &[&p("x1^2 + 3*x2"), &p("x2")]).unwrap();
        assert_eq!(sol, vec![vec![p("x1"), p("3")], vec![p("0"), p("1")]]);
        assert!(matches!(
            solve_degree_bounded(&[&g1, &g2], &[0, 0], &[&p("x1^2")]),
            Err(Error::NoSolution(_))
        ));
        let zero = MPoly::zero(2);
        assert_eq!(
            solve_degree_bounded(&[&g1], &[-1], &[&zero]).unwrap(),
            vec![vec![zero.clone()]]
        );
        assert!(solve_degree_bounded(&[&g1], &[-1], &[&g1]).is_err());
        // Underdetermined: x1 = a·x1 + b·x1, minimum norm splits evenly.
        let sol = solve_degree_bounded(&[&g1, &g1], &[0, 0], &[&g1]).unwrap();
        assert_eq!(
            sol[0],
            vec![MPoly::constant(2, rat(1, 2)), MPoly::constant(2, rat(1, 2))]
        );
    }

    #[test]
    fn psi_recovery_on_appell_families() {
        let c = appell(5);
        assert_eq!(&recover_psi(&c.u, c.pair.phi(), &c.basis, 0).unwrap(), c.pair.psi());
        assert_eq!(&recover_psi(&c.u, c.pair.phi(), &c.basis, 2).unwrap(), c.pair.psi());
        let t = appell_type(5);
        assert_eq!(&recover_psi(&t.u, t.pair.phi(), &t.basis, 1).unwrap(), t.pair.psi());
        assert_eq!(&recover_psi(&t.u, t.pair.phi(), &t.basis, 3).unwrap(), t.pair.psi());
        // Classical Φ on the modified functional admits no Ψ.
        assert!(matches!(
            recover_psi(&t.u, c.pair.phi(), &t.basis, 1),
            Err(Error::VerificationFailure(_))
        ));
        assert!(matches!(
            recover_psi(&c.u, c.pair.phi(), &c.basis, 5),
            Err(Error::DegreeOverflow { .. })
        ));
    }
}

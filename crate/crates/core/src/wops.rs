//! Monic weak orthogonal polynomial systems.
//!
//! Entry `j` of `ℙ_n` is `x^{α^{(j)}}` minus its projection onto the lower
//! degrees, computed by block Gram-Schmidt against the already-built
//! `ℙ_0, ..., ℙ_{n-1}`. The Gram blocks `H_n = ⟨u, ℙ_n ℙ_nᵗ⟩` must be
//! nonsingular at every degree, otherwise the functional is not
//! quasi-definite.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::MomentFunctional;
use crate::linalg::RMatrix;
use crate::mpoly::{monomial_basis, MPoly, MultiIndex, PolyMatrix};

#[derive(Debug, Clone)]
pub struct WopsBasis {
    dim: usize,
    polys: Vec<PolyMatrix>,
    gram: Vec<RMatrix>,
    gram_inv: Vec<RMatrix>,
}

impl WopsBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    /// `ℙ_n` as an `r_n × 1` column.
    pub fn p(&self, n: usize) -> &PolyMatrix {
        &self.polys[n]
    }

    pub fn h(&self, n: usize) -> &RMatrix {
        &self.gram[n]
    }

    pub fn h_inv(&self, n: usize) -> &RMatrix {
        &self.gram_inv[n]
    }

    pub fn r(&self, n: usize) -> usize {
        self.polys[n].rows()
    }
}

/// Builds `ℙ_0, ..., ℙ_N` and `H_0, ..., H_N` for `u`.
pub fn build_monic_wops(u: &MomentFunctional, max_degree: usize) -> Result<WopsBasis> {
    build_monic_wops_with(Execution::default(), u, max_degree)
}

pub fn build_monic_wops_with(exec: Execution, u: &MomentFunctional, max_degree: usize) -> Result<WopsBasis> {
    let d = u.dim();
    let mut basis = WopsBasis {
        dim: d,
        polys: Vec::with_capacity(max_degree + 1),
        gram: Vec::with_capacity(max_degree + 1),
        gram_inv: Vec::with_capacity(max_degree + 1),
    };
    for n in 0..=max_degree {
        let alphas = monomial_basis(d, n);
        let entries = exec.map(&alphas, |alpha| orthogonalize(u, &basis, alpha));
        let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;
        let pn = PolyMatrix::column(entries);
        let hn = u.pair_outer(&pn, &pn)?;
        let hinv = hn.inverse().map_err(|_| Error::NotQuasiDefinite(n))?;
        basis.polys.push(pn);
        basis.gram.push(hn);
        basis.gram_inv.push(hinv);
    }
    Ok(basis)
}

fn orthogonalize(u: &MomentFunctional, basis: &WopsBasis, alpha: &MultiIndex) -> Result<MPoly> {
    let mono = MPoly::monomial(alpha.clone(), num_traits::One::one());
    let mut out = mono.clone();
    for j in 0..basis.polys.len() {
        let pj = &basis.polys[j];
        let moments = RMatrix::from_vec(
            1,
            pj.rows(),
            (0..pj.rows())
                .map(|k| u.pair_product(&mono, pj.get(k, 0)))
                .collect::<Result<_>>()?,
        )?;
        let coeffs = moments.checked_mul(&basis.gram_inv[j])?;
        for k in 0..pj.rows() {
            out = &out - &pj.get(k, 0).scale(&coeffs[(0, k)]);
        }
    }
    Ok(out)
}

/// Fourier coefficients `c_j = ⟨u, f ℙ_jᵗ⟩ H_j⁻¹` (each `1 × r_j`) for
/// `j = 0..=deg f`; the reconstruction `f = Σ c_j ℙ_j` is checked.
pub fn expand_in_basis(u: &MomentFunctional, basis: &WopsBasis, f: &MPoly) -> Result<Vec<RMatrix>> {
    let Some(deg) = f.degree() else {
        return Ok(vec![RMatrix::zeros(1, 1)]);
    };
    if deg > basis.max_degree() {
        return Err(Error::DegreeOverflow {
            degree: deg,
            max: basis.max_degree(),
        });
    }
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut rebuilt = MPoly::zero(f.dim());
    for j in 0..=deg {
        let pj = basis.p(j);
        let moments = RMatrix::from_vec(
            1,
            pj.rows(),
            (0..pj.rows())
                .map(|k| u.pair_product(f, pj.get(k, 0)))
                .collect::<Result<_>>()?,
        )?;
        let c = moments.checked_mul(basis.h_inv(j))?;
        for k in 0..pj.rows() {
            rebuilt = &rebuilt + &pj.get(k, 0).scale(&c[(0, k)]);
        }
        coeffs.push(c);
    }
    if rebuilt != *f {
        return Err(Error::IdentityViolation(format!(
            "expansion of {f} reconstructs {rebuilt}"
        )));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{PointMassParams, SimplexJacobiParams};
    use crate::linalg::{int, rat};

    fn triangle() -> MomentFunctional {
        MomentFunctional::simplex_jacobi(SimplexJacobiParams::uniform(2)).unwrap()
    }

    fn p(s: &str) -> MPoly {
        MPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn degree_zero_block() {
        let u = triangle();
        let b = build_monic_wops(&u, 0).unwrap();
        assert_eq!(b.p(0), &PolyMatrix::column(vec![MPoly::one(2)]));
        assert_eq!(b.h(0), &RMatrix::identity(1));
    }

    #[test]
    fn uniform_triangle_degree_one() {
        let b = build_monic_wops(&triangle(), 2).unwrap();
        assert_eq!(b.p(1), &PolyMatrix::column(vec![p("x1 - 1/3"), p("x2 - 1/3")]));
        // H_1 from m20 - m10^2 = 1/6 - 1/9 and m11 - m10 m01 = 1/12 - 1/9.
        assert_eq!(
            b.h(1),
            &RMatrix::from_i64(&[&[(1, 18), (-1, 36)], &[(-1, 36), (1, 18)]])
        );
    }

    #[test]
    fn point_mass_is_not_quasi_definite() {
        let delta = MomentFunctional::point_mass(PointMassParams::origin(2, int(1))).unwrap();
        assert_eq!(build_monic_wops(&delta, 3).unwrap_err(), Error::NotQuasiDefinite(1));
    }

    #[test]
    fn orthogonality_monicity_and_definiteness() {
        let u = triangle();
        let b = build_monic_wops(&u, 5).unwrap();
        for n in 0..=5 {
            let alphas = monomial_basis(2, n);
            for (j, a) in alphas.iter().enumerate() {
                let entry = b.p(n).get(j, 0);
                assert_eq!(entry.coeff(a), int(1));
                assert!(alphas.iter().filter(|x| *x != a).all(|x| entry.coeff(x) == int(0)));
                assert_eq!(entry.degree(), Some(n));
            }
            for m in 0..n {
                assert!(u.pair_outer(b.p(n), b.p(m)).unwrap().is_zero(), "({n}, {m})");
            }
            assert!(b.h(n).is_symmetric());
            assert!(b.h(n).leading_minors_positive());
        }
    }

    #[test]
    fn expansion_examples() {
        let u = triangle();
        let b = build_monic_wops(&u, 3).unwrap();
        let c = expand_in_basis(&u, &b, b.p(1).get(0, 0)).unwrap();
        assert_eq!(c[0], RMatrix::zeros(1, 1));
        assert_eq!(c[1], RMatrix::from_i64(&[&[(1, 1), (0, 1)]]));
        let c = expand_in_basis(&u, &b, &MPoly::one(2)).unwrap();
        assert_eq!(c, vec![RMatrix::identity(1)]);
        let c = expand_in_basis(&u, &b, &p("x1")).unwrap();
        assert_eq!(c[0], RMatrix::from_i64(&[&[(1, 3)]]));
        assert_eq!(c[1], RMatrix::from_i64(&[&[(1, 1), (0, 1)]]));
        assert!(matches!(
            expand_in_basis(&u, &b, &p("x1^4")),
            Err(Error::DegreeOverflow { degree: 4, max: 3 })
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let u = MomentFunctional::simplex_jacobi(SimplexJacobiParams::new(vec![rat(1, 2), int(2)], rat(1, 3)).unwrap())
            .unwrap();
        let a = build_monic_wops_with(Execution::Sequential, &u, 4).unwrap();
        let b = build_monic_wops_with(Execution::Parallel, &u, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(a.p(n), b.p(n));
            assert_eq!(a.h(n), b.h(n));
        }
    }
}

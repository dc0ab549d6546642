//! Moment functionals `u` with `⟨u, x^α⟩ = μ_α`.
//!
//! The continuous families are normalized to `μ_0 = 1`, which keeps every
//! moment rational for rational parameters. Point masses and finite sums
//! are supported so that perturbed functionals such as `u + λδ` can be
//! formed.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Rational};
use crate::mpoly::{MPoly, MultiIndex, PolyMatrix};

/// Jacobi-type weight `x^α (1 - |x|)^β` on the d-simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJacobiParams {
    #[serde(with = "crate::serial::rational_vec")]
    pub alpha: Vec<Rational>,
    #[serde(with = "crate::serial::rational")]
    pub beta: Rational,
}

impl SimplexJacobiParams {
    pub fn new(alpha: Vec<Rational>, beta: Rational) -> Result<Self> {
        let p = SimplexJacobiParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// Uniform weight on the simplex (`α = 0`, `β = 0`).
    pub fn uniform(d: usize) -> Self {
        SimplexJacobiParams {
            alpha: vec![Rational::zero(); d],
            beta: Rational::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_empty() {
            return Err(Error::BadParameter("simplex weight needs d >= 1".into()));
        }
        let floor = -Rational::one();
        if let Some(a) = self.alpha.iter().find(|a| **a <= floor) {
            return Err(Error::BadParameter(format!("simplex exponent {a} must exceed -1")));
        }
        if self.beta <= floor {
            return Err(Error::BadParameter(format!(
                "simplex exponent beta = {} must exceed -1",
                self.beta
            )));
        }
        Ok(())
    }
}

/// `λ δ_location`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMassParams {
    #[serde(with = "crate::serial::rational_vec")]
    pub location: Vec<Rational>,
    #[serde(with = "crate::serial::rational")]
    pub weight: Rational,
}

impl PointMassParams {
    pub fn origin(d: usize, weight: Rational) -> Self {
        PointMassParams {
            location: vec![Rational::zero(); d],
            weight,
        }
    }
}

/// Laguerre × Jacobi product weight
/// `x_1^{a_1} ⋯ x_{d-1}^{a_{d-1}} e^{-(x_1 + ⋯ + x_{d-1})} (1 - x_d/x_1)^{a_d}`
/// on `{-x_1 < x_d < x_1, x_i > 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaguerreJacobiParams {
    #[serde(with = "crate::serial::rational_vec")]
    pub a: Vec<Rational>,
}

impl LaguerreJacobiParams {
    pub fn new(a: Vec<Rational>) -> Result<Self> {
        let p = LaguerreJacobiParams { a };
        p.validate()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() < 2 {
            return Err(Error::BadParameter("Laguerre-Jacobi weight needs d >= 2".into()));
        }
        let floor = -Rational::one();
        if let Some(a) = self.a.iter().find(|a| **a <= floor) {
            return Err(Error::BadParameter(format!(
                "Laguerre-Jacobi parameter {a} must exceed -1"
            )));
        }
        Ok(())
    }
}

/// Serializable description of a functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Descriptor {
    SimplexJacobi(SimplexJacobiParams),
    PointMass(PointMassParams),
    LaguerreJacobi(LaguerreJacobiParams),
    Sum { terms: Vec<Descriptor> },
}

#[derive(Debug)]
enum Kind {
    SimplexJacobi(SimplexJacobiParams),
    PointMass(PointMassParams),
    LaguerreJacobi(LaguerreJacobiParams),
    Sum(Vec<MomentFunctional>),
}

#[derive(Debug)]
struct Inner {
    dim: usize,
    kind: Kind,
    cache: RwLock<HashMap<MultiIndex, Rational>>,
}

/// A moment functional. Cloning is cheap; moments are memoized and the
/// cache is shared by clones.
#[derive(Debug, Clone)]
pub struct MomentFunctional(Arc<Inner>);

impl MomentFunctional {
    fn from_kind(dim: usize, kind: Kind) -> Self {
        MomentFunctional(Arc::new(Inner {
            dim,
            kind,
            cache: RwLock::new(HashMap::new()),
        }))
    }

    pub fn simplex_jacobi(p: SimplexJacobiParams) -> Result<Self> {
        p.validate()?;
        Ok(Self::from_kind(p.dim(), Kind::SimplexJacobi(p)))
    }

    pub fn point_mass(p: PointMassParams) -> Result<Self> {
        if p.location.is_empty() {
            return Err(Error::BadParameter("point mass needs d >= 1".into()));
        }
        Ok(Self::from_kind(p.location.len(), Kind::PointMass(p)))
    }

    pub fn laguerre_jacobi(p: LaguerreJacobiParams) -> Result<Self> {
        p.validate()?;
        Ok(Self::from_kind(p.dim(), Kind::LaguerreJacobi(p)))
    }

    /// The zero functional in `d` variables.
    pub fn zero(d: usize) -> Self {
        Self::from_kind(d, Kind::PointMass(PointMassParams::origin(d, Rational::zero())))
    }

    /// `u + v`.
    pub fn sum(u: &MomentFunctional, v: &MomentFunctional) -> Result<Self> {
        Self::sum_of(vec![u.clone(), v.clone()])
    }

    pub fn sum_of(terms: Vec<MomentFunctional>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::BadParameter("empty sum of functionals".into()));
        };
        let dim = first.dim();
        if let Some(t) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: t.dim(),
            });
        }
        Ok(Self::from_kind(dim, Kind::Sum(terms)))
    }

    pub fn from_descriptor(desc: &Descriptor) -> Result<Self> {
        match desc {
            Descriptor::SimplexJacobi(p) => Self::simplex_jacobi(p.clone()),
            Descriptor::PointMass(p) => Self::point_mass(p.clone()),
            Descriptor::LaguerreJacobi(p) => Self::laguerre_jacobi(p.clone()),
            Descriptor::Sum { terms } => Self::sum_of(terms.iter().map(Self::from_descriptor).collect::<Result<_>>()?),
        }
    }

    pub fn descriptor(&self) -> Descriptor {
        match &self.0.kind {
            Kind::SimplexJacobi(p) => Descriptor::SimplexJacobi(p.clone()),
            Kind::PointMass(p) => Descriptor::PointMass(p.clone()),
            Kind::LaguerreJacobi(p) => Descriptor::LaguerreJacobi(p.clone()),
            Kind::Sum(ts) => Descriptor::Sum {
                terms: ts.iter().map(Self::descriptor).collect(),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Leaf components of the functional, flattening sums.
    pub fn components(&self) -> Vec<Descriptor> {
        match &self.0.kind {
            Kind::Sum(ts) => ts.iter().flat_map(Self::components).collect(),
            _ => vec![self.descriptor()],
        }
    }

    /// `μ_α = ⟨u, x^α⟩`.
    pub fn moment(&self, alpha: &MultiIndex) -> Rational {
        assert_eq!(alpha.dim(), self.dim(), "moment index dimension");
        if let Kind::Sum(ts) = &self.0.kind {
            return ts.iter().fold(Rational::zero(), |acc, t| acc + t.moment(alpha));
        }
        if let Some(m) = self.0.cache.read().expect("moment cache").get(alpha) {
            return m.clone();
        }
        let m = match &self.0.kind {
            Kind::SimplexJacobi(p) => simplex_moment(p, alpha),
            Kind::PointMass(p) => point_mass_moment(p, alpha),
            Kind::LaguerreJacobi(p) => laguerre_jacobi_moment(p, alpha),
            Kind::Sum(_) => unreachable!(),
        };
        self.0
            .cache
            .write()
            .expect("moment cache")
            .insert(alpha.clone(), m.clone());
        m
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d,
            });
        }
        Ok(())
    }

    /// `⟨u, f⟩`.
    pub fn pair(&self, f: &MPoly) -> Result<Rational> {
        self.check_dim(f.dim())?;
        Ok(f.terms().fold(Rational::zero(), |acc, (a, c)| acc + c * self.moment(a)))
    }

    /// `⟨u, f·g⟩` without forming the product.
    pub fn pair_product(&self, f: &MPoly, g: &MPoly) -> Result<Rational> {
        self.check_dim(f.dim())?;
        self.check_dim(g.dim())?;
        let mut acc = Rational::zero();
        for (a, c) in f.terms() {
            for (b, e) in g.terms() {
                acc += c * e * self.moment(&a.plus(b));
            }
        }
        Ok(acc)
    }

    /// Entrywise `⟨u, M⟩`.
    pub fn pair_matrix(&self, m: &PolyMatrix) -> Result<RMatrix> {
        self.check_dim(m.dim())?;
        let entries = m.entries().iter().map(|p| self.pair(p)).collect::<Result<Vec<_>>>()?;
        RMatrix::from_vec(m.rows(), m.cols(), entries)
    }

    /// `⟨u, P Qᵗ⟩` for column vectors `P`, `Q`.
    pub fn pair_outer(&self, p: &PolyMatrix, q: &PolyMatrix) -> Result<RMatrix> {
        if p.cols() != 1 || q.cols() != 1 {
            return Err(Error::ShapeMismatch("pair_outer expects columns".into()));
        }
        self.check_dim(p.dim())?;
        self.check_dim(q.dim())?;
        let mut out = RMatrix::zeros(p.rows(), q.rows());
        for i in 0..p.rows() {
            for j in 0..q.rows() {
                out[(i, j)] = self.pair_product(p.get(i, 0), q.get(j, 0))?;
            }
        }
        Ok(out)
    }
}

fn rational_u(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k-1)`.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (a + rational_u(i)))
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rational_u(n - i) / rational_u(i + 1);
    }
    acc
}

/// Normalized simplex moment
/// `∏_i (α_i+1)_{k_i} / (|α| + β + d + 1)_{|k|}`.
pub fn simplex_moment(p: &SimplexJacobiParams, k: &MultiIndex) -> Rational {
    let d = p.dim();
    let num = p.alpha.iter().zip(k.exponents()).fold(Rational::one(), |acc, (a, &e)| {
        acc * pochhammer(&(a + Rational::one()), e as usize)
    });
    let total: Rational = p.alpha.iter().fold(Rational::zero(), |acc, a| acc + a);
    let base = total + &p.beta + rational_u(d + 1);
    num / pochhammer(&base, k.total_degree())
}

/// `λ · location^α` with `0^0 = 1`.
pub fn point_mass_moment(p: &PointMassParams, k: &MultiIndex) -> Rational {
    p.location
        .iter()
        .zip(k.exponents())
        .fold(p.weight.clone(), |acc, (x, &e)| {
            acc * num_traits::pow(x.clone(), e as usize)
        })
}

/// `J(k, a) / J(0, a)` with `J(k, a) = ∫_{-1}^{1} t^k (1-t)^a dt`.
fn jacobi_segment_ratio(k: usize, a: &Rational) -> Rational {
    let one = Rational::one();
    let mut acc = Rational::zero();
    let mut pow2 = Rational::one();
    for j in 0..=k {
        let term = binomial(k, j) * &pow2 / (a + &one + rational_u(j));
        acc += term;
        pow2 *= Rational::from_integer(BigInt::from(-2));
    }
    acc * (a + one)
}

/// Normalized moment of the Laguerre × Jacobi product weight, via
/// `x_d = x_1 t`: `μ_k ∝ Γ(a_1+k_1+k_d+2) ∏_{i=2}^{d-1} Γ(a_i+k_i+1) J(k_d, a_d)`.
pub fn laguerre_jacobi_moment(p: &LaguerreJacobiParams, k: &MultiIndex) -> Rational {
    let d = p.dim();
    let e = k.exponents();
    let kd = e[d - 1] as usize;
    let one = Rational::one();
    let mut acc = pochhammer(&(&p.a[0] + &one + &one), e[0] as usize + kd);
    for (a, &ei) in p.a[1..d - 1].iter().zip(&e[1..d - 1]) {
        acc *= pochhammer(&(a + &one), ei as usize);
    }
    acc * jacobi_segment_ratio(kd, &p.a[d - 1])
}

/// Laguerre polynomial `L_k^{(a)}(t)` from its three-term recurrence.
pub fn laguerre_1d(k: usize, a: &Rational) -> Result<MPoly> {
    if *a <= -Rational::one() {
        return Err(Error::BadParameter(format!("Laguerre parameter {a} must exceed -1")));
    }
    let t = MPoly::var(1, 0);
    let c = |x: Rational| MPoly::constant(1, x);
    let mut prev = MPoly::one(1);
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = &c(a + Rational::one()) - &t;
    for n in 1..k {
        let nr = rational_u(n);
        let lin = &c(rational_u(2 * n + 1) + a) - &t;
        let next = (&(&lin * &cur) - &prev.scale(&(&nr + a))).scale(&rational_u(n + 1).recip());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Jacobi polynomial `P_k^{(a,b)}(t)` from its three-term recurrence.
pub fn jacobi_1d(k: usize, a: &Rational, b: &Rational) -> Result<MPoly> {
    let floor = -Rational::one();
    if *a <= floor || *b <= floor {
        return Err(Error::BadParameter(format!(
            "Jacobi parameters ({a}, {b}) must exceed -1"
        )));
    }
    let t = MPoly::var(1, 0);
    let c = |x: Rational| MPoly::constant(1, x);
    let two = rational_u(2);
    let mut prev = MPoly::one(1);
    if k == 0 {
        return Ok(prev);
    }
    let ab = a + b;
    let mut cur = (&t.scale(&(&ab + &two)) + &c(a - b)).scale(&two.recip());
    for n in 2..=k {
        let n = rational_u(n);
        let s = &two * &n + &ab;
        let lead = &two * &n * (&n + &ab) * (&s - &two);
        let outer = &s - Rational::one();
        let lin = &t.scale(&(&s * (&s - &two))) + &c(a * a - b * b);
        let back = &two * (&n + a - Rational::one()) * (&n + b - Rational::one()) * &s;
        let next = (&(&lin * &cur).scale(&outer) - &prev.scale(&back)).scale(&lead.recip());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The product polynomial
/// `L_{k_1-k_d}^{(a_1+2k_d+1)}(x_1) ∏_{i=2}^{d-1} L_{k_i}^{(a_i)}(x_i) · x_1^{k_d} P_{k_d}^{(a_d,0)}(x_d/x_1)`.
pub fn example2_product_poly(p: &LaguerreJacobiParams, k: &MultiIndex) -> Result<MPoly> {
    p.validate()?;
    let d = p.dim();
    if k.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: k.dim(),
        });
    }
    let e = k.exponents();
    let (k1, kd) = (e[0], e[d - 1]);
    if k1 < kd {
        return Err(Error::BadIndex(format!("k_1 = {k1} must be at least k_d = {kd}")));
    }
    let shifted = &p.a[0] + rational_u(2 * kd as usize + 1);
    let mut out = laguerre_1d((k1 - kd) as usize, &shifted)?.embed_univariate(d, 0);
    for (i, (a, &ei)) in p.a.iter().zip(e).enumerate().take(d - 1).skip(1) {
        out = &out * &laguerre_1d(ei as usize, a)?.embed_univariate(d, i);
    }
    let jac = jacobi_1d(kd as usize, &p.a[d - 1], &Rational::zero())?;
    Ok(&out * &jac.homogenize_univariate(kd, d, d - 1, 0)?)
}

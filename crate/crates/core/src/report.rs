//! Classification, full verification and JSON export.
//!
//! Reports serialize through `serde_json::Value`, whose maps are ordered,
//! so output bytes depend only on the inputs.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::MomentFunctional;
use crate::linalg::RMatrix;
use crate::mpoly::{graded_basis, PolyMatrix};
use crate::pearson::{is_semiclassical_with, l_star_moments_with, PearsonPair};
use crate::recurrence::recurrence_data;
use crate::semiclassical::{
    compress_ddr, compress_structure, ddr_coeffs_with, gradient_gram_table, quasi_orthogonality_violations,
    recover_psi, structure_coeffs_with, CheckMode,
};
use crate::wops::{build_monic_wops_with, WopsBasis};

fn matrix(m: &RMatrix) -> Value {
    json!(m.to_strings())
}

fn poly_matrix(m: &PolyMatrix) -> Value {
    json!(m.to_strings())
}

fn column(m: &PolyMatrix) -> Value {
    json!(m.entries().iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub passed: bool,
    pub residuals_zero: bool,
    pub det_condition: String,
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub degree: usize,
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<String>,
    /// Monomial key to nonzero residual.
    pub failures: Vec<(String, Vec<String>)>,
}

pub fn classify(exec: Execution, u: &MomentFunctional, pair: &PearsonPair, degree: usize) -> Result<ClassifyReport> {
    let rep = is_semiclassical_with(exec, u, pair, degree)?;
    Ok(ClassifyReport {
        passed: rep.passed(),
        residuals_zero: rep.residuals_zero,
        det_condition: rep.det_condition.to_string(),
        p: rep.p,
        q: rep.q,
        s: rep.s,
        degree,
        phi: pair.phi().to_strings(),
        psi: pair.psi().entries().iter().map(|p| p.to_string()).collect(),
        failures: rep
            .failures
            .iter()
            .map(|(a, r)| (a.key(), r.entries().iter().map(|x| x.to_string()).collect()))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_degree: usize,
    pub s: usize,
    pub checks: Vec<Check>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record<T>(&mut self, name: impl Into<String>, r: Result<T>) -> Option<T> {
        let name = name.into();
        match r {
            Ok(v) => {
                self.checks.push(Check { name, passed: true });
                Some(v)
            }
            Err(e) => {
                self.fail(&name, &e);
                None
            }
        }
    }

    fn fail(&mut self, name: &str, e: &Error) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: false,
        });
        self.violations.push(Violation {
            check: name.to_string(),
            kind: e.kind().to_string(),
            message: e.to_string(),
        });
    }

    fn expect(&mut self, name: impl Into<String>, ok: bool, e: impl FnOnce() -> Error) {
        let name = name.into();
        if ok {
            self.checks.push(Check { name, passed: true });
        } else {
            self.fail(&name, &e());
        }
    }
}

/// Builds the basis and recurrences and runs every identity, band and
/// cross-check up to degree `n_max`. Mathematical failures are collected;
/// only input errors abort.
pub fn run_verify(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    n_max: usize,
    mode: CheckMode,
) -> Result<VerifyReport> {
    if u.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: pair.dim(),
        });
    }
    let (p, s) = (pair.p(), pair.s());
    let mut rep = VerifyReport {
        max_degree: n_max,
        s,
        ..Default::default()
    };
    let Some(basis) = rep.record("wops", build_monic_wops_with(exec, u, n_max)) else {
        return Ok(rep);
    };
    rep.record("recurrence", recurrence_data(u, &basis));

    let cls = is_semiclassical_with(exec, u, pair, n_max)?;
    let first = cls
        .failures
        .first()
        .map(|(a, r)| format!("x^{} gives {:?}", a.key(), r.to_strings()));
    rep.expect("pearson_residuals", cls.residuals_zero, || {
        Error::VerificationFailure(format!(
            "{} nonzero weak residuals, first: {}",
            cls.failures.len(),
            first.unwrap_or_default()
        ))
    });
    rep.expect("det_condition", !num_traits::Zero::is_zero(&cls.det_condition), || {
        Error::VerificationFailure("det⟨u, Φ⟩ = 0".into())
    });

    if let Some(table) = rep.record("gradient_gram", gradient_gram_table(exec, u, pair, &basis)) {
        let bad = quasi_orthogonality_violations(&table, s);
        rep.expect("quasi_orthogonality", bad.is_empty(), || {
            Error::VerificationFailure(format!("Q_{{m,n}} ≠ 0 for m < n - s at {bad:?}"))
        });
    }

    for n in 0..=n_max {
        if n + p > n_max + 1 {
            break;
        }
        if let Some(sc) = rep.record(
            format!("structure[{n}]"),
            structure_coeffs_with(exec, u, pair, &basis, n, mode),
        ) {
            for j in sc.band_violations {
                rep.warnings.push(format!("F_{j}^{n} nonzero outside band"));
            }
        }
    }
    for n in s + 1..n_max {
        rep.record(format!("compress_structure[{n}]"), compress_structure(pair, &basis, n));
    }
    for n in 0..=n_max.saturating_sub(s) {
        if let Some(dc) = rep.record(format!("ddr[{n}]"), ddr_coeffs_with(exec, u, pair, &basis, n, mode)) {
            for i in dc.band_violations {
                rep.warnings.push(format!("Lambda_{i}^{n} nonzero outside band"));
            }
        }
    }
    for n in s + 1..n_max {
        rep.record(format!("compress_ddr[{n}]"), compress_ddr(pair, &basis, n));
    }

    if s < n_max {
        if let Some(psi) = rep.record("recover_psi", recover_psi(u, pair.phi(), &basis, s)) {
            rep.expect("psi_matches", &psi == pair.psi(), || {
                Error::VerificationFailure(format!("recovered Ψ {:?} differs from the given one", column(&psi)))
            });
        }
    }

    let adj = l_star_moments_with(exec, u, pair, n_max)?;
    let nonzero: Vec<String> = adj
        .iter()
        .filter(|(_, v)| !num_traits::Zero::is_zero(v))
        .map(|(a, _)| a.key())
        .collect();
    rep.expect("adjoint", nonzero.is_empty(), || {
        Error::VerificationFailure(format!("⟨u, L[x^α]⟩ ≠ 0 for α in {nonzero:?}"))
    });
    Ok(rep)
}

/// Objects available to `export`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Moments,
    Wops,
    Recurrence,
    Structure,
    Ddr,
}

impl std::str::FromStr for ExportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "moments" => ExportKind::Moments,
            "wops" => ExportKind::Wops,
            "recurrence" => ExportKind::Recurrence,
            "structure" => ExportKind::Structure,
            "ddr" => ExportKind::Ddr,
            other => return Err(Error::BadParameter(format!("unknown export selector {other:?}"))),
        })
    }
}

pub fn export(
    exec: Execution,
    what: ExportKind,
    u: &MomentFunctional,
    pair: Option<&PearsonPair>,
    n_max: usize,
    mode: CheckMode,
) -> Result<Value> {
    let mut doc = Map::new();
    doc.insert("dim".into(), json!(u.dim()));
    doc.insert("max_degree".into(), json!(n_max));
    if what == ExportKind::Moments {
        let moments: Map<String, Value> = graded_basis(u.dim(), n_max)
            .into_iter()
            .map(|a| (format!("m_{}", a.key()), json!(u.moment(&a).to_string())))
            .collect();
        doc.insert("moments".into(), Value::Object(moments));
        return Ok(Value::Object(doc));
    }
    let basis = build_monic_wops_with(exec, u, n_max)?;
    let pair = || pair.ok_or_else(|| Error::BadParameter("export needs a Pearson pair".into()));
    let body = match what {
        ExportKind::Moments => unreachable!(),
        ExportKind::Wops => export_wops(&basis),
        ExportKind::Recurrence => export_recurrence(u, &basis)?,
        ExportKind::Structure => export_structure(exec, u, pair()?, &basis, mode)?,
        ExportKind::Ddr => export_ddr(exec, u, pair()?, &basis, mode)?,
    };
    doc.insert("degrees".into(), body);
    Ok(Value::Object(doc))
}

fn export_wops(basis: &WopsBasis) -> Value {
    (0..=basis.max_degree())
        .map(|n| json!({"n": n, "P": column(basis.p(n)), "H": matrix(basis.h(n))}))
        .collect()
}

fn export_recurrence(u: &MomentFunctional, basis: &WopsBasis) -> Result<Value> {
    let data = recurrence_data(u, basis)?;
    Ok(data
        .degrees
        .iter()
        .map(|dr| {
            let coords: Vec<Value> = dr
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "i": t.coord + 1,
                        "A": matrix(&t.a),
                        "B": matrix(&t.b),
                        "C": t.c.as_ref().map(matrix),
                        "G": dr.backward.get(t.coord).map(matrix),
                    })
                })
                .collect();
            json!({
                "n": dr.n,
                "coords": coords,
                "D": dr.forward.d_blocks.iter().map(matrix).collect::<Vec<_>>(),
                "E_same": matrix(&dr.forward.e_same),
                "E_prev": dr.forward.e_prev.as_ref().map(matrix),
            })
        })
        .collect())
}

fn export_structure(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    mode: CheckMode,
) -> Result<Value> {
    let n_max = basis.max_degree();
    let mut out = Vec::new();
    for n in 0..=n_max {
        if n + pair.p() > n_max + 1 {
            break;
        }
        let sc = structure_coeffs_with(exec, u, pair, basis, n, mode)?;
        let mut entry = json!({
            "n": n,
            "F": sc.f.iter().map(matrix).collect::<Vec<_>>(),
            "band_violations": sc.band_violations,
        });
        if n > pair.s() && n < n_max {
            let (m1, m2) = compress_structure(pair, basis, n)?;
            entry["M1"] = poly_matrix(&m1);
            entry["M2"] = poly_matrix(&m2);
        }
        out.push(entry);
    }
    Ok(Value::Array(out))
}

fn export_ddr(
    exec: Execution,
    u: &MomentFunctional,
    pair: &PearsonPair,
    basis: &WopsBasis,
    mode: CheckMode,
) -> Result<Value> {
    let n_max = basis.max_degree();
    let mut out = Vec::new();
    for n in 0..=n_max.saturating_sub(pair.s()) {
        let dc = ddr_coeffs_with(exec, u, pair, basis, n, mode)?;
        let mut entry = json!({
            "n": n,
            "Lambda": dc.lambda.iter().map(matrix).collect::<Vec<_>>(),
            "band_violations": dc.band_violations,
        });
        if n > pair.s() && n < n_max {
            let (n1, n2) = compress_ddr(pair, basis, n)?;
            entry["N1"] = poly_matrix(&n1);
            entry["N2"] = poly_matrix(&n2);
        }
        out.push(entry);
    }
    Ok(Value::Array(out))
}

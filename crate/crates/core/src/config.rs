//! Run configuration read from JSON.
//!
//! ```json
//! {
//!   "functional": {"type": "simplex_jacobi", "alpha": ["0", "0"], "beta": "0"},
//!   "pair": "appell",
//!   "max_degree": 6,
//!   "mode": "verify"
//! }
//! ```
//!
//! `pair` is one of
//! - `"appell"`, `"appell_type:i"` (1-based `i`), `"example2"`: builder
//!   parameters taken from the first matching component of the functional;
//! - `{"builder": "appell_type", "index": 1, "params": {...}}` with explicit
//!   parameters (`alpha`/`beta` for the Appell builders, `a` for `example2`);
//! - `{"phi": [["x1^2 - x1", ...], ...], "psi": ["3*x1 - 1", ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{Descriptor, LaguerreJacobiParams, MomentFunctional, SimplexJacobiParams};
use crate::mpoly::{MPoly, PolyMatrix};
use crate::pearson::{appell_pair, appell_type_pair, example2_pair, PearsonPair};
use crate::semiclassical::CheckMode;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Verify,
    Explore,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Verify => CheckMode::Strict,
            Mode::Explore => CheckMode::Explore,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairSelector {
    Named(String),
    Builder {
        builder: String,
        #[serde(default)]
        index: Option<usize>,
        params: serde_json::Value,
    },
    Inline {
        phi: Vec<Vec<String>>,
        psi: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub functional: Descriptor,
    pub pair: PairSelector,
    pub max_degree: usize,
    #[serde(default)]
    pub mode: Mode,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub functional: MomentFunctional,
    pub pair: PearsonPair,
    pub max_degree: usize,
    pub mode: Mode,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn functional(&self) -> Result<MomentFunctional> {
        MomentFunctional::from_descriptor(&self.functional)
    }

    pub fn resolve(&self) -> Result<Resolved> {
        if self.max_degree < 1 {
            return Err(Error::BadParameter("max_degree must be at least 1".into()));
        }
        let functional = self.functional()?;
        let pair = resolve_pair(&self.pair, &functional)?;
        if pair.dim() != functional.dim() {
            return Err(Error::DimensionMismatch {
                expected: functional.dim(),
                found: pair.dim(),
            });
        }
        Ok(Resolved {
            functional,
            pair,
            max_degree: self.max_degree,
            mode: self.mode,
        })
    }
}

fn first_simplex(u: &MomentFunctional) -> Result<SimplexJacobiParams> {
    u.components()
        .into_iter()
        .find_map(|c| match c {
            Descriptor::SimplexJacobi(p) => Some(p),
            _ => None,
        })
        .ok_or_else(|| Error::BadParameter("functional has no simplex_jacobi component".into()))
}

fn first_laguerre(u: &MomentFunctional) -> Result<LaguerreJacobiParams> {
    u.components()
        .into_iter()
        .find_map(|c| match c {
            Descriptor::LaguerreJacobi(p) => Some(p),
            _ => None,
        })
        .ok_or_else(|| Error::BadParameter("functional has no laguerre_jacobi component".into()))
}

fn one_based(i: usize) -> Result<usize> {
    i.checked_sub(1)
        .ok_or_else(|| Error::BadParameter("modification index is 1-based".into()))
}

fn params<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("builder params: {e}")))
}

pub fn resolve_pair(sel: &PairSelector, u: &MomentFunctional) -> Result<PearsonPair> {
    match sel {
        PairSelector::Named(name) => match name.as_str() {
            "appell" => appell_pair(&first_simplex(u)?),
            "example2" => example2_pair(&first_laguerre(u)?),
            other => {
                let Some(i) = other.strip_prefix("appell_type:") else {
                    return Err(Error::BadParameter(format!("unknown pair {other:?}")));
                };
                let i: usize = i
                    .parse()
                    .map_err(|_| Error::Parse(format!("modification index {i:?}")))?;
                appell_type_pair(&first_simplex(u)?, one_based(i)?)
            }
        },
        PairSelector::Builder {
            builder,
            index,
            params: p,
        } => match builder.as_str() {
            "appell" => appell_pair(&params(p)?),
            "appell_type" => appell_type_pair(&params(p)?, one_based(index.unwrap_or(1))?),
            "example2" => example2_pair(&params(p)?),
            other => Err(Error::BadParameter(format!("unknown builder {other:?}"))),
        },
        PairSelector::Inline { phi, psi } => {
            let d = psi.len();
            let rows = phi
                .iter()
                .map(|row| row.iter().map(|t| MPoly::parse(t, d)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let psi = psi.iter().map(|t| MPoly::parse(t, d)).collect::<Result<Vec<_>>>()?;
            PearsonPair::new(PolyMatrix::from_rows(rows)?, PolyMatrix::column(psi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = r#"{"type": "simplex_jacobi", "alpha": ["0", "0"], "beta": "0"}"#;

    fn config(pair: &str, functional: &str) -> String {
        format!(r#"{{"functional": {functional}, "pair": {pair}, "max_degree": 3}}"#)
    }

    #[test]
    fn named_pairs_infer_parameters() {
        let cfg = RunConfig::from_json(&config(r#""appell""#, TRIANGLE)).unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!((r.pair.s(), r.mode), (0, Mode::Verify));
        let sum = format!(
            r#"{{"type": "sum", "terms": [{TRIANGLE}, {{"type": "point_mass", "location": ["0", "0"], "weight": "1"}}]}}"#
        );
        let r = RunConfig::from_json(&config(r#""appell_type:2""#, &sum))
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(r.pair.s(), 1);
        assert_eq!(r.pair.phi().get(1, 1), &MPoly::parse("x2^3 - x2^2", 2).unwrap());
    }

    #[test]
    fn builder_and_inline_pairs() {
        let b = r#"{"builder": "example2", "params": {"a": ["0", "0"]}}"#;
        let r = RunConfig::from_json(&config(b, TRIANGLE)).unwrap().resolve().unwrap();
        assert_eq!(r.pair.s(), 1);
        let inline = r#"{"phi": [["x1^2 - x1", "x1*x2"], ["x1*x2", "x2^2 - x2"]], "psi": ["3*x1 - 1", "3*x2 - 1"]}"#;
        let r = RunConfig::from_json(&config(inline, TRIANGLE))
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(r.pair, appell_pair(&SimplexJacobiParams::uniform(2)).unwrap());
    }

    #[test]
    fn config_errors() {
        for pair in [
            r#""hermite""#,
            r#""example2""#,
            r#""appell_type:0""#,
            r#""appell_type:x""#,
        ] {
            assert!(
                RunConfig::from_json(&config(pair, TRIANGLE))
                    .unwrap()
                    .resolve()
                    .is_err(),
                "{pair}"
            );
        }
        assert!(RunConfig::from_json("{}").is_err());
        let zero = r#"{"functional": {"type": "point_mass", "location": ["0", "0"], "weight": "1"}, "pair": "appell", "max_degree": 0}"#;
        assert!(matches!(
            RunConfig::from_json(zero).unwrap().resolve(),
            Err(Error::BadParameter(_))
        ));
        let explore = r#"{"functional": {"type": "simplex_jacobi", "alpha": [0, 0], "beta": 0}, "pair": "appell", "max_degree": 2, "mode": "explore"}"#;
        assert_eq!(RunConfig::from_json(explore).unwrap().mode, Mode::Explore);
    }
}

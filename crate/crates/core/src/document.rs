//! TOML documents for problem instances, solutions and oracle reports.
//!
//! ```toml
//! K = 2
//! N = 2
//! p_max = 1.0
//! A = [1.0, 0.0, 0.0, 1.0]   # K x N, row-major
//! b = [1.0, 1.0]
//! C = [0.0, 1.0, 1.0, 0.0]   # K x K, row-major
//! sigma = [1.0, 1.0]
//! ```
//!
//! All quantities are linear (not dB). A solution document repeats the
//! instance fields and adds `t_star`, `p_star`, `active_n` (1-based) and
//! `rho_all`; an oracle document adds `method` instead of `active_n`.
//! Unknown fields are ignored on load, so any of these documents can be read
//! back as an instance.

use nalgebra::{DMatrix, DVector};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::{OracleMethod, OracleReport};
use crate::problem::ProblemInstance;
use crate::solver::Solution;

const HEADER: &str = "# max-min power control document; all quantities linear scale (not dB)\n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p_max: f64,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    pub sigma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    #[serde(flatten)]
    pub instance: InstanceDocument,
    pub t_star: f64,
    pub p_star: Vec<f64>,
    pub active_n: usize,
    pub rho_all: Vec<f64>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_max_rel_discrepancy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDocument {
    #[serde(flatten)]
    pub instance: InstanceDocument,
    pub method: OracleMethod,
    pub t_star: f64,
    pub p_star: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()).collect()
}

impl InstanceDocument {
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        InstanceDocument {
            k: inst.users(),
            n: inst.constraints(),
            p_max: inst.p_max,
            a: row_major(&inst.a),
            b: inst.b.iter().copied().collect(),
            c: row_major(&inst.c),
            sigma: inst.sigma.iter().copied().collect(),
        }
    }

    /// Converts to an instance, rejecting wrong lengths and invalid values.
    pub fn to_instance(&self) -> Result<ProblemInstance> {
        let (k, n) = (self.k, self.n);
        let check = |field: &str, len: usize, expected: usize| {
            if len == expected {
                Ok(())
            } else {
                Err(Error::Document(format!(
                    "field `{field}` has {len} entries, expected {expected} (K = {k}, N = {n})"
                )))
            }
        };
        check("A", self.a.len(), k * n)?;
        check("b", self.b.len(), k)?;
        check("C", self.c.len(), k * k)?;
        check("sigma", self.sigma.len(), k)?;
        ProblemInstance::new(
            DMatrix::from_row_slice(k, n, &self.a),
            DVector::from_row_slice(&self.b),
            DMatrix::from_row_slice(k, k, &self.c),
            DVector::from_row_slice(&self.sigma),
            self.p_max,
        )
    }
}

impl SolutionDocument {
    pub fn new(inst: &ProblemInstance, sol: &Solution) -> Self {
        SolutionDocument {
            instance: InstanceDocument::from_instance(inst),
            t_star: sol.t_star,
            p_star: sol.p_star.iter().copied().collect(),
            active_n: sol.active_n + 1,
            rho_all: sol.rho_all.clone(),
            certified: sol.is_certified(),
            warnings: sol.warnings.iter().map(ToString::to_string).collect(),
            oracle_max_rel_discrepancy: None,
        }
    }
}

impl OracleDocument {
    pub fn new(inst: &ProblemInstance, report: &OracleReport) -> Self {
        OracleDocument {
            instance: InstanceDocument::from_instance(inst),
            method: report.method,
            t_star: report.t_star,
            p_star: report.p_star.iter().copied().collect(),
            iterations: report.iterations,
            converged: report.converged,
        }
    }
}

/// Serializes any document with the units header.
pub fn to_toml<T: Serialize>(doc: &T) -> Result<String> {
    let body = toml::to_string(doc).map_err(|e| Error::Document(e.to_string()))?;
    Ok(format!("{HEADER}{body}"))
}

pub fn from_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    from_toml::<InstanceDocument>(text)?.to_instance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, SolverOptions};

    const SYMMETRIC: &str = "K = 2\nN = 2\np_max = 1.0\nA = [1.0, 0.0, 0.0, 1.0]\n\
        b = [1.0, 1.0]\nC = [0.0, 1.0, 1.0, 0.0]\nsigma = [1.0, 1.0]\n";

    #[test]
    fn parses_instance_fields() {
        let inst = parse_instance(SYMMETRIC).unwrap();
        assert_eq!(inst.users(), 2);
        assert_eq!(inst.a, DMatrix::identity(2, 2));
        assert_eq!(inst.c[(0, 1)], 1.0);
    }

    #[test]
    fn rows_are_row_major() {
        let text = "K = 2\nN = 1\np_max = 1.0\nA = [1.0, 2.0]\nb = [1.0, 1.0]\n\
            C = [0.0, 3.0, 4.0, 0.0]\nsigma = [1.0, 1.0]\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.a[(1, 0)], 2.0);
        assert_eq!(inst.c[(0, 1)], 3.0);
        assert_eq!(inst.c[(1, 0)], 4.0);
        assert_eq!(InstanceDocument::from_instance(&inst).c, vec![0.0, 3.0, 4.0, 0.0]);
    }

    #[test]
    fn solution_document_round_trip() {
        let inst = parse_instance(SYMMETRIC).unwrap();
        let sol = solve(&inst, &SolverOptions::default()).unwrap();
        let doc = SolutionDocument::new(&inst, &sol);
        let text = to_toml(&doc).unwrap();
        assert!(text.starts_with('#'));
        for key in ["K =", "N =", "p_max =", "A =", "b =", "C =", "sigma =", "t_star =", "p_star =", "active_n =", "rho_all ="] {
            assert!(text.contains(key), "missing {key} in\n{text}");
        }
        let back: SolutionDocument = from_toml(&text).unwrap();
        assert_eq!(back, doc);
        // A solution document loads as an instance.
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn errors_are_descriptive() {
        let err = parse_instance("K = 2\nN = oops\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");

        let short = SYMMETRIC.replace("b = [1.0, 1.0]", "b = [1.0]");
        let err = parse_instance(&short).unwrap_err().to_string();
        assert!(err.contains("`b` has 1 entries"), "{err}");

        let invalid = SYMMETRIC.replace("sigma = [1.0, 1.0]", "sigma = [1.0, 0.0]");
        let err = parse_instance(&invalid).unwrap_err().to_string();
        assert!(err.contains("sigma[2] not strictly positive"), "{err}");
    }
}

//! Problem files: a JSON document naming the coefficient field and the
//! matrix entries as ascending coefficient lists in s.
//!
//! ```json
//! {
//!   "field": { "base": "Q", "variable": "t", "twist": "differential" },
//!   "matrix": [[["0", "1"], ["0", "t"]], [["1"], ["t"]]],
//!   "bound": 2,
//!   "algorithm": "all"
//! }
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use skewdet::field::{BaseField, FieldSpec, Scalar, Twist};
use skewdet::skew::{Algorithm, SkewPolyMatrix};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDesc {
    /// `"Q"` or `"GF(p)"`.
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    /// `commutative`, `differential`, `shift` or `qshift`.
    pub twist: String,
    /// The q of a q-shift, in the base field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// Step h of a shift `t ↦ t + h`; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: FieldDesc,
    /// `matrix[i][j][d]` is the s^d coefficient of entry (i, j). Missing
    /// trailing coefficients are zero.
    pub matrix: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub matrix: SkewPolyMatrix,
    pub bound: Option<u64>,
    pub algorithm: Option<Algorithm>,
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "relax" => Ok(Algorithm::Relax),
        "expand" => Ok(Algorithm::Expand),
        "oracle" => Ok(Algorithm::Oracle),
        "all" => Ok(Algorithm::All),
        other => Err(CliError::Parse(format!("unknown algorithm {other:?}"))),
    }
}

pub fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Relax => "relax",
        Algorithm::Expand => "expand",
        Algorithm::Oracle => "oracle",
        Algorithm::All => "all",
    }
}

fn parse_base(s: &str) -> Result<BaseField, CliError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(BaseField::Rationals);
    }
    let p = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|p| p.trim().parse::<u64>().ok())
        .ok_or_else(|| {
            CliError::Parse(format!("unknown base field {s:?}; use \"Q\" or \"GF(p)\""))
        })?;
    Ok(BaseField::Prime(p))
}

fn base_name(b: &BaseField) -> String {
    match b {
        BaseField::Rationals => "Q".into(),
        BaseField::Prime(p) => format!("GF({p})"),
    }
}

impl FieldDesc {
    pub fn to_spec(&self) -> Result<FieldSpec, CliError> {
        let base = parse_base(&self.base)?;
        let base_spec = FieldSpec::new(base.clone(), None, Twist::Commutative)
            .map_err(|e| CliError::Parse(e.to_string()))?;
        let twist = match self.twist.to_ascii_lowercase().as_str() {
            "commutative" => Twist::Commutative,
            "differential" => Twist::Differential,
            "shift" => Twist::Shift {
                step: self.step.unwrap_or(1),
            },
            "qshift" | "q-shift" => {
                let q = self
                    .q
                    .as_deref()
                    .ok_or_else(|| CliError::Parse("a q-shift needs \"q\"".into()))?;
                let q = base_spec
                    .parse(q)
                    .map_err(|e| CliError::Parse(format!("q: {e}")))?;
                Twist::QShift(q)
            }
            other => return Err(CliError::Parse(format!("unknown twist {other:?}"))),
        };
        if self.q.is_some() && !matches!(twist, Twist::QShift(_)) {
            return Err(CliError::Parse("\"q\" is only used by a q-shift".into()));
        }
        if self.step.is_some() && !matches!(twist, Twist::Shift { .. }) {
            return Err(CliError::Parse("\"step\" is only used by a shift".into()));
        }
        FieldSpec::new(base, self.variable.clone(), twist)
            .map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_spec(k: &FieldSpec) -> FieldDesc {
        let base_spec = FieldSpec::new(k.base().clone(), None, Twist::Commutative)
            .expect("the base of a valid field is valid");
        let (twist, q, step) = match k.twist() {
            Twist::Commutative => ("commutative", None, None),
            Twist::Differential => ("differential", None, None),
            Twist::Shift { step } => ("shift", None, Some(*step)),
            Twist::QShift(q) => ("qshift", Some(base_spec.format(q)), None),
        };
        FieldDesc {
            base: base_name(k.base()),
            variable: k.variable().map(str::to_string),
            twist: twist.into(),
            q,
            step,
        }
    }
}

fn trimmed(mut v: Vec<String>) -> Vec<String> {
    while v.last().is_some_and(|c| c == "0") {
        v.pop();
    }
    v
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn parse(&self) -> Result<Problem, CliError> {
        let k = Arc::new(self.field.to_spec()?);
        let entries = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        e.iter()
                            .map(|c| {
                                k.parse(c).map_err(|err| {
                                    CliError::Parse(format!("entry ({i}, {j}), {c:?}: {err}"))
                                })
                            })
                            .collect::<Result<Vec<Scalar>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = SkewPolyMatrix::from_entries(k, &entries)
            .map_err(|e| CliError::Parse(e.to_string()))?;
        let algorithm = self.algorithm.as_deref().map(parse_algorithm).transpose()?;
        Ok(Problem {
            matrix,
            bound: self.bound,
            algorithm,
        })
    }

    /// Canonical spelling of the same problem: canonical field names and
    /// scalar text, no trailing zero coefficients.
    pub fn normalize(&self) -> Result<ProblemFile, CliError> {
        let k = self.field.to_spec()?;
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.iter()
                            .map(|c| k.parse(c).map(|x| k.format(&x)))
                            .collect::<Result<Vec<_>, _>>()
                            .map(trimmed)
                            .map_err(|err| CliError::Parse(err.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let algorithm = self
            .algorithm
            .as_deref()
            .map(|a| parse_algorithm(a).map(|a| algorithm_name(a).to_string()))
            .transpose()?;
        Ok(ProblemFile {
            field: FieldDesc::from_spec(&k),
            matrix,
            bound: self.bound,
            algorithm,
        })
    }
}

impl Problem {
    pub fn to_file(&self) -> ProblemFile {
        let a = &self.matrix;
        let k = a.field();
        let matrix = (0..a.n())
            .map(|i| {
                (0..a.n())
                    .map(|j| trimmed(a.entry(i, j).iter().map(|c| k.format(c)).collect()))
                    .collect()
            })
            .collect();
        ProblemFile {
            field: FieldDesc::from_spec(k),
            matrix,
            bound: self.bound,
            algorithm: self.algorithm.map(|a| algorithm_name(a).to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(json: &str) -> ProblemFile {
        ProblemFile::from_json(json).unwrap()
    }

    #[test]
    fn parses_and_normalizes() {
        let f = file(
            r#"{"field": {"base": "GF(5)", "variable": "x", "twist": "shift"},
                "matrix": [[["x", "1", "0"]]], "algorithm": "ALL"}"#,
        );
        let n = f.normalize().unwrap();
        assert_eq!(n.field.step, Some(1));
        assert_eq!(n.matrix, vec![vec![vec!["x".to_string(), "1".to_string()]]]);
        assert_eq!(n.algorithm.as_deref(), Some("all"));
        let p = f.parse().unwrap();
        assert_eq!(p.matrix.ell(), 1);
        assert_eq!(p.to_file(), n);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"field": {"base": "R", "twist": "commutative"}, "matrix": [[["1"]]]}"#,
            r#"{"field": {"base": "Q", "twist": "differential"}, "matrix": [[["1"]]]}"#,
            r#"{"field": {"base": "Q", "variable": "t", "twist": "qshift"}, "matrix": [[["1"]]]}"#,
            r#"{"field": {"base": "Q", "variable": "t", "twist": "qshift", "q": "1"}, "matrix": [[["1"]]]}"#,
            r#"{"field": {"base": "Q", "twist": "commutative", "q": "2"}, "matrix": [[["1"]]]}"#,
            r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": [[["1"], ["2"]]]}"#,
            r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": [[["t"]]]}"#,
            r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": []}"#,
            r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": [[["1"]]], "algorithm": "fast"}"#,
        ];
        for b in bad {
            let r = ProblemFile::from_json(b).and_then(|f| f.parse());
            assert!(matches!(r, Err(CliError::Parse(_))), "{b}");
        }
        assert!(ProblemFile::from_json(r#"{"field": {}, "matrix": []}"#).is_err());
        assert!(ProblemFile::from_json(
            r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": [], "extra": 1}"#
        )
        .is_err());
    }
}

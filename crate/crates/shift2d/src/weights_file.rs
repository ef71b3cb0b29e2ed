//! JSON weight files.
//!
//! ```json
//! {
//!   "name": "ex216:1.05,1.05",
//!   "alpha": [[1.05, 1.0], [1.0, 1.0]],
//!   "beta": [[1.05, 2.1], [1.0, 2.1]],
//!   "tail": "constant"
//! }
//! ```
//!
//! `alpha[k1][k2]` is the weight of `T1` at `(k1, k2)`; both arrays have the
//! same rectangular shape. `tail` is `"constant"` (the nearest core value
//! applies beyond the core) or `"formula:<id>"` for a built-in weight law.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shift2d_core::shift_model::{EmbeddingSpec, FormulaTail, ModelError};
use shift2d_core::{Tail, WeightDiagram};
use thiserror::Error;

use crate::numfmt::to_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFile {
    pub name: String,
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    pub tail: String,
}

/// Canonical-embedding input: `omega` with either `eta` or a ratio `r`
/// (`eta = r * omega`). The last entries repeat forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    #[serde(default)]
    pub name: Option<String>,
    pub omega: Vec<f64>,
    #[serde(default)]
    pub eta: Option<Vec<f64>>,
    #[serde(default)]
    pub ratio: Option<f64>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown tail rule {0:?} (expected \"constant\" or \"formula:<id>\")")]
    Tail(String),
    #[error("bad shape: {0}")]
    Shape(String),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn parse_tail(s: &str) -> Result<Tail, SchemaError> {
    match s {
        "constant" => Ok(Tail::Constant),
        _ => s
            .strip_prefix("formula:")
            .and_then(FormulaTail::from_id)
            .map(Tail::Formula)
            .ok_or_else(|| SchemaError::Tail(s.to_string())),
    }
}

pub fn tail_id(t: Tail) -> String {
    match t {
        Tail::Constant => "constant".to_string(),
        Tail::Formula(f) => format!("formula:{}", f.id()),
    }
}

fn check_rect(field: &str, rows: &[Vec<f64>]) -> Result<(usize, usize), SchemaError> {
    let n1 = rows.len();
    let n2 = rows.first().map_or(0, Vec::len);
    if n1 == 0 || n2 == 0 {
        return Err(SchemaError::Shape(format!("{field} is empty")));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n2) {
        return Err(SchemaError::Shape(format!("{field} row {i} has {} entries, row 0 has {n2}", rows[i].len())));
    }
    Ok((n1, n2))
}

impl WeightFile {
    pub fn from_diagram(d: &WeightDiagram) -> Self {
        WeightFile {
            name: d.name().to_string(),
            alpha: d.alpha_rows(),
            beta: d.beta_rows(),
            tail: tail_id(d.tail()),
        }
    }

    /// Shape and tail checks, then construction (which validates commutativity).
    pub fn into_diagram(self) -> Result<WeightDiagram, LoadError> {
        let sa = check_rect("alpha", &self.alpha)?;
        let sb = check_rect("beta", &self.beta)?;
        if sa != sb {
            return Err(SchemaError::Shape(format!("alpha is {}x{} but beta is {}x{}", sa.0, sa.1, sb.0, sb.1)).into());
        }
        let tail = parse_tail(&self.tail)?;
        Ok(WeightDiagram::new(self.name, self.alpha, self.beta, tail)?)
    }
}

impl EmbeddingFile {
    pub fn into_spec(self) -> Result<EmbeddingSpec, LoadError> {
        match (self.eta, self.ratio) {
            (Some(eta), None) => Ok(EmbeddingSpec::new(self.omega, eta)?),
            (None, Some(r)) => Ok(EmbeddingSpec::scaled(self.omega, r)?),
            _ => Err(SchemaError::Shape("give exactly one of \"eta\" and \"ratio\"".to_string()).into()),
        }
    }
}

pub fn diagram_from_str(s: &str) -> Result<WeightDiagram, LoadError> {
    let f: WeightFile = serde_json::from_str(s).map_err(SchemaError::from)?;
    f.into_diagram()
}

pub fn diagram_to_string(d: &WeightDiagram) -> String {
    let mut s = to_json(&WeightFile::from_diagram(d));
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<WeightDiagram, LoadError> {
    diagram_from_str(&read(path)?)
}

pub fn save(path: &Path, d: &WeightDiagram) -> Result<(), LoadError> {
    fs::write(path, diagram_to_string(d)).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })
}

pub fn load_embedding(path: &Path) -> Result<EmbeddingSpec, LoadError> {
    let f: EmbeddingFile = serde_json::from_str(&read(path)?).map_err(SchemaError::from)?;
    f.into_spec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use shift2d_core::shift_model::{build_drury_arveson, build_ex216};

    #[test]
    fn round_trip_is_exact() {
        for d in [build_ex216(1.05, 1.05).unwrap(), build_drury_arveson(3).unwrap()] {
            let back = diagram_from_str(&diagram_to_string(&d)).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn schema_errors() {
        let bad = [
            "{",
            r#"{"name":"x","alpha":[[1]],"beta":[[1]]}"#,
            r#"{"name":"x","alpha":[[1]],"beta":[[1]],"tail":"linear"}"#,
            r#"{"name":"x","alpha":[[1],[1,2]],"beta":[[1],[1]],"tail":"constant"}"#,
            r#"{"name":"x","alpha":[[1]],"beta":[[1]],"tail":"constant","extra":0}"#,
            r#"{"name":"x","alpha":[],"beta":[],"tail":"constant"}"#,
        ];
        for s in bad {
            assert!(matches!(diagram_from_str(s), Err(LoadError::Schema(_))), "{s}");
        }
    }

    #[test]
    fn non_commuting_file_is_rejected() {
        let s = r#"{"name":"x","alpha":[[1,2],[1,1]],"beta":[[1,1],[1,1]],"tail":"constant"}"#;
        assert!(matches!(diagram_from_str(s), Err(LoadError::Model(ModelError::NonCommuting { .. }))));
    }

    #[test]
    fn embedding_file() {
        let f: EmbeddingFile = serde_json::from_str(r#"{"omega":[0.5,1.0],"ratio":2.0}"#).unwrap();
        let e = f.into_spec().unwrap();
        assert_eq!(e.eta_at(0), 1.0);
        let both: EmbeddingFile = serde_json::from_str(r#"{"omega":[1.0],"eta":[1.0],"ratio":2.0}"#).unwrap();
        assert!(both.into_spec().is_err());
    }
}

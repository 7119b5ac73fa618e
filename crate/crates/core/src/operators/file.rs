//! JSON operator files.
//!
//! ```json
//! {"dim": 2, "cross": [[i, j, k, l, re, im], ...], "braid": [...] | null, "label": "text"}
//! ```
//!
//! Indices are 1-based. Omitted entries are zero.

use super::{BraidOperator, CrossOperator, OperatorError, StatisticsSystem};
use crate::linalg::{c64, Matrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// `(i, j, k, l, re, im)` with 1-based indices.
pub type RawEntry = (usize, usize, usize, usize, f64, f64);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorFileError {
    #[error("malformed operator file: {0}")]
    Json(String),
    #[error("{operator} entry index {index} outside 1..={dim}")]
    IndexOutOfRange {
        operator: &'static str,
        index: usize,
        dim: usize,
    },
    #[error("duplicate {operator} entry ({i},{j},{k},{l})")]
    DuplicateEntry {
        operator: &'static str,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dim: usize,
    pub cross: Vec<RawEntry>,
    #[serde(default)]
    pub braid: Option<Vec<RawEntry>>,
    #[serde(default)]
    pub label: String,
}

fn entries_to_matrix(
    operator: &'static str,
    dim: usize,
    entries: &[RawEntry],
) -> Result<Matrix, OperatorFileError> {
    if dim == 0 || dim > super::MAX_DIM {
        return Err(OperatorError::InvalidDim(dim).into());
    }
    let mut seen = BTreeSet::new();
    let mut mat = Matrix::zeros(dim * dim, dim * dim);
    for &(i, j, k, l, re, im) in entries {
        for index in [i, j, k, l] {
            if index == 0 || index > dim {
                return Err(OperatorFileError::IndexOutOfRange { operator, index, dim });
            }
        }
        if !seen.insert((i, j, k, l)) {
            return Err(OperatorFileError::DuplicateEntry { operator, i, j, k, l });
        }
        mat[((k - 1) * dim + (l - 1), (i - 1) * dim + (j - 1))] = c64(re, im);
    }
    Ok(mat)
}

fn matrix_to_entries(dim: usize, mat: &Matrix) -> Vec<RawEntry> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for l in 0..dim {
                    let z = mat[(k * dim + l, i * dim + j)];
                    if z.re != 0.0 || z.im != 0.0 {
                        out.push((i + 1, j + 1, k + 1, l + 1, z.re, z.im));
                    }
                }
            }
        }
    }
    out
}

impl OperatorFile {
    pub fn parse(text: &str) -> Result<Self, OperatorFileError> {
        serde_json::from_str(text).map_err(|e| OperatorFileError::Json(e.to_string()))
    }

    pub fn from_system(system: &StatisticsSystem) -> Self {
        let dim = system.dim();
        Self {
            dim,
            cross: matrix_to_entries(dim, system.cross.matrix()),
            braid: system.braid.as_ref().map(|b| matrix_to_entries(dim, b.matrix())),
            label: system.label.clone(),
        }
    }

    pub fn into_system(self) -> Result<StatisticsSystem, OperatorFileError> {
        let cross = CrossOperator::new(self.dim, entries_to_matrix("cross", self.dim, &self.cross)?)?;
        let braid = match &self.braid {
            Some(entries) => Some(BraidOperator::new(
                self.dim,
                entries_to_matrix("braid", self.dim, entries)?,
            )?),
            None => None,
        };
        Ok(StatisticsSystem::new(cross, braid, self.label)?)
    }

    /// Canonical text form: fixed key order, one entry per line, entries
    /// sorted by `(i, j, k, l)`.
    pub fn to_json_string(&self) -> String {
        fn num(x: f64) -> String {
            serde_json::to_string(&x).expect("finite float")
        }
        fn entries(out: &mut String, list: &[RawEntry]) {
            if list.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (n, &(i, j, k, l, re, im)) in list.iter().enumerate() {
                out.push_str(&format!("    [{i}, {j}, {k}, {l}, {}, {}]", num(re), num(im)));
                out.push_str(if n + 1 < list.len() { ",\n" } else { "\n" });
            }
            out.push_str("  ]");
        }

        let mut sorted = self.clone();
        sorted.cross.sort_by_key(|e| (e.0, e.1, e.2, e.3));
        if let Some(b) = sorted.braid.as_mut() {
            b.sort_by_key(|e| (e.0, e.1, e.2, e.3));
        }

        let mut out = String::from("{\n");
        out.push_str(&format!("  \"dim\": {},\n", sorted.dim));
        out.push_str(&format!(
            "  \"label\": {},\n",
            serde_json::to_string(&sorted.label).expect("string")
        ));
        out.push_str("  \"cross\": ");
        entries(&mut out, &sorted.cross);
        out.push_str(",\n  \"braid\": ");
        match &sorted.braid {
            Some(b) => entries(&mut out, b),
            None => out.push_str("null"),
        }
        out.push_str("\n}\n");
        out
    }
}

/// SHA-256 of a system's canonical operator file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemKey([u8; 32]);

impl fmt::Display for SystemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl StatisticsSystem {
    pub fn from_json(text: &str) -> Result<Self, OperatorFileError> {
        OperatorFile::parse(text)?.into_system()
    }

    pub fn to_json(&self) -> String {
        OperatorFile::from_system(self).to_json_string()
    }

    pub fn content_key(&self) -> SystemKey {
        let digest = Sha256::digest(self.to_json().as_bytes());
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        SystemKey(key)
    }
}

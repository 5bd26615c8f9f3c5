//! State files.
//!
//! ```json
//! {"convention": "row-major-A-major", "m": 2, "n": 2,
//!  "re": [[0.5, 0, 0, 0.5], ...], "im": [[0, 0, 0, 0], ...]}
//! ```
//!
//! Entry `(r, c)` belongs to `|ij⟩⟨kl|` with `r = i·n + j`, `c = k·n + l`.
//! Writers emit nested rows; readers also accept a flat row-major array.

use std::fs;
use std::path::Path;

use concbound_core::{BipartiteIndex, BipartiteState, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONVENTION: &str = "row-major-A-major";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl Entries {
    fn flatten(self, dim: usize, field: &str) -> Result<Vec<f64>, CliError> {
        let flat = match self {
            Entries::Flat(v) => v,
            Entries::Nested(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(CliError::Input(format!("`{field}` must be {dim} rows of {dim} entries")));
                }
                rows.concat()
            }
        };
        if flat.len() != dim * dim {
            return Err(CliError::Input(format!(
                "`{field}` has {} entries, expected {}",
                flat.len(),
                dim * dim
            )));
        }
        Ok(flat)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default)]
    pub convention: Option<String>,
    pub m: usize,
    pub n: usize,
    pub re: Entries,
    pub im: Entries,
}

impl StateFile {
    pub fn from_state(rho: &BipartiteState) -> Self {
        let dim = rho.index().dim();
        let mat = rho.matrix();
        let rows = |f: fn(concbound_core::Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim).map(|r| (0..dim).map(|c| f(mat[(r, c)])).collect()).collect()
        };
        Self {
            convention: Some(CONVENTION.to_owned()),
            m: rho.m(),
            n: rho.n(),
            re: Entries::Nested(rows(|z| z.re)),
            im: Entries::Nested(rows(|z| z.im)),
        }
    }

    /// Validated state. With `allow_indefinite` only Hermiticity and unit
    /// trace are enforced.
    pub fn into_state(self, allow_indefinite: bool) -> Result<BipartiteState, CliError> {
        if let Some(conv) = &self.convention {
            if conv != CONVENTION {
                return Err(CliError::Input(format!(
                    "unsupported index convention `{conv}`, expected `{CONVENTION}`"
                )));
            }
        }
        let idx = BipartiteIndex::new(self.m, self.n)?;
        let dim = idx.dim();
        let re = self.re.flatten(dim, "re")?;
        let im = self.im.flatten(dim, "im")?;
        let mat = ComplexMatrix::from_parts(dim, dim, &re, &im)?;
        let state = if allow_indefinite {
            BipartiteState::new_indefinite(idx, mat)?
        } else {
            BipartiteState::new(idx, mat)?
        };
        Ok(state)
    }
}

pub fn to_json(rho: &BipartiteState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state files serialize")
}

pub fn parse(text: &str, allow_indefinite: bool) -> Result<BipartiteState, CliError> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed state file: {e}")))?;
    file.into_state(allow_indefinite)
}

pub fn read(path: &Path, allow_indefinite: bool) -> Result<BipartiteState, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text, allow_indefinite)
}

pub fn write(path: &Path, rho: &BipartiteState) -> Result<(), CliError> {
    let mut text = to_json(rho);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

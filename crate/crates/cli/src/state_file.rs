//! On-disk density matrices: JSON with explicit `{re, im}` pairs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mixstate::{CMatrix, DensityMatrix, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub schema_version: u32,
    pub n_qubits: usize,
    /// Row-major, `4^n` entries.
    pub entries: Vec<Entry>,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, metadata: BTreeMap<String, Value>) -> Self {
        let m = rho.matrix();
        let dim = rho.dim();
        let entries = (0..dim * dim)
            .map(|k| {
                let z = m[(k / dim, k % dim)];
                Entry { re: z.re, im: z.im }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            n_qubits: rho.n_qubits(),
            entries,
            metadata,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Failure(format!(
                "schema mismatch: schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.n_qubits >= usize::BITS as usize / 2 {
            return Err(CliError::Failure(format!(
                "schema mismatch: n_qubits = {}",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        if self.entries.len() != dim * dim {
            return Err(CliError::Failure(format!(
                "schema mismatch: {} entries for {} qubits (expected {})",
                self.entries.len(),
                self.n_qubits,
                dim * dim
            )));
        }
        let m = CMatrix::from_fn(dim, dim, |r, c| {
            let e = self.entries[r * dim + c];
            C64::new(e.re, e.im)
        });
        // every load failure is a file problem, not a usage problem
        DensityMatrix::new(m).map_err(|e| CliError::Failure(format!("rejected state file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Failure(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Failure(format!("schema mismatch in {}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("state files serialize");
        fs::write(path, text + "\n")
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn load(path: &Path) -> Result<DensityMatrix, CliError> {
    StateFile::read(path)?.to_density()
}

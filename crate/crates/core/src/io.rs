//! Density-matrix files and atomic output.
//!
//! A state file is a JSON object `{"dims": [d1, ...], "re": [...], "im": [...]}`
//! with the real and imaginary parts of the matrix in row-major order.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, DensityMatrix, Dims, Operator, C64};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self {
            dims: rho.dims().factors().to_vec(),
            re,
            im,
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let dims = Dims::new(self.dims.clone())
            .map_err(|e| Error::contract(format!("field `dims`: {e}")))?;
        let n = dims.total();
        for (field, v) in [("re", &self.re), ("im", &self.im)] {
            if v.len() != n * n {
                return Err(Error::contract(format!(
                    "field `{field}` has {} entries, dims require {}",
                    v.len(),
                    n * n
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::contract(format!("field `{field}` has a non-finite entry")));
            }
        }
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(self.re[i * n + j], self.im[i * n + j]));
        Operator::new(m, dims)
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        DensityMatrix::with_tolerances(self.to_operator()?, tol)
    }
}

pub fn parse_density_matrix(text: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.to_density(tol)
}

/// Read and validate a state file.
pub fn load_density_matrix(path: &Path, tol: &Tolerances) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_density_matrix(&text, tol)
}

pub fn save_density_matrix(path: &Path, rho: &DensityMatrix) -> Result<()> {
    let json = serde_json::to_string_pretty(&MatrixFile::from_density(rho))?;
    write_atomic(path, json.as_bytes())
}

/// Write to a temporary file in the target directory, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

//! JSON formats for operators, states, channels and certificates.
//!
//! Operator/state files use `{"n": int, "entries": [[[re, im], ...], ...]}`
//! row-major; readers validate Hermiticity (and state constraints where a
//! state is expected). Channels use `{"n": int, "kraus": [entries, ...]}`.

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, HermitianOperator, Matrix};
use crate::Cpx;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct OperatorJson {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl OperatorJson {
    pub fn from_matrix(n: usize, m: &Matrix<f64>) -> Self {
        let d = m.dim();
        let entries = (0..d)
            .map(|r| (0..d).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        OperatorJson { n, entries }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>> {
        let d = 1usize << self.n;
        if self.entries.len() != d {
            return Err(Error::Format {
                reason: format!("expected {d} rows for n = {}", self.n),
            });
        }
        let rows = self
            .entries
            .iter()
            .map(|row| {
                if row.len() != d {
                    return Err(Error::Format {
                        reason: format!("expected {d} columns"),
                    });
                }
                Ok(row.iter().map(|&[re, im]| Cpx::new(re, im)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }

    pub fn to_operator(&self) -> Result<HermitianOperator<f64>> {
        HermitianOperator::new(self.to_matrix()?)
    }

    pub fn to_state(&self) -> Result<DensityMatrix<f64>> {
        DensityMatrix::new(self.to_matrix()?)
    }
}

pub fn read_operator(path: &std::path::Path) -> Result<HermitianOperator<f64>> {
    let text = std::fs::read_to_string(path)?;
    let parsed: OperatorJson = serde_json::from_str(&text)?;
    parsed.to_operator()
}

pub fn read_state(path: &std::path::Path) -> Result<DensityMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    let parsed: OperatorJson = serde_json::from_str(&text)?;
    parsed.to_state()
}

pub fn write_operator(path: &std::path::Path, n: usize, m: &Matrix<f64>) -> Result<()> {
    let json = OperatorJson::from_matrix(n, m);
    std::fs::write(path, serde_json::to_string_pretty(&json)?)?;
    Ok(())
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ChannelJson {
    pub n: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct StabilizerExportJson {
    pub n: usize,
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

/// Base64 of row-major little-endian f64 pairs; bit-stable across runs.
pub fn matrix_to_base64(m: &Matrix<f64>) -> String {
    use base64::Engine;
    let mut bytes = Vec::with_capacity(m.dim() * m.dim() * 16);
    for v in m.data() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    base64::engine::general_purpose::STANDARD.encode(bytes)
}

pub fn matrix_from_base64(dim: usize, text: &str) -> Result<Matrix<f64>> {
    use base64::Engine;
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(text)
        .map_err(|e| Error::Format {
            reason: format!("base64: {e}"),
        })?;
    if bytes.len() != dim * dim * 16 {
        return Err(Error::Format {
            reason: format!("expected {} bytes, got {}", dim * dim * 16, bytes.len()),
        });
    }
    let mut m = Matrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let off = (r * dim + c) * 16;
            let re = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
            let im = f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap());
            m[(r, c)] = Cpx::new(re, im);
        }
    }
    Ok(m)
}

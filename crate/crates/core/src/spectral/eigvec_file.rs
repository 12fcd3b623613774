//! Text format for caller-supplied eigenvectors: one eigenvector per line,
//! whitespace-separated entries, each a decimal real (`-0.5`, `1e-3`) or a
//! complex token (`0.5+2i`, `-1.2e-3-4i`, `3i`, `-i`). Blank lines and lines
//! starting with `#` are skipped.

use super::{CMatrix, SpectralError, C64};

pub fn parse_complex(token: &str) -> Option<C64> {
    token.parse::<C64>().ok().filter(|z| z.re.is_finite() && z.im.is_finite())
}

/// Parses the file into a square matrix whose column `k` is the `k`-th
/// listed eigenvector.
pub fn parse_eigenvector_file(text: &str) -> Result<CMatrix, SpectralError> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                parse_complex(tok).ok_or_else(|| SpectralError::EigvecFile {
                    line: idx + 1,
                    msg: format!("invalid number `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(SpectralError::EigvecFile {
                    line: idx + 1,
                    msg: format!("expected {} entries, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(SpectralError::EigvecFile { line: 0, msg: "no eigenvectors".into() });
    }
    if rows[0].len() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, found: rows[0].len() });
    }
    Ok(CMatrix::from_fn(n, n, |i, k| rows[k][i]))
}

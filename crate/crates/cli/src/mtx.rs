//! Matrix Market coordinate reader/writer for the subset this tool accepts:
//! `matrix coordinate real general` with one-based indices. Duplicate
//! entries are summed, matching the common convention for coordinate files.

use std::fs;
use std::io::Write;
use std::path::Path;

use hypernewton::SparseMatrix;

use crate::error::{CliError, Result};

pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let parse = |line: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut lines = text.lines().enumerate();
    let (_, banner) = lines
        .next()
        .ok_or_else(|| parse(1, "empty file".into()))?;
    check_banner(banner).map_err(|m| parse(1, m))?;

    // Skip comments up to the size line.
    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((idx + 1, trimmed.to_string()));
        break;
    }
    let (size_no, size_text) =
        size_line.ok_or_else(|| parse(1, "missing size line".into()))?;
    let mut parts = size_text.split_whitespace();
    let n_rows: usize = next_number(&mut parts, "rows").map_err(|m| parse(size_no, m))?;
    let n_cols: usize = next_number(&mut parts, "columns").map_err(|m| parse(size_no, m))?;
    let nnz: usize = next_number(&mut parts, "entries").map_err(|m| parse(size_no, m))?;
    if n_rows == 0 || n_cols == 0 {
        return Err(parse(size_no, "dimensions must be positive".into()));
    }

    let mut triplets = Vec::with_capacity(nnz);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if triplets.len() == nnz {
            return Err(parse(line_no, format!("more than {nnz} entries")));
        }
        let mut parts = trimmed.split_whitespace();
        let i: usize = next_number(&mut parts, "row index").map_err(|m| parse(line_no, m))?;
        let j: usize = next_number(&mut parts, "column index").map_err(|m| parse(line_no, m))?;
        let v: f64 = parts
            .next()
            .ok_or_else(|| parse(line_no, "missing value".into()))?
            .parse()
            .map_err(|_| parse(line_no, "cannot parse value".into()))?;
        if i == 0 || i > n_rows || j == 0 || j > n_cols {
            return Err(parse(
                line_no,
                format!("index ({i}, {j}) outside {n_rows}x{n_cols}"),
            ));
        }
        triplets.push((i - 1, j - 1, v));
    }
    if triplets.len() != nnz {
        return Err(parse(
            0,
            format!("expected {nnz} entries, found {}", triplets.len()),
        ));
    }
    SparseMatrix::from_triplets(n_rows, n_cols, &triplets).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn check_banner(line: &str) -> std::result::Result<(), String> {
    let fields: Vec<String> = line.split_whitespace().map(|f| f.to_lowercase()).collect();
    if fields.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err("first line must start with %%MatrixMarket".into());
    }
    let expect = ["matrix", "coordinate", "real", "general"];
    for (pos, want) in expect.iter().enumerate() {
        match fields.get(pos + 1) {
            Some(got) if got == want => {}
            Some(got) => {
                return Err(format!(
                    "unsupported format: expected \"{want}\" at banner field {}, got \"{got}\"",
                    pos + 2
                ))
            }
            None => return Err(format!("banner is missing the \"{want}\" field")),
        }
    }
    Ok(())
}

fn next_number<'a, I: Iterator<Item = &'a str>>(
    parts: &mut I,
    what: &str,
) -> std::result::Result<usize, String> {
    parts
        .next()
        .ok_or_else(|| format!("missing {what}"))?
        .parse()
        .map_err(|_| format!("cannot parse {what}"))
}

/// Writes with 17 significant digits so values round-trip bit exactly.
pub fn write_matrix_market(path: &Path, a: &SparseMatrix) -> Result<()> {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    out.push_str(&format!("{} {} {}\n", a.n_rows(), a.n_cols(), a.nnz()));
    for r in 0..a.n_rows() {
        let (cols, vals) = a.row(r);
        for (&c, &v) in cols.iter().zip(vals) {
            out.push_str(&format!("{} {} {:.16e}\n", r + 1, c + 1, v));
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

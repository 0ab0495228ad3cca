//! Plain-text vectors: one decimal per line, `#` comments allowed.

use std::fs;
use std::io::Write;
use std::path::Path;

use hypernewton::DenseVector;

use crate::error::{CliError, Result};

pub fn read_vector(path: &Path) -> Result<DenseVector> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("cannot parse \"{line}\" as a number"),
        })?;
        values.push(v);
    }
    DenseVector::new(values).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_vector(path: &Path, v: &DenseVector) -> Result<()> {
    let mut out = String::new();
    for x in v.iter() {
        out.push_str(&format!("{x:.16e}\n"));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"# header\n1.5\n\n-2.0 # trailing\n3e-2\n").unwrap();
        let v = read_vector(f.path()).unwrap();
        assert_eq!(v.as_slice(), &[1.5, -2.0, 0.03]);
    }

    #[test]
    fn error_carries_line_number() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"1.0\nnot-a-number\n").unwrap();
        let err = read_vector(f.path()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn round_trip() {
        let v = DenseVector::new(vec![1.0 / 7.0, -3.25, 1e-200]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.txt");
        write_vector(&path, &v).unwrap();
        assert_eq!(read_vector(&path).unwrap(), v);
    }
}

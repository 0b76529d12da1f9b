//! JSON matrix files: `{"rows": r, "cols": c, "data": [[re, im], ...]}`,
//! row-major.

use std::fs;
use std::path::Path;

use ctrlmeas::{CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Input("rows and cols must be at least 1".into()));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Input(format!(
                "data has {} entries, expected rows*cols = {}",
                self.data.len(),
                self.rows * self.cols
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Input("non-finite entry".into()));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        self.validate()?;
        let data = self
            .data
            .iter()
            .map(|[re, im]| C64::new(*re, *im))
            .collect();
        CMatrix::from_vec(self.rows, self.cols, data).map_err(|e| CliError::Input(e.to_string()))
    }

    /// Entries of a single row or column.
    pub fn to_vector(&self) -> Result<Vec<C64>, CliError> {
        let m = self.to_matrix()?;
        if m.rows() != 1 && m.cols() != 1 {
            return Err(CliError::Input(format!(
                "expected a vector, got a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        Ok(m.into_data())
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

pub fn parse_matrix_file(text: &str) -> Result<MatrixFile, CliError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    file.validate()?;
    Ok(file)
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_matrix_file(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    read_matrix_file(path)?.to_matrix()
}

pub fn read_vector(path: &Path) -> Result<Vec<C64>, CliError> {
    read_matrix_file(path)?.to_vector()
}

/// Serializes with the shortest digits that parse back to the same `f64`.
pub fn write_matrix_file(file: &MatrixFile) -> String {
    serde_json::to_string(file).expect("matrix file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_one_by_one() {
        let f = parse_matrix_file(r#"{"rows":1,"cols":1,"data":[[1,2]]}"#).unwrap();
        let m = f.to_matrix().unwrap();
        assert_eq!(m[(0, 0)], C64::new(1.0, 2.0));
    }

    #[test]
    fn rejects_length_mismatch() {
        let e = parse_matrix_file(r#"{"rows":2,"cols":1,"data":[[1,2]]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse_matrix_file(r#"{"rows":1,"cols":1,"data":[[1,2]"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn vector_shapes() {
        let f = parse_matrix_file(r#"{"rows":1,"cols":2,"data":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(f.to_vector().unwrap().len(), 2);
        let f =
            parse_matrix_file(r#"{"rows":2,"cols":2,"data":[[1,0],[0,1],[0,0],[1,1]]}"#).unwrap();
        assert!(f.to_vector().is_err());
    }
}

//! Tensor file format and report emission.
//!
//! A tensor file is a JSON document with fields `row_modes`, `col_modes`,
//! and `entries` (flat list of `[re, im]` pairs in row-major order).

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GinvError, Result};
use crate::tensor::{DenseTensor, TensorShape};

#[derive(Debug, Serialize, Deserialize)]
struct TensorFile {
    row_modes: Vec<usize>,
    col_modes: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

pub fn tensor_from_str(text: &str) -> Result<DenseTensor> {
    let file: TensorFile =
        serde_json::from_str(text).map_err(|e| GinvError::Parse(e.to_string()))?;
    let shape = TensorShape::new(file.row_modes, file.col_modes)?;
    let expected = shape.row_count() * shape.col_count();
    if file.entries.len() != expected {
        return Err(GinvError::Parse(format!(
            "entries length {} does not match shape volume {}",
            file.entries.len(),
            expected
        )));
    }
    if let Some(bad) = file
        .entries
        .iter()
        .position(|[re, im]| !re.is_finite() || !im.is_finite())
    {
        return Err(GinvError::Parse(format!("non-finite entry at index {bad}")));
    }
    let entries = file
        .entries
        .into_iter()
        .map(|[re, im]| Complex64::new(re, im))
        .collect();
    DenseTensor::new(shape, entries)
}

pub fn tensor_to_string(t: &DenseTensor) -> String {
    let file = TensorFile {
        row_modes: t.shape().row_modes().to_vec(),
        col_modes: t.shape().col_modes().to_vec(),
        entries: t.entries().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string_pretty(&file).expect("tensor serialization cannot fail")
}

pub fn parse_tensor_file(path: &Path) -> Result<DenseTensor> {
    let text = std::fs::read_to_string(path)?;
    tensor_from_str(&text).map_err(|e| match e {
        GinvError::Parse(msg) => GinvError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_tensor_file(path: &Path, t: &DenseTensor) -> Result<()> {
    std::fs::write(path, tensor_to_string(t) + "\n")?;
    Ok(())
}

/// Fixed benchmark CSV schema.
pub const BENCH_CSV_HEADER: &str = "problem,order,index,nnz,kind,residual,mean_time_s,repeats,seed";

/// One row of the benchmark CSV, in schema order.
#[allow(clippy::too_many_arguments)]
pub fn bench_csv_row(
    problem: &str,
    order: usize,
    index: usize,
    nnz: usize,
    kind: &str,
    residual: f64,
    mean_time_s: f64,
    repeats: usize,
    seed: u64,
) -> String {
    format!("{problem},{order},{index},{nnz},{kind},{residual:e},{mean_time_s:e},{repeats},{seed}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    #[test]
    fn round_trip_is_bit_exact() {
        let d = problems::paper_fixture().tensor;
        let text = tensor_to_string(&d);
        let back = tensor_from_str(&text).unwrap();
        assert_eq!(d.shape(), back.shape());
        assert_eq!(d.entries(), back.entries());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fixture.tns");
        let d = problems::paper_fixture().tensor;
        write_tensor_file(&path, &d).unwrap();
        let back = parse_tensor_file(&path).unwrap();
        assert_eq!(d.entries(), back.entries());
    }

    #[test]
    fn entries_length_mismatch_rejected() {
        let text = r#"{"row_modes":[2],"col_modes":[2],"entries":[[1.0,0.0]]}"#;
        assert!(matches!(tensor_from_str(text), Err(GinvError::Parse(_))));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(
            tensor_from_str("not json"),
            Err(GinvError::Parse(_))
        ));
    }

    #[test]
    fn non_finite_entry_rejected() {
        let text = r#"{"row_modes":[1],"col_modes":[1],"entries":[[null,0.0]]}"#;
        assert!(matches!(tensor_from_str(text), Err(GinvError::Parse(_))));
        let text = r#"{"row_modes":[1],"col_modes":[1],"entries":[[1e999,0.0]]}"#;
        assert!(matches!(tensor_from_str(text), Err(GinvError::Parse(_))));
    }

    #[test]
    fn csv_schema_is_stable() {
        let row = bench_csv_row("fixture", 4, 3, 30, "mp", 1e-12, 0.5, 30, 42);
        assert_eq!(row.split(',').count(), BENCH_CSV_HEADER.split(',').count());
        assert!(row.starts_with("fixture,4,3,30,mp,"));
    }
}

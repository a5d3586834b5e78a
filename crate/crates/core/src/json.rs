//! JSON encoding of matrices: row-major nested arrays of `[re, im]` pairs.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numkernel::{DenseMatrix, RealMatrix};

pub fn matrix_to_json(m: &DenseMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| {
                Value::Array(
                    (0..m.ncols())
                        .map(|c| json!([m[(r, c)].re, m[(r, c)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn real_matrix_to_json(m: &RealMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| json!(m[(r, c)])).collect()))
            .collect(),
    )
}

/// Parses a square or rectangular matrix. Entries may be `[re, im]` pairs or
/// bare real numbers.
pub fn matrix_from_json(v: &Value) -> Result<DenseMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Input("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Input("matrix has no rows".into()));
    }
    let mut entries = Vec::new();
    let mut ncols = None;
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Input(format!("row {r} is not an array")))?;
        match ncols {
            None => ncols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::Input(format!(
                    "row {r} has {} entries, expected {c}",
                    row.len()
                )))
            }
            _ => {}
        }
        for (c, e) in row.iter().enumerate() {
            entries.push(entry(e).ok_or_else(|| {
                Error::Input(format!("entry ({r}, {c}) is not a number or [re, im] pair"))
            })?);
        }
    }
    let ncols = ncols.unwrap_or(0);
    if ncols == 0 {
        return Err(Error::Input("matrix has no columns".into()));
    }
    Ok(DenseMatrix::from_row_slice(rows.len(), ncols, &entries))
}

fn entry(e: &Value) -> Option<Complex64> {
    match e {
        Value::Number(x) => Some(Complex64::new(x.as_f64()?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
        }
        _ => None,
    }
}

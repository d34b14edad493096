//! GridFunction files: a one-line JSON header `{"lo": [...], "hi": [...], "shape": [...],
//! "s": optional}` followed by the node values in row-major order, comma- or
//! newline-separated.

use serde::{Deserialize, Serialize};

use super::grid_fn::GridFunction;
use crate::error::{Error, Result};
use crate::numerics::{Bounds, Grid};

/// Refuse files that would allocate more nodes than this.
pub const MAX_NODES: usize = 1 << 26;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    lo: Vec<f64>,
    hi: Vec<f64>,
    shape: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
}

/// A parsed file: the function plus the `s` recorded in its header, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunctionFile {
    pub function: GridFunction,
    pub s: Option<f64>,
}

pub fn parse_grid_function(text: &str, source_name: &str) -> Result<GridFunctionFile> {
    let mut lines = text.lines().enumerate();
    let header_line = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(source_name, 1, "missing header"))?;
    let lineno = header_line.0 + 1;
    let header: Header = serde_json::from_str(header_line.1)
        .map_err(|e| Error::parse(source_name, lineno, format!("bad header: {e}")))?;
    let bounds = Bounds::new(header.lo, header.hi).map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
    let mut total: usize = 1;
    for &k in &header.shape {
        total = total
            .checked_mul(k)
            .filter(|&t| t <= MAX_NODES)
            .ok_or_else(|| Error::parse(source_name, lineno, format!("shape {:?} is too large", header.shape)))?;
    }
    let grid = Grid::new(bounds, header.shape).map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
    if let Some(s) = header.s {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::parse(source_name, lineno, format!("s must be positive, got {s}")));
        }
    }
    let mut values = Vec::with_capacity(total);
    let mut last_line = lineno;
    for (i, line) in lines {
        last_line = i + 1;
        for field in line.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| Error::parse(source_name, i + 1, format!("not a number: {field:?}")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::parse(source_name, i + 1, format!("value {v} is not finite and nonnegative")));
            }
            if values.len() == total {
                return Err(Error::parse(source_name, i + 1, format!("more than {total} values")));
            }
            values.push(v);
        }
    }
    if values.len() != total {
        return Err(Error::parse(
            source_name,
            last_line,
            format!("expected {total} values, found {}", values.len()),
        ));
    }
    let function = GridFunction::new(grid, values).map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
    Ok(GridFunctionFile { function, s: header.s })
}

/// Writes the header and one line per run of the last axis.
pub fn write_grid_function(f: &GridFunction, s: Option<f64>) -> String {
    let g = f.grid();
    let header = Header {
        lo: g.bounds().lo().to_vec(),
        hi: g.bounds().hi().to_vec(),
        shape: g.shape().to_vec(),
        s,
    };
    let mut out = serde_json::to_string(&header).expect("finite header serializes");
    out.push('\n');
    let row = *g.shape().last().expect("grid has an axis");
    for chunk in f.values().chunks(row) {
        let cells: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

//! Point clouds as CSV (one point per row) or JSON (`{"dim": n, "points": [[...], ...]}`).

use serde::{Deserialize, Serialize};

use super::point_set::DiscreteSet;
use crate::error::{Error, Result};

/// Parses one point per non-empty row. Lines starting with `#` are comments.
pub fn parse_points_csv(text: &str, source_name: &str) -> Result<DiscreteSet> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(source_name, i + 1, format!("not a finite number: {field:?}")))
            })
            .collect::<Result<_>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("expected {d} coordinates, found {}", row.len()),
                ))
            }
            _ => {}
        }
        coords.extend(row);
    }
    let dim = dim.ok_or_else(|| Error::parse(source_name, 1, "no points"))?;
    DiscreteSet::new(dim, coords).map_err(|e| Error::parse(source_name, 1, e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct PointsJson {
    dim: usize,
    points: Vec<Vec<f64>>,
}

pub fn parse_points_json(text: &str, source_name: &str) -> Result<DiscreteSet> {
    let doc: PointsJson =
        serde_json::from_str(text).map_err(|e| Error::parse(source_name, e.line(), e.to_string()))?;
    if let Some(i) = doc.points.iter().position(|p| p.len() != doc.dim) {
        return Err(Error::parse(
            source_name,
            1,
            format!("point {i} has {} coordinates but dim is {}", doc.points[i].len(), doc.dim),
        ));
    }
    if doc.dim == 0 {
        return Err(Error::parse(source_name, 1, "dim must be >= 1"));
    }
    DiscreteSet::new(doc.dim, doc.points.concat()).map_err(|e| Error::parse(source_name, 1, e.to_string()))
}

pub fn points_to_csv(set: &DiscreteSet) -> String {
    let mut out = String::new();
    for p in set.iter() {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn points_to_json(set: &DiscreteSet) -> String {
    let doc = PointsJson {
        dim: set.dim(),
        points: set.iter().map(|p| p.to_vec()).collect(),
    };
    serde_json::to_string(&doc).expect("finite floats always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let s = DiscreteSet::from_points(&[[0.0, 1.5], [-2.0, 1e-300]]).unwrap();
        assert_eq!(parse_points_csv(&points_to_csv(&s), "x").unwrap(), s);
    }

    #[test]
    fn json_round_trip() {
        let s = DiscreteSet::from_points(&[[0.1, 0.2, 0.3]]).unwrap();
        assert_eq!(parse_points_json(&points_to_json(&s), "x").unwrap(), s);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = parse_points_csv("# header\n1,2\n3\n", "cloud.csv").unwrap_err();
        assert_eq!(err.to_string(), "cloud.csv:3: expected 2 coordinates, found 1");
        let err = parse_points_csv("1,2\n3,nan\n", "cloud.csv").unwrap_err();
        assert!(err.to_string().starts_with("cloud.csv:2:"), "{err}");
    }
}

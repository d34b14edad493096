//! Input specifications: built-in shapes or `file:PATH`.
//!
//! Functions (sampled with `nodes` per axis):
//! `indicator:LO:HI`, `tent:CENTER:HALF_WIDTH`, `parabola:CENTER:HALF_WIDTH`,
//! `gaussian:SIGMA:LO:HI`, `file:PATH`. `LO` and `HI` may be comma lists for boxes.
//!
//! Sets: `segment:A:B`, `box:LO:HI`, `file:PATH` (`.json` or CSV).
//!
//! Coefficient sets: `classical`, `minkowski:LAMBDA`, `lp:P:RESOLUTION`,
//! `lp_hull:P:RESOLUTION:SPACING`, `explicit:A,B;A,B;...`.

use lplab::functions::io::parse_grid_function;
use lplab::functions::GridFunction;
use lplab::numerics::{Bounds, Grid};
use lplab::sets::io::{parse_points_csv, parse_points_json};
use lplab::sets::{CoefficientSet, DiscreteSet};

use crate::error::{config, read_file, Result};

fn numbers(text: &str, spec: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| config(format!("{spec}: {t:?} is not a number")))
        })
        .collect()
}

fn args(spec: &str, count: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = spec.split(':').skip(1).collect();
    if parts.len() != count {
        return Err(config(format!("{spec:?} takes {count} arguments after the kind")));
    }
    Ok(parts)
}

fn scalar(text: &str, spec: &str) -> Result<f64> {
    match numbers(text, spec)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(config(format!("{spec}: expected one number, got {text:?}"))),
    }
}

fn on_line(lo: f64, hi: f64, nodes: usize, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
    let grid = Grid::uniform(Bounds::interval(lo, hi)?, nodes)?;
    Ok(GridFunction::from_fn(grid, |x| f(x[0]))?)
}

pub fn function(spec: &str, nodes: usize) -> Result<GridFunction> {
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(parse_grid_function(&read_file(path)?, path)?.function);
    }
    let kind = spec.split(':').next().unwrap_or("");
    match kind {
        "indicator" => {
            let a = args(spec, 2)?;
            let bounds = Bounds::new(numbers(a[0], spec)?, numbers(a[1], spec)?)?;
            Ok(GridFunction::indicator(bounds, nodes, 1.0)?)
        }
        "tent" | "parabola" => {
            let a = args(spec, 2)?;
            let (c, w) = (scalar(a[0], spec)?, scalar(a[1], spec)?);
            if !(w > 0.0) {
                return Err(config(format!("{spec}: half-width must be positive")));
            }
            let tent = kind == "tent";
            on_line(c - w, c + w, nodes, |x| {
                let t = (x - c) / w;
                if tent {
                    (1.0 - t.abs()).max(0.0)
                } else {
                    (1.0 - t * t).max(0.0)
                }
            })
        }
        "gaussian" => {
            let a = args(spec, 3)?;
            let sigma = scalar(a[0], spec)?;
            let bounds = Bounds::new(numbers(a[1], spec)?, numbers(a[2], spec)?)?;
            let grid = Grid::uniform(bounds, nodes)?;
            Ok(GridFunction::from_fn(grid, |x| {
                (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * sigma * sigma)).exp()
            })?)
        }
        _ => Err(config(format!("unknown function spec {spec:?}"))),
    }
}

pub fn set(spec: &str) -> Result<DiscreteSet> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = read_file(path)?;
        return Ok(if path.ends_with(".json") {
            parse_points_json(&text, path)?
        } else {
            parse_points_csv(&text, path)?
        });
    }
    match spec.split(':').next().unwrap_or("") {
        "segment" => {
            let a = args(spec, 2)?;
            Ok(DiscreteSet::interval(scalar(a[0], spec)?, scalar(a[1], spec)?, 2)?)
        }
        "box" => {
            let a = args(spec, 2)?;
            Ok(DiscreteSet::box_corners(&numbers(a[0], spec)?, &numbers(a[1], spec)?)?)
        }
        _ => Err(config(format!("unknown set spec {spec:?}"))),
    }
}

pub fn coefficients(spec: &str) -> Result<CoefficientSet> {
    let kind = spec.split(':').next().unwrap_or("");
    let count = |a: &str| -> Result<usize> {
        a.trim()
            .parse()
            .map_err(|_| config(format!("{spec}: {a:?} is not a count")))
    };
    match kind {
        "classical" => Ok(CoefficientSet::classical()),
        "minkowski" => Ok(CoefficientSet::minkowski(scalar(args(spec, 1)?[0], spec)?)?),
        "lp" => {
            let a = args(spec, 2)?;
            Ok(CoefficientSet::lp_curve(scalar(a[0], spec)?, count(a[1])?)?)
        }
        "lp_hull" => {
            let a = args(spec, 3)?;
            let curve = CoefficientSet::lp_curve(scalar(a[0], spec)?, count(a[1])?)?;
            Ok(curve.filled_hull(scalar(a[2], spec)?)?)
        }
        "explicit" => {
            let body = spec.strip_prefix("explicit:").unwrap_or("");
            let pairs = body
                .split(';')
                .map(|pair| match numbers(pair, spec)?.as_slice() {
                    [a, b] => Ok((*a, *b)),
                    _ => Err(config(format!("{spec}: {pair:?} is not a pair a,b"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CoefficientSet::explicit(pairs)?)
        }
        _ => Err(config(format!("unknown coefficient spec {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_functions() {
        let f = function("indicator:0:1", 11).unwrap();
        assert!((f.integral() - 1.0).abs() < 1e-15);
        let t = function("tent:0:1", 21).unwrap();
        assert!((t.integral() - 1.0).abs() < 1e-12);
        let b = function("indicator:0,0:1,2", 5).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(function("tent:0", 5).is_err());
        assert!(function("blob:0:1", 5).is_err());
    }

    #[test]
    fn sets_and_coefficients() {
        assert_eq!(set("segment:0:2").unwrap().len(), 2);
        assert_eq!(set("box:0,0:1,1").unwrap().len(), 4);
        assert_eq!(coefficients("explicit:1,0;0,1").unwrap().len(), 2);
        assert_eq!(coefficients("lp:2:17").unwrap().len(), 17);
        assert!(coefficients("explicit:1,0;0").is_err());
        assert!(coefficients("lp_hull:2:17:0.05").unwrap().len() > 17);
    }

    #[test]
    fn missing_file_names_the_path() {
        let e = function("file:/nonexistent/f.grid", 3).unwrap_err();
        assert!(e.to_string().starts_with("/nonexistent/f.grid"));
    }
}

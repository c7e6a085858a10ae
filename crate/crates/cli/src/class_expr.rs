//! Class expressions on the command line.
//!
//! A class is either a comma-separated coordinate list (`3,-1,0`) or one of
//! the named classes `fiber`, `w2`, `c1` of the model, optionally scaled as
//! `k*name` (`-5*fiber`). `c1` is the first Chern class of the complex
//! structure carried by the model.

use gcchern::{CohClass, Error, FourManifoldModel};

pub fn parse(m: &FourManifoldModel, expr: &str) -> Result<CohClass, Error> {
    let expr = expr.trim();
    if expr.is_empty() {
        return Err(bad(expr, "empty class"));
    }
    let (scale, name) = match expr.split_once('*') {
        Some((k, name)) => (
            k.trim()
                .parse::<i64>()
                .map_err(|_| bad(expr, "scale must be an integer"))?,
            name.trim(),
        ),
        None => (1, expr),
    };
    let named = match name {
        "fiber" => Some(
            m.fiber
                .clone()
                .ok_or_else(|| Error::MissingFiber(m.name.clone()))?,
        ),
        "w2" => Some(m.w2.clone()),
        "c1" => Some(
            m.complex_c1
                .clone()
                .ok_or_else(|| bad(expr, "the model has no complex structure"))?,
        ),
        _ => None,
    };
    if let Some(class) = named {
        return class.checked_scale(scale);
    }
    if expr.contains('*') {
        return Err(bad(expr, "unknown class name"));
    }
    let coords = expr
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad(expr, "expected integers separated by commas"))?;
    if coords.len() != m.rank() {
        return Err(Error::DimensionMismatch {
            expected: m.rank(),
            found: coords.len(),
        });
    }
    Ok(CohClass::new(coords))
}

fn bad(expr: &str, why: &str) -> Error {
    Error::InvalidParameter(format!("class `{expr}`: {why}"))
}

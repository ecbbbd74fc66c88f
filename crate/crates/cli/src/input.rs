//! JSON input: `{"dim": d, "vertices": [["1/3","1/5"], …]}` for polytopes,
//! `{"vertex": […], "rays": [[…], …]}` for cones, with an optional `"Q"`.

use std::path::Path;

use emlattice::exactlin::{parse_rational, RationalSpace, ScalarProduct};
use emlattice::polycone::{build_polytope, AffineCone, Polytope};
use emlattice::{QMatrix, QVector, Rational};
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Reads `arg` as inline JSON if it starts with `{`, as a file path otherwise.
pub fn load_json(arg: &str) -> CliResult<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

fn rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| parse_err(format!("not a rational: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(parse_rational(&n.to_string()).unwrap()),
        _ => Err(parse_err(format!("expected an exact rational (string or integer), got {v}"))),
    }
}

fn vector(v: &Value, dim: Option<usize>) -> CliResult<QVector> {
    let xs = v.as_array().ok_or_else(|| parse_err(format!("expected an array, got {v}")))?;
    let q = QVector(xs.iter().map(rational).collect::<CliResult<_>>()?);
    match dim {
        Some(d) if q.dim() != d => Err(parse_err(format!("expected {d} coordinates, got {}", q.dim()))),
        _ => Ok(q),
    }
}

fn vectors(v: &Value, dim: Option<usize>, what: &str) -> CliResult<Vec<QVector>> {
    let xs = v.as_array().ok_or_else(|| parse_err(format!("\"{what}\" must be an array")))?;
    xs.iter().map(|x| vector(x, dim)).collect()
}

/// A symmetric positive definite matrix, bare or as `{"Q": …}`.
pub fn scalar_product(v: &Value) -> CliResult<ScalarProduct> {
    let m = v.get("Q").unwrap_or(v);
    let rows = vectors(m, None, "Q")?;
    let n = rows.len();
    if rows.iter().any(|r| r.dim() != n) {
        return Err(parse_err("Q must be a square matrix"));
    }
    ScalarProduct::new(QMatrix::from_rows(rows.into_iter().map(|r| r.0).collect())).map_err(CliError::input)
}

fn space(v: &Value, dim: usize, q: Option<&ScalarProduct>) -> CliResult<RationalSpace> {
    let q = match (q, v.get("Q")) {
        (Some(q), _) => q.clone(),
        (None, Some(m)) => scalar_product(m)?,
        (None, None) => ScalarProduct::standard(dim),
    };
    if q.dim() != dim {
        return Err(parse_err(format!("Q has size {}, expected {dim}", q.dim())));
    }
    Ok(RationalSpace::with_scalar_product(q))
}

fn check_dim(d: usize) -> CliResult<usize> {
    if d == 0 || d > emlattice::germ::MAX_VARS {
        return Err(parse_err(format!("dimension must be between 1 and {}", emlattice::germ::MAX_VARS)));
    }
    Ok(d)
}

/// `q` overrides an inline `"Q"`.
pub fn polytope(v: &Value, q: Option<&ScalarProduct>) -> CliResult<Polytope> {
    let verts = v.get("vertices").ok_or_else(|| parse_err("polytope input needs \"vertices\""))?;
    let dim = match v.get("dim") {
        Some(d) => Some(d.as_u64().ok_or_else(|| parse_err("\"dim\" must be a positive integer"))? as usize),
        None => None,
    };
    let pts = vectors(verts, dim, "vertices")?;
    let dim = check_dim(dim.or_else(|| pts.first().map(QVector::dim)).ok_or_else(|| parse_err("no vertices"))?)?;
    build_polytope(space(v, dim, q)?, &pts).map_err(CliError::input)
}

pub fn cone(v: &Value, q: Option<&ScalarProduct>) -> CliResult<AffineCone> {
    let vertex = v.get("vertex").ok_or_else(|| parse_err("cone input needs \"vertex\""))?;
    let vertex = vector(vertex, None)?;
    let dim = check_dim(vertex.dim())?;
    let rays = match v.get("rays") {
        Some(r) => vectors(r, Some(dim), "rays")?,
        None => vec![],
    };
    AffineCone::new(space(v, dim, q)?, vertex, &rays).map_err(CliError::input)
}

pub fn is_cone(v: &Value) -> bool {
    v.get("vertex").is_some()
}

//! The polytope JSON schema and scalar encoding shared by the CLI and the
//! browser demo.
//!
//! Schema (bit-exact): `{"dim": d, "vertices": [["num/den", ...], ...]}`;
//! integers may omit the denominator. Rationals are always strings, never
//! floats.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::{IntMat, IntVec};
use crate::polytope::Polytope;
use crate::rat::{fmt_rat, parse_rat, Rat, RatVec};

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::rat::rat_int(i))
            } else {
                Err(Error::Parse(format!("non-integer number {n} (rationals are strings)")))
            }
        }
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn ratvec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn ratvec_from_json(v: &Value) -> Result<RatVec> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected array".into()))?;
    arr.iter().map(rat_from_json).collect()
}

pub fn intvec_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn intvec_from_json(v: &Value) -> Result<IntVec> {
    let r = ratvec_from_json(v)?;
    crate::rat::to_int_vec(&r).ok_or_else(|| Error::Parse("expected integer vector".into()))
}

pub fn intmat_rows_to_json(m: &IntMat) -> Value {
    Value::Array((0..m.rows()).map(|i| intvec_to_json(&m.row(i))).collect())
}

pub fn intmat_rows_from_json(v: &Value) -> Result<IntMat> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected matrix".into()))?;
    let rows: Vec<IntVec> = arr.iter().map(intvec_from_json).collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(IntMat::zero(0, 0));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged matrix".into()));
    }
    let mut m = IntMat::zero(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
    }
    Ok(m)
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": Value::Array(p.vertices().iter().map(|v| ratvec_to_json(v)).collect()),
    })
}

pub fn polytope_to_string(p: &Polytope) -> String {
    polytope_to_json(p).to_string()
}

/// Reads the vertex list without building a hull; accepts lower-dimensional
/// point sets (used as copy targets).
pub fn points_from_json(v: &Value) -> Result<(usize, Vec<RatVec>)> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected object".into()))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid \"dim\"".into()))? as usize;
    let verts = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"vertices\"".into()))?;
    let points: Vec<RatVec> = verts.iter().map(ratvec_from_json).collect::<Result<_>>()?;
    if points.is_empty() {
        return Err(Error::Parse("empty vertex list".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Parse("vertex arity does not match \"dim\"".into()));
    }
    Ok((dim, points))
}

/// Full polytope parse: points plus hull reconstruction (validates
/// full-dimensionality and produces canonical facets).
pub fn polytope_from_json(v: &Value) -> Result<Polytope> {
    let (_, points) = points_from_json(v)?;
    Polytope::from_points(&points)
}

pub fn polytope_from_str(s: &str) -> Result<Polytope> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    polytope_from_json(&v)
}

/// Deterministic object construction: `serde_json`'s map is ordered by key,
/// so identical data serializes to identical bytes.
pub fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{standard_simplex, unit_cube};
    use crate::rat::{rat, rvec};

    #[test]
    fn polytope_roundtrip() {
        for p in [standard_simplex(2, 1), unit_cube(3, 2), standard_simplex(3, 4)] {
            let s = polytope_to_string(&p);
            let q = polytope_from_str(&s).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn rational_vertices_roundtrip() {
        let p = standard_simplex(2, 1).translate(&[rat(1, 3), rat(-2, 7)]);
        let q = polytope_from_str(&polytope_to_string(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn integers_may_be_plain_numbers() {
        let s = r#"{"dim": 2, "vertices": [[0, 0], ["1", 0], [0, "1/1"]]}"#;
        let p = polytope_from_str(s).unwrap();
        assert_eq!(p, standard_simplex(2, 1));
    }

    #[test]
    fn family_instances_roundtrip() {
        use crate::families::Family;
        let fams = [
            Family::Cube { d: 2, k: 3 },
            Family::StandardSimplex { d: 3, scale: 2 },
            Family::CrossPolytope { d: 2 },
            Family::WideNonIdp { d: 3, k: 4 },
            Family::EmptySimplexVol2,
            Family::Hirzebruch { x: 2, y: 7, a: 2 },
            Family::WideTriangle { k: 3 },
            Family::Gw1Diamond,
        ];
        for f in fams {
            let p = f.build().unwrap();
            let q = polytope_from_str(&polytope_to_string(&p)).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(polytope_from_str("{").is_err());
        assert!(polytope_from_str(r#"{"dim": 2}"#).is_err());
        assert!(polytope_from_str(r#"{"dim": 2, "vertices": [[0]]}"#).is_err());
        assert!(polytope_from_str(r#"{"dim": 1, "vertices": [["1/0"]]}"#).is_err());
        // floats are rejected
        assert!(rat_from_json(&serde_json::json!(0.5)).is_err());
        let _ = rvec(&[0]);
    }
}

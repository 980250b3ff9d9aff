//! JSON encodings.
//!
//! * field: `{"type":"Q"}` or `{"type":"Fp","p":5}`
//! * scalar: a JSON integer, a decimal string, or `"a/b"`
//! * subspace: `{"ambient": d, "basis": [[...], ...]}`
//! * Gram space: `{"field": {...}, "gram": [[...], ...]}`
//! * lift pair: `{"plus": <subspace>, "minus": <subspace>}`

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::lagrange::LiftPair;
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::ortho::{GramSpace, OrthoError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

fn schema(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn field_to_json(ctx: FieldCtx) -> Value {
    match ctx {
        FieldCtx::Rationals => json!({"type": "Q"}),
        FieldCtx::Prime(p) => json!({"type": "Fp", "p": p.get()}),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldCtx, JsonError> {
    match v.get("type").and_then(Value::as_str) {
        Some("Q") => Ok(FieldCtx::Rationals),
        Some("Fp") => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema("Fp field needs an integer \"p\""))?;
            Ok(FieldCtx::prime(p)?)
        }
        _ => Err(schema(
            "field must be {\"type\":\"Q\"} or {\"type\":\"Fp\",\"p\":…}",
        )),
    }
}

/// Integers (and all residues) become JSON numbers when they fit in an i64;
/// everything else is a string.
pub fn scalar_to_json(x: &Scalar) -> Value {
    if let Some(r) = x.as_residue() {
        return json!(r);
    }
    let r = x.as_rational().expect("rational");
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return json!(i);
        }
    }
    Value::String(x.to_string())
}

pub fn scalar_from_json(ctx: FieldCtx, v: &Value) -> Result<Scalar, JsonError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(ctx.from_i64(i))
            } else if let Some(u) = n.as_u64() {
                Ok(ctx.from_bigint(&BigInt::from(u)))
            } else {
                Err(schema(format!(
                    "non-integer number {n}; use an \"a/b\" string"
                )))
            }
        }
        Value::String(s) => Ok(ctx.parse(s)?),
        other => Err(schema(format!("expected a scalar, got {other}"))),
    }
}

pub fn rows_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

pub fn rows_from_json(ctx: FieldCtx, v: &Value) -> Result<Vec<Vec<Scalar>>, JsonError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema("expected an array of rows"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| schema("each row must be an array"))?
                .iter()
                .map(|x| scalar_from_json(ctx, x))
                .collect()
        })
        .collect()
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    json!({"ambient": s.ambient_dim(), "basis": rows_to_json(s.basis())})
}

/// Accepts the `{"ambient", "basis"}` object, or a bare non-empty list of
/// spanning rows.
pub fn subspace_from_json(ctx: FieldCtx, v: &Value) -> Result<Subspace, JsonError> {
    let (ambient, rows) = match v {
        Value::Object(_) => {
            let ambient = v
                .get("ambient")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema("subspace needs an integer \"ambient\""))?
                as usize;
            let basis = v
                .get("basis")
                .ok_or_else(|| schema("subspace needs \"basis\""))?;
            (ambient, rows_from_json(ctx, basis)?)
        }
        Value::Array(_) => {
            let rows = rows_from_json(ctx, v)?;
            let ambient = rows
                .first()
                .map(Vec::len)
                .ok_or_else(|| schema("a bare row list must be non-empty"))?;
            (ambient, rows)
        }
        _ => return Err(schema("subspace must be an object or a list of rows")),
    };
    if rows.iter().any(|r| r.len() != ambient) {
        return Err(schema(format!("basis rows must have length {ambient}")));
    }
    Ok(Subspace::from_vectors(ctx, ambient, &rows)?)
}

pub fn gram_to_json(v: &GramSpace) -> Value {
    json!({"field": field_to_json(v.ctx()), "gram": rows_to_json(v.gram())})
}

pub fn gram_from_json(v: &Value) -> Result<GramSpace, JsonError> {
    let ctx = field_from_json(v.get("field").ok_or_else(|| schema("missing \"field\""))?)?;
    gram_from_json_in(
        ctx,
        v.get("gram").ok_or_else(|| schema("missing \"gram\""))?,
    )
}

/// A bare Gram matrix (list of rows) over a known field.
pub fn gram_from_json_in(ctx: FieldCtx, rows: &Value) -> Result<GramSpace, JsonError> {
    let rows = rows_from_json(ctx, rows)?;
    let width = rows.len();
    Ok(GramSpace::new(Matrix::from_rows_with_width(
        ctx,
        rows,
        Some(width),
    )?)?)
}

pub fn lift_pair_to_json(pair: &LiftPair) -> Value {
    json!({"plus": subspace_to_json(&pair.plus_lift), "minus": subspace_to_json(&pair.minus_lift)})
}

pub fn lift_pair_from_json(ctx: FieldCtx, v: &Value) -> Result<LiftPair, JsonError> {
    Ok(LiftPair {
        plus_lift: subspace_from_json(
            ctx,
            v.get("plus").ok_or_else(|| schema("missing \"plus\""))?,
        )?,
        minus_lift: subspace_from_json(
            ctx,
            v.get("minus").ok_or_else(|| schema("missing \"minus\""))?,
        )?,
    })
}

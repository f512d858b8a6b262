//! JSON form of exact numbers:
//! `{"field":[2,3],"re":[["a00","a01","a10","a11"]],"im":[[...]]}`
//! with coordinates as `"p/q"` strings over the basis in subset order.
//! A flat coordinate list and a shorthand string are accepted on input.

use rug::Rational;
use serde_json::{json, Value};

use super::exact::ExactComplex;
use super::field::RealField;
use super::parse::parse_exact;
use super::real::RealAlgebraic;
use crate::error::{Error, Result};

fn coords_json(x: &RealAlgebraic) -> Value {
    Value::Array(vec![Value::Array(x.coords().iter().map(|c| Value::String(c.to_string())).collect())])
}

pub fn exact_to_json(z: &ExactComplex) -> Value {
    json!({
        "field": z.field().generators(),
        "re": coords_json(z.re()),
        "im": coords_json(z.im()),
    })
}

fn parse_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|e| Error::Parse(format!("coordinate {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| Error::Parse(format!("coordinate {n} must be an integer or \"p/q\" string"))),
        other => Err(Error::Parse(format!("coordinate {other}"))),
    }
}

fn parse_coords(v: Option<&Value>, field: &RealField) -> Result<RealAlgebraic> {
    let Some(v) = v else {
        return Ok(RealAlgebraic::zero(field));
    };
    let list = match v {
        Value::Array(outer) if outer.len() == 1 && outer[0].is_array() => outer[0].as_array().unwrap(),
        Value::Array(flat) => flat,
        other => return Err(Error::Parse(format!("coordinates must be a list, got {other}"))),
    };
    let coords = list.iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
    RealAlgebraic::new(field.clone(), coords).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads either a shorthand string or the structured object form.
pub fn exact_from_json(v: &Value) -> Result<ExactComplex> {
    match v {
        Value::String(s) => parse_exact(s),
        Value::Number(_) => parse_exact(&v.to_string()),
        Value::Object(map) => {
            let gens: Vec<u64> = match map.get("field") {
                None => Vec::new(),
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|g| g.as_u64().ok_or_else(|| Error::Parse(format!("bad radicand {g}"))))
                    .collect::<Result<_>>()?,
                Some(other) => return Err(Error::Parse(format!("field must be a list, got {other}"))),
            };
            let field = RealField::new(&gens)?;
            let re = parse_coords(map.get("re"), &field)?;
            let im = parse_coords(map.get("im"), &field)?;
            Ok(ExactComplex::new(re, im))
        }
        other => Err(Error::Parse(format!("not an exact number: {other}"))),
    }
}

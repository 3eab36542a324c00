//! Instance JSON documents and output number formatting.
//!
//! Schema:
//!
//! ```json
//! {"variant": "pony" | "half_broadcast" | "broadcast",
//!  "robots": [{"id": 0, "p": 0.5, "v": 1.0}]}
//! ```
//!
//! Field order is irrelevant and unknown fields are rejected.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Robot, ValidatedInstance, Variant};

/// Significant digits used for every number we print.
pub const SIG_DIGITS: usize = 12;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    variant: String,
    robots: Vec<Robot>,
}

pub fn parse(bytes: &[u8]) -> Result<ValidatedInstance> {
    let raw: RawDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let variant: Variant = raw.variant.parse()?;
    ProblemInstance::new(variant, raw.robots).validate()
}

pub fn parse_str(s: &str) -> Result<ValidatedInstance> {
    parse(s.as_bytes())
}

pub fn serialize(instance: &ProblemInstance) -> Vec<u8> {
    serde_json::to_vec_pretty(instance).expect("instance serialization cannot fail")
}

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Formats `x` with [`SIG_DIGITS`] significant digits, shortest form.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", round_sig(x, SIG_DIGITS))
}

/// Rounds every floating-point number inside a JSON tree in place.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x, SIG_DIGITS))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes `v` to a JSON string with numbers rounded for stable output.
pub fn to_rounded_json<T: serde::Serialize>(v: &T) -> String {
    let mut value = serde_json::to_value(v).expect("serializable output");
    round_json(&mut value);
    serde_json::to_string_pretty(&value).expect("json value prints")
}

//! JSON document form of a torus bundle, one flat shape for every genus:
//!
//! ```json
//! {
//!   "genus": 2,
//!   "monodromy": [[[[1,0],[0,1]], [[0,1],[-1,1]]], ...],
//!   "euler": [0, 0]
//! }
//! ```
//!
//! Each monodromy entry is a pair [A, B] of matrices written row-major as
//! [[a,b],[c,d]]. Genus 0 has an empty monodromy list. All numbers must
//! be written as exact integers; fractional or exponent notation is
//! rejected rather than rounded, and integers of any size are preserved.

use num_bigint::BigInt;
use serde_json::Value;

use crate::bundle::TorusBundle;
use crate::error::Error;
use crate::rep::SlRep;
use crate::sl2z::Sl2Matrix;

fn parse_error(what: impl Into<String>) -> Error {
    Error::Parse(what.into())
}

/// Strict integer read: the literal must be an optional minus sign
/// followed by digits.
fn int_from_value(v: &Value, what: &str) -> Result<BigInt, Error> {
    let Value::Number(n) = v else {
        return Err(parse_error(format!("{what}: expected an integer")));
    };
    let text = n.to_string();
    let digits = text.strip_prefix('-').unwrap_or(&text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(format!(
            "{what}: {text} is not an exact integer"
        )));
    }
    text.parse()
        .map_err(|e| parse_error(format!("{what}: {e}")))
}

fn int_to_value(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer text is valid JSON")
}

fn pair_from_value<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], Error> {
    match v {
        Value::Array(items) if items.len() == 2 => Ok(items),
        _ => Err(parse_error(format!("{what}: expected a 2-element array"))),
    }
}

/// Reads a matrix from its row-major value [[a,b],[c,d]].
pub fn matrix_from_value(v: &Value) -> Result<Sl2Matrix, Error> {
    let rows = pair_from_value(v, "matrix")?;
    let top = pair_from_value(&rows[0], "matrix row")?;
    let bottom = pair_from_value(&rows[1], "matrix row")?;
    Sl2Matrix::new(
        int_from_value(&top[0], "matrix entry")?,
        int_from_value(&top[1], "matrix entry")?,
        int_from_value(&bottom[0], "matrix entry")?,
        int_from_value(&bottom[1], "matrix entry")?,
    )
}

pub fn matrix_to_value(m: &Sl2Matrix) -> Value {
    let [a, b, c, d] = m.entries();
    Value::Array(vec![
        Value::Array(vec![int_to_value(a), int_to_value(b)]),
        Value::Array(vec![int_to_value(c), int_to_value(d)]),
    ])
}

/// Parses a matrix from command-line text like "[[0,1],[-1,1]]".
pub fn parse_matrix(text: &str) -> Result<Sl2Matrix, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    matrix_from_value(&v)
}

/// Parses a full bundle document. The `euler` field may be omitted when
/// only the monodromy matters (it defaults to (0,0)); emitted documents
/// always carry it.
pub fn parse_bundle(text: &str) -> Result<TorusBundle, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    let Value::Object(fields) = &v else {
        return Err(parse_error("bundle document must be a JSON object"));
    };
    for key in fields.keys() {
        if !matches!(key.as_str(), "genus" | "monodromy" | "euler") {
            return Err(parse_error(format!("unknown field {key:?}")));
        }
    }
    let genus_value = fields
        .get("genus")
        .ok_or_else(|| parse_error("missing field \"genus\""))?;
    let genus = int_from_value(genus_value, "genus")?;
    let monodromy_value = fields
        .get("monodromy")
        .ok_or_else(|| parse_error("missing field \"monodromy\""))?;
    let Value::Array(entries) = monodromy_value else {
        return Err(parse_error("monodromy: expected an array of [A,B] pairs"));
    };
    if BigInt::from(entries.len()) != genus {
        return Err(parse_error(format!(
            "genus {genus} does not match {} monodromy pairs",
            entries.len()
        )));
    }
    let mut pairs = Vec::with_capacity(entries.len());
    for entry in entries {
        let pair = pair_from_value(entry, "monodromy entry")?;
        pairs.push((matrix_from_value(&pair[0])?, matrix_from_value(&pair[1])?));
    }
    let (m, n) = match fields.get("euler") {
        None => (BigInt::from(0), BigInt::from(0)),
        Some(e) => {
            let coords = pair_from_value(e, "euler")?;
            (
                int_from_value(&coords[0], "euler")?,
                int_from_value(&coords[1], "euler")?,
            )
        }
    };
    TorusBundle::new(SlRep::new(pairs), m, n)
}

pub fn bundle_to_value(b: &TorusBundle) -> Value {
    let monodromy: Vec<Value> = b
        .rep()
        .pairs()
        .iter()
        .map(|(a, bm)| Value::Array(vec![matrix_to_value(a), matrix_to_value(bm)]))
        .collect();
    serde_json::json!({
        "genus": b.genus(),
        "monodromy": monodromy,
        "euler": [int_to_value(&b.euler()[0]), int_to_value(&b.euler()[1])],
    })
}

pub fn bundle_to_string(b: &TorusBundle) -> String {
    serde_json::to_string_pretty(&bundle_to_value(b)).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documents_round_trip() {
        let docs = [
            r#"{"genus": 0, "monodromy": [], "euler": [3, -5]}"#,
            r#"{"genus": 1, "monodromy": [[[[-1,0],[0,-1]], [[1,1],[0,1]]]], "euler": [0, 0]}"#,
            r#"{"genus": 2, "monodromy": [
                [[[1,0],[0,1]], [[0,1],[-1,0]]],
                [[[-1,0],[0,-1]], [[1,0],[0,1]]]
            ], "euler": [100000000000000000000000, -7]}"#,
        ];
        for doc in docs {
            let b = parse_bundle(doc).unwrap();
            let emitted = bundle_to_string(&b);
            assert_eq!(parse_bundle(&emitted).unwrap(), b);
        }
    }

    #[test]
    fn euler_defaults_to_zero() {
        let b = parse_bundle(r#"{"genus": 0, "monodromy": []}"#).unwrap();
        assert_eq!(*b.euler(), [BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn rejects_inexact_numbers() {
        assert!(matches!(
            parse_bundle(r#"{"genus": 0, "monodromy": [], "euler": [1.5, 0]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_bundle(r#"{"genus": 0, "monodromy": [], "euler": [1e3, 0]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_bundle(r#"{"genus": 0, "monodromy": [], "euler": ["7", 0]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            parse_bundle(r#"{"genus": 1, "monodromy": [], "euler": [0,0]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_bundle(r#"{"genus": 0, "monodromy": [], "euler": [0,0], "extra": 1}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_bundle(r#"{"monodromy": [], "euler": [0,0]}"#),
            Err(Error::Parse(_))
        ));
        assert!(parse_bundle("[]").is_err());
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(matches!(
            parse_matrix("[[1,0],[0,2]]"),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(matches!(parse_matrix("[[1,0],[0]]"), Err(Error::Parse(_))));
        let doc = r#"{"genus": 1,
            "monodromy": [[[[1,1],[0,1]], [[0,1],[-1,0]]]],
            "euler": [0,0]}"#;
        assert!(matches!(parse_bundle(doc), Err(Error::NotSurfaceRep(_))));
    }
}

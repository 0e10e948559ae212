//! Numeric formatting shared by the JSON summaries and CSV traces.

use serde_json::{Number, Value};

/// Rounds to 10 significant digits. Non-finite values pass through unchanged.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

/// Applies [`sig10`] to every floating-point number in `value`; integers are
/// left alone and non-finite floats become `null`.
pub fn round_floats(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Number::from_f64(sig10(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// Text form of a float for CSV cells, matching the JSON rendering.
pub fn float_cell(x: f64) -> String {
    round_floats(Value::from(x)).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_to_ten_digits() {
        assert_eq!(sig10(-0.019772961234567), -0.01977296123);
        assert_eq!(sig10(1.0 / 3.0), 0.3333333333);
        assert_eq!(sig10(0.0), 0.0);
        assert_eq!(float_cell(-1.3322676295501878e-15), "-1.33226763e-15");
        assert_eq!(float_cell(0.5), "0.5");
    }

    #[test]
    fn leaves_integers_and_strings() {
        let v = round_floats(json!({"n": 100000u64, "k": -3, "s": "x", "v": [2.0, 0.12345678901234], "z": f64::NAN}));
        assert_eq!(
            v.to_string(),
            r#"{"k":-3,"n":100000,"s":"x","v":[2.0,0.123456789],"z":null}"#
        );
    }
}

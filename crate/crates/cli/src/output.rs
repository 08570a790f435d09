use serde_json::{Number, Value};

use crate::CommandResult;

const SIGNIFICANT_DIGITS: usize = 10;

/// Single-line JSON with every float rounded to ten significant digits.
pub fn render(result: &CommandResult) -> String {
    let mut v = serde_json::to_value(result).expect("command results serialize");
    round_floats(&mut v);
    serde_json::to_string(&v).expect("values serialize")
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked is_f64");
            *n = Number::from_f64(round_significant(x)).unwrap_or_else(|| n.clone());
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub(crate) fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

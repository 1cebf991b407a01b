//! Number formatting and the JSON/CSV emitters.
//!
//! Every float is written as `{:.14e}` (15 significant digits). That string
//! survives a parse to `f64` and back unchanged, which is what makes emitted
//! documents re-emit byte for byte.

use serde_json::{Number, Value};

use crate::error::Result;

pub fn num(x: f64) -> String {
    let s = format!("{x:.14e}");
    // rounding up near f64::MAX would overflow on re-parse
    if x.is_finite() && s.parse::<f64>().is_ok_and(f64::is_infinite) {
        return format!("{x:e}");
    }
    s
}

/// JSON number for `x`; non-finite values become `null`.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(num(x).parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn json_nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_num(x)).collect())
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("Value always serializes");
    s.push('\n');
    s
}

/// Parse a document produced by [`to_json_string`] and emit it again.
pub fn reformat_json(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text)?;
    Ok(to_json_string(&reformat_value(v)))
}

fn reformat_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !is_integer(&n) => match n.as_f64() {
            Some(x) => json_num(x),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(reformat_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, reformat_value(v))).collect()),
        other => other,
    }
}

fn is_integer(n: &Number) -> bool {
    let s = n.to_string();
    !s.contains(['.', 'e', 'E'])
}

pub fn to_csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

/// Parse a CSV document, re-parse every float field and emit it again.
pub fn reformat_csv(text: &str) -> Result<String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|f| match f.parse::<f64>() {
                    Ok(x) if f.contains(['e', 'E']) || f == "inf" => num(x),
                    _ => f.to_owned(),
                })
                .collect(),
        );
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    to_csv_string(&header, &rows)
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Format, ParseError};

/// Stage-level QoR values keyed by schema field name, e.g.
/// `{"total_power": 1.23, "critical_path_start": "a"}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QorValues {
    pub numbers: BTreeMap<String, f64>,
    pub text: BTreeMap<String, String>,
}

impl QorValues {
    pub fn number(&self, key: &str) -> Option<f64> {
        self.numbers.get(key).copied()
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.text.get(key).map(String::as_str)
    }
}

pub fn parse_qor(text: &str) -> Result<QorValues, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ParseError::new(Format::Qor, e.line(), e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::new(Format::Qor, 1, "expected a JSON object"))?;
    let mut out = QorValues::default();
    for (k, v) in obj {
        match v {
            serde_json::Value::Number(n) => {
                let f = n.as_f64().filter(|f| f.is_finite()).ok_or_else(|| {
                    ParseError::new(Format::Qor, 1, format!("`{k}` is not a finite number"))
                })?;
                out.numbers.insert(k.clone(), f);
            }
            serde_json::Value::String(s) => {
                out.text.insert(k.clone(), s.clone());
            }
            serde_json::Value::Null => {}
            _ => {
                return Err(ParseError::new(
                    Format::Qor,
                    1,
                    format!("`{k}` must be a number or a string"),
                ))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_names() {
        let q =
            parse_qor(r#"{"total_power": 12.5, "critical_path_start": "a", "x": null}"#).unwrap();
        assert_eq!(q.number("total_power"), Some(12.5));
        assert_eq!(q.text("critical_path_start"), Some("a"));
        assert_eq!(q.numbers.len(), 1);
    }

    #[test]
    fn syntax_error_has_line() {
        let e = parse_qor("{\n\"a\": 1,\n\"b\": }\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}

use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "crjet-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (json or text)")),
        }
    }
}

/// Report wrapper carrying the schema version and the command name.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn envelope<'a, T: Serialize>(command: &'a str, body: &'a T) -> Envelope<'a, T> {
    Envelope { schema: SCHEMA_VERSION, command, body }
}

pub fn render<T: Serialize>(value: &T, format: Format) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            flatten("", &v, &mut out);
            out
        }
    }
}

/// One `path: value` line per leaf; short scalar arrays stay on one line.
fn flatten(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        other => out.push_str(&format!("{path}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct R {
        a: u32,
        b: Vec<u32>,
        c: Option<String>,
        d: Vec<(u32, u32)>,
    }

    #[test]
    fn text_lines() {
        let r = R { a: 1, b: vec![2, 3], c: None, d: vec![(4, 5)] };
        let t = render(&envelope("x", &r), Format::Text);
        assert_eq!(t, format!("schema: {SCHEMA_VERSION}\ncommand: x\na: 1\nb: [2, 3]\nc: -\nd[0]: [4, 5]\n"));
    }

    #[test]
    fn json_keeps_field_order() {
        let r = R { a: 1, b: vec![], c: Some("z".into()), d: vec![] };
        let j = render(&envelope("x", &r), Format::Json);
        let pos = |k: &str| j.find(k).unwrap();
        assert!(pos("schema") < pos("\"a\"") && pos("\"a\"") < pos("\"c\""));
    }
}

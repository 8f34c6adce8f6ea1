//! Minimal JSON Schema checker covering the keywords used by the shipped schemas.

use regex::Regex;
use serde_json::Value;

pub struct Schema {
    root: Value,
}

impl Schema {
    pub fn load(name: &str) -> Schema {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        Schema { root: serde_json::from_str(&text).unwrap() }
    }

    pub fn validate(&self, doc: &Value) -> Result<(), String> {
        self.check(&self.root, doc, "$")
    }

    fn resolve<'a>(&'a self, reference: &str) -> &'a Value {
        let pointer = reference.strip_prefix('#').expect("only local references");
        self.root.pointer(pointer).unwrap_or_else(|| panic!("dangling {reference}"))
    }

    fn check(&self, schema: &Value, doc: &Value, at: &str) -> Result<(), String> {
        let Some(obj) = schema.as_object() else { return Ok(()) };
        if let Some(r) = obj.get("$ref").and_then(Value::as_str) {
            self.check(self.resolve(r), doc, at)?;
        }
        if let Some(t) = obj.get("type") {
            let allowed: Vec<&str> = match t {
                Value::String(s) => vec![s.as_str()],
                Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
                _ => vec![],
            };
            if !allowed.iter().any(|t| type_matches(t, doc)) {
                return Err(format!("{at}: expected {allowed:?}, got {doc}"));
            }
        }
        if let Some(c) = obj.get("const") {
            if c != doc {
                return Err(format!("{at}: expected {c}, got {doc}"));
            }
        }
        if let Some(e) = obj.get("enum").and_then(Value::as_array) {
            if !e.contains(doc) {
                return Err(format!("{at}: {doc} not in {e:?}"));
            }
        }
        if let (Some(min), Some(n)) = (obj.get("minimum").and_then(Value::as_f64), doc.as_f64()) {
            if n < min {
                return Err(format!("{at}: {n} < {min}"));
            }
        }
        if let (Some(pat), Some(s)) = (obj.get("pattern").and_then(Value::as_str), doc.as_str()) {
            if !Regex::new(pat).unwrap().is_match(s) {
                return Err(format!("{at}: {s:?} does not match {pat}"));
            }
        }
        if let Some(map) = doc.as_object() {
            for key in obj.get("required").and_then(Value::as_array).into_iter().flatten() {
                let key = key.as_str().unwrap();
                if !map.contains_key(key) {
                    return Err(format!("{at}: missing {key}"));
                }
            }
            let props = obj.get("properties").and_then(Value::as_object);
            for (key, value) in map {
                match props.and_then(|p| p.get(key)) {
                    Some(sub) => self.check(sub, value, &format!("{at}.{key}"))?,
                    None if obj.get("additionalProperties") == Some(&Value::Bool(false)) => {
                        return Err(format!("{at}: unexpected property {key}"));
                    }
                    None => {}
                }
            }
        }
        if let (Some(items), Some(arr)) = (obj.get("items"), doc.as_array()) {
            for (i, x) in arr.iter().enumerate() {
                self.check(items, x, &format!("{at}[{i}]"))?;
            }
        }
        if let Some(variants) = obj.get("oneOf").and_then(Value::as_array) {
            let matching = variants.iter().filter(|v| self.check(v, doc, at).is_ok()).count();
            if matching != 1 {
                return Err(format!("{at}: {matching} oneOf branches match"));
            }
        }
        Ok(())
    }
}

fn type_matches(t: &str, doc: &Value) -> bool {
    match t {
        "object" => doc.is_object(),
        "array" => doc.is_array(),
        "string" => doc.is_string(),
        "boolean" => doc.is_boolean(),
        "null" => doc.is_null(),
        "integer" => doc.is_i64() || doc.is_u64(),
        "number" => doc.is_number(),
        _ => false,
    }
}

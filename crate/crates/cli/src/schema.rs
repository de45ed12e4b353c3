//! The shipped report schema and a validator for the subset of JSON Schema it uses.

use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub fn report_schema() -> Value {
    serde_json::from_str(REPORT_SCHEMA).expect("shipped schema is valid JSON")
}

/// Validates `instance` against the subset of JSON Schema used by the shipped schema:
/// `type`, `const`, `enum`, `required`, `properties`, `additionalProperties: false`, `items`,
/// `minimum`, `minLength`, `maxLength`, local `$ref`, `allOf`, `anyOf` and `if`/`then`.
/// Returns the list of violations with their JSON pointers.
pub fn validate(schema: &Value, instance: &Value) -> Vec<String> {
    let mut errs = Vec::new();
    check(schema, schema, instance, "", &mut errs);
    errs
}

fn type_ok(t: &Value, v: &Value) -> bool {
    match t.as_str() {
        Some("object") => v.is_object(),
        Some("array") => v.is_array(),
        Some("string") => v.is_string(),
        Some("boolean") => v.is_boolean(),
        Some("null") => v.is_null(),
        Some("number") => v.is_number(),
        Some("integer") => v.is_i64() || v.is_u64(),
        _ => false,
    }
}

const KEYWORDS: [&str; 19] = [
    "$schema", "$id", "title", "$defs", "type", "const", "enum", "required", "properties", "additionalProperties", "items",
    "minimum", "minLength", "maxLength", "$ref", "allOf", "anyOf", "if", "then",
];

fn check(root: &Value, s: &Value, v: &Value, at: &str, errs: &mut Vec<String>) {
    let Some(s) = s.as_object() else {
        return;
    };
    for key in s.keys().filter(|k| !KEYWORDS.contains(&k.as_str())) {
        errs.push(format!("{at}: unsupported schema keyword {key}"));
    }
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        match r.strip_prefix('#').and_then(|ptr| root.pointer(ptr)) {
            Some(target) => check(root, target, v, at, errs),
            None => errs.push(format!("{at}: unresolved reference {r}")),
        }
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::Array(ts) => ts.iter().any(|t| type_ok(t, v)),
            t => type_ok(t, v),
        };
        if !ok {
            errs.push(format!("{at}: expected type {t}, got {v}"));
            return;
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            errs.push(format!("{at}: expected {c}, got {v}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            errs.push(format!("{at}: {v} not in {e:?}"));
        }
    }
    if let (Some(m), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < m {
            errs.push(format!("{at}: {x} < {m}"));
        }
    }
    if let Some(text) = v.as_str() {
        let n = text.chars().count() as u64;
        if s.get("minLength").and_then(Value::as_u64).is_some_and(|m| n < m) {
            errs.push(format!("{at}: string too short"));
        }
        if s.get("maxLength").and_then(Value::as_u64).is_some_and(|m| n > m) {
            errs.push(format!("{at}: string too long"));
        }
    }
    if let Some(obj) = v.as_object() {
        for r in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !r.as_str().is_some_and(|k| obj.contains_key(k)) {
                errs.push(format!("{at}: missing {r}"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, val) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => check(root, ps, val, &format!("{at}/{k}"), errs),
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errs.push(format!("{at}: unexpected property {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            check(root, items, x, &format!("{at}/{i}"), errs);
        }
    }
    for sub in s.get("allOf").and_then(Value::as_array).into_iter().flatten() {
        check(root, sub, v, at, errs);
    }
    if let Some(any) = s.get("anyOf").and_then(Value::as_array) {
        let ok = any.iter().any(|sub| {
            let mut e = Vec::new();
            check(root, sub, v, at, &mut e);
            e.is_empty()
        });
        if !ok {
            errs.push(format!("{at}: matches no anyOf branch"));
        }
    }
    if let Some(cond) = s.get("if") {
        let mut e = Vec::new();
        check(root, cond, v, at, &mut e);
        if e.is_empty() {
            if let Some(then) = s.get("then") {
                check(root, then, v, at, errs);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn validator_rejects_malformed_reports() {
        let s = report_schema();
        let good = json!({
            "version": "1", "command": "hk", "input_digest": "0".repeat(64),
            "ring": {"characteristic": 5, "vars": ["x"], "ideal": [], "dimension": 1},
            "result": {"kind": "hk", "index": 0, "d": 1, "levels": [], "differences": [], "estimate": null,
                       "estimate_decimal": null, "stabilized": false, "label": "eventually exact"},
            "timing": {"elapsed_ms": 0.5, "cache": []}, "warnings": []
        });
        assert!(validate(&s, &good).is_empty(), "{:?}", validate(&s, &good));
        let mut bad = good.clone();
        bad["result"]["label"] = "guess".into();
        assert!(!validate(&s, &bad).is_empty());
        let mut bad = good.clone();
        bad["input_digest"] = "abc".into();
        assert!(!validate(&s, &bad).is_empty());
        let mut bad = good;
        bad["extra"] = 1.into();
        assert!(!validate(&s, &bad).is_empty());
    }

    #[test]
    fn unknown_keywords_and_dangling_references_are_reported() {
        let s = json!({"type": "object", "properties": {"a": {"$ref": "#/$defs/missing"}}, "pattern": "x"});
        let errs = validate(&s, &json!({"a": 1}));
        assert_eq!(errs.len(), 2, "{errs:?}");
    }
}

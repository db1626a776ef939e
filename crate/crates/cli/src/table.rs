//! Flat `path = value` rendering of reports.
//!
//! Every scalar becomes one line whose left side is the dotted path to it
//! (array elements by index) and whose right side is the JSON literal.
//! Empty arrays and objects are written as `[]` and `{}` so that the table
//! parses back to exactly the same tree. Object keys must not be decimal
//! numbers or contain `.`; report keys never do.

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub fn to_table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten(report, &mut String::new(), &mut rows);
    let width = rows.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (path, value) in rows {
        out.push_str(&format!("{path:width$} = {value}\n"));
    }
    out
}

fn flatten(v: &Value, path: &mut String, rows: &mut Vec<(String, String)>) {
    let mut descend = |key: &str, child: &Value, path: &mut String| {
        let len = path.len();
        if !path.is_empty() {
            path.push('.');
        }
        path.push_str(key);
        flatten(child, path, rows);
        path.truncate(len);
    };
    match v {
        Value::Array(items) if !items.is_empty() => {
            for (i, item) in items.iter().enumerate() {
                descend(&i.to_string(), item, path);
            }
        }
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                descend(k, child, path);
            }
        }
        _ => rows.push((path.clone(), v.to_string())),
    }
}

pub fn from_table(text: &str) -> Result<Value> {
    let mut root: Option<Value> = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let bad = |message: String| CliError::Table { line: line_no, message };
        if line.trim().is_empty() {
            continue;
        }
        let (path, literal) = line
            .split_once(" = ")
            .ok_or_else(|| bad("expected `path = value`".into()))?;
        let value: Value = serde_json::from_str(literal.trim()).map_err(|e| bad(e.to_string()))?;
        let keys: Vec<&str> = match path.trim() {
            "" => Vec::new(),
            p => p.split('.').collect(),
        };
        insert(&mut root, &keys, value).map_err(bad)?;
    }
    root.ok_or(CliError::Table {
        line: 0,
        message: "empty table".into(),
    })
}

fn insert(slot: &mut Option<Value>, keys: &[&str], value: Value) -> std::result::Result<(), String> {
    let Some((first, rest)) = keys.split_first() else {
        return match slot {
            None => {
                *slot = Some(value);
                Ok(())
            }
            Some(_) => Err("value given twice".into()),
        };
    };
    match first.parse::<usize>() {
        Ok(index) => {
            let items = match slot.get_or_insert_with(|| Value::Array(Vec::new())) {
                Value::Array(items) => items,
                _ => return Err(format!("`{first}` indexes a non-array")),
            };
            if index == items.len() {
                let mut child = None;
                insert(&mut child, rest, value)?;
                items.push(child.expect("insert fills the slot"));
                Ok(())
            } else if index + 1 == items.len() {
                let mut child = items.pop();
                let result = insert(&mut child, rest, value);
                items.extend(child);
                result
            } else {
                Err(format!("array index {index} out of order"))
            }
        }
        Err(_) => {
            let map = match slot.get_or_insert_with(|| Value::Object(Map::new())) {
                Value::Object(map) => map,
                _ => return Err(format!("`{first}` keys a non-object")),
            };
            let mut child = map.remove(*first);
            let result = insert(&mut child, rest, value);
            if let Some(c) = child {
                map.insert((*first).to_string(), c);
            }
            result
        }
    }
}

//! Turns checklist answers into an instance of a model's schema.

use ldscreen::dataset::{Instance, Schema, Value, LD_ATTRIBUTES};

fn tokens(text: &str) -> Vec<&str> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

/// `NAME=VALUE` pairs when every token has `=`, otherwise positional values.
fn pairs<'a>(tokens: &[&'a str], names: &[&str]) -> Result<Vec<(String, &'a str)>, String> {
    if !tokens.is_empty() && tokens.iter().all(|t| t.contains('=')) {
        let mut out = Vec::with_capacity(tokens.len());
        for t in tokens {
            let (name, value) = t.split_once('=').expect("checked above");
            if out.iter().any(|(n, _): &(String, &str)| n == name) {
                return Err(format!("answer for {name} given twice"));
            }
            out.push((name.to_string(), value));
        }
        if out.len() != names.len() {
            return Err(format!("expected {} answers, got {}", names.len(), out.len()));
        }
        Ok(out)
    } else if tokens.len() != names.len() {
        Err(format!("expected {} answers, got {}", names.len(), tokens.len()))
    } else {
        Ok(names
            .iter()
            .map(|n| n.to_string())
            .zip(tokens.iter().copied())
            .collect())
    }
}

fn build(schema: &Schema, answers: Vec<(String, Value)>) -> Result<Instance, String> {
    let mut values = vec![Value::Missing; schema.len()];
    for (name, value) in answers {
        match schema.index_of(&name) {
            Some(a) if a != schema.class_index() => values[a] = value,
            _ => return Err(format!("the model has no attribute {name}")),
        }
    }
    Ok(Instance::new(values))
}

/// The 16 Y/N checklist answers, in checklist order or by abbreviation.
pub fn by_checklist(schema: &Schema, text: &str) -> Result<Instance, String> {
    let names: Vec<&str> = LD_ATTRIBUTES.iter().map(|(abbr, _)| *abbr).collect();
    let mut answers = Vec::with_capacity(names.len());
    for (name, raw) in pairs(&tokens(text), &names)? {
        if !names.contains(&name.as_str()) {
            return Err(format!("{name} is not a checklist item"));
        }
        let symbol = match raw.to_ascii_uppercase().as_str() {
            "Y" | "YES" => "Y",
            "N" | "NO" => "N",
            _ => return Err(format!("answer for {name} must be Y or N, got `{raw}`")),
        };
        let a = schema
            .index_of(&name)
            .ok_or_else(|| format!("the model has no attribute {name}; use --schema for other datasets"))?;
        let value = schema
            .attribute(a)
            .value_index(symbol)
            .map(Value::Symbol)
            .ok_or_else(|| format!("{name} does not take `{symbol}` in this model"))?;
        answers.push((name, value));
    }
    build(schema, answers)
}

/// One answer per non-class attribute of `schema`, in its order or by name,
/// using its own symbols; `?` leaves a value missing.
pub fn by_schema(schema: &Schema, text: &str) -> Result<Instance, String> {
    let names: Vec<&str> = schema
        .feature_indices()
        .map(|a| schema.attribute(a).name.as_str())
        .collect();
    let mut answers = Vec::with_capacity(names.len());
    for (name, raw) in pairs(&tokens(text), &names)? {
        let a = schema
            .index_of(&name)
            .ok_or_else(|| format!("the model has no attribute {name}"))?;
        let value = schema
            .parse_value(a, raw)
            .map_err(|_| format!("`{raw}` is not a valid value of {name}"))?;
        answers.push((name, value));
    }
    build(schema, answers)
}

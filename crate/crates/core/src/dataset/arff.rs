//! Dense ARFF subset: `@relation`, `@attribute <name> {v1,...} | numeric`,
//! `@data`, `?` for missing cells, `%` comments and an optional trailing
//! `{weight}` per data row.

use std::fmt::Write as _;

use super::{AttributeSpec, Dataset, Instance, Schema, ValueError};
use crate::error::{Error, Result};

/// A comma-separated field and whether it was quoted in the source.
struct Field {
    text: String,
    quoted: bool,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Reads one possibly-quoted token starting at `chars[*pos]`. Stops at an
/// unquoted delimiter (`,`, whitespace when `stop_on_space`, `{` or `}`).
fn read_token(chars: &[char], pos: &mut usize, stop_on_space: bool, line: usize) -> Result<Field> {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
    if *pos < chars.len() && (chars[*pos] == '\'' || chars[*pos] == '"') {
        let quote = chars[*pos];
        *pos += 1;
        let mut text = String::new();
        loop {
            match chars.get(*pos) {
                None => return Err(syntax(line, "unterminated quoted string")),
                Some('\\') => {
                    let escaped = chars.get(*pos + 1).ok_or_else(|| syntax(line, "dangling escape"))?;
                    text.push(match escaped {
                        'n' => '\n',
                        't' => '\t',
                        c => *c,
                    });
                    *pos += 2;
                }
                Some(&c) if c == quote => {
                    *pos += 1;
                    break;
                }
                Some(&c) => {
                    text.push(c);
                    *pos += 1;
                }
            }
        }
        return Ok(Field { text, quoted: true });
    }
    let start = *pos;
    while *pos < chars.len() {
        let c = chars[*pos];
        if c == ',' || c == '{' || c == '}' || (stop_on_space && c.is_whitespace()) {
            break;
        }
        *pos += 1;
    }
    let text: String = chars[start..*pos].iter().collect();
    Ok(Field {
        text: text.trim().to_string(),
        quoted: false,
    })
}

/// Splits a comma-separated list, honouring quotes.
fn split_fields(chars: &[char], pos: &mut usize, line: usize) -> Result<Vec<Field>> {
    let mut fields = Vec::new();
    loop {
        fields.push(read_token(chars, pos, false, line)?);
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        match chars.get(*pos) {
            Some(',') => *pos += 1,
            _ => return Ok(fields),
        }
    }
}

fn strip_comment(raw: &str) -> &str {
    // A '%' outside quotes starts a comment.
    let mut quote = None;
    let mut escaped = false;
    for (i, c) in raw.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match (quote, c) {
            (_, '\\') => escaped = true,
            (None, '%') => return &raw[..i],
            (None, '\'' | '"') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            _ => {}
        }
    }
    raw
}

fn keyword<'a>(line: &'a str, word: &str) -> Option<&'a str> {
    let head = line.get(..word.len())?;
    if head.eq_ignore_ascii_case(word) {
        let rest = &line[word.len()..];
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return Some(rest);
        }
    }
    None
}

fn parse_attribute(rest: &str, line: usize) -> Result<AttributeSpec> {
    let chars: Vec<char> = rest.chars().collect();
    let mut pos = 0;
    let name = read_token(&chars, &mut pos, true, line)?;
    if name.text.is_empty() {
        return Err(syntax(line, "attribute without a name"));
    }
    let type_part: String = chars[pos..].iter().collect();
    let type_part = type_part.trim();
    if let Some(inner) = type_part.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| syntax(line, "nominal value list is not closed"))?;
        let inner: Vec<char> = inner.chars().collect();
        let mut p = 0;
        let values = split_fields(&inner, &mut p, line)?;
        if p < inner.len() {
            return Err(syntax(line, "unexpected text in nominal value list"));
        }
        let values: Vec<String> = values.into_iter().map(|f| f.text).collect();
        if values.iter().any(String::is_empty) {
            return Err(syntax(line, "empty nominal value"));
        }
        return Ok(AttributeSpec::nominal(name.text, values));
    }
    let lower = type_part.to_ascii_lowercase();
    match lower.as_str() {
        "numeric" | "real" | "integer" => Ok(AttributeSpec::numeric(name.text)),
        "" => Err(syntax(line, format!("attribute `{}` has no type", name.text))),
        other => Err(syntax(
            line,
            format!("unsupported attribute type `{other}` for `{}`", name.text),
        )),
    }
}

/// Parses ARFF text. The class is the last declared nominal attribute.
pub fn parse_arff(text: &str) -> Result<Dataset> {
    let mut relation: Option<String> = None;
    let mut attributes: Vec<AttributeSpec> = Vec::new();
    let mut schema: Option<Schema> = None;
    let mut instances = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(schema) = &schema {
            instances.push(parse_row(schema, content, line)?);
            continue;
        }
        if let Some(rest) = keyword(content, "@relation") {
            if relation.is_some() {
                return Err(syntax(line, "duplicate @relation"));
            }
            let chars: Vec<char> = rest.chars().collect();
            let mut pos = 0;
            relation = Some(read_token(&chars, &mut pos, true, line)?.text);
        } else if let Some(rest) = keyword(content, "@attribute") {
            if relation.is_none() {
                return Err(syntax(line, "@attribute before @relation"));
            }
            attributes.push(parse_attribute(rest, line)?);
        } else if keyword(content, "@data").is_some() {
            if attributes.is_empty() {
                return Err(syntax(line, "@data before any @attribute"));
            }
            schema = Some(
                Schema::with_default_class(std::mem::take(&mut attributes)).map_err(|e| syntax(line, e.to_string()))?,
            );
        } else {
            return Err(syntax(line, format!("unexpected line `{content}`")));
        }
    }

    let schema = schema.ok_or_else(|| syntax(text.lines().count().max(1), "missing @data section"))?;
    Ok(Dataset::from_parts_unchecked(
        relation.unwrap_or_default(),
        schema,
        instances,
    ))
}

fn parse_row(schema: &Schema, content: &str, line: usize) -> Result<Instance> {
    if content.starts_with('{') {
        return Err(syntax(line, "sparse ARFF rows are not supported"));
    }
    let chars: Vec<char> = content.chars().collect();
    let mut pos = 0;
    let mut fields = split_fields(&chars, &mut pos, line)?;
    let mut weight = 1.0;
    if pos < chars.len() {
        // "a,b,{w}" leaves an empty field before the brace
        if chars[pos] == '{' && fields.len() > 1 && fields.last().is_some_and(|f| f.text.is_empty() && !f.quoted) {
            fields.pop();
        }
        // trailing "{weight}"
        let rest: String = chars[pos..].iter().collect();
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| syntax(line, format!("unexpected text `{}`", rest.trim())))?;
        weight = inner
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|w| *w > 0.0 && w.is_finite())
            .ok_or_else(|| syntax(line, format!("invalid instance weight `{inner}`")))?;
    }
    if fields.len() != schema.len() {
        return Err(Error::Arity {
            line,
            expected: schema.len(),
            found: fields.len(),
        });
    }
    let mut values = Vec::with_capacity(fields.len());
    for (attribute, field) in fields.iter().enumerate() {
        if field.text.is_empty() && !field.quoted {
            return Err(syntax(
                line,
                format!("empty value for `{}`", schema.attribute(attribute).name),
            ));
        }
        let value = if field.text == "?" && !field.quoted {
            super::Value::Missing
        } else if field.quoted && field.text == "?" {
            // a quoted '?' is a literal symbol
            schema
                .attribute(attribute)
                .value_index("?")
                .map(super::Value::Symbol)
                .ok_or_else(|| undeclared(schema, attribute, &field.text, line))?
        } else {
            schema.parse_value(attribute, &field.text).map_err(|e| match e {
                ValueError::NotNumeric => Error::NotNumeric {
                    line,
                    attribute: schema.attribute(attribute).name.clone(),
                    value: field.text.clone(),
                },
                ValueError::Undeclared => undeclared(schema, attribute, &field.text, line),
            })?
        };
        values.push(value);
    }
    Ok(Instance::with_weight(values, weight))
}

fn undeclared(schema: &Schema, attribute: usize, value: &str, line: usize) -> Error {
    Error::UndeclaredSymbol {
        line,
        attribute: schema.attribute(attribute).name.clone(),
        value: value.to_string(),
    }
}

fn quote(token: &str) -> String {
    let needs = token.is_empty()
        || token == "?"
        || token
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '{' | '}' | '%' | '\\'));
    if !needs {
        return token.to_string();
    }
    let mut out = String::with_capacity(token.len() + 2);
    out.push('\'');
    for c in token.chars() {
        match c {
            '\'' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Serialises a dataset to ARFF. Instance weights other than 1 are written
/// as a trailing `{w}`.
///
/// The class attribute is not recorded in ARFF; parsing the output picks the
/// last nominal attribute again.
pub fn write_arff(dataset: &Dataset) -> String {
    let schema = dataset.schema();
    let relation = if dataset.relation().is_empty() {
        "data"
    } else {
        dataset.relation()
    };
    let mut out = String::new();
    let _ = writeln!(out, "@relation {}", quote(relation));
    out.push('\n');
    for attribute in schema.attributes() {
        if attribute.is_numeric() {
            let _ = writeln!(out, "@attribute {} numeric", quote(&attribute.name));
        } else {
            let values: Vec<String> = attribute.values.iter().map(|v| quote(v)).collect();
            let _ = writeln!(out, "@attribute {} {{{}}}", quote(&attribute.name), values.join(","));
        }
    }
    out.push_str("\n@data\n");
    for instance in dataset.instances() {
        let cells: Vec<String> = instance
            .values
            .iter()
            .enumerate()
            .map(|(a, v)| match v {
                super::Value::Missing => "?".to_string(),
                _ => quote(&schema.format_value(a, *v)),
            })
            .collect();
        out.push_str(&cells.join(","));
        if instance.weight != 1.0 {
            let _ = write!(out, ",{{{}}}", instance.weight);
        }
        out.push('\n');
    }
    out
}

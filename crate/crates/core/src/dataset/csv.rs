use ::csv::{ReaderBuilder, StringRecord, WriterBuilder};

use super::{AttributeSpec, Dataset, Instance, Schema, Value, ValueError};
use crate::error::{Error, Result};

fn read_records(text: &str) -> Result<Vec<(usize, StringRecord)>> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        // skip blank lines
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        records.push((line, record));
    }
    Ok(records)
}

/// Parses CSV against a known schema. Empty cells and `?` are missing.
pub fn parse_csv(text: &str, schema: &Schema, has_header: bool) -> Result<Dataset> {
    let mut records = read_records(text)?.into_iter();
    if has_header {
        if let Some((line, header)) = records.next() {
            check_arity(schema, line, header.len())?;
            for (i, name) in header.iter().enumerate() {
                if name != schema.attribute(i).name {
                    return Err(Error::Syntax {
                        line,
                        message: format!(
                            "header column {} is `{name}`, schema expects `{}`",
                            i + 1,
                            schema.attribute(i).name
                        ),
                    });
                }
            }
        }
    }
    let mut instances = Vec::new();
    for (line, record) in records {
        check_arity(schema, line, record.len())?;
        let mut values = Vec::with_capacity(record.len());
        for (attribute, token) in record.iter().enumerate() {
            let value = schema.parse_value(attribute, token).map_err(|e| {
                let attribute = schema.attribute(attribute).name.clone();
                let value = token.to_string();
                match e {
                    ValueError::NotNumeric => Error::NotNumeric { line, attribute, value },
                    ValueError::Undeclared => Error::UndeclaredSymbol { line, attribute, value },
                }
            })?;
            values.push(value);
        }
        instances.push(Instance::new(values));
    }
    Ok(Dataset::from_parts_unchecked(
        "data".to_string(),
        schema.clone(),
        instances,
    ))
}

fn check_arity(schema: &Schema, line: usize, found: usize) -> Result<()> {
    if found != schema.len() {
        return Err(Error::Arity {
            line,
            expected: schema.len(),
            found,
        });
    }
    Ok(())
}

/// Parses CSV without a schema. A column is numeric when every non-missing
/// token parses as a number, otherwise nominal with its symbols in order of
/// first appearance. Without a header, columns are named `a1`, `a2`, ...
///
/// The class is `class` when given, else the last nominal column.
pub fn infer_csv(text: &str, has_header: bool, class: Option<&str>) -> Result<Dataset> {
    let records = read_records(text)?;
    let mut iter = records.iter();
    let names: Vec<String> = if has_header {
        let (_, header) = iter.next().ok_or(Error::EmptyDataset)?;
        header.iter().map(str::to_string).collect()
    } else {
        let width = records.first().map(|(_, r)| r.len()).ok_or(Error::EmptyDataset)?;
        (1..=width).map(|i| format!("a{i}")).collect()
    };
    let rows: Vec<&(usize, StringRecord)> = iter.collect();
    for (line, record) in &rows {
        if record.len() != names.len() {
            return Err(Error::Arity {
                line: *line,
                expected: names.len(),
                found: record.len(),
            });
        }
    }
    let mut attributes = Vec::with_capacity(names.len());
    for (col, name) in names.iter().enumerate() {
        let tokens = rows.iter().map(|(_, r)| &r[col]).filter(|t| !t.is_empty() && *t != "?");
        let numeric = tokens
            .clone()
            .all(|t| t.parse::<f64>().map(f64::is_finite).unwrap_or(false));
        if numeric && tokens.clone().next().is_some() {
            attributes.push(AttributeSpec::numeric(name.clone()));
        } else {
            let mut symbols: Vec<String> = Vec::new();
            for t in tokens {
                if !symbols.iter().any(|s| s == t) {
                    symbols.push(t.to_string());
                }
            }
            if symbols.is_empty() {
                return Err(Error::EmptyColumn(name.clone()));
            }
            attributes.push(AttributeSpec::nominal(name.clone(), symbols));
        }
    }
    let schema = match class {
        Some(name) => {
            let index = attributes
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
            Schema::new(attributes, index)?
        }
        None => Schema::with_default_class(attributes)?,
    };
    let mut instances = Vec::with_capacity(rows.len());
    for (_, record) in rows {
        let values = record
            .iter()
            .enumerate()
            .map(|(a, t)| schema.parse_value(a, t).unwrap_or(Value::Missing))
            .collect();
        instances.push(Instance::new(values));
    }
    Ok(Dataset::from_parts_unchecked("data".into(), schema, instances))
}

/// Writes a header row and one row per instance; missing cells become `?`.
pub fn write_csv(dataset: &Dataset) -> Result<String> {
    let schema = dataset.schema();
    let mut writer = WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(schema.attributes().iter().map(|a| a.name.as_str()))?;
    for instance in dataset.instances() {
        writer.write_record(
            instance
                .values
                .iter()
                .enumerate()
                .map(|(a, v)| schema.format_value(a, *v)),
        )?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

use super::{Dataset, Value};
use crate::error::{Error, Result};

/// Replaces missing non-class cells with the column's weighted mean
/// (numeric) or weighted mode (nominal, ties broken by declaration order).
///
/// The class column is left untouched. Fails when a column to be filled has
/// no observed value at all.
pub fn impute_missing(dataset: &Dataset) -> Result<Dataset> {
    let schema = dataset.schema();
    let mut fill = vec![None; schema.len()];
    for a in schema.feature_indices() {
        let column = dataset.instances().iter().map(|inst| (inst.values[a], inst.weight));
        if column.clone().all(|(v, _)| !v.is_missing()) {
            continue;
        }
        let spec = schema.attribute(a);
        let value = if spec.is_numeric() {
            let (sum, total) = column
                .filter_map(|(v, w)| v.number().map(|x| (x * w, w)))
                .fold((0.0, 0.0), |(s, t), (xw, w)| (s + xw, t + w));
            if total == 0.0 {
                return Err(Error::EmptyColumn(spec.name.clone()));
            }
            Value::Number(sum / total)
        } else {
            let mut counts = vec![0.0; spec.values.len()];
            for (v, w) in column {
                if let Some(s) = v.symbol() {
                    counts[s] += w;
                }
            }
            if counts.iter().all(|&c| c == 0.0) {
                return Err(Error::EmptyColumn(spec.name.clone()));
            }
            Value::Symbol(argmax_first(&counts))
        };
        fill[a] = Some(value);
    }
    let instances = dataset
        .instances()
        .iter()
        .map(|inst| {
            let mut inst = inst.clone();
            for (cell, replacement) in inst.values.iter_mut().zip(&fill) {
                if let (Value::Missing, Some(r)) = (*cell, replacement) {
                    *cell = *r;
                }
            }
            inst
        })
        .collect();
    Ok(Dataset::from_parts_unchecked(
        dataset.relation().to_string(),
        schema.clone(),
        instances,
    ))
}

/// Index of the largest entry; the earliest wins ties.
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

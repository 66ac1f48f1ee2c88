//! Dataset schema, ARFF/CSV ingestion, imputation and fold splitting.
//!
//! Values are stored positionally against a [`Schema`]. Nominal and binary
//! values are kept as indices into the attribute's declared symbol list, and
//! a missing cell is the distinguished [`Value::Missing`] variant rather than
//! a sentinel symbol.

mod arff;
mod checklist;
mod csv;
mod folds;
pub(crate) mod impute;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::arff::{parse_arff, write_arff};
pub use self::checklist::{ld_checklist_schema, synthetic_checklist, LD_ATTRIBUTES, LD_CLASS};
pub use self::csv::{infer_csv, parse_csv, write_csv};
pub use self::folds::{fold_indices, folds, stratified_folds};
pub use self::impute::impute_missing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Binary,
    Nominal,
    Numeric,
}

/// One column of a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    /// Declared symbols, in declaration order. Empty for numeric attributes.
    #[serde(default)]
    pub values: Vec<String>,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Numeric,
            values: Vec::new(),
        }
    }

    /// A nominal attribute. Two-valued declarations become [`AttributeKind::Binary`].
    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        let kind = if values.len() == 2 {
            AttributeKind::Binary
        } else {
            AttributeKind::Nominal
        };
        Self {
            name: name.into(),
            kind,
            values,
        }
    }

    pub fn is_nominal(&self) -> bool {
        !matches!(self.kind, AttributeKind::Numeric)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    pub fn value_index(&self, symbol: &str) -> Option<usize> {
        self.values.iter().position(|v| v == symbol)
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Schema("attribute with empty name".into()));
        }
        match self.kind {
            AttributeKind::Numeric if !self.values.is_empty() => Err(Error::Schema(format!(
                "numeric attribute `{}` declares symbols",
                self.name
            ))),
            AttributeKind::Binary if self.values.len() != 2 => Err(Error::Schema(format!(
                "binary attribute `{}` must declare exactly two values",
                self.name
            ))),
            AttributeKind::Nominal if self.values.is_empty() => Err(Error::Schema(format!(
                "nominal attribute `{}` declares no values",
                self.name
            ))),
            _ => {
                let mut seen = HashSet::new();
                for v in &self.values {
                    if v.is_empty() {
                        return Err(Error::Schema(format!(
                            "attribute `{}` declares an empty symbol",
                            self.name
                        )));
                    }
                    if !seen.insert(v.as_str()) {
                        return Err(Error::Schema(format!("attribute `{}` declares `{v}` twice", self.name)));
                    }
                }
                Ok(())
            }
        }
    }
}

/// A single cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Missing,
    /// Index into the attribute's declared symbols.
    Symbol(usize),
    Number(f64),
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn symbol(&self) -> Option<usize> {
        match *self {
            Value::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn number(&self) -> Option<f64> {
        match *self {
            Value::Number(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub values: Vec<Value>,
    pub weight: f64,
}

impl Instance {
    pub fn new(values: Vec<Value>) -> Self {
        Self { values, weight: 1.0 }
    }

    pub fn with_weight(values: Vec<Value>, weight: f64) -> Self {
        Self { values, weight }
    }
}

/// Ordered attribute list plus the position of the class attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    attributes: Vec<AttributeSpec>,
    class_index: usize,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeSpec>, class_index: usize) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::Schema("no attributes".into()));
        }
        let mut names = HashSet::new();
        for a in &attributes {
            a.validate()?;
            if !names.insert(a.name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute `{}`", a.name)));
            }
        }
        let class = attributes
            .get(class_index)
            .ok_or_else(|| Error::Schema(format!("class index {class_index} out of range")))?;
        if !class.is_nominal() {
            return Err(Error::Schema(format!(
                "class attribute `{}` must be nominal",
                class.name
            )));
        }
        Ok(Self {
            attributes,
            class_index,
        })
    }

    /// Schema whose class is the last nominal attribute.
    pub fn with_default_class(attributes: Vec<AttributeSpec>) -> Result<Self> {
        let class_index = attributes
            .iter()
            .rposition(AttributeSpec::is_nominal)
            .ok_or_else(|| Error::Schema("no nominal attribute to use as class".into()))?;
        Self::new(attributes, class_index)
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &AttributeSpec {
        &self.attributes[index]
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn class_attribute(&self) -> &AttributeSpec {
        &self.attributes[self.class_index]
    }

    pub fn class_values(&self) -> &[String] {
        &self.class_attribute().values
    }

    pub fn num_classes(&self) -> usize {
        self.class_values().len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Indices of every non-class attribute, in schema order.
    pub fn feature_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.attributes.len()).filter(move |&i| i != self.class_index)
    }

    /// Same attributes with a different class attribute.
    pub fn with_class(&self, name: &str) -> Result<Self> {
        let index = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
        Self::new(self.attributes.clone(), index)
    }

    pub fn class_label(&self, class: usize) -> &str {
        &self.class_values()[class]
    }

    pub fn class_of_label(&self, label: &str) -> Result<usize> {
        self.class_attribute()
            .value_index(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Renders a cell the way ARFF and CSV files spell it (`?` for missing).
    pub fn format_value(&self, attribute: usize, value: Value) -> String {
        match value {
            Value::Missing => "?".to_string(),
            Value::Symbol(s) => self.attributes[attribute]
                .values
                .get(s)
                .cloned()
                .unwrap_or_else(|| format!("#{s}")),
            Value::Number(x) => format!("{x}"),
        }
    }

    /// Parses one token for `attribute`; `?` and the empty string are missing.
    pub fn parse_value(&self, attribute: usize, token: &str) -> std::result::Result<Value, ValueError> {
        if token.is_empty() || token == "?" {
            return Ok(Value::Missing);
        }
        let spec = &self.attributes[attribute];
        if spec.is_numeric() {
            match token.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Value::Number(x)),
                _ => Err(ValueError::NotNumeric),
            }
        } else {
            spec.value_index(token).map(Value::Symbol).ok_or(ValueError::Undeclared)
        }
    }

    pub fn check_instance(&self, instance: &Instance) -> std::result::Result<(), String> {
        if instance.values.len() != self.attributes.len() {
            return Err(format!(
                "expected {} values, found {}",
                self.attributes.len(),
                instance.values.len()
            ));
        }
        if !(instance.weight > 0.0 && instance.weight.is_finite()) {
            return Err(format!("weight {} is not positive", instance.weight));
        }
        for (spec, value) in self.attributes.iter().zip(&instance.values) {
            match (*value, spec.kind) {
                (Value::Missing, _) => {}
                (Value::Number(x), AttributeKind::Numeric) if x.is_finite() => {}
                (Value::Symbol(s), AttributeKind::Binary | AttributeKind::Nominal) if s < spec.values.len() => {}
                _ => return Err(format!("value {value:?} does not fit attribute `{}`", spec.name)),
            }
        }
        Ok(())
    }
}

/// Why a single token was rejected by [`Schema::parse_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueError {
    NotNumeric,
    Undeclared,
}

/// A schema plus the instances that conform to it.
///
/// Datasets are immutable once built; every transformation returns a new one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    relation: String,
    schema: Schema,
    instances: Vec<Instance>,
}

impl Dataset {
    pub fn new(relation: impl Into<String>, schema: Schema, instances: Vec<Instance>) -> Result<Self> {
        for (index, instance) in instances.iter().enumerate() {
            schema
                .check_instance(instance)
                .map_err(|message| Error::Instance { index, message })?;
        }
        Ok(Self {
            relation: relation.into(),
            schema,
            instances,
        })
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Class index of instance `i`, `None` when its class cell is missing.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.instances[i].values[self.schema.class_index].symbol()
    }

    /// Class indices of every instance; fails on the first missing class.
    pub fn labels(&self) -> Result<Vec<usize>> {
        (0..self.len())
            .map(|i| self.class_of(i).ok_or(Error::MissingClass(i)))
            .collect()
    }

    /// Total instance weight per class (missing classes are skipped).
    pub fn class_weights(&self) -> Vec<f64> {
        let mut weights = vec![0.0; self.schema.num_classes()];
        for (i, instance) in self.instances.iter().enumerate() {
            if let Some(c) = self.class_of(i) {
                weights[c] += instance.weight;
            }
        }
        weights
    }

    /// Re-targets the class attribute by name.
    pub fn with_class(&self, name: &str) -> Result<Self> {
        Ok(Self {
            relation: self.relation.clone(),
            schema: self.schema.with_class(name)?,
            instances: self.instances.clone(),
        })
    }

    /// New dataset holding the instances at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            relation: self.relation.clone(),
            schema: self.schema.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(relation: String, schema: Schema, instances: Vec<Instance>) -> Self {
        Self {
            relation,
            schema,
            instances,
        }
    }
}

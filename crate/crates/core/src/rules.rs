//! IF-THEN rules read off a decision tree, one per leaf, with optional
//! greedy removal of redundant conditions.
//!
//! A condition on a missing value never matches, so rules cannot reproduce
//! the tree's fractional routing of incomplete instances.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::impute::argmax_first;
use crate::dataset::{AttributeSpec, Dataset, Instance, Schema, Value};
use crate::error::{Error, Result};
use crate::tree::{pessimistic_accuracy, DecisionTreeModel, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Gt,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub attribute: usize,
    pub relation: Relation,
    /// A symbol index for `=`, a number for `<=` and `>`.
    pub value: Value,
}

impl Condition {
    pub fn matches(&self, instance: &Instance) -> bool {
        match (self.relation, instance.values[self.attribute], self.value) {
            (Relation::Eq, Value::Symbol(s), Value::Symbol(t)) => s == t,
            (Relation::Le, Value::Number(x), Value::Number(t)) => x <= t,
            (Relation::Gt, Value::Number(x), Value::Number(t)) => x > t,
            _ => false,
        }
    }

    pub fn render(&self, schema: &Schema) -> String {
        format!(
            "{}{}{}",
            schema.attribute(self.attribute).name,
            self.relation.symbol(),
            schema.format_value(self.attribute, self.value)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Vec<Condition>,
    pub consequent: usize,
    /// Training weight matched by the antecedent.
    pub coverage: f64,
    /// Share of the matched weight whose class is the consequent.
    pub accuracy: f64,
}

impl Rule {
    pub fn matches(&self, instance: &Instance) -> bool {
        self.antecedent.iter().all(|c| c.matches(instance))
    }

    /// `IF DR=Y AND DSS=Y THEN LD=Y [coverage, accuracy]`
    pub fn render(&self, schema: &Schema) -> String {
        let antecedent = if self.antecedent.is_empty() {
            "TRUE".to_string()
        } else {
            self.antecedent
                .iter()
                .map(|c| c.render(schema))
                .collect::<Vec<_>>()
                .join(" AND ")
        };
        format!(
            "IF {antecedent} THEN {}={} [{:.2}, {:.3}]",
            schema.class_attribute().name,
            schema.class_label(self.consequent),
            self.coverage,
            self.accuracy
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    schema: Schema,
    rules: Vec<Rule>,
    default_class: usize,
    confidence_factor: f64,
}

impl RuleSet {
    pub fn new(schema: Schema, rules: Vec<Rule>, default_class: usize, confidence_factor: f64) -> Self {
        Self {
            schema,
            rules,
            default_class,
            confidence_factor,
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_class(&self) -> usize {
        self.default_class
    }

    pub fn confidence_factor(&self) -> f64 {
        self.confidence_factor
    }

    pub fn condition_count(&self) -> usize {
        self.rules.iter().map(|r| r.antecedent.len()).sum()
    }

    /// Index of the rule that decides `instance`: among matching rules the
    /// most accurate, then the one with more coverage, then the earliest.
    pub fn matching_rule(&self, instance: &Instance) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, rule) in self.rules.iter().enumerate() {
            if !rule.matches(instance) {
                continue;
            }
            best = match best {
                Some(b) => {
                    let cur = &self.rules[b];
                    if rule.accuracy > cur.accuracy || (rule.accuracy == cur.accuracy && rule.coverage > cur.coverage) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
                None => Some(i),
            };
        }
        best
    }

    pub fn classify(&self, instance: &Instance) -> usize {
        rules_classify(self, instance)
    }

    /// Class scores: the matched rule's accuracy on its consequent with the
    /// remainder spread evenly, or all mass on the default class.
    pub fn distribution(&self, instance: &Instance) -> Vec<f64> {
        let n = self.schema.num_classes();
        match self.matching_rule(instance) {
            Some(r) => {
                let rule = &self.rules[r];
                let rest = if n > 1 {
                    (1.0 - rule.accuracy) / (n - 1) as f64
                } else {
                    0.0
                };
                let mut d = vec![rest; n];
                d[rule.consequent] = if n > 1 { rule.accuracy } else { 1.0 };
                d
            }
            None => {
                let mut d = vec![0.0; n];
                d[self.default_class] = 1.0;
                d
            }
        }
    }

    /// One line per rule, optionally followed by the default-class line.
    pub fn render(&self, with_default: bool) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            out.push_str(&rule.render(&self.schema));
            out.push('\n');
        }
        if with_default {
            let _ = writeln!(
                out,
                "OTHERWISE {}={}",
                self.schema.class_attribute().name,
                self.schema.class_label(self.default_class)
            );
        }
        out
    }
}

/// One rule per leaf; the antecedent is the root-to-leaf path.
pub fn extract_rules(model: &DecisionTreeModel) -> RuleSet {
    let mut rules = Vec::new();
    let mut path = Vec::new();
    collect(model.root(), &mut path, &mut rules);
    RuleSet {
        schema: model.schema().clone(),
        rules,
        default_class: argmax_first(model.root().class_counts()),
        confidence_factor: model.config().confidence_factor,
    }
}

fn collect(node: &TreeNode, path: &mut Vec<Condition>, rules: &mut Vec<Rule>) {
    match node {
        TreeNode::Leaf {
            class_counts,
            predicted,
        } => {
            let coverage: f64 = class_counts.iter().sum();
            let accuracy = if coverage > 0.0 {
                class_counts[*predicted] / coverage
            } else {
                0.0
            };
            rules.push(Rule {
                antecedent: path.clone(),
                consequent: *predicted,
                coverage,
                accuracy,
            });
        }
        TreeNode::Decision {
            attribute,
            threshold,
            children,
            ..
        } => {
            for (b, child) in children.iter().enumerate() {
                let condition = match threshold {
                    Some(t) => Condition {
                        attribute: *attribute,
                        relation: if b == 0 { Relation::Le } else { Relation::Gt },
                        value: Value::Number(*t),
                    },
                    None => Condition {
                        attribute: *attribute,
                        relation: Relation::Eq,
                        value: Value::Symbol(b),
                    },
                };
                path.push(condition);
                collect(child, path, rules);
                path.pop();
            }
        }
    }
}

/// `(covered weight, weight whose class differs from `consequent`)`.
fn rule_stats(conditions: &[Condition], consequent: usize, dataset: &Dataset) -> (f64, f64) {
    let mut covered = 0.0;
    let mut errors = 0.0;
    for (i, instance) in dataset.instances().iter().enumerate() {
        let Some(class) = dataset.class_of(i) else { continue };
        if conditions.iter().all(|c| c.matches(instance)) {
            covered += instance.weight;
            if class != consequent {
                errors += instance.weight;
            }
        }
    }
    (covered, errors)
}

/// Drops conditions that do not help a rule on `dataset`, then drops rules
/// less accurate than always predicting the majority class, and picks the
/// default class from the instances left uncovered.
///
/// Each rule repeatedly loses the condition whose removal gives the highest
/// pessimistic accuracy, as long as that accuracy is no lower than the
/// current one.
pub fn simplify_rules(rule_set: &RuleSet, dataset: &Dataset) -> Result<RuleSet> {
    if dataset.schema() != rule_set.schema() {
        return Err(Error::Schema("dataset schema differs from the rule set's".into()));
    }
    let cf = rule_set.confidence_factor;
    let class_weights = dataset.class_weights();
    let total: f64 = class_weights.iter().sum();
    let majority = argmax_first(&class_weights);
    let baseline = if total > 0.0 {
        class_weights[majority] / total
    } else {
        0.0
    };

    let mut survivors: Vec<Rule> = Vec::new();
    for rule in &rule_set.rules {
        let mut conditions = rule.antecedent.clone();
        let (n, e) = rule_stats(&conditions, rule.consequent, dataset);
        let mut current = pessimistic_accuracy(n, e, cf);
        loop {
            let mut best: Option<(usize, f64)> = None;
            for j in 0..conditions.len() {
                let mut reduced = conditions.clone();
                reduced.remove(j);
                let (n, e) = rule_stats(&reduced, rule.consequent, dataset);
                let p = pessimistic_accuracy(n, e, cf);
                if p >= current && best.is_none_or(|(_, bp)| p > bp) {
                    best = Some((j, p));
                }
            }
            match best {
                Some((j, p)) => {
                    conditions.remove(j);
                    current = p;
                }
                None => break,
            }
        }
        let (coverage, errors) = rule_stats(&conditions, rule.consequent, dataset);
        let accuracy = if coverage > 0.0 {
            (coverage - errors) / coverage
        } else {
            0.0
        };
        if coverage <= 0.0 || accuracy < baseline {
            continue;
        }
        let simplified = Rule {
            antecedent: conditions,
            consequent: rule.consequent,
            coverage,
            accuracy,
        };
        if !survivors
            .iter()
            .any(|r| r.antecedent == simplified.antecedent && r.consequent == simplified.consequent)
        {
            survivors.push(simplified);
        }
    }

    let mut uncovered = vec![0.0; class_weights.len()];
    for (i, instance) in dataset.instances().iter().enumerate() {
        if let Some(class) = dataset.class_of(i) {
            if !survivors.iter().any(|r| r.matches(instance)) {
                uncovered[class] += instance.weight;
            }
        }
    }
    let default_class = if uncovered.iter().any(|&w| w > 0.0) {
        argmax_first(&uncovered)
    } else {
        majority
    };
    Ok(RuleSet {
        schema: rule_set.schema.clone(),
        rules: survivors,
        default_class,
        confidence_factor: cf,
    })
}

/// Label of the deciding rule, or the default class when nothing matches.
pub fn rules_classify(rule_set: &RuleSet, instance: &Instance) -> usize {
    rule_set
        .matching_rule(instance)
        .map_or(rule_set.default_class, |r| rule_set.rules[r].consequent)
}

// ---- JSON ----------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RuleSetDocument {
    format_version: u32,
    attributes: Vec<AttributeSpec>,
    class_attribute: String,
    confidence_factor: f64,
    default_class: String,
    rules: Vec<RuleDocument>,
}

#[derive(Serialize, Deserialize)]
struct RuleDocument {
    conditions: Vec<ConditionDocument>,
    consequent: String,
    coverage: f64,
    accuracy: f64,
}

#[derive(Serialize, Deserialize)]
struct ConditionDocument {
    attribute: String,
    relation: String,
    value: ConditionValue,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ConditionValue {
    Number(f64),
    Symbol(String),
}

impl RuleSet {
    /// Rule-set document, version 1: the schema, `default_class`, and a
    /// `rules` array whose conditions read `{"attribute", "relation", "value"}`
    /// with `relation` one of `=`, `<=`, `>`.
    pub fn to_json(&self) -> Result<String> {
        let schema = &self.schema;
        let doc = RuleSetDocument {
            format_version: 1,
            attributes: schema.attributes().to_vec(),
            class_attribute: schema.class_attribute().name.clone(),
            confidence_factor: self.confidence_factor,
            default_class: schema.class_label(self.default_class).to_string(),
            rules: self
                .rules
                .iter()
                .map(|r| RuleDocument {
                    conditions: r
                        .antecedent
                        .iter()
                        .map(|c| ConditionDocument {
                            attribute: schema.attribute(c.attribute).name.clone(),
                            relation: c.relation.symbol().to_string(),
                            value: match c.value {
                                Value::Number(x) => ConditionValue::Number(x),
                                other => ConditionValue::Symbol(schema.format_value(c.attribute, other)),
                            },
                        })
                        .collect(),
                    consequent: schema.class_label(r.consequent).to_string(),
                    coverage: r.coverage,
                    accuracy: r.accuracy,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RuleSetDocument = serde_json::from_str(text)?;
        if doc.format_version != 1 {
            return Err(Error::Version(doc.format_version));
        }
        let class_index = doc
            .attributes
            .iter()
            .position(|a| a.name == doc.class_attribute)
            .ok_or_else(|| Error::UnknownAttribute(doc.class_attribute.clone()))?;
        let schema = Schema::new(doc.attributes, class_index)?;
        let mut rules = Vec::with_capacity(doc.rules.len());
        for r in doc.rules {
            let mut antecedent = Vec::with_capacity(r.conditions.len());
            for c in r.conditions {
                let attribute = schema
                    .index_of(&c.attribute)
                    .ok_or_else(|| Error::UnknownAttribute(c.attribute.clone()))?;
                let spec = schema.attribute(attribute);
                let condition = match (c.relation.as_str(), c.value, spec.is_numeric()) {
                    ("=", ConditionValue::Symbol(s), false) => Condition {
                        attribute,
                        relation: Relation::Eq,
                        value: Value::Symbol(spec.value_index(&s).ok_or_else(|| Error::UnknownLabel(s.clone()))?),
                    },
                    ("<=", ConditionValue::Number(x), true) => Condition {
                        attribute,
                        relation: Relation::Le,
                        value: Value::Number(x),
                    },
                    (">", ConditionValue::Number(x), true) => Condition {
                        attribute,
                        relation: Relation::Gt,
                        value: Value::Number(x),
                    },
                    (rel, _, _) => {
                        return Err(Error::Schema(format!(
                            "condition `{rel}` does not fit attribute `{}`",
                            c.attribute
                        )))
                    }
                };
                antecedent.push(condition);
            }
            rules.push(Rule {
                antecedent,
                consequent: schema.class_of_label(&r.consequent)?,
                coverage: r.coverage,
                accuracy: r.accuracy,
            });
        }
        Ok(Self {
            default_class: schema.class_of_label(&doc.default_class)?,
            schema,
            rules,
            confidence_factor: doc.confidence_factor,
        })
    }
}

//! Model document, version 1:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "relation": "ld_checklist",
//!   "attributes": [{"name": "DR", "kind": "binary", "values": ["Y", "N"]}, ...],
//!   "class_attribute": "LD",
//!   "config": {"min_leaf_weight": 2.0, "confidence_factor": 0.25, "prune": true},
//!   "root": {
//!     "type": "decision", "attribute": "DR", "threshold": null,
//!     "branch_weights": [60.0, 65.0], "class_counts": [31.0, 94.0],
//!     "children": [{"type": "leaf", "predicted": "Y", "class_counts": [25.0, 35.0]}, ...]
//!   }
//! }
//! ```
//!
//! Children of a nominal test follow the attribute's declared value order;
//! a numeric test has two children, `<= threshold` first.

use serde::{Deserialize, Serialize};

use super::{DecisionTreeModel, TreeConfig, TreeNode};
use crate::dataset::{AttributeSpec, Schema};
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    attributes: Vec<AttributeSpec>,
    class_attribute: String,
    config: TreeConfig,
    root: NodeDocument,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum NodeDocument {
    Decision {
        attribute: String,
        threshold: Option<f64>,
        branch_weights: Vec<f64>,
        class_counts: Vec<f64>,
        children: Vec<NodeDocument>,
    },
    Leaf {
        predicted: String,
        class_counts: Vec<f64>,
    },
}

fn to_document(schema: &Schema, node: &TreeNode) -> NodeDocument {
    match node {
        TreeNode::Decision {
            attribute,
            threshold,
            branch_weights,
            class_counts,
            children,
        } => NodeDocument::Decision {
            attribute: schema.attribute(*attribute).name.clone(),
            threshold: *threshold,
            branch_weights: branch_weights.clone(),
            class_counts: class_counts.clone(),
            children: children.iter().map(|c| to_document(schema, c)).collect(),
        },
        TreeNode::Leaf {
            class_counts,
            predicted,
        } => NodeDocument::Leaf {
            predicted: schema.class_label(*predicted).to_string(),
            class_counts: class_counts.clone(),
        },
    }
}

fn from_document(schema: &Schema, doc: NodeDocument) -> Result<TreeNode> {
    let n_classes = schema.num_classes();
    let check_counts = |counts: &[f64]| {
        if counts.len() != n_classes || counts.iter().any(|c| *c < 0.0 || !c.is_finite()) {
            Err(Error::Schema(format!(
                "class_counts must hold {n_classes} nonnegative numbers"
            )))
        } else {
            Ok(())
        }
    };
    match doc {
        NodeDocument::Leaf {
            predicted,
            class_counts,
        } => {
            check_counts(&class_counts)?;
            Ok(TreeNode::Leaf {
                predicted: schema.class_of_label(&predicted)?,
                class_counts,
            })
        }
        NodeDocument::Decision {
            attribute,
            threshold,
            branch_weights,
            class_counts,
            children,
        } => {
            check_counts(&class_counts)?;
            let index = schema
                .index_of(&attribute)
                .ok_or_else(|| Error::UnknownAttribute(attribute.clone()))?;
            if index == schema.class_index() {
                return Err(Error::Schema("decision node tests the class attribute".into()));
            }
            let spec = schema.attribute(index);
            let expected = if spec.is_numeric() {
                if !threshold.is_some_and(f64::is_finite) {
                    return Err(Error::Schema(format!(
                        "numeric test on `{attribute}` lacks a threshold"
                    )));
                }
                2
            } else {
                if threshold.is_some() {
                    return Err(Error::Schema(format!("nominal test on `{attribute}` has a threshold")));
                }
                spec.values.len()
            };
            if children.len() != expected || branch_weights.len() != expected {
                return Err(Error::Schema(format!(
                    "test on `{attribute}` needs {expected} children and branch weights"
                )));
            }
            Ok(TreeNode::Decision {
                attribute: index,
                threshold,
                branch_weights,
                class_counts,
                children: children
                    .into_iter()
                    .map(|c| from_document(schema, c))
                    .collect::<Result<_>>()?,
            })
        }
    }
}

impl DecisionTreeModel {
    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            attributes: self.schema.attributes().to_vec(),
            class_attribute: self.schema.class_attribute().name.clone(),
            config: self.config.clone(),
            root: to_document(&self.schema, &self.root),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Version(doc.format_version));
        }
        let class_index = doc
            .attributes
            .iter()
            .position(|a| a.name == doc.class_attribute)
            .ok_or_else(|| Error::UnknownAttribute(doc.class_attribute.clone()))?;
        let schema = Schema::new(doc.attributes, class_index)?;
        doc.config.validate()?;
        let root = from_document(&schema, doc.root)?;
        Ok(Self {
            schema,
            root,
            config: doc.config,
        })
    }
}

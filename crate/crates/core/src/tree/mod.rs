//! Gain-ratio decision trees.
//!
//! Nominal tests branch once per declared value; numeric tests branch on
//! `x <= threshold`. Instances whose tested value is missing are sent down
//! every branch with their weight split in proportion to the branch weights
//! seen in training, both while growing and while classifying.

mod build;
mod json;
mod prune;
mod split;

use serde::{Deserialize, Serialize};

use crate::dataset::impute::argmax_first;
use crate::dataset::{Instance, Schema, Value};
use crate::error::{Error, Result};

pub use self::build::{build_tree, grow_tree};
pub use self::json::MODEL_FORMAT_VERSION;
pub use self::prune::{added_errors, leaf_error_estimate, pessimistic_accuracy, prune_tree};
pub use self::split::{entropy, evaluate_split, SplitCandidate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Nodes lighter than twice this weight become leaves.
    pub min_leaf_weight: f64,
    /// Confidence level of the pessimistic error bound, in (0, 0.5].
    pub confidence_factor: f64,
    pub prune: bool,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            min_leaf_weight: 2.0,
            confidence_factor: 0.25,
            prune: true,
        }
    }
}

impl TreeConfig {
    pub fn unpruned() -> Self {
        Self {
            prune: false,
            ..Self::default()
        }
    }

    /// Rejects a negative or non-finite minimum leaf weight and a confidence
    /// factor outside (0, 0.5].
    pub fn validate(&self) -> Result<()> {
        if !(self.min_leaf_weight >= 0.0 && self.min_leaf_weight.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "min_leaf_weight {} must be a nonnegative number",
                self.min_leaf_weight
            )));
        }
        if !(self.confidence_factor > 0.0 && self.confidence_factor <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "confidence_factor {} must lie in (0, 0.5]",
                self.confidence_factor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Decision {
        attribute: usize,
        threshold: Option<f64>,
        /// Training weight of known-valued instances per branch.
        branch_weights: Vec<f64>,
        /// Training weight per class arriving at this node.
        class_counts: Vec<f64>,
        children: Vec<TreeNode>,
    },
    /// A leaf reached by no training weight has all-zero counts and predicts
    /// its parent's majority class.
    Leaf { class_counts: Vec<f64>, predicted: usize },
}

impl TreeNode {
    pub fn class_counts(&self) -> &[f64] {
        match self {
            TreeNode::Decision { class_counts, .. } | TreeNode::Leaf { class_counts, .. } => class_counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Decision { children, .. } => 1 + children.iter().map(TreeNode::node_count).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Decision { children, .. } => children.iter().map(TreeNode::leaf_count).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Decision { children, .. } => 1 + children.iter().map(TreeNode::depth).max().unwrap_or(0),
        }
    }

    /// Class distribution of a leaf, normalised to sum to one.
    fn leaf_distribution(class_counts: &[f64], predicted: usize) -> Vec<f64> {
        let total: f64 = class_counts.iter().sum();
        if total > 0.0 {
            class_counts.iter().map(|c| c / total).collect()
        } else {
            let mut d = vec![0.0; class_counts.len()];
            d[predicted] = 1.0;
            d
        }
    }
}

/// Predicted class plus the class distribution it was taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: usize,
    pub distribution: Vec<f64>,
}

/// A grown (and possibly pruned) tree together with the schema it was
/// trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTreeModel {
    pub(crate) schema: Schema,
    pub(crate) root: TreeNode,
    pub(crate) config: TreeConfig,
}

impl DecisionTreeModel {
    pub fn new(schema: Schema, root: TreeNode, config: TreeConfig) -> Self {
        Self { schema, root, config }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    pub fn classify(&self, instance: &Instance) -> Result<Classification> {
        classify(self, instance)
    }

    /// The unique leaf a missing-free instance reaches, `None` if a tested
    /// value is missing.
    pub fn leaf_for(&self, instance: &Instance) -> Option<&TreeNode> {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { .. } => return Some(node),
                TreeNode::Decision {
                    attribute,
                    threshold,
                    children,
                    ..
                } => {
                    let b = split::branch_of(
                        self.schema.attribute(*attribute),
                        instance.values[*attribute],
                        *threshold,
                    )?;
                    node = &children[b];
                }
            }
        }
    }
}

/// Routes `instance` to its leaf (or leaves, when a tested value is missing)
/// and returns the merged class distribution and its arg-max.
pub fn classify(model: &DecisionTreeModel, instance: &Instance) -> Result<Classification> {
    let schema = &model.schema;
    if instance.values.len() != schema.len() {
        return Err(Error::InvalidArgument(format!(
            "instance has {} values, schema has {}",
            instance.values.len(),
            schema.len()
        )));
    }
    for a in schema.feature_indices() {
        let spec = schema.attribute(a);
        let ok = match instance.values[a] {
            Value::Missing => true,
            Value::Symbol(s) => spec.is_nominal() && s < spec.values.len(),
            Value::Number(x) => spec.is_numeric() && x.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "value {:?} is not valid for attribute `{}`",
                instance.values[a], spec.name
            )));
        }
    }
    let mut distribution = vec![0.0; schema.num_classes()];
    accumulate(model, &model.root, instance, 1.0, &mut distribution);
    let total: f64 = distribution.iter().sum();
    if total > 0.0 {
        for p in &mut distribution {
            *p /= total;
        }
    }
    Ok(Classification {
        class: argmax_first(&distribution),
        distribution,
    })
}

fn accumulate(model: &DecisionTreeModel, node: &TreeNode, instance: &Instance, weight: f64, out: &mut [f64]) {
    match node {
        TreeNode::Leaf {
            class_counts,
            predicted,
        } => {
            for (o, p) in out
                .iter_mut()
                .zip(TreeNode::leaf_distribution(class_counts, *predicted))
            {
                *o += weight * p;
            }
        }
        TreeNode::Decision {
            attribute,
            threshold,
            branch_weights,
            children,
            ..
        } => {
            let spec = model.schema.attribute(*attribute);
            match split::branch_of(spec, instance.values[*attribute], *threshold) {
                Some(b) => accumulate(model, &children[b], instance, weight, out),
                None => {
                    let total: f64 = branch_weights.iter().sum();
                    for (child, w) in children.iter().zip(branch_weights) {
                        if *w > 0.0 {
                            accumulate(model, child, instance, weight * w / total, out);
                        }
                    }
                }
            }
        }
    }
}

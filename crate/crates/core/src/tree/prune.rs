//! Pessimistic-error subtree replacement.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{DecisionTreeModel, TreeNode};
use crate::dataset::impute::argmax_first;

/// Extra errors to add to `errors` observed among `n` cases so the total is
/// the upper limit of a one-sided binomial confidence interval at level
/// `confidence`.
///
/// Uses the exact bound `n·(1 − cf^(1/n))` for zero errors, linear
/// interpolation below one error and near `n`, and the continuity-corrected
/// normal approximation otherwise.
pub fn added_errors(n: f64, errors: f64, confidence: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if errors < 1.0 {
        let base = n * (1.0 - confidence.powf(1.0 / n));
        if errors == 0.0 {
            return base;
        }
        return base + errors * (added_errors(n, 1.0, confidence) - base);
    }
    if errors + 0.5 >= n {
        return (n - errors).max(0.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - confidence);
    let f = (errors + 0.5) / n;
    let upper = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    upper * n - errors
}

/// Pessimistic error count of a leaf holding `class_counts`.
pub fn leaf_error_estimate(class_counts: &[f64], confidence: f64) -> f64 {
    let n: f64 = class_counts.iter().sum();
    if n <= 0.0 {
        return 0.0;
    }
    let errors = (n - class_counts[argmax_first(class_counts)]).max(0.0);
    errors + added_errors(n, errors, confidence)
}

/// Pessimistic accuracy `1 − (e + added)/n` for `n` covered cases of which
/// `errors` are wrong; 0 when nothing is covered.
pub fn pessimistic_accuracy(n: f64, errors: f64, confidence: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (1.0 - (errors + added_errors(n, errors, confidence)) / n).max(0.0)
}

// slack for float noise in the leaf-vs-subtree comparison
const PRUNE_EPS: f64 = 1e-9;

/// Collapses, bottom-up, every decision node whose leaf error estimate does
/// not exceed the summed estimates of its (already pruned) children.
pub fn prune_tree(model: &DecisionTreeModel) -> DecisionTreeModel {
    let confidence = model.config.confidence_factor;
    let (root, _) = prune_node(&model.root, confidence);
    DecisionTreeModel {
        schema: model.schema.clone(),
        root,
        config: model.config.clone(),
    }
}

fn prune_node(node: &TreeNode, confidence: f64) -> (TreeNode, f64) {
    match node {
        TreeNode::Leaf { class_counts, .. } => (node.clone(), leaf_error_estimate(class_counts, confidence)),
        TreeNode::Decision {
            attribute,
            threshold,
            branch_weights,
            class_counts,
            children,
        } => {
            let mut pruned = Vec::with_capacity(children.len());
            let mut subtree = 0.0;
            for child in children {
                let (c, e) = prune_node(child, confidence);
                subtree += e;
                pruned.push(c);
            }
            let as_leaf = leaf_error_estimate(class_counts, confidence);
            if as_leaf <= subtree + PRUNE_EPS {
                (
                    TreeNode::Leaf {
                        class_counts: class_counts.clone(),
                        predicted: argmax_first(class_counts),
                    },
                    as_leaf,
                )
            } else {
                (
                    TreeNode::Decision {
                        attribute: *attribute,
                        threshold: *threshold,
                        branch_weights: branch_weights.clone(),
                        class_counts: class_counts.clone(),
                        children: pruned,
                    },
                    subtree,
                )
            }
        }
    }
}

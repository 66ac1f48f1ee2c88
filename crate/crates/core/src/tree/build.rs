use super::prune::prune_tree;
use super::split::{best_numeric_split, branch_of, SplitCandidate, RATIO_EPS};
use super::{DecisionTreeModel, TreeConfig, TreeNode};
use crate::dataset::impute::argmax_first;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Grows a tree and, when `config.prune` is set, prunes it.
pub fn build_tree(dataset: &Dataset, config: &TreeConfig) -> Result<DecisionTreeModel> {
    let grown = grow_tree(dataset, config)?;
    Ok(if config.prune { prune_tree(&grown) } else { grown })
}

struct Grower<'a> {
    dataset: &'a Dataset,
    labels: Vec<usize>,
    n_classes: usize,
    min_leaf_weight: f64,
}

/// Top-down induction without pruning: at each node pick the valid test with
/// the largest gain ratio (ties go to the lower attribute index, then the
/// lower threshold) and recurse until the node is pure, no valid test is
/// left, or the node weighs less than `2 * min_leaf_weight`.
pub fn grow_tree(dataset: &Dataset, config: &TreeConfig) -> Result<DecisionTreeModel> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let schema = dataset.schema();
    if schema.feature_indices().next().is_none() {
        return Err(Error::InvalidArgument("dataset has no non-class attributes".into()));
    }
    let grower = Grower {
        dataset,
        labels: dataset.labels()?,
        n_classes: schema.num_classes(),
        min_leaf_weight: config.min_leaf_weight,
    };
    let items = dataset
        .instances()
        .iter()
        .enumerate()
        .map(|(i, inst)| (i, inst.weight))
        .collect();
    let mut used = vec![false; schema.len()];
    let root = grower.grow(items, &mut used);
    Ok(DecisionTreeModel {
        schema: schema.clone(),
        root,
        config: config.clone(),
    })
}

impl Grower<'_> {
    fn grow(&self, items: Vec<(usize, f64)>, used: &mut [bool]) -> TreeNode {
        let mut class_counts = vec![0.0; self.n_classes];
        for &(i, w) in &items {
            class_counts[self.labels[i]] += w;
        }
        let total: f64 = class_counts.iter().sum();
        let predicted = argmax_first(&class_counts);
        let pure = class_counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        if pure || total < 2.0 * self.min_leaf_weight {
            return TreeNode::Leaf {
                class_counts,
                predicted,
            };
        }
        let Some(best) = self.best_split(&items, used) else {
            return TreeNode::Leaf {
                class_counts,
                predicted,
            };
        };

        let schema = self.dataset.schema();
        let attribute = best.attribute_index;
        let spec = schema.attribute(attribute);
        let n_branches = if spec.is_numeric() { 2 } else { spec.values.len() };
        let mut branch_weights = vec![0.0; n_branches];
        let mut routed: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_branches];
        let mut missing = Vec::new();
        for &(i, w) in &items {
            match branch_of(spec, self.dataset.instances()[i].values[attribute], best.threshold) {
                Some(b) => {
                    branch_weights[b] += w;
                    routed[b].push((i, w));
                }
                None => missing.push((i, w)),
            }
        }
        let known: f64 = branch_weights.iter().sum();
        for (b, bucket) in routed.iter_mut().enumerate() {
            if branch_weights[b] > 0.0 {
                let share = branch_weights[b] / known;
                bucket.extend(missing.iter().map(|&(i, w)| (i, w * share)));
            }
        }

        let nominal = spec.is_nominal();
        if nominal {
            used[attribute] = true;
        }
        let children = routed
            .into_iter()
            .map(|bucket| {
                if bucket.is_empty() {
                    TreeNode::Leaf {
                        class_counts: vec![0.0; self.n_classes],
                        predicted,
                    }
                } else {
                    self.grow(bucket, used)
                }
            })
            .collect();
        if nominal {
            used[attribute] = false;
        }
        TreeNode::Decision {
            attribute,
            threshold: best.threshold,
            branch_weights,
            class_counts,
            children,
        }
    }

    fn best_split(&self, items: &[(usize, f64)], used: &[bool]) -> Option<SplitCandidate> {
        let schema = self.dataset.schema();
        let instances = self.dataset.instances();
        let mut best: Option<SplitCandidate> = None;
        for attribute in schema.feature_indices() {
            let spec = schema.attribute(attribute);
            let candidate = if spec.is_numeric() {
                let mut known = Vec::with_capacity(items.len());
                let mut missing = 0.0;
                for &(i, w) in items {
                    match instances[i].values[attribute].number() {
                        Some(x) => known.push((x, self.labels[i], w)),
                        None => missing += w,
                    }
                }
                best_numeric_split(attribute, &mut known, missing, self.n_classes)
            } else {
                if used[attribute] {
                    continue;
                }
                let mut table = vec![vec![0.0; self.n_classes]; spec.values.len()];
                let mut missing = 0.0;
                for &(i, w) in items {
                    match branch_of(spec, instances[i].values[attribute], None) {
                        Some(b) => table[b][self.labels[i]] += w,
                        None => missing += w,
                    }
                }
                Some(SplitCandidate::from_table(attribute, None, &table, missing))
            };
            if let Some(c) = candidate {
                if c.is_valid() && best.is_none_or(|b| c.gain_ratio > b.gain_ratio + RATIO_EPS) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

//! Classifier families behind one trait, looked up by name.
//!
//! ```
//! use ldscreen::dataset::synthetic_checklist;
//! use ldscreen::learner::{LearnerOptions, LearnerRegistry};
//!
//! let registry = LearnerRegistry::with_builtins();
//! let learner = registry.create("j48", &LearnerOptions::default()).unwrap();
//! let data = synthetic_checklist(30, 10, 0.0, 1);
//! let model = learner.train(&data).unwrap();
//! let p = model.predict(&data.instances()[0]).unwrap();
//! assert!((p.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::dataset::impute::argmax_first;
use crate::dataset::{Dataset, Instance};
use crate::error::{Error, Result};
use crate::rules::{extract_rules, simplify_rules, RuleSet};
use crate::tree::{build_tree, DecisionTreeModel, TreeConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub distribution: Vec<f64>,
}

/// A trained classifier.
pub trait Predictor: Send + Sync {
    fn predict(&self, instance: &Instance) -> Result<Prediction>;
}

/// A training procedure.
pub trait Learner: Send + Sync {
    fn name(&self) -> &str;
    fn train(&self, dataset: &Dataset) -> Result<Box<dyn Predictor>>;
}

/// Settings shared by the built-in learners.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LearnerOptions {
    pub tree: TreeConfig,
}

pub struct TreeLearner {
    pub config: TreeConfig,
}

impl Predictor for DecisionTreeModel {
    fn predict(&self, instance: &Instance) -> Result<Prediction> {
        let c = self.classify(instance)?;
        Ok(Prediction {
            class: c.class,
            distribution: c.distribution,
        })
    }
}

impl Learner for TreeLearner {
    fn name(&self) -> &str {
        "j48"
    }

    fn train(&self, dataset: &Dataset) -> Result<Box<dyn Predictor>> {
        Ok(Box::new(build_tree(dataset, &self.config)?))
    }
}

/// Rules read off a tree grown with `config`, optionally simplified on the
/// training data.
pub struct RuleLearner {
    pub config: TreeConfig,
    pub simplify: bool,
}

impl Predictor for RuleSet {
    fn predict(&self, instance: &Instance) -> Result<Prediction> {
        let distribution = self.distribution(instance);
        Ok(Prediction {
            class: self.classify(instance),
            distribution,
        })
    }
}

impl Learner for RuleLearner {
    fn name(&self) -> &str {
        "rules"
    }

    fn train(&self, dataset: &Dataset) -> Result<Box<dyn Predictor>> {
        let rules = extract_rules(&build_tree(dataset, &self.config)?);
        Ok(Box::new(if self.simplify {
            simplify_rules(&rules, dataset)?
        } else {
            rules
        }))
    }
}

/// Always predicts the majority training class, scoring with the training
/// class proportions.
pub struct MajorityLearner;

struct MajorityModel {
    distribution: Vec<f64>,
}

impl Predictor for MajorityModel {
    fn predict(&self, _instance: &Instance) -> Result<Prediction> {
        Ok(Prediction {
            class: argmax_first(&self.distribution),
            distribution: self.distribution.clone(),
        })
    }
}

impl Learner for MajorityLearner {
    fn name(&self) -> &str {
        "majority"
    }

    fn train(&self, dataset: &Dataset) -> Result<Box<dyn Predictor>> {
        dataset.labels()?;
        let weights = dataset.class_weights();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptyDataset);
        }
        Ok(Box::new(MajorityModel {
            distribution: weights.iter().map(|w| w / total).collect(),
        }))
    }
}

type Factory = Box<dyn Fn(&LearnerOptions) -> Box<dyn Learner> + Send + Sync>;

struct Entry {
    description: String,
    factory: Factory,
}

/// Name → learner constructor.
#[derive(Default)]
pub struct LearnerRegistry {
    entries: BTreeMap<String, Entry>,
}

impl fmt::Debug for LearnerRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl LearnerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `j48`, `rules`, `rules-raw` and `majority`.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register("j48", "gain-ratio decision tree", |o| {
            Box::new(TreeLearner { config: o.tree.clone() })
        });
        r.register("rules", "tree-derived rules, simplified on the training data", |o| {
            Box::new(RuleLearner {
                config: o.tree.clone(),
                simplify: true,
            })
        });
        r.register("rules-raw", "tree-derived rules, one per leaf", |o| {
            Box::new(RuleLearner {
                config: o.tree.clone(),
                simplify: false,
            })
        });
        r.register("majority", "majority-class baseline", |_| Box::new(MajorityLearner));
        r
    }

    /// Adds or replaces `name`.
    pub fn register<F>(&mut self, name: &str, description: &str, factory: F)
    where
        F: Fn(&LearnerOptions) -> Box<dyn Learner> + Send + Sync + 'static,
    {
        self.entries.insert(
            name.to_string(),
            Entry {
                description: description.to_string(),
                factory: Box::new(factory),
            },
        );
    }

    pub fn create(&self, name: &str, options: &LearnerOptions) -> Result<Box<dyn Learner>> {
        self.entries
            .get(name)
            .map(|e| (e.factory)(options))
            .ok_or_else(|| Error::UnknownLearner(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn describe(&self, name: &str) -> Option<&str> {
        self.entries.get(name).map(|e| e.description.as_str())
    }
}

//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use ldscreen::dataset::{AttributeSpec, Dataset, Instance, Schema, Value};
use rand::seq::SliceRandom;
use rand::Rng;

/// Schema of `n` binary attributes `A0..` plus a binary class `C`.
pub fn binary_schema(n: usize) -> Schema {
    let mut attributes: Vec<AttributeSpec> = (0..n)
        .map(|j| AttributeSpec::nominal(format!("A{j}"), ["Y", "N"]))
        .collect();
    attributes.push(AttributeSpec::nominal("C", ["Y", "N"]));
    Schema::new(attributes, n).unwrap()
}

pub fn bits_instance(bits: &[usize], class: Option<usize>) -> Instance {
    let mut values: Vec<Value> = bits.iter().map(|&b| Value::Symbol(b)).collect();
    values.push(class.map_or(Value::Missing, Value::Symbol));
    Instance::new(values)
}

/// All `2^n` missing-free inputs, class cell missing.
pub fn enumerate_inputs(n: usize) -> Vec<Instance> {
    (0..1usize << n)
        .map(|code| {
            let bits: Vec<usize> = (0..n).map(|j| (code >> j) & 1).collect();
            bits_instance(&bits, None)
        })
        .collect()
}

/// Hidden labelling function: a small decision tree over binary attributes.
#[derive(Debug, Clone)]
pub enum Planted {
    Leaf(usize),
    Split(usize, Box<Planted>, Box<Planted>),
}

impl Planted {
    pub fn label(&self, bits: &[usize]) -> usize {
        match self {
            Planted::Leaf(c) => *c,
            Planted::Split(a, zero, one) => {
                if bits[*a] == 0 {
                    zero.label(bits)
                } else {
                    one.label(bits)
                }
            }
        }
    }

    /// Random rule of depth `1..=max_depth`, each path testing distinct
    /// attributes, with the two children of a split never both the same leaf.
    pub fn random<R: Rng>(rng: &mut R, n_attrs: usize, max_depth: usize) -> Planted {
        let mut attrs: Vec<usize> = (0..n_attrs).collect();
        attrs.shuffle(rng);
        Self::grow(rng, &attrs, max_depth, true)
    }

    fn grow<R: Rng>(rng: &mut R, free: &[usize], depth: usize, force: bool) -> Planted {
        if depth == 0 || free.is_empty() || (!force && rng.gen_bool(0.3)) {
            return Planted::Leaf(rng.gen_range(0..2));
        }
        let pick = rng.gen_range(0..free.len());
        let attr = free[pick];
        let rest: Vec<usize> = free.iter().copied().filter(|&a| a != attr).collect();
        let zero = Self::grow(rng, &rest, depth - 1, false);
        let mut one = Self::grow(rng, &rest, depth - 1, false);
        if let (Planted::Leaf(a), Planted::Leaf(b)) = (&zero, &one) {
            if a == b {
                one = Planted::Leaf(1 - a);
            }
        }
        Planted::Split(attr, Box::new(zero), Box::new(one))
    }
}

/// `n` uniformly drawn inputs labelled by `rule`.
pub fn planted_dataset<R: Rng>(rng: &mut R, rule: &Planted, n_attrs: usize, n: usize) -> Dataset {
    let rows = (0..n)
        .map(|_| {
            let bits: Vec<usize> = (0..n_attrs).map(|_| rng.gen_range(0..2)).collect();
            let class = rule.label(&bits);
            bits_instance(&bits, Some(class))
        })
        .collect();
    Dataset::new("planted", binary_schema(n_attrs), rows).unwrap()
}

/// Random binary data with random labels.
pub fn noise_dataset<R: Rng>(rng: &mut R, n_attrs: usize, n: usize) -> Dataset {
    let rows = (0..n)
        .map(|_| {
            let bits: Vec<usize> = (0..n_attrs).map(|_| rng.gen_range(0..2)).collect();
            bits_instance(&bits, Some(rng.gen_range(0..2)))
        })
        .collect();
    Dataset::new("noise", binary_schema(n_attrs), rows).unwrap()
}

/// Mixed schema: nominal attributes with 2-4 values, numeric attributes,
/// a 2-3 class target, optional missing cells and random weights.
pub fn mixed_dataset<R: Rng>(
    rng: &mut R,
    max_instances: usize,
    max_attrs: usize,
    missing_rate: f64,
    weighted: bool,
) -> Dataset {
    let n_attrs = rng.gen_range(1..=max_attrs);
    let mut attributes = Vec::with_capacity(n_attrs + 1);
    for j in 0..n_attrs {
        if rng.gen_bool(0.5) {
            attributes.push(AttributeSpec::numeric(format!("x{j}")));
        } else {
            let k = rng.gen_range(2..=4);
            attributes.push(AttributeSpec::nominal(format!("n{j}"), (0..k).map(|v| format!("v{v}"))));
        }
    }
    let n_classes = rng.gen_range(2..=3);
    attributes.push(AttributeSpec::nominal("class", (0..n_classes).map(|c| format!("c{c}"))));
    let schema = Schema::new(attributes, n_attrs).unwrap();
    let n = rng.gen_range(1..=max_instances);
    let rows = (0..n)
        .map(|_| {
            let mut values = Vec::with_capacity(n_attrs + 1);
            for j in 0..n_attrs {
                let spec = schema.attribute(j);
                values.push(if rng.gen_bool(missing_rate) {
                    Value::Missing
                } else if spec.is_numeric() {
                    // few distinct values so thresholds tie often
                    Value::Number(rng.gen_range(0..6) as f64 * 0.5)
                } else {
                    Value::Symbol(rng.gen_range(0..spec.values.len()))
                });
            }
            values.push(Value::Symbol(rng.gen_range(0..n_classes)));
            let weight = if weighted { rng.gen_range(0.25..3.0) } else { 1.0 };
            Instance::with_weight(values, weight)
        })
        .collect();
    Dataset::new("mixed", schema, rows).unwrap()
}

fn binary_entropy(ones: usize, n: usize) -> f64 {
    [ones, n - ones]
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

impl Planted {
    /// True when every split has positive information gain over the inputs
    /// reaching it, under uniform inputs. Parity and multiplexer sub-rules
    /// fail this and are invisible to a greedy single-attribute criterion.
    pub fn greedily_visible(&self, n_attrs: usize) -> bool {
        let inputs: Vec<Vec<usize>> = (0..1usize << n_attrs)
            .map(|code| (0..n_attrs).map(|j| (code >> j) & 1).collect())
            .collect();
        self.visible_on(&inputs.iter().collect::<Vec<_>>())
    }

    fn visible_on(&self, region: &[&Vec<usize>]) -> bool {
        let Planted::Split(a, zero, one) = self else {
            return true;
        };
        let (left, right): (Vec<&Vec<usize>>, Vec<&Vec<usize>>) = region.iter().partition(|b| b[*a] == 0);
        let ones = |r: &[&Vec<usize>]| r.iter().filter(|b| self.label(b) == 1).count();
        let n = region.len();
        let gain = binary_entropy(ones(region), n)
            - left.len() as f64 / n as f64 * binary_entropy(ones(&left), left.len())
            - right.len() as f64 / n as f64 * binary_entropy(ones(&right), right.len());
        gain > 1e-12 && zero.visible_on(&left) && one.visible_on(&right)
    }

    /// First rule from `rng` passing [`Planted::greedily_visible`].
    pub fn random_visible<R: Rng>(rng: &mut R, n_attrs: usize, max_depth: usize) -> Planted {
        loop {
            let rule = Self::random(rng, n_attrs, max_depth);
            if rule.greedily_visible(n_attrs) {
                return rule;
            }
        }
    }
}

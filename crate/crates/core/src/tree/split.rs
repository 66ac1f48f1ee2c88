use crate::dataset::{AttributeSpec, Dataset, Instance, Value};
use crate::error::{Error, Result};

/// Shannon entropy in bits of a class-weight vector, with `0·log 0 = 0`.
pub fn entropy(class_weights: &[f64]) -> Result<f64> {
    if class_weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidArgument(
            "class weights must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = class_weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidArgument("entropy of an all-zero weight vector".into()));
    }
    Ok(entropy_of(class_weights, total))
}

pub(crate) fn entropy_of(weights: &[f64], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let h: f64 = weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// Scores of one candidate test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub attribute_index: usize,
    /// Numeric tests send `x <= threshold` to branch 0, the rest to branch 1.
    pub threshold: Option<f64>,
    pub info_gain: f64,
    pub intrinsic_value: f64,
    /// `info_gain / intrinsic_value`, or 0 when the candidate is invalid.
    pub gain_ratio: f64,
}

impl SplitCandidate {
    /// A test that leaves every known-valued instance in one branch has zero
    /// intrinsic value and cannot be ranked.
    pub fn is_valid(&self) -> bool {
        self.intrinsic_value > 0.0
    }

    /// Builds a candidate from per-branch class weights of the instances whose
    /// test value is known, plus the weight of those whose value is missing.
    ///
    /// Gain is computed over the known-valued instances and scaled by their
    /// share of the total weight; intrinsic value is the entropy of the known
    /// branch weights.
    pub(crate) fn from_table(
        attribute_index: usize,
        threshold: Option<f64>,
        branches: &[Vec<f64>],
        missing_weight: f64,
    ) -> Self {
        let n_classes = branches.first().map_or(0, Vec::len);
        let mut parent = vec![0.0; n_classes];
        let mut branch_totals = Vec::with_capacity(branches.len());
        for branch in branches {
            for (p, w) in parent.iter_mut().zip(branch) {
                *p += w;
            }
            branch_totals.push(branch.iter().sum::<f64>());
        }
        let known: f64 = branch_totals.iter().sum();
        let (info_gain, intrinsic_value) = if known > 0.0 {
            let children: f64 = branches
                .iter()
                .zip(&branch_totals)
                .filter(|(_, &t)| t > 0.0)
                .map(|(b, &t)| t / known * entropy_of(b, t))
                .sum();
            let gain = (entropy_of(&parent, known) - children).max(0.0);
            let fraction = known / (known + missing_weight);
            (fraction * gain, entropy_of(&branch_totals, known))
        } else {
            (0.0, 0.0)
        };
        let gain_ratio = if intrinsic_value > 0.0 {
            info_gain / intrinsic_value
        } else {
            0.0
        };
        Self {
            attribute_index,
            threshold,
            info_gain,
            intrinsic_value,
            gain_ratio,
        }
    }
}

/// Branch taken by a known value, `None` when the value is missing.
pub(crate) fn branch_of(spec: &AttributeSpec, value: Value, threshold: Option<f64>) -> Option<usize> {
    match (value, threshold) {
        (Value::Missing, _) => None,
        (Value::Number(x), Some(t)) => Some(if x <= t { 0 } else { 1 }),
        (Value::Symbol(s), None) if s < spec.values.len() => Some(s),
        _ => None,
    }
}

/// Scores the test on `attribute_index` over the whole dataset, using each
/// instance's weight. Numeric attributes need a threshold; nominal ones must
/// not have one.
pub fn evaluate_split(dataset: &Dataset, attribute_index: usize, threshold: Option<f64>) -> Result<SplitCandidate> {
    let schema = dataset.schema();
    if attribute_index >= schema.len() {
        return Err(Error::InvalidArgument(format!(
            "attribute {attribute_index} out of range"
        )));
    }
    if attribute_index == schema.class_index() {
        return Err(Error::InvalidArgument("cannot split on the class attribute".into()));
    }
    let spec = schema.attribute(attribute_index);
    let n_branches = match (spec.is_numeric(), threshold) {
        (true, Some(t)) if t.is_finite() => 2,
        (true, _) => {
            return Err(Error::InvalidArgument(format!(
                "numeric attribute `{}` needs a finite threshold",
                spec.name
            )))
        }
        (false, None) => spec.values.len(),
        (false, Some(_)) => {
            return Err(Error::InvalidArgument(format!(
                "nominal attribute `{}` takes no threshold",
                spec.name
            )))
        }
    };
    let labels = dataset.labels()?;
    let mut table = vec![vec![0.0; schema.num_classes()]; n_branches];
    let mut missing = 0.0;
    for (instance, &class) in dataset.instances().iter().zip(&labels) {
        accumulate(
            spec,
            instance,
            attribute_index,
            threshold,
            class,
            instance.weight,
            &mut table,
            &mut missing,
        );
    }
    Ok(SplitCandidate::from_table(attribute_index, threshold, &table, missing))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn accumulate(
    spec: &AttributeSpec,
    instance: &Instance,
    attribute: usize,
    threshold: Option<f64>,
    class: usize,
    weight: f64,
    table: &mut [Vec<f64>],
    missing: &mut f64,
) {
    match branch_of(spec, instance.values[attribute], threshold) {
        Some(b) => table[b][class] += weight,
        None => *missing += weight,
    }
}

/// Best threshold for a numeric attribute among midpoints of consecutive
/// distinct known values. `items` holds `(value, class, weight)` of the
/// known-valued instances. Lower thresholds win ties.
pub(crate) fn best_numeric_split(
    attribute_index: usize,
    items: &mut [(f64, usize, f64)],
    missing_weight: f64,
    n_classes: usize,
) -> Option<SplitCandidate> {
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = vec![0.0; n_classes];
    for &(_, c, w) in items.iter() {
        total[c] += w;
    }
    let mut left = vec![0.0; n_classes];
    let mut best: Option<SplitCandidate> = None;
    for i in 0..items.len().saturating_sub(1) {
        let (v, c, w) = items[i];
        left[c] += w;
        let next = items[i + 1].0;
        if next <= v {
            continue;
        }
        let mut threshold = v + (next - v) / 2.0;
        if threshold >= next {
            threshold = v;
        }
        let right: Vec<f64> = total.iter().zip(&left).map(|(t, l)| (t - l).max(0.0)).collect();
        let candidate =
            SplitCandidate::from_table(attribute_index, Some(threshold), &[left.clone(), right], missing_weight);
        if candidate.is_valid() && best.is_none_or(|b| candidate.gain_ratio > b.gain_ratio + RATIO_EPS) {
            best = Some(candidate);
        }
    }
    best
}

/// Gain ratios closer than this are treated as tied.
pub(crate) const RATIO_EPS: f64 = 1e-12;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AttributeSpec, Dataset, Instance, Schema, Value};

/// The sixteen checklist symptoms: abbreviation and description.
pub const LD_ATTRIBUTES: [(&str, &str); 16] = [
    ("DR", "Difficulty with Reading"),
    ("DS", "Difficulty with Spelling"),
    ("DH", "Difficulty with Handwriting"),
    ("DWE", "Difficulty with Written Expression"),
    ("DBA", "Difficulty with Basic Arithmetic skills"),
    ("DHA", "Difficulty with Higher Arithmetic skills"),
    ("DA", "Difficulty with Attention"),
    ("ED", "Easily Distracted"),
    ("DM", "Difficulty with Memory"),
    ("LM", "Lack of Motivation"),
    ("DSS", "Difficulty with Study Skills"),
    ("DNS", "Does Not like School"),
    ("DLL", "Difficulty Learning a Language"),
    ("DLS", "Difficulty Learning a Subject"),
    ("STL", "Slow To Learn"),
    ("RG", "Repeated a Grade"),
];

/// Name of the class attribute.
pub const LD_CLASS: &str = "LD";

/// Sixteen binary `{Y,N}` symptoms followed by the `{Y,N}` class `LD`.
pub fn ld_checklist_schema() -> Schema {
    let attributes = LD_ATTRIBUTES
        .iter()
        .map(|(name, _)| AttributeSpec::nominal(*name, ["Y", "N"]))
        .chain(std::iter::once(AttributeSpec::nominal(LD_CLASS, ["Y", "N"])))
        .collect();
    Schema::new(attributes, LD_ATTRIBUTES.len()).expect("checklist schema is valid")
}

// Probability of a "Y" answer given LD=Y and LD=N respectively.
const SYMPTOM_RATES: [(f64, f64); 16] = [
    (0.85, 0.30),
    (0.70, 0.35),
    (0.55, 0.40),
    (0.80, 0.25),
    (0.60, 0.30),
    (0.65, 0.35),
    (0.50, 0.45),
    (0.55, 0.50),
    (0.60, 0.40),
    (0.45, 0.40),
    (0.90, 0.20),
    (0.50, 0.45),
    (0.55, 0.35),
    (0.75, 0.30),
    (0.85, 0.25),
    (0.40, 0.10),
];

/// Synthetic checklist answers with `n_negative` LD=N and `n_positive` LD=Y
/// children in shuffled order. Each non-class cell is blanked independently
/// with probability `missing_rate`.
pub fn synthetic_checklist(n_negative: usize, n_positive: usize, missing_rate: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<usize> = std::iter::repeat_n(1, n_negative)
        .chain(std::iter::repeat_n(0, n_positive))
        .collect();
    classes.shuffle(&mut rng);
    let instances = classes
        .into_iter()
        .map(|class| {
            let mut values: Vec<Value> = SYMPTOM_RATES
                .iter()
                .map(|&(p_pos, p_neg)| {
                    let p = if class == 0 { p_pos } else { p_neg };
                    if rng.gen::<f64>() < missing_rate {
                        Value::Missing
                    } else if rng.gen::<f64>() < p {
                        Value::Symbol(0)
                    } else {
                        Value::Symbol(1)
                    }
                })
                .collect();
            values.push(Value::Symbol(class));
            Instance::new(values)
        })
        .collect();
    Dataset::from_parts_unchecked("ld_checklist".into(), ld_checklist_schema(), instances)
}

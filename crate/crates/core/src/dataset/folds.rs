use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// Splits instance indices into `k` test folds.
///
/// The indices are shuffled with `seed`; when `stratified`, they are then
/// grouped by class (declaration order, missing classes last) and dealt
/// round-robin, so every fold receives either the floor or the ceiling of
/// its share of each class. Indices inside a fold are ascending.
pub fn fold_indices(dataset: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {k}")));
    }
    if k > dataset.len() {
        return Err(Error::InvalidArgument(format!(
            "{k} folds requested for {} instances",
            dataset.len()
        )));
    }
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    if stratified {
        let n_classes = dataset.schema().num_classes();
        // stable sort keeps the shuffled order within each class
        order.sort_by_key(|&i| dataset.class_of(i).unwrap_or(n_classes));
    }
    let mut folds = vec![Vec::new(); k];
    for (position, index) in order.into_iter().enumerate() {
        folds[position % k].push(index);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// `(train, test)` pairs for each fold.
pub fn folds(dataset: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<Vec<(Dataset, Dataset)>> {
    let tests = fold_indices(dataset, k, seed, stratified)?;
    let mut in_fold = vec![0; dataset.len()];
    for (f, fold) in tests.iter().enumerate() {
        for &i in fold {
            in_fold[i] = f;
        }
    }
    Ok(tests
        .iter()
        .enumerate()
        .map(|(f, test)| {
            let train: Vec<usize> = (0..dataset.len()).filter(|&i| in_fold[i] != f).collect();
            (dataset.subset(&train), dataset.subset(test))
        })
        .collect())
}

pub fn stratified_folds(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<(Dataset, Dataset)>> {
    folds(dataset, k, seed, true)
}

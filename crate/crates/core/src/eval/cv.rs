use super::{confusion, per_class_metrics, roc_area, EvaluationReport};
use crate::dataset::{fold_indices, Dataset};
use crate::error::Result;
use crate::learner::Learner;

/// One held-out prediction from a cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledPrediction {
    pub index: usize,
    pub fold: usize,
    pub actual: usize,
    pub predicted: usize,
    pub distribution: Vec<f64>,
}

/// Trains on each fold's complement and predicts the fold. Folds run on
/// separate threads; the result is ordered by instance index whatever the
/// completion order.
pub fn pooled_predictions(
    dataset: &Dataset,
    k: usize,
    seed: u64,
    learner: &dyn Learner,
    stratified: bool,
) -> Result<Vec<PooledPrediction>> {
    let labels = dataset.labels()?;
    let folds = fold_indices(dataset, k, seed, stratified)?;
    let mut fold_of = vec![0; dataset.len()];
    for (f, fold) in folds.iter().enumerate() {
        for &i in fold {
            fold_of[i] = f;
        }
    }
    let fold_of = &fold_of;
    let labels = &labels;
    let results: Vec<Result<Vec<PooledPrediction>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = folds
            .iter()
            .enumerate()
            .map(|(f, test)| {
                scope.spawn(move || {
                    let train: Vec<usize> = (0..dataset.len()).filter(|&i| fold_of[i] != f).collect();
                    let model = learner.train(&dataset.subset(&train))?;
                    test.iter()
                        .map(|&i| {
                            let p = model.predict(&dataset.instances()[i])?;
                            Ok(PooledPrediction {
                                index: i,
                                fold: f,
                                actual: labels[i],
                                predicted: p.class,
                                distribution: p.distribution,
                            })
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fold worker panicked"))
            .collect()
    });
    let mut pooled = Vec::with_capacity(dataset.len());
    for r in results {
        pooled.extend(r?);
    }
    pooled.sort_by_key(|p| p.index);
    Ok(pooled)
}

/// k-fold cross-validation with every held-out prediction pooled into a
/// single report. ROC areas use each prediction's class distribution as
/// the score; a class absent from the data gets no ROC area.
pub fn cross_validate(
    dataset: &Dataset,
    k: usize,
    seed: u64,
    learner: &dyn Learner,
    stratified: bool,
) -> Result<EvaluationReport> {
    let pooled = pooled_predictions(dataset, k, seed, learner, stratified)?;
    let classes = dataset.schema().class_values().to_vec();
    let actual: Vec<usize> = pooled.iter().map(|p| p.actual).collect();
    let predicted: Vec<usize> = pooled.iter().map(|p| p.predicted).collect();
    let mut report = per_class_metrics(&confusion(&actual, &predicted, &classes)?)?;
    for (c, metrics) in report.per_class.iter_mut().enumerate() {
        let scores: Vec<f64> = pooled.iter().map(|p| p.distribution[c]).collect();
        metrics.roc_area = roc_area(&scores, &actual, c).ok();
    }
    Ok(report)
}

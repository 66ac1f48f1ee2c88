use crate::error::{Error, Result};

/// Area under the ROC curve for `positive`: the probability that a random
/// positive instance scores above a random negative one, ties counting one
/// half. Computed from average ranks (Mann-Whitney U).
pub fn roc_area(scores: &[f64], actual: &[usize], positive: usize) -> Result<f64> {
    if scores.len() != actual.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores for {} labels",
            scores.len(),
            actual.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("scores must be finite".into()));
    }
    let n_pos = actual.iter().filter(|&&a| a == positive).count();
    let n_neg = actual.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::InvalidArgument(
            "ROC area needs both positive and negative instances".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut positive_rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start..end (1-based start+1..=end) share their average
        let average = (start + 1 + end) as f64 / 2.0;
        let hits = order[start..end].iter().filter(|&&i| actual[i] == positive).count();
        positive_rank_sum += average * hits as f64;
        start = end;
    }
    let n_pos = n_pos as f64;
    let u = positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0;
    Ok(u / (n_pos * n_neg as f64))
}

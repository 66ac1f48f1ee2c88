//! Confusion matrices, per-class metrics, ROC area and cross-validation.

mod cv;
mod roc;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::cv::{cross_validate, pooled_predictions, PooledPrediction};
pub use self::roc::roc_area;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    /// `counts[actual][predicted]`
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != classes.len() || counts.iter().any(|r| r.len() != classes.len()) {
            return Err(Error::InvalidArgument(
                "confusion matrix must be square over the classes".into(),
            ));
        }
        Ok(Self { classes, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|c| self.counts[c][c]).sum()
    }
}

/// Tallies `(actual, predicted)` class-index pairs.
pub fn confusion(actual: &[usize], predicted: &[usize], classes: &[String]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::InvalidArgument(format!(
            "{} actual labels but {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    let n = classes.len();
    let mut counts = vec![vec![0u64; n]; n];
    for (&a, &p) in actual.iter().zip(predicted) {
        if a >= n || p >= n {
            return Err(Error::UnknownLabel(format!("#{}", a.max(p))));
        }
        counts[a][p] += 1;
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
    })
}

/// Same as [`confusion`] for string labels.
pub fn confusion_from_labels(actual: &[&str], predicted: &[&str], classes: &[String]) -> Result<ConfusionMatrix> {
    let index = |l: &&str| {
        classes
            .iter()
            .position(|c| c == l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    };
    let a: Vec<usize> = actual.iter().map(index).collect::<Result<_>>()?;
    let p: Vec<usize> = predicted.iter().map(index).collect::<Result<_>>()?;
    confusion(&a, &p, classes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Needs scores, so absent when only a confusion matrix was available.
    pub roc_area: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub matrix: ConfusionMatrix,
    pub per_class: Vec<ClassMetrics>,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One-vs-rest metrics for every class, plus overall accuracy.
///
/// Zero denominators give 0 (precision of a never-predicted class, FP rate
/// when there are no negatives).
pub fn per_class_metrics(matrix: &ConfusionMatrix) -> Result<EvaluationReport> {
    let total = matrix.total();
    if total == 0 {
        return Err(Error::InvalidArgument("confusion matrix is empty".into()));
    }
    let n = matrix.classes.len();
    let per_class = (0..n)
        .map(|c| {
            let tp = matrix.counts[c][c];
            let row: u64 = matrix.counts[c].iter().sum();
            let col: u64 = (0..n).map(|r| matrix.counts[r][c]).sum();
            let fn_ = row - tp;
            let fp = col - tp;
            let tn = total - tp - fn_ - fp;
            let recall = ratio(tp, tp + fn_);
            let precision = ratio(tp, tp + fp);
            let f_measure = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                class: matrix.classes[c].clone(),
                tp_rate: recall,
                fp_rate: ratio(fp, fp + tn),
                precision,
                recall,
                f_measure,
                roc_area: None,
            }
        })
        .collect();
    Ok(EvaluationReport {
        accuracy: ratio(matrix.correct(), total),
        matrix: matrix.clone(),
        per_class,
    })
}

impl EvaluationReport {
    pub fn error_rate(&self) -> f64 {
        1.0 - self.accuracy
    }

    /// The two classified-instances lines, percentages with two decimals.
    pub fn summary_lines(&self) -> [String; 2] {
        let total = self.matrix.total();
        let correct = self.matrix.correct();
        let pct = |n: u64| crate::cluster::format_percentage(n as usize, total as usize);
        [
            format!("Correctly Classified Instances {correct} Nos. {}", pct(correct)),
            format!(
                "Incorrectly Classified Instances {} Nos. {}",
                total - correct,
                pct(total - correct)
            ),
        ]
    }

    /// Summary lines, the per-class metric table and the confusion matrix.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in self.summary_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push('\n');
        out.push_str("TP Rate  FP Rate  Precision  Recall  F-Measure  ROC Area  Class\n");
        for m in &self.per_class {
            let roc = m.roc_area.map_or_else(|| "?".to_string(), |a| format!("{a:.3}"));
            let _ = writeln!(
                out,
                "{:>7.3}  {:>7.3}  {:>9.3}  {:>6.3}  {:>9.3}  {:>8}  {}",
                m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure, roc, m.class
            );
        }
        out.push_str("\nConfusion Matrix\n");
        let letters: Vec<String> = (0..self.matrix.classes.len()).map(column_letter).collect();
        let width = self
            .matrix
            .counts
            .iter()
            .flatten()
            .map(|c| c.to_string().len())
            .chain(letters.iter().map(String::len))
            .max()
            .unwrap_or(1)
            + 1;
        let header: String = letters.iter().map(|l| format!("{l:>width$}")).collect();
        let _ = writeln!(out, "{header}   <-- classified as");
        for (c, row) in self.matrix.counts.iter().enumerate() {
            let cells: String = row.iter().map(|v| format!("{v:>width$}")).collect();
            let _ = writeln!(out, "{cells} | {} = {}", letters[c], self.matrix.classes[c]);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per class in table order; an empty `roc_area` cell means unknown.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,tp_rate,fp_rate,precision,recall,f_measure,roc_area\n");
        for m in &self.per_class {
            let class = if m.class.contains([',', '"', '\n']) {
                format!("\"{}\"", m.class.replace('"', "\"\""))
            } else {
                m.class.clone()
            };
            let roc = m.roc_area.map(|a| a.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{class},{},{},{},{},{},{roc}",
                m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure
            );
        }
        out
    }
}

fn column_letter(i: usize) -> String {
    let mut n = i;
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

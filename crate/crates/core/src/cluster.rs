//! K-means over the non-class attributes.
//!
//! Instances are encoded as real vectors: numeric attributes as-is, binary
//! attributes as one 0/1 indicator (of the first declared value, or the
//! numeric value itself when both symbols are numbers), and other nominal
//! attributes as one indicator per declared value. Centroids are plain means
//! of those vectors, so on all-binary data squared distance is Hamming
//! distance.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::impute::argmax_first;
use crate::dataset::{AttributeKind, AttributeSpec, Dataset, Instance, Schema, Value};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERATIONS: usize = 100;
pub const DEFAULT_RESTARTS: usize = 10;

/// Squared Euclidean distance.
pub fn distance2(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(sq_dist(a, b))
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq)]
enum Column {
    Numeric(usize),
    /// `(attribute, symbol)` → 1 when the cell holds `symbol`.
    Indicator(usize, usize),
    /// Binary attribute whose two symbols are numbers.
    NumericSymbols(usize, [f64; 2]),
}

/// Maps instances of a schema to real vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoder {
    columns: Vec<Column>,
    names: Vec<String>,
}

impl Encoder {
    pub fn new(schema: &Schema) -> Self {
        let mut columns = Vec::new();
        let mut names = Vec::new();
        for a in schema.feature_indices() {
            let spec: &AttributeSpec = schema.attribute(a);
            match spec.kind {
                AttributeKind::Numeric => {
                    columns.push(Column::Numeric(a));
                    names.push(spec.name.clone());
                }
                AttributeKind::Binary => {
                    let parsed: Vec<Option<f64>> = spec.values.iter().map(|v| v.parse().ok()).collect();
                    match (parsed[0], parsed[1]) {
                        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
                            columns.push(Column::NumericSymbols(a, [x, y]))
                        }
                        _ => columns.push(Column::Indicator(a, 0)),
                    }
                    names.push(spec.name.clone());
                }
                AttributeKind::Nominal => {
                    for (s, v) in spec.values.iter().enumerate() {
                        columns.push(Column::Indicator(a, s));
                        names.push(format!("{}={v}", spec.name));
                    }
                }
            }
        }
        Self { columns, names }
    }

    pub fn dimension(&self) -> usize {
        self.columns.len()
    }

    /// Row labels, one per encoded dimension.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Fails on missing values.
    pub fn encode(&self, instance: &Instance) -> Result<Vec<f64>> {
        self.columns
            .iter()
            .map(|column| {
                let (attribute, value) = match column {
                    Column::Numeric(a) | Column::Indicator(a, _) | Column::NumericSymbols(a, _) => {
                        (*a, instance.values[*a])
                    }
                };
                match (column, value) {
                    (Column::Numeric(_), Value::Number(x)) => Ok(x),
                    (Column::Indicator(_, s), Value::Symbol(v)) => Ok(if v == *s { 1.0 } else { 0.0 }),
                    (Column::NumericSymbols(_, xs), Value::Symbol(v)) if v < 2 => Ok(xs[v]),
                    (_, Value::Missing) => Err(Error::InvalidArgument(format!(
                        "missing value in attribute {attribute}; impute before clustering"
                    ))),
                    _ => Err(Error::InvalidArgument(format!(
                        "value {value:?} does not fit attribute {attribute}"
                    ))),
                }
            })
            .collect()
    }

    fn encode_all(&self, dataset: &Dataset) -> Result<Vec<Vec<f64>>> {
        dataset
            .instances()
            .iter()
            .enumerate()
            .map(|(i, inst)| {
                self.encode(inst).map_err(|e| Error::Instance {
                    index: i,
                    message: e.to_string(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    schema: Schema,
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub wcss: f64,
    /// Assignment passes performed.
    pub iterations: usize,
    pub seed: u64,
    /// Within-cluster sum of squares after each centroid update.
    pub wcss_history: Vec<f64>,
}

impl ClusterModel {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn encoder(&self) -> Encoder {
        Encoder::new(&self.schema)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// Nearest centroid for a new instance (ties to the lower index).
    pub fn assign(&self, instance: &Instance) -> Result<usize> {
        let x = self.encoder().encode(instance)?;
        Ok(nearest(&x, &self.centroids))
    }
}

fn nearest(x: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(x, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn wcss(points: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| sq_dist(p, &centroids[a]))
        .sum()
}

fn means(points: &[Vec<f64>], assignments: &[usize], k: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &a) in points.iter().zip(assignments) {
        counts[a] += 1;
        for (s, x) in sums[a].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (s, &n) in sums.iter_mut().zip(&counts) {
        if n > 0 {
            for v in s.iter_mut() {
                *v /= n as f64;
            }
        }
    }
    (sums, counts)
}

/// Lloyd iterations from `seed`-chosen distinct instances as initial
/// centres, best of [`DEFAULT_RESTARTS`] starts. See [`kmeans_fit_restarts`].
pub fn kmeans_fit(dataset: &Dataset, k: usize, seed: u64, max_iter: usize) -> Result<ClusterModel> {
    kmeans_fit_restarts(dataset, k, seed, max_iter, DEFAULT_RESTARTS)
}

/// Runs Lloyd iterations from `restarts` random starts drawn from one
/// `seed`-ed stream and keeps the run with the lowest WCSS (earliest on
/// ties). Each start is `k` distinct instances.
///
/// A run stops once an assignment pass changes nothing, a centroid update
/// leaves every centroid where it was, or `max_iter` passes have run. The
/// dataset must have no missing non-class values; the class attribute is
/// ignored.
pub fn kmeans_fit_restarts(
    dataset: &Dataset,
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<ClusterModel> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("need at least one start".into()));
    }
    let encoder = Encoder::new(dataset.schema());
    let points = encoder.encode_all(dataset)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ClusterModel> = None;
    for _ in 0..restarts {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.shuffle(&mut rng);
        let mut initial: Vec<Vec<f64>> = Vec::with_capacity(k);
        for i in order {
            if initial.len() == k {
                break;
            }
            if !initial.contains(&points[i]) {
                initial.push(points[i].clone());
            }
        }
        if initial.len() < k {
            return Err(Error::InvalidArgument(format!(
                "k = {k} exceeds the {} distinct instances",
                initial.len()
            )));
        }
        let run = lloyd(dataset.schema(), &points, initial, max_iter, seed)?;
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one start"))
}

/// Lloyd iterations from caller-supplied centroids.
pub fn kmeans_fit_from(dataset: &Dataset, centroids: Vec<Vec<f64>>, max_iter: usize) -> Result<ClusterModel> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if centroids.is_empty() {
        return Err(Error::InvalidArgument("no initial centroids".into()));
    }
    let encoder = Encoder::new(dataset.schema());
    if let Some(c) = centroids.iter().find(|c| c.len() != encoder.dimension()) {
        return Err(Error::InvalidArgument(format!(
            "centroid has dimension {}, data has {}",
            c.len(),
            encoder.dimension()
        )));
    }
    let points = encoder.encode_all(dataset)?;
    lloyd(dataset.schema(), &points, centroids, max_iter, 0)
}

fn lloyd(
    schema: &Schema,
    points: &[Vec<f64>],
    mut centroids: Vec<Vec<f64>>,
    max_iter: usize,
    seed: u64,
) -> Result<ClusterModel> {
    let k = centroids.len();
    if k > points.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds {} instances",
            points.len()
        )));
    }
    let dim = centroids[0].len();
    let max_iter = max_iter.max(1);
    let mut previous: Option<Vec<usize>> = None;
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut assignments: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if previous.as_ref() == Some(&assignments) {
            break;
        }
        let (mut updated, mut counts) = means(points, &assignments, k, dim);
        repair_empty(points, &mut assignments, &mut updated, &mut counts);
        let settled = updated == centroids;
        centroids = updated;
        history.push(wcss(points, &assignments, &centroids));
        previous = Some(assignments);
        if settled || iterations >= max_iter {
            break;
        }
    }
    let assignments = previous.expect("at least one pass ran");
    Ok(ClusterModel {
        schema: schema.clone(),
        k,
        wcss: wcss(points, &assignments, &centroids),
        centroids,
        assignments,
        iterations,
        seed,
        wcss_history: history,
    })
}

/// Gives each empty cluster the instance farthest from its own centroid,
/// taken from a cluster that keeps at least one member.
fn repair_empty(points: &[Vec<f64>], assignments: &mut [usize], centroids: &mut [Vec<f64>], counts: &mut [usize]) {
    let dim = centroids.first().map_or(0, Vec::len);
    for empty in 0..counts.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut far: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let a = assignments[i];
            if counts[a] < 2 {
                continue;
            }
            let d = sq_dist(p, &centroids[a]);
            if far.is_none_or(|(_, fd)| d > fd) {
                far = Some((i, d));
            }
        }
        let Some((i, _)) = far else { return };
        let donor = assignments[i];
        assignments[i] = empty;
        counts[donor] -= 1;
        counts[empty] = 1;
        centroids[empty] = points[i].clone();
        let mut sum = vec![0.0; dim];
        for (p, &a) in points.iter().zip(assignments.iter()) {
            if a == donor {
                for (s, x) in sum.iter_mut().zip(p) {
                    *s += x;
                }
            }
        }
        centroids[donor] = sum.into_iter().map(|s| s / counts[donor] as f64).collect();
    }
}

/// Majority class per cluster and the cluster × class contingency counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterClassMap {
    pub labels: Vec<usize>,
    pub contingency: Vec<Vec<f64>>,
    pub sizes: Vec<usize>,
}

impl ClusterClassMap {
    /// `Clustered Instances LD = N (cluster 0) - 94 Nos. - 75.20 %`, one per cluster.
    pub fn lines(&self, schema: &Schema) -> Vec<String> {
        let total: usize = self.sizes.iter().sum();
        self.sizes
            .iter()
            .zip(&self.labels)
            .enumerate()
            .map(|(c, (&n, &label))| {
                format!(
                    "Clustered Instances {} = {} (cluster {c}) - {n} Nos. - {}",
                    schema.class_attribute().name,
                    schema.class_label(label),
                    format_percentage(n, total)
                )
            })
            .collect()
    }
}

/// `count / total` as a percentage with two decimals: `"75.20 %"`.
pub fn format_percentage(count: usize, total: usize) -> String {
    let pct = if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    };
    format!("{pct:.2} %")
}

/// Labels each cluster with the majority class of its members (ties go to
/// the earlier class; instances without a class are ignored).
pub fn map_clusters_to_classes(model: &ClusterModel, dataset: &Dataset) -> Result<ClusterClassMap> {
    if dataset.len() != model.assignments.len() {
        return Err(Error::InvalidArgument(format!(
            "model covers {} instances, dataset has {}",
            model.assignments.len(),
            dataset.len()
        )));
    }
    let n_classes = dataset.schema().num_classes();
    let mut contingency = vec![vec![0.0; n_classes]; model.k];
    for (i, &c) in model.assignments.iter().enumerate() {
        if let Some(class) = dataset.class_of(i) {
            contingency[c][class] += 1.0;
        }
    }
    Ok(ClusterClassMap {
        labels: contingency.iter().map(|row| argmax_first(row)).collect(),
        contingency,
        sizes: model.cluster_sizes(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub name: String,
    pub full: f64,
    pub per_cluster: Vec<f64>,
}

/// Per-dimension means over the full data and within each cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterProfile {
    pub rows: Vec<ProfileRow>,
    pub sizes: Vec<usize>,
    pub total: usize,
    pub iterations: usize,
    pub wcss: f64,
}

pub fn cluster_profile(model: &ClusterModel, dataset: &Dataset) -> Result<ClusterProfile> {
    if dataset.len() != model.assignments.len() {
        return Err(Error::InvalidArgument(format!(
            "model covers {} instances, dataset has {}",
            model.assignments.len(),
            dataset.len()
        )));
    }
    let encoder = Encoder::new(dataset.schema());
    let points = encoder.encode_all(dataset)?;
    let dim = encoder.dimension();
    let (cluster_means, sizes) = means(&points, &model.assignments, model.k, dim);
    let (full, _) = means(&points, &vec![0; points.len()], 1, dim);
    let rows = encoder
        .names()
        .iter()
        .enumerate()
        .map(|(j, name)| ProfileRow {
            name: name.clone(),
            full: full[0][j],
            per_cluster: cluster_means.iter().map(|m| m[j]).collect(),
        })
        .collect();
    Ok(ClusterProfile {
        rows,
        sizes,
        total: points.len(),
        iterations: model.iterations,
        wcss: model.wcss,
    })
}

impl ClusterProfile {
    fn headers(&self) -> Vec<String> {
        let mut h = vec!["Attribute".to_string(), format!("Full Data ({})", self.total)];
        h.extend(self.sizes.iter().enumerate().map(|(c, n)| format!("Cluster {c} ({n})")));
        h
    }

    /// Aligned table: attribute, full-data mean, one column per cluster,
    /// then the iteration count and within-cluster sum of squared errors.
    pub fn render_text(&self) -> String {
        let headers = self.headers();
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![r.name.clone(), format!("{:.3}", r.full)];
                cells.extend(r.per_cluster.iter().map(|m| format!("{m:.3}")));
                cells
            })
            .collect();
        let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let fmt_row = |cells: &[String], out: &mut String| {
            let line: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        };
        fmt_row(&headers, &mut out);
        for row in &body {
            fmt_row(row, &mut out);
        }
        let _ = writeln!(out, "No. of iterations  {}", self.iterations);
        let _ = writeln!(out, "Within cluster sum of squared errors  {:.3}", self.wcss);
        out
    }

    pub fn to_csv(&self) -> String {
        let quote = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::new();
        out.push_str(&self.headers().iter().map(|h| quote(h)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for r in &self.rows {
            let mut cells = vec![quote(&r.name), format!("{}", r.full)];
            cells.extend(r.per_cluster.iter().map(|m| format!("{m}")));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

// ---- JSON ----------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ClusterDocument {
    format_version: u32,
    attributes: Vec<AttributeSpec>,
    class_attribute: String,
    k: usize,
    seed: u64,
    iterations: usize,
    wcss: f64,
    wcss_history: Vec<f64>,
    dimensions: Vec<String>,
    centroids: Vec<Vec<f64>>,
    assignments: Vec<usize>,
}

impl ClusterModel {
    /// Cluster-model document, version 1: schema, `k`, `seed`, `iterations`,
    /// `wcss`, `dimensions` (encoded column names), `centroids` and
    /// `assignments`.
    pub fn to_json(&self) -> Result<String> {
        let doc = ClusterDocument {
            format_version: 1,
            attributes: self.schema.attributes().to_vec(),
            class_attribute: self.schema.class_attribute().name.clone(),
            k: self.k,
            seed: self.seed,
            iterations: self.iterations,
            wcss: self.wcss,
            wcss_history: self.wcss_history.clone(),
            dimensions: self.encoder().names().to_vec(),
            centroids: self.centroids.clone(),
            assignments: self.assignments.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ClusterDocument = serde_json::from_str(text)?;
        if doc.format_version != 1 {
            return Err(Error::Version(doc.format_version));
        }
        let class_index = doc
            .attributes
            .iter()
            .position(|a| a.name == doc.class_attribute)
            .ok_or_else(|| Error::UnknownAttribute(doc.class_attribute.clone()))?;
        let schema = Schema::new(doc.attributes, class_index)?;
        let dim = Encoder::new(&schema).dimension();
        if doc.centroids.len() != doc.k
            || doc.centroids.iter().any(|c| c.len() != dim)
            || doc.assignments.iter().any(|&a| a >= doc.k)
        {
            return Err(Error::Schema(
                "centroids or assignments do not match k and the schema".into(),
            ));
        }
        Ok(Self {
            schema,
            k: doc.k,
            centroids: doc.centroids,
            assignments: doc.assignments,
            wcss: doc.wcss,
            iterations: doc.iterations,
            seed: doc.seed,
            wcss_history: doc.wcss_history,
        })
    }
}

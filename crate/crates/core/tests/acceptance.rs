//! End-to-end acceptance checks, one test per criterion. Each prints a
//! `PASS`/`FAIL` line and then asserts.

mod common;

use std::time::{Duration, Instant};

use common::*;
use ldscreen::cluster::{format_percentage, kmeans_fit, kmeans_fit_from, map_clusters_to_classes, ClusterModel};
use ldscreen::dataset::{
    fold_indices, impute_missing, parse_arff, synthetic_checklist, write_arff, AttributeSpec, Dataset, Instance,
    Schema, Value,
};
use ldscreen::eval::{
    confusion, cross_validate, per_class_metrics, pooled_predictions, roc_area, ConfusionMatrix, EvaluationReport,
};
use ldscreen::learner::TreeLearner;
use ldscreen::rules::{extract_rules, rules_classify, RuleSet};
use ldscreen::tree::{build_tree, evaluate_split, DecisionTreeModel, TreeConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, started: Instant, limit: Duration, failures: &[String]) {
    let elapsed = started.elapsed();
    let ok = failures.is_empty() && elapsed < limit;
    println!(
        "criterion {id:>2} {:<4} {title} ({:.3} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id}: {} failure(s)", failures.len());
    assert!(elapsed < limit, "criterion {id}: took {elapsed:?}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn criterion_01_table_reproduction() {
    let started = Instant::now();
    let classes = vec!["N".to_string(), "Y".to_string()];
    let matrix = ConfusionMatrix::from_counts(classes, vec![vec![79, 15], vec![13, 18]]).unwrap();
    let r = per_class_metrics(&matrix).unwrap();
    let published = [
        ("N", [0.840, 0.419, 0.859, 0.840, 0.849]),
        ("Y", [0.581, 0.160, 0.545, 0.581, 0.563]),
    ];
    let names = ["TP rate", "FP rate", "precision", "recall", "F-measure"];
    let mut failures = Vec::new();
    // 0.5625 sits exactly on the rounding boundary of 0.563
    let tol = 0.0005 + 1e-9;
    for ((class, expected), m) in published.iter().zip(&r.per_class) {
        let got = [m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure];
        for ((name, e), g) in names.iter().zip(expected).zip(got) {
            if (e - g).abs() > tol {
                failures.push(format!("{class} {name}: {g} vs {e}"));
            }
        }
        let f = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        if (f - m.f_measure).abs() > 1e-12 {
            failures.push(format!("{class}: F-measure identity"));
        }
    }
    if (r.accuracy - 0.776).abs() > tol || (r.error_rate() - 0.224).abs() > tol {
        failures.push(format!("accuracy {} / error {}", r.accuracy, r.error_rate()));
    }
    let lines = r.summary_lines();
    if lines[0] != "Correctly Classified Instances 97 Nos. 77.60 %"
        || lines[1] != "Incorrectly Classified Instances 28 Nos. 22.40 %"
    {
        failures.push(format!("summary lines {lines:?}"));
    }

    // ROC area needs per-instance scores, which the matrix does not carry.
    // Scoring with the hard labels gives the matrix's own AUC; the published
    // 0.719 cannot be reached from counts alone.
    let mut actual = Vec::new();
    let mut hard = Vec::new();
    for (a, row) in [[79usize, 15], [13, 18]].iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            actual.extend(std::iter::repeat_n(a, n));
            hard.extend(std::iter::repeat_n(p as f64, n));
        }
    }
    let auc_y = roc_area(&hard, &actual, 1).unwrap();
    let flipped: Vec<f64> = hard.iter().map(|s| 1.0 - s).collect();
    let auc_n = roc_area(&flipped, &actual, 0).unwrap();
    let closed_form = (79.0 / 94.0 + 18.0 / 31.0) / 2.0;
    if (auc_y - closed_form).abs() > 1e-12 || (auc_n - auc_y).abs() > 1e-12 {
        failures.push(format!("hard-label AUC {auc_y} / {auc_n}, expected {closed_form}"));
    }
    println!(
        "criterion  1 note: 10 of 12 table entries derive from the matrix; ROC Area is not derivable \
         (hard-label AUC {auc_y:.4} for both classes, table value 0.719)"
    );
    report(
        1,
        "metric identities on [[79,15],[13,18]]",
        started,
        Duration::from_secs(1),
        &failures,
    );
}

#[test]
fn criterion_02_percentage_lines() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for (n, expected) in [(94, "75.20 %"), (31, "24.80 %")] {
        let got = format_percentage(n, 125);
        if got != expected {
            failures.push(format!("{n}/125 -> {got}"));
        }
    }
    // two well-separated groups of 94 and 31 through the real clustering path
    let schema = Schema::new(
        vec![AttributeSpec::numeric("x"), AttributeSpec::nominal("LD", ["N", "Y"])],
        1,
    )
    .unwrap();
    let rows = (0..125)
        .map(|i| {
            let (x, c) = if i < 94 {
                (i as f64 * 0.01, 0)
            } else {
                (100.0 + i as f64 * 0.01, 1)
            };
            Instance::new(vec![Value::Number(x), Value::Symbol(c)])
        })
        .collect();
    let d = Dataset::new("groups", schema, rows).unwrap();
    let m = kmeans_fit(&d, 2, 7, 100).unwrap();
    let map = map_clusters_to_classes(&m, &d).unwrap();
    let mut lines = map.lines(d.schema());
    lines.sort();
    let expect_n = "LD = N (cluster";
    if !(lines
        .iter()
        .any(|l| l.contains(expect_n) && l.ends_with("- 94 Nos. - 75.20 %"))
        && lines
            .iter()
            .any(|l| l.contains("LD = Y") && l.ends_with("- 31 Nos. - 24.80 %")))
    {
        failures.push(format!("cluster lines {lines:?}"));
    }
    report(
        2,
        "cluster size percentages 94/31 of 125",
        started,
        Duration::from_secs(1),
        &failures,
    );
}

/// Direct recomputation of IG, IV and their ratio from raw weighted counts.
fn split_oracle(d: &Dataset, attr: usize, threshold: Option<f64>) -> (f64, f64, f64, usize) {
    let schema = d.schema();
    let n_branches = if threshold.is_some() {
        2
    } else {
        schema.attribute(attr).values.len()
    };
    let n_classes = schema.num_classes();
    let mut table = vec![vec![0.0f64; n_classes]; n_branches];
    let mut missing = 0.0;
    for (i, inst) in d.instances().iter().enumerate() {
        let class = d.class_of(i).unwrap();
        let branch = match (inst.values[attr], threshold) {
            (Value::Missing, _) => None,
            (Value::Number(x), Some(t)) => Some(usize::from(x > t)),
            (Value::Symbol(s), None) => Some(s),
            _ => unreachable!(),
        };
        match branch {
            Some(b) => table[b][class] += inst.weight,
            None => missing += inst.weight,
        }
    }
    let h = |counts: &[f64]| -> f64 {
        let t: f64 = counts.iter().sum();
        if t <= 0.0 {
            return 0.0;
        }
        counts
            .iter()
            .filter(|&&c| c > 0.0)
            .map(|&c| -(c / t) * (c / t).ln())
            .sum::<f64>()
            / std::f64::consts::LN_2
    };
    let sizes: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let known: f64 = sizes.iter().sum();
    let parent: Vec<f64> = (0..n_classes).map(|c| table.iter().map(|r| r[c]).sum()).collect();
    let nonempty = sizes.iter().filter(|&&s| s > 0.0).count();
    if known <= 0.0 {
        return (0.0, 0.0, 0.0, nonempty);
    }
    let remainder: f64 = table.iter().zip(&sizes).map(|(r, s)| s / known * h(r)).sum();
    let ig = known / (known + missing) * (h(&parent) - remainder).max(0.0);
    let iv = h(&sizes);
    let igr = if nonempty >= 2 { ig / iv } else { 0.0 };
    (ig, iv, igr, nonempty)
}

#[test]
fn criterion_03_split_oracle() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let d = mixed_dataset(&mut r, 50, 6, 0.15, seed % 2 == 1);
        for attr in d.schema().feature_indices() {
            let thresholds: Vec<Option<f64>> = if d.schema().attribute(attr).is_numeric() {
                (0..3).map(|_| Some(r.gen_range(-0.5..3.0f64))).collect()
            } else {
                vec![None]
            };
            for t in thresholds {
                let c = evaluate_split(&d, attr, t).unwrap();
                let (ig, iv, igr, nonempty) = split_oracle(&d, attr, t);
                checked += 1;
                let tag = format!("seed {seed} attr {attr} t {t:?}");
                if (c.info_gain - ig).abs() > 1e-9 || (c.intrinsic_value - iv).abs() > 1e-9 {
                    failures.push(format!(
                        "{tag}: IG {} vs {ig}, IV {} vs {iv}",
                        c.info_gain, c.intrinsic_value
                    ));
                }
                if c.is_valid() != (nonempty >= 2) {
                    failures.push(format!(
                        "{tag}: validity {} with {nonempty} non-empty branches",
                        c.is_valid()
                    ));
                }
                if (c.gain_ratio - igr).abs() > 1e-9 {
                    failures.push(format!("{tag}: IGR {} vs {igr}", c.gain_ratio));
                }
            }
        }
    }
    assert!(checked >= 200);
    report(
        3,
        "IG / IV / IGR against direct recomputation, 200 datasets",
        started,
        Duration::from_secs(10),
        &failures,
    );
}

#[test]
fn criterion_04_tree_rules_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let inputs = enumerate_inputs(10);
    for seed in 0..20u64 {
        let mut r = rng(1000 + seed);
        let n = r.gen_range(40..300);
        let d = noise_dataset(&mut r, 10, n);
        let config = TreeConfig {
            min_leaf_weight: r.gen_range(1..4) as f64,
            ..TreeConfig::unpruned()
        };
        let model = build_tree(&d, &config).unwrap();
        let rules = extract_rules(&model);
        if rules.rules().len() != model.leaf_count() {
            failures.push(format!(
                "seed {seed}: {} rules for {} leaves",
                rules.rules().len(),
                model.leaf_count()
            ));
        }
        let differ = inputs
            .iter()
            .filter(|x| rules_classify(&rules, x) != model.classify(x).unwrap().class)
            .count();
        if differ > 0 {
            failures.push(format!("seed {seed}: {differ} of 1024 inputs disagree"));
        }
    }
    report(
        4,
        "rules_classify == classify on 2^10 inputs, 20 trees",
        started,
        Duration::from_secs(30),
        &failures,
    );
}

#[test]
fn criterion_05_planted_rule_recovery() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let inputs = enumerate_inputs(8);
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let rule = Planted::random_visible(&mut r, 8, 3);
        let d = planted_dataset(&mut r, &rule, 8, 500);
        let model = build_tree(&d, &TreeConfig::unpruned()).unwrap();
        let wrong = inputs
            .iter()
            .enumerate()
            .filter(|(code, x)| {
                let bits: Vec<usize> = (0..8).map(|j| (code >> j) & 1).collect();
                model.classify(x).unwrap().class != rule.label(&bits)
            })
            .count();
        if wrong > 0 {
            failures.push(format!("seed {seed}: {wrong} of 256 inputs wrong for {rule:?}"));
        }
    }
    report(
        5,
        "hidden depth<=3 rules recovered on all 2^8 inputs, 20 seeds",
        started,
        Duration::from_secs(30),
        &failures,
    );
}

fn binary_points_dataset(points: &[Vec<u8>]) -> Dataset {
    let dim = points[0].len();
    let mut attributes: Vec<AttributeSpec> = (0..dim)
        .map(|j| AttributeSpec::nominal(format!("b{j}"), ["0", "1"]))
        .collect();
    attributes.push(AttributeSpec::nominal("group", ["a", "b"]));
    let schema = Schema::new(attributes, dim).unwrap();
    let rows = points
        .iter()
        .map(|p| {
            let mut v: Vec<Value> = p.iter().map(|&b| Value::Symbol(b as usize)).collect();
            v.push(Value::Missing);
            Instance::new(v)
        })
        .collect();
    Dataset::new("planted", schema, rows).unwrap()
}

/// Minimum WCSS over every split into two non-empty groups, with the minimiser.
fn best_two_partition(points: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = points.len();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 1..(1u32 << (n - 1)) {
        let side: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
        let mut total = 0.0;
        for g in 0..2 {
            let members: Vec<&Vec<f64>> = points
                .iter()
                .zip(&side)
                .filter(|(_, &s)| s == g)
                .map(|(p, _)| p)
                .collect();
            let dim = points[0].len();
            let mean: Vec<f64> = (0..dim)
                .map(|j| members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64)
                .collect();
            total += members
                .iter()
                .map(|p| p.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
                .sum::<f64>();
        }
        if total < best.0 {
            best = (total, side);
        }
    }
    best
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

fn check_kmeans_run(m: &ClusterModel, d: &Dataset, tag: &str, failures: &mut Vec<String>) {
    if m.wcss_history.windows(2).any(|w| w[1] > w[0] + 1e-9) {
        failures.push(format!("{tag}: WCSS increased {:?}", m.wcss_history));
    }
    let again = kmeans_fit_from(d, m.centroids.clone(), 100).unwrap();
    if again.assignments != m.assignments || again.centroids != m.centroids || again.iterations != 1 {
        failures.push(format!(
            "{tag}: refit from final centroids moved (iterations {})",
            again.iterations
        ));
    }
}

#[test]
fn criterion_06_kmeans_properties() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // monotonicity and idempotence on general mixed data
    for seed in 0..50u64 {
        let mut r = rng(2000 + seed);
        let d = mixed_dataset(&mut r, 60, 5, 0.0, false);
        let k = r.gen_range(1..=4);
        match kmeans_fit(&d, k, seed, 100) {
            Ok(m) => check_kmeans_run(&m, &d, &format!("mixed seed {seed} k {k}"), &mut failures),
            Err(_) => continue, // fewer distinct rows than k
        }
    }
    // planted two-group binary data against the exhaustive minimiser
    for seed in 0..50u64 {
        let mut r = rng(3000 + seed);
        let mut points: Vec<Vec<u8>> = Vec::new();
        for base in [0u8, 1] {
            for _ in 0..3 {
                let mut p = vec![base; 8];
                if r.gen_bool(0.7) {
                    let j = r.gen_range(0..8);
                    p[j] = 1 - base;
                }
                points.push(p);
            }
        }
        points.shuffle(&mut r);
        let d = binary_points_dataset(&points);
        let encoded: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|&b| b as f64).collect()).collect();
        let (min_wcss, best) = best_two_partition(&encoded);
        let planted: Vec<usize> = points
            .iter()
            .map(|p| usize::from(p.iter().filter(|&&b| b == 1).count() > 4))
            .collect();
        let m = kmeans_fit(&d, 2, seed, 100).unwrap();
        let tag = format!("planted seed {seed}");
        if !same_partition(&m.assignments, &best) || !same_partition(&best, &planted) {
            failures.push(format!("{tag}: partition {:?}, minimiser {best:?}", m.assignments));
        }
        if (m.wcss - min_wcss).abs() > 1e-9 {
            failures.push(format!("{tag}: wcss {} vs minimum {min_wcss}", m.wcss));
        }
        check_kmeans_run(&m, &d, &tag, &mut failures);
    }
    report(
        6,
        "k-means monotone, idempotent, exhaustive minimiser on 50 seeds",
        started,
        Duration::from_secs(30),
        &failures,
    );
}

#[test]
fn criterion_07_cv_integrity() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let d = synthetic_checklist(94, 31, 0.05, 11);
    let labels = d.labels().unwrap();
    let n = d.len();
    let global = [
        labels.iter().filter(|&&c| c == 0).count(),
        labels.iter().filter(|&&c| c == 1).count(),
    ];
    let learner = TreeLearner {
        config: TreeConfig::default(),
    };
    for k in [2usize, 5, 10] {
        let folds = fold_indices(&d, k, 42, true).unwrap();
        let mut seen = vec![0; n];
        for fold in &folds {
            for &i in fold {
                seen[i] += 1;
            }
            for (c, &g) in global.iter().enumerate() {
                let have = fold.iter().filter(|&&i| labels[i] == c).count() as f64;
                let expected = g as f64 * fold.len() as f64 / n as f64;
                if (have - expected).abs() > 1.0 {
                    failures.push(format!(
                        "k {k}: class {c} has {have} in a fold of {}, expected {expected:.2}",
                        fold.len()
                    ));
                }
            }
        }
        if seen.iter().any(|&s| s != 1) {
            failures.push(format!("k {k}: instance not tested exactly once"));
        }
        let pooled = pooled_predictions(&d, k, 42, &learner, true).unwrap();
        if pooled.len() != n
            || pooled
                .iter()
                .enumerate()
                .any(|(i, p)| p.index != i || !folds[p.fold].contains(&i))
        {
            failures.push(format!("k {k}: pooled predictions do not cover each instance once"));
        }
    }
    report(
        7,
        "folds partition 125 instances, stratified within 1, 125 pooled",
        started,
        Duration::from_secs(10),
        &failures,
    );
}

fn pairwise_auc(scores: &[f64], actual: &[usize], positive: usize) -> f64 {
    let mut total = 0.0;
    let mut pairs = 0.0;
    for (i, &a) in actual.iter().enumerate() {
        if a != positive {
            continue;
        }
        for (j, &b) in actual.iter().enumerate() {
            if b == positive {
                continue;
            }
            pairs += 1.0;
            total += if scores[i] > scores[j] {
                1.0
            } else if scores[i] == scores[j] {
                0.5
            } else {
                0.0
            };
        }
    }
    total / pairs
}

#[test]
fn criterion_08_roc_oracle_and_duality() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let mut r = rng(4000 + seed);
        let n = r.gen_range(2..80);
        let n_classes = r.gen_range(2..=3);
        let mut actual: Vec<usize> = (0..n).map(|_| r.gen_range(0..n_classes)).collect();
        actual[0] = 0;
        actual[1] = 1;
        // coarse grid so ties are common and 1 - s keeps the order exact
        let scores: Vec<f64> = (0..n).map(|_| r.gen_range(0..=20) as f64 / 20.0).collect();
        for positive in 0..n_classes {
            if !actual.contains(&positive) || actual.iter().all(|&a| a == positive) {
                continue;
            }
            let got = roc_area(&scores, &actual, positive).unwrap();
            let want = pairwise_auc(&scores, &actual, positive);
            if (got - want).abs() > 1e-9 {
                failures.push(format!("seed {seed} class {positive}: {got} vs {want}"));
            }
        }
        if n_classes == 2 {
            let flipped: Vec<f64> = scores.iter().map(|s| 1.0 - s).collect();
            let a1 = roc_area(&scores, &actual, 1).unwrap();
            let a0 = roc_area(&flipped, &actual, 0).unwrap();
            if (a1 - a0).abs() > 1e-9 {
                failures.push(format!("seed {seed}: duality {a1} vs {a0}"));
            }
        }
    }
    // the per-class areas of a binary cross-validation report agree
    let d = synthetic_checklist(94, 31, 0.05, 3);
    let learner = TreeLearner {
        config: TreeConfig::default(),
    };
    let rep = cross_validate(&d, 2, 0, &learner, true).unwrap();
    match (rep.per_class[0].roc_area, rep.per_class[1].roc_area) {
        (Some(a), Some(b)) if (a - b).abs() <= 1e-9 => {}
        other => failures.push(format!("cross-validation ROC areas {other:?}")),
    }
    report(
        8,
        "ROC area vs pairwise oracle, 100 problems, binary duality",
        started,
        Duration::from_secs(10),
        &failures,
    );
}

#[test]
fn criterion_09_imputation_oracle() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let mut r = rng(5000 + seed);
        let d = mixed_dataset(&mut r, 50, 6, 0.10, seed % 3 == 0);
        let schema = d.schema();
        let mut fills: Vec<Option<Value>> = vec![None; schema.len()];
        let mut empty_column = false;
        for a in schema.feature_indices() {
            let spec = schema.attribute(a);
            let observed: Vec<(Value, f64)> = d
                .instances()
                .iter()
                .filter(|x| !x.values[a].is_missing())
                .map(|x| (x.values[a], x.weight))
                .collect();
            if observed.len() == d.len() {
                continue;
            }
            if observed.is_empty() {
                empty_column = true;
                continue;
            }
            fills[a] = Some(if spec.is_numeric() {
                let w: f64 = observed.iter().map(|(_, w)| w).sum();
                Value::Number(observed.iter().map(|(v, w)| v.number().unwrap() * w).sum::<f64>() / w)
            } else {
                let mut best = (0, f64::NEG_INFINITY);
                for s in 0..spec.values.len() {
                    let w: f64 = observed
                        .iter()
                        .filter(|(v, _)| v.symbol() == Some(s))
                        .map(|(_, w)| w)
                        .sum();
                    if w > best.1 {
                        best = (s, w);
                    }
                }
                Value::Symbol(best.0)
            });
        }
        let result = impute_missing(&d);
        if empty_column {
            if result.is_ok() {
                failures.push(format!("seed {seed}: all-missing column accepted"));
            }
            continue;
        }
        let out = result.unwrap();
        for (before, after) in d.instances().iter().zip(out.instances()) {
            #[allow(clippy::needless_range_loop)]
            for a in 0..schema.len() {
                let expected = match (before.values[a], fills[a]) {
                    (Value::Missing, Some(f)) => f,
                    (v, _) => v,
                };
                let ok = match (expected, after.values[a]) {
                    (Value::Number(x), Value::Number(y)) => (x - y).abs() <= 1e-12 * x.abs().max(1.0),
                    (x, y) => x == y,
                };
                if !ok {
                    failures.push(format!("seed {seed} attr {a}: {:?} vs {expected:?}", after.values[a]));
                }
            }
            if before.weight != after.weight {
                failures.push(format!("seed {seed}: weight changed"));
            }
        }
        if impute_missing(&out).unwrap() != out {
            failures.push(format!("seed {seed}: not idempotent"));
        }
    }
    report(
        9,
        "imputation vs brute-force mean/mode, 100 datasets, idempotent",
        started,
        Duration::from_secs(5),
        &failures,
    );
}

/// Renames attributes and symbols so quoting and escaping are exercised.
fn awkward_names(d: &Dataset, r: &mut ChaCha8Rng) -> Dataset {
    const PIECES: [&str; 8] = [
        "plain",
        "with space",
        "comma,inside",
        "it's",
        "%percent",
        "{brace}",
        "back\\slash",
        "q\"uote",
    ];
    let attributes: Vec<AttributeSpec> = d
        .schema()
        .attributes()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let name = format!("{}{j}", PIECES[r.gen_range(0..PIECES.len())]);
            if a.is_numeric() {
                AttributeSpec::numeric(name)
            } else {
                AttributeSpec::nominal(
                    name,
                    (0..a.values.len()).map(|v| format!("{}{v}", PIECES[r.gen_range(0..PIECES.len())])),
                )
            }
        })
        .collect();
    let schema = Schema::new(attributes, d.schema().class_index()).unwrap();
    Dataset::new("fixture relation", schema, d.instances().to_vec()).unwrap()
}

#[test]
fn criterion_10_format_round_trips() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let mut r = rng(6000 + seed);
        let base = mixed_dataset(&mut r, 30, 5, 0.1, seed % 2 == 0);
        // non-grid numbers exercise shortest round-trip float printing
        let rows: Vec<Instance> = base
            .instances()
            .iter()
            .map(|x| {
                let values = x
                    .values
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => Value::Number(n + r.gen_range(-1e3..1e3) / 7.0),
                        other => *other,
                    })
                    .collect();
                Instance::with_weight(values, x.weight)
            })
            .collect();
        let base = Dataset::new("mixed", base.schema().clone(), rows).unwrap();
        let d = awkward_names(&base, &mut r);
        let tag = format!("seed {seed}");

        let text = write_arff(&d);
        match parse_arff(&text) {
            Ok(back) if back == d && write_arff(&back) == text => {}
            Ok(_) => failures.push(format!("{tag}: ARFF round trip changed the dataset")),
            Err(e) => failures.push(format!("{tag}: ARFF reparse failed: {e}")),
        }

        let model = build_tree(
            &d,
            &TreeConfig {
                prune: seed % 2 == 0,
                ..TreeConfig::default()
            },
        )
        .unwrap();
        let json = model.to_json().unwrap();
        match DecisionTreeModel::from_json(&json) {
            Ok(back) if back == model && back.to_json().unwrap() == json => {}
            _ => failures.push(format!("{tag}: model JSON round trip")),
        }

        let rules = extract_rules(&model);
        let json = rules.to_json().unwrap();
        match RuleSet::from_json(&json) {
            Ok(back) if back == rules => {}
            _ => failures.push(format!("{tag}: rule JSON round trip")),
        }

        let labels = d.labels().unwrap();
        let predicted: Vec<usize> = d.instances().iter().map(|x| model.classify(x).unwrap().class).collect();
        let mut rep = per_class_metrics(&confusion(&labels, &predicted, d.schema().class_values()).unwrap()).unwrap();
        rep.per_class[0].roc_area = Some(r.gen::<f64>());
        let json = rep.to_json().unwrap();
        match EvaluationReport::from_json(&json) {
            Ok(back) if back == rep => {}
            _ => failures.push(format!("{tag}: report JSON round trip")),
        }

        if let Ok(m) = kmeans_fit(&impute_missing(&d).unwrap_or_else(|_| base.clone()), 2, seed, 100) {
            let json = m.to_json().unwrap();
            match ClusterModel::from_json(&json) {
                Ok(back) if back == m => {}
                _ => failures.push(format!("{tag}: cluster JSON round trip")),
            }
        }
    }
    report(
        10,
        "ARFF and JSON parse/serialise/parse, 50 fixtures",
        started,
        Duration::from_secs(5),
        &failures,
    );
}

//! `ldscreen`: train, evaluate, extract rules, cluster and score checklists.

mod answers;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldscreen::cluster::{cluster_profile, kmeans_fit_restarts, map_clusters_to_classes, DEFAULT_RESTARTS};
use ldscreen::dataset::{impute_missing, infer_csv, parse_arff, synthetic_checklist, write_arff, Dataset};
use ldscreen::eval::cross_validate;
use ldscreen::learner::{LearnerOptions, LearnerRegistry};
use ldscreen::rules::{extract_rules, simplify_rules};
use ldscreen::tree::{build_tree, DecisionTreeModel, TreeConfig};

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(text: &str) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(1);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))
    };
}

#[derive(Parser)]
#[command(
    name = "ldscreen",
    version,
    about = "Decision trees, rules and k-means for screening checklists"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Dataset file (ARFF or CSV)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Input format; taken from the file extension when omitted
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Class attribute name (default: last nominal attribute)
    #[arg(long, global = true)]
    class: Option<String>,
    /// Seed for fold assignment, cluster starts and data generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file for the command's model, report or dataset
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV input has no header row
    #[arg(long, global = true)]
    no_header: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Arff,
    Csv,
}

#[derive(Args, Clone)]
struct TreeFlags {
    /// Keep the fully grown tree
    #[arg(long)]
    no_prune: bool,
    /// Nodes weighing less than twice this are not split
    #[arg(long, default_value_t = 2.0)]
    min_leaf: f64,
    /// Pruning confidence factor, in (0, 0.5]
    #[arg(long, default_value_t = 0.25)]
    confidence: f64,
}

impl TreeFlags {
    fn config(&self) -> Result<TreeConfig, CliError> {
        let config = TreeConfig {
            min_leaf_weight: self.min_leaf,
            confidence_factor: self.confidence,
            prune: !self.no_prune,
        };
        config.validate().map_err(CliError::usage)?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Grow a tree and write it as JSON
    Train {
        #[command(flatten)]
        tree: TreeFlags,
    },
    /// Cross-validate a learner and print the pooled report
    Evaluate {
        #[command(flatten)]
        tree: TreeFlags,
        #[arg(long, default_value_t = 2)]
        folds: usize,
        /// Registered learner name (see `learners`)
        #[arg(long, default_value = "j48")]
        learner: String,
        /// Deal folds without class stratification
        #[arg(long)]
        no_stratify: bool,
        /// Print the report as JSON
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Print per-class metrics as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Print one IF-THEN rule per tree leaf
    Rules {
        #[command(flatten)]
        tree: TreeFlags,
        /// Saved tree model; otherwise a tree is grown from --input
        #[arg(long)]
        model: Option<PathBuf>,
        /// Drop redundant conditions and rules using --input
        #[arg(long)]
        simplify: bool,
        /// Print the rule set as JSON
        #[arg(long)]
        json: bool,
    },
    /// K-means after mean/mode imputation
    Cluster {
        #[arg(long, default_value_t = 2)]
        clusters: usize,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Random starts; the lowest within-cluster sum of squares wins
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Print the profile as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Score one child's checklist answers with a saved model
    Checklist {
        #[arg(long)]
        model: PathBuf,
        /// Answers separated by commas or spaces, or NAME=VALUE pairs
        #[arg(long, conflicts_with = "answers_file", required_unless_present = "answers_file")]
        answers: Option<String>,
        #[arg(long)]
        answers_file: Option<PathBuf>,
        /// Take answers in the model's own attribute order and symbols
        #[arg(long)]
        schema: bool,
    },
    /// Write a synthetic checklist dataset as ARFF
    Generate {
        #[arg(long, default_value_t = 94)]
        negatives: usize,
        #[arg(long, default_value_t = 31)]
        positives: usize,
        /// Probability that a symptom answer is missing
        #[arg(long, default_value_t = 0.0)]
        missing: f64,
    },
    /// List registered learners
    Learners,
}

#[derive(Debug)]
enum CliError {
    /// Bad arguments, unreadable or malformed input.
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(e: impl fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn runtime(e: impl fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<ldscreen::Error> for CliError {
    fn from(e: ldscreen::Error) -> Self {
        use ldscreen::Error::*;
        match e {
            Syntax { .. }
            | Arity { .. }
            | UndeclaredSymbol { .. }
            | NotNumeric { .. }
            | Schema(_)
            | Csv(_)
            | Json(_)
            | Version(_)
            | UnknownAttribute(_)
            | UnknownLearner(_)
            | UnknownLabel(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn load_dataset(g: &Global) -> Result<Dataset, CliError> {
    let path = g
        .input
        .as_deref()
        .ok_or_else(|| CliError::usage("--input is required"))?;
    let format = match g.format {
        Some(f) => f,
        None => match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("arff") => Format::Arff,
            Some("csv") => Format::Csv,
            _ => {
                return Err(CliError::usage(format!(
                    "cannot tell the format of {}; pass --format",
                    path.display()
                )))
            }
        },
    };
    let text = read_text(path)?;
    let dataset = match format {
        Format::Arff => {
            let d = parse_arff(&text)?;
            match &g.class {
                Some(name) => d.with_class(name)?,
                None => d,
            }
        }
        Format::Csv => infer_csv(&text, !g.no_header, g.class.as_deref())?,
    };
    if dataset.is_empty() {
        return Err(CliError::usage(format!("{} has no instances", path.display())));
    }
    Ok(dataset)
}

fn load_model(path: &Path) -> Result<DecisionTreeModel, CliError> {
    Ok(DecisionTreeModel::from_json(&read_text(path)?)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Train { tree } => train(g, tree),
        Command::Evaluate {
            tree,
            folds,
            learner,
            no_stratify,
            json,
            csv,
        } => evaluate(g, tree, *folds, learner, !no_stratify, *json, *csv),
        Command::Rules {
            tree,
            model,
            simplify,
            json,
        } => rules(g, tree, model.as_deref(), *simplify, *json),
        Command::Cluster {
            clusters,
            max_iter,
            restarts,
            csv,
        } => cluster(g, *clusters, *max_iter, *restarts, *csv),
        Command::Checklist {
            model,
            answers,
            answers_file,
            schema,
        } => {
            let text = match (answers, answers_file) {
                (Some(a), _) => a.clone(),
                (None, Some(p)) => read_text(p)?,
                (None, None) => return Err(CliError::usage("--answers or --answers-file is required")),
            };
            checklist(model, &text, *schema)
        }
        Command::Generate {
            negatives,
            positives,
            missing,
        } => {
            if !(0.0..=1.0).contains(missing) {
                return Err(CliError::usage("--missing must lie in [0, 1]"));
            }
            let text = write_arff(&synthetic_checklist(*negatives, *positives, *missing, g.seed));
            match &g.out {
                Some(p) => write_text(p, &text),
                None => {
                    emit(&text);
                    Ok(())
                }
            }
        }
        Command::Learners => {
            let registry = LearnerRegistry::with_builtins();
            for name in registry.names() {
                outln!("{name:<10} {}", registry.describe(name).unwrap_or(""));
            }
            Ok(())
        }
    }
}

fn train(g: &Global, flags: &TreeFlags) -> Result<(), CliError> {
    let config = flags.config()?;
    let d = load_dataset(g)?;
    let model = build_tree(&d, &config)?;
    let labelled: Vec<usize> = (0..d.len()).filter(|&i| d.class_of(i).is_some()).collect();
    let mut correct = 0;
    for &i in &labelled {
        if Some(model.classify(&d.instances()[i])?.class) == d.class_of(i) {
            correct += 1;
        }
    }
    outln!("Number of Leaves : {}", model.leaf_count());
    outln!("Size of the tree : {}", model.node_count());
    outln!(
        "Training accuracy : {correct}/{} ({})",
        labelled.len(),
        ldscreen::cluster::format_percentage(correct, labelled.len())
    );
    if let Some(p) = &g.out {
        write_text(p, &model.to_json()?)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    g: &Global,
    flags: &TreeFlags,
    folds: usize,
    learner: &str,
    stratified: bool,
    json: bool,
    csv: bool,
) -> Result<(), CliError> {
    let options = LearnerOptions { tree: flags.config()? };
    let learner = LearnerRegistry::with_builtins().create(learner, &options)?;
    let d = load_dataset(g)?;
    if folds < 2 || folds > d.len() {
        return Err(CliError::usage(format!("--folds must lie in [2, {}]", d.len())));
    }
    let report = cross_validate(&d, folds, g.seed, learner.as_ref(), stratified)?;
    if json {
        outln!("{}", report.to_json()?);
    } else if csv {
        emit(&report.to_csv());
    } else {
        outln!(
            "{}-fold {}cross-validation, learner {}, seed {}\n",
            folds,
            if stratified { "stratified " } else { "" },
            learner.name(),
            g.seed
        );
        emit(&report.render_text());
    }
    if let Some(p) = &g.out {
        write_text(p, &report.to_json()?)?;
    }
    Ok(())
}

fn rules(g: &Global, flags: &TreeFlags, model: Option<&Path>, simplify: bool, json: bool) -> Result<(), CliError> {
    let data = if simplify || model.is_none() {
        Some(load_dataset(g)?)
    } else {
        None
    };
    let model = match model {
        Some(p) => load_model(p)?,
        None => build_tree(data.as_ref().expect("loaded above"), &flags.config()?)?,
    };
    let mut set = extract_rules(&model);
    if simplify {
        let d = data.as_ref().expect("loaded above");
        if d.schema() != model.schema() {
            return Err(CliError::usage("--input does not match the model's attributes"));
        }
        set = simplify_rules(&set, d)?;
    }
    let json_text = set.to_json()?;
    if json {
        outln!("{json_text}");
    } else {
        emit(&set.render(simplify));
    }
    if let Some(p) = &g.out {
        write_text(p, &json_text)?;
    }
    Ok(())
}

fn cluster(g: &Global, k: usize, max_iter: usize, restarts: usize, csv: bool) -> Result<(), CliError> {
    if k == 0 || max_iter == 0 || restarts == 0 {
        return Err(CliError::usage(
            "--clusters, --max-iter and --restarts must be positive",
        ));
    }
    let d = impute_missing(&load_dataset(g)?)?;
    let model = kmeans_fit_restarts(&d, k, g.seed, max_iter, restarts)?;
    let profile = cluster_profile(&model, &d)?;
    if csv {
        emit(&profile.to_csv());
    } else {
        emit(&profile.render_text());
        if (0..d.len()).any(|i| d.class_of(i).is_some()) {
            outln!("");
            for line in map_clusters_to_classes(&model, &d)?.lines(d.schema()) {
                outln!("{line}");
            }
        }
    }
    if let Some(p) = &g.out {
        write_text(p, &model.to_json()?)?;
    }
    Ok(())
}

fn checklist(model_path: &Path, text: &str, own_schema: bool) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let schema = model.schema();
    let instance = if own_schema {
        answers::by_schema(schema, text)
    } else {
        answers::by_checklist(schema, text)
    }
    .map_err(CliError::Usage)?;
    let c = model.classify(&instance)?;
    outln!(
        "Predicted {} = {}",
        schema.class_attribute().name,
        schema.class_label(c.class)
    );
    let parts: Vec<String> = schema
        .class_values()
        .iter()
        .zip(&c.distribution)
        .map(|(v, p)| format!("{v} {p:.3}"))
        .collect();
    outln!("Distribution: {}", parts.join(", "));
    let rules = extract_rules(&model);
    match rules.matching_rule(&instance) {
        Some(i) => outln!("Matched rule: {}", rules.rules()[i].render(schema)),
        None => outln!("Matched rule: none (an answer tested by the tree is missing)"),
    }
    Ok(())
}

//! rootlab: reproducible experiments on real-root classification of
//! degree 2–5 polynomials.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

mod manifest;
mod plot;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rootlab::dataset::csvio::{read_csv, write_csv};
use rootlab::dataset::{generate, DatasetConfig, LabeledDataset};
use rootlab::distill::{distill, DistillConfig};
use rootlab::error::{Error, Result};
use rootlab::features::FeatureFamily;
use rootlab::learners::{cross_validate, fit, ModelFamily, ModelSpec};
use rootlab::polycore::{
    classify_root_profile, exact_real_root_count, RationalPoly, LABEL_IMAG_TOL,
};
use rootlab::stress::{data_efficiency_sweep, noise_sweep, ood_sweep, StressConfig};

use manifest::ManifestBuilder;

#[derive(Parser)]
#[command(
    name = "rootlab",
    version,
    about = "Dataset generation, feature banks, model training, distillation, and robustness sweeps for polynomial real-root classification"
)]
struct Cli {
    /// Worker thread cap (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled dataset CSV.
    Generate(GenerateArgs),
    /// Recompute feature families for an existing CSV.
    Featurize(FeaturizeArgs),
    /// Cross-validate one model family and save the fitted model.
    Train(TrainArgs),
    /// Compare the five model families on raw coefficients.
    Screen(ScreenArgs),
    /// Distill a trained network into a surrogate decision tree.
    Distill(DistillArgs),
    /// Run the OOD / data-efficiency / noise robustness sweeps.
    Stress(StressArgs),
    /// Aggregate JSON artifacts into markdown tables and SVG panels.
    Report(ReportArgs),
    /// Audit numeric labels against the exact rational Sturm oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    degree: usize,
    /// Sample count (defaults: 40,000 for degree 5, 20,000 below).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient range lower bound.
    #[arg(long)]
    lo: Option<f64>,
    /// Coefficient range upper bound.
    #[arg(long)]
    hi: Option<f64>,
    /// Comma-separated quintic families (sturm,descartes,newton,critical_points,
    /// hybrid_symbolic,decomposition), or "all"/"none".
    #[arg(long)]
    families: Option<String>,
    /// Output CSV (defaults to deg{d}_n{n}_seed{s}.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FeaturizeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Families for the rebuilt feature block (degree 5 only).
    #[arg(long)]
    families: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    input: PathBuf,
    /// tree | forest | gbm | logreg | mlp
    #[arg(long)]
    model: String,
    /// "raw" (default), "all", "invariant", "only:<cols>", or a comma list of
    /// extra columns/families appended to the raw coefficients (e.g. "crit8").
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated seed list or inclusive "a..b" range.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    min_leaf: Option<usize>,
    #[arg(long)]
    n_trees: Option<usize>,
    #[arg(long)]
    n_rounds: Option<usize>,
    /// Learning rate for gbm/mlp.
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Hidden layer widths, e.g. "16,16".
    #[arg(long)]
    hidden: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    /// Evaluation report JSON.
    #[arg(long)]
    out_report: PathBuf,
    /// Fitted model JSON (trained on all rows with the first seed).
    #[arg(long)]
    out_model: Option<PathBuf>,
}

#[derive(Args)]
struct ScreenArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DistillArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tree_depth: Option<usize>,
    #[arg(long)]
    tree_min_leaf: Option<usize>,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Teacher hidden layer widths, e.g. "16,16".
    #[arg(long)]
    hidden: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Plain-text rule dump (defaults to <out>.rules.txt).
    #[arg(long)]
    rules: Option<PathBuf>,
}

#[derive(Args)]
struct StressArgs {
    /// all | ood | efficiency | noise
    #[arg(long, default_value = "all")]
    protocol: String,
    /// Comma-separated degrees (default 2,3,4,5).
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    test_n: Option<usize>,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding run artifacts (JSON files).
    #[arg(long)]
    inputs: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Directory for SVG panels (defaults to <inputs>/plots).
    #[arg(long)]
    plots: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    degree: usize,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// Optional JSON config file: `{ "<subcommand>": { "<flag>": value }, "<flag>": value }`.
struct ConfigFile {
    value: serde_json::Value,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<ConfigFile> {
        let value = match path {
            None => serde_json::Value::Null,
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Io(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::BadData(format!("bad config file: {e}")))?
            }
        };
        Ok(ConfigFile { value })
    }

    fn get(&self, section: &str, key: &str) -> Option<&serde_json::Value> {
        self.value
            .get(section)
            .and_then(|s| s.get(key))
            .or_else(|| self.value.get(key))
    }

    fn u64_or(&self, section: &str, key: &str, flag: Option<u64>, default: u64) -> u64 {
        flag.or_else(|| self.get(section, key).and_then(|v| v.as_u64())).unwrap_or(default)
    }

    fn usize_or(&self, section: &str, key: &str, flag: Option<usize>, default: usize) -> usize {
        flag.or_else(|| self.get(section, key).and_then(|v| v.as_u64()).map(|v| v as usize))
            .unwrap_or(default)
    }

    fn f64_or(&self, section: &str, key: &str, flag: Option<f64>, default: f64) -> f64 {
        flag.or_else(|| self.get(section, key).and_then(|v| v.as_f64())).unwrap_or(default)
    }

    fn string(&self, section: &str, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.get(section, key).and_then(|v| v.as_str()).map(String::from))
    }
}

fn env_seed() -> u64 {
    std::env::var("ROOTLAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn parse_seeds(text: Option<&str>) -> Result<Vec<u64>> {
    let text = match text {
        None => return Ok(vec![env_seed()]),
        Some(t) => t.trim(),
    };
    if let Some((a, b)) = text.split_once("..") {
        let lo: u64 = a.parse().map_err(|_| Error::BadData(format!("bad seed range '{text}'")))?;
        let hi: u64 = b.parse().map_err(|_| Error::BadData(format!("bad seed range '{text}'")))?;
        if hi < lo {
            return Err(Error::BadData(format!("empty seed range '{text}'")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::BadData(format!("bad seed '{s}'"))))
        .collect()
}

fn parse_families(text: &str) -> Result<Vec<FeatureFamily>> {
    match text.trim() {
        "all" => Ok(FeatureFamily::ALL.to_vec()),
        "none" | "" => Ok(Vec::new()),
        other => other.split(',').map(FeatureFamily::parse).collect(),
    }
}

fn parse_hidden(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::BadData(format!("bad hidden width '{s}'"))))
        .collect()
}

fn parse_degrees(text: Option<&str>) -> Result<Vec<usize>> {
    match text {
        None => Ok(vec![2, 3, 4, 5]),
        Some(t) => t
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::BadData(format!("bad degree '{s}'"))))
            .collect(),
    }
}

/// Resolve a `--features` selection against a dataset.
///
/// - `raw` (default): the raw coefficient columns.
/// - `all`: every column in the dataset.
/// - `invariant`: the degree's invariant selection (discriminant ratio,
///   quartic invariants, or the quintic critical-point family), without raw.
/// - `only:<c1,c2,...>`: exactly the named columns.
/// - anything else: comma-separated family or column names appended to raw.
fn resolve_features(ds: &LabeledDataset, selection: Option<&str>) -> Result<Vec<String>> {
    let raw = ds.raw_names()?;
    let selection = selection.unwrap_or("raw").trim();
    if selection == "all" {
        return Ok(ds.feature_names.clone());
    }
    let mut wanted: Vec<String> = if selection == "invariant" {
        rootlab::stress::invariant_features_for(ds.config.degree)?
    } else if let Some(list) = selection.strip_prefix("only:") {
        list.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        raw.clone()
    };
    if !["raw", "invariant", ""].contains(&selection) && !selection.starts_with("only:") {
        for token in selection.split(',') {
            let token = token.trim();
            if let Ok(family) = FeatureFamily::parse(token) {
                wanted.extend(family.feature_names().iter().map(|s| s.to_string()));
            } else {
                wanted.push(token.to_string());
            }
        }
    }
    // Keep dataset column order, drop duplicates, and fail on unknown names.
    let mut cols = Vec::new();
    for name in &ds.feature_names {
        if wanted.contains(name) && !cols.contains(name) {
            cols.push(name.clone());
        }
    }
    for w in &wanted {
        if !cols.contains(w) {
            return Err(Error::UnknownFeature(w.clone()));
        }
    }
    Ok(cols)
}

fn build_model_spec(args: &TrainArgs, cfg: &ConfigFile) -> Result<ModelSpec> {
    let family = ModelFamily::parse(&args.model)?;
    let spec = match family {
        ModelFamily::Tree => {
            let d = ModelSpec::tree_default();
            let (dd, dl) = match d {
                ModelSpec::Tree { max_depth, min_leaf } => (max_depth, min_leaf),
                _ => unreachable!(),
            };
            ModelSpec::Tree {
                max_depth: cfg.usize_or("train", "max_depth", args.max_depth, dd),
                min_leaf: cfg.usize_or("train", "min_leaf", args.min_leaf, dl),
            }
        }
        ModelFamily::Forest => {
            let d = rootlab::learners::ForestConfig::default();
            ModelSpec::Forest {
                n_trees: cfg.usize_or("train", "n_trees", args.n_trees, d.n_trees),
                max_depth: cfg.usize_or("train", "max_depth", args.max_depth, d.max_depth),
                min_leaf: cfg.usize_or("train", "min_leaf", args.min_leaf, d.min_leaf),
            }
        }
        ModelFamily::Gbm => {
            let d = rootlab::learners::GbmConfig::default();
            ModelSpec::Gbm {
                n_rounds: cfg.usize_or("train", "n_rounds", args.n_rounds, d.n_rounds),
                learning_rate: cfg.f64_or("train", "rate", args.rate, d.learning_rate),
                max_depth: cfg.usize_or("train", "max_depth", args.max_depth, d.max_depth),
                min_leaf: cfg.usize_or("train", "min_leaf", args.min_leaf, d.min_leaf),
            }
        }
        ModelFamily::LogReg => {
            let d = rootlab::learners::LogRegConfig::default();
            ModelSpec::LogReg {
                l2: cfg.f64_or("train", "l2", args.l2, d.l2),
                max_iters: cfg.usize_or("train", "max_iters", args.max_iters, d.max_iters),
            }
        }
        ModelFamily::Mlp => {
            let d = rootlab::learners::MlpConfig::default();
            let hidden = match cfg.string("train", "hidden", args.hidden.clone()) {
                Some(h) => parse_hidden(&h)?,
                None => d.hidden,
            };
            ModelSpec::Mlp {
                hidden,
                epochs: cfg.usize_or("train", "epochs", args.epochs, d.epochs),
                batch: cfg.usize_or("train", "batch", args.batch, d.batch),
                learning_rate: cfg.f64_or("train", "rate", args.rate, d.learning_rate),
            }
        }
    };
    Ok(spec)
}

fn cmd_generate(args: GenerateArgs, cfg: &ConfigFile) -> Result<()> {
    let seed = cfg.u64_or("generate", "seed", args.seed, env_seed());
    let mut dc = DatasetConfig::for_degree(args.degree, seed)?;
    dc.n_samples = cfg.usize_or("generate", "n", args.n, dc.n_samples);
    dc.coeff_range = (
        cfg.f64_or("generate", "lo", args.lo, dc.coeff_range.0),
        cfg.f64_or("generate", "hi", args.hi, dc.coeff_range.1),
    );
    if let Some(f) = cfg.string("generate", "families", args.families.clone()) {
        dc.families = parse_families(&f)?;
    }
    let out = args.out.unwrap_or_else(|| PathBuf::from(dc.default_file_name()));
    let ds = generate(&dc)?;
    write_csv(&ds, &out)?;
    eprintln!(
        "wrote {} rows x {} features to {} (classes {:?}, resampled {})",
        ds.n_rows(),
        ds.feature_names.len(),
        out.display(),
        ds.class_counts,
        ds.n_resampled
    );
    let mut mb = ManifestBuilder::new("generate");
    mb.seeds(&[seed]).config(serde_json::to_value(&dc)?).artifact(&out);
    mb.write()?;
    Ok(())
}

fn cmd_featurize(args: FeaturizeArgs, _cfg: &ConfigFile) -> Result<()> {
    let ds = read_csv(&args.input)?;
    if ds.config.degree != 5 {
        return Err(Error::BadData(
            "featurize recomputes quintic families; degree 2-4 datasets always carry their discriminant block".into(),
        ));
    }
    let families = parse_families(&args.families)?;
    let n_raw = ds.config.n_raw_columns();
    let names = rootlab::dataset::feature_names(5, true, &families)?;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(ds.n_rows());
    for i in 0..ds.n_rows() {
        let raw = &ds.features.row(i)[..n_raw];
        let p = rootlab::dataset::poly_from_raw(5, true, raw)?;
        rows.push(rootlab::dataset::features_for_poly(&p, &families)?);
    }
    let mut out_ds = ds.clone();
    out_ds.config.families = families;
    out_ds.feature_names = names;
    out_ds.features = rootlab::data::Matrix::from_rows(&rows)?;
    write_csv(&out_ds, &args.out)?;
    eprintln!(
        "rewrote {} with {} feature columns",
        args.out.display(),
        out_ds.feature_names.len()
    );
    let mut mb = ManifestBuilder::new("featurize");
    mb.config(serde_json::json!({"input": args.input.display().to_string(), "families": args.families}))
        .artifact(&args.out);
    mb.write()?;
    Ok(())
}

fn cmd_train(args: TrainArgs, cfg: &ConfigFile) -> Result<()> {
    let ds = read_csv(&args.input)?;
    let spec = build_model_spec(&args, cfg)?;
    let features_flag = cfg.string("train", "features", args.features.clone());
    let cols = resolve_features(&ds, features_flag.as_deref())?;
    let k = cfg.usize_or("train", "k", args.k, 5);
    let seeds_flag = cfg.string("train", "seeds", args.seeds.clone());
    let seeds = parse_seeds(seeds_flag.as_deref())?;

    let report = cross_validate(&ds, &spec, &cols, k, &seeds)?;
    eprintln!(
        "{} on {} columns: balanced accuracy {:.4} ± {:.4} over {} folds",
        args.model,
        cols.len(),
        report.mean,
        report.ci95,
        report.per_fold_scores.len()
    );

    let features_tag = features_flag.unwrap_or_else(|| "raw".into());
    let artifact = report::EvalArtifact {
        kind: "eval".into(),
        degree: ds.config.degree,
        model: args.model.clone(),
        features: features_tag,
        report: report.clone(),
    };
    std::fs::write(&args.out_report, serde_json::to_string_pretty(&artifact)?)?;

    let mut mb = ManifestBuilder::new("train");
    mb.seeds(&seeds)
        .config(serde_json::json!({
            "input": args.input.display().to_string(),
            "model_spec": spec,
            "features": cols,
            "k": k,
        }))
        .artifact(&args.out_report);

    if let Some(model_path) = &args.out_model {
        let x = ds.select_features(&cols)?;
        let model = fit(&spec, &x, &ds.labels, ds.n_classes(), cols.clone(), seeds[0])?;
        model.save(model_path)?;
        mb.artifact(model_path);
    }
    mb.write()?;
    Ok(())
}

fn cmd_screen(args: ScreenArgs, cfg: &ConfigFile) -> Result<()> {
    let ds = read_csv(&args.input)?;
    let raw = ds.raw_names()?;
    let k = cfg.usize_or("screen", "k", args.k, 5);
    let seeds_flag = cfg.string("screen", "seeds", args.seeds.clone());
    let seeds = parse_seeds(seeds_flag.as_deref().or(Some("0,1,2")))?;

    let roster = [
        ("mlp", ModelSpec::mlp_default()),
        ("gbm", ModelSpec::gbm_default()),
        ("forest", ModelSpec::forest_default()),
        ("tree", ModelSpec::tree_screening()),
        ("logreg", ModelSpec::logreg_default()),
    ];
    let mut results = std::collections::BTreeMap::new();
    for (name, spec) in roster {
        let report = cross_validate(&ds, &spec, &raw, k, &seeds)?;
        eprintln!("{name}: {:.4} ± {:.4}", report.mean, report.ci95);
        results.insert(name.to_string(), report);
    }
    let artifact = report::ScreenArtifact {
        kind: "screen".into(),
        degree: ds.config.degree,
        results,
    };
    std::fs::write(&args.out, serde_json::to_string_pretty(&artifact)?)?;
    let mut mb = ManifestBuilder::new("screen");
    mb.seeds(&seeds)
        .config(serde_json::json!({"input": args.input.display().to_string(), "k": k}))
        .artifact(&args.out);
    mb.write()?;
    Ok(())
}

fn cmd_distill(args: DistillArgs, cfg: &ConfigFile) -> Result<()> {
    let ds = read_csv(&args.input)?;
    let seed = cfg.u64_or("distill", "seed", args.seed, env_seed());
    let mut dcfg = DistillConfig::new(seed);
    dcfg.tree_depth = cfg.usize_or("distill", "tree_depth", args.tree_depth, dcfg.tree_depth);
    dcfg.tree_min_leaf =
        cfg.usize_or("distill", "tree_min_leaf", args.tree_min_leaf, dcfg.tree_min_leaf);
    dcfg.test_fraction =
        cfg.f64_or("distill", "test_fraction", args.test_fraction, dcfg.test_fraction);
    dcfg.importance_repeats =
        cfg.usize_or("distill", "repeats", args.repeats, dcfg.importance_repeats);
    if let Some(h) = cfg.string("distill", "hidden", args.hidden.clone()) {
        if let ModelSpec::Mlp { epochs, batch, learning_rate, .. } = dcfg.nn {
            dcfg.nn = ModelSpec::Mlp { hidden: parse_hidden(&h)?, epochs, batch, learning_rate };
        }
    }

    let report = distill(&ds, &dcfg)?;
    eprintln!(
        "nn {:.4}, fidelity {:.4}, standalone {:.4}",
        report.nn_test_balanced_accuracy, report.tree_fidelity, report.tree_standalone
    );
    let rules_path = args
        .rules
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.rules.txt", args.out.display())));
    std::fs::write(&rules_path, &report.rules_text)?;
    let artifact = report::DistillArtifact {
        kind: "distill".into(),
        degree: ds.config.degree,
        report,
    };
    std::fs::write(&args.out, serde_json::to_string_pretty(&artifact)?)?;
    let mut mb = ManifestBuilder::new("distill");
    mb.seeds(&[seed])
        .config(serde_json::to_value(&dcfg)?)
        .artifact(&args.out);
    mb.artifact(&rules_path);
    mb.write()?;
    Ok(())
}

fn cmd_stress(args: StressArgs, cfg: &ConfigFile) -> Result<()> {
    let mut scfg = StressConfig::default();
    let degrees_flag = cfg.string("stress", "degrees", args.degrees.clone());
    scfg.degrees = parse_degrees(degrees_flag.as_deref())?;
    let seeds_flag = cfg.string("stress", "seeds", args.seeds.clone());
    scfg.seeds = parse_seeds(seeds_flag.as_deref().or(Some("0,1,2")))?;
    scfg.k_folds = cfg.usize_or("stress", "k", args.k, scfg.k_folds);
    scfg.test_n = cfg.usize_or("stress", "test_n", args.test_n, scfg.test_n);

    let report = match args.protocol.as_str() {
        "all" => {
            let mut r = ood_sweep(&scfg)?;
            r.merge(data_efficiency_sweep(&scfg)?);
            r.merge(noise_sweep(&scfg)?);
            r
        }
        "ood" => ood_sweep(&scfg)?,
        "efficiency" => data_efficiency_sweep(&scfg)?,
        "noise" => noise_sweep(&scfg)?,
        other => return Err(Error::BadData(format!("unknown protocol '{other}'"))),
    };

    std::fs::write(&args.out_csv, report.to_tidy_csv())?;
    let mut mb = ManifestBuilder::new("stress");
    mb.seeds(&scfg.seeds).config(serde_json::to_value(&scfg)?).artifact(&args.out_csv);
    if let Some(json_path) = &args.out_json {
        std::fs::write(json_path, report.to_json()?)?;
        mb.artifact(json_path);
    }
    eprintln!("{} grid cells written", report.cells.len());
    mb.write()?;
    Ok(())
}

fn cmd_report(args: ReportArgs, _cfg: &ConfigFile) -> Result<()> {
    let plots = args.plots.clone().unwrap_or_else(|| args.inputs.join("plots"));
    let written = report::build_report(&args.inputs, &args.out, Some(&plots))?;
    let mut mb = ManifestBuilder::new("report");
    mb.config(serde_json::json!({"inputs": args.inputs.display().to_string()}));
    for p in &written {
        mb.artifact(p);
    }
    mb.write()?;
    eprintln!("wrote {} artifacts", written.len());
    Ok(())
}

fn cmd_verify(args: VerifyArgs, cfg: &ConfigFile) -> Result<()> {
    let seed = cfg.u64_or("verify", "seed", args.seed, env_seed());
    let mut dc = DatasetConfig::for_degree(args.degree, seed)?;
    dc.n_samples = args.n;
    dc.families = Vec::new();
    let ds = generate(&dc)?;
    let n_raw = dc.n_raw_columns();

    let mut disagreements = Vec::new();
    for i in 0..ds.n_rows() {
        let raw = &ds.features.row(i)[..n_raw];
        let p = rootlab::dataset::poly_from_raw(dc.degree, dc.monic, raw)?;
        let profile = classify_root_profile(&p, LABEL_IMAG_TOL)?;
        let exact = exact_real_root_count(&RationalPoly::from_f64s(p.coeffs())?, None)?;
        if profile.n_real != exact {
            disagreements.push((i, profile.n_real, exact, profile.min_imag_margin));
        }
    }
    let agreement = 1.0 - disagreements.len() as f64 / ds.n_rows() as f64;
    println!(
        "oracle agreement {:.5} ({} / {} rows)",
        agreement,
        ds.n_rows() - disagreements.len(),
        ds.n_rows()
    );
    for (i, numeric, exact, margin) in disagreements.iter().take(20) {
        println!("  row {i}: numeric {numeric} real vs exact {exact}, min imag margin {margin:.3e}");
    }
    if agreement < 0.999 {
        return Err(Error::RootsDidNotConverge { residual: 1.0 - agreement });
    }
    Ok(())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::RootsDidNotConverge { .. } | Error::Diverged(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are success; everything else is usage.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()
        {
            eprintln!("warning: could not set thread pool size: {e}");
        }
    }
    let cfg = match ConfigFile::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args, &cfg),
        Command::Featurize(args) => cmd_featurize(args, &cfg),
        Command::Train(args) => cmd_train(args, &cfg),
        Command::Screen(args) => cmd_screen(args, &cfg),
        Command::Distill(args) => cmd_distill(args, &cfg),
        Command::Stress(args) => cmd_stress(args, &cfg),
        Command::Report(args) => cmd_report(args, &cfg),
        Command::Verify(args) => cmd_verify(args, &cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

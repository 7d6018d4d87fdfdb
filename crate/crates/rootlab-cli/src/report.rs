//! Aggregate run artifacts into markdown tables and Figure-style SVG panels.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use rootlab::error::{Error, Result};
use rootlab::learners::EvalReport;
use rootlab::stress::{ModelKind, Protocol, StressReport};

use crate::plot::{line_chart, Series};

/// Tagged wrapper for a cross-validation artifact written by `train`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalArtifact {
    pub kind: String, // "eval"
    pub degree: usize,
    pub model: String,
    pub features: String,
    pub report: EvalReport,
}

/// Tagged wrapper for the screening artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreenArtifact {
    pub kind: String, // "screen"
    pub degree: usize,
    pub results: BTreeMap<String, EvalReport>,
}

/// Tagged wrapper for a distillation artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistillArtifact {
    pub kind: String, // "distill"
    pub degree: usize,
    pub report: rootlab::distill::DistillReport,
}

#[derive(Default)]
struct Artifacts {
    evals: Vec<EvalArtifact>,
    screens: Vec<ScreenArtifact>,
    distills: Vec<DistillArtifact>,
    stress: Vec<StressReport>,
}

fn scan(dir: &Path) -> Result<Artifacts> {
    let mut found = Artifacts::default();
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .filter(|p| !p.to_string_lossy().ends_with(".manifest.json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let value: serde_json::Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(_) => continue,
        };
        match value.get("kind").and_then(|k| k.as_str()) {
            Some("eval") => {
                if let Ok(a) = serde_json::from_value::<EvalArtifact>(value.clone()) {
                    found.evals.push(a);
                }
            }
            Some("screen") => {
                if let Ok(a) = serde_json::from_value::<ScreenArtifact>(value.clone()) {
                    found.screens.push(a);
                }
            }
            Some("distill") => {
                if let Ok(a) = serde_json::from_value::<DistillArtifact>(value.clone()) {
                    found.distills.push(a);
                }
            }
            _ => {
                // Stress reports are recognizable by their cell grid.
                if value.get("cells").is_some() {
                    if let Ok(r) = serde_json::from_value::<StressReport>(value) {
                        found.stress.push(r);
                    }
                }
            }
        }
    }
    Ok(found)
}

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

fn eval_row(a: &EvalArtifact) -> String {
    format!(
        "| {} | {} | {} | {} ± {} |\n",
        a.degree,
        a.model,
        a.features,
        pct(a.report.mean),
        pct(a.report.ci95)
    )
}

/// Build `report.md` (and SVG panels when stress artifacts are present) from
/// every recognized artifact in `dir`.
pub fn build_report(dir: &Path, out_md: &Path, plots_dir: Option<&Path>) -> Result<Vec<std::path::PathBuf>> {
    let artifacts = scan(dir)?;
    let mut written = Vec::new();
    let mut md = String::from("# Experiment report\n");

    if !artifacts.evals.is_empty() {
        md.push_str("\n## Cross-validation runs\n\n");
        md.push_str("| Degree | Model | Features | Balanced accuracy |\n");
        md.push_str("|---|---|---|---|\n");
        let mut evals = artifacts.evals.clone();
        evals.sort_by(|a, b| {
            (a.degree, &a.model, &a.features).cmp(&(b.degree, &b.model, &b.features))
        });
        for a in &evals {
            md.push_str(&eval_row(a));
        }
        // Performance-gap rows wherever an mlp/tree pair shares a feature set.
        let mut gaps = Vec::new();
        for a in &evals {
            if a.model == "mlp" {
                if let Some(t) = evals.iter().find(|t| {
                    t.model == "tree" && t.degree == a.degree && t.features == a.features
                }) {
                    gaps.push((a.degree, a.features.clone(), a.report.mean - t.report.mean));
                }
            }
        }
        for (degree, features, gap) in gaps {
            md.push_str(&format!(
                "| {} | Performance Gap (mlp − tree) | {} | {:.1} points |\n",
                degree,
                features,
                gap * 100.0
            ));
        }
    }

    if !artifacts.screens.is_empty() {
        md.push_str("\n## Model screening (raw coefficients)\n\n");
        for s in &artifacts.screens {
            md.push_str(&format!("Degree {}:\n\n", s.degree));
            md.push_str("| Model | Balanced accuracy |\n|---|---|\n");
            let mut rows: Vec<_> = s.results.iter().collect();
            rows.sort_by(|a, b| b.1.mean.total_cmp(&a.1.mean));
            for (name, rep) in rows {
                md.push_str(&format!("| {} | {} ± {} |\n", name, pct(rep.mean), pct(rep.ci95)));
            }
            md.push('\n');
        }
    }

    if !artifacts.distills.is_empty() {
        md.push_str("\n## Distillation\n\n");
        md.push_str("| Degree | NN test accuracy | Tree fidelity | Tree standalone |\n");
        md.push_str("|---|---|---|---|\n");
        for d in &artifacts.distills {
            md.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                d.degree,
                pct(d.report.nn_test_balanced_accuracy),
                pct(d.report.tree_fidelity),
                pct(d.report.tree_standalone)
            ));
        }
        for d in &artifacts.distills {
            let mut ranked: Vec<_> = d.report.importance.iter().collect();
            ranked.sort_by(|a, b| b.1.total_cmp(a.1));
            md.push_str(&format!(
                "\nTop features by permutation importance (degree {}): ",
                d.degree
            ));
            let row: Vec<String> = ranked
                .iter()
                .take(5)
                .map(|(name, share)| format!("{} ({})", name, pct(**share)))
                .collect();
            md.push_str(&row.join(", "));
            md.push('\n');
        }
    }

    if !artifacts.stress.is_empty() {
        md.push_str("\n## Stress protocols\n\n");
        let mut merged = StressReport::default();
        for s in artifacts.stress {
            merged.merge(s);
        }
        md.push_str("| Protocol | Degree | Model | x | Balanced accuracy |\n|---|---|---|---|---|\n");
        for c in &merged.cells {
            md.push_str(&format!(
                "| {} | {} | {} | {} | {} ± {} |\n",
                c.protocol.name(),
                c.degree,
                c.model_kind.name(),
                c.x,
                pct(c.mean),
                pct(c.ci95)
            ));
        }
        if let Some(plots) = plots_dir {
            std::fs::create_dir_all(plots)?;
            for (protocol, x_label, log_x) in [
                (Protocol::Ood, "Range bound", true),
                (Protocol::Efficiency, "Training samples", true),
                (Protocol::Noise, "Noise std dev", false),
            ] {
                for kind in ModelKind::BOTH {
                    let mut series = Vec::new();
                    for degree in 2..=5usize {
                        let mut points: Vec<(f64, f64, f64)> = merged
                            .cells
                            .iter()
                            .filter(|c| {
                                c.protocol == protocol && c.model_kind == kind && c.degree == degree
                            })
                            .map(|c| (c.x, c.mean, c.ci95))
                            .collect();
                        points.sort_by(|a, b| a.0.total_cmp(&b.0));
                        if !points.is_empty() {
                            series.push(Series { label: format!("degree {degree}"), points });
                        }
                    }
                    if series.is_empty() {
                        continue;
                    }
                    let title = format!("{}: {}", kind.name(), protocol.name());
                    let svg = line_chart(&title, x_label, "Balanced accuracy", log_x, &series);
                    let path = plots.join(format!("fig1_{}_{}.svg", kind.name(), protocol.name()));
                    std::fs::write(&path, svg)?;
                    written.push(path);
                }
            }
        }
    }

    std::fs::write(out_md, md)?;
    written.insert(0, out_md.to_path_buf());
    Ok(written)
}

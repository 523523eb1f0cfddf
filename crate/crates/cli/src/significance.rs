use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Result};
use salobj::evaluation::EvalReport;
use salobj::stats::{two_sample_t_test, Hypothesis, SampleMode, TestResult};
use serde::Serialize;

use crate::manifest::{read_json, write_json};
use crate::Outcome;

const MEASURES: [&str; 4] = ["f1", "f_beta", "auc_pr", "auc_roc"];

#[derive(Debug, Serialize)]
struct Comparison {
    measure: &'static str,
    mode: SampleMode,
    hypothesis: Hypothesis,
    n: usize,
    mean_a: f64,
    mean_b: f64,
    result: TestResult,
}

#[derive(Debug, Serialize)]
struct SignificanceReport {
    a: Option<String>,
    b: Option<String>,
    alpha: f64,
    comparisons: Vec<Comparison>,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn run(a_path: &Path, b_path: &Path, out: &Path, alpha: f64) -> Result<Outcome> {
    let a: EvalReport = read_json(a_path)?;
    let b: EvalReport = read_json(b_path)?;
    let stems_a: Vec<&str> = a.images.iter().map(|r| r.stem.as_str()).collect();
    let stems_b: Vec<&str> = b.images.iter().map(|r| r.stem.as_str()).collect();
    let only_a: Vec<&str> = stems_a.iter().copied().filter(|s| !stems_b.contains(s)).collect();
    let only_b: Vec<&str> = stems_b.iter().copied().filter(|s| !stems_a.contains(s)).collect();
    if !only_a.is_empty() || !only_b.is_empty() {
        bail!("reports cover different images; only in A: {only_a:?}; only in B: {only_b:?}");
    }

    let mut comparisons = Vec::new();
    for measure in MEASURES {
        let va: BTreeMap<String, f64> = a.per_image(measure).unwrap_or_default().into_iter().collect();
        let vb: BTreeMap<String, f64> = b.per_image(measure).unwrap_or_default().into_iter().collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = va.iter().filter_map(|(s, &x)| vb.get(s).map(|&y| (x, y))).unzip();
        for mode in SampleMode::ALL {
            for hypothesis in Hypothesis::ALL {
                let result = two_sample_t_test(&xs, &ys, mode, hypothesis, alpha)?;
                comparisons.push(Comparison {
                    measure,
                    mode,
                    hypothesis,
                    n: xs.len(),
                    mean_a: mean(&xs),
                    mean_b: mean(&ys),
                    result,
                });
            }
        }
    }
    for c in &comparisons {
        log::info!(
            "{:<8} {:<6} {:<5} t = {:>9.4}  p = {:.4e}{}",
            c.measure,
            c.mode.to_string(),
            format!("{:?}", c.hypothesis).to_lowercase(),
            c.result.statistic,
            c.result.p_value.unwrap_or(f64::NAN),
            if c.result.rejected { "  rejected" } else { "" }
        );
    }
    let report = SignificanceReport {
        a: a.algorithm,
        b: b.algorithm,
        alpha,
        comparisons,
    };
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    write_json(out, &report)?;
    Ok(Outcome::Success)
}

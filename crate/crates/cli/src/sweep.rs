use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};
use salobj::batch::{evaluate_schemes, with_threads};
use salobj::centerbias::CombinationScheme;
use salobj::dataset::index_dataset;
use salobj::evaluation::Measures;
use salobj::pipeline::weight_grid;
use serde::Serialize;

use crate::args::{ConfigArgs, DatasetArgs};
use crate::manifest::write_json;
use crate::Outcome;

#[derive(Debug, Serialize)]
struct Best {
    measure: &'static str,
    w_c: f64,
    value: f64,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    config_hash: String,
    algorithm: String,
    scheme: String,
    step: f64,
    best: Vec<Best>,
    failed: Vec<String>,
}

/// Index of the first maximum.
pub fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

pub fn run(dataset: &DatasetArgs, out: &Path, step: f64, beta2: f64, args: &ConfigArgs) -> Result<Outcome> {
    let config = args.resolve()?;
    if !config.algorithm.is_combined() {
        bail!(
            "{} has no prior to weight; use MSSS+CB, RC+CB or LDRC+CB",
            config.algorithm
        );
    }
    let grid = weight_grid(step)?;
    let index = index_dataset(&dataset.images, &dataset.masks)?;
    if index.is_empty() {
        bail!("no image/mask pairs found");
    }
    let schemes = grid
        .iter()
        .map(|&w_c| CombinationScheme::new(config.scheme, w_c))
        .collect::<salobj::Result<Vec<_>>>()?;
    log::info!(
        "sweeping {} weights of {} over {} images",
        grid.len(),
        config.algorithm,
        index.len()
    );
    let params = config.params();
    let sweep = with_threads(config.threads, || {
        evaluate_schemes(&index.entries, config.algorithm, &params, &schemes, beta2)
    })??;

    std::fs::create_dir_all(out)?;
    let mut csv = std::io::BufWriter::new(std::fs::File::create(out.join("sweep.csv"))?);
    writeln!(csv, "w_c,{}", Measures::NAMES.join(","))?;
    for (w, report) in grid.iter().zip(&sweep.reports) {
        let m = report.aggregate.as_array();
        writeln!(
            csv,
            "{w:.4},{:.6},{:.6},{:.6},{:.6},{:.6}",
            m[0], m[1], m[2], m[3], m[4]
        )?;
    }
    csv.flush()?;

    let best = Measures::NAMES
        .iter()
        .enumerate()
        .map(|(k, &measure)| {
            let column: Vec<f64> = sweep.reports.iter().map(|r| r.aggregate.as_array()[k]).collect();
            let i = argmax(&column);
            Best {
                measure,
                w_c: grid[i],
                value: column[i],
            }
        })
        .collect::<Vec<_>>();
    for b in &best {
        log::info!("best {}: w_C = {:.3} ({:.4})", b.measure, b.w_c, b.value);
    }
    let summary = SweepSummary {
        config_hash: config.hash(),
        algorithm: config.algorithm.name().to_owned(),
        scheme: config.scheme.to_string(),
        step,
        best,
        failed: sweep.failures.iter().map(|(s, _)| s.clone()).collect(),
    };
    write_json(&out.join("sweep.json"), &summary)?;
    Ok(Outcome::from_warnings(sweep.failures.len() + index.warnings()))
}

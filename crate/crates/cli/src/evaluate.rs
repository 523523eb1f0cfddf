use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use salobj::batch::{ordered_for_each, with_threads};
use salobj::dataset::{load_mask, rasters_by_stem};
use salobj::evaluation::{evaluate_image, DatasetAccumulator, EvalReport, ImageEvaluation, Measures};
use salobj::SaliencyMap;
use serde::Serialize;

use crate::args::ConfigArgs;
use crate::manifest::{read_json, write_json, Manifest};
use crate::Outcome;

pub struct Options {
    pub maps: PathBuf,
    pub masks: PathBuf,
    pub out: PathBuf,
    pub baseline: Option<PathBuf>,
    pub force: bool,
    pub beta2: f64,
}

#[derive(Debug, Serialize)]
struct RelativeReport {
    algorithm: Option<String>,
    baseline_algorithm: Option<String>,
    /// `100 · measure / baseline measure`, aggregate measures
    relative_percent: BTreeMap<&'static str, f64>,
}

/// Map file for each stem: from the manifest when present, otherwise every
/// raster in the directory keyed by its stem.
fn map_files(dir: &Path, manifest: Option<&Manifest>) -> Result<BTreeMap<String, PathBuf>> {
    Ok(match manifest {
        Some(m) => m.maps.iter().map(|f| (f.stem.clone(), dir.join(&f.file))).collect(),
        None => rasters_by_stem(dir)?.0,
    })
}

fn evaluate_one(map: Option<&PathBuf>, mask: &Path, beta2: f64) -> salobj::Result<Option<ImageEvaluation>> {
    let Some(map) = map else { return Ok(None) };
    let gt = load_mask(mask)?;
    Ok(Some(evaluate_image(&SaliencyMap::load_png(map)?, &gt, beta2)?))
}

pub fn run(opts: &Options, args: &ConfigArgs) -> Result<Outcome> {
    if !opts.maps.is_dir() {
        bail!("map directory {} not found", opts.maps.display());
    }
    let manifest = Manifest::load(&opts.maps)?;
    match &manifest {
        None if !opts.force => bail!(
            "{} has no manifest; use --force to evaluate anyway",
            opts.maps.display()
        ),
        Some(m) if args.any_set() => {
            let expected = args.resolve()?.hash();
            if expected != m.config_hash && !opts.force {
                bail!(
                    "maps were computed with configuration {}, not {expected}; use --force to mix",
                    m.config_hash
                );
            }
        }
        _ => {}
    }
    let maps = map_files(&opts.maps, manifest.as_ref())?;
    if maps.is_empty() {
        bail!("no saliency maps in {}", opts.maps.display());
    }
    let (masks, _) = rasters_by_stem(&opts.masks)?;
    if masks.is_empty() {
        bail!("no masks in {}", opts.masks.display());
    }

    let masks: Vec<(String, PathBuf)> = masks.into_iter().collect();
    let threads = args.threads.unwrap_or(0);
    let mut acc = DatasetAccumulator::new();
    let mut warnings = 0usize;
    with_threads(threads, || {
        ordered_for_each(
            &masks,
            |(stem, mask)| evaluate_one(maps.get(stem), mask, opts.beta2),
            |(stem, _), result| match result {
                Ok(Some(e)) => {
                    if e.rates.is_none() {
                        log::warn!("{stem}: mask is empty, left out of the aggregates");
                        warnings += 1;
                    }
                    acc.add(stem, &e);
                }
                Ok(None) => {
                    log::warn!("{stem}: no saliency map");
                    warnings += 1;
                    acc.exclude(stem);
                }
                Err(e) => {
                    log::warn!("{stem}: {e}");
                    warnings += 1;
                    acc.exclude(stem);
                }
            },
        )
    })?;

    let mut report = acc.finish(opts.beta2)?;
    report.config_hash = manifest.as_ref().map(|m| m.config_hash.clone());
    report.algorithm = manifest.as_ref().map(|m| m.algorithm.clone());
    std::fs::create_dir_all(&opts.out)?;
    write_json(&opts.out.join("report.json"), &report)?;
    let curves = opts.out.join("curves.csv");
    report.write_curve_csv(std::io::BufWriter::new(std::fs::File::create(&curves)?))?;
    log_measures("aggregate", &report.aggregate);

    if let Some(path) = &opts.baseline {
        let baseline: EvalReport = read_json(path).with_context(|| format!("baseline {}", path.display()))?;
        let rel = report.aggregate.relative_to(&baseline.aggregate);
        let relative = RelativeReport {
            algorithm: report.algorithm.clone(),
            baseline_algorithm: baseline.algorithm.clone(),
            relative_percent: Measures::NAMES.into_iter().zip(rel).collect(),
        };
        write_json(&opts.out.join("relative.json"), &relative)?;
        log::info!("relative to baseline (%): {:?}", relative.relative_percent);
    }
    Ok(Outcome::from_warnings(warnings))
}

pub fn log_measures(label: &str, m: &Measures) {
    log::info!(
        "{label}: F1 {:.4}  F_beta {:.4}  AUC-PR {:.4}  AUC-ROC {:.4}  HR {:.4}",
        m.f1,
        m.f_beta,
        m.auc_pr,
        m.auc_roc,
        m.hit_rate
    );
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use salobj::batch::{ordered_for_each, with_threads};
use salobj::dataset::{index_dataset, load_rgb, rasters_by_stem};
use salobj::pipeline::compute_map;

use crate::args::ConfigArgs;
use crate::manifest::{Failure, Manifest, MapFile};
use crate::Outcome;

pub fn run(images: &Path, masks: Option<&Path>, out: &Path, force: bool, args: &ConfigArgs) -> Result<Outcome> {
    let config = args.resolve()?;
    let hash = config.hash();
    let (inputs, skipped): (Vec<(String, PathBuf)>, Vec<PathBuf>) = match masks {
        Some(masks) => {
            let index = index_dataset(images, masks)?;
            (
                index.entries.into_iter().map(|e| (e.stem, e.image)).collect(),
                index.skipped,
            )
        }
        None => {
            let (by_stem, duplicates): (BTreeMap<String, PathBuf>, _) = rasters_by_stem(images)?;
            (by_stem.into_iter().collect(), duplicates)
        }
    };
    if inputs.is_empty() {
        bail!("no images found in {}", images.display());
    }
    std::fs::create_dir_all(out)?;
    if let Some(previous) = Manifest::load(out)? {
        if previous.config_hash != hash && !force {
            bail!(
                "{} holds maps of configuration {}; use --force to overwrite with {hash}",
                out.display(),
                previous.config_hash
            );
        }
    }

    let algorithm = config.algorithm;
    let params = config.params();
    let scheme = config.scheme()?;
    log::info!(
        "computing {} maps for {} images (config {hash})",
        algorithm.name(),
        inputs.len()
    );

    let mut maps = Vec::new();
    let mut failed = Vec::new();
    with_threads(config.threads, || {
        ordered_for_each(
            &inputs,
            |(stem, path)| -> salobj::Result<String> {
                let img = load_rgb(path)?;
                let map = compute_map(&img, algorithm, &params, &scheme)?;
                let file = format!("{stem}_{}.png", algorithm.slug());
                map.save_png(&out.join(&file))?;
                Ok(file)
            },
            |(stem, _), result| match result {
                Ok(file) => maps.push(MapFile {
                    stem: stem.clone(),
                    file,
                }),
                Err(e) => {
                    log::warn!("{stem}: {e}");
                    failed.push(Failure {
                        stem: stem.clone(),
                        error: e.to_string(),
                    });
                }
            },
        )
    })?;

    let mut recorded = config.clone();
    recorded.threads = 0;
    recorded.output = None;
    let manifest = Manifest {
        config_hash: hash,
        algorithm: algorithm.name().to_owned(),
        config: recorded,
        maps,
        failed,
        skipped: skipped
            .iter()
            .map(|p| {
                p.file_name()
                    .map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
            })
            .collect(),
    };
    manifest.save(out)?;
    log::info!(
        "{} maps written, {} failed, {} skipped",
        manifest.maps.len(),
        manifest.failed.len(),
        manifest.skipped.len()
    );
    Ok(Outcome::from_warnings(manifest.failed.len() + manifest.skipped.len()))
}

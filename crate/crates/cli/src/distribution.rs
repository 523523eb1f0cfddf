use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};
use salobj::dataset::{load_mask, rasters_by_stem};
use salobj::stats::{analyze_centroids, mask_centroid, qq_pairs, to_polar, DistributionAnalysis, MeanMask, Reference};
use serde::Serialize;

use crate::manifest::write_json;
use crate::Outcome;

#[derive(Debug, Serialize)]
struct DistributionReport {
    masks: usize,
    empty_masks: Vec<String>,
    unreadable: Vec<String>,
    analysis: DistributionAnalysis,
}

pub fn run(masks: &Path, out: &Path, mean_mask_size: usize, alpha: f64) -> Result<Outcome> {
    if mean_mask_size == 0 {
        bail!("mean mask size must be positive");
    }
    let (files, _) = rasters_by_stem(masks)?;
    if files.is_empty() {
        bail!("no masks in {}", masks.display());
    }
    let mut mean = MeanMask::new(mean_mask_size, mean_mask_size);
    let mut stems = Vec::new();
    let mut centroids = Vec::new();
    let mut empty = Vec::new();
    let mut unreadable = Vec::new();
    for (stem, path) in &files {
        let gt = match load_mask(path) {
            Ok(gt) => gt,
            Err(e) => {
                log::warn!("{stem}: {e}");
                unreadable.push(stem.clone());
                continue;
            }
        };
        mean.add(&gt);
        match mask_centroid(&gt) {
            Ok(c) => {
                stems.push(stem.clone());
                centroids.push(c);
            }
            Err(_) => empty.push(stem.clone()),
        }
    }
    if !empty.is_empty() {
        log::warn!("{} empty masks skipped", empty.len());
    }
    let analysis = analyze_centroids(&centroids, alpha)?;

    std::fs::create_dir_all(out)?;
    let mut csv = std::io::BufWriter::new(std::fs::File::create(out.join("centroids.csv"))?);
    writeln!(csv, "stem,x,y,theta,r,theta_signed,r_signed")?;
    let polar: Vec<_> = centroids.iter().map(|&c| to_polar(c)).collect();
    for ((stem, &(x, y)), p) in stems.iter().zip(&centroids).zip(&polar) {
        let (ts, rs) = p.signed();
        writeln!(csv, "{stem},{x:.8},{y:.8},{:.8},{:.8},{ts:.8},{rs:.8}", p.theta, p.r)?;
    }
    csv.flush()?;
    mean.finish()?.save_png(&out.join("mean_mask.png"))?;

    let series: [(&str, Vec<f64>, Reference); 3] = [
        (
            "qq_angle.csv",
            polar.iter().map(|p| p.theta).collect(),
            Reference::Uniform,
        ),
        (
            "qq_radius.csv",
            polar.iter().map(|p| p.r).collect(),
            Reference::HalfGaussian,
        ),
        (
            "qq_signed_radius.csv",
            polar.iter().map(|p| p.signed().1).collect(),
            Reference::Gaussian,
        ),
    ];
    for (file, samples, reference) in series {
        if let Ok(qq) = qq_pairs(&samples, reference) {
            qq.write_csv(std::io::BufWriter::new(std::fs::File::create(out.join(file))?))?;
        }
    }

    let s = &analysis.summary;
    log::info!(
        "mean centroid ({:.4}, {:.4}), variances ({:.4}, {:.4})",
        s.mean[0],
        s.mean[1],
        s.covariance[0][0],
        s.covariance[1][1]
    );
    for (name, fit) in [
        ("angle", &analysis.angle),
        ("radius", &analysis.radius),
        ("signed radius", &analysis.signed_radius),
    ] {
        if let Some(f) = fit {
            log::info!(
                "{name}: PPCC {:.4} vs {} ({})",
                f.ppcc,
                f.reference,
                match f.ppcc_test {
                    Some(t) if t.rejected => "rejected",
                    Some(_) => "not rejected",
                    None => "outside table",
                }
            );
        }
    }
    let warnings = empty.len() + unreadable.len() + analysis.degenerate.len();
    let report = DistributionReport {
        masks: files.len(),
        empty_masks: empty,
        unreadable,
        analysis,
    };
    write_json(&out.join("distribution.json"), &report)?;
    Ok(Outcome::from_warnings(warnings))
}

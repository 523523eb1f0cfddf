//! Dataset-wide runs: per-image work in parallel, results folded in dataset
//! order so that output never depends on the number of threads.

use rayon::prelude::*;

use crate::centerbias::CombinationScheme;
use crate::dataset::{load_pair, DatasetEntry};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_image, DatasetAccumulator, EvalReport, ImageEvaluation};
use crate::pipeline::{compute_components, Algorithm, SaliencyParams};

/// Images processed concurrently before their results are folded.
pub const CHUNK: usize = 64;

/// Applies `f` to every item in parallel and hands the results to `sink`
/// one by one in input order.
pub fn ordered_for_each<T, R>(items: &[T], f: impl Fn(&T) -> R + Sync, mut sink: impl FnMut(&T, R))
where
    T: Sync,
    R: Send,
{
    for chunk in items.chunks(CHUNK) {
        let results: Vec<R> = chunk.par_iter().map(&f).collect();
        for (item, r) in chunk.iter().zip(results) {
            sink(item, r);
        }
    }
}

/// Runs `f` on a pool of `threads` workers; 0 uses one per CPU.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluation of one algorithm under several combination schemes.
#[derive(Debug, Clone)]
pub struct SchemeSweep {
    pub schemes: Vec<CombinationScheme>,
    /// One report per scheme, in the same order.
    pub reports: Vec<EvalReport>,
    /// Images that could not be processed, with the reason.
    pub failures: Vec<(String, String)>,
}

fn evaluate_entry(
    entry: &DatasetEntry,
    algorithm: Algorithm,
    params: &SaliencyParams,
    schemes: &[CombinationScheme],
    beta2: f64,
) -> Result<Vec<ImageEvaluation>> {
    let (img, gt) = load_pair(entry)?;
    let components = compute_components(&img, algorithm, params)?;
    schemes
        .iter()
        .map(|s| evaluate_image(&components.combine(s)?, &gt, beta2))
        .collect()
}

/// Computes maps for every entry and evaluates them under each scheme. The
/// bottom-up map and prior are computed once per image.
pub fn evaluate_schemes(
    entries: &[DatasetEntry],
    algorithm: Algorithm,
    params: &SaliencyParams,
    schemes: &[CombinationScheme],
    beta2: f64,
) -> Result<SchemeSweep> {
    if schemes.is_empty() {
        return Err(Error::InvalidParameter("no combination scheme to evaluate".into()));
    }
    params.validate()?;
    for s in schemes {
        s.validate()?;
    }
    let mut accumulators = vec![DatasetAccumulator::new(); schemes.len()];
    let mut failures = Vec::new();
    ordered_for_each(
        entries,
        |e| evaluate_entry(e, algorithm, params, schemes, beta2),
        |entry, result| match result {
            Ok(evals) => {
                for (acc, e) in accumulators.iter_mut().zip(&evals) {
                    acc.add(&entry.stem, e);
                }
            }
            Err(err) => {
                log::warn!("{}: {err}", entry.stem);
                failures.push((entry.stem.clone(), err.to_string()));
                for acc in &mut accumulators {
                    acc.exclude(&entry.stem);
                }
            }
        },
    );
    let reports = accumulators
        .into_iter()
        .map(|acc| {
            let mut report = acc.finish(beta2)?;
            report.algorithm = Some(algorithm.name().to_owned());
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchemeSweep {
        schemes: schemes.to_vec(),
        reports,
        failures,
    })
}

/// Evaluates one algorithm under one scheme.
pub fn evaluate_algorithm(
    entries: &[DatasetEntry],
    algorithm: Algorithm,
    params: &SaliencyParams,
    scheme: &CombinationScheme,
    beta2: f64,
) -> Result<(EvalReport, Vec<(String, String)>)> {
    let mut sweep = evaluate_schemes(entries, algorithm, params, std::slice::from_ref(scheme), beta2)?;
    Ok((sweep.reports.remove(0), sweep.failures))
}

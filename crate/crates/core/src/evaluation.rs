//! Saliency maps as binary classifiers: threshold sweeps, PR/ROC curves and
//! their areas, maximum F-scores and hit-rate, per image and macro-averaged
//! over a dataset.
//!
//! Maps are evaluated on their 8-bit levels `q = round(255·s)`; at threshold
//! `t` a pixel is a positive iff `q >= t`, for `t` in `0..=255`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::GroundTruthMask;
use crate::error::{Error, Result};
use crate::map::SaliencyMap;

pub const LEVELS: usize = 256;

/// `β² = 0.3`, weighting precision more than recall.
pub const DEFAULT_BETA2: f64 = 0.3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

/// Confusion counts at each of the 256 threshold levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionSeries {
    pub levels: Vec<Confusion>,
    pub positives: u64,
    pub negatives: u64,
}

impl ConfusionSeries {
    pub fn at(&self, t: usize) -> Confusion {
        self.levels[t]
    }

    /// Precision, recall, FPR and TPR at every threshold.
    ///
    /// Where a threshold yields no predicted positives, precision carries over
    /// from the next lower threshold (its recall there is 0). Requires at
    /// least one ground-truth positive.
    pub fn rates(&self) -> Result<Rates> {
        if self.positives == 0 {
            return Err(Error::EmptyMask);
        }
        let p = self.positives as f64;
        let n = self.negatives as f64;
        let mut rates = Rates::default();
        for (t, c) in self.levels.iter().enumerate() {
            let predicted = c.tp + c.fp;
            let precision = if predicted > 0 {
                c.tp as f64 / predicted as f64
            } else {
                rates.precision[t - 1]
            };
            rates.precision[t] = precision;
            rates.recall[t] = c.tp as f64 / p;
            rates.tpr[t] = rates.recall[t];
            rates.fpr[t] = if self.negatives > 0 { c.fp as f64 / n } else { 0.0 };
        }
        Ok(rates)
    }
}

/// Per-threshold rates, indexed by threshold level.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates {
    pub precision: [f64; LEVELS],
    pub recall: [f64; LEVELS],
    pub fpr: [f64; LEVELS],
    pub tpr: [f64; LEVELS],
}

impl Default for Rates {
    fn default() -> Self {
        Self {
            precision: [0.0; LEVELS],
            recall: [0.0; LEVELS],
            fpr: [0.0; LEVELS],
            tpr: [0.0; LEVELS],
        }
    }
}

fn check_dims(map: &SaliencyMap, gt: &GroundTruthMask) -> Result<()> {
    if map.dims() != (gt.width(), gt.height()) {
        return Err(Error::DimensionMismatch {
            left: map.dims(),
            right: (gt.width(), gt.height()),
        });
    }
    Ok(())
}

/// Exact confusion counts at all 256 levels.
pub fn sweep_confusion(map: &SaliencyMap, gt: &GroundTruthMask) -> Result<ConfusionSeries> {
    check_dims(map, gt)?;
    let mut pos = [0u64; LEVELS];
    let mut neg = [0u64; LEVELS];
    for (q, &g) in map.quantized().into_iter().zip(gt.bits()) {
        if g {
            pos[q as usize] += 1;
        } else {
            neg[q as usize] += 1;
        }
    }
    let positives: u64 = pos.iter().sum();
    let negatives: u64 = neg.iter().sum();
    let mut levels = vec![Confusion::default(); LEVELS];
    let (mut tp, mut fp) = (0u64, 0u64);
    for t in (0..LEVELS).rev() {
        tp += pos[t];
        fp += neg[t];
        levels[t] = Confusion {
            tp,
            fp,
            tn: negatives - fp,
            fn_: positives - tp,
        };
    }
    Ok(ConfusionSeries {
        levels,
        positives,
        negatives,
    })
}

/// Exact area under the interpolated precision-recall curve of `(recall,
/// precision)` points ordered by non-decreasing recall.
///
/// Between neighboring operating points, true and false positive counts are
/// interpolated linearly, which makes precision a hyperbolic function of
/// recall; each segment is integrated in closed form. The curve is extended
/// flat from its first point down to recall 0.
pub fn interpolated_pr_area(points: &[(f64, f64)]) -> f64 {
    let mut area = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for &(recall, precision) in points {
        if recall <= 0.0 || precision <= 0.0 {
            continue;
        }
        // counts relative to the number of ground-truth positives
        let tp = recall;
        let fp = recall * (1.0 - precision) / precision;
        area += match prev {
            None => recall * precision,
            Some((tp0, fp0)) => interpolated_segment(tp0, fp0, tp, fp),
        };
        prev = Some((tp, fp));
    }
    area
}

/// `∫ tp / (tp + fp(tp)) d tp` from `tp0` to `tp1` with `fp` linear in `tp`.
fn interpolated_segment(tp0: f64, fp0: f64, tp1: f64, fp1: f64) -> f64 {
    let dtp = tp1 - tp0;
    if dtp <= 0.0 {
        return 0.0;
    }
    let skew = (fp1 - fp0) / dtp;
    let a = 1.0 + skew;
    let b = fp0 - skew * tp0;
    dtp / a - b / (a * a) * (a * dtp / (tp0 + fp0)).ln_1p()
}

/// Precision-recall points ordered by recall, and the interpolated area.
pub fn pr_curve_and_auc(rates: &Rates) -> (Vec<(f64, f64)>, f64) {
    let points: Vec<(f64, f64)> = (0..LEVELS)
        .rev()
        .map(|t| (rates.recall[t], rates.precision[t]))
        .collect();
    let area = interpolated_pr_area(&points);
    (points, area)
}

/// `(FPR, TPR)` points from `(0, 0)` to `(1, 1)` and the trapezoidal area.
pub fn roc_curve_and_auc(rates: &Rates) -> (Vec<(f64, f64)>, f64) {
    let mut points = Vec::with_capacity(LEVELS + 1);
    points.push((0.0, 0.0));
    points.extend((0..LEVELS).rev().map(|t| (rates.fpr[t], rates.tpr[t])));
    let area = points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum();
    (points, area)
}

/// `F_β = (1 + β²)·P·R / (β²·P + R)`, 0 where `P + R = 0`.
pub fn f_score(precision: f64, recall: f64, beta2: f64) -> f64 {
    let denom = beta2 * precision + recall;
    if denom <= 0.0 {
        0.0
    } else {
        (1.0 + beta2) * precision * recall / denom
    }
}

/// Maximum `F_1` and maximum `F_β` over all thresholds.
pub fn max_f_scores(rates: &Rates, beta2: f64) -> (f64, f64) {
    (0..LEVELS).fold((0.0f64, 0.0f64), |(f1, fb), t| {
        let (p, r) = (rates.precision[t], rates.recall[t]);
        (f1.max(f_score(p, r, 1.0)), fb.max(f_score(p, r, beta2)))
    })
}

/// True iff some pixel at the map's maximum 8-bit level lies on the object.
pub fn hit_rate(map: &SaliencyMap, gt: &GroundTruthMask) -> Result<bool> {
    check_dims(map, gt)?;
    let q = map.quantized();
    let max = q.iter().copied().max().unwrap_or(0);
    Ok(q.iter().zip(gt.bits()).any(|(&v, &g)| g && v == max))
}

/// Reads `null` (how JSON stores an undefined measure) as NaN.
fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// The five scalar measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    #[serde(deserialize_with = "nan_if_null")]
    pub f1: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub f_beta: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub auc_pr: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub auc_roc: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub hit_rate: f64,
}

impl Measures {
    pub const NAMES: [&'static str; 5] = ["f1", "f_beta", "auc_pr", "auc_roc", "hit_rate"];

    pub fn as_array(&self) -> [f64; 5] {
        [self.f1, self.f_beta, self.auc_pr, self.auc_roc, self.hit_rate]
    }

    /// `100 · self / baseline` per measure.
    pub fn relative_to(&self, baseline: &Measures) -> [f64; 5] {
        let (a, b) = (self.as_array(), baseline.as_array());
        std::array::from_fn(|i| 100.0 * a[i] / b[i])
    }
}

/// Evaluation of one map against its mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEvaluation {
    pub positives: u64,
    pub negatives: u64,
    /// `None` when the mask has no positives.
    pub rates: Option<Rates>,
    pub f1: f64,
    pub f_beta: f64,
    pub auc_pr: f64,
    /// `None` when the mask has no negatives (or no positives).
    pub auc_roc: Option<f64>,
    pub hit: bool,
}

impl ImageEvaluation {
    pub fn flags(&self) -> Vec<String> {
        let mut flags = Vec::new();
        if self.positives == 0 {
            flags.push("empty-mask".to_owned());
        }
        if self.negatives == 0 {
            flags.push("full-mask".to_owned());
        }
        flags
    }
}

pub fn evaluate_image(map: &SaliencyMap, gt: &GroundTruthMask, beta2: f64) -> Result<ImageEvaluation> {
    let series = sweep_confusion(map, gt)?;
    let hit = hit_rate(map, gt)?;
    let Ok(rates) = series.rates() else {
        return Ok(ImageEvaluation {
            positives: 0,
            negatives: series.negatives,
            rates: None,
            f1: 0.0,
            f_beta: 0.0,
            auc_pr: 0.0,
            auc_roc: None,
            hit,
        });
    };
    let (f1, f_beta) = max_f_scores(&rates, beta2);
    let (_, auc_pr) = pr_curve_and_auc(&rates);
    let auc_roc = (series.negatives > 0).then(|| roc_curve_and_auc(&rates).1);
    Ok(ImageEvaluation {
        positives: series.positives,
        negatives: series.negatives,
        rates: Some(rates),
        f1,
        f_beta,
        auc_pr,
        auc_roc,
        hit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub stem: String,
    pub f1: f64,
    pub f_beta: f64,
    pub auc_pr: f64,
    pub auc_roc: Option<f64>,
    pub hit: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: u32,
    pub precision: f64,
    pub recall: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub fpr: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub tpr: f64,
}

/// Dataset-level report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(default)]
    pub config_hash: Option<String>,
    #[serde(default)]
    pub algorithm: Option<String>,
    pub images_evaluated: usize,
    /// Measures of the macro-averaged curves; hit-rate is the mean hit.
    pub aggregate: Measures,
    /// Arithmetic mean of the per-image measures.
    pub mean_per_image: Measures,
    pub curve: Vec<CurvePoint>,
    pub images: Vec<ImageRecord>,
    /// Stems left out of the aggregates, e.g. empty masks or missing maps.
    #[serde(default)]
    pub excluded: Vec<String>,
}

impl EvalReport {
    /// Per-image values of one measure, keyed by stem. Images with an empty
    /// mask are left out, as are full masks for `auc_roc`.
    pub fn per_image(&self, measure: &str) -> Option<Vec<(String, f64)>> {
        self.images
            .iter()
            .filter(|r| !r.flags.iter().any(|f| f == "empty-mask"))
            .map(|r| {
                let v = match measure {
                    "f1" => Some(r.f1),
                    "f_beta" => Some(r.f_beta),
                    "auc_pr" => Some(r.auc_pr),
                    "auc_roc" => r.auc_roc,
                    "hit_rate" => Some(if r.hit { 1.0 } else { 0.0 }),
                    _ => return None,
                };
                Some(v.map(|v| (r.stem.clone(), v)))
            })
            .collect::<Option<Vec<Option<(String, f64)>>>>()
            .map(|v| v.into_iter().flatten().collect())
    }

    pub fn write_curve_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "threshold,precision,recall,fpr,tpr")?;
        for p in &self.curve {
            writeln!(
                out,
                "{},{:.10},{:.10},{:.10},{:.10}",
                p.threshold, p.precision, p.recall, p.fpr, p.tpr
            )?;
        }
        Ok(())
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(file, self).map_err(std::io::Error::from)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(file).map_err(std::io::Error::from)?)
    }
}

fn add_rates(acc: &mut Rates, r: &Rates) {
    for t in 0..LEVELS {
        acc.precision[t] += r.precision[t];
        acc.recall[t] += r.recall[t];
        acc.fpr[t] += r.fpr[t];
        acc.tpr[t] += r.tpr[t];
    }
}

fn scale_rates(r: &Rates, n: usize) -> Rates {
    let mut out = r.clone();
    let n = n as f64;
    for t in 0..LEVELS {
        out.precision[t] /= n;
        out.recall[t] /= n;
        out.fpr[t] /= n;
        out.tpr[t] /= n;
    }
    out
}

/// Streaming dataset aggregation.
///
/// Per-threshold rates are macro-averaged over images with a nonempty mask,
/// and the aggregate measures are derived from the averaged curves. ROC
/// rates are averaged only over images that also have negatives. Images are
/// summed in the order they are added, so the result does not depend on how
/// the per-image work was scheduled.
#[derive(Debug, Clone, Default)]
pub struct DatasetAccumulator {
    pr_sum: Rates,
    pr_count: usize,
    roc_sum: Rates,
    roc_count: usize,
    hits: usize,
    f1: f64,
    f_beta: f64,
    auc_pr: f64,
    auc_roc: f64,
    records: Vec<ImageRecord>,
    excluded: Vec<String>,
}

impl DatasetAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, stem: &str, e: &ImageEvaluation) {
        self.records.push(ImageRecord {
            stem: stem.to_owned(),
            f1: e.f1,
            f_beta: e.f_beta,
            auc_pr: e.auc_pr,
            auc_roc: e.auc_roc,
            hit: e.hit,
            flags: e.flags(),
        });
        let Some(rates) = &e.rates else {
            self.excluded.push(stem.to_owned());
            return;
        };
        add_rates(&mut self.pr_sum, rates);
        self.pr_count += 1;
        if let Some(roc) = e.auc_roc {
            add_rates(&mut self.roc_sum, rates);
            self.roc_count += 1;
            self.auc_roc += roc;
        }
        self.hits += usize::from(e.hit);
        self.f1 += e.f1;
        self.f_beta += e.f_beta;
        self.auc_pr += e.auc_pr;
    }

    /// Records an image that could not be evaluated at all.
    pub fn exclude(&mut self, stem: &str) {
        self.excluded.push(stem.to_owned());
    }

    pub fn images_evaluated(&self) -> usize {
        self.pr_count
    }

    pub fn finish(self, beta2: f64) -> Result<EvalReport> {
        if self.pr_count == 0 {
            return Err(Error::InvalidParameter(
                "no image with a nonempty mask to aggregate".into(),
            ));
        }
        let pr_mean = scale_rates(&self.pr_sum, self.pr_count);
        let roc_mean = (self.roc_count > 0).then(|| scale_rates(&self.roc_sum, self.roc_count));

        let (f1, f_beta) = max_f_scores(&pr_mean, beta2);
        let (_, auc_pr) = pr_curve_and_auc(&pr_mean);
        let auc_roc = roc_mean.as_ref().map_or(f64::NAN, |r| roc_curve_and_auc(r).1);
        let n = self.pr_count as f64;
        let hit_rate = self.hits as f64 / n;
        let mean_per_image = Measures {
            f1: self.f1 / n,
            f_beta: self.f_beta / n,
            auc_pr: self.auc_pr / n,
            auc_roc: self.auc_roc / self.roc_count as f64,
            hit_rate,
        };
        let curve = (0..LEVELS)
            .map(|t| CurvePoint {
                threshold: t as u32,
                precision: pr_mean.precision[t],
                recall: pr_mean.recall[t],
                fpr: roc_mean.as_ref().map_or(f64::NAN, |r| r.fpr[t]),
                tpr: roc_mean.as_ref().map_or(f64::NAN, |r| r.tpr[t]),
            })
            .collect();
        Ok(EvalReport {
            config_hash: None,
            algorithm: None,
            images_evaluated: self.pr_count,
            aggregate: Measures {
                f1,
                f_beta,
                auc_pr,
                auc_roc,
                hit_rate,
            },
            mean_per_image,
            curve,
            images: self.records,
            excluded: self.excluded,
        })
    }
}

/// Aggregates per-image evaluations in the given order.
pub fn aggregate_dataset(per_image: &[(String, ImageEvaluation)], beta2: f64) -> Result<EvalReport> {
    let mut acc = DatasetAccumulator::new();
    for (stem, e) in per_image {
        acc.add(stem, e);
    }
    acc.finish(beta2)
}

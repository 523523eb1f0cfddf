//! Strategies and independent oracles shared by the property tests and the
//! acceptance runner.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use salobj::centerbias::{combine, CombinationScheme, SchemeKind};
use salobj::color::Lab;
use salobj::dataset::{rgb_to_lab, GroundTruthMask, LabImage, RgbImage};
use salobj::evaluation::evaluate_image;
use salobj::pixel::{msss, IntegralImage};
use salobj::region::{
    build_palette, region_contrast, region_contrast_scores, spatial_weights, ColorPalette, PaletteParams,
};
use salobj::segmentation::{pre_merge_components, region_stats, RegionInfo, RegionTable, Segmentation};
use salobj::stats::{
    filliben_medians, inverse_normal_cdf, normal_cdf, ppcc, qq_pairs, student_t_tail, two_sample_t_test, Hypothesis,
    Reference, SampleMode,
};
use salobj::SaliencyMap;

pub type CheckResult = Result<(), TestCaseError>;

// ---------------------------------------------------------------------------
// Evaluation

/// A small map on at most four 8-bit levels, and a mask.
#[derive(Debug, Clone)]
pub struct MetricCase {
    pub width: usize,
    pub height: usize,
    pub levels: Vec<u8>,
    pub mask: Vec<bool>,
}

impl MetricCase {
    pub fn map(&self) -> SaliencyMap {
        SaliencyMap::from_raw(
            self.width,
            self.height,
            self.levels.iter().map(|&l| f64::from(l) / 255.0).collect(),
        )
        .unwrap()
    }

    pub fn gt(&self) -> GroundTruthMask {
        GroundTruthMask::new(self.width, self.height, self.mask.clone()).unwrap()
    }
}

pub fn metric_case() -> impl Strategy<Value = MetricCase> {
    (1usize..=8, 1usize..=8, prop::collection::btree_set(any::<u8>(), 1..=4)).prop_flat_map(|(w, h, palette)| {
        let palette: Vec<u8> = palette.into_iter().collect();
        let n = w * h;
        (
            prop::collection::vec(prop::sample::select(palette), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(levels, mask)| MetricCase {
                width: w,
                height: h,
                levels,
                mask,
            })
    })
}

pub struct OracleMeasures {
    pub f1: f64,
    pub f_beta: f64,
    pub auc_pr: f64,
    pub auc_roc: Option<f64>,
    pub hit: bool,
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Every measure computed by exhaustive enumeration over thresholds and
/// pixel pairs. Requires at least one positive.
pub fn oracle_measures(case: &MetricCase, beta2: f64) -> OracleMeasures {
    let p = case.mask.iter().filter(|&&g| g).count();
    let n = case.mask.len() - p;
    let counts = |t: u32| {
        let mut tp = 0usize;
        let mut fp = 0usize;
        for (&l, &g) in case.levels.iter().zip(&case.mask) {
            if u32::from(l) >= t {
                if g {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        (tp, fp)
    };

    let f = |prec: f64, rec: f64, b2: f64| {
        if prec + rec == 0.0 {
            0.0
        } else {
            (1.0 + b2) * prec * rec / (b2 * prec + rec)
        }
    };
    let mut f1 = 0.0f64;
    let mut f_beta = 0.0f64;
    // operating points in order of decreasing threshold
    let mut points: Vec<(f64, f64)> = Vec::new();
    for t in (0..=255u32).rev() {
        let (tp, fp) = counts(t);
        if tp == 0 {
            continue;
        }
        let prec = tp as f64 / (tp + fp) as f64;
        let rec = tp as f64 / p as f64;
        f1 = f1.max(f(prec, rec, 1.0));
        f_beta = f_beta.max(f(prec, rec, beta2));
        points.push((tp as f64, fp as f64));
    }

    let mut auc_pr = 0.0;
    if let Some(&(tp0, fp0)) = points.first() {
        auc_pr += tp0 / (tp0 + fp0) * tp0 / p as f64;
    }
    for w in points.windows(2) {
        let ((ta, fa), (tb, fb)) = (w[0], w[1]);
        if tb <= ta {
            continue;
        }
        let slope = (fb - fa) / (tb - ta);
        let precision = |tp: f64| tp / (tp + fa + slope * (tp - ta));
        auc_pr += adaptive_simpson(&precision, ta, tb, 1e-14) / p as f64;
    }

    let auc_roc = (n > 0).then(|| {
        let mut score = 0.0;
        for (&lp, _) in case.levels.iter().zip(&case.mask).filter(|(_, &g)| g) {
            for (&ln, _) in case.levels.iter().zip(&case.mask).filter(|(_, &g)| !g) {
                score += match lp.cmp(&ln) {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Less => 0.0,
                };
            }
        }
        score / (p * n) as f64
    });

    let top = *case.levels.iter().max().unwrap();
    let hit = case.levels.iter().zip(&case.mask).any(|(&l, &g)| g && l == top);
    OracleMeasures {
        f1,
        f_beta,
        auc_pr,
        auc_roc,
        hit,
    }
}

pub fn check_metric_oracle(case: &MetricCase) -> CheckResult {
    if !case.mask.contains(&true) {
        let e = evaluate_image(&case.map(), &case.gt(), 0.3).unwrap();
        prop_assert!(e.rates.is_none());
        return Ok(());
    }
    let beta2 = 0.3;
    let e = evaluate_image(&case.map(), &case.gt(), beta2).unwrap();
    let o = oracle_measures(case, beta2);
    prop_assert!((e.f1 - o.f1).abs() < 1e-9, "F1 {} vs {}", e.f1, o.f1);
    prop_assert!(
        (e.f_beta - o.f_beta).abs() < 1e-9,
        "F_beta {} vs {}",
        e.f_beta,
        o.f_beta
    );
    prop_assert!(
        (e.auc_pr - o.auc_pr).abs() < 1e-9,
        "AUC-PR {} vs {}",
        e.auc_pr,
        o.auc_pr
    );
    match (e.auc_roc, o.auc_roc) {
        (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-9, "AUC-ROC {a} vs {b}"),
        (None, None) => {}
        (a, b) => prop_assert!(false, "ROC availability differs: {a:?} vs {b:?}"),
    }
    prop_assert_eq!(e.hit, o.hit);
    Ok(())
}

/// Replaces every level by its image under a strictly increasing map.
pub fn check_monotone_invariance(case: &MetricCase, targets: &[u8]) -> CheckResult {
    let mut distinct: Vec<u8> = case.levels.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut targets: Vec<u8> = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() < distinct.len() || !case.mask.contains(&true) {
        return Ok(());
    }
    let remap = |l: u8| targets[distinct.iter().position(|&d| d == l).unwrap()];
    let moved = MetricCase {
        levels: case.levels.iter().map(|&l| remap(l)).collect(),
        ..case.clone()
    };
    let a = evaluate_image(&case.map(), &case.gt(), 0.3).unwrap();
    let b = evaluate_image(&moved.map(), &moved.gt(), 0.3).unwrap();
    prop_assert_eq!(a.hit, b.hit);
    prop_assert!((a.f1 - b.f1).abs() < 1e-12);
    prop_assert!((a.f_beta - b.f_beta).abs() < 1e-12);
    prop_assert!((a.auc_pr - b.auc_pr).abs() < 1e-12);
    match (a.auc_roc, b.auc_roc) {
        (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12),
        (x, y) => prop_assert_eq!(x, y),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Region contrast

/// An image of at most 16×16 pixels whose labels fall in at most five
/// regions of arbitrary shape, with pixel colors drawn from a few RGB values.
#[derive(Debug, Clone)]
pub struct RegionCase {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub pixels: Vec<[u8; 3]>,
    pub sigma_s2: f64,
}

pub fn region_case() -> impl Strategy<Value = RegionCase> {
    (
        2usize..=16,
        2usize..=16,
        1usize..=5,
        prop::collection::vec(any::<[u8; 3]>(), 1..=6),
        0.05f64..2.0,
    )
        .prop_flat_map(|(w, h, regions, colors, sigma_s2)| {
            let n = w * h;
            (
                prop::collection::vec(0..regions as u32, n),
                prop::collection::vec(prop::sample::select(colors), n),
            )
                .prop_map(move |(labels, pixels)| RegionCase {
                    width: w,
                    height: h,
                    labels,
                    pixels,
                    sigma_s2,
                })
        })
}

pub struct RegionPipeline {
    pub seg: Segmentation,
    pub palette: ColorPalette,
    pub indices: Vec<u32>,
    pub table: RegionTable,
}

pub fn region_pipeline(case: &RegionCase) -> RegionPipeline {
    let img = RgbImage::new(case.width, case.height, case.pixels.clone()).unwrap();
    let seg = Segmentation::from_labels(case.width, case.height, &case.labels).unwrap();
    let (palette, index_img) = build_palette(&img, &PaletteParams::default()).unwrap();
    let table = region_stats(&seg, &index_img).unwrap();
    RegionPipeline {
        seg,
        palette,
        indices: index_img.indices().to_vec(),
        table,
    }
}

/// Region contrast evaluated straight from its definition: for every region
/// pair, a double loop over palette colors, with histograms, sizes and
/// centroids recounted from the pixels.
pub fn triple_loop_contrast(
    p: &RegionPipeline,
    width: usize,
    height: usize,
    sigma_s2: f64,
    debiased: bool,
) -> Vec<f64> {
    let n = p.seg.regions();
    let colors = p.palette.colors();
    let mut hist = vec![vec![0.0; colors.len()]; n];
    let mut size = vec![0usize; n];
    let mut cx = vec![0.0; n];
    let mut cy = vec![0.0; n];
    for y in 0..height {
        for x in 0..width {
            let l = p.seg.label(x, y) as usize;
            hist[l][p.indices[y * width + x] as usize] += 1.0;
            size[l] += 1;
            cx[l] += (x as f64 + 0.5) / width as f64;
            cy[l] += (y as f64 + 0.5) / height as f64;
        }
    }
    for l in 0..n {
        let s = size[l] as f64;
        hist[l].iter_mut().for_each(|v| *v /= s);
        cx[l] /= s;
        cy[l] /= s;
    }
    let raw = |k: usize, i: usize| (-((cx[k] - cx[i]).powi(2) + (cy[k] - cy[i]).powi(2)).sqrt() / sigma_s2).exp();
    (0..n)
        .map(|k| {
            let norm: f64 = if debiased {
                (0..n).filter(|&i| i != k).map(|i| raw(k, i)).sum()
            } else {
                1.0
            };
            let mut s = 0.0;
            for i in (0..n).filter(|&i| i != k) {
                let mut d = 0.0;
                for a in 0..colors.len() {
                    for b in 0..colors.len() {
                        d += hist[k][a] * hist[i][b] * colors[a].distance(colors[b]);
                    }
                }
                s += raw(k, i) / norm * size[i] as f64 * d;
            }
            s
        })
        .collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub fn check_region_contrast_oracle(case: &RegionCase) -> CheckResult {
    let p = region_pipeline(case);
    for debiased in [false, true] {
        let weights = spatial_weights(&p.table, case.sigma_s2, debiased).unwrap();
        let result = region_contrast(&p.seg, &p.table, &weights, &p.palette).unwrap();
        let oracle = triple_loop_contrast(&p, case.width, case.height, case.sigma_s2, debiased);
        for (a, b) in result.scores.iter().zip(&oracle) {
            prop_assert!(close(*a, *b, 1e-9), "debiased={debiased}: {a} vs {b}");
        }
        let max = oracle.iter().cloned().fold(0.0, f64::max);
        for y in 0..case.height {
            for x in 0..case.width {
                let expected = if max > 0.0 {
                    oracle[p.seg.label(x, y) as usize] / max
                } else {
                    0.0
                };
                prop_assert!((result.map.get(x, y) - expected).abs() < 1e-9);
            }
        }
    }
    Ok(())
}

pub fn check_debias_rows(table: &RegionTable, sigma_s2: f64) -> CheckResult {
    let w = spatial_weights(table, sigma_s2, true).unwrap();
    if table.len() < 2 {
        return Ok(());
    }
    for k in 0..table.len() {
        let s: f64 = (0..table.len()).filter(|&i| i != k).map(|i| w.get(k, i)).sum();
        prop_assert!((s - 1.0).abs() < 1e-9, "row {k} sums to {s}");
    }
    Ok(())
}

pub fn region_table() -> impl Strategy<Value = (RegionTable, f64)> {
    (
        prop::collection::vec((1usize..500, 0.0f64..=1.0, 0.0f64..=1.0), 1..12),
        0.01f64..5.0,
    )
        .prop_map(|(regions, s2)| {
            let regions = regions
                .into_iter()
                .map(|(size, x, y)| RegionInfo {
                    size,
                    centroid: (x, y),
                    histogram: vec![(0, 1.0)],
                })
                .collect();
            (
                RegionTable {
                    width: 64,
                    height: 64,
                    regions,
                },
                s2,
            )
        })
}

/// Permutes palette entries and relabels every histogram to match.
pub fn check_palette_permutation(case: &RegionCase, shift: usize) -> CheckResult {
    let p = region_pipeline(case);
    let m = p.palette.len();
    let perm = |c: u32| ((c as usize + shift) % m) as u32;
    let mut colors = vec![Lab::default(); m];
    for (c, &lab) in p.palette.colors().iter().enumerate() {
        colors[perm(c as u32) as usize] = lab;
    }
    let permuted = ColorPalette::from_colors(colors).unwrap();
    let mut table = p.table.clone();
    for r in &mut table.regions {
        r.histogram = r.histogram.iter().map(|&(c, f)| (perm(c), f)).collect();
        r.histogram.sort_by_key(|&(c, _)| c);
    }
    let weights = spatial_weights(&p.table, case.sigma_s2, true).unwrap();
    let a = region_contrast_scores(&p.table, &weights, &p.palette).unwrap();
    let b = region_contrast_scores(&table, &weights, &permuted).unwrap();
    for (x, y) in a.iter().zip(&b) {
        prop_assert!(close(*x, *y, 1e-9), "{x} vs {y}");
    }
    for (i, r) in p.table.regions.iter().enumerate() {
        for (j, q) in p.table.regions.iter().enumerate() {
            let d1 = salobj::region::region_color_distance(&r.histogram, &q.histogram, &p.palette);
            let d2 = salobj::region::region_color_distance(
                &table.regions[i].histogram,
                &table.regions[j].histogram,
                &permuted,
            );
            prop_assert!(close(d1, d2, 1e-12));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// MSSS and segmentation

pub fn lab_image(max_side: usize) -> impl Strategy<Value = LabImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec((0.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0), w * h)
            .prop_map(move |v| LabImage::new(w, h, v.into_iter().map(|(l, a, b)| Lab::new(l, a, b)).collect()).unwrap())
    })
}

/// Lab images with small integer channels, on which every partial sum the
/// saliency computation forms is exact.
pub fn integer_lab_image(max_side: usize) -> impl Strategy<Value = LabImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec((0i32..=100, -60i32..=60, -60i32..=60), w * h).prop_map(move |v| {
            LabImage::new(
                w,
                h,
                v.into_iter()
                    .map(|(l, a, b)| Lab::new(l.into(), a.into(), b.into()))
                    .collect(),
            )
            .unwrap()
        })
    })
}

pub fn check_integral_exactness(img: &LabImage, rect: (usize, usize, usize, usize)) -> CheckResult {
    let ii = IntegralImage::new(img);
    let (w, h) = (img.width(), img.height());
    let (x0, x1) = (rect.0 % (w + 1), rect.1 % (w + 1));
    let (y0, y1) = (rect.2 % (h + 1), rect.3 % (h + 1));
    let (x0, x1) = (x0.min(x1), x0.max(x1));
    let (y0, y1) = (y0.min(y1), y0.max(y1));
    let mut direct = Lab::default();
    for y in y0..y1 {
        for x in x0..x1 {
            direct = direct + img.get(x, y);
        }
    }
    let sum = ii.rect_sum(x0, y0, x1, y1);
    prop_assert!(sum.distance(direct) < 1e-9, "{sum:?} vs {direct:?}");
    Ok(())
}

pub fn rotate180(img: &LabImage) -> LabImage {
    let (w, h) = (img.width(), img.height());
    LabImage::from_fn(w, h, |x, y| img.get(w - 1 - x, h - 1 - y)).unwrap()
}

pub fn check_msss_rotation(img: &LabImage) -> CheckResult {
    let a = msss(img);
    let b = msss(&rotate180(img));
    let (w, h) = a.dims();
    for y in 0..h {
        for x in 0..w {
            prop_assert_eq!(a.get(x, y), b.get(w - 1 - x, h - 1 - y));
        }
    }
    Ok(())
}

pub fn check_msss_constant(w: usize, h: usize, c: Lab) -> CheckResult {
    let img = LabImage::new(w, h, vec![c; w * h]).unwrap();
    prop_assert!(msss(&img).values().iter().all(|&v| v == 0.0));
    Ok(())
}

pub fn rgb_image(max_side: usize) -> impl Strategy<Value = RgbImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<[u8; 3]>(), w * h).prop_map(move |p| RgbImage::new(w, h, p).unwrap())
    })
}

pub fn check_k_monotonicity(img: &RgbImage, k: f64, dk: f64, sigma: f64) -> CheckResult {
    let lab = rgb_to_lab(img);
    let a = pre_merge_components(&lab, k, sigma);
    let b = pre_merge_components(&lab, k + dk, sigma);
    prop_assert!(b <= a, "k {k}: {a} components, k {}: {b}", k + dk);
    Ok(())
}

// ---------------------------------------------------------------------------
// Center-bias combination

pub fn map_pair(max_side: usize) -> impl Strategy<Value = (SaliencyMap, SaliencyMap)> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        (
            prop::collection::vec(0.0f64..=1.0, w * h),
            prop::collection::vec(0.0f64..=1.0, w * h),
        )
            .prop_map(move |(a, b)| {
                (
                    SaliencyMap::normalized(w, h, a).unwrap(),
                    SaliencyMap::normalized(w, h, b).unwrap(),
                )
            })
    })
}

pub fn scheme() -> impl Strategy<Value = CombinationScheme> {
    (prop::sample::select(SchemeKind::ALL.to_vec()), 0.0f64..=1.0)
        .prop_map(|(kind, w_c)| CombinationScheme { kind, w_c })
}

pub fn check_combination_identities(s_c: &SaliencyMap, s_b: &SaliencyMap, w_c: f64) -> CheckResult {
    let (w, h) = s_b.dims();
    let zero = combine(s_c, s_b, &CombinationScheme::new(SchemeKind::Convex, 0.0).unwrap()).unwrap();
    prop_assert_eq!(zero.values(), s_b.values());
    let ones = SaliencyMap::constant(w, h, 1.0).unwrap();
    let prod = combine(&ones, s_b, &CombinationScheme::new(SchemeKind::Product, w_c).unwrap()).unwrap();
    prop_assert_eq!(prod.values(), s_b.values());
    for kind in [SchemeKind::Min, SchemeKind::Max] {
        let scheme = CombinationScheme::new(kind, w_c).unwrap();
        let raw: Vec<f64> = s_c
            .values()
            .iter()
            .zip(s_b.values())
            .map(|(&c, &b)| {
                if kind == SchemeKind::Min {
                    (w_c * c).min((1.0 - w_c) * b)
                } else {
                    (w_c * c).max((1.0 - w_c) * b)
                }
            })
            .collect();
        let expected = SaliencyMap::normalized(w, h, raw).unwrap();
        let got = combine(s_c, s_b, &scheme).unwrap();
        prop_assert_eq!(got.values(), expected.values());
    }
    Ok(())
}

pub fn check_combination_bounds(c: f64, b: f64, scheme: &CombinationScheme) -> CheckResult {
    let v = scheme.apply(c, b);
    match scheme.kind {
        SchemeKind::Product => prop_assert!(v <= c && v <= b),
        SchemeKind::Min => prop_assert!(v <= scheme.w_c * c && v <= scheme.w_b() * b),
        SchemeKind::Max => prop_assert!(v >= scheme.w_c * c && v >= scheme.w_b() * b),
        SchemeKind::Convex => prop_assert!(v >= c.min(b) - 1e-15 && v <= c.max(b) + 1e-15),
    }
    Ok(())
}

pub fn check_convex_argmax(s_c: &SaliencyMap, s_b: &SaliencyMap, w_c: f64) -> CheckResult {
    // put both maxima on pixel 0
    let (w, h) = s_b.dims();
    let mut c = s_c.values().to_vec();
    let mut b = s_b.values().to_vec();
    c[0] = 1.0;
    b[0] = 1.0;
    let c = SaliencyMap::from_raw(w, h, c).unwrap();
    let b = SaliencyMap::from_raw(w, h, b).unwrap();
    let out = combine(&c, &b, &CombinationScheme::new(SchemeKind::Convex, w_c).unwrap()).unwrap();
    prop_assert_eq!(out.get(0, 0), out.max());
    Ok(())
}

pub fn check_product_scale(s_c: &SaliencyMap, s_b: &SaliencyMap, scale: f64) -> CheckResult {
    let (w, h) = s_b.dims();
    let scheme = CombinationScheme::new(SchemeKind::Product, 0.5).unwrap();
    let scaled = SaliencyMap::from_raw(w, h, s_c.values().iter().map(|v| v * scale).collect()).unwrap();
    let a = combine(s_c, s_b, &scheme).unwrap();
    let b = combine(&scaled, s_b, &scheme).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        prop_assert!((x - y).abs() < 1e-12);
    }
    Ok(())
}

pub fn check_combination_pointwise(
    s_c: &SaliencyMap,
    s_b: &SaliencyMap,
    scheme: &CombinationScheme,
    rotate: usize,
) -> CheckResult {
    let (w, h) = s_b.dims();
    let n = w * h;
    let permute = |m: &SaliencyMap| {
        let v = m.values();
        SaliencyMap::from_raw(w, h, (0..n).map(|i| v[(i + rotate) % n]).collect()).unwrap()
    };
    let out = combine(s_c, s_b, scheme).unwrap();
    let permuted = combine(&permute(s_c), &permute(s_b), scheme).unwrap();
    let moved = permute(&out);
    prop_assert_eq!(moved.values(), permuted.values());
    Ok(())
}

// ---------------------------------------------------------------------------
// Statistics

pub fn check_ppcc_affine(samples: &[f64], shift: f64, scale: f64, reference: Reference) -> CheckResult {
    let Ok(r) = qq_pairs(samples, reference).and_then(|q| ppcc(&q)) else {
        return Ok(());
    };
    let moved: Vec<f64> = samples.iter().map(|x| shift + scale * x).collect();
    let r2 = ppcc(&qq_pairs(&moved, reference).unwrap()).unwrap();
    prop_assert!((r - r2).abs() < 1e-9, "{r} vs {r2}");
    Ok(())
}

pub fn check_quantiles_increasing(n: usize) -> CheckResult {
    for reference in Reference::ALL {
        let q = qq_pairs(&vec![0.0; n], reference).unwrap();
        prop_assert!(q.theoretical.windows(2).all(|w| w[0] < w[1]), "{reference} n={n}");
    }
    let m = filliben_medians(n).unwrap();
    prop_assert!((m[0] - (1.0 - m[n - 1])).abs() < 1e-15);
    Ok(())
}

pub fn check_t_test_invariances(a: &[f64], b: &[f64], shift: f64) -> CheckResult {
    let a2: Vec<f64> = a.iter().map(|x| x + shift).collect();
    let b2: Vec<f64> = b.iter().map(|x| x + shift).collect();
    for mode in SampleMode::ALL {
        if mode == SampleMode::Paired && a.len() != b.len() {
            continue;
        }
        for hyp in Hypothesis::ALL {
            let r1 = two_sample_t_test(a, b, mode, hyp, 0.05).unwrap();
            let r2 = two_sample_t_test(&a2, &b2, mode, hyp, 0.05).unwrap();
            let (p1, p2) = (r1.p_value.unwrap(), r2.p_value.unwrap());
            prop_assert!((p1 - p2).abs() < 1e-7, "{mode} {hyp:?}: {p1} vs {p2}");
        }
    }
    let ab = two_sample_t_test(a, b, SampleMode::Welch, Hypothesis::Equal, 0.05).unwrap();
    let ba = two_sample_t_test(b, a, SampleMode::Welch, Hypothesis::Equal, 0.05).unwrap();
    prop_assert!(
        (ab.statistic + ba.statistic).abs() < 1e-12 || (ab.statistic.is_infinite() && ab.statistic == -ba.statistic)
    );
    prop_assert!((ab.p_value.unwrap() - ba.p_value.unwrap()).abs() < 1e-12);
    Ok(())
}

/// Density of Student's t distribution.
fn t_density(x: f64, df: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let c = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (c - (df + 1.0) / 2.0 * (x * x / df).ln_1p()).exp()
}

/// `P(T >= t)` by composite Simpson quadrature of the density on `[0, |t|]`.
pub fn t_tail_quadrature(t: f64, df: f64) -> f64 {
    let steps = 20_000;
    let b = t.abs();
    let h = b / steps as f64;
    let mut s = t_density(0.0, df) + t_density(b, df);
    for i in 1..steps {
        s += t_density(i as f64 * h, df) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let central = s * h / 3.0;
    if t >= 0.0 {
        0.5 - central
    } else {
        0.5 + central
    }
}

pub fn check_t_tail(t: f64, df: f64) -> CheckResult {
    let got = student_t_tail(t, df);
    let want = t_tail_quadrature(t, df);
    prop_assert!((got - want).abs() < 1e-10, "t={t} df={df}: {got} vs {want}");
    Ok(())
}

/// Normal tail with the first-order correction for large degrees of freedom.
pub fn check_t_tail_large_df(t: f64) -> CheckResult {
    let df = 1e6;
    let phi = (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let approx = statrs::function::erf::erfc(t / std::f64::consts::SQRT_2) / 2.0 + phi * (t.powi(3) + t) / (4.0 * df);
    let got = student_t_tail(t, df);
    prop_assert!((got - approx).abs() < 1e-10, "t={t}: {got} vs {approx}");
    Ok(())
}

pub fn check_inverse_normal(p: f64) -> CheckResult {
    use statrs::distribution::{ContinuousCDF, Normal};
    let z = inverse_normal_cdf(p).unwrap();
    prop_assert!((normal_cdf(z) - p).abs() < 1e-9);
    let reference = Normal::new(0.0, 1.0).unwrap().inverse_cdf(p);
    prop_assert!(
        (z - reference).abs() < 1e-7 * reference.abs().max(1.0),
        "{z} vs {reference}"
    );
    if p > 1e-6 && p < 1.0 - 1e-6 {
        let zm = inverse_normal_cdf(1.0 - p).unwrap();
        prop_assert!((z + zm).abs() < 1e-9 * z.abs().max(1.0));
    }
    Ok(())
}

/// Filliben's order-statistic medians written out from their closed form.
pub fn check_filliben(n: usize) -> CheckResult {
    let m = filliben_medians(n).unwrap();
    let last = 0.5f64.powf(1.0 / n as f64);
    prop_assert!((m[n - 1] - last).abs() < 1e-15);
    prop_assert!((m[0] - (1.0 - last)).abs() < 1e-15);
    for i in 2..n {
        let want = (i as f64 - 0.3175) / (n as f64 + 0.365);
        prop_assert!((m[i - 1] - want).abs() < 1e-15, "i={i}");
    }
    Ok(())
}

/// Number of seeds, out of `seeds`, for which a sample of `n` draws from
/// `reference` passes the PPCC test at `alpha`.
pub fn synthetic_ppcc_passes(reference: Reference, n: usize, seeds: u64, alpha: f64) -> usize {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    (0..seeds)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<f64> = (0..n).map(|_| reference.sample(&mut rng)).collect();
            let r = ppcc(&qq_pairs(&sample, reference).unwrap()).unwrap();
            r > salobj::stats::ppcc_critical_value(n, reference, alpha).unwrap()
        })
        .count()
}

pub fn check_partition(img: &RgbImage, k: f64, min_size: usize) -> CheckResult {
    use salobj::segmentation::{felzenszwalb_segment, SegmentParams};
    let lab = rgb_to_lab(img);
    let seg = felzenszwalb_segment(
        &lab,
        &SegmentParams {
            k,
            sigma: 0.5,
            min_size,
        },
    )
    .unwrap();
    let again = felzenszwalb_segment(
        &lab,
        &SegmentParams {
            k,
            sigma: 0.5,
            min_size,
        },
    )
    .unwrap();
    prop_assert_eq!(&seg, &again);
    let mut sizes = vec![0usize; seg.regions()];
    for &l in seg.labels() {
        prop_assert!((l as usize) < seg.regions());
        sizes[l as usize] += 1;
    }
    prop_assert!(sizes.iter().all(|&s| s > 0));
    prop_assert_eq!(sizes.iter().sum::<usize>(), img.width() * img.height());

    let (palette, index_img) = build_palette(img, &PaletteParams::default()).unwrap();
    prop_assert!(index_img.indices().iter().all(|&c| (c as usize) < palette.len()));
    let table = region_stats(&seg, &index_img).unwrap();
    prop_assert_eq!(
        table.regions.iter().map(|r| r.size).sum::<usize>(),
        img.width() * img.height()
    );
    for r in &table.regions {
        let total: f64 = r.histogram.iter().map(|&(_, f)| f).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&r.centroid.0) && (0.0..=1.0).contains(&r.centroid.1));
    }
    Ok(())
}

pub fn check_center_beats_corners(w: usize, h: usize, sigma_s2: f64) -> CheckResult {
    let field = salobj::region::weight_sum_field(w, h, sigma_s2).unwrap();
    let centre = field.get(w / 2, h / 2);
    for (x, y) in [(0, 0), (w - 1, 0), (0, h - 1), (w - 1, h - 1)] {
        prop_assert!(
            centre > field.get(x, y),
            "{w}x{h} σ²={sigma_s2}: centre {centre}, corner {}",
            field.get(x, y)
        );
    }
    Ok(())
}

pub fn check_rgb_to_lab_pointwise(img: &RgbImage, rotate: usize) -> CheckResult {
    let n = img.pixels().len();
    let moved: Vec<[u8; 3]> = (0..n).map(|i| img.pixels()[(i + rotate) % n]).collect();
    let a = rgb_to_lab(img);
    let b = rgb_to_lab(&RgbImage::new(img.width(), img.height(), moved).unwrap());
    for i in 0..n {
        prop_assert_eq!(a.pixels()[(i + rotate) % n], b.pixels()[i]);
    }
    prop_assert!(a.pixels().iter().all(|p| (0.0..=100.0 + 1e-5).contains(&p.l)));
    Ok(())
}

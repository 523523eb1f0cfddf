//! Critical values of the probability plot correlation coefficient.
//!
//! Lower `α`-quantiles of the PPCC under each reference distribution,
//! estimated by seeded Monte Carlo (`examples/ppcc_critical.rs`) against the
//! order-statistic-median quantiles used by [`super::qq_pairs`], and
//! interpolated linearly in `n` between tabulated sizes.

use super::critical_table::{REPLICATES, SEED, TABLE};
use super::ttest::{Tails, TestResult};
use super::Reference;
use crate::error::{Error, Result};

/// Significance levels with tabulated critical values.
pub const TABULATED_ALPHAS: [f64; 2] = [0.05, 0.01];

/// Smallest and largest tabulated sample size.
pub fn table_range() -> (usize, usize) {
    (TABLE[0].0, TABLE[TABLE.len() - 1].0)
}

/// Replicates per tabulated size and the generator seed.
pub fn table_provenance() -> (usize, u64) {
    (REPLICATES, SEED)
}

fn column(dist: Reference, alpha: f64) -> Result<usize> {
    let a = TABULATED_ALPHAS
        .iter()
        .position(|&t| (t - alpha).abs() < 1e-12)
        .ok_or_else(|| Error::InvalidParameter(format!("no PPCC table for alpha = {alpha}; tabulated: 0.05, 0.01")))?;
    let d = match dist {
        Reference::Uniform => 0,
        Reference::Gaussian => 1,
        Reference::HalfGaussian => 2,
    };
    Ok(2 * d + a)
}

/// Critical PPCC for sample size `n`.
pub fn ppcc_critical_value(n: usize, dist: Reference, alpha: f64) -> Result<f64> {
    let col = column(dist, alpha)?;
    let (min, max) = table_range();
    if n < min || n > max {
        return Err(Error::OutOfTable { n, min, max });
    }
    let i = TABLE.partition_point(|&(m, _)| m < n);
    let (n1, v1) = TABLE[i];
    if n1 == n {
        return Ok(v1[col]);
    }
    let (n0, v0) = TABLE[i - 1];
    let w = (n - n0) as f64 / (n1 - n0) as f64;
    Ok(v0[col] + w * (v1[col] - v0[col]))
}

/// Rejects "the sample follows `dist`" iff `r` falls below the critical value.
pub fn ppcc_test(r: f64, n: usize, dist: Reference, alpha: f64) -> Result<TestResult> {
    let critical = ppcc_critical_value(n, dist, alpha)?;
    Ok(TestResult {
        statistic: r,
        p_value: None,
        df: None,
        critical: Some(critical),
        alpha,
        rejected: r < critical,
        tails: Tails::One,
    })
}

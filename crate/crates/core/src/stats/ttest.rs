//! Hypothesis tests on correlations and on paired or independent samples.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::special::student_t_tail;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tails {
    One,
    Two,
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    /// Absent for table-based tests that only yield a decision.
    pub p_value: Option<f64>,
    pub df: Option<f64>,
    /// Critical value of table-based tests.
    pub critical: Option<f64>,
    pub alpha: f64,
    pub rejected: bool,
    pub tails: Tails,
}

impl TestResult {
    fn from_p(statistic: f64, p: f64, df: f64, alpha: f64, tails: Tails) -> Self {
        let p = p.clamp(0.0, 1.0);
        Self {
            statistic,
            p_value: Some(p),
            df: Some(df),
            critical: None,
            alpha,
            rejected: p < alpha,
            tails,
        }
    }
}

/// Two-tailed test of zero correlation from a sample correlation `r` over
/// `n` pairs, using `t = r·√((n−2)/(1−r²))` on `n − 2` degrees of freedom.
pub fn correlation_t_test(r: f64, n: usize, alpha: f64) -> Result<TestResult> {
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("correlation {r} outside [-1, 1]")));
    }
    let df = (n - 2) as f64;
    let t = if r.abs() == 1.0 {
        r.signum() * f64::INFINITY
    } else {
        r * (df / (1.0 - r * r)).sqrt()
    };
    let p = 2.0 * student_t_tail(t.abs(), df);
    Ok(TestResult::from_p(t, p, df, alpha, Tails::Two))
}

/// How the two samples relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// Independent samples with unequal variances.
    Welch,
    /// Matched samples; the test runs on differences `a − b`.
    Paired,
}

impl SampleMode {
    pub const ALL: [SampleMode; 2] = [SampleMode::Paired, SampleMode::Welch];
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMode::Welch => "welch",
            SampleMode::Paired => "paired",
        })
    }
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "welch" => Ok(SampleMode::Welch),
            "paired" => Ok(SampleMode::Paired),
            _ => Err(Error::InvalidParameter(format!("unknown sample mode `{s}`"))),
        }
    }
}

/// Null hypothesis under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    /// The means are equal (two-tailed).
    Equal,
    /// The mean of `a` is at most the mean of `b` (one-tailed); rejecting it
    /// means `a` is significantly higher.
    Lower,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 2] = [Hypothesis::Equal, Hypothesis::Lower];
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample t-test on `t = (mean(a) − mean(b)) / se`.
pub fn two_sample_t_test(
    a: &[f64],
    b: &[f64],
    mode: SampleMode,
    hypothesis: Hypothesis,
    alpha: f64,
) -> Result<TestResult> {
    let (diff, se, df) = match mode {
        SampleMode::Welch => {
            for s in [a, b] {
                if s.len() < 2 {
                    return Err(Error::TooFewSamples {
                        needed: 2,
                        got: s.len(),
                    });
                }
            }
            let (ma, va) = mean_var(a);
            let (mb, vb) = mean_var(b);
            let (qa, qb) = (va / a.len() as f64, vb / b.len() as f64);
            let se2 = qa + qb;
            let df = if se2 > 0.0 {
                se2 * se2 / (qa * qa / (a.len() - 1) as f64 + qb * qb / (b.len() - 1) as f64)
            } else {
                (a.len() + b.len() - 2) as f64
            };
            (ma - mb, se2.sqrt(), df)
        }
        SampleMode::Paired => {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch {
                    left: (a.len(), 1),
                    right: (b.len(), 1),
                });
            }
            if a.len() < 2 {
                return Err(Error::TooFewSamples {
                    needed: 2,
                    got: a.len(),
                });
            }
            let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let (md, vd) = mean_var(&d);
            (md, (vd / d.len() as f64).sqrt(), (d.len() - 1) as f64)
        }
    };
    let tails = match hypothesis {
        Hypothesis::Equal => Tails::Two,
        Hypothesis::Lower => Tails::One,
    };
    if se == 0.0 {
        let (t, p) = if diff == 0.0 {
            (0.0, 1.0)
        } else {
            let t = diff.signum() * f64::INFINITY;
            let p = match hypothesis {
                Hypothesis::Equal => 0.0,
                Hypothesis::Lower if diff > 0.0 => 0.0,
                Hypothesis::Lower => 1.0,
            };
            (t, p)
        };
        return Ok(TestResult::from_p(t, p, df, alpha, tails));
    }
    let t = diff / se;
    let p = match hypothesis {
        Hypothesis::Equal => 2.0 * student_t_tail(t.abs(), df),
        Hypothesis::Lower => student_t_tail(t, df),
    };
    Ok(TestResult::from_p(t, p, df, alpha, tails))
}

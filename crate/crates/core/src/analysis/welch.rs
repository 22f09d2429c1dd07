use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestResult {
    pub t_stat: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    pub p_two_sided: f64,
    pub mean1: f64,
    pub mean2: f64,
}

/// Two-sided p-value of Student's t with `df` degrees of freedom:
/// `I_{df/(df+t²)}(df/2, 1/2)`.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample t-test without the equal-variance assumption.
pub fn welch_t_test(sample1: &[f64], sample2: &[f64]) -> Result<TTestResult> {
    for s in [sample1, sample2] {
        if s.len() < 2 {
            return Err(Error::TooFewValues {
                need: 2,
                got: s.len(),
            });
        }
    }
    let (n1, n2) = (sample1.len() as f64, sample2.len() as f64);
    let (m1, v1) = mean_var(sample1);
    let (m2, v2) = mean_var(sample2);
    let (a, b) = (v1 / n1, v2 / n2);
    let se2 = a + b;
    if se2 == 0.0 {
        if m1 == m2 {
            return Ok(TTestResult {
                t_stat: 0.0,
                df: n1 + n2 - 2.0,
                p_two_sided: 1.0,
                mean1: m1,
                mean2: m2,
            });
        }
        return Err(Error::DegenerateVariance);
    }
    let t = (m1 - m2) / se2.sqrt();
    let df = se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
    Ok(TTestResult {
        t_stat: t,
        df,
        p_two_sided: student_t_two_sided_p(t, df),
        mean1: m1,
        mean2: m2,
    })
}

//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use negscope::corpus::Document;
use negscope::scorer::NegationMask;

/// R² of the ordinary least-squares line `gold ~ a + b·pred`, computed as
/// `1 - SS_res / SS_tot` from the normal equations.
pub fn least_squares_r2(pred: &[f64], gold: &[f64]) -> f64 {
    let n = pred.len() as f64;
    let (sx, sy) = (pred.iter().sum::<f64>(), gold.iter().sum::<f64>());
    let sxx: f64 = pred.iter().map(|x| x * x).sum();
    let sxy: f64 = pred.iter().zip(gold).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    let b = (n * sxy - sx * sy) / det;
    let a = (sy - b * sx) / n;
    let mean = sy / n;
    let ss_res: f64 = pred
        .iter()
        .zip(gold)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum();
    let ss_tot: f64 = gold.iter().map(|y| (y - mean).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Lanczos approximation (g = 7, nine coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn t_density(x: f64, df: f64) -> f64 {
    let ln_norm =
        ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp()
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson integral of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Two-sided Student-t p-value as `1 - 2 * ∫_0^|t| density`.
pub fn t_two_sided_p_quadrature(t: f64, df: f64) -> f64 {
    let f = |x: f64| t_density(x, df);
    (1.0 - 2.0 * integrate(&f, 0.0, t.abs(), 1e-13)).max(0.0)
}

/// Welch statistic, Satterthwaite degrees of freedom and quadrature p-value.
pub fn welch_oracle(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let stats = |s: &[f64]| {
        let n = s.len() as f64;
        let m = s.iter().sum::<f64>() / n;
        (
            n,
            m,
            s.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0),
        )
    };
    let (n1, m1, v1) = stats(a);
    let (n2, m2, v2) = stats(b);
    let se2 = v1 / n1 + v2 / n2;
    let t = (m1 - m2) / se2.sqrt();
    let df = se2 * se2 / ((v1 / n1).powi(2) / (n1 - 1.0) + (v2 / n2).powi(2) / (n2 - 1.0));
    (t, df, t_two_sided_p_quadrature(t, df))
}

/// Scope summary by splitting each sentence's bit string on zeros.
pub struct RunScan {
    pub runs: Vec<usize>,
    pub polar: usize,
    pub polar_negated: usize,
}

pub fn run_scan(
    masks: &[NegationMask],
    docs: &[&Document],
    is_polar: impl Fn(&str) -> bool,
) -> RunScan {
    let mut out = RunScan {
        runs: Vec::new(),
        polar: 0,
        polar_negated: 0,
    };
    for (m, d) in masks.iter().zip(docs) {
        for r in &d.sentence_bounds {
            let bits: String = m.flags[r.clone()]
                .iter()
                .map(|&f| if f { '1' } else { '0' })
                .collect();
            out.runs
                .extend(bits.split('0').map(str::len).filter(|&n| n > 0));
        }
        for (t, &f) in d.tokens.iter().zip(&m.flags) {
            if is_polar(t) {
                out.polar += 1;
                out.polar_negated += usize::from(f);
            }
        }
    }
    out
}

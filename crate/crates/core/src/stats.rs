//! Distribution helpers for Monte Carlo calibration checks.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Probability that a χ² variable with `dof` degrees of freedom lies in `[lo, hi]`.
pub fn chi2_interval_probability(dof: usize, lo: f64, hi: f64) -> f64 {
    let dist = ChiSquared::new(dof as f64).expect("dof > 0");
    dist.cdf(hi) - dist.cdf(lo)
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsTest {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    KsTest { statistic, p_value: kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic) }
}

pub fn ks_standard_normal(samples: &[f64]) -> KsTest {
    ks_test(samples, standard_normal_cdf)
}

/// Kolmogorov survival function `Q(x) = 2 Σ (−1)^{j−1} e^{−2j²x²}`.
fn kolmogorov_q(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let term = (-2.0 * j * j * x * x).exp();
        sum += if j as u32 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

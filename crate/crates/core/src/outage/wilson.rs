use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Two-sided standard normal quantile for `confidence`, e.g. 1.96 at 0.95.
pub fn z_score(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::OutOfRange {
            quantity: "confidence level",
            value: confidence,
            expected: "in (0, 1)",
        });
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_ci(failures: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || failures > trials {
        return Err(Error::InvalidCounts { failures, trials });
    }
    let z = z_score(confidence)?;
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if failures == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let high = if failures == trials {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    Ok((low, high))
}

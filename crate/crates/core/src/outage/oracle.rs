//! Analytical single-relay outage references.
//!
//! With Rayleigh fading both hop SNRs are exponential. The AF branch SNR
//! `g1 g2 / (g1 + g2 + 1)` falls below `t` exactly when `g1 <= t`, or when
//! `g1 > t` and `g2 < t + (t^2 + t) / (g1 - t)`. Conditioning on `g1` leaves a
//! one-dimensional integral for the success probability, which is evaluated
//! by adaptive quadrature.

use super::quadrature;
use crate::error::{Error, Result};
use crate::quantities::SnrLinear;

pub const ORACLE_ABS_TOL: f64 = 1e-9;
const MAX_SEGMENTS: usize = 20_000;

fn positive(quantity: &'static str, v: SnrLinear) -> Result<f64> {
    let v = v.value();
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::OutOfRange {
            quantity,
            value: v,
            expected: "> 0",
        })
    }
}

/// Outage of `min(g1, g2) < t` for independent exponentials,
/// `1 - exp(-t (1/mean1 + 1/mean2))`. A lower bound on the AF outage.
pub fn min_bound_outage_closed_form(
    mean1: SnrLinear,
    mean2: SnrLinear,
    gamma_th: SnrLinear,
) -> Result<f64> {
    let m1 = positive("first-hop mean SNR", mean1)?;
    let m2 = positive("second-hop mean SNR", mean2)?;
    let t = gamma_th.value();
    Ok(-(-t * (1.0 / m1 + 1.0 / m2)).exp_m1())
}

/// Exact single-relay AF outage probability for exponential hop SNRs with
/// means `mean1`, `mean2` and threshold `gamma_th`.
pub fn single_relay_oracle(mean1: SnrLinear, mean2: SnrLinear, gamma_th: SnrLinear) -> Result<f64> {
    let m1 = positive("first-hop mean SNR", mean1)?;
    let m2 = positive("second-hop mean SNR", mean2)?;
    let t = positive("threshold SNR", gamma_th)?;
    let c = t * t + t;
    // g1 = t + u, u = m1 s / (1 - s) maps (0, inf) onto (0, 1); the Jacobian
    // m1 / (1 - s)^2 cancels the 1/m1 of the density.
    let head = (-t / m1).exp();
    let integrand = |s: f64| {
        let tail = 1.0 - s;
        let u = m1 * s / tail;
        let w = (-s / tail).exp() / (tail * tail);
        if w == 0.0 {
            return 0.0;
        }
        w * (-(t + c / u) / m2).exp()
    };
    let success =
        head * quadrature::integrate(integrand, 0.0, 1.0, ORACLE_ABS_TOL / 2.0, MAX_SEGMENTS)?;
    Ok((1.0 - success).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s(x: f64) -> SnrLinear {
        SnrLinear::new(x).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            min_bound_outage_closed_form(s(3.0), s(4.0), s(0.0)).unwrap(),
            0.0
        );
        assert_relative_eq!(
            min_bound_outage_closed_form(s(1.954), s(1.954), s(10.0)).unwrap(),
            1.0 - (-10.0f64 * 2.0 / 1.954).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            min_bound_outage_closed_form(s(1.954), s(1.954), s(10.0)).unwrap(),
            0.99996,
            epsilon = 1e-5
        );
        assert_relative_eq!(
            min_bound_outage_closed_form(s(195.4), s(195.4), s(10.0)).unwrap(),
            0.09729,
            epsilon = 1e-5
        );
        assert!(min_bound_outage_closed_form(s(0.0), s(1.0), s(1.0)).is_err());
    }

    #[test]
    fn vanishing_threshold() {
        let p = single_relay_oracle(s(10.0), s(10.0), s(1e-12)).unwrap();
        assert!(p < 1e-9, "{p}");
        assert!(single_relay_oracle(s(10.0), s(10.0), s(0.0)).is_err());
    }

    #[test]
    fn above_min_bound() {
        for &(m1, m2, t) in &[
            (195.4, 195.4, 10.0),
            (1.0, 10.0, 1.0),
            (10.0, 1.0, 10.0),
            (1e4, 3.0, 10.0),
        ] {
            let exact = single_relay_oracle(s(m1), s(m2), s(t)).unwrap();
            let bound = min_bound_outage_closed_form(s(m1), s(m2), s(t)).unwrap();
            assert!(exact >= bound, "({m1}, {m2}, {t}): {exact} < {bound}");
            assert!(exact < 1.0);
        }
        let p = single_relay_oracle(s(195.4), s(195.4), s(10.0)).unwrap();
        assert!(p > 0.0973 && p < 1.0, "{p}");
    }

    #[test]
    fn frozen_reference_values() {
        // independent evaluation: scipy.integrate.quad over (t, inf), epsabs 1e-13
        for &(m1, m2, t, expected) in &[
            (195.4, 195.4, 10.0, 0.112_128_685_099_154_75),
            (1.0, 10.0, 1.0, 0.784_524_599_184_611_4),
            (10.0, 10.0, 10.0, 0.965_046_670_220_100_5),
            (10.0, 195.4, 1.0, 0.105_986_474_582_126_07),
        ] {
            let p = single_relay_oracle(s(m1), s(m2), s(t)).unwrap();
            assert!(
                (p - expected).abs() < ORACLE_ABS_TOL,
                "({m1}, {m2}, {t}): {p}"
            );
        }
    }

    #[test]
    fn asymmetric_means_are_symmetric() {
        // g1 g2 / (g1 + g2 + 1) is symmetric, so swapping means cannot matter
        let a = single_relay_oracle(s(3.0), s(40.0), s(10.0)).unwrap();
        let b = single_relay_oracle(s(40.0), s(3.0), s(10.0)).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-9);
    }
}

//! Rayleigh fading draws and the amplify-and-forward / maximal-ratio
//! combined SNR at the receiver.
//!
//! Only relayed branches are combined. The direct Tx-Rx link is too weak to
//! matter at these path losses and has no term in [`combined_snr`].

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::quantities::SnrLinear;

/// Fading power gains `|h|^2` of both hops of every relay branch.
#[derive(Debug, Clone, PartialEq)]
pub struct HopGains {
    pub g_sr: Vec<f64>,
    pub g_rd: Vec<f64>,
}

impl HopGains {
    pub fn new(g_sr: Vec<f64>, g_rd: Vec<f64>) -> Result<Self> {
        if g_sr.len() != g_rd.len() {
            return Err(Error::LengthMismatch {
                what: "relay->receiver gains",
                got: g_rd.len(),
                expected: g_sr.len(),
            });
        }
        if let Some(&g) = g_sr
            .iter()
            .chain(&g_rd)
            .find(|g| !(**g >= 0.0 && g.is_finite()))
        {
            return Err(Error::OutOfRange {
                quantity: "fading gain",
                value: g,
                expected: "finite and >= 0",
            });
        }
        Ok(Self { g_sr, g_rd })
    }

    pub fn relays(&self) -> usize {
        self.g_sr.len()
    }
}

/// One `|h|^2` draw for `h ~ CN(0, 1)`.
///
/// The squared magnitude of a unit-variance circularly-symmetric complex
/// normal is exactly `Exp(1)`, so it is sampled directly.
#[inline]
pub fn draw_gain<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

pub fn draw_hop_gains<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<HopGains> {
    if m == 0 {
        return Err(Error::Placement("at least one relay is required".into()));
    }
    let mut g_sr = Vec::with_capacity(m);
    let mut g_rd = Vec::with_capacity(m);
    for _ in 0..m {
        g_sr.push(draw_gain(rng));
        g_rd.push(draw_gain(rng));
    }
    Ok(HopGains { g_sr, g_rd })
}

/// End-to-end SNR of one AF relay branch, `g1 g2 / (g1 + g2 + 1)`.
#[inline]
pub fn af_branch_snr(snr_sr: f64, snr_rd: f64) -> f64 {
    snr_sr * snr_rd / (snr_sr + snr_rd + 1.0)
}

fn instantaneous<'a>(
    gains: &'a HopGains,
    mean_sr: &'a [SnrLinear],
    mean_rd: &'a [SnrLinear],
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    let m = gains.relays();
    for (what, got) in [
        ("relay->receiver gains", gains.g_rd.len()),
        ("source->relay mean SNRs", mean_sr.len()),
        ("relay->receiver mean SNRs", mean_rd.len()),
    ] {
        if got != m {
            return Err(Error::LengthMismatch {
                what,
                got,
                expected: m,
            });
        }
    }
    Ok((0..m).map(move |i| {
        (
            gains.g_sr[i] * mean_sr[i].value(),
            gains.g_rd[i] * mean_rd[i].value(),
        )
    }))
}

/// MRC sum of the AF branch SNRs at the receiver.
pub fn combined_snr(
    gains: &HopGains,
    mean_sr: &[SnrLinear],
    mean_rd: &[SnrLinear],
) -> Result<SnrLinear> {
    let total = instantaneous(gains, mean_sr, mean_rd)?
        .map(|(a, b)| af_branch_snr(a, b))
        .sum();
    SnrLinear::new(total)
}

/// `sum_i min(g1_i, g2_i)`, an upper bound on [`combined_snr`].
pub fn min_bound_snr(
    gains: &HopGains,
    mean_sr: &[SnrLinear],
    mean_rd: &[SnrLinear],
) -> Result<SnrLinear> {
    let total = instantaneous(gains, mean_sr, mean_rd)?
        .map(|(a, b)| a.min(b))
        .sum();
    SnrLinear::new(total)
}

//! Monte Carlo outage estimation.
//!
//! A trial realizes the relay layout (redrawn per trial for random-disk
//! placements), scales unit-mean Rayleigh gains by each hop's mean SNR and
//! declares an outage when the combined SNR at the receiver is strictly
//! below the decoding threshold.
//!
//! Trials are split into fixed-size chunks that rayon workers pick up in any
//! order. Every draw comes from a stream keyed by the trial coordinates (see
//! [`streams`]) and chunk counts are summed as integers, so the estimate is
//! bit-identical for any worker count.

pub mod oracle;
pub mod quadrature;
pub mod streams;
pub mod wilson;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::link::{af_branch_snr, draw_gain};
use crate::pathloss::HopBudget;
use crate::quantities::{SnrLinear, SystemConfig};
use crate::topology::{place, random_disk_point, PlacementSpec, Point2D, Redraw};
use streams::{stream, Purpose, RUN_SCOPE};

pub use oracle::{min_bound_outage_closed_form, single_relay_oracle};
pub use wilson::wilson_ci;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const CONFIDENCE: f64 = 0.95;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "NANO_SIM_THREADS";

const CHUNK: u64 = 1 << 14;

/// Estimated outage probability with its 95% Wilson interval and the inputs
/// needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub failures: u64,
    pub master_seed: u64,
    pub config_digest: String,
}

impl OutageEstimate {
    pub fn from_counts(
        failures: u64,
        trials: u64,
        master_seed: u64,
        config_digest: String,
    ) -> Result<Self> {
        let (ci_low, ci_high) = wilson_ci(failures, trials, CONFIDENCE)?;
        Ok(Self {
            p_hat: failures as f64 / trials as f64,
            ci_low,
            ci_high,
            trials,
            failures,
            master_seed,
            config_digest,
        })
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// SHA-256 of the canonical JSON of `(cfg, placement)`.
pub fn config_digest(cfg: &SystemConfig, placement: &PlacementSpec) -> String {
    let json = serde_json::to_string(&(cfg, placement)).expect("config serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// Worker cap from [`THREADS_ENV`], if set to a positive integer.
pub fn env_workers() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub(crate) fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}

#[derive(Debug, Clone)]
enum Layout {
    /// Mean SNR of `(source->relay, relay->receiver)` for each relay.
    Fixed(Vec<(f64, f64)>),
    Disk {
        center: Point2D,
        radius: f64,
        rx: Point2D,
        relays: usize,
        budget: HopBudget,
    },
}

/// Everything a worker needs to run trials; cheap to share.
#[derive(Debug, Clone)]
pub(crate) struct Scenario {
    layout: Layout,
    threshold: f64,
}

impl Scenario {
    pub(crate) fn new(
        cfg: &SystemConfig,
        placement: &PlacementSpec,
        master_seed: u64,
    ) -> Result<Self> {
        placement.validate()?;
        if placement.distance() != cfg.d_mm {
            return Err(Error::Placement(format!(
                "placement distance {} mm differs from configured {} mm",
                placement.distance().mm(),
                cfg.d_mm.mm()
            )));
        }
        let budget = HopBudget::new(cfg)?;
        let threshold = cfg.gamma_th_db.to_linear().value();
        let fixed = |relays: &[Point2D], rx: Point2D| {
            let tx = Point2D::new(0.0, 0.0);
            relays
                .iter()
                .map(|r| {
                    (
                        budget.source_hop(tx.distance(*r)),
                        budget.relay_hop(r.distance(rx)),
                    )
                })
                .collect()
        };
        let layout = match *placement {
            PlacementSpec::RandomDisk { redraw, .. } => {
                let (center, radius) = placement.disk().expect("random-disk spec");
                let rx = Point2D::new(placement.distance().mm(), 0.0);
                let relays = placement.relay_count();
                match redraw {
                    Redraw::PerTrial => Layout::Disk {
                        center,
                        radius,
                        rx,
                        relays,
                        budget,
                    },
                    Redraw::PerRun => {
                        let points: Vec<Point2D> = (0..relays)
                            .map(|i| {
                                let mut rng =
                                    stream(master_seed, RUN_SCOPE, i as u32, Purpose::Placement);
                                random_disk_point(center, radius, &mut rng)
                            })
                            .collect();
                        Layout::Fixed(fixed(&points, rx))
                    }
                }
            }
            _ => {
                let t = place(placement)?;
                Layout::Fixed(fixed(t.relays(), t.rx()))
            }
        };
        Ok(Self { layout, threshold })
    }

    pub(crate) fn from_means(
        mean_sr: &[SnrLinear],
        mean_rd: &[SnrLinear],
        gamma_th: SnrLinear,
    ) -> Result<Self> {
        if mean_sr.is_empty() {
            return Err(Error::Placement("at least one relay is required".into()));
        }
        if mean_sr.len() != mean_rd.len() {
            return Err(Error::LengthMismatch {
                what: "relay->receiver mean SNRs",
                got: mean_rd.len(),
                expected: mean_sr.len(),
            });
        }
        let means = mean_sr
            .iter()
            .zip(mean_rd)
            .map(|(a, b)| (a.value(), b.value()))
            .collect();
        Ok(Self {
            layout: Layout::Fixed(means),
            threshold: gamma_th.value(),
        })
    }

    /// Whether trial `trial` is an outage.
    #[inline]
    fn trial_fails(&self, seed: u64, trial: u64) -> bool {
        let mut total = 0.0;
        let relays = match &self.layout {
            Layout::Fixed(means) => means.len(),
            Layout::Disk { relays, .. } => *relays,
        };
        for i in 0..relays {
            let relay = i as u32;
            let (mean_sr, mean_rd) = match &self.layout {
                Layout::Fixed(means) => means[i],
                Layout::Disk {
                    center,
                    radius,
                    rx,
                    budget,
                    ..
                } => {
                    let mut rng = stream(seed, trial, relay, Purpose::Placement);
                    let p = random_disk_point(*center, *radius, &mut rng);
                    (
                        budget.source_hop(p.x.hypot(p.y)),
                        budget.relay_hop(p.distance(*rx)),
                    )
                }
            };
            let g_sr = draw_gain(&mut stream(seed, trial, relay, Purpose::SourceHop));
            let g_rd = draw_gain(&mut stream(seed, trial, relay, Purpose::RelayHop));
            total += af_branch_snr(g_sr * mean_sr, g_rd * mean_rd);
            // branch SNRs are non-negative, the sum only grows
            if total >= self.threshold {
                return false;
            }
        }
        total < self.threshold
    }

    /// Outage count over trials `0..trials`, on the current rayon pool.
    pub(crate) fn count_failures(&self, trials: u64, seed: u64) -> u64 {
        let chunks = trials.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let end = ((c + 1) * CHUNK).min(trials);
                (c * CHUNK..end)
                    .filter(|&t| self.trial_fails(seed, t))
                    .count() as u64
            })
            .sum()
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            quantity: "trial count",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(())
}

/// Monte Carlo outage probability for `cfg` with relays laid out by
/// `placement`. Uses [`THREADS_ENV`] workers if set, else the global pool.
pub fn estimate_outage(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    trials: u64,
    master_seed: u64,
) -> Result<OutageEstimate> {
    estimate_outage_on(cfg, placement, trials, master_seed, env_workers())
}

/// [`estimate_outage`] on exactly `workers` threads.
pub fn estimate_outage_with_workers(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<OutageEstimate> {
    estimate_outage_on(cfg, placement, trials, master_seed, Some(workers.max(1)))
}

fn estimate_outage_on(
    cfg: &SystemConfig,
    placement: &PlacementSpec,
    trials: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<OutageEstimate> {
    check_trials(trials)?;
    let scenario = Scenario::new(cfg, placement, master_seed)?;
    let failures = in_pool(workers, || scenario.count_failures(trials, master_seed))?;
    OutageEstimate::from_counts(failures, trials, master_seed, config_digest(cfg, placement))
}

/// Monte Carlo outage for relay branches with the given mean hop SNRs,
/// bypassing geometry and path loss.
pub fn estimate_outage_with_means(
    mean_sr: &[SnrLinear],
    mean_rd: &[SnrLinear],
    gamma_th: SnrLinear,
    trials: u64,
    master_seed: u64,
) -> Result<OutageEstimate> {
    check_trials(trials)?;
    let scenario = Scenario::from_means(mean_sr, mean_rd, gamma_th)?;
    let failures = in_pool(env_workers(), || {
        scenario.count_failures(trials, master_seed)
    })?;
    let json = serde_json::to_string(&(mean_sr, mean_rd, gamma_th))?;
    let digest = hex::encode(Sha256::digest(json.as_bytes()));
    OutageEstimate::from_counts(failures, trials, master_seed, digest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{DistanceMm, PowerDbm};

    fn mm(x: f64) -> DistanceMm {
        DistanceMm::new(x).unwrap()
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = SystemConfig::default();
        let spec = PlacementSpec::midway(cfg.d_mm, 1);
        assert!(estimate_outage(&cfg, &spec, 0, 1).is_err());
    }

    #[test]
    fn mismatched_distance_rejected() {
        let cfg = SystemConfig::default();
        assert!(estimate_outage(&cfg, &PlacementSpec::midway(mm(0.3), 1), 10, 1).is_err());
        assert!(estimate_outage(&cfg, &PlacementSpec::midway(cfg.d_mm, 0), 10, 1).is_err());
    }

    #[test]
    fn huge_power_never_fails() {
        let cfg = SystemConfig::default().with_all_powers(PowerDbm::new(100.0).unwrap());
        for spec in [
            PlacementSpec::midway(cfg.d_mm, 1),
            PlacementSpec::midway(cfg.d_mm, 4),
            PlacementSpec::random_disk(cfg.d_mm, 2),
        ] {
            let est = estimate_outage(&cfg, &spec, 10_000, 3).unwrap();
            assert_eq!(est.failures, 0);
            assert_eq!(est.p_hat, 0.0);
            assert_eq!(est.ci_low, 0.0);
        }
    }

    #[test]
    fn weak_single_hop_almost_always_fails() {
        // relay midway on a 0.4 mm link: each hop is 0.2 mm with mean SNR
        // ~1.954, and the min bound alone gives 1 - exp(-10 * 2 / 1.954)
        let cfg = SystemConfig {
            d_mm: mm(0.4),
            ..SystemConfig::default()
        };
        let est = estimate_outage(&cfg, &PlacementSpec::midway(cfg.d_mm, 1), 100_000, 11).unwrap();
        assert!(est.p_hat >= 0.999, "{}", est.p_hat);
    }

    #[test]
    fn estimate_fields_consistent() {
        let cfg = SystemConfig::default();
        let spec = PlacementSpec::midway(cfg.d_mm, 2);
        let est = estimate_outage(&cfg, &spec, 50_000, 99).unwrap();
        assert_eq!(est.trials, 50_000);
        assert_eq!(est.p_hat, est.failures as f64 / est.trials as f64);
        assert!(est.ci_low <= est.p_hat && est.p_hat <= est.ci_high);
        assert_eq!(est.master_seed, 99);
        assert_eq!(est.config_digest, config_digest(&cfg, &spec));
        assert_eq!(est.config_digest.len(), 64);
    }

    #[test]
    fn digest_tracks_inputs() {
        let cfg = SystemConfig::default();
        let a = config_digest(&cfg, &PlacementSpec::midway(cfg.d_mm, 2));
        let b = config_digest(&cfg, &PlacementSpec::midway(cfg.d_mm, 3));
        let c = config_digest(
            &cfg.with_source_power(PowerDbm::new(-30.0).unwrap()),
            &PlacementSpec::midway(cfg.d_mm, 2),
        );
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, config_digest(&cfg, &PlacementSpec::midway(cfg.d_mm, 2)));
    }

    #[test]
    fn per_run_placement_is_one_fixed_layout() {
        let cfg = SystemConfig::default();
        let spec = PlacementSpec::RandomDisk {
            d_mm: cfg.d_mm,
            m: 3,
            radius_mm: None,
            redraw: Redraw::PerRun,
        };
        let s1 = Scenario::new(&cfg, &spec, 5).unwrap();
        let s2 = Scenario::new(&cfg, &spec, 5).unwrap();
        let s3 = Scenario::new(&cfg, &spec, 6).unwrap();
        match (&s1.layout, &s2.layout, &s3.layout) {
            (Layout::Fixed(a), Layout::Fixed(b), Layout::Fixed(c)) => {
                assert_eq!(a, b);
                assert_ne!(a, c);
                assert_eq!(a.len(), 3);
            }
            _ => panic!("per-run layout should be fixed"),
        }
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let cfg = SystemConfig::default();
        let spec = PlacementSpec::random_disk(cfg.d_mm, 3);
        let one = estimate_outage_with_workers(&cfg, &spec, 100_000, 7, 1).unwrap();
        let three = estimate_outage_with_workers(&cfg, &spec, 100_000, 7, 3).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn means_entry_point_validates() {
        let s = |x: f64| SnrLinear::new(x).unwrap();
        assert!(estimate_outage_with_means(&[], &[], s(10.0), 10, 1).is_err());
        assert!(estimate_outage_with_means(&[s(1.0)], &[], s(10.0), 10, 1).is_err());
        assert!(estimate_outage_with_means(&[s(1.0)], &[s(1.0)], s(10.0), 0, 1).is_err());
    }
}

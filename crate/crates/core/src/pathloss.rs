//! Empirical in-body terahertz path loss and per-hop mean SNR.
//!
//! The model is a single polynomial fit in distance, carrier frequency and
//! sweat-duct count `N`:
//!
//! ```text
//! PL(d, f, N) = -0.2 N + 3.98 + (0.44 N + 98.48) d^0.65 + (0.068 N + 2.4) f^4.07   [dB]
//! ```
//!
//! Units matter here and the fit does not carry them: `d` is taken in
//! millimeters and `f` in terahertz ([`DISTANCE_UNIT`], [`FREQUENCY_UNIT`]).
//! With that choice the reference hop (0.2 mm, 1 THz, N = 5) loses about
//! 41 dB. The polynomial is evaluated anywhere in its domain, but it was fitted
//! over [`FITTED_DISTANCE_MM`] x [`FITTED_FREQUENCY_THZ`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quantities::{
    db_to_linear, DistanceMm, FrequencyTHz, PowerDbm, SnrLinear, SweatDucts, SystemConfig,
};

pub const DISTANCE_UNIT: &str = "mm";
pub const FREQUENCY_UNIT: &str = "THz";

pub const FITTED_DISTANCE_MM: (f64, f64) = (0.1, 0.4);
pub const FITTED_FREQUENCY_THZ: (f64, f64) = (0.5, 1.5);

/// Path loss in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathLossDb(f64);

impl PathLossDb {
    pub fn db(self) -> f64 {
        self.0
    }
}

/// Coefficients of the path-loss polynomial. Each term is `base + per_duct * N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub offset_base: f64,
    pub offset_per_duct: f64,
    pub distance_base: f64,
    pub distance_per_duct: f64,
    pub distance_exponent: f64,
    pub frequency_base: f64,
    pub frequency_per_duct: f64,
    pub frequency_exponent: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self {
            offset_base: 3.98,
            offset_per_duct: -0.2,
            distance_base: 98.48,
            distance_per_duct: 0.44,
            distance_exponent: 0.65,
            frequency_base: 2.4,
            frequency_per_duct: 0.068,
            frequency_exponent: 4.07,
        }
    }
}

impl PathLossModel {
    pub fn eval(&self, d: DistanceMm, f: FrequencyTHz, n: SweatDucts) -> PathLossDb {
        PathLossDb(self.eval_raw(d.mm(), f.thz(), n.count()))
    }

    // hot-loop entry; callers guarantee d >= 0, f > 0, n >= 0
    #[inline]
    pub(crate) fn eval_raw(&self, d_mm: f64, f_thz: f64, n: f64) -> f64 {
        self.offset_per_duct * n
            + self.offset_base
            + (self.distance_per_duct * n + self.distance_base) * d_mm.powf(self.distance_exponent)
            + (self.frequency_per_duct * n + self.frequency_base)
                * f_thz.powf(self.frequency_exponent)
    }

    /// Analytic `dPL/dN`.
    pub fn duct_sensitivity(&self, d: DistanceMm, f: FrequencyTHz) -> f64 {
        self.offset_per_duct
            + self.distance_per_duct * d.mm().powf(self.distance_exponent)
            + self.frequency_per_duct * f.thz().powf(self.frequency_exponent)
    }
}

/// Path loss of one hop under the default fit.
pub fn pathloss_db(d: DistanceMm, f: FrequencyTHz, n_ducts: SweatDucts) -> Result<PathLossDb> {
    // the newtypes carry the domain checks; re-validate in case a caller
    // smuggled a value through serde without going through `new`
    DistanceMm::new(d.mm())?;
    FrequencyTHz::new(f.thz())?;
    SweatDucts::new(n_ducts.count())?;
    Ok(PathLossModel::default().eval(d, f, n_ducts))
}

/// Whether `(d, f)` lies inside the ranges the fit was derived from.
pub fn in_fitted_range(d: DistanceMm, f: FrequencyTHz) -> bool {
    let (dlo, dhi) = FITTED_DISTANCE_MM;
    let (flo, fhi) = FITTED_FREQUENCY_THZ;
    (dlo..=dhi).contains(&d.mm()) && (flo..=fhi).contains(&f.thz())
}

/// Mean received SNR of a hop of length `d` driven at `tx_power`.
///
/// Small-scale fading has unit mean power, so this is also the mean of the
/// faded instantaneous SNR.
pub fn mean_hop_snr(cfg: &SystemConfig, tx_power: PowerDbm, d: DistanceMm) -> Result<SnrLinear> {
    let loss = pathloss_db(d, cfg.f_thz, cfg.n_ducts)?;
    let noise = cfg.noise_power()?;
    let snr_db = tx_power.dbm() - loss.db() - noise.dbm();
    SnrLinear::new(db_to_linear(snr_db)?)
}

/// Precomputed per-scenario link budget for the Monte Carlo hot loop.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HopBudget {
    model: PathLossModel,
    f_thz: f64,
    n: f64,
    source_margin_db: f64,
    relay_margin_db: f64,
}

impl HopBudget {
    pub(crate) fn new(cfg: &SystemConfig) -> Result<Self> {
        let noise = cfg.noise_power()?.dbm();
        Ok(Self {
            model: PathLossModel::default(),
            f_thz: cfg.f_thz.thz(),
            n: cfg.n_ducts.count(),
            source_margin_db: cfg.p_source_dbm.dbm() - noise,
            relay_margin_db: cfg.p_relay_dbm.dbm() - noise,
        })
    }

    #[inline]
    fn snr(&self, margin_db: f64, d_mm: f64) -> f64 {
        let loss = self.model.eval_raw(d_mm, self.f_thz, self.n);
        10f64.powf((margin_db - loss) / 10.0)
    }

    /// Mean SNR at a relay `d_mm` away from the source.
    #[inline]
    pub(crate) fn source_hop(&self, d_mm: f64) -> f64 {
        self.snr(self.source_margin_db, d_mm)
    }

    /// Mean SNR at the receiver `d_mm` away from a relay.
    #[inline]
    pub(crate) fn relay_hop(&self, d_mm: f64) -> f64 {
        self.snr(self.relay_margin_db, d_mm)
    }
}

//! Unit-carrying scalar types and the dB / linear / dBm conversions between them.
//!
//! Every radio quantity that crosses a module boundary is wrapped in one of
//! these newtypes. Constructors validate their invariants, and the serde
//! representation of each type is its bare number so config files stay flat.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn finite(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { quantity, value })
    }
}

/// Converts a decibel ratio to a linear power ratio, `10^(x/10)`.
pub fn db_to_linear(x: f64) -> Result<f64> {
    Ok(10f64.powf(finite("decibel value", x)? / 10.0))
}

/// Converts a positive linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> Result<f64> {
    let x = finite("linear ratio", x)?;
    if x <= 0.0 {
        return Err(Error::OutOfRange {
            quantity: "linear ratio",
            value: x,
            expected: "> 0",
        });
    }
    Ok(10.0 * x.log10())
}

/// Transmit or noise power in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerDbm(f64);

impl PowerDbm {
    pub fn new(dbm: f64) -> Result<Self> {
        finite("power (dBm)", dbm).map(Self)
    }

    pub fn dbm(self) -> f64 {
        self.0
    }

    pub fn watts(self) -> f64 {
        dbm_to_watt(self)
    }
}

/// `10^((p - 30) / 10)` watts.
pub fn dbm_to_watt(p: PowerDbm) -> f64 {
    // exact for integer dBm multiples of 10 in the range the simulator uses
    10f64.powf((p.0 - 30.0) / 10.0)
}

/// Carrier frequency in terahertz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FrequencyTHz(f64);

impl FrequencyTHz {
    pub fn new(thz: f64) -> Result<Self> {
        let thz = finite("frequency (THz)", thz)?;
        if thz <= 0.0 {
            return Err(Error::OutOfRange {
                quantity: "frequency (THz)",
                value: thz,
                expected: "> 0",
            });
        }
        Ok(Self(thz))
    }

    pub fn thz(self) -> f64 {
        self.0
    }
}

/// System bandwidth in hertz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BandwidthHz(f64);

impl BandwidthHz {
    pub fn new(hz: f64) -> Result<Self> {
        let hz = finite("bandwidth (Hz)", hz)?;
        if hz <= 0.0 {
            return Err(Error::OutOfRange {
                quantity: "bandwidth (Hz)",
                value: hz,
                expected: "> 0",
            });
        }
        Ok(Self(hz))
    }

    pub fn from_ghz(ghz: f64) -> Result<Self> {
        Self::new(ghz * 1e9)
    }

    pub fn hz(self) -> f64 {
        self.0
    }
}

/// Distance in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DistanceMm(f64);

impl DistanceMm {
    pub const ZERO: DistanceMm = DistanceMm(0.0);

    pub fn new(mm: f64) -> Result<Self> {
        let mm = finite("distance (mm)", mm)?;
        if mm < 0.0 {
            return Err(Error::OutOfRange {
                quantity: "distance (mm)",
                value: mm,
                expected: ">= 0",
            });
        }
        Ok(Self(mm))
    }

    pub fn mm(self) -> f64 {
        self.0
    }
}

/// Noise power spectral density in dBm/Hz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NoisePsd(f64);

impl NoisePsd {
    /// Thermal noise floor at room temperature.
    pub const THERMAL: NoisePsd = NoisePsd(-174.0);

    pub fn new(dbm_per_hz: f64) -> Result<Self> {
        finite("noise PSD (dBm/Hz)", dbm_per_hz).map(Self)
    }

    pub fn dbm_per_hz(self) -> f64 {
        self.0
    }
}

/// Integrated noise power over `bw`: `psd + 10 log10(bw)`.
pub fn noise_power_dbm(psd: NoisePsd, bw: BandwidthHz) -> Result<PowerDbm> {
    // BandwidthHz already guarantees bw > 0; re-checked for values built via serde
    if bw.0 <= 0.0 {
        return Err(Error::OutOfRange {
            quantity: "bandwidth (Hz)",
            value: bw.0,
            expected: "> 0",
        });
    }
    PowerDbm::new(psd.0 + 10.0 * bw.0.log10())
}

/// Number of sweat ducts in the tissue path. Integer-valued physically, kept
/// real so it can be swept continuously.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SweatDucts(f64);

impl SweatDucts {
    pub fn new(n: f64) -> Result<Self> {
        let n = finite("sweat duct count", n)?;
        if n < 0.0 {
            return Err(Error::OutOfRange {
                quantity: "sweat duct count",
                value: n,
                expected: ">= 0",
            });
        }
        Ok(Self(n))
    }

    pub fn count(self) -> f64 {
        self.0
    }
}

/// Signal-to-noise ratio as a linear power ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SnrLinear(f64);

impl SnrLinear {
    pub const ZERO: SnrLinear = SnrLinear(0.0);

    pub fn new(ratio: f64) -> Result<Self> {
        let ratio = finite("linear SNR", ratio)?;
        if ratio < 0.0 {
            return Err(Error::OutOfRange {
                quantity: "linear SNR",
                value: ratio,
                expected: ">= 0",
            });
        }
        Ok(Self(ratio))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_db(self) -> Result<SnrDb> {
        linear_to_db(self.0).map(SnrDb)
    }
}

/// Signal-to-noise ratio in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SnrDb(f64);

impl SnrDb {
    pub fn new(db: f64) -> Result<Self> {
        finite("SNR (dB)", db).map(Self)
    }

    pub fn db(self) -> f64 {
        self.0
    }

    pub fn to_linear(self) -> SnrLinear {
        SnrLinear(10f64.powf(self.0 / 10.0))
    }
}

macro_rules! scalar_serde {
    ($($ty:ident),*) => {$(
        impl TryFrom<f64> for $ty {
            type Error = Error;
            fn try_from(v: f64) -> Result<Self> {
                $ty::new(v)
            }
        }
        impl From<$ty> for f64 {
            fn from(v: $ty) -> f64 {
                v.0
            }
        }
    )*};
}

scalar_serde!(
    PowerDbm,
    FrequencyTHz,
    BandwidthHz,
    DistanceMm,
    NoisePsd,
    SweatDucts,
    SnrLinear,
    SnrDb
);

/// All scalar radio and tissue parameters of one simulated scenario.
///
/// JSON keys carry their unit (`f_thz`, `bw_hz`, `p_source_dbm`, ...). The
/// [`Default`] is the reference scenario: 5 sweat ducts, 1 THz carrier,
/// 1 GHz bandwidth, 100 nW (-40 dBm) at source and every relay, 10 dB
/// decoding threshold, -174 dBm/Hz noise and 0.2 mm Tx-Rx separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub n_ducts: SweatDucts,
    pub f_thz: FrequencyTHz,
    pub bw_hz: BandwidthHz,
    pub p_source_dbm: PowerDbm,
    pub p_relay_dbm: PowerDbm,
    pub gamma_th_db: SnrDb,
    pub noise_psd_dbm_hz: NoisePsd,
    pub d_mm: DistanceMm,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_ducts: SweatDucts(5.0),
            f_thz: FrequencyTHz(1.0),
            bw_hz: BandwidthHz(1e9),
            p_source_dbm: PowerDbm(-40.0),
            p_relay_dbm: PowerDbm(-40.0),
            gamma_th_db: SnrDb(10.0),
            noise_psd_dbm_hz: NoisePsd::THERMAL,
            d_mm: DistanceMm(0.2),
        }
    }
}

impl SystemConfig {
    /// Integrated receiver noise power for this bandwidth.
    pub fn noise_power(&self) -> Result<PowerDbm> {
        noise_power_dbm(self.noise_psd_dbm_hz, self.bw_hz)
    }

    pub fn with_source_power(mut self, p: PowerDbm) -> Self {
        self.p_source_dbm = p;
        self
    }

    /// Sets both source and relay transmit power.
    pub fn with_all_powers(mut self, p: PowerDbm) -> Self {
        self.p_source_dbm = p;
        self.p_relay_dbm = p;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn db_to_linear_examples() {
        assert_eq!(db_to_linear(0.0).unwrap(), 1.0);
        assert_eq!(db_to_linear(10.0).unwrap(), 10.0);
        assert_relative_eq!(db_to_linear(3.0).unwrap(), 1.9953, epsilon = 1e-4);
        assert!(db_to_linear(f64::NAN).is_err());
        assert!(db_to_linear(f64::INFINITY).is_err());
    }

    #[test]
    fn dbm_to_watt_examples() {
        assert_eq!(PowerDbm::new(0.0).unwrap().watts(), 1e-3);
        assert_relative_eq!(
            dbm_to_watt(PowerDbm::new(-40.0).unwrap()),
            1e-7,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            dbm_to_watt(PowerDbm::new(-30.0).unwrap()),
            1e-6,
            max_relative = 1e-15
        );
        assert!(PowerDbm::new(f64::NAN).is_err());
    }

    #[test]
    fn noise_power_examples() {
        let psd = NoisePsd::THERMAL;
        let at = |hz: f64| {
            noise_power_dbm(psd, BandwidthHz::new(hz).unwrap())
                .unwrap()
                .dbm()
        };
        assert_relative_eq!(at(1e9), -84.0, epsilon = 1e-12);
        assert_eq!(at(1.0), -174.0);
        assert_relative_eq!(at(2e9), -80.99, epsilon = 1e-3);
        assert!(BandwidthHz::new(0.0).is_err());
        assert!(BandwidthHz::new(-1e9).is_err());
    }

    #[test]
    fn constructors_reject_out_of_domain() {
        assert!(FrequencyTHz::new(0.0).is_err());
        assert!(DistanceMm::new(-0.1).is_err());
        assert!(DistanceMm::new(0.0).is_ok());
        assert!(SweatDucts::new(-1.0).is_err());
        assert!(SnrLinear::new(-1e-9).is_err());
        assert!(linear_to_db(0.0).is_err());
    }

    #[test]
    fn default_config_is_reference_scenario() {
        let cfg = SystemConfig::default();
        assert_eq!(cfg.n_ducts.count(), 5.0);
        assert_eq!(cfg.f_thz.thz(), 1.0);
        assert_eq!(cfg.bw_hz.hz(), 1e9);
        assert_eq!(cfg.p_source_dbm.dbm(), -40.0);
        assert_eq!(cfg.p_relay_dbm.dbm(), -40.0);
        assert_eq!(cfg.gamma_th_db.db(), 10.0);
        assert_eq!(cfg.noise_psd_dbm_hz.dbm_per_hz(), -174.0);
        assert_eq!(cfg.d_mm.mm(), 0.2);
    }

    #[test]
    fn config_json_uses_unit_suffixed_keys() {
        let json = serde_json::to_value(SystemConfig::default()).unwrap();
        let obj = json.as_object().unwrap();
        for key in [
            "n_ducts",
            "f_thz",
            "bw_hz",
            "p_source_dbm",
            "p_relay_dbm",
            "gamma_th_db",
            "noise_psd_dbm_hz",
            "d_mm",
        ] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj.len(), 8);
    }

    #[test]
    fn config_json_rejects_invalid_values() {
        let mut json = serde_json::to_value(SystemConfig::default()).unwrap();
        json["bw_hz"] = serde_json::json!(-1.0);
        assert!(serde_json::from_value::<SystemConfig>(json).is_err());

        let mut json = serde_json::to_value(SystemConfig::default()).unwrap();
        json["bogus"] = serde_json::json!(1.0);
        assert!(serde_json::from_value::<SystemConfig>(json).is_err());
    }

    proptest! {
        #[test]
        fn db_round_trip(exp in -12.0f64..12.0) {
            let x = 10f64.powf(exp);
            let back = db_to_linear(linear_to_db(x).unwrap()).unwrap();
            prop_assert!(((back - x) / x).abs() < 1e-12);
        }

        #[test]
        fn snr_round_trip(exp in -12.0f64..12.0) {
            let x = SnrLinear::new(10f64.powf(exp)).unwrap();
            let back = x.to_db().unwrap().to_linear().value();
            prop_assert!(((back - x.value()) / x.value()).abs() < 1e-12);
        }

        #[test]
        fn noise_power_increases_with_bandwidth(a in 1.0f64..1e12, b in 1.0f64..1e12) {
            prop_assume!(a < b);
            let psd = NoisePsd::THERMAL;
            let na = noise_power_dbm(psd, BandwidthHz::new(a).unwrap()).unwrap();
            let nb = noise_power_dbm(psd, BandwidthHz::new(b).unwrap()).unwrap();
            prop_assert!(na < nb);
        }
    }
}

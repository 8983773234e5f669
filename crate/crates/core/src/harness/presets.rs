use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sweep::{PlacementTemplate, SweepParam, SweepSpec, SweptParameter};
use crate::error::Error;
use crate::outage::DEFAULT_TRIALS;
use crate::quantities::SystemConfig;
use crate::topology::DEFAULT_SPACING_DEG;

pub const DEFAULT_SEED: u64 = 0x6e61_6e6f_7468_7a31;

/// The six reference experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    /// Bandwidth sweep.
    Fig3,
    /// Carrier frequency sweep.
    Fig4,
    /// Relay column offset from the transmitter.
    Fig5,
    /// Tx-Rx distance sweep.
    Fig6,
    /// Source power sweep.
    Fig7,
    /// Source power sweep, midway and random-disk relays.
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
            FigureId::Fig5 => 5,
            FigureId::Fig6 => 6,
            FigureId::Fig7 => 7,
            FigureId::Fig8 => 8,
        };
        write!(f, "fig{n}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

pub const RELAY_COUNTS: [usize; 5] = [1, 2, 3, 4, 5];

pub const BANDWIDTHS_HZ: [f64; 5] = [0.5e9, 1.0e9, 1.5e9, 2.0e9, 2.5e9];
pub const FREQUENCIES_THZ: [f64; 5] = [0.5, 0.75, 1.0, 1.25, 1.5];
pub const RELAY_OFFSETS_MM: [f64; 5] = [0.02, 0.06, 0.10, 0.14, 0.18];
pub const DISTANCES_MM: [f64; 4] = [0.1, 0.2, 0.3, 0.4];
pub const SOURCE_POWERS_DBM: [f64; 7] = [-50.0, -45.0, -40.0, -35.0, -30.0, -25.0, -20.0];

/// Sweep for one reference experiment on the baseline scenario.
pub fn figure_preset(id: FigureId) -> SweepSpec {
    let midway = PlacementTemplate::midway();
    let (name, values, placements) = match id {
        FigureId::Fig3 => (SweepParam::BwHz, BANDWIDTHS_HZ.to_vec(), vec![midway]),
        FigureId::Fig4 => (SweepParam::FThz, FREQUENCIES_THZ.to_vec(), vec![midway]),
        FigureId::Fig5 => (
            SweepParam::RelayOffsetMm,
            RELAY_OFFSETS_MM.to_vec(),
            vec![PlacementTemplate::VerticalOffset {
                spacing_deg: DEFAULT_SPACING_DEG,
                x_offset_mm: None,
            }],
        ),
        FigureId::Fig6 => (SweepParam::DMm, DISTANCES_MM.to_vec(), vec![midway]),
        FigureId::Fig7 => (
            SweepParam::PSourceDbm,
            SOURCE_POWERS_DBM.to_vec(),
            vec![midway],
        ),
        FigureId::Fig8 => (
            SweepParam::PSourceDbm,
            SOURCE_POWERS_DBM.to_vec(),
            vec![midway, PlacementTemplate::random_disk()],
        ),
    };
    SweepSpec {
        base_config: SystemConfig::default(),
        parameter: SweptParameter { name, values },
        relay_counts: RELAY_COUNTS.to_vec(),
        placements,
        trials: DEFAULT_TRIALS,
        master_seed: DEFAULT_SEED,
    }
}

/// [`figure_preset`] by name (`fig3` ... `fig8`).
pub fn figure_preset_named(id: &str) -> Result<SweepSpec, Error> {
    id.parse().map(figure_preset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(id: FigureId) -> usize {
        figure_preset(id).points().len()
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(grid(FigureId::Fig3), 25);
        assert_eq!(grid(FigureId::Fig4), 25);
        assert_eq!(grid(FigureId::Fig5), 25);
        assert_eq!(grid(FigureId::Fig6), 20);
        assert_eq!(grid(FigureId::Fig7), 35);
        assert_eq!(grid(FigureId::Fig8), 70);
    }

    #[test]
    fn parameter_values() {
        let fig4 = figure_preset(FigureId::Fig4);
        assert_eq!(fig4.parameter.values, vec![0.5, 0.75, 1.0, 1.25, 1.5]);
        let fig6 = figure_preset(FigureId::Fig6);
        assert_eq!(fig6.parameter.name, SweepParam::DMm);
        assert_eq!(fig6.parameter.values, vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(fig6.placements, vec![PlacementTemplate::midway()]);
        let fig5 = figure_preset(FigureId::Fig5);
        assert_eq!(fig5.parameter.values, vec![0.02, 0.06, 0.10, 0.14, 0.18]);
        let fig7 = figure_preset(FigureId::Fig7);
        assert_eq!(
            fig7.parameter.values,
            vec![-50.0, -45.0, -40.0, -35.0, -30.0, -25.0, -20.0]
        );
        assert_eq!(fig7.base_config.p_relay_dbm.dbm(), -40.0);
    }

    #[test]
    fn fig8_pairs_both_placements() {
        let fig8 = figure_preset(FigureId::Fig8);
        assert_eq!(
            fig8.placements,
            vec![
                PlacementTemplate::midway(),
                PlacementTemplate::random_disk()
            ]
        );
        assert_eq!(fig8.parameter, figure_preset(FigureId::Fig7).parameter);
    }

    #[test]
    fn names() {
        assert_eq!(
            figure_preset_named("fig3").unwrap(),
            figure_preset(FigureId::Fig3)
        );
        assert_eq!("FIG8".parse::<FigureId>().unwrap(), FigureId::Fig8);
        assert!(matches!(
            figure_preset_named("fig9"),
            Err(Error::UnknownPreset(_))
        ));
        assert!(figure_preset_named("fig2").is_err());
    }
}

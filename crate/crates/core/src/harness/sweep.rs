use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outage::{self, env_workers, in_pool, OutageEstimate, Scenario};
use crate::quantities::{
    BandwidthHz, DistanceMm, FrequencyTHz, PowerDbm, SweatDucts, SystemConfig,
};
use crate::topology::{AngleVertex, PlacementSpec, Redraw, DEFAULT_SPACING_DEG};

/// Scenario parameter varied across a sweep. Values are in the unit named
/// by the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    BwHz,
    FThz,
    DMm,
    PSourceDbm,
    /// Source and relay power together.
    PAllDbm,
    NDucts,
    /// Horizontal relay offset from the transmitter; needs a
    /// `vertical_offset` placement.
    RelayOffsetMm,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::BwHz => "bw_hz",
            Self::FThz => "f_thz",
            Self::DMm => "d_mm",
            Self::PSourceDbm => "p_source_dbm",
            Self::PAllDbm => "p_all_dbm",
            Self::NDucts => "n_ducts",
            Self::RelayOffsetMm => "relay_offset_mm",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweptParameter {
    pub name: SweepParam,
    pub values: Vec<f64>,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING_DEG
}
fn default_x_frac() -> f64 {
    0.5
}
fn default_radius_frac() -> f64 {
    0.5
}

/// A [`PlacementSpec`] with the Tx-Rx distance and relay count left open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlacementTemplate {
    VerticalAngular {
        #[serde(default = "default_spacing")]
        spacing_deg: f64,
        #[serde(default = "default_x_frac")]
        x_frac: f64,
        #[serde(default)]
        vertex: AngleVertex,
    },
    VerticalOffset {
        #[serde(default = "default_spacing")]
        spacing_deg: f64,
        /// Filled in per point by a `relay_offset_mm` sweep.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x_offset_mm: Option<DistanceMm>,
    },
    RandomDisk {
        /// Disk radius as a fraction of the Tx-Rx distance.
        #[serde(default = "default_radius_frac")]
        radius_frac: f64,
        #[serde(default)]
        redraw: Redraw,
    },
}

impl PlacementTemplate {
    pub fn midway() -> Self {
        Self::VerticalAngular {
            spacing_deg: DEFAULT_SPACING_DEG,
            x_frac: 0.5,
            vertex: AngleVertex::Transmitter,
        }
    }

    pub fn random_disk() -> Self {
        Self::RandomDisk {
            radius_frac: 0.5,
            redraw: Redraw::PerTrial,
        }
    }

    /// Label written to the `placement` CSV column.
    pub fn label(&self) -> &'static str {
        match self {
            Self::VerticalAngular { .. } => "vertical_angular",
            Self::VerticalOffset { .. } => "vertical_offset",
            Self::RandomDisk { .. } => "random_disk",
        }
    }

    pub fn instantiate(&self, d: DistanceMm, m: usize) -> Result<PlacementSpec> {
        Ok(match *self {
            Self::VerticalAngular {
                spacing_deg,
                x_frac,
                vertex,
            } => PlacementSpec::VerticalAngular {
                d_mm: d,
                m,
                spacing_deg,
                x_frac,
                vertex,
            },
            Self::VerticalOffset {
                spacing_deg,
                x_offset_mm,
            } => PlacementSpec::VerticalOffset {
                d_mm: d,
                m,
                spacing_deg,
                x_offset_mm: x_offset_mm.ok_or_else(|| {
                    Error::Placement("vertical_offset placement needs x_offset_mm".into())
                })?,
            },
            Self::RandomDisk {
                radius_frac,
                redraw,
            } => PlacementSpec::RandomDisk {
                d_mm: d,
                m,
                radius_mm: Some(DistanceMm::new(radius_frac * d.mm())?),
                redraw,
            },
        })
    }
}

impl FromStr for PlacementTemplate {
    type Err = Error;

    /// `vertical[:<spacing_deg>]`, `offset:<x_mm>`, `random[:<radius_frac>]`
    /// or `random-per-run[:<radius_frac>]`. A string starting with `{` is
    /// parsed as JSON.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<Option<f64>> {
            arg.map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Placement(format!("bad {what} `{a}` in `{s}`")))
            })
            .transpose()
        };
        match kind {
            "vertical" | "midway" => Ok(Self::VerticalAngular {
                spacing_deg: num("spacing")?.unwrap_or(DEFAULT_SPACING_DEG),
                x_frac: 0.5,
                vertex: AngleVertex::Transmitter,
            }),
            "offset" => Ok(Self::VerticalOffset {
                spacing_deg: DEFAULT_SPACING_DEG,
                x_offset_mm: Some(DistanceMm::new(num("offset")?.ok_or_else(|| {
                    Error::Placement("offset placement needs `offset:<mm>`".into())
                })?)?),
            }),
            "random" | "random-per-run" => Ok(Self::RandomDisk {
                radius_frac: num("radius fraction")?.unwrap_or(0.5),
                redraw: if kind == "random" {
                    Redraw::PerTrial
                } else {
                    Redraw::PerRun
                },
            }),
            _ => Err(Error::Placement(format!("unknown placement `{s}`"))),
        }
    }
}

/// A grid of outage estimates: every swept value times every placement
/// times every relay count, all under the same master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base_config: SystemConfig,
    pub parameter: SweptParameter,
    pub relay_counts: Vec<usize>,
    pub placements: Vec<PlacementTemplate>,
    pub trials: u64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub m_relays: usize,
    pub placement: String,
    pub estimate: OutageEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: SweepSpec,
    pub master_seed: u64,
    pub tool_version: String,
    pub timestamp: String,
    /// False when the sweep aborted and `rows` is a prefix of the grid.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub manifest: Manifest,
}

impl SweepResult {
    pub fn param_name(&self) -> SweepParam {
        self.manifest.spec.parameter.name
    }

    /// Rows for one placement label and relay count, in swept-value order.
    pub fn series(&self, placement: &str, m: usize) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.placement == placement && r.m_relays == m)
            .collect()
    }

    pub fn find(&self, value: f64, placement: &str, m: usize) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.param_value == value && r.placement == placement && r.m_relays == m)
    }
}

/// One grid point, fully resolved.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub param_value: f64,
    pub m_relays: usize,
    pub placement_label: &'static str,
    pub config: SystemConfig,
    pub placement: PlacementSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.parameter.values.is_empty() {
            return Err(Error::Sweep("swept value list is empty".into()));
        }
        if self.relay_counts.is_empty() || self.relay_counts.contains(&0) {
            return Err(Error::Sweep(
                "relay counts must be non-empty and >= 1".into(),
            ));
        }
        if self.placements.is_empty() {
            return Err(Error::Sweep("at least one placement is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::Sweep("trials must be >= 1".into()));
        }
        Ok(())
    }

    fn resolve(&self, value: f64, template: PlacementTemplate, m: usize) -> Result<SweepPoint> {
        let mut cfg = self.base_config;
        let mut template = template;
        match self.parameter.name {
            SweepParam::BwHz => cfg.bw_hz = BandwidthHz::new(value)?,
            SweepParam::FThz => cfg.f_thz = FrequencyTHz::new(value)?,
            SweepParam::DMm => cfg.d_mm = DistanceMm::new(value)?,
            SweepParam::PSourceDbm => cfg.p_source_dbm = PowerDbm::new(value)?,
            SweepParam::PAllDbm => cfg = cfg.with_all_powers(PowerDbm::new(value)?),
            SweepParam::NDucts => cfg.n_ducts = SweatDucts::new(value)?,
            SweepParam::RelayOffsetMm => match &mut template {
                PlacementTemplate::VerticalOffset { x_offset_mm, .. } => {
                    *x_offset_mm = Some(DistanceMm::new(value)?)
                }
                other => {
                    return Err(Error::Sweep(format!(
                        "relay_offset_mm sweeps need a vertical_offset placement, got {}",
                        other.label()
                    )))
                }
            },
        }
        let placement = template.instantiate(cfg.d_mm, m)?;
        placement.validate()?;
        Ok(SweepPoint {
            param_value: value,
            m_relays: m,
            placement_label: template.label(),
            config: cfg,
            placement,
        })
    }

    /// Grid points in output order: value, then placement, then relay count.
    pub fn points(&self) -> Vec<Result<SweepPoint>> {
        let mut out = Vec::new();
        for &value in &self.parameter.values {
            for &template in &self.placements {
                for &m in &self.relay_counts {
                    out.push(self.resolve(value, template, m));
                }
            }
        }
        out
    }
}

fn manifest(spec: &SweepSpec, complete: bool) -> Manifest {
    Manifest {
        spec: spec.clone(),
        master_seed: spec.master_seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        complete,
    }
}

fn run_point(point: &Result<SweepPoint>, trials: u64, seed: u64) -> Result<SweepRow> {
    let point = point.as_ref().map_err(|e| Error::Sweep(e.to_string()))?;
    let scenario = Scenario::new(&point.config, &point.placement, seed)?;
    let failures = scenario.count_failures(trials, seed);
    Ok(SweepRow {
        param_value: point.param_value,
        m_relays: point.m_relays,
        placement: point.placement_label.to_string(),
        estimate: OutageEstimate::from_counts(
            failures,
            trials,
            seed,
            outage::config_digest(&point.config, &point.placement),
        )?,
    })
}

/// Evaluates every grid point. Uses [`outage::THREADS_ENV`] workers if set.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_on(spec, env_workers())
}

pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    run_sweep_on(spec, Some(workers.max(1)))
}

fn run_sweep_on(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec.points();
    let results: Vec<Result<SweepRow>> = in_pool(workers, || {
        points
            .par_iter()
            .map(|p| run_point(p, spec.trials, spec.master_seed))
            .collect()
    })?;
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(source) => {
                return Err(Error::SweepAborted {
                    partial: Box::new(SweepResult {
                        rows,
                        manifest: manifest(spec, false),
                    }),
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(SweepResult {
        rows,
        manifest: manifest(spec, true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(values: Vec<f64>, relay_counts: Vec<usize>) -> SweepSpec {
        SweepSpec {
            base_config: SystemConfig::default(),
            parameter: SweptParameter {
                name: SweepParam::PSourceDbm,
                values,
            },
            relay_counts,
            placements: vec![PlacementTemplate::midway()],
            trials: 2_000,
            master_seed: 1,
        }
    }

    #[test]
    fn single_point_grid() {
        let r = run_sweep(&spec(vec![-40.0], vec![1])).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.manifest.complete);
        assert_eq!(r.param_name(), SweepParam::PSourceDbm);
    }

    #[test]
    fn rows_ordered_value_then_relays() {
        let r = run_sweep(&spec(vec![-50.0, -30.0], vec![1, 2, 3])).unwrap();
        let keys: Vec<(f64, usize)> = r.rows.iter().map(|r| (r.param_value, r.m_relays)).collect();
        assert_eq!(
            keys,
            vec![
                (-50.0, 1),
                (-50.0, 2),
                (-50.0, 3),
                (-30.0, 1),
                (-30.0, 2),
                (-30.0, 3)
            ]
        );
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(run_sweep(&spec(vec![], vec![1])).is_err());
        assert!(run_sweep(&spec(vec![-40.0], vec![])).is_err());
        assert!(run_sweep(&spec(vec![-40.0], vec![0])).is_err());
        let mut s = spec(vec![-40.0], vec![1]);
        s.trials = 0;
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn failing_point_aborts_with_partial_rows() {
        // seven relays 30 degrees apart need a 90 degree ray
        let s = spec(vec![-40.0], vec![1, 2, 7]);
        match run_sweep(&s) {
            Err(Error::SweepAborted { partial, .. }) => {
                assert_eq!(partial.rows.len(), 2);
                assert!(!partial.manifest.complete);
            }
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn offset_sweep_needs_offset_placement() {
        let mut s = spec(vec![0.02], vec![1]);
        s.parameter.name = SweepParam::RelayOffsetMm;
        assert!(run_sweep(&s).is_err());
        s.placements = vec![PlacementTemplate::VerticalOffset {
            spacing_deg: 30.0,
            x_offset_mm: None,
        }];
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.rows[0].placement, "vertical_offset");
    }

    #[test]
    fn template_parsing() {
        assert_eq!(
            "vertical".parse::<PlacementTemplate>().unwrap(),
            PlacementTemplate::midway()
        );
        assert_eq!(
            "random".parse::<PlacementTemplate>().unwrap(),
            PlacementTemplate::random_disk()
        );
        assert_eq!(
            "random-per-run:0.25".parse::<PlacementTemplate>().unwrap(),
            PlacementTemplate::RandomDisk {
                radius_frac: 0.25,
                redraw: Redraw::PerRun
            }
        );
        let off = "offset:0.06".parse::<PlacementTemplate>().unwrap();
        let p = off.instantiate(DistanceMm::new(0.2).unwrap(), 2).unwrap();
        assert_eq!(
            p,
            PlacementSpec::offset(
                DistanceMm::new(0.2).unwrap(),
                2,
                DistanceMm::new(0.06).unwrap()
            )
        );
        let json = r#"{"kind":"vertical_angular","spacing_deg":20}"#;
        assert!(matches!(
            json.parse::<PlacementTemplate>().unwrap(),
            PlacementTemplate::VerticalAngular { spacing_deg, .. } if spacing_deg == 20.0
        ));
        assert!("offset".parse::<PlacementTemplate>().is_err());
        assert!("spiral".parse::<PlacementTemplate>().is_err());
        assert!("vertical:abc".parse::<PlacementTemplate>().is_err());
    }

    #[test]
    fn random_template_radius_is_fraction_of_distance() {
        let p = PlacementTemplate::random_disk()
            .instantiate(DistanceMm::new(0.4).unwrap(), 3)
            .unwrap();
        assert_eq!(p.disk().unwrap().1, 0.2);
    }
}

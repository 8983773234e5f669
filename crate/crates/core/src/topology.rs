//! Planar node layouts: transmitter at the origin, receiver on the +x axis,
//! relays placed by a [`PlacementSpec`].

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::DistanceMm;

pub const DEFAULT_SPACING_DEG: f64 = 30.0;

/// A position in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    tx: Point2D,
    rx: Point2D,
    relays: Vec<Point2D>,
}

impl Topology {
    pub fn new(tx: Point2D, rx: Point2D, relays: Vec<Point2D>) -> Result<Self> {
        if relays.is_empty() {
            return Err(Error::Placement("topology needs at least one relay".into()));
        }
        let all_finite = [tx, rx]
            .iter()
            .chain(relays.iter())
            .all(|p| p.x.is_finite() && p.y.is_finite());
        if !all_finite {
            return Err(Error::Placement("node coordinates must be finite".into()));
        }
        if tx == rx {
            return Err(Error::Placement("transmitter and receiver coincide".into()));
        }
        Ok(Self { tx, rx, relays })
    }

    pub fn tx(&self) -> Point2D {
        self.tx
    }

    pub fn rx(&self) -> Point2D {
        self.rx
    }

    pub fn relays(&self) -> &[Point2D] {
        &self.relays
    }

    pub fn hop_distances(&self) -> Vec<(DistanceMm, DistanceMm)> {
        hop_distances(self)
    }
}

/// `(source->relay, relay->receiver)` distances, in relay order.
pub fn hop_distances(t: &Topology) -> Vec<(DistanceMm, DistanceMm)> {
    t.relays
        .iter()
        .map(|r| {
            // a norm of finite coordinates is finite and non-negative
            (
                DistanceMm::new(t.tx.distance(*r)).expect("finite norm"),
                DistanceMm::new(r.distance(t.rx)).expect("finite norm"),
            )
        })
        .collect()
}

/// Point at which relay angles are measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleVertex {
    #[default]
    Transmitter,
    Receiver,
}

/// Whether a random layout is drawn once per Monte Carlo trial or once per run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Redraw {
    #[default]
    PerTrial,
    PerRun,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING_DEG
}

fn default_x_frac() -> f64 {
    0.5
}

/// How relays are laid out between the transmitter at `(0, 0)` and the
/// receiver at `(d, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlacementSpec {
    /// Relays on the vertical line `x = x_frac * d`, fanned symmetrically
    /// about the Tx-Rx axis so adjacent relays subtend `spacing_deg` at the
    /// vertex. `y = dist(vertex, line) * tan(theta_k)`.
    VerticalAngular {
        d_mm: DistanceMm,
        m: usize,
        #[serde(default = "default_spacing")]
        spacing_deg: f64,
        #[serde(default = "default_x_frac")]
        x_frac: f64,
        #[serde(default)]
        vertex: AngleVertex,
    },
    /// The midway relay column (Tx-anchored fan on `x = d/2`) shifted
    /// sideways to `x = x_offset`; vertical positions are kept.
    VerticalOffset {
        d_mm: DistanceMm,
        m: usize,
        #[serde(default = "default_spacing")]
        spacing_deg: f64,
        x_offset_mm: DistanceMm,
    },
    /// Relays independently uniform over a disk centered on the Tx-Rx
    /// midpoint. `radius_mm` defaults to `d / 2`.
    RandomDisk {
        d_mm: DistanceMm,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius_mm: Option<DistanceMm>,
        #[serde(default)]
        redraw: Redraw,
    },
}

impl PlacementSpec {
    /// Reference layout: relays midway, 30 degrees apart.
    pub fn midway(d: DistanceMm, m: usize) -> Self {
        Self::VerticalAngular {
            d_mm: d,
            m,
            spacing_deg: DEFAULT_SPACING_DEG,
            x_frac: 0.5,
            vertex: AngleVertex::Transmitter,
        }
    }

    pub fn offset(d: DistanceMm, m: usize, x_offset: DistanceMm) -> Self {
        Self::VerticalOffset {
            d_mm: d,
            m,
            spacing_deg: DEFAULT_SPACING_DEG,
            x_offset_mm: x_offset,
        }
    }

    pub fn random_disk(d: DistanceMm, m: usize) -> Self {
        Self::RandomDisk {
            d_mm: d,
            m,
            radius_mm: None,
            redraw: Redraw::PerTrial,
        }
    }

    pub fn distance(&self) -> DistanceMm {
        match *self {
            Self::VerticalAngular { d_mm, .. }
            | Self::VerticalOffset { d_mm, .. }
            | Self::RandomDisk { d_mm, .. } => d_mm,
        }
    }

    pub fn relay_count(&self) -> usize {
        match *self {
            Self::VerticalAngular { m, .. }
            | Self::VerticalOffset { m, .. }
            | Self::RandomDisk { m, .. } => m,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Self::RandomDisk { .. })
    }

    /// Same layout with a different Tx-Rx distance and relay count.
    pub fn with_geometry(mut self, d: DistanceMm, relays: usize) -> Self {
        match &mut self {
            Self::VerticalAngular { d_mm, m, .. }
            | Self::VerticalOffset { d_mm, m, .. }
            | Self::RandomDisk { d_mm, m, .. } => {
                *d_mm = d;
                *m = relays;
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.distance().mm();
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Placement(format!(
                "Tx-Rx distance must be > 0, got {d}"
            )));
        }
        if self.relay_count() == 0 {
            return Err(Error::Placement("at least one relay is required".into()));
        }
        match *self {
            Self::VerticalAngular {
                spacing_deg,
                x_frac,
                ..
            } => {
                if !(x_frac > 0.0 && x_frac < 1.0) {
                    return Err(Error::Placement(format!(
                        "x_frac must lie in (0, 1), got {x_frac}"
                    )));
                }
                fan_angles(self.relay_count(), spacing_deg).map(|_| ())
            }
            Self::VerticalOffset {
                spacing_deg,
                x_offset_mm,
                ..
            } => {
                let x = x_offset_mm.mm();
                if !(0.0..=d).contains(&x) {
                    return Err(Error::Placement(format!(
                        "x_offset must lie in [0, {d}], got {x}"
                    )));
                }
                fan_angles(self.relay_count(), spacing_deg).map(|_| ())
            }
            Self::RandomDisk { .. } => {
                let r = self.disk_radius();
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::Placement(format!(
                        "disk radius must be > 0, got {r}"
                    )));
                }
                Ok(())
            }
        }
    }

    fn disk_radius(&self) -> f64 {
        match *self {
            Self::RandomDisk {
                d_mm, radius_mm, ..
            } => radius_mm.map_or(d_mm.mm() / 2.0, DistanceMm::mm),
            _ => f64::NAN,
        }
    }

    pub(crate) fn disk(&self) -> Option<(Point2D, f64)> {
        self.is_random().then(|| {
            (
                Point2D::new(self.distance().mm() / 2.0, 0.0),
                self.disk_radius(),
            )
        })
    }
}

/// Fan angles in degrees, `theta_k = (k - (m - 1) / 2) * spacing`.
pub fn fan_angles(m: usize, spacing_deg: f64) -> Result<Vec<f64>> {
    if !spacing_deg.is_finite() || spacing_deg < 0.0 {
        return Err(Error::Placement(format!(
            "angular spacing must be finite and >= 0, got {spacing_deg}"
        )));
    }
    let half = (m as f64 - 1.0) / 2.0;
    let angles: Vec<f64> = (0..m).map(|k| (k as f64 - half) * spacing_deg).collect();
    if let Some(bad) = angles.iter().find(|a| a.abs() >= 90.0) {
        return Err(Error::Placement(format!(
            "{m} relays {spacing_deg} degrees apart need a {bad} degree ray, which never meets the relay line"
        )));
    }
    Ok(angles)
}

/// Builds a deterministic layout. Random layouts go through [`place_random`].
pub fn place(spec: &PlacementSpec) -> Result<Topology> {
    spec.validate()?;
    let d = spec.distance().mm();
    let (x, lever, spacing) = match *spec {
        PlacementSpec::VerticalAngular {
            spacing_deg,
            x_frac,
            vertex,
            ..
        } => {
            let x = x_frac * d;
            let lever = match vertex {
                AngleVertex::Transmitter => x,
                AngleVertex::Receiver => d - x,
            };
            (x, lever, spacing_deg)
        }
        PlacementSpec::VerticalOffset {
            spacing_deg,
            x_offset_mm,
            ..
        } => (x_offset_mm.mm(), d / 2.0, spacing_deg),
        PlacementSpec::RandomDisk { .. } => {
            return Err(Error::Placement(
                "random-disk placement needs a random stream; use place_random".into(),
            ))
        }
    };
    let relays = fan_angles(spec.relay_count(), spacing)?
        .into_iter()
        .map(|deg| Point2D::new(x, lever * deg.to_radians().tan()))
        .collect();
    Topology::new(Point2D::new(0.0, 0.0), Point2D::new(d, 0.0), relays)
}

/// Uniform point in a disk: `r = radius * sqrt(u)`, `phi = 2 pi v`.
pub fn random_disk_point<R: Rng + ?Sized>(center: Point2D, radius: f64, rng: &mut R) -> Point2D {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    Point2D::new(center.x + r * phi.cos(), center.y + r * phi.sin())
}

/// Draws a random-disk layout from `rng`.
pub fn place_random<R: Rng + ?Sized>(spec: &PlacementSpec, rng: &mut R) -> Result<Topology> {
    spec.validate()?;
    let (center, radius) = spec
        .disk()
        .ok_or_else(|| Error::Placement("place_random needs a random-disk spec".into()))?;
    let relays = (0..spec.relay_count())
        .map(|_| random_disk_point(center, radius, rng))
        .collect();
    let d = spec.distance().mm();
    Topology::new(Point2D::new(0.0, 0.0), Point2D::new(d, 0.0), relays)
}

//! Parameter sweeps over the outage estimator, experiment presets and
//! CSV/JSON output for external plotting.

pub mod emit;
pub mod presets;
pub mod sweep;

pub use emit::{emit, read_json, to_csv_string, Format, CSV_HEADER};
pub use presets::{figure_preset, figure_preset_named, FigureId, DEFAULT_SEED};
pub use sweep::{
    run_sweep, run_sweep_with_workers, Manifest, PlacementTemplate, SweepParam, SweepPoint,
    SweepResult, SweepRow, SweepSpec, SweptParameter,
};

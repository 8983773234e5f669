use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nanorelay::harness::{self, FigureId, Format, PlacementTemplate, SweepResult, SweepSpec};
use nanorelay::outage::{self, DEFAULT_TRIALS};
use nanorelay::pathloss::{self, FITTED_DISTANCE_MM, FITTED_FREQUENCY_THZ};
use nanorelay::quantities::{
    BandwidthHz, DistanceMm, FrequencyTHz, NoisePsd, PowerDbm, SnrDb, SweatDucts, SystemConfig,
};
use nanorelay::{Error, Result};

#[derive(Parser)]
#[command(
    name = "nanorelay",
    version,
    about = "Outage simulator for cooperative AF relaying between in-body THz nano-devices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the path loss of one hop in dB.
    Pathloss {
        /// Hop distance in mm.
        #[arg(long)]
        d: f64,
        /// Carrier frequency in THz.
        #[arg(long, default_value_t = 1.0)]
        f: f64,
        /// Number of sweat ducts.
        #[arg(long, default_value_t = 5.0)]
        n: f64,
    },
    /// Estimate the outage probability of one scenario; prints JSON.
    Outage {
        #[command(flatten)]
        config: ConfigArgs,
        /// vertical[:spacing_deg], offset:<mm>, random[:radius_frac],
        /// random-per-run[:radius_frac] or an inline JSON template.
        #[arg(long, default_value = "vertical")]
        placement: PlacementTemplate,
        /// Number of relays.
        #[arg(long, short, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = harness::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a parameter sweep and write CSV or JSON.
    Sweep {
        /// Experiment preset (fig3 ... fig8).
        #[arg(long, conflicts_with = "custom", required_unless_present = "custom")]
        preset: Option<FigureId>,
        /// Sweep spec JSON, or a previous JSON result whose manifest is re-run.
        #[arg(long)]
        custom: Option<PathBuf>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// csv or json; defaults to the output file extension, else csv.
        #[arg(long)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON file with SystemConfig fields; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d_mm: Option<f64>,
    #[arg(long)]
    f_thz: Option<f64>,
    #[arg(long)]
    bw_hz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_source_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_relay_dbm: Option<f64>,
    #[arg(long)]
    n_ducts: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_th_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    noise_psd_dbm_hz: Option<f64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SystemConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_str(&read(path)?)?,
            None => SystemConfig::default(),
        };
        if let Some(v) = self.d_mm {
            cfg.d_mm = DistanceMm::new(v)?;
        }
        if let Some(v) = self.f_thz {
            cfg.f_thz = FrequencyTHz::new(v)?;
        }
        if let Some(v) = self.bw_hz {
            cfg.bw_hz = BandwidthHz::new(v)?;
        }
        if let Some(v) = self.p_source_dbm {
            cfg.p_source_dbm = PowerDbm::new(v)?;
        }
        if let Some(v) = self.p_relay_dbm {
            cfg.p_relay_dbm = PowerDbm::new(v)?;
        }
        if let Some(v) = self.n_ducts {
            cfg.n_ducts = SweatDucts::new(v)?;
        }
        if let Some(v) = self.gamma_th_db {
            cfg.gamma_th_db = SnrDb::new(v)?;
        }
        if let Some(v) = self.noise_psd_dbm_hz {
            cfg.noise_psd_dbm_hz = NoisePsd::new(v)?;
        }
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Prints to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print(text: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn warn_outside_fit(d: DistanceMm, f: FrequencyTHz) {
    if !pathloss::in_fitted_range(d, f) {
        eprintln!(
            "warning: d = {} mm, f = {} THz lies outside the fitted range d in [{}, {}] mm, f in [{}, {}] THz",
            d.mm(),
            f.thz(),
            FITTED_DISTANCE_MM.0,
            FITTED_DISTANCE_MM.1,
            FITTED_FREQUENCY_THZ.0,
            FITTED_FREQUENCY_THZ.1
        );
    }
}

fn load_custom(path: &Path) -> Result<SweepSpec> {
    let text = read(path)?;
    match serde_json::from_str::<SweepSpec>(&text) {
        Ok(spec) => Ok(spec),
        Err(spec_err) => serde_json::from_str::<SweepResult>(&text)
            .map(|r| r.manifest.spec)
            .map_err(|_| spec_err.into()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pathloss { d, f, n } => {
            let (d, f) = (DistanceMm::new(d)?, FrequencyTHz::new(f)?);
            warn_outside_fit(d, f);
            print(
                &pathloss::pathloss_db(d, f, SweatDucts::new(n)?)?
                    .db()
                    .to_string(),
            )?;
        }
        Command::Outage {
            config,
            placement,
            m,
            trials,
            seed,
        } => {
            let cfg = config.resolve()?;
            warn_outside_fit(cfg.d_mm, cfg.f_thz);
            let spec = placement.instantiate(cfg.d_mm, m)?;
            let est = outage::estimate_outage(&cfg, &spec, trials, seed)?;
            print(&serde_json::to_string_pretty(&est)?)?;
        }
        Command::Sweep {
            preset,
            custom,
            trials,
            seed,
            out,
            format,
        } => {
            let mut spec = match (preset, custom) {
                (Some(id), _) => harness::figure_preset(id),
                (None, Some(path)) => load_custom(&path)?,
                (None, None) => unreachable!("clap requires --preset or --custom"),
            };
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.master_seed = s;
            }
            let format = format.unwrap_or_else(|| match out.extension().and_then(|e| e.to_str()) {
                Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
                _ => Format::Csv,
            });
            let result = match harness::run_sweep(&spec) {
                Ok(r) => r,
                Err(Error::SweepAborted { partial, source }) => {
                    harness::emit(&partial, format, &out)?;
                    eprintln!(
                        "partial results ({} rows) written to {}",
                        partial.rows.len(),
                        out.display()
                    );
                    return Err(*source);
                }
                Err(e) => return Err(e),
            };
            harness::emit(&result, format, &out)?;
            eprintln!("{} rows written to {}", result.rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

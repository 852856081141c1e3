//! Argument definitions and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lna_core::design::parse_frequency;
use lna_core::matching::StubKind;

use crate::commands::{self, CirclesArgs, CliError, DesignArgs, MatchArgs, Rendered};
use crate::svg::render_smith_svg;

#[derive(Debug, Parser)]
#[command(
    name = "lna",
    version,
    about = "Low-noise amplifier analysis and design"
)]
pub struct Cli {
    /// System reference impedance in ohms.
    #[arg(long, global = true)]
    pub z0: Option<f64>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write a Smith chart of the result.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Stub {
    Open,
    Short,
}

impl From<Stub> for StubKind {
    fn from(s: Stub) -> Self {
        match s {
            Stub::Open => StubKind::Open,
            Stub::Short => StubKind::Short,
        }
    }
}

fn frequency(s: &str) -> Result<f64, String> {
    parse_frequency(s)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability, gain bounds and circles at one frequency.
    Analyze {
        /// Touchstone .s2p file, or `-` for standard input.
        file: PathBuf,
        /// Analysis frequency, e.g. `3GHz`; optional for single-point files.
        #[arg(long, value_parser = frequency)]
        freq: Option<f64>,
    },
    /// Full amplifier design from a key=value specification.
    Design {
        file: PathBuf,
        /// Specification file (freq, objective, nf_max_db, gain_min_db, z0).
        #[arg(long)]
        config: PathBuf,
        /// Noise parameters: `fmin_db=..,rn=..|Rn=..ohm,gopt=MAG<ANG`.
        #[arg(long)]
        noise: Option<String>,
        /// Write the matching-network element lists as JSON.
        #[arg(long, value_name = "PATH")]
        networks: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "open")]
        stub: Stub,
        /// Substrate relative permittivity.
        #[arg(long)]
        eps_r: Option<f64>,
        /// Substrate height in millimetres.
        #[arg(long)]
        h_mm: Option<f64>,
        /// Bias line impedance in ohms.
        #[arg(long, default_value_t = 100.0)]
        bias_z0: f64,
    },
    /// Stability, noise and available-gain circles.
    Circles {
        file: PathBuf,
        #[arg(long, value_parser = frequency)]
        freq: Option<f64>,
        #[arg(long)]
        noise: Option<String>,
        /// Noise-figure level in dB; repeatable.
        #[arg(long, value_name = "DB")]
        nf_db: Vec<f64>,
        /// Available-gain level in dB; repeatable.
        #[arg(long, value_name = "DB", allow_negative_numbers = true)]
        ga_db: Vec<f64>,
        /// Emit CSV instead of text.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Cascaded noise figure of a receiver chain.
    Cascade {
        /// `nf_db=X,gain_db=Y`; repeat in signal order.
        #[arg(long = "stage", value_name = "SPEC")]
        stages: Vec<String>,
    },
    /// Single-stub or quarter-wave matching network.
    Match {
        /// Reflection coefficient to present, `MAG<ANGLE`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Real-to-real transformer, `R_IN,R_OUT` in ohms.
        #[arg(long, value_name = "R_IN,R_OUT")]
        quarter_wave: Option<String>,
        #[arg(long, value_enum, default_value = "open")]
        stub: Stub,
        /// Frequency for physical lengths.
        #[arg(long, value_parser = frequency)]
        freq: Option<f64>,
        #[arg(long)]
        eps_r: Option<f64>,
        #[arg(long)]
        h_mm: Option<f64>,
    },
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Runs one parsed invocation, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    if let Some(z0) = cli.z0 {
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(CliError::parse(format!("--z0 must be positive, got {z0}")));
        }
    }
    let mut csv = None;
    let rendered: Rendered = match &cli.command {
        Command::Analyze { file, freq } => commands::analyze(file, *freq, cli.z0)?,
        Command::Design {
            file,
            config,
            noise,
            networks,
            stub,
            eps_r,
            h_mm,
            bias_z0,
        } => {
            let (r, net_file) = commands::design(&DesignArgs {
                file,
                config,
                noise: noise.as_deref(),
                networks: networks.as_deref(),
                stub: (*stub).into(),
                eps_r: *eps_r,
                h_mm: *h_mm,
                bias_z0: *bias_z0,
                z0: cli.z0,
            })?;
            if let Some((path, text)) = net_file {
                write_file(&path, &text)?;
            }
            r
        }
        Command::Circles {
            file,
            freq,
            noise,
            nf_db,
            ga_db,
            csv: want_csv,
        } => {
            let (r, text) = commands::circles(&CirclesArgs {
                file,
                freq: *freq,
                noise: noise.as_deref(),
                nf_db,
                ga_db,
                z0: cli.z0,
            })?;
            if *want_csv {
                csv = Some(text);
            }
            r
        }
        Command::Cascade { stages } => commands::cascade(stages)?,
        Command::Match {
            gamma,
            quarter_wave,
            stub,
            freq,
            eps_r,
            h_mm,
        } => commands::matching(&MatchArgs {
            gamma: gamma.as_deref(),
            quarter_wave: quarter_wave.as_deref(),
            stub: (*stub).into(),
            freq: *freq,
            eps_r: *eps_r,
            h_mm: *h_mm,
            z0: cli.z0,
        })?,
    };

    if let Some(path) = &cli.svg {
        let plot = rendered
            .plot
            .as_ref()
            .ok_or_else(|| CliError::parse("this command has no chart; drop --svg"))?;
        render_smith_svg(plot, path).map_err(|e| CliError::io(e.to_string()))?;
    }
    let body = match csv {
        Some(csv) => csv,
        None if cli.json => {
            serde_json::to_string_pretty(&rendered.json).expect("json values serialize") + "\n"
        }
        None => rendered.text,
    };
    out.write_all(body.as_bytes())
        .map_err(|e| CliError::io(format!("cannot write output: {e}")))
}

//! Command-line interface.
//!
//! Four subcommands: `bounds` evaluates one instance, `figure` reproduces a
//! builtin panel as CSV, `verify` runs a randomized verification campaign,
//! and `sweep` evaluates a custom parameter sweep.
//!
//! Exit codes: 0 success, 1 verification found violations, 2 configuration
//! or parse problem, 3 dimension mismatch, 4 I/O failure.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{evaluate_all, BoundId};
use crate::experiments::{
    csv_string, emit_csv, run_panel, run_sweep, verify_random, with_thread_limit, ChannelSpec,
    Panel, SweepParam, SweepSpec, DEFAULT_RESOLUTION,
};
use crate::matcore::parse_matrix;
use crate::quantum::{
    channel_from_name, parse_channel, random_channel, random_state, ring_state, state_from_bloch,
    BlochVector, DensityState, KrausChannel,
};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "wyur",
    version,
    about = "Skew-information uncertainty bounds for quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamKind {
    Theta,
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the uncertainties and lower bounds for one instance.
    Bounds {
        /// State spec: bloch:RX,RY,RZ | ring:THETA | file:PATH | random:DIM
        #[arg(long)]
        state: String,
        /// Channel spec: builtin name | file:PATH | random:DIM,N
        #[arg(long = "chan-a")]
        chan_a: String,
        #[arg(long = "chan-b")]
        chan_b: String,
        /// Comma-separated bound ids, or the word all (the default).
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Base seed for random: specs (state uses seed, channels seed+1/+2).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reproduce one of the builtin sweep panels as a CSV file.
    Figure {
        /// Panel letter: a, b, c, or d.
        panel: String,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Output path; defaults to panel_<letter>.csv in the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every invariant on seeded random instances.
    Verify {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long = "n", default_value_t = 2)]
        n_kraus: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Evaluate a custom sweep over theta or q.
    Sweep {
        #[arg(long, value_enum)]
        param: ParamKind,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        points: usize,
        /// Fixed ring-state angle, used when sweeping q.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta: f64,
        /// Channel spec; q sweeps also accept phase_damping(q) and bit_flip(q).
        #[arg(long = "chan-a")]
        chan_a: String,
        #[arg(long = "chan-b")]
        chan_b: String,
        /// Comma-separated bound ids of one kind; defaults to thm1_proof,thm2,zhou.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<String>>,
        /// Output path; omit to print the CSV to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses arguments from the process environment, runs the requested
/// command, and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 4,
        Error::DimensionMismatch(_) => 3,
        _ => 2,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bounds {
            state,
            chan_a,
            chan_b,
            bounds,
            format,
            output,
            seed,
        } => cmd_bounds(&state, &chan_a, &chan_b, bounds, format, output, seed),
        Command::Figure {
            panel,
            resolution,
            out,
        } => cmd_figure(&panel, resolution, out),
        Command::Verify {
            dim,
            n_kraus,
            trials,
            seed,
        } => cmd_verify(dim, n_kraus, trials, seed),
        Command::Sweep {
            param,
            from,
            to,
            points,
            theta,
            chan_a,
            chan_b,
            bounds,
            out,
            seed,
        } => cmd_sweep(
            param, from, to, points, theta, &chan_a, &chan_b, bounds, out, seed,
        ),
    }
}

/// Parses a float and rejects NaN and infinities, which every numeric CLI
/// argument here treats as configuration errors.
fn parse_finite(text: &str, what: &str) -> Result<f64> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{text}`")))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Parse(format!("{what} must be finite, got `{text}`")))
    }
}

fn require_finite(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            detail: format!("must be finite, got {value}"),
        })
    }
}

fn parse_state_spec(spec: &str, seed: u64) -> Result<DensityState> {
    if let Some(rest) = spec.strip_prefix("bloch:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "bloch: spec needs three components, got `{rest}`"
            )));
        }
        let mut comps = [0.0; 3];
        for (slot, part) in comps.iter_mut().zip(&parts) {
            *slot = parse_finite(part, "bloch component")?;
        }
        return state_from_bloch(BlochVector {
            rx: comps[0],
            ry: comps[1],
            rz: comps[2],
        });
    }
    if let Some(rest) = spec.strip_prefix("ring:") {
        return Ok(ring_state(parse_finite(rest, "ring angle")?));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let rho = parse_matrix(&text)?;
        return DensityState::new(rho);
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let dim: usize = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad random state dimension `{rest}`")))?;
        return random_state(dim, seed);
    }
    Err(Error::Parse(format!(
        "unknown state spec `{spec}`; expected bloch:, ring:, file:, or random:"
    )))
}

fn parse_channel_spec(spec: &str, seed: u64) -> Result<KrausChannel> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        return parse_channel(&text, spec);
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let (dim_str, n_str) = rest.split_once(',').ok_or_else(|| {
            Error::Parse(format!("random: channel spec needs DIM,N, got `{rest}`"))
        })?;
        let dim: usize = dim_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad channel dimension `{dim_str}`")))?;
        let n: usize = n_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad Kraus count `{n_str}`")))?;
        return random_channel(dim, n, seed);
    }
    channel_from_name(spec)
}

/// Channel spec for a sweep: the literal argument q inside a builtin name
/// marks the channel as rebuilt from the swept value at every grid point.
fn parse_sweep_channel(spec: &str, seed: u64) -> Result<ChannelSpec> {
    match spec {
        "phase_damping(q)" => Ok(ChannelSpec::PhaseDampingOfQ),
        "bit_flip(q)" => Ok(ChannelSpec::BitFlipOfQ),
        other => Ok(ChannelSpec::Fixed(parse_channel_spec(other, seed)?)),
    }
}

fn parse_bound_list(bounds: Option<Vec<String>>, default: &[BoundId]) -> Result<Vec<BoundId>> {
    match bounds {
        None => Ok(default.to_vec()),
        Some(items) if items.len() == 1 && items[0].trim() == "all" => Ok(BoundId::ALL.to_vec()),
        Some(items) => items.iter().map(|s| BoundId::parse(s.trim())).collect(),
    }
}

fn write_or_print(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_bounds(
    state: &str,
    chan_a: &str,
    chan_b: &str,
    bounds: Option<Vec<String>>,
    format: OutputFormat,
    output: Option<PathBuf>,
    seed: u64,
) -> Result<i32> {
    let selected = parse_bound_list(bounds, &BoundId::ALL)?;
    let state = parse_state_spec(state, seed)?;
    let chan_a = parse_channel_spec(chan_a, seed.wrapping_add(1))?;
    let chan_b = parse_channel_spec(chan_b, seed.wrapping_add(2))?;
    let mut report = evaluate_all(&state, &chan_a, &chan_b)?;
    report.bounds.retain(|(id, _)| selected.contains(id));

    let text = match format {
        OutputFormat::Text => report.to_string(),
        OutputFormat::Csv => {
            let mut out = String::from("quantity,value\n");
            out.push_str(&format!(
                "product_uncertainty,{}\n",
                crate::fmt12(report.product_uncertainty)
            ));
            out.push_str(&format!(
                "sum_uncertainty,{}\n",
                crate::fmt12(report.sum_uncertainty)
            ));
            for (id, v) in &report.bounds {
                out.push_str(&format!("{},{}\n", id.as_str(), crate::fmt12(*v)));
            }
            out
        }
    };
    write_or_print(&text, output.as_ref())?;
    Ok(0)
}

fn cmd_figure(panel: &str, resolution: usize, out: Option<PathBuf>) -> Result<i32> {
    let panel = Panel::parse(panel)?;
    let rows = with_thread_limit(|| run_panel(panel, resolution))?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("panel_{}.csv", panel.letter())));
    emit_csv(&rows, &path)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(0)
}

fn cmd_verify(dim: usize, n_kraus: usize, trials: usize, seed: u64) -> Result<i32> {
    let summary = with_thread_limit(|| verify_random(dim, n_kraus, trials, seed))?;
    print!("{summary}");
    if summary.is_clean() {
        Ok(0)
    } else {
        eprintln!(
            "verification found {} violations",
            summary.total_violations()
        );
        Ok(1)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    param: ParamKind,
    from: f64,
    to: f64,
    points: usize,
    theta: f64,
    chan_a: &str,
    chan_b: &str,
    bounds: Option<Vec<String>>,
    out: Option<PathBuf>,
    seed: u64,
) -> Result<i32> {
    if points < 2 {
        return Err(Error::ParamOutOfRange {
            name: "points",
            detail: format!("need at least 2 grid points, got {points}"),
        });
    }
    require_finite(from, "from")?;
    require_finite(to, "to")?;
    require_finite(theta, "theta")?;
    if from >= to {
        return Err(Error::ParamOutOfRange {
            name: "from",
            detail: format!("need from < to, got {from} and {to}"),
        });
    }
    let step = (to - from) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| from + step * i as f64).collect();
    let spec = SweepSpec {
        label: "custom sweep".into(),
        param: match param {
            ParamKind::Theta => SweepParam::Theta,
            ParamKind::Q => SweepParam::Q { theta },
        },
        grid,
        channel_a: parse_sweep_channel(chan_a, seed.wrapping_add(1))?,
        channel_b: parse_sweep_channel(chan_b, seed.wrapping_add(2))?,
        bounds: parse_bound_list(bounds, &[BoundId::Thm1Proof, BoundId::Thm2, BoundId::Zhou])?,
        output_path: out.clone(),
    };
    let rows = with_thread_limit(|| run_sweep(&spec))?;
    match out {
        Some(path) => {
            emit_csv(&rows, &path)?;
            println!("wrote {} ({} rows)", path.display(), rows.len());
        }
        None => print!("{}", csv_string(&rows)?),
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs_parse() {
        let s = parse_state_spec("bloch:0,0,1", 0).unwrap();
        assert!((s.rho().get(0, 0).re - 1.0).abs() < 1e-12);
        let r = parse_state_spec("ring:0.785398", 0).unwrap();
        assert_eq!(r.dim(), 2);
        let rnd = parse_state_spec("random:3", 42).unwrap();
        assert_eq!(rnd.dim(), 3);
        assert!(parse_state_spec("bloch:1,2", 0).is_err());
        assert!(parse_state_spec("bloch:a,b,c", 0).is_err());
        assert!(parse_state_spec("nope:1", 0).is_err());
        assert!(parse_state_spec("file:/does/not/exist", 0).is_err());
    }

    #[test]
    fn channel_specs_parse() {
        assert_eq!(
            parse_channel_spec("phase_damping(0.3)", 0).unwrap().len(),
            2
        );
        assert_eq!(parse_channel_spec("rot_y_pi8", 0).unwrap().len(), 1);
        let rnd = parse_channel_spec("random:2,3", 9).unwrap();
        assert_eq!((rnd.dim(), rnd.len()), (2, 3));
        assert!(parse_channel_spec("random:2", 0).is_err());
        assert!(parse_channel_spec("mystery", 0).is_err());
    }

    #[test]
    fn sweep_channel_specs_recognize_the_q_placeholder() {
        assert!(matches!(
            parse_sweep_channel("phase_damping(q)", 0).unwrap(),
            ChannelSpec::PhaseDampingOfQ
        ));
        assert!(matches!(
            parse_sweep_channel("bit_flip(q)", 0).unwrap(),
            ChannelSpec::BitFlipOfQ
        ));
        assert!(matches!(
            parse_sweep_channel("bit_flip(0.5)", 0).unwrap(),
            ChannelSpec::Fixed(_)
        ));
    }

    #[test]
    fn bound_lists_parse_with_default() {
        let all = parse_bound_list(None, &BoundId::ALL).unwrap();
        assert_eq!(all.len(), 8);
        let explicit_all = parse_bound_list(Some(vec!["all".into()]), &[BoundId::Zhou]).unwrap();
        assert_eq!(explicit_all.len(), 8);
        let picked =
            parse_bound_list(Some(vec!["zhou".into(), "thm2".into()]), &BoundId::ALL).unwrap();
        assert_eq!(picked, vec![BoundId::Zhou, BoundId::Thm2]);
        assert!(parse_bound_list(Some(vec!["thm9".into()]), &BoundId::ALL).is_err());
    }

    #[test]
    fn error_exit_codes_follow_the_contract() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code_for(&Error::DimensionMismatch("x".into())), 3);
        assert_eq!(exit_code_for(&Error::Io(std::io::Error::other("x"))), 4);
        assert_eq!(exit_code_for(&Error::TooLarge), 2);
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dofsim::fringe::DEFAULT_POINTS;
use dofsim::io::{fringe_csv, parse_network_document, parse_profile, parse_profile_spec, write_state};
use dofsim::optics::build_noon_projection_network;
use dofsim::report::factorization_report;
use dofsim::schema::SPATIAL;
use dofsim::states::{
    bell_singlet, build_pdc_four_photon, build_pdc_two_photon, ghz, hhvv_symmetric, noon,
};
use dofsim::{
    build_ghz_projection_network, compute_k, fringe_sweep, make_profile, visibility_prediction,
    DetectorLayout, DofPartition, LinearNetwork, Limits, SpectralProfile, StateVector,
};

#[derive(Parser)]
#[command(name = "dofsim", version, about = "Multiphoton interference with several degrees of freedom")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a state in the plain-text state format (or JSON).
    State(Common),
    /// Sweep the collective polarization phase and record coincidence rates.
    Fringe(Common),
    /// Simulated and predicted fringe visibility.
    Visibility(Common),
    /// Symmetry and factorization report for a DOF partition.
    Analyze(Common),
    /// The spectral entanglement parameter K of a profile.
    K(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateKind {
    Noon,
    Ghz,
    Pdc2,
    Pdc4,
    /// Polarization-frequency singlet pair.
    Singlet,
    /// Single-frequency two-H two-V state.
    Hhvv,
    File,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "pdc4")]
    state: StateKind,
    /// State file for `--state file`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Photon number for NOON and GHZ states.
    #[arg(long)]
    n: Option<u32>,
    /// point | uniform:d | gaussian:d:w | path to a profile file.
    #[arg(long, default_value = "point")]
    profile: String,
    /// Rescale a profile file that is not normalized.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// DOF kept on the left of the partition; the rest go right.
    #[arg(long, default_value = "pol")]
    partition: String,
    /// JSON network document replacing the default projection network.
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum Failure {
    /// Bad flags or unreadable input: exit code 2.
    Usage(String),
    /// The computation itself failed: exit code 1.
    Compute(String),
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_profile(c: &Common) -> Outcome<SpectralProfile> {
    match parse_profile_spec(&c.profile).map_err(usage)? {
        Some(kind) => make_profile(&kind).map_err(usage),
        None => {
            let path = Path::new(&c.profile);
            parse_profile(&read(path)?, c.normalize).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
    }
}

fn require_n(c: &Common, what: &str) -> Outcome<u32> {
    c.n.ok_or_else(|| usage(format!("--state {what} needs --n")))
}

fn load_state(c: &Common) -> Outcome<StateVector> {
    match c.state {
        StateKind::Noon => noon(require_n(c, "noon")?).map_err(usage),
        StateKind::Ghz => ghz(require_n(c, "ghz")?).map_err(usage),
        StateKind::Pdc2 => Ok(build_pdc_two_photon(&load_profile(c)?).map_err(compute)?.state),
        StateKind::Pdc4 => Ok(build_pdc_four_photon(&load_profile(c)?).map_err(compute)?.state),
        StateKind::Singlet => bell_singlet().map_err(compute),
        StateKind::Hhvv => hhvv_symmetric().map_err(compute),
        StateKind::File => {
            let path = c.input.as_deref().ok_or_else(|| usage("--state file needs --input"))?;
            dofsim::io::parse_state(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
    }
}

/// The network for a sweep: the `--network` document, or the projection
/// matching how the photons occupy the spatial modes.
fn load_network(c: &Common, s: &StateVector) -> Outcome<(LinearNetwork, DetectorLayout)> {
    if let Some(path) = &c.network {
        let doc = parse_network_document(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let layout = doc.layout();
        return Ok((doc.network, layout));
    }
    let n = s.photon_number() as usize;
    let sp = s.schema().require_dof(SPATIAL).map_err(usage)?;
    let arms = s.schema().dofs()[sp].labels.len();
    if arms == 1 {
        build_noon_projection_network(n).map_err(usage)
    } else if arms == n {
        build_ghz_projection_network(n).map_err(usage)
    } else {
        Err(usage(format!(
            "no default network for {n} photons over {arms} spatial modes; pass --network"
        )))
    }
}

fn check_points(c: &Common, photons: u32) -> Outcome<()> {
    let need = 4 * photons as usize;
    if c.points < need {
        return Err(usage(format!(
            "--points {} is too coarse for a {photons}-photon fringe; need at least {need}",
            c.points
        )));
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output documents always serialize") + "\n"
}

fn reject_csv(c: &Common, command: &str) -> Outcome<()> {
    if c.format == Some(Format::Csv) {
        return Err(usage(format!("{command} has no CSV form")));
    }
    Ok(())
}

#[derive(Serialize)]
struct KetDoc {
    modes: Vec<(String, u32)>,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct StateDoc {
    photons: u32,
    dofs: Vec<(String, Vec<String>)>,
    kets: Vec<KetDoc>,
}

fn state_json(s: &StateVector) -> String {
    let schema = s.schema();
    json(&StateDoc {
        photons: s.photon_number(),
        dofs: schema.dofs().iter().map(|d| (d.name.clone(), d.labels.clone())).collect(),
        kets: s
            .terms()
            .iter()
            .map(|(k, a)| KetDoc {
                modes: k.occupation().iter().map(|(m, n)| (schema.display_mode(m), *n)).collect(),
                re: a.re,
                im: a.im,
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct VisibilityDoc {
    #[serde(rename = "K")]
    k: Option<f64>,
    #[serde(rename = "V_simulated")]
    v_simulated: f64,
    #[serde(rename = "V_predicted")]
    v_predicted: Option<f64>,
}

#[derive(Serialize)]
struct ProfileEntry {
    label: String,
    amplitude: f64,
}

#[derive(Serialize)]
struct KDoc {
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "V_predicted")]
    v_predicted: f64,
    profile: Vec<ProfileEntry>,
}

fn run(cmd: Command) -> Outcome<String> {
    let limits = Limits::default();
    match cmd {
        Command::State(c) => {
            reject_csv(&c, "state")?;
            let s = load_state(&c)?;
            Ok(match c.format {
                Some(Format::Json) => state_json(&s),
                _ => write_state(&s),
            })
        }
        Command::Fringe(c) => {
            let s = load_state(&c)?;
            check_points(&c, s.photon_number())?;
            let (net, layout) = load_network(&c, &s)?;
            let f = fringe_sweep(&s, &net, &layout, c.points, &limits).map_err(compute)?;
            Ok(match c.format {
                Some(Format::Json) => json(&f),
                _ => fringe_csv(&f),
            })
        }
        Command::Visibility(c) => {
            reject_csv(&c, "visibility")?;
            let s = load_state(&c)?;
            check_points(&c, s.photon_number())?;
            let (net, layout) = load_network(&c, &s)?;
            let f = fringe_sweep(&s, &net, &layout, c.points, &limits).map_err(compute)?;
            // The closed-form prediction covers the four-photon
            // down-conversion state only.
            let k = match c.state {
                StateKind::Pdc4 => Some(compute_k(&load_profile(&c)?)),
                _ => None,
            };
            Ok(json(&VisibilityDoc {
                k: k.map(|k| k.value()),
                v_simulated: f.visibility,
                v_predicted: k.map(visibility_prediction),
            }))
        }
        Command::Analyze(c) => {
            reject_csv(&c, "analyze")?;
            let s = load_state(&c)?;
            let p = DofPartition::split_off(s.schema(), &[c.partition.as_str()]).map_err(usage)?;
            Ok(json(&factorization_report(&s, &p, &limits).map_err(compute)?))
        }
        Command::K(c) => {
            reject_csv(&c, "k")?;
            let p = load_profile(&c)?;
            let k = compute_k(&p);
            Ok(json(&KDoc {
                k: k.value(),
                v_predicted: visibility_prediction(k),
                profile: p
                    .labels()
                    .iter()
                    .zip(p.amplitudes())
                    .map(|(l, a)| ProfileEntry {
                        label: l.clone(),
                        amplitude: *a,
                    })
                    .collect(),
            }))
        }
    }
}

fn out_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::State(c) | Command::Fringe(c) | Command::Visibility(c) | Command::Analyze(c) | Command::K(c) => {
            c.out.as_deref()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = out_path(&cli.command).map(Path::to_path_buf);
    let result = run(cli.command).and_then(|text| match &out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end.
//!
//! Subcommands compute their whole output in memory and write it once at the end.
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
//! `BLOCHFLOW_THREADS` caps the worker threads (0 or unset means automatic).

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bloch::BlochVector;
use crate::channel::{self, ChannelFamily, ChannelTable};
use crate::divisibility::{self, ClassifyOptions};
use crate::error::Error;
use crate::format::fmt_f64;
use crate::verify::{self, Suite};
use crate::witness::{self, distance_trajectory};

pub const THREADS_ENV: &str = "BLOCHFLOW_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "blochflow",
    version,
    about = "Affine qubit channels and distance-based non-Markovianity witnesses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the generalized-distance trajectory of one state pair as `t,D` CSV.
    Traj(TrajArgs),
    /// Write the curves of reference figure 1, 2 or 3 as CSV files.
    Figure(FigureArgs),
    /// Classify a family as CP-, P- or non-P-divisible and write the JSON report.
    Classify(ClassifyArgs),
    /// Run a verification suite and write a JSON summary.
    Verify(VerifyArgs),
    /// Write the false-positive / false-negative demonstrations as JSON.
    Demos(DemosArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Gad,
    Isotropic,
    Spin,
    Collapse,
    Custom,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Shift of the collapse family, in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Rate of the collapse family.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// CSV table for `--family custom`.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

impl FamilyArgs {
    pub fn build(&self) -> Result<ChannelFamily, CliError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| {
                CliError::Usage(format!("--family {:?} needs --{name}", self.family).to_lowercase())
            })
        };
        Ok(match self.family {
            FamilyKind::Gad => channel::family_gad(need(self.gamma, "gamma")?, need(self.f, "f")?)?,
            FamilyKind::Isotropic => channel::family_isotropic_decay(need(self.gamma, "gamma")?)?,
            FamilyKind::Spin => {
                let omega = need(self.omega, "omega")?;
                if !omega.is_finite() {
                    return Err(CliError::Usage(format!(
                        "--omega must be finite, got {omega}"
                    )));
                }
                channel::family_spin_cosine(omega)
            }
            FamilyKind::Collapse => {
                channel::family_collapse_shift_with_rate(need(self.c, "c")?, self.k)?
            }
            FamilyKind::Custom => {
                let path = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--family custom needs --table".into()))?;
                let table = ChannelTable::from_path(path).map_err(|e| match e {
                    Error::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
                    other => CliError::Usage(format!("{}: {other}", path.display())),
                })?;
                table.into_family("custom")
            }
        })
    }
}

fn parse_vector(s: &str) -> Result<BlochVector, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    BlochVector::state(parts[0], parts[1], parts[2]).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct TrajArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub r1: BlochVector,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub r2: BlochVector,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long = "tmax", default_value_t = 10.0)]
    pub t_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number: 1, 2 or 3.
    pub n: u8,
    #[arg(long = "out-dir", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "tmax", default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = divisibility::DEFAULT_INTERVALS)]
    pub intervals: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// oracle, theorem1, theorem2, contraction or all.
    pub suite: Suite,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DemosArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One file (or stdout) produced by a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub contents: String,
}

fn linspace(t_max: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need --n >= 2 and finite --tmax > 0, got n = {n}, tmax = {t_max}"
        )));
    }
    Ok((0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect())
}

/// `t,D` CSV with the documented header and 12-significant-digit values.
pub fn series_csv(series: &crate::bloch::DistanceSeries) -> String {
    let mut s = String::from("t,D\n");
    for (t, d) in series.iter() {
        let _ = writeln!(s, "{},{}", fmt_f64(t), fmt_f64(d));
    }
    s
}

pub fn cmd_traj(args: &TrajArgs) -> Result<Output, CliError> {
    let fam = args.family.build()?;
    let grid = linspace(args.t_max, args.n)?;
    let series = distance_trajectory(&fam, args.r1, args.r2, args.p, &grid)?;
    Ok(Output {
        path: args.out.clone(),
        contents: series_csv(&series),
    })
}

/// Curves of one reference figure as `(file name, series)`.
pub fn figure_series(n: u8) -> Result<Vec<(String, crate::bloch::DistanceSeries)>, CliError> {
    let v = BlochVector::new;
    let p = 0.25;
    let mut out = Vec::new();
    match n {
        1 => {
            let fam = channel::family_gad(0.1, 4.0)?;
            let grid = linspace(5.0, 500)?;
            for (name, r1, r2) in [
                ("fig1_text_pair.csv", v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)),
                ("fig1_caption_pair.csv", v(0.0, 0.0, 1.0), v(1.0, 0.0, 0.0)),
            ] {
                out.push((
                    name.to_string(),
                    distance_trajectory(&fam, r1, r2, p, &grid)?,
                ));
            }
        }
        2 => {
            let fam = channel::family_isotropic_decay(0.1)?;
            let grid = linspace(30.0, 601)?;
            for r in witness::SWEEP_RADII {
                let a = v(0.0, 0.0, r);
                out.push((
                    format!("fig2_r{r}.csv"),
                    distance_trajectory(&fam, a, a.scaled(-1.0), p, &grid)?,
                ));
            }
        }
        3 => {
            let fam = channel::family_spin_cosine(1.25);
            let grid = linspace(10.0, 500)?;
            for (name, r1, r2) in [
                ("fig3_equatorial.csv", v(1.0, 0.0, 0.0), v(-1.0, 0.0, 0.0)),
                ("fig3_z_axis.csv", v(0.0, 0.0, 1.0), v(0.0, 0.0, -1.0)),
            ] {
                out.push((
                    name.to_string(),
                    distance_trajectory(&fam, r1, r2, p, &grid)?,
                ));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "figure must be 1, 2 or 3, got {other}"
            )));
        }
    }
    Ok(out)
}

pub fn cmd_figure(args: &FigureArgs) -> Result<Vec<Output>, CliError> {
    Ok(figure_series(args.n)?
        .into_iter()
        .map(|(name, s)| Output {
            path: Some(args.out_dir.join(name)),
            contents: series_csv(&s),
        })
        .collect())
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<Output, CliError> {
    let fam = args.family.build()?;
    if args.intervals < 2 || !(args.t_max > 0.0 && args.t_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need --intervals >= 2 and finite --tmax > 0, got {} and {}",
            args.intervals, args.t_max
        )));
    }
    let grid = divisibility::uniform_grid(args.t_max, args.intervals);
    let report = divisibility::classify_family(&fam, &grid, &ClassifyOptions::default())?;
    Ok(Output {
        path: args.out.clone(),
        contents: report.to_json() + "\n",
    })
}

/// Summary output plus whether every property passed.
pub fn cmd_verify(args: &VerifyArgs) -> Result<(Output, bool), CliError> {
    let summary = verify::run(args.suite, args.seed)?;
    Ok((
        Output {
            path: args.out.clone(),
            contents: summary.to_json() + "\n",
        },
        summary.passed,
    ))
}

pub fn cmd_demos(args: &DemosArgs) -> Result<Output, CliError> {
    let report = witness::false_flag_demos()?;
    Ok(Output {
        path: args.out.clone(),
        contents: serde_json::to_string_pretty(&report).expect("demos serialize") + "\n",
    })
}

fn write_output(o: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &o.path {
        Some(path) => write_file(path, &o.contents),
        None => stdout
            .write_all(o.contents.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be an integer, got `{v}`"))),
        _ => Ok(0),
    }
}

/// Everything a command produces, computed before anything is written.
struct Plan {
    outputs: Vec<Output>,
    /// Paths echoed to stdout after the files are written.
    announce: bool,
    failure: Option<CliError>,
}

fn compute(cli: Cli) -> Result<Plan, CliError> {
    let single = |o| Plan {
        outputs: vec![o],
        announce: false,
        failure: None,
    };
    Ok(match cli.command {
        Command::Traj(a) => single(cmd_traj(&a)?),
        Command::Figure(a) => Plan {
            outputs: cmd_figure(&a)?,
            announce: true,
            failure: None,
        },
        Command::Classify(a) => single(cmd_classify(&a)?),
        Command::Verify(a) => {
            let (o, passed) = cmd_verify(&a)?;
            let mut plan = single(o);
            if !passed {
                plan.failure = Some(CliError::Verification(format!("suite {:?}", a.suite)));
            }
            plan
        }
        Command::Demos(a) => single(cmd_demos(&a)?),
    })
}

fn emit(plan: Plan, stdout: &mut dyn Write) -> Result<(), CliError> {
    for o in &plan.outputs {
        write_output(o, stdout)?;
        if let (true, Some(p)) = (plan.announce, &o.path) {
            let _ = writeln!(stdout, "{}", p.display());
        }
    }
    match plan.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = (|| {
        let args = config::merge(args)?;
        let cli = match Cli::try_parse_from(args) {
            Ok(cli) => cli,
            Err(e) if !e.use_stderr() => {
                // --help / --version
                let _ = write!(stdout, "{e}");
                return Ok(());
            }
            Err(e) => return Err(CliError::Usage(e.to_string())),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count()?)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let plan = pool.install(|| compute(cli))?;
        emit(plan, stdout)
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

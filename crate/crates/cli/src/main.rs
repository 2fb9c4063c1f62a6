//! `gridmend` command-line interface.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 infeasible or over the
//! enumeration cap, 3 internal failure.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridmend_core::experiments::{
    compare_trajectories, gen_instance, run_gap_study, DamageMode, GapStudy, InstanceSpec, Reference, TopologySpec,
};
use gridmend_core::format::sig9;
use gridmend_core::ilp::{build_ilp, export_model, EnumError, IlpError, DEFAULT_ENUM_CAP};
use gridmend_core::io::{cut_log, energization_csv, lp_csv, parse_schedule_csv, schedule_csv, trajectory_csv};
use gridmend_core::lp::{solve_lp_relaxation, LpError, DEFAULT_TOLERANCE};
use gridmend_core::policy::{parse_policies, run_policy, Policy, PolicyError};
use gridmend_core::schedule::{energization_times, node_energization, trajectory};
use gridmend_core::single::{merge_groups, optimal_single_sequence};
use gridmend_core::topology::Topology;
use gridmend_core::{InstanceF64, Network};
use thiserror::Error;

use config::Config;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<PolicyError> for CliError {
    fn from(e: PolicyError) -> Self {
        match e {
            PolicyError::Enum(EnumError::CapExceeded { .. }) => CliError::Infeasible(e.to_string()),
            PolicyError::Lp(ref lp) => lp_error(lp),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn lp_error(e: &LpError) -> CliError {
    match e {
        LpError::BadTolerance => CliError::Input(e.to_string()),
        _ => CliError::Internal(e.to_string()),
    }
}

impl From<IlpError> for CliError {
    fn from(e: IlpError) -> Self {
        match e {
            IlpError::HorizonTooShort { .. } => CliError::Infeasible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "gridmend", version, about = "Repair crew scheduling for radial distribution networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule the repairs with one policy and print the schedule and harm.
    Schedule(ScheduleArgs),
    /// Print the optimal single-crew repair order.
    Seq1 { network: PathBuf },
    /// Print the rho-factor of every damaged line.
    Rho { network: PathBuf },
    /// Solve the LP relaxation and print energization times and midpoints.
    Lp(LpArgs),
    /// Write the time-indexed integer programme in LP format.
    ExportIlp(ExportArgs),
    /// Recompute the harm of a schedule file with the network's repair times.
    ScoreSchedule { network: PathBuf, schedule: PathBuf },
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Compare policies against an exact or LP reference over many seeds.
    GapStudy(GapArgs),
    /// Compare restoration trajectories of several policies.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ScheduleArgs {
    network: PathBuf,
    #[arg(long, default_value_t = 1)]
    crews: usize,
    #[arg(long, default_value = "ca")]
    policy: Policy,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: usize,
    /// Write the schedule CSV here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write node energization times.
    #[arg(long)]
    energization: Option<PathBuf>,
    /// Also write the restoration trajectory.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    network: PathBuf,
    #[arg(long, default_value_t = 1)]
    crews: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Write the cuts added by the cutting-plane loop.
    #[arg(long)]
    dump_cuts: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    network: PathBuf,
    #[arg(long, default_value_t = 1)]
    crews: usize,
    /// Number of time periods; defaults to the total repair time.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// `ieee13` or `radial:<nodes>`.
    #[arg(long)]
    topology: Option<String>,
    /// Use this network file's topology instead of a bundled one.
    #[arg(long, conflicts_with = "topology")]
    topology_file: Option<PathBuf>,
    /// `all`, `fraction:<f>` or `count:<k>`.
    #[arg(long)]
    damage: Option<String>,
    /// Shift every repair time by -0.1, 0 or +0.1.
    #[arg(long)]
    perturb: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    crews: Option<usize>,
    /// File of `key = value` lines naming long flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    runs: Option<usize>,
    /// Comma-separated, e.g. `ca,lp`.
    #[arg(long)]
    policies: Option<String>,
    /// `enum` or `lp-bound`.
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    enum_cap: Option<usize>,
    /// Write per-instance rows here; the summary then goes to standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Network file; without it an instance is generated from the flags.
    network: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    policies: Option<String>,
    /// Directory for the per-policy trajectory files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("gridmend: {e}");
        return ExitCode::from(e.code());
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gridmend: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GRIDMEND_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("GRIDMEND_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn load_instance(path: &Path) -> Result<InstanceF64, CliError> {
    let text = read_file(path)?;
    InstanceF64::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Schedule(args) => schedule(args),
        Command::Seq1 { network } => seq1(&network),
        Command::Rho { network } => rho(&network),
        Command::Lp(args) => lp(args),
        Command::ExportIlp(args) => export_ilp(args),
        Command::ScoreSchedule { network, schedule } => score_schedule(&network, &schedule),
        Command::Gen(args) => gen(args),
        Command::GapStudy(args) => gap_study(args),
        Command::Compare(args) => compare(args),
    }
}

fn check_crews(crews: usize) -> Result<(), CliError> {
    if crews == 0 {
        Err(CliError::Input("--crews must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn schedule(args: ScheduleArgs) -> Result<String, CliError> {
    check_crews(args.crews)?;
    let inst = load_instance(&args.network)?;
    let forest = &inst.forest;
    let sched = run_policy(forest, args.crews, args.policy, args.enum_cap)?;
    let line_e = energization_times(forest, &sched.completions(forest.len()).map_err(internal)?).map_err(internal)?;
    let weights = inst.network.weights();
    let nodes = node_energization(&inst.graph, &weights, &line_e);

    let mut csv = schedule_csv(&sched, forest);
    let _ = writeln!(csv, "# harm: {}", sig9(nodes.harm));
    if let Some(path) = &args.energization {
        let ids: Vec<String> = inst.network.nodes().iter().map(|n| n.id.clone()).collect();
        write_file(path, &energization_csv(&ids, &nodes.node))?;
    }
    if let Some(path) = &args.trajectory {
        write_file(path, &trajectory_csv(&trajectory(&nodes.node, &weights)))?;
    }
    match &args.output {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(format!("harm: {}\n", sig9(nodes.harm)))
        }
        None => Ok(csv),
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn seq1(network: &Path) -> Result<String, CliError> {
    let inst = load_instance(network)?;
    let forest = &inst.forest;
    let seq = optimal_single_sequence(forest);
    let sched = gridmend_core::list_schedule(forest, &seq, 1).map_err(internal)?;
    let mut out = String::from("position,job\n");
    for (k, &j) in seq.iter().enumerate() {
        let _ = writeln!(out, "{},{}", k + 1, forest.jobs()[j].id);
    }
    let _ = writeln!(out, "# harm: {}", sig9(sched.harm(forest).map_err(internal)?));
    Ok(out)
}

fn rho(network: &Path) -> Result<String, CliError> {
    let inst = load_instance(network)?;
    let rho = merge_groups(&inst.forest).rho;
    let mut out = String::from("job,rho\n");
    for (j, job) in inst.forest.jobs().iter().enumerate() {
        let _ = writeln!(out, "{},{}", job.id, sig9(rho.value(j)));
    }
    Ok(out)
}

fn lp(args: LpArgs) -> Result<String, CliError> {
    check_crews(args.crews)?;
    let inst = load_instance(&args.network)?;
    let sol = solve_lp_relaxation(&inst.forest, args.crews, args.tol).map_err(|e| lp_error(&e))?;
    if let Some(path) = &args.dump_cuts {
        write_file(path, &cut_log(&sol, &inst.forest))?;
    }
    let mut out = lp_csv(&sol, &inst.forest);
    let _ = writeln!(out, "# objective: {}", sig9(sol.objective));
    Ok(out)
}

fn export_ilp(args: ExportArgs) -> Result<String, CliError> {
    check_crews(args.crews)?;
    let text = read_file(&args.network)?;
    let net = Network::<f64>::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", args.network.display())))?;
    let model = build_ilp(&net, args.crews, args.horizon)?;
    let lp = export_model(&model);
    match &args.output {
        Some(path) => {
            write_file(path, &lp)?;
            Ok(format!(
                "variables: {}\nconstraints: {}\nhorizon: {}\n",
                model.vars.len(),
                model.rows.len(),
                model.horizon
            ))
        }
        None => Ok(lp),
    }
}

fn score_schedule(network: &Path, schedule: &Path) -> Result<String, CliError> {
    let inst = load_instance(network)?;
    let text = read_file(schedule)?;
    let parsed = parse_schedule_csv(&text, &inst.forest).map_err(|e| CliError::Input(format!("{}: {e}", schedule.display())))?;
    let sched = parsed.retimed(&inst.forest);
    sched
        .validate(&inst.forest)
        .map_err(|e| CliError::Input(format!("{}: {e}", schedule.display())))?;
    let harm = sched.harm(&inst.forest).map_err(internal)?;
    let mut out = schedule_csv(&sched, &inst.forest);
    let _ = writeln!(out, "# harm: {}", sig9(harm));
    Ok(out)
}

/// Instance template from flags, then the config file, then defaults.
fn instance_spec(args: &InstanceArgs, cfg: &Config) -> Result<InstanceSpec, CliError> {
    let topology_file = args.topology_file.clone().or_else(|| cfg.get("topology-file").map(PathBuf::from));
    let topology = match (&args.topology, topology_file) {
        (None, Some(path)) => {
            let text = read_file(&path)?;
            let net = Network::<f64>::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            TopologySpec::Fixed(Topology::from_network(&net))
        }
        _ => {
            let name = cfg.pick(args.topology.clone(), "topology", "ieee13".to_string())?;
            name.parse().map_err(|e: gridmend_core::experiments::ExperimentError| CliError::Input(e.to_string()))?
        }
    };
    let damage: String = cfg.pick(args.damage.clone(), "damage", "all".to_string())?;
    let damage: DamageMode = damage.parse().map_err(|e: gridmend_core::experiments::ExperimentError| CliError::Input(e.to_string()))?;
    let crews = cfg.pick(args.crews, "crews", 2)?;
    check_crews(crews)?;
    Ok(InstanceSpec {
        topology,
        damage,
        perturb: cfg.flag(args.perturb, "perturb")?,
        seed: cfg.pick(args.seed, "seed", 1)?,
        crews,
    })
}

fn gen(args: GenArgs) -> Result<String, CliError> {
    let cfg = Config::load(args.instance.config.as_deref())?;
    let spec = instance_spec(&args.instance, &cfg)?;
    let net = gen_instance(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    let text = net.to_text();
    match &args.output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn policies(flag: Option<String>, cfg: &Config, default: &str) -> Result<Vec<Policy>, CliError> {
    let list = cfg.pick(flag, "policies", default.to_string())?;
    let list = parse_policies(&list).map_err(|e| CliError::Input(e.to_string()))?;
    if list.is_empty() {
        return Err(CliError::Input("no policies given".into()));
    }
    Ok(list)
}

fn gap_study(args: GapArgs) -> Result<String, CliError> {
    let cfg = Config::load(args.instance.config.as_deref())?;
    let template = instance_spec(&args.instance, &cfg)?;
    let reference: String = cfg.pick(args.reference, "reference", "enum".to_string())?;
    let study = GapStudy {
        first_seed: template.seed,
        template,
        runs: cfg.pick(args.runs, "runs", 100)?,
        policies: policies(args.policies, &cfg, "ca,lp")?,
        reference: reference.parse::<Reference>().map_err(CliError::Input)?,
        enum_cap: cfg.pick(args.enum_cap, "enum-cap", DEFAULT_ENUM_CAP)?,
    };
    let report = run_gap_study(&study);
    match &args.output {
        Some(path) => {
            write_file(path, &report.to_csv())?;
            Ok(report.summary_csv())
        }
        None => Ok(report.to_csv()),
    }
}

fn compare(args: CompareArgs) -> Result<String, CliError> {
    let cfg = Config::load(args.instance.config.as_deref())?;
    let spec = instance_spec(&args.instance, &cfg)?;
    let inst = match &args.network {
        Some(path) => load_instance(path)?,
        None => InstanceF64::new(gen_instance(&spec).map_err(|e| CliError::Input(e.to_string()))?),
    };
    let list = policies(args.policies, &cfg, "ca,fe,eei")?;
    let cmp = compare_trajectories(&inst, spec.crews, &list, DEFAULT_ENUM_CAP)?;
    if let Some(dir) = args.out_dir.or_else(|| cfg.get("out-dir").map(PathBuf::from)) {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        for run in &cmp.runs {
            write_file(&dir.join(format!("trajectory_{}.csv", run.policy)), &trajectory_csv(&run.trajectory))?;
        }
    }
    Ok(cmp.summary_csv())
}

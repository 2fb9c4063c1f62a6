//! Seeded instance generation, gap studies and trajectory comparisons.
//!
//! Randomness comes from ChaCha8 seeded with the instance seed. Each purpose
//! draws from its own stream (see the `*_STREAM` constants), so changing how
//! one quantity is drawn never shifts another.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::format::sig9;
use crate::ilp::exact_enum_with_cap;
use crate::instance::Instance;
use crate::lp::{solve_lp_relaxation, DEFAULT_TOLERANCE};
use crate::network::{LineStatus, Network, NetworkError};
use crate::policy::{run_policy, Policy};
use crate::schedule::{node_energization, trajectory, Trajectory};
use crate::topology::Topology;

pub const TOPOLOGY_STREAM: u64 = 0;
pub const DAMAGE_STREAM: u64 = 1;
pub const WEIGHT_STREAM: u64 = 2;
pub const SPECIAL_STREAM: u64 = 3;
pub const REPAIR_STREAM: u64 = 4;
pub const PERTURB_STREAM: u64 = 5;

/// Weight of the one extremely important node.
pub const SPECIAL_WEIGHT: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("unknown topology `{0}` (expected ieee13 or radial:<nodes>)")]
    UnknownTopology(String),
    #[error("bad damage mode `{0}` (expected all, fraction:<f> or count:<k>)")]
    BadDamage(String),
    #[error("topology has no node other than the source")]
    NoSinkNode,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySpec {
    Ieee13,
    /// Random radial tree with this many nodes, drawn per seed.
    Radial(usize),
    /// Fixed user-supplied topology.
    Fixed(Topology),
}

impl FromStr for TopologySpec {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "ieee13" {
            return Ok(TopologySpec::Ieee13);
        }
        s.strip_prefix("radial:")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n >= 2)
            .map(TopologySpec::Radial)
            .ok_or_else(|| ExperimentError::UnknownTopology(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DamageMode {
    All,
    /// Each instance damages `round(fraction * lines)` lines chosen uniformly.
    Fraction(f64),
    /// Exactly this many lines (capped at the line count).
    Count(usize),
}

impl FromStr for DamageMode {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExperimentError::BadDamage(s.to_string());
        if s == "all" {
            return Ok(DamageMode::All);
        }
        if let Some(f) = s.strip_prefix("fraction:") {
            let f: f64 = f.parse().map_err(|_| bad())?;
            return if (0.0..=1.0).contains(&f) { Ok(DamageMode::Fraction(f)) } else { Err(bad()) };
        }
        if let Some(k) = s.strip_prefix("count:") {
            return k.parse().map(DamageMode::Count).map_err(|_| bad());
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub topology: TopologySpec,
    pub damage: DamageMode,
    /// Shift each repair time by -0.1, 0 or +0.1.
    pub perturb: bool,
    pub seed: u64,
    pub crews: usize,
}

impl InstanceSpec {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Node weights uniform on `[0, 1)`, one uniformly chosen non-source node
/// at weight 5, repair times uniform on `1..=10`.
pub fn gen_instance(spec: &InstanceSpec) -> Result<Network<f64>, ExperimentError> {
    let topo = match &spec.topology {
        TopologySpec::Ieee13 => Topology::ieee13(),
        TopologySpec::Radial(n) => Topology::random_radial(*n, &mut stream(spec.seed, TOPOLOGY_STREAM)),
        TopologySpec::Fixed(t) => t.clone(),
    };
    let n = topo.nodes.len();
    if n < 2 {
        return Err(ExperimentError::NoSinkNode);
    }
    let lines = topo.lines.len();

    let count = match spec.damage {
        DamageMode::All => lines,
        DamageMode::Fraction(f) => ((f * lines as f64).round() as usize).min(lines),
        DamageMode::Count(k) => k.min(lines),
    };
    let mut damaged = vec![false; lines];
    for l in sample(&mut stream(spec.seed, DAMAGE_STREAM), lines, count) {
        damaged[l] = true;
    }

    let mut rng = stream(spec.seed, WEIGHT_STREAM);
    let mut weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let sinks: Vec<usize> = (0..n).filter(|&i| i != topo.source).collect();
    let special = sinks[stream(spec.seed, SPECIAL_STREAM).random_range(0..sinks.len())];
    weights[special] = SPECIAL_WEIGHT;

    let mut repair = stream(spec.seed, REPAIR_STREAM);
    let mut perturb = stream(spec.seed, PERTURB_STREAM);
    let statuses: Vec<LineStatus<f64>> = damaged
        .iter()
        .map(|&d| {
            let p = f64::from(repair.random_range(1u32..=10));
            let delta = [-0.1, 0.0, 0.1][perturb.random_range(0..3usize)];
            match (d, spec.perturb) {
                (false, _) => LineStatus::Intact,
                (true, false) => LineStatus::Damaged { repair_time: p },
                (true, true) => LineStatus::Damaged { repair_time: p + delta },
            }
        })
        .collect();
    Ok(topo.to_network(&weights, &statuses)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Exhaustive optimum; instances above the cap fail individually.
    Enum,
    /// LP relaxation objective.
    LpBound,
}

impl FromStr for Reference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "enum" => Ok(Reference::Enum),
            "lp-bound" | "lp" => Ok(Reference::LpBound),
            other => Err(format!("unknown reference `{other}` (expected enum or lp-bound)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapStudy {
    pub template: InstanceSpec,
    pub runs: usize,
    /// Seed of the first run; run `i` uses `first_seed + i`.
    pub first_seed: u64,
    pub policies: Vec<Policy>,
    pub reference: Reference,
    pub enum_cap: usize,
}

/// Label of the best-of column, the smaller of the CA and LP harms.
pub const BEST_OF_LABEL: &str = "en";

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub seed: u64,
    pub policy: String,
    pub harm: Option<f64>,
    pub reference: Option<f64>,
    pub gap: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSummary {
    pub policy: String,
    pub count: usize,
    pub mean_gap: f64,
    pub median_gap: f64,
    pub p90_gap: f64,
    pub max_gap: f64,
    pub within_10pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
}

pub fn relative_gap(harm: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if harm == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        harm / reference - 1.0
    }
}

/// Runs every seed in parallel; rows come back ordered by seed, then by
/// policy in the requested order.
pub fn run_gap_study(study: &GapStudy) -> GapReport {
    let rows = (0..study.runs)
        .into_par_iter()
        .map(|i| study_instance(study, study.first_seed + i as u64))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    GapReport { rows }
}

fn study_instance(study: &GapStudy, seed: u64) -> Vec<GapRow> {
    let failed = |policy: &str, message: String| GapRow {
        seed,
        policy: policy.to_string(),
        harm: None,
        reference: None,
        gap: None,
        error: Some(message),
    };
    let spec = study.template.with_seed(seed);
    let net = match gen_instance(&spec) {
        Ok(net) => net,
        Err(e) => return study.policies.iter().map(|p| failed(p.name(), e.to_string())).collect(),
    };
    let instance = Instance::new(net);
    let forest = &instance.forest;
    let reference = match study.reference {
        Reference::Enum => exact_enum_with_cap(forest, spec.crews, study.enum_cap)
            .map(|r| r.harm)
            .map_err(|e| e.to_string()),
        Reference::LpBound => solve_lp_relaxation(forest, spec.crews, DEFAULT_TOLERANCE)
            .map(|lp| lp.objective)
            .map_err(|e| e.to_string()),
    };
    let reference = match reference {
        Ok(r) => r,
        Err(e) => {
            return study
                .policies
                .iter()
                .map(|p| failed(p.name(), format!("reference: {e}")))
                .collect()
        }
    };

    let mut rows = Vec::new();
    let mut harms: Vec<(Policy, f64)> = Vec::new();
    for &policy in &study.policies {
        match run_policy(forest, spec.crews, policy, study.enum_cap).and_then(|s| Ok(s.harm(forest)?)) {
            Ok(h) => {
                harms.push((policy, h));
                rows.push(GapRow {
                    seed,
                    policy: policy.name().to_string(),
                    harm: Some(h),
                    reference: Some(reference),
                    gap: Some(relative_gap(h, reference)),
                    error: None,
                });
            }
            Err(e) => rows.push(failed(policy.name(), e.to_string())),
        }
    }
    let find = |p: Policy| harms.iter().find(|(q, _)| *q == p).map(|&(_, h)| h);
    if let (Some(ca), Some(lp)) = (find(Policy::Ca), find(Policy::Lp)) {
        let h = ca.min(lp);
        rows.push(GapRow {
            seed,
            policy: BEST_OF_LABEL.to_string(),
            harm: Some(h),
            reference: Some(reference),
            gap: Some(relative_gap(h, reference)),
            error: None,
        });
    }
    rows
}

impl GapReport {
    pub const HEADER: &'static str = "seed,policy,harm,reference,gap,error";

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(sig9).unwrap_or_default();
        let mut out = format!("{}\n", Self::HEADER);
        for r in &self.rows {
            let error = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
            let _ = writeln!(out, "{},{},{},{},{},{}", r.seed, r.policy, opt(r.harm), opt(r.reference), opt(r.gap), error);
        }
        out
    }

    /// Per-policy gap statistics over successful rows, policies in order of
    /// first appearance.
    pub fn summary(&self) -> Vec<GapSummary> {
        let mut labels: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !labels.contains(&r.policy.as_str()) {
                labels.push(&r.policy);
            }
        }
        labels
            .into_iter()
            .map(|label| {
                let mut gaps: Vec<f64> = self.rows.iter().filter(|r| r.policy == label).filter_map(|r| r.gap).collect();
                gaps.sort_by(f64::total_cmp);
                let count = gaps.len();
                let quantile = |q: f64| {
                    if count == 0 {
                        f64::NAN
                    } else {
                        gaps[((q * (count - 1) as f64).round() as usize).min(count - 1)]
                    }
                };
                GapSummary {
                    policy: label.to_string(),
                    count,
                    mean_gap: if count == 0 { f64::NAN } else { gaps.iter().sum::<f64>() / count as f64 },
                    median_gap: quantile(0.5),
                    p90_gap: quantile(0.9),
                    max_gap: gaps.last().copied().unwrap_or(f64::NAN),
                    within_10pct: if count == 0 {
                        f64::NAN
                    } else {
                        gaps.iter().filter(|&&g| g <= 0.1).count() as f64 / count as f64
                    },
                }
            })
            .collect()
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("policy,count,mean_gap,median_gap,p90_gap,max_gap,within_10pct\n");
        for s in self.summary() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.policy,
                s.count,
                sig9(s.mean_gap),
                sig9(s.median_gap),
                sig9(s.p90_gap),
                sig9(s.max_gap),
                sig9(s.within_10pct)
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTrajectory {
    pub policy: Policy,
    pub harm: f64,
    pub makespan: f64,
    pub trajectory: Trajectory<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryComparison {
    pub runs: Vec<PolicyTrajectory>,
    /// Half of the largest makespan over the compared policies.
    pub midpoint: f64,
}

impl TrajectoryComparison {
    /// Restored fraction of each policy at the midpoint.
    pub fn midpoint_fractions(&self) -> Vec<(Policy, f64)> {
        self.runs.iter().map(|r| (r.policy, r.trajectory.fraction_at(self.midpoint))).collect()
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("policy,harm,makespan,midpoint,fraction_at_midpoint\n");
        for r in &self.runs {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.policy,
                sig9(r.harm),
                sig9(r.makespan),
                sig9(self.midpoint),
                sig9(r.trajectory.fraction_at(self.midpoint))
            );
        }
        out
    }
}

pub fn compare_trajectories(
    instance: &Instance<f64>,
    crews: usize,
    policies: &[Policy],
    enum_cap: usize,
) -> Result<TrajectoryComparison, crate::policy::PolicyError> {
    let weights = instance.network.weights();
    let mut runs = Vec::with_capacity(policies.len());
    for &policy in policies {
        let schedule = run_policy(&instance.forest, crews, policy, enum_cap)?;
        let completions = schedule.completions(instance.forest.len())?;
        let line_e = crate::schedule::energization_times(&instance.forest, &completions)?;
        let result = node_energization(&instance.graph, &weights, &line_e);
        runs.push(PolicyTrajectory {
            policy,
            harm: result.harm,
            makespan: schedule.makespan(),
            trajectory: trajectory(&result.node, &weights),
        });
    }
    let midpoint = runs.iter().map(|r| r.makespan).fold(0.0, f64::max) / 2.0;
    Ok(TrajectoryComparison { runs, midpoint })
}

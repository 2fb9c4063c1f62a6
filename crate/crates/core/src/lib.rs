//! Repair scheduling for radial distribution networks after a disaster.
//!
//! Damaged lines are jobs for `m` identical crews. A line energizes once it
//! and every damaged line between it and the source are repaired, and the
//! objective ("harm") is the weighted sum of node energization times.
//!
//! The algorithms are generic over [`Scalar`]; the aliases below fix the
//! scalar for the common cases.

pub mod contract;
pub mod experiments;
pub mod format;
pub mod ilp;
pub mod instance;
pub mod io;
pub mod lp;
pub mod multi;
pub mod network;
pub mod policy;
pub mod precedence;
pub mod scalar;
pub mod schedule;
pub mod single;
pub mod topology;

pub use contract::{contract, DamagedComponentGraph, DamagedEdge, Supernode};
pub use ilp::{build_ilp, exact_enum, exact_enum_with_cap, export_model, EnumError, ExactResult, IlpError, IlpModel};
pub use instance::Instance;
pub use lp::{lp_list_schedule, separation_oracle, solve_lp_relaxation, Cut, LpError, LpSolution};
pub use multi::{baseline_eei, baseline_fe, conversion_schedule, convert, dispatch_multi, rho_dispatch};
pub use network::{Line, LineStatus, Network, NetworkError, Node};
pub use policy::{run_policy, Policy, PolicyError};
pub use precedence::{build_precedence, ForestError, Job, PrecedenceForest};
pub use scalar::{Rational, Scalar};
pub use schedule::{
    energization_times, harm, infinite_crew_harm, list_schedule, node_energization, trajectory, Assignment,
    EnergizationResult, Schedule, ScheduleError, Trajectory,
};
pub use single::{dispatch_single, merge_groups, optimal_single_sequence, rho_factors, RhoFactors};

pub type NetworkF64 = Network<f64>;
pub type NetworkF32 = Network<f32>;
pub type NetworkQ = Network<Rational>;
pub type ForestF64 = PrecedenceForest<f64>;
pub type ForestF32 = PrecedenceForest<f32>;
pub type ForestQ = PrecedenceForest<Rational>;
pub type ScheduleF64 = Schedule<f64>;
pub type ScheduleF32 = Schedule<f32>;
pub type ScheduleQ = Schedule<Rational>;
pub type InstanceF64 = Instance<f64>;
pub type InstanceQ = Instance<Rational>;

//! Named scheduling policies behind one entry point.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ilp::{exact_enum_with_cap, EnumError};
use crate::lp::{lp_list_schedule, LpError};
use crate::multi::{baseline_eei, baseline_fe, conversion_schedule, rho_dispatch};
use crate::precedence::PrecedenceForest;
use crate::scalar::Scalar;
use crate::schedule::{Schedule, ScheduleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    /// Conversion of the optimal single-crew sequence.
    Ca,
    /// Rho-factor dispatch.
    Dispatch,
    /// Largest restored weight first.
    Fe,
    /// Largest weight per repair time first.
    Eei,
    /// LP midpoint list scheduling.
    Lp,
    /// Exhaustive search.
    Enum,
}

impl Policy {
    pub const ALL: [Policy; 6] = [Policy::Ca, Policy::Dispatch, Policy::Fe, Policy::Eei, Policy::Lp, Policy::Enum];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Ca => "ca",
            Policy::Dispatch => "dispatch",
            Policy::Fe => "fe",
            Policy::Eei => "eei",
            Policy::Lp => "lp",
            Policy::Enum => "enum",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown policy `{0}` (expected ca, dispatch, fe, eei, lp or enum)")]
pub struct UnknownPolicy(pub String);

impl FromStr for Policy {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| UnknownPolicy(s.to_string()))
    }
}

/// Parses a comma-separated policy list.
pub fn parse_policies(list: &str) -> Result<Vec<Policy>, UnknownPolicy> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

pub fn run_policy<T: Scalar>(
    forest: &PrecedenceForest<T>,
    crews: usize,
    policy: Policy,
    enum_cap: usize,
) -> Result<Schedule<T>, PolicyError> {
    Ok(match policy {
        Policy::Ca => conversion_schedule(forest, crews)?,
        Policy::Dispatch => rho_dispatch(forest, crews)?,
        Policy::Fe => baseline_fe(forest, crews)?,
        Policy::Eei => baseline_eei(forest, crews)?,
        Policy::Lp => lp_list_schedule(forest, crews)?.0,
        Policy::Enum => exact_enum_with_cap(forest, crews, enum_cap)?.schedule,
    })
}

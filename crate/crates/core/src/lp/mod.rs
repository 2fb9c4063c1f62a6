//! LP relaxation over energization times and midpoint list scheduling.
//!
//! ```text
//! minimise   sum_j w_j E_j
//! subject to E_j >= p_j
//!            E_j >= E_parent(j)
//!            sum_{j in A} p_j E_j >= (1/2m) (sum_A p_j)^2 + 1/2 sum_A p_j^2   for all A
//! ```
//!
//! The exponential family of set inequalities is handled by cutting planes.
//! With midpoints `M_j = E_j - p_j / 2` the violation of set `A` is
//! `(1/2m) p(A)^2 - sum_A p_j M_j`, and a set of maximum violation is always
//! a prefix of the jobs sorted by midpoint, so checking the `n` midpoint
//! prefixes separates exactly.

mod engine;

use std::collections::HashSet;

use thiserror::Error;

pub use engine::{LpEngine, MinilpEngine};

use crate::precedence::PrecedenceForest;
use crate::scalar::Scalar;
use crate::schedule::{list_schedule, Schedule, ScheduleError};

/// Absolute tolerance on cut violation.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("LP engine failure: {0}")]
    Engine(String),
    #[error("cutting planes did not converge within {iterations} rounds")]
    NoConvergence { iterations: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A violated set inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub members: Vec<usize>,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub energization: Vec<f64>,
    pub midpoints: Vec<f64>,
    pub objective: f64,
    /// Cuts in the order they were added.
    pub cuts: Vec<Cut>,
    pub rounds: usize,
}

impl LpSolution {
    /// Jobs by ascending midpoint, lower index first on ties.
    pub fn midpoint_order(&self) -> Vec<usize> {
        sorted_by_key(&self.midpoints)
    }
}

fn sorted_by_key(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    order
}

/// Right-hand side of the set inequality for `A`.
pub fn set_bound(members: &[usize], ptimes: &[f64], crews: usize) -> f64 {
    let sum: f64 = members.iter().map(|&j| ptimes[j]).sum();
    let squares: f64 = members.iter().map(|&j| ptimes[j] * ptimes[j]).sum();
    sum * sum / (2.0 * crews as f64) + 0.5 * squares
}

/// `f(A) - sum_A p_j E_j`; positive means violated.
pub fn set_violation(members: &[usize], energization: &[f64], ptimes: &[f64], crews: usize) -> f64 {
    let lhs: f64 = members.iter().map(|&j| ptimes[j] * energization[j]).sum();
    set_bound(members, ptimes, crews) - lhs
}

/// Most violated midpoint prefix, if its violation exceeds `tol`.
pub fn separation_oracle(energization: &[f64], ptimes: &[f64], crews: usize, tol: f64) -> Option<Cut> {
    let midpoints: Vec<f64> = energization
        .iter()
        .zip(ptimes)
        .map(|(e, p)| e - p / 2.0)
        .collect();
    let order = sorted_by_key(&midpoints);
    let m = crews as f64;
    let (mut sum, mut squares, mut lhs) = (0.0, 0.0, 0.0);
    let mut best: Option<(usize, f64)> = None;
    for (k, &j) in order.iter().enumerate() {
        let p = ptimes[j];
        sum += p;
        squares += p * p;
        lhs += p * energization[j];
        let violation = sum * sum / (2.0 * m) + 0.5 * squares - lhs;
        if best.is_none_or(|(_, v)| violation > v) {
            best = Some((k, violation));
        }
    }
    let (k, violation) = best?;
    if violation > tol {
        let mut members = order[..=k].to_vec();
        members.sort_unstable();
        Some(Cut { members, violation })
    } else {
        None
    }
}

/// Solves the relaxation with the default `minilp` engine.
pub fn solve_lp_relaxation<T: Scalar>(
    forest: &PrecedenceForest<T>,
    crews: usize,
    tol: f64,
) -> Result<LpSolution, LpError> {
    let weights: Vec<f64> = forest.jobs().iter().map(|j| j.weight.as_f64()).collect();
    let ptimes: Vec<f64> = forest.jobs().iter().map(|j| j.ptime.as_f64()).collect();
    let mut engine = MinilpEngine::new(&weights, &ptimes);
    solve_with_engine(forest, crews, tol, &mut engine)
}

/// Cutting-plane loop over any [`LpEngine`] whose variables are the
/// energization times with lower bounds `p_j` already in place.
pub fn solve_with_engine<T: Scalar, E: LpEngine>(
    forest: &PrecedenceForest<T>,
    crews: usize,
    tol: f64,
    engine: &mut E,
) -> Result<LpSolution, LpError> {
    if crews == 0 {
        return Err(ScheduleError::NoCrews.into());
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(LpError::BadTolerance);
    }
    let n = forest.len();
    let ptimes: Vec<f64> = forest.jobs().iter().map(|j| j.ptime.as_f64()).collect();
    if n == 0 {
        return Ok(LpSolution {
            energization: vec![],
            midpoints: vec![],
            objective: 0.0,
            cuts: vec![],
            rounds: 0,
        });
    }
    for j in 0..n {
        if let Some(p) = forest.parent(j) {
            engine.add_constraint(&[(j, 1.0), (p, -1.0)], 0.0)?;
        }
    }
    engine.solve()?;

    let cap = (10 * n * n).max(10);
    let mut cuts: Vec<Cut> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut rounds = 0;
    let energization = loop {
        let e: Vec<f64> = (0..n).map(|j| engine.value(j)).collect();
        let Some(cut) = separation_oracle(&e, &ptimes, crews, tol) else {
            break e;
        };
        if !seen.insert(cut.members.clone()) {
            // Re-separating a row already in the LP: only solver round-off
            // can cause this, so accept when it is small relative to the row.
            let scale = set_bound(&cut.members, &ptimes, crews).max(1.0);
            if cut.violation <= 1e-9 * scale {
                break e;
            }
            return Err(LpError::NoConvergence { iterations: rounds });
        }
        rounds += 1;
        if rounds > cap {
            return Err(LpError::NoConvergence { iterations: rounds });
        }
        let terms: Vec<(usize, f64)> = cut.members.iter().map(|&j| (j, ptimes[j])).collect();
        engine.add_constraint(&terms, set_bound(&cut.members, &ptimes, crews))?;
        engine.solve()?;
        cuts.push(cut);
    };

    let midpoints = energization.iter().zip(&ptimes).map(|(e, p)| e - p / 2.0).collect();
    Ok(LpSolution {
        objective: engine.objective(),
        energization,
        midpoints,
        cuts,
        rounds,
    })
}

/// List schedule in order of LP midpoints.
pub fn lp_list_schedule<T: Scalar>(
    forest: &PrecedenceForest<T>,
    crews: usize,
) -> Result<(Schedule<T>, LpSolution), LpError> {
    let lp = solve_lp_relaxation(forest, crews, DEFAULT_TOLERANCE)?;
    let schedule = list_schedule(forest, &lp.midpoint_order(), crews)?;
    Ok((schedule, lp))
}

//! Multi-crew policies built on the single-crew order or on priority keys.

use std::cmp::Ordering;

use crate::precedence::PrecedenceForest;
use crate::scalar::{cmp_ratio, Scalar};
use crate::schedule::{earliest_free, list_schedule, Assignment, Schedule, ScheduleError};
use crate::single::{optimal_single_sequence, rho_factors, RhoFactors};

/// Replays a single-crew sequence as an m-crew priority list.
pub fn convert<T: Scalar>(
    single_sequence: &[usize],
    forest: &PrecedenceForest<T>,
    crews: usize,
) -> Result<Schedule<T>, ScheduleError> {
    list_schedule(forest, single_sequence, crews)
}

/// Conversion of the optimal single-crew sequence.
pub fn conversion_schedule<T: Scalar>(
    forest: &PrecedenceForest<T>,
    crews: usize,
) -> Result<Schedule<T>, ScheduleError> {
    convert(&optimal_single_sequence(forest), forest, crews)
}

/// Event-driven dispatch. Whenever a crew frees up it takes the preferred
/// unstarted job among those whose parent has already been started (being
/// repaired, repaired, or energized) or that hang off the root. Crews freeing
/// at the same instant are served in index order.
pub fn dispatch_by<T, F>(forest: &PrecedenceForest<T>, crews: usize, prefers: F) -> Result<Schedule<T>, ScheduleError>
where
    T: Scalar,
    F: Fn(usize, usize) -> bool,
{
    if crews == 0 {
        return Err(ScheduleError::NoCrews);
    }
    let mut free = vec![T::zero(); crews];
    let mut lists: Vec<Vec<Assignment<T>>> = vec![Vec::new(); crews];
    let mut candidates: Vec<usize> = forest.roots().to_vec();
    while !candidates.is_empty() {
        let crew = earliest_free(&free);
        let now = free[crew];
        let mut best = 0;
        for k in 1..candidates.len() {
            if prefers(candidates[k], candidates[best]) {
                best = k;
            }
        }
        let job = candidates.swap_remove(best);
        let completion = now + forest.jobs()[job].ptime;
        lists[crew].push(Assignment { job, start: now, completion });
        free[crew] = completion;
        candidates.extend_from_slice(forest.children(job));
    }
    Ok(Schedule::from_crews(lists))
}

/// Rho-factor dispatch for m crews.
pub fn dispatch_multi<T: Scalar>(
    forest: &PrecedenceForest<T>,
    rho: &RhoFactors<T>,
    crews: usize,
) -> Result<Schedule<T>, ScheduleError> {
    dispatch_by(forest, crews, |a, b| rho.prefers(a, b))
}

/// Largest tail weight first ("restore the most customers").
pub fn baseline_fe<T: Scalar>(forest: &PrecedenceForest<T>, crews: usize) -> Result<Schedule<T>, ScheduleError> {
    let jobs = forest.jobs();
    dispatch_by(forest, crews, |a, b| {
        match jobs[a].weight.partial_cmp(&jobs[b].weight) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Less) => false,
            _ => a < b,
        }
    })
}

/// Largest `w / p` first (Smith's ratio).
pub fn baseline_eei<T: Scalar>(forest: &PrecedenceForest<T>, crews: usize) -> Result<Schedule<T>, ScheduleError> {
    let jobs = forest.jobs();
    dispatch_by(forest, crews, |a, b| {
        match cmp_ratio(jobs[a].weight, jobs[a].ptime, jobs[b].weight, jobs[b].ptime) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Less) => false,
            _ => a < b,
        }
    })
}

/// Rho dispatch with the factors computed on the spot.
pub fn rho_dispatch<T: Scalar>(forest: &PrecedenceForest<T>, crews: usize) -> Result<Schedule<T>, ScheduleError> {
    dispatch_multi(forest, &rho_factors(forest), crews)
}

//! Exhaustive search for the optimal m-crew schedule on small instances.
//!
//! Harm is nondecreasing in every completion time, so some optimal schedule
//! is non-delay, and list scheduling its jobs in start order reproduces it or
//! something no later. Searching every priority list therefore finds the
//! optimum. Partial lists are pruned with a lower bound that charges every
//! unplaced job at least the earliest free crew time plus its own duration.

use thiserror::Error;

use crate::precedence::PrecedenceForest;
use crate::scalar::Scalar;
use crate::schedule::{earliest_free, Assignment, Schedule, ScheduleError};

pub const DEFAULT_ENUM_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("{jobs} jobs exceed the enumeration cap of {cap}")]
    CapExceeded { jobs: usize, cap: usize },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult<T> {
    pub harm: T,
    pub schedule: Schedule<T>,
    /// Search nodes visited.
    pub explored: u64,
}

pub fn exact_enum<T: Scalar>(forest: &PrecedenceForest<T>, crews: usize) -> Result<ExactResult<T>, EnumError> {
    exact_enum_with_cap(forest, crews, DEFAULT_ENUM_CAP)
}

pub fn exact_enum_with_cap<T: Scalar>(
    forest: &PrecedenceForest<T>,
    crews: usize,
    cap: usize,
) -> Result<ExactResult<T>, EnumError> {
    if crews == 0 {
        return Err(ScheduleError::NoCrews.into());
    }
    let n = forest.len();
    if n > cap {
        return Err(EnumError::CapExceeded { jobs: n, cap });
    }
    let mut search = Search {
        forest,
        free: vec![T::zero(); crews],
        completion: vec![None; n],
        placed: Vec::with_capacity(n),
        best: None,
        explored: 0,
    };
    search.descend();
    let (harm, placed) = search.best.expect("at least one leaf is evaluated");

    let mut lists = vec![Vec::new(); crews];
    for (job, crew, start) in placed {
        let completion = start + forest.jobs()[job].ptime;
        lists[crew].push(Assignment { job, start, completion });
    }
    Ok(ExactResult {
        harm,
        schedule: Schedule::from_crews(lists),
        explored: search.explored,
    })
}

/// `(job, crew, start)`.
type Placement<T> = (usize, usize, T);

struct Search<'a, T> {
    forest: &'a PrecedenceForest<T>,
    free: Vec<T>,
    completion: Vec<Option<T>>,
    /// `(job, crew, start)` in placement order.
    placed: Vec<Placement<T>>,
    best: Option<(T, Vec<Placement<T>>)>,
    explored: u64,
}

impl<T: Scalar> Search<'_, T> {
    fn descend(&mut self) {
        self.explored += 1;
        let bound = self.lower_bound();
        if let Some((best, _)) = &self.best {
            if bound >= *best {
                return;
            }
        }
        let n = self.forest.len();
        if self.placed.len() == n {
            // every job placed: the bound is the exact harm
            self.best = Some((bound, self.placed.clone()));
            return;
        }
        let crew = earliest_free(&self.free);
        let start = self.free[crew];
        for job in 0..n {
            if self.completion[job].is_some() {
                continue;
            }
            let end = start + self.forest.jobs()[job].ptime;
            self.completion[job] = Some(end);
            self.free[crew] = end;
            self.placed.push((job, crew, start));
            self.descend();
            self.placed.pop();
            self.free[crew] = start;
            self.completion[job] = None;
        }
    }

    fn lower_bound(&self) -> T {
        let jobs = self.forest.jobs();
        let now = self.free.iter().copied().fold(None, |acc: Option<T>, t| {
            Some(acc.map_or(t, |a| T::min_of(a, t)))
        });
        let now = now.unwrap_or_else(T::zero);
        let mut energized = vec![T::zero(); jobs.len()];
        let mut total = T::zero();
        for &j in self.forest.topo_order() {
            let own = self.completion[j].unwrap_or(now + jobs[j].ptime);
            let e = match self.forest.parent(j) {
                Some(p) => T::max_of(energized[p], own),
                None => own,
            };
            energized[j] = e;
            total += jobs[j].weight * e;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precedence::Job;

    fn job(weight: f64, ptime: f64, parent: Option<usize>) -> Job<f64> {
        Job { id: "j".into(), weight, ptime, parent }
    }

    #[test]
    fn single_job() {
        let f = PrecedenceForest::new(vec![job(3.0, 4.0, None)]).unwrap();
        assert_eq!(exact_enum(&f, 1).unwrap().harm, 12.0);
    }

    #[test]
    fn two_independent_jobs_two_crews_start_together() {
        let f = PrecedenceForest::new(vec![job(1.0, 2.0, None), job(2.0, 3.0, None)]).unwrap();
        let r = exact_enum(&f, 2).unwrap();
        assert_eq!(r.harm, 1.0 * 2.0 + 2.0 * 3.0);
        assert_eq!(r.schedule.starts(2).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn star_single_crew() {
        let f = PrecedenceForest::new(vec![job(1.0, 1.0, None), job(3.0, 1.0, Some(0)), job(1.0, 2.0, Some(0))]).unwrap();
        let r = exact_enum(&f, 1).unwrap();
        assert_eq!(r.harm, 11.0);
        r.schedule.validate(&f).unwrap();
        assert_eq!(r.schedule.harm(&f).unwrap(), r.harm);
    }

    #[test]
    fn cap_is_enforced() {
        let f = PrecedenceForest::new((0..9).map(|_| job(1.0, 1.0, None)).collect()).unwrap();
        assert_eq!(exact_enum(&f, 2), Err(EnumError::CapExceeded { jobs: 9, cap: 8 }));
        assert!(exact_enum_with_cap(&f, 2, 9).is_ok());
    }

    #[test]
    fn empty_forest_has_zero_harm() {
        let f = PrecedenceForest::<f64>::new(vec![]).unwrap();
        let r = exact_enum(&f, 3).unwrap();
        assert_eq!(r.harm, 0.0);
        assert_eq!(r.schedule.crew_count(), 3);
    }

    #[test]
    fn soft_precedence_allows_parallel_repair() {
        // child repaired alongside its parent energizes with it
        let f = PrecedenceForest::new(vec![job(1.0, 3.0, None), job(10.0, 3.0, Some(0))]).unwrap();
        assert_eq!(exact_enum(&f, 2).unwrap().harm, 33.0);
        assert_eq!(exact_enum(&f, 1).unwrap().harm, 3.0 + 60.0);
    }
}

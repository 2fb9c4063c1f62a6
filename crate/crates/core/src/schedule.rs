//! Crew schedules, energization times, harm and restoration trajectories.

use thiserror::Error;

use crate::contract::DamagedComponentGraph;
use crate::precedence::PrecedenceForest;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("need at least one crew")]
    NoCrews,
    #[error("priority list is not a permutation of the {jobs} jobs")]
    NotAPermutation { jobs: usize },
    #[error("job {job} has no completion time")]
    MissingCompletion { job: usize },
    #[error("job {job} is scheduled more than once")]
    DuplicateJob { job: usize },
    #[error("job {job} overlaps the previous job of crew {crew}")]
    Overlap { crew: usize, job: usize },
    #[error("job {job}: duration differs from its repair time")]
    WrongDuration { job: usize },
    #[error("job {job} starts before time zero")]
    NegativeStart { job: usize },
    #[error("job index {job} out of range")]
    UnknownJob { job: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment<T> {
    pub job: usize,
    pub start: T,
    pub completion: T,
}

/// Ordered job lists, one per crew.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    crews: Vec<Vec<Assignment<T>>>,
}

impl<T: Scalar> Schedule<T> {
    pub fn from_crews(crews: Vec<Vec<Assignment<T>>>) -> Self {
        Self { crews }
    }

    pub fn crews(&self) -> &[Vec<Assignment<T>>] {
        &self.crews
    }

    pub fn crew_count(&self) -> usize {
        self.crews.len()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (usize, &Assignment<T>)> {
        self.crews
            .iter()
            .enumerate()
            .flat_map(|(c, list)| list.iter().map(move |a| (c, a)))
    }

    pub fn completions(&self, jobs: usize) -> Result<Vec<T>, ScheduleError> {
        self.per_job(jobs, |a| a.completion)
    }

    pub fn starts(&self, jobs: usize) -> Result<Vec<T>, ScheduleError> {
        self.per_job(jobs, |a| a.start)
    }

    fn per_job(&self, jobs: usize, field: impl Fn(&Assignment<T>) -> T) -> Result<Vec<T>, ScheduleError> {
        let mut out: Vec<Option<T>> = vec![None; jobs];
        for (_, a) in self.assignments() {
            let slot = out.get_mut(a.job).ok_or(ScheduleError::UnknownJob { job: a.job })?;
            if slot.replace(field(a)).is_some() {
                return Err(ScheduleError::DuplicateJob { job: a.job });
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(job, v)| v.ok_or(ScheduleError::MissingCompletion { job }))
            .collect()
    }

    pub fn makespan(&self) -> T {
        self.assignments()
            .fold(T::zero(), |acc, (_, a)| T::max_of(acc, a.completion))
    }

    /// Every job exactly once, correct durations, no overlap within a crew.
    pub fn validate(&self, forest: &PrecedenceForest<T>) -> Result<(), ScheduleError> {
        if self.crews.is_empty() {
            return Err(ScheduleError::NoCrews);
        }
        self.completions(forest.len())?;
        for (c, list) in self.crews.iter().enumerate() {
            let mut free = T::zero();
            for a in list {
                if a.start < T::zero() {
                    return Err(ScheduleError::NegativeStart { job: a.job });
                }
                if a.completion - a.start != forest.jobs()[a.job].ptime {
                    return Err(ScheduleError::WrongDuration { job: a.job });
                }
                if a.start < free {
                    return Err(ScheduleError::Overlap { crew: c, job: a.job });
                }
                free = a.completion;
            }
        }
        Ok(())
    }

    /// Harm of this schedule.
    pub fn harm(&self, forest: &PrecedenceForest<T>) -> Result<T, ScheduleError> {
        let completions = self.completions(forest.len())?;
        let e = energization_times(forest, &completions)?;
        Ok(harm(forest, &e))
    }

    /// Keeps crew membership and order but recomputes times with the
    /// forest's repair times: each job starts at the later of its listed
    /// start and the crew's previous completion.
    pub fn retimed(&self, forest: &PrecedenceForest<T>) -> Self {
        let crews = self
            .crews
            .iter()
            .map(|list| {
                let mut free = T::zero();
                list.iter()
                    .map(|a| {
                        let start = T::max_of(a.start, free);
                        free = start + forest.jobs()[a.job].ptime;
                        Assignment { job: a.job, start, completion: free }
                    })
                    .collect()
            })
            .collect();
        Self { crews }
    }
}

/// `E_j = max C_i` over the root path of `j`, computed parents-first.
pub fn energization_times<T: Scalar>(
    forest: &PrecedenceForest<T>,
    completions: &[T],
) -> Result<Vec<T>, ScheduleError> {
    if completions.len() < forest.len() {
        return Err(ScheduleError::MissingCompletion { job: completions.len() });
    }
    let mut e = completions[..forest.len()].to_vec();
    for &j in forest.topo_order() {
        if let Some(p) = forest.parent(j) {
            e[j] = T::max_of(e[j], e[p]);
        }
    }
    Ok(e)
}

/// `sum_j w_j E_j`.
pub fn harm<T: Scalar>(forest: &PrecedenceForest<T>, energization: &[T]) -> T {
    forest
        .jobs()
        .iter()
        .zip(energization)
        .fold(T::zero(), |acc, (job, &e)| acc + job.weight * e)
}

/// Harm when every job starts at time zero: a lower bound for any crew count.
pub fn infinite_crew_harm<T: Scalar>(forest: &PrecedenceForest<T>) -> T {
    (0..forest.len()).fold(T::zero(), |acc, j| {
        acc + forest.jobs()[j].weight * forest.path_max_ptime(j)
    })
}

/// Non-delay list scheduling: each job of `priority` in turn goes to the
/// crew that frees up first (lowest index on ties).
pub fn list_schedule<T: Scalar>(
    forest: &PrecedenceForest<T>,
    priority: &[usize],
    crews: usize,
) -> Result<Schedule<T>, ScheduleError> {
    if crews == 0 {
        return Err(ScheduleError::NoCrews);
    }
    let n = forest.len();
    let mut seen = vec![false; n];
    if priority.len() != n {
        return Err(ScheduleError::NotAPermutation { jobs: n });
    }
    for &j in priority {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(ScheduleError::NotAPermutation { jobs: n });
        }
    }

    let mut free = vec![T::zero(); crews];
    let mut lists = vec![Vec::new(); crews];
    for &j in priority {
        let crew = earliest_free(&free);
        let start = free[crew];
        let completion = start + forest.jobs()[j].ptime;
        free[crew] = completion;
        lists[crew].push(Assignment { job: j, start, completion });
    }
    Ok(Schedule { crews: lists })
}

pub(crate) fn earliest_free<T: Scalar>(free: &[T]) -> usize {
    let mut best = 0;
    for (c, t) in free.iter().enumerate().skip(1) {
        if *t < free[best] {
            best = c;
        }
    }
    best
}

/// Line and node energization times plus the node-side harm.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergizationResult<T> {
    pub line: Vec<T>,
    pub node: Vec<T>,
    pub harm: T,
}

/// Spreads line energization times onto network nodes: each node of the tail
/// supernode of line `l` energizes at `E_l`, the source supernode at zero.
/// The harm here is summed over nodes, independently of [`harm`].
pub fn node_energization<T: Scalar>(
    graph: &DamagedComponentGraph<T>,
    node_weights: &[T],
    line_energization: &[T],
) -> EnergizationResult<T> {
    let mut supernode_time = vec![T::zero(); graph.supernodes.len()];
    for (edge, &e) in graph.edges.iter().zip(line_energization) {
        supernode_time[edge.tail] = e;
    }
    let node: Vec<T> = graph
        .node_supernode
        .iter()
        .map(|&s| supernode_time[s])
        .collect();
    let harm = node
        .iter()
        .zip(node_weights)
        .fold(T::zero(), |acc, (&e, &w)| acc + w * e);
    EnergizationResult {
        line: line_energization.to_vec(),
        node,
        harm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub time: T,
    pub restored: T,
    pub fraction: T,
}

/// Cumulative restored weight over time, one breakpoint per distinct
/// energization time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub points: Vec<TrajectoryPoint<T>>,
}

impl<T: Scalar> Trajectory<T> {
    /// Restored fraction at time `t` (right-continuous step function).
    pub fn fraction_at(&self, t: T) -> T {
        self.points
            .iter()
            .take_while(|p| p.time <= t)
            .last()
            .map_or(T::zero(), |p| p.fraction)
    }

    pub fn end_time(&self) -> T {
        self.points.last().map_or(T::zero(), |p| p.time)
    }
}

pub fn trajectory<T: Scalar>(node_energization: &[T], node_weights: &[T]) -> Trajectory<T> {
    let total = node_weights.iter().fold(T::zero(), |acc, &w| acc + w);
    let mut order: Vec<usize> = (0..node_energization.len()).collect();
    order.sort_by(|&a, &b| {
        node_energization[a]
            .partial_cmp(&node_energization[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut points: Vec<TrajectoryPoint<T>> = Vec::new();
    let mut restored = T::zero();
    for n in order {
        let t = node_energization[n];
        restored += node_weights[n];
        let fraction = if total > T::zero() { restored / total } else { T::one() };
        match points.last_mut() {
            Some(last) if last.time == t => {
                last.restored = restored;
                last.fraction = fraction;
            }
            _ => points.push(TrajectoryPoint { time: t, restored, fraction }),
        }
    }
    if let Some(last) = points.last_mut() {
        // exact final value regardless of rounding in the running sum
        last.fraction = T::one();
    }
    Trajectory { points }
}

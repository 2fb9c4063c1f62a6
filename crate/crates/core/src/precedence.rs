//! Soft-precedence outtree over damaged lines.
//!
//! Job `j` cannot be energized before its parent, although both may be under
//! repair at the same time. Jobs are indexed in network line order and that
//! index is the tie-breaking key used throughout the crate.

use thiserror::Error;

use crate::contract::DamagedComponentGraph;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("job {job}: parent {parent} out of range")]
    ParentOutOfRange { job: usize, parent: usize },
    #[error("job {job}: parent relation contains a cycle")]
    Cycle { job: usize },
    #[error("job {job}: processing time must be positive")]
    NonpositiveTime { job: usize },
    #[error("job {job}: weight must be nonnegative")]
    NegativeWeight { job: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job<T> {
    pub id: String,
    /// Aggregate weight of the supernode this line energizes.
    pub weight: T,
    pub ptime: T,
    /// `None` means the job hangs off the (possibly virtual) root.
    pub parent: Option<usize>,
}

/// Outtree of jobs. When more than one job has no parent the forest is read
/// as a single tree under a zero-weight, zero-time dummy root; the dummy is
/// implicit and never appears in schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecedenceForest<T> {
    jobs: Vec<Job<T>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    /// Parents before children.
    topo_order: Vec<usize>,
}

impl<T: Scalar> PrecedenceForest<T> {
    pub fn new(jobs: Vec<Job<T>>) -> Result<Self, ForestError> {
        let n = jobs.len();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (j, job) in jobs.iter().enumerate() {
            if job.ptime <= T::zero() {
                return Err(ForestError::NonpositiveTime { job: j });
            }
            if job.weight < T::zero() {
                return Err(ForestError::NegativeWeight { job: j });
            }
            match job.parent {
                Some(p) if p >= n => return Err(ForestError::ParentOutOfRange { job: j, parent: p }),
                Some(p) => children[p].push(j),
                None => roots.push(j),
            }
        }
        let mut topo_order = Vec::with_capacity(n);
        let mut queue = roots.clone();
        while let Some(j) = queue.pop() {
            topo_order.push(j);
            queue.extend(children[j].iter().rev());
        }
        if topo_order.len() != n {
            let mut seen = vec![false; n];
            for &j in &topo_order {
                seen[j] = true;
            }
            let job = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(ForestError::Cycle { job });
        }
        Ok(Self {
            jobs,
            children,
            roots,
            topo_order,
        })
    }

    pub fn jobs(&self) -> &[Job<T>] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn parent(&self, job: usize) -> Option<usize> {
        self.jobs[job].parent
    }

    pub fn children(&self, job: usize) -> &[usize] {
        &self.children[job]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn has_dummy_root(&self) -> bool {
        self.roots.len() > 1
    }

    pub fn topo_order(&self) -> &[usize] {
        &self.topo_order
    }

    pub fn weights(&self) -> Vec<T> {
        self.jobs.iter().map(|j| j.weight).collect()
    }

    pub fn ptimes(&self) -> Vec<T> {
        self.jobs.iter().map(|j| j.ptime).collect()
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    /// Ancestors of `job` including itself, nearest first.
    pub fn ancestors(&self, job: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(job), move |&j| self.jobs[j].parent)
    }

    pub fn is_ancestor_or_self(&self, ancestor: usize, job: usize) -> bool {
        self.ancestors(job).any(|a| a == ancestor)
    }

    /// Largest processing time on the path from the root to `job`.
    pub fn path_max_ptime(&self, job: usize) -> T {
        self.ancestors(job)
            .fold(T::zero(), |acc, a| T::max_of(acc, self.jobs[a].ptime))
    }

    /// Same jobs with every processing time replaced.
    pub fn with_ptimes(&self, ptimes: &[T]) -> Result<Self, ForestError> {
        let jobs = self
            .jobs
            .iter()
            .zip(ptimes)
            .map(|(job, &ptime)| Job { ptime, ..job.clone() })
            .collect();
        Self::new(jobs)
    }
}

/// Turns the damaged component graph into the precedence forest: the parent
/// of line `j` is the damaged line entering the supernode `j` leaves from.
pub fn build_precedence<T: Scalar>(g: &DamagedComponentGraph<T>) -> PrecedenceForest<T> {
    let mut entering = vec![None; g.supernodes.len()];
    for (j, edge) in g.edges.iter().enumerate() {
        entering[edge.tail] = Some(j);
    }
    let jobs = g
        .edges
        .iter()
        .map(|edge| Job {
            id: edge.id.clone(),
            weight: g.supernodes[edge.tail].weight,
            ptime: edge.repair_time,
            parent: if edge.head == g.source {
                None
            } else {
                entering[edge.head]
            },
        })
        .collect();
    PrecedenceForest::new(jobs).expect("contraction of a radial network yields an outtree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contract::contract;
    use crate::network::Network;
    use crate::topology::ieee13_network;

    #[test]
    fn ieee13_example_is_a_star() {
        let net = ieee13_network(&["650_632", "632_645", "684_611", "671_692"]);
        let forest = build_precedence(&contract(&net));
        let root = forest.job_index("650_632").unwrap();
        assert_eq!(forest.roots(), &[root]);
        assert!(!forest.has_dummy_root());
        for id in ["632_645", "684_611", "671_692"] {
            let j = forest.job_index(id).unwrap();
            assert_eq!(forest.parent(j), Some(root));
        }
        // 632 supernode holds 7 unit weights
        assert_eq!(forest.jobs()[forest.job_index("632_645").unwrap()].weight, 2.0);
        assert_eq!(forest.jobs()[root].weight, 7.0);
    }

    #[test]
    fn single_damaged_line() {
        let net = Network::<f64>::parse("node a 1 source\nnode b 2\nedge L1 a b damaged 3\n").unwrap();
        let forest = build_precedence(&contract(&net));
        assert_eq!(forest.len(), 1);
        assert_eq!(forest.jobs()[0].weight, 2.0);
        assert_eq!(forest.jobs()[0].ptime, 3.0);
        assert!(!forest.has_dummy_root());
    }

    #[test]
    fn two_lines_at_source_need_dummy_root() {
        let net = Network::<f64>::parse(
            "node s 0 source\nnode a 1\nnode b 1\nedge la s a damaged 1\nedge lb s b damaged 2\n",
        )
        .unwrap();
        let forest = build_precedence(&contract(&net));
        assert_eq!(forest.roots(), &[0, 1]);
        assert!(forest.has_dummy_root());
    }

    #[test]
    fn rejects_cycles_and_bad_times() {
        let job = |parent| Job { id: "x".into(), weight: 1.0, ptime: 1.0, parent };
        assert!(matches!(
            PrecedenceForest::new(vec![job(Some(1)), job(Some(0))]),
            Err(ForestError::Cycle { .. })
        ));
        assert!(matches!(
            PrecedenceForest::new(vec![job(Some(4))]),
            Err(ForestError::ParentOutOfRange { job: 0, parent: 4 })
        ));
        let zero = Job { ptime: 0.0, ..job(None) };
        assert!(matches!(
            PrecedenceForest::new(vec![zero]),
            Err(ForestError::NonpositiveTime { job: 0 })
        ));
    }

    #[test]
    fn ancestors_and_path_max() {
        let jobs = vec![
            Job { id: "r".into(), weight: 1.0, ptime: 4.0, parent: None },
            Job { id: "a".into(), weight: 1.0, ptime: 2.0, parent: Some(0) },
            Job { id: "b".into(), weight: 1.0, ptime: 7.0, parent: Some(1) },
        ];
        let f = PrecedenceForest::new(jobs).unwrap();
        assert_eq!(f.ancestors(2).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert_eq!(f.path_max_ptime(1), 4.0);
        assert_eq!(f.path_max_ptime(2), 7.0);
        assert_eq!(f.topo_order(), &[0, 1, 2]);
    }
}

//! Optimal sequencing for one crew.
//!
//! Single-crew restoration is `1 | outtree | sum w_j C_j`. The optimum comes
//! from repeatedly merging the group with the largest weight-to-time ratio
//! into the group holding its predecessor. The ratio a group carries when its
//! head is merged away is that head's rho-factor: the best ratio of any
//! subtree rooted at the head.

use std::cmp::Ordering;

use crate::precedence::PrecedenceForest;
use crate::scalar::{cmp_ratio, Scalar};

/// Weight and time of a subtree; compared as the ratio `weight / time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPair<T> {
    pub weight: T,
    pub time: T,
}

impl<T: Scalar> RatioPair<T> {
    pub fn value(&self) -> T {
        self.weight / self.time
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        cmp_ratio(self.weight, self.time, other.weight, other.time).unwrap_or(Ordering::Equal)
    }
}

/// Rho-factor of every job.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoFactors<T> {
    pub factors: Vec<RatioPair<T>>,
}

impl<T: Scalar> RhoFactors<T> {
    pub fn value(&self, job: usize) -> T {
        self.factors[job].value()
    }

    /// True when `a` beats `b`: larger rho, then smaller job index.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        match self.factors[a].compare(&self.factors[b]) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => a < b,
        }
    }
}

/// Result of the merge procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome<T> {
    pub sequence: Vec<usize>,
    pub rho: RhoFactors<T>,
    pub merges: usize,
}

#[derive(Debug, Clone)]
struct Group<T> {
    ratio: RatioPair<T>,
    // last job of the group's chain
    last: usize,
    active: bool,
}

/// Runs the merge procedure. A virtual root (index `n`, zero weight and time)
/// sits above every tree root and is never selected, so it ends up first.
pub fn merge_groups<T: Scalar>(forest: &PrecedenceForest<T>) -> MergeOutcome<T> {
    let n = forest.len();
    let root = n;
    let jobs = forest.jobs();

    let mut groups: Vec<Group<T>> = (0..=n)
        .map(|j| Group {
            ratio: if j == root {
                RatioPair { weight: T::zero(), time: T::zero() }
            } else {
                RatioPair { weight: jobs[j].weight, time: jobs[j].ptime }
            },
            last: j,
            active: j != root,
        })
        .collect();
    let mut next = vec![usize::MAX; n + 1];
    let mut owner: Vec<usize> = (0..=n).collect();
    let mut rho = vec![RatioPair { weight: T::zero(), time: T::one() }; n];
    let mut merges = 0;

    for _ in 0..n {
        let mut best: Option<usize> = None;
        for g in 0..n {
            if !groups[g].active {
                continue;
            }
            best = match best {
                None => Some(g),
                Some(b) => match groups[g].ratio.compare(&groups[b].ratio) {
                    Ordering::Greater => Some(g),
                    // scanning in index order keeps the lowest head on ties
                    _ => Some(b),
                },
            };
        }
        let j = best.expect("an unmerged group remains");
        let pred = forest.parent(j).unwrap_or(root);
        let i = find(&mut owner, pred);

        rho[j] = groups[j].ratio;
        groups[j].active = false;
        let (gj_ratio, gj_last) = (groups[j].ratio, groups[j].last);
        let gi = &mut groups[i];
        gi.ratio.weight += gj_ratio.weight;
        gi.ratio.time += gj_ratio.time;
        next[gi.last] = j;
        gi.last = gj_last;
        owner[j] = i;
        merges += 1;
    }

    let mut sequence = Vec::with_capacity(n);
    let mut cursor = next[root];
    while cursor != usize::MAX {
        sequence.push(cursor);
        cursor = next[cursor];
    }
    MergeOutcome {
        sequence,
        rho: RhoFactors { factors: rho },
        merges,
    }
}

fn find(owner: &mut [usize], mut x: usize) -> usize {
    while owner[x] != x {
        owner[x] = owner[owner[x]];
        x = owner[x];
    }
    x
}

/// Optimal single-crew repair order.
pub fn optimal_single_sequence<T: Scalar>(forest: &PrecedenceForest<T>) -> Vec<usize> {
    merge_groups(forest).sequence
}

pub fn rho_factors<T: Scalar>(forest: &PrecedenceForest<T>) -> RhoFactors<T> {
    merge_groups(forest).rho
}

/// Greedy rho dispatch for one crew: among lines whose parent is already
/// done, take the largest rho (lowest index on ties).
pub fn dispatch_single<T: Scalar>(forest: &PrecedenceForest<T>) -> Vec<usize> {
    dispatch_single_with(forest, &rho_factors(forest))
}

pub fn dispatch_single_with<T: Scalar>(forest: &PrecedenceForest<T>, rho: &RhoFactors<T>) -> Vec<usize> {
    let mut candidates: Vec<usize> = forest.roots().to_vec();
    let mut sequence = Vec::with_capacity(forest.len());
    while !candidates.is_empty() {
        let mut best = 0;
        for k in 1..candidates.len() {
            if rho.prefers(candidates[k], candidates[best]) {
                best = k;
            }
        }
        let j = candidates.swap_remove(best);
        sequence.push(j);
        candidates.extend_from_slice(forest.children(j));
    }
    sequence
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precedence::Job;
    use crate::scalar::Rational;
    use crate::schedule::{energization_times, harm, list_schedule};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn job(id: &str, w: Rational, p: i64, parent: Option<usize>) -> Job<Rational> {
        Job { id: id.into(), weight: w, ptime: Rational::from_integer(p), parent }
    }

    fn seq_harm(f: &PrecedenceForest<Rational>, seq: &[usize]) -> Rational {
        let s = list_schedule(f, seq, 1).unwrap();
        harm(f, &energization_times(f, &s.completions(f.len()).unwrap()).unwrap())
    }

    #[test]
    fn star_example() {
        let f = PrecedenceForest::new(vec![
            job("r", q(1, 1), 1, None),
            job("a", q(3, 1), 1, Some(0)),
            job("b", q(1, 1), 2, Some(0)),
        ])
        .unwrap();
        let seq = optimal_single_sequence(&f);
        assert_eq!(seq, vec![0, 1, 2]);
        assert_eq!(seq_harm(&f, &seq), q(11, 1));
        assert_eq!(dispatch_single(&f), seq);
    }

    #[test]
    fn chain_example_and_rho() {
        let f = PrecedenceForest::new(vec![job("r", q(1, 1), 2, None), job("c", q(9, 1), 1, Some(0))]).unwrap();
        let out = merge_groups(&f);
        assert_eq!(out.sequence, vec![0, 1]);
        assert_eq!(out.rho.value(1), q(9, 1));
        assert_eq!(out.rho.value(0), q(10, 3));
        // one merge per job: the virtual root counts as the tree root
        assert_eq!(out.merges, 2);
        assert_eq!(dispatch_single(&f), vec![0, 1]);
    }

    #[test]
    fn singleton_rho_is_smith_ratio() {
        let f = PrecedenceForest::new(vec![job("x", q(3, 4), 5, None)]).unwrap();
        assert_eq!(rho_factors(&f).value(0), q(3, 20));
        assert_eq!(optimal_single_sequence(&f), vec![0]);
    }

    #[test]
    fn equal_ratio_children_take_lowest_index_first() {
        let f = PrecedenceForest::new(vec![
            job("r", q(1, 1), 1, None),
            job("a", q(2, 1), 2, Some(0)),
            job("b", q(1, 1), 1, Some(0)),
        ])
        .unwrap();
        let seq = optimal_single_sequence(&f);
        assert_eq!(seq, vec![0, 1, 2]);
        assert_eq!(seq_harm(&f, &seq), seq_harm(&f, &[0, 2, 1]));
    }

    #[test]
    fn forest_with_dummy_root_is_stripped() {
        let f = PrecedenceForest::new(vec![
            job("a", q(1, 1), 4, None),
            job("b", q(5, 1), 1, None),
            job("c", q(1, 1), 1, Some(0)),
        ])
        .unwrap();
        let out = merge_groups(&f);
        assert_eq!(out.sequence.len(), 3);
        assert_eq!(out.sequence[0], 1);
        assert_eq!(out.merges, 3);
    }

    #[test]
    fn empty_forest() {
        let f = PrecedenceForest::<f64>::new(vec![]).unwrap();
        assert!(optimal_single_sequence(&f).is_empty());
        assert!(dispatch_single(&f).is_empty());
    }
}

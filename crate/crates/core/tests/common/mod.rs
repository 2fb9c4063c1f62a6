//! Instance generators and brute-force oracles shared by the integration
//! tests. Nothing here calls the algorithms under test.

#![allow(dead_code)]

pub mod lp_reader;

use gridmend_core::{Job, LineStatus, Network, PrecedenceForest, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random forest: parent of job `j` is `None` or an earlier job.
pub fn random_parents<R: Rng>(rng: &mut R, n: usize, root_prob: f64) -> Vec<Option<usize>> {
    (0..n)
        .map(|j| {
            if j == 0 || rng.random_bool(root_prob) {
                None
            } else {
                Some(rng.random_range(0..j))
            }
        })
        .collect()
}

pub fn forest_from<T: gridmend_core::Scalar>(parents: &[Option<usize>], weights: &[T], ptimes: &[T]) -> PrecedenceForest<T> {
    let jobs = parents
        .iter()
        .enumerate()
        .map(|(j, &parent)| Job { id: format!("j{j}"), weight: weights[j], ptime: ptimes[j], parent })
        .collect();
    PrecedenceForest::new(jobs).expect("parents point backwards")
}

/// Float forest: weights uniform on (0, 1] with one job at 5, integer
/// repair times 1..=10.
pub fn random_forest_f64<R: Rng>(rng: &mut R, max_jobs: usize) -> PrecedenceForest<f64> {
    let n = rng.random_range(1..=max_jobs);
    let parents = random_parents(rng, n, 0.2);
    let mut weights: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let special = rng.random_range(0..n);
    weights[special] = 5.0;
    let ptimes: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(1u32..=10))).collect();
    forest_from(&parents, &weights, &ptimes)
}

/// Float forest with small integer data, which makes ties common.
pub fn random_forest_ties<R: Rng>(rng: &mut R, max_jobs: usize) -> PrecedenceForest<f64> {
    let n = rng.random_range(1..=max_jobs);
    let parents = random_parents(rng, n, 0.2);
    let weights: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u32..=3))).collect();
    let ptimes: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(1u32..=3))).collect();
    forest_from(&parents, &weights, &ptimes)
}

/// Integer ancestor-or-self bitmasks.
pub fn ancestor_masks(parents: &[Option<usize>]) -> Vec<u32> {
    let mut masks = vec![0u32; parents.len()];
    for j in 0..parents.len() {
        let mut m = 1u32 << j;
        let mut cur = parents[j];
        while let Some(p) = cur {
            m |= 1 << p;
            cur = parents[p];
        }
        masks[j] = m;
    }
    masks
}

/// Energization times from completions by walking parent pointers.
pub fn energization_oracle(parents: &[Option<usize>], completions: &[f64]) -> Vec<f64> {
    (0..parents.len())
        .map(|j| {
            let mut e = completions[j];
            let mut cur = parents[j];
            while let Some(p) = cur {
                e = e.max(completions[p]);
                cur = parents[p];
            }
            e
        })
        .collect()
}

/// Minimum single-crew harm over all `n!` orders, in scaled integers:
/// weights are given as integer numerators over a common denominator.
pub fn single_crew_optimum(parents: &[Option<usize>], weight_num: &[i64], ptimes: &[i64]) -> i128 {
    let n = parents.len();
    let masks = ancestor_masks(parents);
    let mut best = i128::MAX;
    let mut order = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        n: usize,
        masks: &[u32],
        w: &[i64],
        p: &[i64],
        placed: u32,
        time: i64,
        acc: i128,
        order: &mut Vec<usize>,
        best: &mut i128,
    ) {
        if order.len() == n {
            *best = (*best).min(acc);
            return;
        }
        for k in 0..n {
            if placed & (1 << k) != 0 {
                continue;
            }
            let now = placed | (1 << k);
            let t = time + p[k];
            // jobs whose whole ancestor chain is in place once k is: they
            // energize exactly now
            let mut add = 0i128;
            for j in 0..n {
                if masks[j] & (1 << k) != 0 && masks[j] & !now == 0 {
                    add += i128::from(w[j]) * i128::from(t);
                }
            }
            order.push(k);
            dfs(n, masks, w, p, now, t, acc + add, order, best);
            order.pop();
        }
    }
    dfs(n, &masks, weight_num, ptimes, 0, 0, 0, &mut order, &mut best);
    best
}

/// Random rational forest for exact single-crew checks: weights `k/1000`
/// with one job at 5, repair times 1..=10. Returns the forest and the
/// integer data (weights scaled by 1000).
pub fn random_rational_forest<R: Rng>(rng: &mut R, max_jobs: usize) -> (PrecedenceForest<Rational>, Vec<Option<usize>>, Vec<i64>, Vec<i64>) {
    let n = rng.random_range(1..=max_jobs);
    let parents = random_parents(rng, n, 0.2);
    let mut w: Vec<i64> = (0..n).map(|_| rng.random_range(1..=1000)).collect();
    let special = rng.random_range(0..n);
    w[special] = 5000;
    let p: Vec<i64> = (0..n).map(|_| rng.random_range(1..=10)).collect();
    let weights: Vec<Rational> = w.iter().map(|&k| Rational::new(k, 1000)).collect();
    let ptimes: Vec<Rational> = p.iter().map(|&k| Rational::from_integer(k)).collect();
    (forest_from(&parents, &weights, &ptimes), parents, w, p)
}

/// Best ratio `w(S) / p(S)` over subtrees `S` rooted at `job` (connected,
/// closed under parent within the subtree), by enumerating subsets of the
/// job's descendants.
pub fn rho_oracle(parents: &[Option<usize>], weights: &[f64], ptimes: &[f64], job: usize) -> f64 {
    let n = parents.len();
    let masks = ancestor_masks(parents);
    let desc: Vec<usize> = (0..n).filter(|&j| j != job && masks[j] & (1 << job) != 0).collect();
    let mut best = f64::NEG_INFINITY;
    for bits in 0u32..(1 << desc.len()) {
        let mut members = 1u32 << job;
        for (i, &d) in desc.iter().enumerate() {
            if bits & (1 << i) != 0 {
                members |= 1 << d;
            }
        }
        // rooted subtree: every member's parent is a member, except the root
        let closed = (0..n).filter(|&j| members & (1 << j) != 0 && j != job).all(|j| {
            let p = parents[j].expect("descendant has a parent");
            members & (1 << p) != 0
        });
        if !closed {
            continue;
        }
        let (mut w, mut p) = (0.0, 0.0);
        for j in 0..n {
            if members & (1 << j) != 0 {
                w += weights[j];
                p += ptimes[j];
            }
        }
        best = best.max(w / p);
    }
    best
}

/// Largest violation of the set inequalities over all nonempty subsets.
pub fn max_subset_violation(e: &[f64], p: &[f64], crews: usize) -> (f64, u32) {
    let n = e.len();
    let mut best = (f64::NEG_INFINITY, 0);
    for set in 1u32..(1 << n) {
        let (mut sum, mut sq, mut lhs) = (0.0, 0.0, 0.0);
        for j in 0..n {
            if set & (1 << j) != 0 {
                sum += p[j];
                sq += p[j] * p[j];
                lhs += p[j] * e[j];
            }
        }
        let v = sum * sum / (2.0 * crews as f64) + 0.5 * sq - lhs;
        if v > best.0 {
            best = (v, set);
        }
    }
    best
}

/// Optimal m-crew harm by brute force over every assignment of jobs to
/// crews and every order within each crew, jobs back to back.
pub fn multi_crew_optimum(parents: &[Option<usize>], weights: &[f64], ptimes: &[f64], crews: usize) -> f64 {
    let n = parents.len();
    let mut best = f64::INFINITY;
    let mut assign = vec![0usize; n];
    loop {
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); crews];
        for j in 0..n {
            lists[assign[j]].push(j);
        }
        best = best.min(best_orders(parents, weights, ptimes, &mut lists, 0, &mut vec![0.0; n]));
        // next assignment in base `crews`
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            assign[k] += 1;
            if assign[k] < crews {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

fn best_orders(
    parents: &[Option<usize>],
    weights: &[f64],
    ptimes: &[f64],
    lists: &mut [Vec<usize>],
    crew: usize,
    completions: &mut Vec<f64>,
) -> f64 {
    if crew == lists.len() {
        let e = energization_oracle(parents, completions);
        return e.iter().zip(weights).map(|(e, w)| e * w).sum();
    }
    let mut best = f64::INFINITY;
    let mut list = lists[crew].clone();
    permute(&mut list, 0, &mut |perm| {
        let mut t = 0.0;
        for &j in perm {
            t += ptimes[j];
            completions[j] = t;
        }
        best = best.min(best_orders(parents, weights, ptimes, lists, crew + 1, completions));
    });
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Small random radial network with integer weights 1..=5 and `damaged`
/// damaged lines of integer repair time 1..=3.
pub fn tiny_network<R: Rng>(rng: &mut R, nodes: usize, damaged: usize) -> Network<f64> {
    let mut text = String::from("node n0 0 source\n");
    for i in 1..nodes {
        text += &format!("node n{i} {}\n", rng.random_range(1..=5));
    }
    let lines = nodes - 1;
    let chosen = rand::seq::index::sample(rng, lines, damaged.min(lines)).into_vec();
    for i in 1..nodes {
        let parent = rng.random_range(0..i);
        if chosen.contains(&(i - 1)) {
            text += &format!("edge l{i} n{parent} n{i} damaged {}\n", rng.random_range(1..=3));
        } else {
            text += &format!("edge l{i} n{parent} n{i} intact\n");
        }
    }
    Network::parse(&text).expect("generated network is valid")
}

pub fn statuses_damaged<T: Copy>(n: usize, p: T) -> Vec<LineStatus<T>> {
    (0..n).map(|_| LineStatus::Damaged { repair_time: p }).collect()
}

//! Contraction of intact-connected node sets into supernodes.

use crate::network::Network;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Supernode<T> {
    /// Smallest member node id.
    pub id: String,
    /// Member node indices, ordered by node id.
    pub members: Vec<usize>,
    pub weight: T,
}

/// A damaged line oriented away from the source supernode.
#[derive(Debug, Clone, PartialEq)]
pub struct DamagedEdge<T> {
    pub line: usize,
    pub id: String,
    pub head: usize,
    pub tail: usize,
    pub repair_time: T,
}

/// Supernodes are maximal intact-connected components; edges are the
/// damaged lines, in network order.
#[derive(Debug, Clone, PartialEq)]
pub struct DamagedComponentGraph<T> {
    pub supernodes: Vec<Supernode<T>>,
    pub edges: Vec<DamagedEdge<T>>,
    pub source: usize,
    /// Supernode of every network node.
    pub node_supernode: Vec<usize>,
}

pub fn contract<T: Scalar>(net: &Network<T>) -> DamagedComponentGraph<T> {
    let nodes = net.nodes();
    let adj = net.adjacency();
    let lines = net.lines();

    let mut component = vec![usize::MAX; nodes.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..nodes.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let label = groups.len();
        let mut members = vec![start];
        component[start] = label;
        let mut cursor = 0;
        while cursor < members.len() {
            let n = members[cursor];
            cursor += 1;
            for &(next, line) in &adj[n] {
                if !lines[line].is_damaged() && component[next] == usize::MAX {
                    component[next] = label;
                    members.push(next);
                }
            }
        }
        members.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
        groups.push(members);
    }

    // Deterministic numbering: by smallest member id.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| nodes[groups[a][0]].id.cmp(&nodes[groups[b][0]].id));
    let mut relabel = vec![0; groups.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let node_supernode: Vec<usize> = component.iter().map(|&c| relabel[c]).collect();
    let supernodes: Vec<Supernode<T>> = order
        .iter()
        .map(|&old| {
            let members = groups[old].clone();
            let weight = members.iter().fold(T::zero(), |acc, &n| acc + nodes[n].weight);
            Supernode {
                id: nodes[members[0]].id.clone(),
                members,
                weight,
            }
        })
        .collect();

    let orientation = net.orientation();
    let edges = lines
        .iter()
        .enumerate()
        .filter_map(|(index, line)| {
            let repair_time = line.repair_time()?;
            let (from, to) = orientation[index];
            Some(DamagedEdge {
                line: index,
                id: line.id.clone(),
                head: node_supernode[from],
                tail: node_supernode[to],
                repair_time,
            })
        })
        .collect();

    DamagedComponentGraph {
        supernodes,
        edges,
        source: node_supernode[net.source()],
        node_supernode,
    }
}

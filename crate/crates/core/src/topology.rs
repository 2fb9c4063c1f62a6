//! Bundled base topologies for instance generation.

use rand::Rng;

use crate::network::{LineStatus, Network, NetworkBuilder, NetworkError};
use crate::scalar::Scalar;

/// Undirected radial topology without weights or damage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub nodes: Vec<String>,
    pub source: usize,
    /// `(line id, u, v)` with node indices.
    pub lines: Vec<(String, usize, usize)>,
}

const IEEE13_NODES: [&str; 13] = [
    "650", "632", "633", "634", "645", "646", "671", "692", "675", "684", "611", "652", "680",
];

const IEEE13_LINES: [(&str, &str); 12] = [
    ("650", "632"),
    ("632", "633"),
    ("633", "634"),
    ("632", "645"),
    ("645", "646"),
    ("632", "671"),
    ("671", "692"),
    ("692", "675"),
    ("671", "684"),
    ("684", "611"),
    ("684", "652"),
    ("671", "680"),
];

impl Topology {
    /// Connectivity of the IEEE 13-node test feeder, fed from node 650.
    /// Line ids join the endpoint ids with `_`, e.g. `650_632`.
    pub fn ieee13() -> Self {
        let nodes: Vec<String> = IEEE13_NODES.iter().map(|s| s.to_string()).collect();
        let pos = |id: &str| IEEE13_NODES.iter().position(|n| *n == id).unwrap();
        let lines = IEEE13_LINES
            .iter()
            .map(|&(u, v)| (format!("{u}_{v}"), pos(u), pos(v)))
            .collect();
        Self {
            nodes,
            source: 0,
            lines,
        }
    }

    /// Random feeder-like tree on `nodes` nodes: each new node extends the
    /// previous one with probability 1/2 and otherwise attaches to a uniformly
    /// chosen earlier node. Ids are zero-padded (`n007`, `l007`).
    pub fn random_radial<R: Rng>(nodes: usize, rng: &mut R) -> Self {
        let nodes = nodes.max(1);
        let width = (nodes.max(2) - 1).to_string().len();
        let names = (0..nodes).map(|i| format!("n{i:0width$}")).collect();
        let lines = (1..nodes)
            .map(|i| {
                let parent = if rng.random_bool(0.5) {
                    i - 1
                } else {
                    rng.random_range(0..i)
                };
                (format!("l{i:0width$}"), parent, i)
            })
            .collect();
        Self {
            nodes: names,
            source: 0,
            lines,
        }
    }

    pub fn from_network<T: Scalar>(net: &Network<T>) -> Self {
        Self {
            nodes: net.nodes().iter().map(|n| n.id.clone()).collect(),
            source: net.source(),
            lines: net.lines().iter().map(|l| (l.id.clone(), l.u, l.v)).collect(),
        }
    }

    /// Builds a network from per-node weights and per-line statuses.
    pub fn to_network<T: Scalar>(
        &self,
        weights: &[T],
        statuses: &[LineStatus<T>],
    ) -> Result<Network<T>, NetworkError> {
        assert_eq!(weights.len(), self.nodes.len());
        assert_eq!(statuses.len(), self.lines.len());
        let mut builder = NetworkBuilder::new();
        let mut line_no = 0;
        for (i, id) in self.nodes.iter().enumerate() {
            line_no += 1;
            builder.node(id, weights[i], i == self.source, line_no)?;
        }
        for ((id, u, v), status) in self.lines.iter().zip(statuses) {
            line_no += 1;
            builder.edge(id, &self.nodes[*u], &self.nodes[*v], *status, line_no)?;
        }
        builder.finish(line_no)
    }
}

/// IEEE 13-node feeder with unit weights, the listed lines damaged with unit
/// repair time and everything else intact.
pub fn ieee13_network(damaged: &[&str]) -> Network<f64> {
    let topo = Topology::ieee13();
    let weights = vec![1.0; topo.nodes.len()];
    let statuses: Vec<LineStatus<f64>> = topo
        .lines
        .iter()
        .map(|(id, _, _)| {
            if damaged.contains(&id.as_str()) {
                LineStatus::Damaged { repair_time: 1.0 }
            } else {
                LineStatus::Intact
            }
        })
        .collect();
    topo.to_network(&weights, &statuses).expect("bundled topology is radial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ieee13_is_radial() {
        let net = ieee13_network(&[]);
        assert_eq!(net.nodes().len(), 13);
        assert_eq!(net.lines().len(), 12);
        assert_eq!(net.nodes()[net.source()].id, "650");
    }

    #[test]
    fn random_radial_is_a_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 10, 300] {
            let topo = Topology::random_radial(n, &mut rng);
            assert_eq!(topo.lines.len(), n - 1);
            let net = topo
                .to_network(&vec![1.0; n], &vec![LineStatus::Intact; n - 1])
                .unwrap();
            assert_eq!(net.nodes().len(), n);
        }
    }
}

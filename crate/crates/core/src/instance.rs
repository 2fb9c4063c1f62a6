use crate::contract::{contract, DamagedComponentGraph};
use crate::network::{Network, NetworkError};
use crate::precedence::{build_precedence, PrecedenceForest};
use crate::scalar::Scalar;

/// A network with its contraction and precedence forest.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    pub network: Network<T>,
    pub graph: DamagedComponentGraph<T>,
    pub forest: PrecedenceForest<T>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(network: Network<T>) -> Self {
        let graph = contract(&network);
        let forest = build_precedence(&graph);
        Self { network, graph, forest }
    }

    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        Network::parse(text).map(Self::new)
    }
}

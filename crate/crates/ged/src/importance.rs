//! Per-node importance measures used to weight the inclusion measure.
//!
//! Two measures are provided: plain degree and social position, an
//! iterative measure where a node's value accrues from its in-neighbors'
//! values weighted by their commitment (share of outgoing activity)
//! toward it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::temporal::{NodeId, SocialNetwork};

#[derive(Debug, Error)]
pub enum ImportanceError {
    #[error("social position did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

/// Importance values for every node of one frame's snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceMap {
    pub frame_index: usize,
    values: BTreeMap<NodeId, f64>,
}

impl ImportanceMap {
    pub fn new(frame_index: usize, values: BTreeMap<NodeId, f64>) -> Self {
        debug_assert!(values.values().all(|v| *v >= 0.0));
        ImportanceMap {
            frame_index,
            values,
        }
    }

    /// Importance of `node`; nodes absent from the map count as 0.
    pub fn get(&self, node: NodeId) -> f64 {
        self.values.get(&node).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.values.iter().map(|(&n, &v)| (n, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Degree importance: distinct in-neighbors plus distinct out-neighbors.
pub fn degree_importance(net: &SocialNetwork, frame_index: usize) -> ImportanceMap {
    let mut degree: BTreeMap<NodeId, usize> = net.nodes().map(|n| (n, 0)).collect();
    for (s, t, _w) in net.edges() {
        *degree.get_mut(&s).unwrap() += 1;
        *degree.get_mut(&t).unwrap() += 1;
    }
    ImportanceMap::new(
        frame_index,
        degree.into_iter().map(|(n, d)| (n, d as f64)).collect(),
    )
}

/// Social position: fixed point of
/// `SP(x) = (1 - eps) + eps * sum over in-edges (y -> x) of SP(y) * C(y, x)`
/// where the commitment `C(y, x)` is the fraction of y's outgoing weight
/// directed at x. Nodes with no outgoing edges contribute no commitment.
///
/// Iteration runs Jacobi sweeps over a fixed node order and stops when the
/// max absolute change drops to `tol`.
pub fn social_position(
    net: &SocialNetwork,
    frame_index: usize,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ImportanceMap, ImportanceError> {
    assert!((0.0..1.0).contains(&epsilon), "epsilon must be in [0, 1)");
    assert!(tol > 0.0, "tol must be positive");
    let nodes: Vec<NodeId> = net.nodes().collect();
    if nodes.is_empty() {
        return Ok(ImportanceMap::new(frame_index, BTreeMap::new()));
    }
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut out_weight = vec![0.0f64; nodes.len()];
    for (s, _t, w) in net.edges() {
        out_weight[index[&s]] += w as f64;
    }
    // incoming commitments per node: (source index, C(source, node))
    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    for (s, t, w) in net.edges() {
        let si = index[&s];
        incoming[index[&t]].push((si, w as f64 / out_weight[si]));
    }
    let mut sp = vec![1.0f64; nodes.len()];
    let mut next = vec![0.0f64; nodes.len()];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        for (i, inc) in incoming.iter().enumerate() {
            let acc: f64 = inc.iter().map(|&(j, c)| sp[j] * c).sum();
            next[i] = (1.0 - epsilon) + epsilon * acc;
        }
        residual = sp
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut sp, &mut next);
        if residual <= tol {
            let values = nodes.iter().zip(&sp).map(|(&n, &v)| (n, v)).collect();
            return Ok(ImportanceMap::new(frame_index, values));
        }
    }
    Err(ImportanceError::NonConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Importance measure selector for the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", tag = "measure")]
pub enum ImportanceKind {
    Degree,
    SocialPosition { epsilon: f64 },
}

impl ImportanceKind {
    pub fn compute(
        &self,
        net: &SocialNetwork,
        frame_index: usize,
        tol: f64,
        max_iter: usize,
    ) -> Result<ImportanceMap, ImportanceError> {
        match *self {
            ImportanceKind::Degree => Ok(degree_importance(net, frame_index)),
            ImportanceKind::SocialPosition { epsilon } => {
                social_position(net, frame_index, epsilon, tol, max_iter)
            }
        }
    }
}

/// Uniform importance (1.0 for a given node set); used by tests and as the
/// degenerate fallback semantics.
pub fn uniform_importance(frame_index: usize, nodes: &BTreeSet<NodeId>) -> ImportanceMap {
    ImportanceMap::new(frame_index, nodes.iter().map(|&n| (n, 1.0)).collect())
}

pub const DEFAULT_EPSILON: f64 = 0.9;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_star() {
        let mut net = SocialNetwork::new();
        for spoke in 2..=5 {
            net.add_interaction(1, spoke);
        }
        let ni = degree_importance(&net, 1);
        assert_eq!(ni.get(1), 4.0);
        for spoke in 2..=5 {
            assert_eq!(ni.get(spoke), 1.0);
        }
    }

    #[test]
    fn degree_mutual_pair() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2);
        net.add_interaction(2, 1);
        let ni = degree_importance(&net, 1);
        assert_eq!(ni.get(1), 2.0);
        assert_eq!(ni.get(2), 2.0);
    }

    #[test]
    fn missing_node_counts_as_zero() {
        let ni = degree_importance(&SocialNetwork::new(), 1);
        assert_eq!(ni.get(42), 0.0);
    }

    #[test]
    fn sp_epsilon_zero_is_constant_one() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2);
        net.add_interaction(2, 3);
        let ni = social_position(&net, 1, 0.0, 1e-9, 200).unwrap();
        for n in 1..=3 {
            assert!((ni.get(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sp_mutual_pair_symmetric_fixed_point() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2);
        net.add_interaction(2, 1);
        let ni = social_position(&net, 1, 0.9, 1e-9, 200).unwrap();
        assert!((ni.get(1) - 1.0).abs() < 1e-8);
        assert!((ni.get(2) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sp_chain_values() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2); // a -> b
        net.add_interaction(2, 3); // b -> c
        let ni = social_position(&net, 1, 0.9, 1e-9, 200).unwrap();
        assert!((ni.get(1) - 0.1).abs() < 1e-9);
        assert!((ni.get(2) - 0.19).abs() < 1e-9);
        assert!((ni.get(3) - 0.271).abs() < 1e-9);
    }

    #[test]
    fn sp_values_at_least_one_minus_epsilon() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2);
        net.add_interaction(3, 2);
        net.add_interaction(2, 1);
        let eps = 0.85;
        let ni = social_position(&net, 1, eps, 1e-9, 200).unwrap();
        for (_, v) in ni.values() {
            assert!(v >= 1.0 - eps - 1e-12);
        }
    }

    #[test]
    fn sp_non_convergence_reports_residual() {
        let mut net = SocialNetwork::new();
        net.add_interaction(1, 2);
        net.add_interaction(2, 1);
        net.add_interaction(3, 1);
        let err = social_position(&net, 1, 0.99, 1e-15, 2).unwrap_err();
        match err {
            ImportanceError::NonConvergence { residual, .. } => assert!(residual > 1e-15),
        }
    }
}

//! Clique percolation communities (k-clique communities) on frame snapshots.
//!
//! A community is the union of all k-cliques reachable from each other
//! through adjacent k-cliques, where two k-cliques are adjacent when they
//! share k-1 nodes. Communities may overlap. The implementation enumerates
//! maximal cliques with pivoted Bron-Kerbosch and percolates over maximal
//! cliques of size >= k (two such cliques lie in the same community iff
//! they share at least k-1 nodes, which is equivalent to percolating over
//! all k-cliques directly).

use std::collections::{BTreeMap, BTreeSet};

use crate::temporal::{NodeId, SocialNetwork};

/// A community extracted from one frame's snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub frame_index: usize,
    /// 1-based id, unique within the frame.
    pub group_id: usize,
    pub members: BTreeSet<NodeId>,
}

impl Group {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Undirected simple graph used as CPM input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl UndirectedGraph {
    pub fn new() -> Self {
        UndirectedGraph::default()
    }

    pub fn add_node(&mut self, node: NodeId) {
        self.adj.entry(node).or_default();
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) {
        if a == b {
            return;
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, node: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.adj.get(&node)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(&a).map_or(false, |ns| ns.contains(&b))
    }
}

/// Project a directed snapshot onto an undirected simple graph:
/// {x,y} is an edge iff (x,y) or (y,x) is.
pub fn undirected_projection(net: &SocialNetwork) -> UndirectedGraph {
    let mut g = UndirectedGraph::new();
    for node in net.nodes() {
        g.add_node(node);
    }
    for (s, t, _w) in net.edges() {
        g.add_edge(s, t);
    }
    g
}

/// Enumerate all maximal cliques (pivoted Bron-Kerbosch), returned in a
/// canonical order (sorted member vectors, lexicographic).
pub fn enumerate_maximal_cliques(graph: &UndirectedGraph) -> Vec<Vec<NodeId>> {
    let mut cliques = Vec::new();
    let p: BTreeSet<NodeId> = graph.nodes().collect();
    bron_kerbosch(graph, &mut Vec::new(), p, BTreeSet::new(), &mut cliques);
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort();
    cliques
}

fn bron_kerbosch(
    graph: &UndirectedGraph,
    r: &mut Vec<NodeId>,
    mut p: BTreeSet<NodeId>,
    mut x: BTreeSet<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot: vertex of P ∪ X with most neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| {
            graph
                .neighbors(u)
                .map_or(0, |ns| ns.iter().filter(|v| p.contains(v)).count())
        })
        .unwrap();
    let pivot_neighbors = graph.neighbors(pivot).cloned().unwrap_or_default();
    let candidates: Vec<NodeId> = p
        .iter()
        .copied()
        .filter(|v| !pivot_neighbors.contains(v))
        .collect();
    for v in candidates {
        let neighbors = graph.neighbors(v).cloned().unwrap_or_default();
        r.push(v);
        bron_kerbosch(
            graph,
            r,
            p.intersection(&neighbors).copied().collect(),
            x.intersection(&neighbors).copied().collect(),
            out,
        );
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

/// k-clique communities of `graph` for k >= 3, sorted by smallest member id.
pub fn k_clique_communities(graph: &UndirectedGraph, k: usize) -> Vec<BTreeSet<NodeId>> {
    assert!(k >= 3, "clique percolation requires k >= 3");
    let cliques: Vec<Vec<NodeId>> = enumerate_maximal_cliques(graph)
        .into_iter()
        .filter(|c| c.len() >= k)
        .collect();
    if cliques.is_empty() {
        return Vec::new();
    }
    // union-find over maximal cliques; adjacent when sharing >= k-1 nodes
    let mut parent: Vec<usize> = (0..cliques.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..cliques.len() {
        for j in (i + 1)..cliques.len() {
            if shared_at_least(&cliques[i], &cliques[j], k - 1) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut communities: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    for i in 0..cliques.len() {
        let root = find(&mut parent, i);
        communities
            .entry(root)
            .or_default()
            .extend(cliques[i].iter().copied());
    }
    let mut result: Vec<BTreeSet<NodeId>> = communities.into_values().collect();
    result.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()).then_with(|| a.cmp(b)));
    result
}

/// Count-limited sorted intersection test.
fn shared_at_least(a: &[NodeId], b: &[NodeId], min: usize) -> bool {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                if shared >= min {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// Run CPM on a frame snapshot and wrap the communities as [`Group`]s.
pub fn detect_groups(net: &SocialNetwork, frame_index: usize, k: usize) -> Vec<Group> {
    let graph = undirected_projection(net);
    k_clique_communities(&graph, k)
        .into_iter()
        .enumerate()
        .map(|(i, members)| Group {
            frame_index,
            group_id: i + 1,
            members,
        })
        .collect()
}

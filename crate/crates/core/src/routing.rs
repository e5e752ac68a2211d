//! Shortest-path machinery over the backbone topology.
//!
//! Distances come from either a single-source search ([`dijkstra`]) or the
//! all-pairs relaxation ([`floyd_warshall`]); [`brute_force_distances`] is a
//! deliberately naive reference used to cross-check both. All three break
//! ties between equal-length paths the same way, so reconstructed routes (and
//! therefore link loads downstream) are reproducible and algorithm-agnostic:
//! among the valid predecessors of a node, the one with the smallest
//! (distance-from-source, id) pair wins.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::CityId;

/// Undirected link between two cities. The declared orientation is kept for
/// display; identity is the unordered pair, see [`Edge::key`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: CityId,
    pub b: CityId,
    pub length_km: f64,
}

impl Edge {
    pub fn new(a: CityId, b: CityId, length_km: f64) -> Self {
        Edge { a, b, length_km }
    }

    /// Orientation-independent identity of the link.
    pub fn key(&self) -> (CityId, CityId) {
        if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }

    pub fn touches(&self, id: CityId) -> bool {
        self.a == id || self.b == id
    }
}

/// Validated undirected graph with strictly positive edge lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    nodes: Vec<CityId>,
    edges: Vec<Edge>,
    /// Adjacency per node index: (neighbor index, length), ascending neighbor.
    adj: Vec<Vec<(usize, f64)>>,
}

impl Topology {
    /// Builds the graph, rejecting self-loops, duplicate nodes or links,
    /// unknown endpoints and non-positive lengths. A disconnected graph is
    /// accepted; callers can flag it via [`Topology::component_count`].
    pub fn new(mut nodes: Vec<CityId>, edges: Vec<Edge>) -> Result<Self, RoutingError> {
        nodes.sort();
        for pair in nodes.windows(2) {
            if pair[0] == pair[1] {
                return Err(RoutingError::DuplicateNode(pair[0]));
            }
        }
        let index = |id: CityId| nodes.binary_search(&id).ok();
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut seen: Vec<(CityId, CityId)> = Vec::with_capacity(edges.len());
        for e in &edges {
            if e.a == e.b {
                return Err(RoutingError::SelfLoop(e.a));
            }
            if !(e.length_km.is_finite() && e.length_km > 0.0) {
                return Err(RoutingError::InvalidLength {
                    a: e.a,
                    b: e.b,
                    length_km: e.length_km,
                });
            }
            let (ia, ib) = match (index(e.a), index(e.b)) {
                (Some(ia), Some(ib)) => (ia, ib),
                _ => return Err(RoutingError::UnknownEndpoint { a: e.a, b: e.b }),
            };
            if seen.contains(&e.key()) {
                return Err(RoutingError::DuplicateEdge { a: e.a, b: e.b });
            }
            seen.push(e.key());
            adj[ia].push((ib, e.length_km));
            adj[ib].push((ia, e.length_km));
        }
        for list in &mut adj {
            list.sort_by(|x, y| x.0.cmp(&y.0));
        }
        Ok(Topology { nodes, edges, adj })
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> &[CityId] {
        &self.nodes
    }

    /// Edges in the order they were declared.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, id: CityId) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }

    pub fn edge_between(&self, a: CityId, b: CityId) -> Option<&Edge> {
        let key = Edge::new(a, b, 1.0).key();
        self.edges.iter().find(|e| e.key() == key)
    }

    pub fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    fn index_of(&self, id: CityId) -> Option<usize> {
        self.nodes.binary_search(&id).ok()
    }
}

/// Picks the canonical predecessor of every node given final distances from
/// one source: the neighbor that lies on a shortest path and has the smallest
/// (distance, id) pair. The comparison tolerates the tiny float drift two
/// different summation orders of the same path can produce.
fn canonical_prev(topology: &Topology, source: usize, dist: &[Option<f64>]) -> Vec<Option<usize>> {
    let mut prev = vec![None; dist.len()];
    for (j, dj) in dist.iter().enumerate() {
        let dj = match dj {
            Some(d) if j != source => *d,
            _ => continue,
        };
        let tol = 1e-9 * dj.abs().max(1.0);
        let mut best: Option<(f64, usize)> = None;
        for &(u, w) in &topology.adj[j] {
            if let Some(du) = dist[u] {
                if (du + w - dj).abs() <= tol {
                    let better = match best {
                        None => true,
                        Some((bd, bu)) => match du.total_cmp(&bd) {
                            Ordering::Less => true,
                            Ordering::Equal => u < bu,
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        best = Some((du, u));
                    }
                }
            }
        }
        prev[j] = Some(best.expect("reachable node must have a predecessor").1);
    }
    prev
}

fn walk_back(
    order: &[CityId],
    prev_row: &[Option<usize>],
    from: usize,
    to: usize,
) -> Option<Vec<CityId>> {
    let mut chain = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev_row[cur]?;
        chain.push(cur);
        // Positive lengths make predecessor chains strictly shorter, so a
        // chain longer than the node count means the table is corrupt.
        assert!(chain.len() <= order.len(), "predecessor cycle");
    }
    chain.reverse();
    Some(chain.into_iter().map(|i| order[i]).collect())
}

/// Distances and canonical shortest-path tree from one source.
#[derive(Clone, Debug)]
pub struct ShortestPathResult {
    source: CityId,
    order: Vec<CityId>,
    dist: Vec<Option<f64>>,
    prev: Vec<Option<usize>>,
}

impl ShortestPathResult {
    pub fn source(&self) -> CityId {
        self.source
    }

    /// Node ids in ascending order; indexes `distance` and `predecessor`.
    pub fn order(&self) -> &[CityId] {
        &self.order
    }

    /// `None` when the node is unreachable or unknown.
    pub fn distance(&self, to: CityId) -> Option<f64> {
        let i = self.order.iter().position(|c| *c == to)?;
        self.dist[i]
    }

    /// Node right before `to` on the canonical path from the source.
    pub fn predecessor(&self, to: CityId) -> Option<CityId> {
        let i = self.order.iter().position(|c| *c == to)?;
        self.prev[i].map(|p| self.order[p])
    }

    /// Canonical path from the source to `to`, inclusive of both ends.
    pub fn path(&self, to: CityId) -> Result<Vec<CityId>, RoutingError> {
        let j = self
            .order
            .iter()
            .position(|c| *c == to)
            .ok_or(RoutingError::UnknownNode(to))?;
        let i = self.order.iter().position(|c| *c == self.source).unwrap();
        if self.dist[j].is_none() {
            return Err(RoutingError::Unreachable {
                from: self.source,
                to,
            });
        }
        Ok(walk_back(&self.order, &self.prev, i, j).expect("reachable node reconstructs"))
    }
}

/// All-pairs distances plus per-source canonical trees.
///
/// `next[i][j]` holds the node immediately before `j` on the canonical path
/// from `i` to `j`; reconstruction walks it from the destination back to the
/// source. Rows therefore agree exactly with [`dijkstra`] run on `i`.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    order: Vec<CityId>,
    dist: Vec<Vec<Option<f64>>>,
    next: Vec<Vec<Option<usize>>>,
}

impl DistanceMatrix {
    /// Node ids in ascending order; indexes the distance table.
    pub fn order(&self) -> &[CityId] {
        &self.order
    }

    /// Row-major distance table following `order`.
    pub fn distances(&self) -> &[Vec<Option<f64>>] {
        &self.dist
    }

    pub fn index_of(&self, id: CityId) -> Option<usize> {
        self.order.iter().position(|c| *c == id)
    }

    /// `None` when unreachable or either id is unknown.
    pub fn distance(&self, from: CityId, to: CityId) -> Option<f64> {
        let i = self.index_of(from)?;
        let j = self.index_of(to)?;
        self.dist[i][j]
    }

    /// Canonical path between two cities, inclusive of both ends.
    pub fn path(&self, from: CityId, to: CityId) -> Result<Vec<CityId>, RoutingError> {
        let i = self.index_of(from).ok_or(RoutingError::UnknownNode(from))?;
        let j = self.index_of(to).ok_or(RoutingError::UnknownNode(to))?;
        if self.dist[i][j].is_none() {
            return Err(RoutingError::Unreachable { from, to });
        }
        Ok(walk_back(&self.order, &self.next[i], i, j).expect("reachable node reconstructs"))
    }

    fn from_dist(topology: &Topology, dist: Vec<Vec<Option<f64>>>) -> Self {
        let next = dist
            .iter()
            .enumerate()
            .map(|(i, row)| canonical_prev(topology, i, row))
            .collect();
        DistanceMatrix {
            order: topology.nodes().to_vec(),
            dist,
            next,
        }
    }
}

/// Heap entry ordered by (distance, node index); `BinaryHeap` is a max-heap,
/// so the ordering is reversed.
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Single-source shortest paths with a binary heap.
pub fn dijkstra(topology: &Topology, source: CityId) -> Result<ShortestPathResult, RoutingError> {
    let s = topology
        .index_of(source)
        .ok_or(RoutingError::UnknownNode(source))?;
    let n = topology.nodes().len();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0.0);
    heap.push(HeapEntry { dist: 0.0, node: s });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in &topology.adj[u] {
            let nd = d + w;
            // Equal-cost alternatives keep the incumbent.
            if dist[v].map_or(true, |cur| nd < cur) {
                dist[v] = Some(nd);
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
    let prev = canonical_prev(topology, s, &dist);
    Ok(ShortestPathResult {
        source,
        order: topology.nodes().to_vec(),
        dist,
        prev,
    })
}

/// All-pairs shortest paths by iterating intermediates in ascending id order.
pub fn floyd_warshall(topology: &Topology) -> DistanceMatrix {
    let n = topology.nodes().len();
    let mut dist: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = Some(0.0);
    }
    for (u, list) in topology.adj.iter().enumerate() {
        for &(v, w) in list {
            dist[u][v] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = match dist[i][k] {
                Some(d) => d,
                None => continue,
            };
            for j in 0..n {
                if let Some(dkj) = dist[k][j] {
                    let candidate = dik + dkj;
                    if dist[i][j].map_or(true, |cur| candidate < cur) {
                        dist[i][j] = Some(candidate);
                    }
                }
            }
        }
    }
    DistanceMatrix::from_dist(topology, dist)
}

/// Reference all-pairs implementation: per source, `|V| - 1` rounds of
/// relaxing every edge in both directions. Slow on purpose; it exists so the
/// tuned algorithms can be checked against something independently simple.
pub fn brute_force_distances(topology: &Topology) -> DistanceMatrix {
    let n = topology.nodes().len();
    let index = |id: CityId| topology.index_of(id).unwrap();
    let mut dist: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for s in 0..n {
        dist[s][s] = Some(0.0);
        for _ in 1..n {
            for e in topology.edges() {
                let (a, b) = (index(e.a), index(e.b));
                for (u, v) in [(a, b), (b, a)] {
                    if let Some(du) = dist[s][u] {
                        let nd = du + e.length_km;
                        if dist[s][v].map_or(true, |cur| nd < cur) {
                            dist[s][v] = Some(nd);
                        }
                    }
                }
            }
        }
    }
    DistanceMatrix::from_dist(topology, dist)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RoutingError {
    #[error("duplicate node id {0}")]
    DuplicateNode(CityId),
    #[error("edge {a}-{b} references a node that is not in the topology")]
    UnknownEndpoint { a: CityId, b: CityId },
    #[error("self-loop on node {0}")]
    SelfLoop(CityId),
    #[error("duplicate edge between {a} and {b}")]
    DuplicateEdge { a: CityId, b: CityId },
    #[error("edge {a}-{b} has invalid length {length_km} km")]
    InvalidLength { a: CityId, b: CityId, length_km: f64 },
    #[error("node {0} is not in the topology")]
    UnknownNode(CityId),
    #[error("no route from {from} to {to}")]
    Unreachable { from: CityId, to: CityId },
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(v: &[u32]) -> Vec<CityId> {
        v.iter().copied().map(CityId).collect()
    }

    fn edge(a: u32, b: u32, km: f64) -> Edge {
        Edge::new(CityId(a), CityId(b), km)
    }

    #[test]
    fn build_rejects_malformed_graphs() {
        let nodes = ids(&[1, 2, 3]);
        assert_eq!(
            Topology::new(nodes.clone(), vec![edge(1, 1, 5.0)]),
            Err(RoutingError::SelfLoop(CityId(1)))
        );
        assert_eq!(
            Topology::new(nodes.clone(), vec![edge(1, 4, 5.0)]),
            Err(RoutingError::UnknownEndpoint {
                a: CityId(1),
                b: CityId(4)
            })
        );
        assert_eq!(
            Topology::new(nodes.clone(), vec![edge(1, 2, 0.0)]),
            Err(RoutingError::InvalidLength {
                a: CityId(1),
                b: CityId(2),
                length_km: 0.0
            })
        );
        assert_eq!(
            Topology::new(nodes.clone(), vec![edge(1, 2, 3.0), edge(2, 1, 7.0)]),
            Err(RoutingError::DuplicateEdge {
                a: CityId(2),
                b: CityId(1)
            })
        );
        assert_eq!(
            Topology::new(ids(&[1, 1, 2]), vec![]),
            Err(RoutingError::DuplicateNode(CityId(1)))
        );
    }

    #[test]
    fn single_node_graph_is_connected() {
        let t = Topology::new(ids(&[7]), vec![]).unwrap();
        assert!(t.is_connected());
        let r = dijkstra(&t, CityId(7)).unwrap();
        assert_eq!(r.distance(CityId(7)), Some(0.0));
        assert_eq!(r.path(CityId(7)).unwrap(), ids(&[7]));
    }

    #[test]
    fn isolated_node_is_flagged_and_unreachable() {
        let t = Topology::new(ids(&[1, 2, 3]), vec![edge(1, 2, 4.0)]).unwrap();
        assert_eq!(t.component_count(), 2);
        assert!(!t.is_connected());
        let r = dijkstra(&t, CityId(3)).unwrap();
        assert_eq!(r.distance(CityId(3)), Some(0.0));
        assert_eq!(r.distance(CityId(1)), None);
        assert_eq!(
            r.path(CityId(1)),
            Err(RoutingError::Unreachable {
                from: CityId(3),
                to: CityId(1)
            })
        );
    }

    #[test]
    fn two_node_distances() {
        let t = Topology::new(ids(&[1, 2]), vec![edge(1, 2, 5.0)]).unwrap();
        let m = floyd_warshall(&t);
        assert_eq!(m.distance(CityId(1), CityId(2)), Some(5.0));
        assert_eq!(m.distance(CityId(2), CityId(1)), Some(5.0));
        assert_eq!(m.distance(CityId(1), CityId(1)), Some(0.0));
        assert_eq!(m.path(CityId(1), CityId(2)).unwrap(), ids(&[1, 2]));
    }

    #[test]
    fn unknown_nodes_are_reported() {
        let t = Topology::new(ids(&[1, 2]), vec![edge(1, 2, 5.0)]).unwrap();
        assert_eq!(
            dijkstra(&t, CityId(9)).unwrap_err(),
            RoutingError::UnknownNode(CityId(9))
        );
        let m = floyd_warshall(&t);
        assert_eq!(
            m.path(CityId(1), CityId(9)).unwrap_err(),
            RoutingError::UnknownNode(CityId(9))
        );
    }

    #[test]
    fn equal_cost_tie_goes_to_the_smaller_id() {
        // Two length-2 routes from 1 to 4: via 2 and via 3.
        let t = Topology::new(
            ids(&[1, 2, 3, 4]),
            vec![edge(1, 2, 1.0), edge(1, 3, 1.0), edge(2, 4, 1.0), edge(3, 4, 1.0)],
        )
        .unwrap();
        let r = dijkstra(&t, CityId(1)).unwrap();
        assert_eq!(r.path(CityId(4)).unwrap(), ids(&[1, 2, 4]));
        let m = floyd_warshall(&t);
        assert_eq!(m.path(CityId(1), CityId(4)).unwrap(), ids(&[1, 2, 4]));
        let b = brute_force_distances(&t);
        assert_eq!(b.path(CityId(1), CityId(4)).unwrap(), ids(&[1, 2, 4]));
    }

    #[test]
    fn path_of_a_node_to_itself_is_the_single_node() {
        let t = Topology::new(ids(&[1, 2]), vec![edge(1, 2, 5.0)]).unwrap();
        let m = floyd_warshall(&t);
        assert_eq!(m.path(CityId(2), CityId(2)).unwrap(), ids(&[2]));
    }

    #[test]
    fn brute_force_on_a_path_graph() {
        let t = Topology::new(ids(&[1, 2, 3]), vec![edge(1, 2, 2.0), edge(2, 3, 3.0)]).unwrap();
        let m = brute_force_distances(&t);
        assert_eq!(m.distance(CityId(1), CityId(3)), Some(5.0));
        assert_eq!(m.path(CityId(1), CityId(3)).unwrap(), ids(&[1, 2, 3]));
    }

    /// Connected graph with integer lengths: a random spanning tree plus a
    /// few extra edges. Node ids get a fixed offset so they differ from
    /// vector indexes, which would otherwise mask mix-ups.
    fn arb_graph() -> impl Strategy<Value = Topology> {
        (2usize..=10).prop_flat_map(|n| {
            let tree = proptest::collection::vec((any::<u32>(), 1..=100u32), n - 1);
            let extra = proptest::collection::vec((any::<u32>(), any::<u32>(), 1..=100u32), 0..=n);
            (tree, extra).prop_map(move |(tree, extra)| {
                let nodes: Vec<CityId> = (0..n as u32).map(|i| CityId(i + 10)).collect();
                let mut edges: Vec<Edge> = Vec::new();
                for (i, (parent, w)) in tree.into_iter().enumerate() {
                    let child = i + 1;
                    let parent = (parent as usize) % child;
                    edges.push(Edge::new(nodes[parent], nodes[child], w as f64));
                }
                for (a, b, w) in extra {
                    let e = Edge::new(nodes[a as usize % n], nodes[b as usize % n], w as f64);
                    if e.a != e.b && !edges.iter().any(|x| x.key() == e.key()) {
                        edges.push(e);
                    }
                }
                Topology::new(nodes, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn algorithms_agree_on_random_graphs(t in arb_graph()) {
            let fw = floyd_warshall(&t);
            let bf = brute_force_distances(&t);
            for &a in t.nodes() {
                let d = dijkstra(&t, a).unwrap();
                for &b in t.nodes() {
                    let via_dijkstra = d.distance(b);
                    prop_assert_eq!(via_dijkstra, fw.distance(a, b));
                    prop_assert_eq!(via_dijkstra, bf.distance(a, b));
                    // Same tie-breaking should give the same routes too.
                    prop_assert_eq!(d.path(b).unwrap(), fw.path(a, b).unwrap());
                    prop_assert_eq!(fw.path(a, b).unwrap(), bf.path(a, b).unwrap());
                }
            }
        }

        #[test]
        fn distances_are_symmetric_and_metric(t in arb_graph()) {
            let m = floyd_warshall(&t);
            for &a in t.nodes() {
                for &b in t.nodes() {
                    prop_assert_eq!(m.distance(a, b), m.distance(b, a));
                    for &c in t.nodes() {
                        if let (Some(ab), Some(bc), Some(ac)) =
                            (m.distance(a, b), m.distance(b, c), m.distance(a, c))
                        {
                            prop_assert!(ac <= ab + bc + 1e-9);
                        }
                    }
                }
            }
        }

        #[test]
        fn reconstructed_paths_sum_to_the_distance(t in arb_graph()) {
            let m = floyd_warshall(&t);
            for &a in t.nodes() {
                for &b in t.nodes() {
                    let path = m.path(a, b).unwrap();
                    let total: f64 = path
                        .windows(2)
                        .map(|p| t.edge_between(p[0], p[1]).unwrap().length_km)
                        .sum();
                    prop_assert_eq!(total, m.distance(a, b).unwrap());
                    // No repeated nodes on a shortest path.
                    let mut seen = path.clone();
                    seen.sort();
                    seen.dedup();
                    prop_assert_eq!(seen.len(), path.len());
                }
            }
        }

        #[test]
        fn adding_an_edge_never_increases_distances(t in arb_graph(), extra_w in 1..=100u32) {
            let nodes = t.nodes().to_vec();
            if nodes.len() < 2 {
                return Ok(());
            }
            let before = floyd_warshall(&t);
            // Find a node pair without an edge; if the graph is complete, skip.
            let missing = nodes.iter().enumerate().find_map(|(i, &a)| {
                nodes[i + 1..]
                    .iter()
                    .find(|&&b| t.edge_between(a, b).is_none())
                    .map(|&b| (a, b))
            });
            if let Some((a, b)) = missing {
                let mut edges = t.edges().to_vec();
                edges.push(Edge::new(a, b, extra_w as f64));
                let denser = Topology::new(nodes.clone(), edges).unwrap();
                let after = floyd_warshall(&denser);
                for &x in &nodes {
                    for &y in &nodes {
                        if let (Some(d1), Some(d0)) = (after.distance(x, y), before.distance(x, y)) {
                            prop_assert!(d1 <= d0);
                        }
                    }
                }
            }
        }
    }
}

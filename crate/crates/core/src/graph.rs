//! Undirected simple graph with stable edge identities.
//!
//! Vertices are dense indices `0..n`. Every edge receives an id at
//! construction time that survives until the edge is removed, so misalignment
//! tables and traces can refer to edges across rounds. Adjacency is stored in
//! CSR form and rebuilt after each batch removal (O(n + m)).

use crate::error::{Error, Result};
use std::collections::HashSet;

pub type EdgeId = usize;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    /// Endpoints by edge id, `u < v`. Dead edges keep their endpoints.
    endpoints: Vec<(u32, u32)>,
    alive: Vec<bool>,
    /// Ids of live edges, ascending.
    live: Vec<EdgeId>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a simple graph from raw vertex pairs.
    ///
    /// Self-loops are dropped and parallel or reversed duplicates collapse into
    /// one edge. Ids follow first-seen order.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::input(format!("too many vertices: {n}")));
        }
        let mut seen = HashSet::new();
        let mut endpoints = Vec::new();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::input(format!(
                    "edge ({i}, {j}) references a vertex outside 0..{n}"
                )));
            }
            if i == j {
                continue;
            }
            let key = (i.min(j) as u32, i.max(j) as u32);
            if seen.insert(key) {
                endpoints.push(key);
            }
        }
        let m = endpoints.len();
        let mut g = Graph {
            n,
            endpoints,
            alive: vec![true; m],
            live: (0..m).collect(),
            offsets: Vec::new(),
            neighbors: Vec::new(),
        };
        g.rebuild_adjacency();
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_pairs(n, std::iter::empty()).expect("no pairs to validate")
    }

    fn rebuild_adjacency(&mut self) {
        let mut degree = vec![0usize; self.n];
        for &e in &self.live {
            let (u, v) = self.endpoints[e];
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(self.n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..self.n].to_vec();
        let mut neighbors = vec![0u32; offsets[self.n]];
        for &e in &self.live {
            let (u, v) = self.endpoints[e];
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        self.offsets = offsets;
        self.neighbors = neighbors;
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of live edges.
    pub fn edge_count(&self) -> usize {
        self.live.len()
    }

    /// Upper bound (exclusive) of all edge ids ever assigned.
    pub fn edge_id_bound(&self) -> usize {
        self.endpoints.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&u| u as usize)
    }

    pub(crate) fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Live edge ids in ascending order.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.live
    }

    /// Live edges as `(id, u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, usize, usize)> + '_ {
        self.live.iter().map(move |&e| {
            let (u, v) = self.endpoints[e];
            (e, u as usize, v as usize)
        })
    }

    /// Endpoints of an edge id, live or removed.
    pub fn endpoints(&self, e: EdgeId) -> Option<(usize, usize)> {
        self.endpoints
            .get(e)
            .map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.alive.get(e).copied().unwrap_or(false)
    }

    pub fn has_edge_between(&self, i: usize, j: usize) -> bool {
        let (a, b) = if self.degree(i) <= self.degree(j) {
            (i, j)
        } else {
            (j, i)
        };
        self.neighbor_slice(a).iter().any(|&u| u as usize == b)
    }

    /// Removes a batch of live edges. Remaining ids are untouched.
    ///
    /// Fails without modifying the graph if any id is unknown, already
    /// removed, or repeated.
    pub fn remove_edges(&mut self, ids: &[EdgeId]) -> Result<()> {
        let mut batch = HashSet::with_capacity(ids.len());
        for &e in ids {
            if !self.contains_edge(e) {
                return Err(Error::input(format!("edge id {e} is not present")));
            }
            if !batch.insert(e) {
                return Err(Error::input(format!("edge id {e} listed twice")));
            }
        }
        for &e in ids {
            self.alive[e] = false;
        }
        let alive = &self.alive;
        self.live.retain(|&e| alive[e]);
        self.rebuild_adjacency();
        Ok(())
    }

    /// Copy of the graph without the given edges.
    pub fn without_edges(&self, ids: &[EdgeId]) -> Result<Graph> {
        let mut g = self.clone();
        g.remove_edges(ids)?;
        Ok(g)
    }

    /// Connected components, labelled `0..c` in order of their smallest vertex.
    pub fn connected_components(&self) -> Partition {
        let mut sets = DisjointSet::new(self.n);
        for (_, u, v) in self.edges() {
            sets.union(u, v);
        }
        let mut label_of_root = vec![usize::MAX; self.n];
        let mut next = 0;
        let labels = (0..self.n)
            .map(|v| {
                let r = sets.find(v);
                if label_of_root[r] == usize::MAX {
                    label_of_root[r] = next;
                    next += 1;
                }
                label_of_root[r]
            })
            .collect();
        Partition { labels }
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Assignment of every vertex to one community label.
///
/// Label values carry no meaning beyond equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn from_labels(labels: Vec<usize>) -> Self {
        Partition { labels }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn single_community(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    /// Relabels communities `0..c` in order of first appearance.
    pub fn canonical(&self) -> Partition {
        let mut map = std::collections::HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn community_count(&self) -> usize {
        self.labels.iter().collect::<HashSet<_>>().len()
    }

    /// Members of each community, communities ordered by first member.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let canon = self.canonical();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in canon.labels.iter().enumerate() {
            if l == out.len() {
                out.push(Vec::new());
            }
            out[l].push(v);
        }
        out
    }

    /// Whether two partitions group vertices identically.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }
}

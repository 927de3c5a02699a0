//! Reference modularity optimizers: greedy agglomeration (Clauset–Newman–Moore,
//! "fast greedy") and Louvain.

use crate::error::{Error, Result};
use crate::graph::{DisjointSet, Graph, Partition};
use crate::metrics;
use crate::seed;
use rand::seq::SliceRandom;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

/// One agglomeration step of the greedy optimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeStep {
    /// 1-based merge index.
    pub step: usize,
    /// Surviving community id and the id absorbed into it.
    pub merged: (usize, usize),
    pub delta_q: f64,
    /// Modularity after the merge.
    pub q: f64,
}

#[derive(Clone, Debug)]
pub struct GreedyResult {
    pub partition: Partition,
    pub modularity: f64,
    pub merges: Vec<MergeStep>,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    dq: f64,
    a: usize,
    b: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: largest gain first, then the lexicographically smallest pair
    fn cmp(&self, other: &Self) -> Ordering {
        self.dq
            .total_cmp(&other.dq)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

/// Greedy modularity agglomeration.
///
/// Starting from singletons, repeatedly merges the pair of adjacent
/// communities with the largest modularity gain (ties: smallest id pair)
/// until no adjacent pair is left, then cuts the merge sequence where
/// modularity peaked.
pub fn cfg(g: &Graph) -> Result<GreedyResult> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::input("greedy modularity needs at least one edge"));
    }
    let m_f = m as f64;
    // adjacency[c][d] = number of edges between communities c and d
    let mut adjacency: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for (_, u, v) in g.edges() {
        *adjacency[u].entry(v).or_insert(0) += 1;
        *adjacency[v].entry(u).or_insert(0) += 1;
    }
    let mut degree: Vec<usize> = g.degrees();
    let mut alive = vec![true; n];
    let gain = |links: usize, da: usize, db: usize| -> f64 {
        links as f64 / m_f - (da as f64 * db as f64) / (2.0 * m_f * m_f)
    };

    let mut heap = BinaryHeap::new();
    for (_, u, v) in g.edges() {
        heap.push(Candidate {
            dq: gain(1, degree[u], degree[v]),
            a: u,
            b: v,
        });
    }
    let mut q: f64 = -degree
        .iter()
        .map(|&d| (d as f64 / (2.0 * m_f)).powi(2))
        .sum::<f64>();
    let mut history = vec![q];
    let mut merges = Vec::new();

    while let Some(Candidate { dq, a, b }) = heap.pop() {
        if !alive[a] || !alive[b] {
            continue;
        }
        let Some(&links) = adjacency[a].get(&b) else {
            continue;
        };
        let current = gain(links, degree[a], degree[b]);
        if current.to_bits() != dq.to_bits() {
            continue;
        }
        let (keep, gone) = if adjacency[a].len() >= adjacency[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        let absorbed = std::mem::take(&mut adjacency[gone]);
        for (&other, &count) in &absorbed {
            if other == keep {
                continue;
            }
            adjacency[other].remove(&gone);
            *adjacency[other].entry(keep).or_insert(0) += count;
            *adjacency[keep].entry(other).or_insert(0) += count;
        }
        adjacency[keep].remove(&gone);
        degree[keep] += degree[gone];
        degree[gone] = 0;
        alive[gone] = false;
        for (&other, &count) in &adjacency[keep] {
            heap.push(Candidate {
                dq: gain(count, degree[keep], degree[other]),
                a: keep.min(other),
                b: keep.max(other),
            });
        }
        q += dq;
        history.push(q);
        merges.push(MergeStep {
            step: merges.len() + 1,
            merged: (keep, gone),
            delta_q: dq,
            q,
        });
    }

    let best = history
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > history[best] { i } else { best });
    let mut sets = DisjointSet::new(n);
    for step in &merges[..best] {
        sets.union(step.merged.0, step.merged.1);
    }
    let partition = Partition::from_labels((0..n).map(|v| sets.find(v)).collect()).canonical();
    let modularity = metrics::modularity(g, &partition)?;
    Ok(GreedyResult {
        partition,
        modularity,
        merges,
    })
}

#[derive(Clone, Debug)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
    /// Number of aggregation levels performed.
    pub levels: usize,
}

/// Weighted graph used for the Louvain levels. Loops hold the weight of
/// edges collapsed inside a super-vertex.
struct LevelGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> Self {
        let adjacency = (0..g.vertex_count())
            .map(|v| g.neighbors(v).map(|u| (u, 1.0)).collect())
            .collect();
        LevelGraph {
            adjacency,
            loops: vec![0.0; g.vertex_count()],
        }
    }

    fn len(&self) -> usize {
        self.loops.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.loops[v]
    }

    fn aggregate(&self, community: &[usize], count: usize) -> LevelGraph {
        let mut merged: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        let mut loops = vec![0.0; count];
        for v in 0..self.len() {
            let cv = community[v];
            loops[cv] += self.loops[v];
            for &(u, w) in &self.adjacency[v] {
                let cu = community[u];
                if cu == cv {
                    // each internal edge is seen from both ends
                    loops[cv] += 0.5 * w;
                } else {
                    *merged[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        LevelGraph {
            adjacency: merged
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
            loops,
        }
    }
}

/// Louvain: local moving in seeded random vertex order, then aggregation,
/// repeated until a level improves modularity by less than `1e-9`.
pub fn louvain(g: &Graph, seed: u64) -> Result<LouvainResult> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::input("Louvain needs at least one edge"));
    }
    let two_m = 2.0 * m as f64;
    let mut rng = seed::rng(seed);
    let mut level = LevelGraph::from_graph(g);
    let mut membership: Vec<usize> = (0..n).collect();
    let mut partition = Partition::singletons(n);
    let mut q = metrics::modularity(g, &partition)?;
    let mut levels = 0;

    loop {
        let size = level.len();
        let strength: Vec<f64> = (0..size).map(|v| level.strength(v)).collect();
        let mut community: Vec<usize> = (0..size).collect();
        let mut total = strength.clone();
        let mut order: Vec<usize> = (0..size).collect();
        order.shuffle(&mut rng);

        let mut links = vec![0.0; size];
        let mut marked = vec![false; size];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let own = community[v];
                for &(u, w) in &level.adjacency[v] {
                    let c = community[u];
                    if !marked[c] {
                        marked[c] = true;
                        touched.push(c);
                    }
                    links[c] += w;
                }
                total[own] -= strength[v];
                let score = |c: usize| links[c] - total[c] * strength[v] / two_m;
                let mut best = own;
                let mut best_score = score(own);
                for &c in &touched {
                    let s = score(c);
                    if s > best_score {
                        best = c;
                        best_score = s;
                    }
                }
                total[best] += strength[v];
                if best != own {
                    community[v] = best;
                    moved = true;
                }
                for &c in &touched {
                    links[c] = 0.0;
                    marked[c] = false;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            moved_any = true;
        }
        if !moved_any {
            break;
        }

        let mut renumber = vec![usize::MAX; size];
        let mut count = 0;
        for c in community.iter_mut() {
            if renumber[*c] == usize::MAX {
                renumber[*c] = count;
                count += 1;
            }
            *c = renumber[*c];
        }
        for slot in membership.iter_mut() {
            *slot = community[*slot];
        }
        let candidate = Partition::from_labels(membership.clone());
        let new_q = metrics::modularity(g, &candidate)?;
        levels += 1;
        let gain = new_q - q;
        if gain > 0.0 {
            partition = candidate;
            q = new_q;
        }
        if gain < 1e-9 || count == size {
            break;
        }
        level = level.aggregate(&community, count);
    }

    Ok(LouvainResult {
        partition: partition.canonical(),
        modularity: q,
        levels,
    })
}

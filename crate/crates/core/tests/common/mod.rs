//! Brute-force reference implementations and random instance generators
//! shared by the integration tests. Everything here follows the textbook
//! definitions directly and is only meant for tiny inputs.

#![allow(dead_code)]

use flockcd::{Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::path::PathBuf;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense adjacency matrix of the live edges.
pub fn adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    for (_, u, v) in g.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    a
}

/// `Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` over ordered pairs.
pub fn modularity_oracle(g: &Graph, p: &Partition) -> f64 {
    let a = adjacency(g);
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p.label(i) == p.label(j) {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Adjusted Rand index from the four pair-agreement counts.
pub fn ari_oracle(x: &Partition, y: &Partition) -> f64 {
    let n = x.len();
    let (mut a, mut b, mut c, mut d) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (x.label(i) == x.label(j), y.label(i) == y.label(j)) {
                (true, true) => a += 1.0,
                (true, false) => b += 1.0,
                (false, true) => c += 1.0,
                (false, false) => d += 1.0,
            }
        }
    }
    let denom = (a + b) * (b + d) + (a + c) * (c + d);
    if denom == 0.0 {
        return if b == 0.0 && c == 0.0 { 1.0 } else { 0.0 };
    }
    2.0 * (a * d - b * c) / denom
}

/// Mutual information over the arithmetic mean of the entropies, all from
/// empirical label frequencies.
pub fn nmi_oracle(x: &Partition, y: &Partition) -> f64 {
    let n = x.len() as f64;
    let mut cx: HashMap<usize, usize> = HashMap::new();
    let mut cy: HashMap<usize, usize> = HashMap::new();
    let mut cxy: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..x.len() {
        *cx.entry(x.label(v)).or_default() += 1;
        *cy.entry(y.label(v)).or_default() += 1;
        *cxy.entry((x.label(v), y.label(v))).or_default() += 1;
    }
    fn prob<K: std::hash::Hash + Eq>(m: HashMap<K, usize>, n: f64) -> HashMap<K, f64> {
        m.into_iter().map(|(k, c)| (k, c as f64 / n)).collect()
    }
    let (px, py, pxy) = (prob(cx, n), prob(cy, n), prob(cxy, n));
    let h = |m: &HashMap<usize, f64>| -> f64 { m.values().map(|p| -p * p.ln()).sum() };
    let (hx, hy) = (h(&px), h(&py));
    if hx + hy == 0.0 {
        return 1.0;
    }
    let mi: f64 = pxy
        .iter()
        .map(|(&(a, b), &p)| p * (p / (px[&a] * py[&b])).ln())
        .sum();
    2.0 * mi / (hx + hy)
}

/// Calls `f` with every set partition of `0..n` as a restricted growth string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for l in 0..=max + 1 {
            if labels.is_empty() && l > 0 {
                break;
            }
            labels.push(l);
            let next_max = if labels.len() == 1 { 0 } else { max.max(l) };
            rec(labels, n, next_max, f);
            labels.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    rec(&mut Vec::with_capacity(n), n, 0, &mut f);
}

/// Largest modularity over all partitions, by exhaustive enumeration.
pub fn optimal_modularity(g: &Graph) -> (f64, Partition) {
    let mut best = (
        f64::NEG_INFINITY,
        Partition::single_community(g.vertex_count()),
    );
    for_each_partition(g.vertex_count(), |labels| {
        let p = Partition::from_labels(labels.to_vec());
        let q = modularity_oracle(g, &p);
        if q > best.0 {
            best = (q, p);
        }
    });
    best
}

/// Erdős–Rényi graph; may be disconnected.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_pairs(n, pairs).unwrap()
}

/// Random spanning tree plus `extra` uniformly random additional pairs.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (r.random_range(0..v), v)).collect();
    for _ in 0..extra {
        pairs.push((r.random_range(0..n), r.random_range(0..n)));
    }
    Graph::from_pairs(n, pairs).unwrap()
}

/// Uniformly random labels in `0..k`.
pub fn random_partition(n: usize, k: usize, seed: u64) -> Partition {
    let mut r = rng(seed);
    Partition::from_labels((0..n).map(|_| r.random_range(0..k)).collect())
}

/// Two cliques of sizes `a` and `b` (vertices `0..a` and `a..a+b`) joined by
/// `bridges` distinct random inter-clique edges.
pub fn two_cliques(a: usize, b: usize, bridges: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs = Vec::new();
    for (lo, hi) in [(0, a), (a, a + b)] {
        for i in lo..hi {
            for j in i + 1..hi {
                pairs.push((i, j));
            }
        }
    }
    let mut inter: Vec<(usize, usize)> = (0..a)
        .flat_map(|i| (a..a + b).map(move |j| (i, j)))
        .collect();
    for k in 0..bridges.min(inter.len()) {
        let pick = r.random_range(k..inter.len());
        inter.swap(k, pick);
        pairs.push(inter[k]);
    }
    Graph::from_pairs(a + b, pairs).unwrap()
}

/// Repository data directory, overridable with `FLOCKCD_DATA_DIR`.
pub fn data_dir() -> PathBuf {
    std::env::var_os("FLOCKCD_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

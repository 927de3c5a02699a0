//! Partition quality: Newman–Girvan modularity, adjusted Rand index and
//! normalized mutual information.

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use std::collections::HashMap;

/// Modularity `Q = Σ_c [ L_c/m − (D_c/2m)² ]` of a partition of the live
/// edges of `g`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.vertex_count() {
        return Err(Error::input(format!(
            "partition covers {} vertices, graph has {}",
            p.len(),
            g.vertex_count()
        )));
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::input(
            "modularity is undefined for a graph without edges",
        ));
    }
    let canon = p.canonical();
    let c = canon.labels().iter().max().map_or(0, |&l| l + 1);
    let mut internal = vec![0usize; c];
    let mut degree_sum = vec![0usize; c];
    for v in 0..g.vertex_count() {
        degree_sum[canon.label(v)] += g.degree(v);
    }
    for (_, u, v) in g.edges() {
        if canon.label(u) == canon.label(v) {
            internal[canon.label(u)] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Joint label counts of two partitions of the same vertex set.
#[derive(Clone, Debug)]
pub struct ContingencyTable {
    /// `counts[u][v]` = vertices in cluster `u` of A and cluster `v` of B.
    counts: Vec<Vec<usize>>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::input(format!(
                "partitions have different sizes: {} and {}",
                a.len(),
                b.len()
            )));
        }
        let (a, b) = (a.canonical(), b.canonical());
        let ra = a.labels().iter().max().map_or(0, |&l| l + 1);
        let rb = b.labels().iter().max().map_or(0, |&l| l + 1);
        let mut counts = vec![vec![0usize; rb]; ra];
        let mut rows = vec![0; ra];
        let mut cols = vec![0; rb];
        for (&x, &y) in a.labels().iter().zip(b.labels()) {
            counts[x][y] += 1;
            rows[x] += 1;
            cols[y] += 1;
        }
        Ok(ContingencyTable {
            counts,
            rows,
            cols,
            total: a.len(),
        })
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.cols
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().flatten().copied().filter(|&c| c > 0)
    }
}

fn pairs(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Hubert–Arabie adjusted Rand index.
///
/// When the chance-corrected denominator vanishes (both partitions trivial
/// in the same way), returns 1 for identical groupings and 0 otherwise.
pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    let index: f64 = t.cells().map(pairs).sum();
    let sum_a: f64 = t.rows.iter().map(|&x| pairs(x)).sum();
    let sum_b: f64 = t.cols.iter().map(|&x| pairs(x)).sum();
    let total_pairs = pairs(t.total);
    let expected = if total_pairs > 0.0 {
        sum_a * sum_b / total_pairs
    } else {
        0.0
    };
    let max = 0.5 * (sum_a + sum_b);
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(if a.same_grouping(b) { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information normalized by the arithmetic mean of the two entropies
/// (natural logarithm).
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(a, b)?;
    if t.total == 0 {
        return Ok(1.0);
    }
    let n = t.total as f64;
    let ha = entropy(&t.rows, n);
    let hb = entropy(&t.cols, n);
    if ha + hb == 0.0 {
        // both are a single cluster
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (u, row) in t.counts.iter().enumerate() {
        for (v, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (t.rows[u] as f64 * t.cols[v] as f64)).ln();
            }
        }
    }
    Ok((2.0 * mi / (ha + hb)).clamp(0.0, 1.0))
}

/// Community sizes keyed by label, for reporting.
pub fn community_sizes(p: &Partition) -> HashMap<usize, usize> {
    let mut sizes = HashMap::new();
    for &l in p.labels() {
        *sizes.entry(l).or_insert(0) += 1;
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn two_triangles() -> Graph {
        Graph::from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    fn p(labels: &[usize]) -> Partition {
        Partition::from_labels(labels.to_vec())
    }

    /// `(1/2m) Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` over all ordered pairs.
    fn modularity_pair_sum(g: &Graph, part: &Partition) -> f64 {
        let n = g.vertex_count();
        let two_m = 2.0 * g.edge_count() as f64;
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if part.label(i) != part.label(j) {
                    continue;
                }
                let a = if g.has_edge_between(i, j) { 1.0 } else { 0.0 };
                q += a - g.degree(i) as f64 * g.degree(j) as f64 / two_m;
            }
        }
        q / two_m
    }

    /// Rand-style pair counting over all unordered vertex pairs.
    fn ari_pair_counting(a: &Partition, b: &Partition) -> f64 {
        let n = a.len();
        let (mut both, mut only_a, mut only_b, mut neither) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let sa = a.label(i) == a.label(j);
                let sb = b.label(i) == b.label(j);
                match (sa, sb) {
                    (true, true) => both += 1.0,
                    (true, false) => only_a += 1.0,
                    (false, true) => only_b += 1.0,
                    (false, false) => neither += 1.0,
                }
            }
        }
        let total = both + only_a + only_b + neither;
        let pa = both + only_a;
        let pb = both + only_b;
        let expected = pa * pb / total;
        let max = 0.5 * (pa + pb);
        (both - expected) / (max - expected)
    }

    #[test]
    fn single_community_has_zero_modularity() {
        let g = two_triangles();
        assert_abs_diff_eq!(
            modularity(&g, &Partition::single_community(6)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn two_triangles_modularity() {
        let g = two_triangles();
        let q = modularity(&g, &p(&[0, 0, 0, 1, 1, 1])).unwrap();
        assert_abs_diff_eq!(q, 5.0 / 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            q,
            modularity_pair_sum(&g, &p(&[0, 0, 0, 1, 1, 1])),
            epsilon = 1e-15
        );
        let relabelled = modularity(&g, &p(&[7, 7, 7, 2, 2, 2])).unwrap();
        assert_eq!(q, relabelled);
    }

    #[test]
    fn modularity_errors() {
        assert!(modularity(&Graph::empty(3), &Partition::singletons(3)).is_err());
        assert!(modularity(&two_triangles(), &Partition::singletons(5)).is_err());
    }

    #[test]
    fn ari_examples() {
        let a = p(&[0, 0, 0, 1, 1, 1]);
        let b = p(&[0, 0, 1, 1, 1, 1]);
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
        let expected = ari_pair_counting(&a, &b);
        assert_abs_diff_eq!(
            adjusted_rand_index(&a, &b).unwrap(),
            expected,
            epsilon = 1e-12
        );
        // pairs: index 4, sum_a 6, sum_b 7, total 15 -> (4 - 2.8) / (6.5 - 2.8)
        assert_abs_diff_eq!(expected, 1.2 / 3.7, epsilon = 1e-12);
    }

    #[test]
    fn ari_degenerate_cases() {
        let one = Partition::single_community(5);
        let singles = Partition::singletons(5);
        assert_eq!(adjusted_rand_index(&one, &one).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&singles, &singles).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&one, &singles).unwrap(), 0.0);
        assert!(adjusted_rand_index(&one, &Partition::single_community(4)).is_err());
    }

    #[test]
    fn ari_of_random_labels_is_near_zero() {
        use rand::Rng;
        let truth = Partition::from_labels((0..100).map(|i| i / 25).collect());
        let mut sum = 0.0;
        for s in 0..100 {
            let mut rng = crate::seed::rng(s);
            let random = Partition::from_labels((0..100).map(|_| rng.random_range(0..4)).collect());
            let ari = adjusted_rand_index(&truth, &random).unwrap();
            assert!(ari.abs() < 0.1, "seed {s}: {ari}");
            sum += ari;
        }
        assert!((sum / 100.0).abs() < 0.02);
    }

    #[test]
    fn nmi_examples() {
        let groups = Partition::from_labels((0..20).map(|i| i / 5).collect());
        assert_abs_diff_eq!(nmi(&groups, &groups).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(nmi(&groups, &Partition::single_community(20)).unwrap(), 0.0);
        let one = Partition::single_community(4);
        assert_eq!(nmi(&one, &one).unwrap(), 1.0);
    }

    #[test]
    fn contingency_marginals() {
        let t = ContingencyTable::new(&p(&[0, 0, 1, 2]), &p(&[5, 6, 6, 6])).unwrap();
        assert_eq!(t.row_sums(), &[2, 1, 1]);
        assert_eq!(t.col_sums(), &[1, 3]);
        assert_eq!(t.total(), 4);
        assert_eq!(t.counts().iter().flatten().sum::<usize>(), 4);
    }

    fn arb_partitions() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (1usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec(0usize..6, n),
                prop::collection::vec(0usize..6, n),
            )
        })
    }

    proptest! {
        #[test]
        fn metrics_are_symmetric_and_label_invariant((a, b) in arb_partitions()) {
            let pa = Partition::from_labels(a.clone());
            let pb = Partition::from_labels(b);
            let ari = adjusted_rand_index(&pa, &pb).unwrap();
            let mi = nmi(&pa, &pb).unwrap();
            prop_assert_eq!(ari, adjusted_rand_index(&pb, &pa).unwrap());
            prop_assert!((mi - nmi(&pb, &pa).unwrap()).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(&ari));
            prop_assert!((0.0..=1.0).contains(&mi));
            let shifted = Partition::from_labels(a.iter().map(|&l| 10 - l).collect());
            prop_assert!((adjusted_rand_index(&shifted, &pb).unwrap() - ari).abs() < 1e-12);
            prop_assert!((nmi(&shifted, &pb).unwrap() - mi).abs() < 1e-12);
        }

        #[test]
        fn modularity_matches_pair_sum(
            n in 2usize..30,
            pairs in prop::collection::vec((0usize..30, 0usize..30), 1..90),
            labels in prop::collection::vec(0usize..5, 30),
        ) {
            let g = Graph::from_pairs(n, pairs.into_iter().map(|(a, b)| (a % n, b % n))).unwrap();
            prop_assume!(g.edge_count() > 0);
            let part = Partition::from_labels(labels[..n].to_vec());
            let q = modularity(&g, &part).unwrap();
            prop_assert!((q - modularity_pair_sum(&g, &part)).abs() < 1e-12);
            prop_assert!((-0.5..1.0).contains(&q));
        }
    }
}

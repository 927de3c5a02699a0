//! Planted-partition benchmark networks.
//!
//! Every vertex draws `k_des / 2` targets. Each draw picks a uniformly random
//! vertex of its own community with probability `p_in` (itself included),
//! otherwise a uniformly random vertex outside its community. The drawn pairs
//! are then simplified, so the realised mean degree ends up slightly below
//! `k_des`.

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::seed;
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedSpec {
    pub community_sizes: Vec<usize>,
    /// Desired mean degree; must be even.
    pub k_des: usize,
    pub p_in: f64,
    pub seed: u64,
}

impl PlantedSpec {
    /// Four equal communities of `size` vertices.
    pub fn balanced(size: usize, k_des: usize, p_in: f64, seed: u64) -> Self {
        PlantedSpec {
            community_sizes: vec![size; 4],
            k_des,
            p_in,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.community_sizes.is_empty() || self.community_sizes.contains(&0) {
            return Err(Error::input("every community needs at least one vertex"));
        }
        if !self.k_des.is_multiple_of(2) {
            return Err(Error::input(format!(
                "desired degree must be even, got {}",
                self.k_des
            )));
        }
        if !(0.0..=1.0).contains(&self.p_in) {
            return Err(Error::input(format!(
                "p_in must lie in [0, 1], got {}",
                self.p_in
            )));
        }
        if self.community_sizes.len() < 2 {
            return Err(Error::input(
                "a planted partition needs at least two communities",
            ));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.community_sizes.iter().sum()
    }
}

/// Draws the raw (unsimplified) target pairs.
pub fn planted_pairs(spec: &PlantedSpec) -> Result<Vec<(usize, usize)>> {
    spec.validate()?;
    let n = spec.vertex_count();
    let mut rng = seed::rng(spec.seed);
    let mut pairs = Vec::with_capacity(n * spec.k_des / 2);
    let mut start = 0;
    for &size in &spec.community_sizes {
        let end = start + size;
        let outside = n - size;
        for i in start..end {
            for _ in 0..spec.k_des / 2 {
                let j = if rng.random::<f64>() < spec.p_in {
                    rng.random_range(start..end)
                } else {
                    let r = rng.random_range(0..outside);
                    if r < start {
                        r
                    } else {
                        r + size
                    }
                };
                pairs.push((i, j));
            }
        }
        start = end;
    }
    Ok(pairs)
}

/// Builds a planted-partition graph and its ground-truth communities.
/// Vertices are numbered community by community.
pub fn planted_partition(spec: &PlantedSpec) -> Result<(Graph, Partition)> {
    let pairs = planted_pairs(spec)?;
    let g = Graph::from_pairs(spec.vertex_count(), pairs)?;
    let labels = spec
        .community_sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &size)| std::iter::repeat_n(c, size))
        .collect();
    Ok((g, Partition::from_labels(labels)))
}

//! Iterative edge removal.
//!
//! A round runs the alignment dynamics several times on the current graph,
//! sums the per-edge misalignment, removes the most misaligned edges and
//! records the connected components. Each round's components are scored by
//! modularity on the *original* graph; the best-scoring round is the answer.

use crate::dynamics::{self, DynParams};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Partition};
use crate::metrics;
use crate::par::Exec;
use crate::seed;

/// How many edges a round removes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Removal {
    /// A fixed number of edges per round.
    Count(usize),
    /// `ceil(fraction · current edge count)` edges per round.
    Fraction(f64),
}

impl Removal {
    /// Edges to remove from a graph that currently has `m` edges.
    pub fn edges_for(&self, m: usize) -> usize {
        let k = match *self {
            Removal::Count(k) => k,
            Removal::Fraction(f) => (f * m as f64).ceil() as usize,
        };
        k.max(1).min(m)
    }
}

/// When the round loop ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRule {
    /// Keep going until no edge is left.
    Exhaust,
    /// Stop after `w` consecutive partition-changing rounds whose modularity
    /// stays below the best seen so far.
    Patience(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectorConfig {
    pub dynamics: DynParams,
    pub runs_per_round: usize,
    pub removal: Removal,
    pub stop: StopRule,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            dynamics: DynParams::default(),
            runs_per_round: 10,
            removal: Removal::Count(1),
            stop: StopRule::Patience(5),
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        self.dynamics.validate()?;
        if self.runs_per_round == 0 {
            return Err(Error::input("runs per round must be at least 1"));
        }
        match self.removal {
            Removal::Count(0) => return Err(Error::input("edges per round must be at least 1")),
            Removal::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
                return Err(Error::input(format!(
                    "removal fraction must lie in (0, 1], got {f}"
                )))
            }
            _ => {}
        }
        if self.stop == StopRule::Patience(0) {
            return Err(Error::input("patience must be at least 1 round"));
        }
        Ok(())
    }
}

/// One round of the removal loop.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    /// Edge ids removed in this round, most misaligned first.
    pub removed: Vec<EdgeId>,
    pub edges_removed_total: usize,
    pub n_components: usize,
    /// Modularity of the components, measured on the original graph.
    pub modularity: f64,
    pub ari: Option<f64>,
    pub nmi: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DetectionTrace {
    pub rounds: Vec<RoundRecord>,
    /// 1-based index of the first round with maximal modularity.
    pub best_round: Option<usize>,
}

impl DetectionTrace {
    pub fn modularities(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.modularity).collect()
    }

    pub fn best(&self) -> Option<&RoundRecord> {
        self.best_round.map(|r| &self.rounds[r - 1])
    }
}

/// 1-based index of the first maximum.
pub fn argmax_round(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &q) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| q > b) {
            best = Some((i, q));
        }
    }
    best.map(|(i, _)| i + 1)
}

#[derive(Clone, Debug)]
pub struct Detection {
    pub partition: Partition,
    pub modularity: Option<f64>,
    pub trace: DetectionTrace,
}

/// Runs the removal loop on `g` and returns the best-modularity partition.
pub fn detect(g: &Graph, cfg: &DetectorConfig) -> Result<Detection> {
    detect_with_truth(g, cfg, None)
}

/// [`detect`], additionally scoring every round against a reference partition.
pub fn detect_with_truth(
    g: &Graph,
    cfg: &DetectorConfig,
    truth: Option<&Partition>,
) -> Result<Detection> {
    cfg.validate()?;
    if g.vertex_count() == 0 {
        return Err(Error::input("graph has no vertices"));
    }
    if let Some(t) = truth {
        if t.len() != g.vertex_count() {
            return Err(Error::input("reference partition does not cover the graph"));
        }
    }
    if g.edge_count() == 0 {
        return Ok(Detection {
            partition: Partition::singletons(g.vertex_count()),
            modularity: None,
            trace: DetectionTrace::default(),
        });
    }

    let mut current = g.clone();
    let mut trace = DetectionTrace::default();
    let mut components = current.connected_components();
    let mut n_components = components.community_count();
    let mut q = metrics::modularity(g, &components)?;
    let mut scores = score(truth, &components)?;
    let mut best: Option<(f64, Partition)> = None;
    let mut stale = 0usize;
    let mut removed_total = 0usize;

    while current.edge_count() > 0 {
        let round = trace.rounds.len() + 1;
        let table = dynamics::aggregate_runs(
            &current,
            &cfg.dynamics,
            cfg.runs_per_round,
            seed::derive(cfg.seed, round as u64),
            cfg.exec,
        )?;
        let removed = table.top_k(cfg.removal.edges_for(current.edge_count()));
        current.remove_edges(&removed)?;
        removed_total += removed.len();

        let next = current.connected_components();
        let next_count = next.community_count();
        let changed = next_count != n_components;
        if changed {
            components = next;
            n_components = next_count;
            q = metrics::modularity(g, &components)?;
            scores = score(truth, &components)?;
        }
        trace.rounds.push(RoundRecord {
            round,
            removed,
            edges_removed_total: removed_total,
            n_components,
            modularity: q,
            ari: scores.map(|s| s.0),
            nmi: scores.map(|s| s.1),
        });

        match &best {
            Some((b, _)) if q <= *b => {
                if changed {
                    stale += 1;
                }
            }
            _ => {
                best = Some((q, components.clone()));
                trace.best_round = Some(round);
                stale = 0;
            }
        }
        log::debug!(
            "round {round}: removed {removed_total}, {n_components} components, Q = {q:.6}"
        );
        if let StopRule::Patience(w) = cfg.stop {
            if stale >= w {
                break;
            }
        }
    }

    let (q, partition) = best.expect("at least one round ran");
    Ok(Detection {
        partition,
        modularity: Some(q),
        trace,
    })
}

fn score(truth: Option<&Partition>, p: &Partition) -> Result<Option<(f64, f64)>> {
    truth
        .map(|t| Ok((metrics::adjusted_rand_index(t, p)?, metrics::nmi(t, p)?)))
        .transpose()
}

/// Rebuilds the components of the best round by replaying the trace's
/// removals on the original graph.
pub fn best_partition_from_trace(original: &Graph, trace: &DetectionTrace) -> Result<Partition> {
    let best =
        argmax_round(&trace.modularities()).ok_or_else(|| Error::input("trace has no rounds"))?;
    let removed: Vec<EdgeId> = trace.rounds[..best]
        .iter()
        .flat_map(|r| r.removed.iter().copied())
        .collect();
    Ok(original.without_edges(&removed)?.connected_components())
}

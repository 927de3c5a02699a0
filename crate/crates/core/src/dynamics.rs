//! The particle-alignment map.
//!
//! Each vertex `i` carries a velocity `v_i ∈ R^D`. One step moves it toward
//! the mean normalized velocity of its neighbours:
//!
//! ```text
//! v_i(t+1) = v̂_i(t) + α/k_i · Σ_j A_ij (v̂_j(t) − v̂_i(t))
//!          = (1 − α) v̂_i(t) + α · mean_{j ~ i} v̂_j(t)
//! ```
//!
//! Starting from unit vectors with `0 < α < 0.5`, every norm stays in `(0, 1]`
//! forever, so the normalization never divides by zero. Vertices without
//! neighbours keep their direction.
//!
//! The misalignment coefficient of an edge is the L1 distance between the
//! normalized velocities of its endpoints. Inter-community edges align more
//! slowly than intra-community ones, which is what the detector exploits.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Partition};
use crate::par::Exec;
use crate::seed;
use rand_distr::{Distribution, StandardNormal};

/// Parameters of a single dynamical run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynParams {
    /// Update rate α, in `(0, 0.5)`.
    pub alpha: f64,
    /// Dimension D of the velocity vectors, at least 2.
    pub dim: usize,
    /// Iteration cap.
    pub t_max: usize,
    /// Stop once no component of any normalized velocity moves by this much
    /// in one step. `0` disables the rule.
    pub conv_tol: f64,
    /// Stop once the mean edge misalignment drops below this value; past that
    /// point the coefficients are dominated by rounding. `0` disables the rule.
    pub floor_tol: f64,
}

impl Default for DynParams {
    fn default() -> Self {
        DynParams {
            alpha: 0.1,
            dim: 3,
            t_max: 100,
            conv_tol: 0.0,
            floor_tol: 1e-12,
        }
    }
}

impl DynParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::input(format!(
                "alpha must lie in (0, 0.5), got {}",
                self.alpha
            )));
        }
        if self.dim < 2 {
            return Err(Error::input(format!(
                "dimension must be at least 2, got {}",
                self.dim
            )));
        }
        if self.t_max < 1 {
            return Err(Error::input("t_max must be at least 1"));
        }
        if !(self.conv_tol >= 0.0 && self.floor_tol >= 0.0) {
            return Err(Error::input("tolerances must be non-negative"));
        }
        Ok(())
    }
}

/// Velocities of all vertices at time `t`, with their normalized copies.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityState {
    dim: usize,
    t: usize,
    raw: Vec<f64>,
    unit: Vec<f64>,
}

impl VelocityState {
    /// Wraps explicit velocities (row-major, `dim` values per vertex) at `t = 0`.
    pub fn from_vectors(dim: usize, raw: Vec<f64>) -> Result<Self> {
        if dim == 0 || !raw.len().is_multiple_of(dim) {
            return Err(Error::input(
                "vector buffer length is not a multiple of dim",
            ));
        }
        let mut unit = raw.clone();
        for (i, chunk) in unit.chunks_exact_mut(dim).enumerate() {
            let norm = l2(chunk);
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::input(format!(
                    "velocity of vertex {i} has norm {norm}"
                )));
            }
            chunk.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(VelocityState {
            dim,
            t: 0,
            raw,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of steps applied since initialization.
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn vertex_count(&self) -> usize {
        self.raw.len() / self.dim
    }

    /// Unnormalized velocity `v_i(t)`.
    pub fn velocity(&self, i: usize) -> &[f64] {
        &self.raw[i * self.dim..(i + 1) * self.dim]
    }

    /// Normalized velocity `v̂_i(t)`.
    pub fn direction(&self, i: usize) -> &[f64] {
        &self.unit[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm(&self, i: usize) -> f64 {
        l2(self.velocity(i))
    }

    pub fn norms(&self) -> Vec<f64> {
        self.raw.chunks_exact(self.dim).map(l2).collect()
    }
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Independent uniformly random unit vectors, one per vertex.
pub fn init_state(g: &Graph, dim: usize, seed: u64) -> Result<VelocityState> {
    if dim < 2 {
        return Err(Error::input(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let mut rng = seed::rng(seed);
    let n = g.vertex_count();
    let mut raw = vec![0.0; n * dim];
    for chunk in raw.chunks_exact_mut(dim) {
        loop {
            for c in chunk.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            let norm = l2(chunk);
            if norm >= 1e-8 {
                chunk.iter_mut().for_each(|c| *c /= norm);
                break;
            }
        }
    }
    let unit = raw.clone();
    Ok(VelocityState {
        dim,
        t: 0,
        raw,
        unit,
    })
}

/// Applies one step of the alignment map.
pub fn step(g: &Graph, s: &VelocityState, alpha: f64) -> Result<VelocityState> {
    let mut out = s.clone();
    step_into(g, s, alpha, &mut out)?;
    Ok(out)
}

/// Writes the successor of `s` into `out`; returns the largest absolute change
/// of any normalized-velocity component.
fn step_into(g: &Graph, s: &VelocityState, alpha: f64, out: &mut VelocityState) -> Result<f64> {
    debug_assert_eq!(s.vertex_count(), g.vertex_count());
    out.dim = s.dim;
    out.t = s.t + 1;
    out.raw.resize(s.raw.len(), 0.0);
    out.unit.resize(s.unit.len(), 0.0);
    let bad = match s.dim {
        2 => step_fixed::<2>(g, &s.unit, alpha, &mut out.raw, &mut out.unit),
        3 => step_fixed::<3>(g, &s.unit, alpha, &mut out.raw, &mut out.unit),
        4 => step_fixed::<4>(g, &s.unit, alpha, &mut out.raw, &mut out.unit),
        d => step_dyn(g, d, &s.unit, alpha, &mut out.raw, &mut out.unit),
    };
    if let Some(i) = bad {
        return Err(Error::Invariant(format!(
            "velocity of vertex {i} vanished at t = {} (alpha = {alpha})",
            out.t
        )));
    }
    Ok(max_abs_diff(&s.unit, &out.unit))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Returns the first vertex whose new velocity has zero (or non-finite) norm.
fn step_fixed<const D: usize>(
    g: &Graph,
    unit: &[f64],
    alpha: f64,
    raw_out: &mut [f64],
    unit_out: &mut [f64],
) -> Option<usize> {
    let mut bad = None;
    for i in 0..g.vertex_count() {
        let own: [f64; D] = unit[i * D..(i + 1) * D].try_into().unwrap();
        let nbrs = g.neighbor_slice(i);
        let mut next = own;
        if !nbrs.is_empty() {
            let mut sum = [0.0; D];
            for &j in nbrs {
                let j = j as usize;
                for c in 0..D {
                    sum[c] += unit[j * D + c];
                }
            }
            let w = alpha / nbrs.len() as f64;
            for c in 0..D {
                next[c] = (1.0 - alpha) * own[c] + w * sum[c];
            }
        }
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) && bad.is_none() {
            bad = Some(i);
        }
        for c in 0..D {
            raw_out[i * D + c] = next[c];
            unit_out[i * D + c] = next[c] / norm;
        }
    }
    bad
}

fn step_dyn(
    g: &Graph,
    dim: usize,
    unit: &[f64],
    alpha: f64,
    raw_out: &mut [f64],
    unit_out: &mut [f64],
) -> Option<usize> {
    let mut bad = None;
    let mut sum = vec![0.0; dim];
    for i in 0..g.vertex_count() {
        let own = &unit[i * dim..(i + 1) * dim];
        let next = &mut raw_out[i * dim..(i + 1) * dim];
        let nbrs = g.neighbor_slice(i);
        if nbrs.is_empty() {
            next.copy_from_slice(own);
        } else {
            sum.iter_mut().for_each(|x| *x = 0.0);
            for &j in nbrs {
                let other = &unit[j as usize * dim..(j as usize + 1) * dim];
                sum.iter_mut().zip(other).for_each(|(s, x)| *s += x);
            }
            let w = alpha / nbrs.len() as f64;
            for c in 0..dim {
                next[c] = (1.0 - alpha) * own[c] + w * sum[c];
            }
        }
        let norm = l2(next);
        if !(norm > 0.0 && norm.is_finite()) && bad.is_none() {
            bad = Some(i);
        }
        for c in 0..dim {
            unit_out[i * dim + c] = next[c] / norm;
        }
    }
    bad
}

/// Which stopping rule ended a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxIterations,
    Converged,
    NumericalFloor,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::MaxIterations => "max_iterations",
            StopReason::Converged => "converged",
            StopReason::NumericalFloor => "numerical_floor",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub state: VelocityState,
    /// Steps executed.
    pub steps: usize,
    pub stop: StopReason,
}

/// Random initialization followed by steps until a stopping rule fires.
pub fn run(g: &Graph, p: &DynParams, seed: u64) -> Result<RunOutcome> {
    run_observed(g, p, seed, |_| {})
}

/// Like [`run`], calling `observe` on the initial state and after every step.
pub fn run_observed(
    g: &Graph,
    p: &DynParams,
    seed: u64,
    mut observe: impl FnMut(&VelocityState),
) -> Result<RunOutcome> {
    p.validate()?;
    let mut cur = init_state(g, p.dim, seed)?;
    observe(&cur);
    if p.floor_tol > 0.0 && below_floor(g, &cur, p.floor_tol) {
        return Ok(RunOutcome {
            state: cur,
            steps: 0,
            stop: StopReason::NumericalFloor,
        });
    }
    let mut next = cur.clone();
    while cur.t < p.t_max {
        let change = step_into(g, &cur, p.alpha, &mut next)?;
        std::mem::swap(&mut cur, &mut next);
        observe(&cur);
        let stop = if p.conv_tol > 0.0 && change < p.conv_tol {
            Some(StopReason::Converged)
        } else if p.floor_tol > 0.0 && below_floor(g, &cur, p.floor_tol) {
            Some(StopReason::NumericalFloor)
        } else {
            None
        };
        if let Some(stop) = stop {
            return Ok(RunOutcome {
                steps: cur.t,
                state: cur,
                stop,
            });
        }
    }
    Ok(RunOutcome {
        steps: cur.t,
        state: cur,
        stop: StopReason::MaxIterations,
    })
}

/// Per-edge misalignment coefficients, aligned with the live edge ids of the
/// graph they were measured on.
#[derive(Clone, Debug, PartialEq)]
pub struct MisalignmentTable {
    edge_ids: Vec<EdgeId>,
    values: Vec<f64>,
}

impl MisalignmentTable {
    pub fn from_parts(edge_ids: Vec<EdgeId>, values: Vec<f64>) -> Result<Self> {
        if edge_ids.len() != values.len() {
            return Err(Error::input("edge id and value lengths differ"));
        }
        if edge_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("edge ids must be strictly ascending"));
        }
        Ok(MisalignmentTable { edge_ids, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, e: EdgeId) -> Option<f64> {
        self.edge_ids.binary_search(&e).ok().map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, f64)> + '_ {
        self.edge_ids
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.values.iter().sum::<f64>() / self.values.len() as f64
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Adds another table over the same edge set, value by value.
    pub fn accumulate(&mut self, other: &MisalignmentTable) -> Result<()> {
        if self.edge_ids != other.edge_ids {
            return Err(Error::input("misalignment tables cover different edges"));
        }
        self.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a += b);
        Ok(())
    }

    /// The `k` most misaligned edges, largest first; equal values are ordered
    /// by ascending edge id.
    pub fn top_k(&self, k: usize) -> Vec<EdgeId> {
        let k = k.min(self.len());
        if k == 0 {
            return Vec::new();
        }
        let order = |a: &usize, b: &usize| {
            self.values[*b]
                .total_cmp(&self.values[*a])
                .then(self.edge_ids[*a].cmp(&self.edge_ids[*b]))
        };
        let mut idx: Vec<usize> = (0..self.len()).collect();
        if k < idx.len() {
            idx.select_nth_unstable_by(k - 1, order);
            idx.truncate(k);
        }
        idx.sort_unstable_by(order);
        idx.into_iter().map(|i| self.edge_ids[i]).collect()
    }
}

/// L1 distance between normalized endpoint velocities, for every live edge.
pub fn misalignment(g: &Graph, s: &VelocityState) -> MisalignmentTable {
    let values = g
        .edges()
        .map(|(_, u, v)| l1_distance(s.direction(u), s.direction(v)))
        .collect();
    MisalignmentTable {
        edge_ids: g.edge_ids().to_vec(),
        values,
    }
}

/// Mean edge misalignment; `0` for an edgeless graph.
pub fn mean_misalignment(g: &Graph, s: &VelocityState) -> f64 {
    let m = g.edge_count();
    if m == 0 {
        return 0.0;
    }
    let total: f64 = g
        .edges()
        .map(|(_, u, v)| l1_distance(s.direction(u), s.direction(v)))
        .sum();
    total / m as f64
}

/// `mean_misalignment(g, s) < floor`, stopping the sum as soon as it is
/// decided. Terms are non-negative, so partial sums only grow.
fn below_floor(g: &Graph, s: &VelocityState, floor: f64) -> bool {
    let m = g.edge_count();
    if m == 0 {
        return true;
    }
    let limit = floor * m as f64;
    let mut total = 0.0;
    for (_, u, v) in g.edges() {
        total += l1_distance(s.direction(u), s.direction(v));
        if total >= limit {
            return false;
        }
    }
    total / (m as f64) < floor
}

/// Seed of run `index` under a master seed.
pub fn run_seed(master: u64, index: usize) -> u64 {
    seed::derive(master, index as u64)
}

/// Sum of the final misalignment tables of `n_runs` independent runs.
///
/// Runs may execute concurrently; the sum is always taken in run order, so the
/// result is bit-identical for a fixed seed under any [`Exec`].
pub fn aggregate_runs(
    g: &Graph,
    p: &DynParams,
    n_runs: usize,
    seed: u64,
    exec: Exec,
) -> Result<MisalignmentTable> {
    if n_runs == 0 {
        return Err(Error::input("at least one run per round is required"));
    }
    p.validate()?;
    let tables = exec.try_map_indexed(n_runs, |r| {
        run(g, p, run_seed(seed, r)).map(|out| misalignment(g, &out.state))
    })?;
    let mut tables = tables.into_iter();
    let mut total = tables.next().expect("n_runs >= 1");
    for t in tables {
        total.accumulate(&t)?;
    }
    Ok(total)
}

/// Lyapunov energy `¼ Σ_i Σ_j A_ij ‖v̂_j − v̂_i‖²`, zero exactly when every
/// edge is aligned.
pub fn energy(g: &Graph, s: &VelocityState) -> f64 {
    0.5 * g
        .edges()
        .map(|(_, u, v)| {
            s.direction(u)
                .iter()
                .zip(s.direction(v))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum::<f64>()
}

/// Mean misalignment of intra- and inter-community edges at one time step.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SeparationPoint {
    pub t: usize,
    pub mean_intra: f64,
    pub mean_inter: f64,
}

/// Mean misalignment of intra- and inter-community edges (relative to
/// `truth`) in a single state. A class without edges reports `NaN`.
pub fn separation(g: &Graph, s: &VelocityState, truth: &Partition) -> (f64, f64) {
    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for (_, u, v) in g.edges() {
        let h = l1_distance(s.direction(u), s.direction(v));
        if truth.label(u) == truth.label(v) {
            intra += h;
            n_intra += 1;
        } else {
            inter += h;
            n_inter += 1;
        }
    }
    (intra / n_intra as f64, inter / n_inter as f64)
}

/// Time course of intra/inter misalignment averaged over `n_runs` runs.
///
/// Each run follows `p` including its stopping rules; the curve is truncated
/// to the shortest run.
pub fn separation_evolution(
    g: &Graph,
    truth: &Partition,
    p: &DynParams,
    n_runs: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<SeparationPoint>> {
    if truth.len() != g.vertex_count() {
        return Err(Error::input("ground truth does not cover the graph"));
    }
    if n_runs == 0 {
        return Err(Error::input("at least one run is required"));
    }
    let curves = exec.try_map_indexed(n_runs, |r| {
        let mut curve = Vec::with_capacity(p.t_max + 1);
        run_observed(g, p, run_seed(seed, r), |s| {
            curve.push(separation(g, s, truth))
        })?;
        Ok::<_, Error>(curve)
    })?;
    let len = curves.iter().map(Vec::len).min().unwrap_or(0);
    Ok((0..len)
        .map(|t| {
            let (a, b) = curves
                .iter()
                .fold((0.0, 0.0), |(a, b), c| (a + c[t].0, b + c[t].1));
            SeparationPoint {
                t,
                mean_intra: a / n_runs as f64,
                mean_inter: b / n_runs as f64,
            }
        })
        .collect())
}

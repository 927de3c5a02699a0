use crate::{
    usage, Algo, BaselineArgs, Classify, CliResult, DetectArgs, DynamicsArgs, EvaluateArgs, Format,
    GenerateArgs, InputArgs, StopArg, SweepArgs,
};
use anyhow::anyhow;
use flockcd::baselines;
use flockcd::detector::{detect_with_truth, Detection};
use flockcd::generators::{planted_partition, PlantedSpec};
use flockcd::io::{self, Dataset, Indexing, SCHEMA_COMMENT};
use flockcd::metrics;
use flockcd::{
    DetectionTrace, DetectorConfig, DynParams, Exec, Graph, Partition, Removal, StopRule,
};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub fn load_graph(path: &Path, format: Format) -> CliResult<Dataset> {
    match format {
        Format::Auto => io::read_dataset(path),
        Format::Edges => io::read_edge_list(path, Indexing::Zero),
        Format::Edges1 => io::read_edge_list(path, Indexing::One),
        Format::Gml => io::read_gml_subset(path),
        Format::Lfr => io::read_lfr_network(path),
    }
    .or_data()
}

fn load(input: &InputArgs) -> CliResult<Dataset> {
    load_graph(&input.input, input.format)
}

/// Reads a community file and checks it covers `g`.
pub fn load_truth(path: &Path, g: &Graph) -> CliResult<Partition> {
    let p = io::read_lfr_community(path).or_data()?;
    if p.len() != g.vertex_count() {
        return Err(crate::data(anyhow!(
            "{} assigns {} vertices but the network has {}",
            path.display(),
            p.len(),
            g.vertex_count()
        )));
    }
    Ok(p)
}

pub fn stop_rule(s: StopArg) -> StopRule {
    match s {
        StopArg::Exhaust => StopRule::Exhaust,
        StopArg::Patience(w) => StopRule::Patience(w),
    }
}

fn detector_config(d: &DynamicsArgs, removal: Removal, seed: u64) -> CliResult<DetectorConfig> {
    let cfg = DetectorConfig {
        dynamics: DynParams {
            alpha: d.alpha,
            dim: d.dims,
            t_max: d.tmax,
            conv_tol: d.conv_tol,
            ..DynParams::default()
        },
        runs_per_round: d.runs,
        removal,
        stop: stop_rule(d.stop),
        seed,
        exec: Exec::Parallel,
    };
    cfg.validate().or_usage()?;
    Ok(cfg)
}

fn create(path: &Path) -> CliResult<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| anyhow!("cannot create {}: {e}", dir.display()))
            .or_data()?;
    }
    fs::File::create(path)
        .map_err(|e| anyhow!("cannot write {}: {e}", path.display()))
        .or_data()
}

/// Writes rows as CSV preceded by the schema comment.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut f = create(path)?;
    writeln!(f, "{SCHEMA_COMMENT}").or_data()?;
    io::write_records_to(rows, None, f).or_data()
}

pub fn write_trace(path: &Path, trace: &DetectionTrace) -> CliResult<()> {
    let mut f = create(path)?;
    writeln!(f, "{SCHEMA_COMMENT}").or_data()?;
    io::write_trace_to(trace, f).or_data()
}

fn write_partition(path: &Path, p: &Partition) -> CliResult<()> {
    create(path)?;
    io::write_partition(path, p).or_data()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

pub fn generate(a: GenerateArgs) -> CliResult<()> {
    let spec = PlantedSpec {
        community_sizes: a.sizes,
        k_des: a.kdes,
        p_in: a.pin,
        seed: a.seed,
    };
    spec.validate().or_usage()?;
    let (g, truth) = planted_partition(&spec).or_usage()?;
    let prefix = a.out.into_os_string();
    let with_ext = |ext: &str| {
        let mut p = prefix.clone();
        p.push(ext);
        PathBuf::from(p)
    };
    let (edges, truth_path) = (with_ext(".edges"), with_ext(".truth"));
    create(&edges)?;
    io::write_edge_list(&edges, &g, Indexing::Zero).or_data()?;
    io::write_partition(&truth_path, &truth).or_data()?;
    println!(
        "vertices={} edges={} mean_degree={:.4} wrote {} {}",
        g.vertex_count(),
        g.edge_count(),
        2.0 * g.edge_count() as f64 / g.vertex_count() as f64,
        edges.display(),
        truth_path.display()
    );
    Ok(())
}

pub fn detect(a: DetectArgs) -> CliResult<()> {
    let removal = match (a.removal.remove_count, a.removal.remove_frac) {
        (_, Some(f)) => Removal::Fraction(f),
        (Some(k), None) => Removal::Count(k),
        (None, None) => Removal::Count(1),
    };
    let cfg = detector_config(&a.dynamics, removal, a.seed)?;
    let ds = load(&a.input)?;
    let truth = a
        .truth
        .as_deref()
        .map(|t| load_truth(t, &ds.graph))
        .transpose()?;
    let Detection {
        partition,
        modularity,
        trace,
    } = detect_with_truth(&ds.graph, &cfg, truth.as_ref()).or_data()?;
    if let Some(p) = &a.trace_out {
        write_trace(p, &trace)?;
    }
    if let Some(p) = &a.partition_out {
        write_partition(p, &partition)?;
    }
    let best = trace.best();
    println!(
        "best_q={} best_round={} communities={} rounds={} ari={} nmi={}",
        fmt_opt(modularity),
        best.map_or_else(|| "NA".into(), |r| r.round.to_string()),
        partition.community_count(),
        trace.rounds.len(),
        fmt_opt(best.and_then(|r| r.ari)),
        fmt_opt(best.and_then(|r| r.nmi)),
    );
    Ok(())
}

pub fn baseline(a: BaselineArgs) -> CliResult<()> {
    let ds = load(&a.input)?;
    let (name, partition, q) = match a.algo {
        Algo::Cfg => {
            let r = baselines::cfg(&ds.graph).or_data()?;
            ("cfg", r.partition, r.modularity)
        }
        Algo::Louvain => {
            let r = baselines::louvain(&ds.graph, a.seed).or_data()?;
            ("louvain", r.partition, r.modularity)
        }
    };
    if let Some(p) = &a.partition_out {
        write_partition(p, &partition)?;
    }
    println!(
        "algo={name} q={q:.6} communities={}",
        partition.community_count()
    );
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> CliResult<()> {
    let pa = io::read_lfr_community(&a.a).or_data()?;
    let pb = io::read_lfr_community(&a.b).or_data()?;
    let q = match &a.graph {
        Some(path) => {
            let ds = load_graph(path, a.format)?;
            Some(metrics::modularity(&ds.graph, &pa).or_data()?)
        }
        None => None,
    };
    let ari = metrics::adjusted_rand_index(&pa, &pb).or_data()?;
    let nmi = metrics::nmi(&pa, &pb).or_data()?;
    println!("modularity,ari,nmi");
    println!(
        "{},{ari},{nmi}",
        q.map_or_else(String::new, |q| q.to_string())
    );
    Ok(())
}

/// One grid point of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub t_max: usize,
    pub removal_mode: &'static str,
    pub removal_value: f64,
    pub runs: usize,
    pub rounds: usize,
    pub best_round: Option<usize>,
    pub best_q: Option<f64>,
    pub n_components: Option<usize>,
    pub ari: Option<f64>,
    pub nmi: Option<f64>,
}

/// Runs `detect` at every (alpha, t_max, removal) combination. All grid
/// points share `base.seed`.
pub fn sweep_grid(
    g: &Graph,
    truth: Option<&Partition>,
    base: &DetectorConfig,
    alphas: &[f64],
    t_maxes: &[usize],
    removals: &[Removal],
) -> CliResult<Vec<SweepRow>> {
    let mut grid = Vec::new();
    for &alpha in alphas {
        for &t_max in t_maxes {
            for &removal in removals {
                let cfg = DetectorConfig {
                    dynamics: DynParams {
                        alpha,
                        t_max,
                        ..base.dynamics
                    },
                    removal,
                    ..base.clone()
                };
                cfg.validate().or_usage()?;
                grid.push(cfg);
            }
        }
    }
    Exec::Parallel.try_map_indexed(grid.len(), |i| {
        let cfg = &grid[i];
        let d = detect_with_truth(g, cfg, truth).or_data()?;
        let best = d.trace.best();
        let (removal_mode, removal_value) = match cfg.removal {
            Removal::Count(k) => ("count", k as f64),
            Removal::Fraction(f) => ("fraction", f),
        };
        log::info!(
            "alpha={} t_max={} {removal_mode}={removal_value}: Q={:?}",
            cfg.dynamics.alpha,
            cfg.dynamics.t_max,
            d.modularity
        );
        Ok(SweepRow {
            alpha: cfg.dynamics.alpha,
            t_max: cfg.dynamics.t_max,
            removal_mode,
            removal_value,
            runs: cfg.runs_per_round,
            rounds: d.trace.rounds.len(),
            best_round: best.map(|r| r.round),
            best_q: d.modularity,
            n_components: best.map(|r| r.n_components),
            ari: best.and_then(|r| r.ari),
            nmi: best.and_then(|r| r.nmi),
        })
    })
}

pub fn sweep(a: SweepArgs) -> CliResult<()> {
    let removals: Vec<Removal> = match &a.remove_counts {
        Some(counts) => counts.iter().map(|&k| Removal::Count(k)).collect(),
        None => a
            .remove_fracs
            .iter()
            .map(|&f| Removal::Fraction(f))
            .collect(),
    };
    if a.alphas.is_empty() || a.tmax.is_empty() || removals.is_empty() {
        return Err(usage(anyhow!("sweep grid is empty")));
    }
    let base = DetectorConfig {
        dynamics: DynParams {
            dim: a.dims,
            conv_tol: a.conv_tol,
            ..DynParams::default()
        },
        runs_per_round: a.runs,
        stop: stop_rule(a.stop),
        seed: a.seed,
        ..DetectorConfig::default()
    };
    let ds = load(&a.input)?;
    let truth = a
        .truth
        .as_deref()
        .map(|t| load_truth(t, &ds.graph))
        .transpose()?;
    let rows = sweep_grid(
        &ds.graph,
        truth.as_ref(),
        &base,
        &a.alphas,
        &a.tmax,
        &removals,
    )?;
    write_csv(&a.out, &rows)?;
    let best = rows.iter().filter_map(|r| r.best_q.map(|q| (q, r))).fold(
        None,
        |acc: Option<(f64, &SweepRow)>, (q, r)| match acc {
            Some((b, _)) if b >= q => acc,
            _ => Some((q, r)),
        },
    );
    match best {
        Some((q, r)) => println!(
            "best_q={q:.6} alpha={} t_max={} {}={} ({} grid points, wrote {})",
            r.alpha,
            r.t_max,
            r.removal_mode,
            r.removal_value,
            rows.len(),
            a.out.display()
        ),
        None => println!("no edges to remove; wrote {}", a.out.display()),
    }
    Ok(())
}

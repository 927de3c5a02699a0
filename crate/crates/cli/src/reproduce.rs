//! Benchmark bundles. Every file starts with the schema comment and is
//! written by the coordinating thread after all trials have finished.

use crate::commands::{load_truth, sweep_grid, write_csv, SweepRow};
use crate::{data, Bundle, Classify, CliResult, ReproduceArgs};
use anyhow::anyhow;
use flockcd::baselines;
use flockcd::detector::detect_with_truth;
use flockcd::dynamics::{separation_evolution, SeparationPoint};
use flockcd::generators::{planted_partition, PlantedSpec};
use flockcd::io::{self, trace_rows};
use flockcd::{metrics, seed};
use flockcd::{DetectorConfig, DynParams, Exec, Graph, Partition, Removal, StopRule};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

const DATASETS: [&str; 4] = ["karate", "dolphins", "football", "polbooks"];
const LFR_MUS: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];

fn planted(sizes: &[usize], k_des: usize, seed: u64) -> CliResult<(Graph, Partition)> {
    planted_partition(&PlantedSpec {
        community_sizes: sizes.to_vec(),
        k_des,
        p_in: 0.66,
        seed,
    })
    .or_data()
}

fn detector(removal: Removal, stop: StopRule, seed: u64) -> DetectorConfig {
    DetectorConfig {
        dynamics: DynParams {
            alpha: 0.1,
            t_max: 100,
            ..DynParams::default()
        },
        runs_per_round: 10,
        removal,
        stop,
        seed,
        exec: Exec::Parallel,
    }
}

fn lfr_detector(seed: u64) -> DetectorConfig {
    DetectorConfig {
        dynamics: DynParams {
            alpha: 0.05,
            t_max: 1000,
            conv_tol: 1e-3,
            ..DynParams::default()
        },
        runs_per_round: 10,
        removal: Removal::Count(1),
        stop: StopRule::Patience(5),
        seed,
        exec: Exec::Parallel,
    }
}

#[derive(Serialize)]
struct Fig2Row {
    round: usize,
    edges_removed_total: usize,
    n_components: usize,
    modularity: f64,
    ari: Option<f64>,
    nmi: Option<f64>,
    cfg_q: f64,
    louvain_q: f64,
}

#[derive(Serialize)]
struct SeparationRow {
    network: String,
    trial: usize,
    t: usize,
    mean_intra: f64,
    mean_inter: f64,
    mean_all: f64,
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct Fig5TraceRow {
    trial: usize,
    mode: String,
    round: usize,
    edges_removed_total: usize,
    n_components: usize,
    modularity: f64,
    ari: Option<f64>,
    nmi: Option<f64>,
}

#[derive(Serialize)]
struct MethodRow {
    trial: usize,
    network_seed: u64,
    method: String,
    rounds: Option<usize>,
    best_round: Option<usize>,
    modularity: f64,
    ari: f64,
    nmi: f64,
}

#[derive(Serialize)]
struct LfrRow {
    mu: f64,
    trial: String,
    method: String,
    modularity: f64,
    ari: f64,
    nmi: f64,
}

#[derive(Serialize)]
struct Table1Row {
    dataset: String,
    n: usize,
    m: usize,
    best_q: Option<f64>,
    alpha: Option<f64>,
    t_max: Option<usize>,
    removal_fraction: Option<f64>,
    cfg_q: f64,
    louvain_q: f64,
}

fn default_trials(b: Bundle) -> usize {
    match b {
        Bundle::Fig2 | Bundle::Fig4 | Bundle::Fig6 | Bundle::Table1 => 1,
        Bundle::Fig5 | Bundle::Fig7 => 50,
        Bundle::Fig8 => 30,
    }
}

pub fn run(a: ReproduceArgs) -> CliResult<()> {
    let trials = a.trials.unwrap_or_else(|| default_trials(a.name));
    if trials == 0 {
        return Err(crate::usage(anyhow!("--trials must be at least 1")));
    }
    fs::create_dir_all(&a.out)
        .map_err(|e| anyhow!("cannot create {}: {e}", a.out.display()))
        .or_data()?;
    let written = match a.name {
        Bundle::Fig2 => fig2(a.seed, &a.out)?,
        Bundle::Fig4 => separation_bundle(
            "fig4",
            &[("balanced", vec![200; 4], 10)],
            a.seed,
            trials,
            &a.out,
        )?,
        Bundle::Fig6 => separation_bundle(
            "fig6",
            &[("big", vec![1000; 4], 10), ("dense", vec![200; 4], 40)],
            a.seed,
            trials,
            &a.out,
        )?,
        Bundle::Fig5 => box_bundle(
            "fig5",
            &[200; 4],
            &[Removal::Count(1), Removal::Count(20), Removal::Count(80)],
            a.seed,
            trials,
            &a.out,
        )?,
        Bundle::Fig7 => box_bundle(
            "fig7",
            &[800, 400, 200, 100],
            &[Removal::Count(1)],
            a.seed,
            trials,
            &a.out,
        )?,
        Bundle::Fig8 => fig8(&a.lfr_dir, a.seed, trials, &a.out)?,
        Bundle::Table1 => table1(&a.data_dir, a.seed, &a.out)?,
    };
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn fig2(seed: u64, out: &Path) -> CliResult<Vec<PathBuf>> {
    let net_seed = seed::derive(seed, 0);
    let (g, truth) = planted(&[200; 4], 10, net_seed)?;
    let cfg = detector(
        Removal::Count(1),
        StopRule::Exhaust,
        seed::derive(net_seed, 1),
    );
    let d = detect_with_truth(&g, &cfg, Some(&truth)).or_data()?;
    let cfg_q = baselines::cfg(&g).or_data()?.modularity;
    let louvain_q = baselines::louvain(&g, seed::derive(net_seed, 2))
        .or_data()?
        .modularity;
    let rows: Vec<Fig2Row> = trace_rows(&d.trace)
        .into_iter()
        .map(|r| Fig2Row {
            round: r.round,
            edges_removed_total: r.edges_removed_total,
            n_components: r.n_components,
            modularity: r.modularity,
            ari: r.ari,
            nmi: r.nmi,
            cfg_q,
            louvain_q,
        })
        .collect();
    let path = out.join("fig2_trace.csv");
    write_csv(&path, &rows)?;
    Ok(vec![path])
}

fn separation_bundle(
    name: &str,
    networks: &[(&str, Vec<usize>, usize)],
    seed: u64,
    trials: usize,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    let params = DynParams {
        alpha: 0.1,
        t_max: 2000,
        ..DynParams::default()
    };
    let jobs: Vec<(usize, usize)> = (0..networks.len())
        .flat_map(|k| (0..trials).map(move |t| (k, t)))
        .collect();
    let chunks = Exec::Parallel.try_map_indexed(jobs.len(), |j| {
        let (k, trial) = jobs[j];
        let (label, sizes, k_des) = &networks[k];
        let net_seed = seed::derive(seed::derive(seed, k as u64), trial as u64);
        let (g, truth) = planted(sizes, *k_des, net_seed)?;
        let curve = separation_evolution(
            &g,
            &truth,
            &params,
            10,
            seed::derive(net_seed, 1),
            Exec::Parallel,
        )
        .or_data()?;
        let intra_edges = g
            .edges()
            .filter(|&(_, u, v)| truth.label(u) == truth.label(v))
            .count();
        let share = intra_edges as f64 / g.edge_count() as f64;
        Ok(curve
            .into_iter()
            .map(
                |SeparationPoint {
                     t,
                     mean_intra,
                     mean_inter,
                 }| SeparationRow {
                    network: label.to_string(),
                    trial,
                    t,
                    mean_intra,
                    mean_inter,
                    mean_all: share * mean_intra + (1.0 - share) * mean_inter,
                    ratio: (mean_intra > 0.0).then(|| mean_inter / mean_intra),
                },
            )
            .collect::<Vec<_>>())
    })?;
    let rows: Vec<SeparationRow> = chunks.into_iter().flatten().collect();
    let path = out.join(format!("{name}_misalignment.csv"));
    write_csv(&path, &rows)?;
    Ok(vec![path])
}

fn mode_name(r: Removal) -> String {
    match r {
        Removal::Count(k) => format!("count_{k}"),
        Removal::Fraction(f) => format!("fraction_{f}"),
    }
}

fn box_bundle(
    name: &str,
    sizes: &[usize],
    modes: &[Removal],
    seed: u64,
    trials: usize,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    let per_trial = Exec::Parallel.try_map_indexed(trials, |trial| {
        let net_seed = seed::derive(seed, trial as u64);
        let (g, truth) = planted(sizes, 10, net_seed)?;
        let mut traces = Vec::new();
        let mut summary = Vec::new();
        for &mode in modes {
            let cfg = detector(mode, StopRule::Patience(5), seed::derive(net_seed, 1));
            let d = detect_with_truth(&g, &cfg, Some(&truth)).or_data()?;
            let best = d
                .trace
                .best()
                .ok_or_else(|| data(anyhow!("network without edges")))?;
            summary.push(MethodRow {
                trial,
                network_seed: net_seed,
                method: format!("flock_{}", mode_name(mode)),
                rounds: Some(d.trace.rounds.len()),
                best_round: Some(best.round),
                modularity: best.modularity,
                ari: best.ari.unwrap_or(f64::NAN),
                nmi: best.nmi.unwrap_or(f64::NAN),
            });
            traces.extend(trace_rows(&d.trace).into_iter().map(|r| Fig5TraceRow {
                trial,
                mode: mode_name(mode),
                round: r.round,
                edges_removed_total: r.edges_removed_total,
                n_components: r.n_components,
                modularity: r.modularity,
                ari: r.ari,
                nmi: r.nmi,
            }));
        }
        let cfg_r = baselines::cfg(&g).or_data()?;
        let louvain_r = baselines::louvain(&g, seed::derive(net_seed, 2)).or_data()?;
        for (method, p, q) in [
            ("cfg", &cfg_r.partition, cfg_r.modularity),
            ("louvain", &louvain_r.partition, louvain_r.modularity),
        ] {
            summary.push(MethodRow {
                trial,
                network_seed: net_seed,
                method: method.to_string(),
                rounds: None,
                best_round: None,
                modularity: q,
                ari: metrics::adjusted_rand_index(&truth, p).or_data()?,
                nmi: metrics::nmi(&truth, p).or_data()?,
            });
        }
        log::info!("{name} trial {trial} done");
        Ok((traces, summary))
    })?;
    let (traces, summary): (Vec<_>, Vec<_>) = per_trial.into_iter().unzip();
    let trace_path = out.join(format!("{name}_trace.csv"));
    let summary_path = out.join(format!("{name}_summary.csv"));
    write_csv(
        &trace_path,
        &traces.into_iter().flatten().collect::<Vec<_>>(),
    )?;
    write_csv(
        &summary_path,
        &summary.into_iter().flatten().collect::<Vec<_>>(),
    )?;
    Ok(vec![trace_path, summary_path])
}

/// `(μ, trial name, directory)` for every LFR instance found under `root`.
fn lfr_instances(root: &Path, trials: usize) -> CliResult<Vec<(f64, String, PathBuf)>> {
    let mut found = Vec::new();
    for mu in LFR_MUS {
        let dir = root.join(format!("mu_{mu}"));
        let Ok(entries) = fs::read_dir(&dir) else {
            continue;
        };
        let mut names: Vec<String> = entries
            .filter_map(|e| e.ok())
            .filter(|e| {
                e.path().join("network.dat").is_file() && e.path().join("community.dat").is_file()
            })
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        found.extend(
            names
                .into_iter()
                .take(trials)
                .map(|n| (mu, n.clone(), dir.join(n))),
        );
    }
    if found.is_empty() {
        return Err(data(anyhow!(
            "no LFR instances under {} (expected mu_<μ>/<trial>/network.dat and community.dat)",
            root.display()
        )));
    }
    Ok(found)
}

fn fig8(root: &Path, seed: u64, trials: usize, out: &Path) -> CliResult<Vec<PathBuf>> {
    let instances = lfr_instances(root, trials)?;
    let per = Exec::Parallel.try_map_indexed(instances.len(), |k| {
        let (mu, trial, dir) = &instances[k];
        let g = io::read_lfr_network(dir.join("network.dat"))
            .or_data()?
            .graph;
        let truth = load_truth(&dir.join("community.dat"), &g)?;
        let inst_seed = seed::derive(seed, k as u64);
        let d = detect_with_truth(&g, &lfr_detector(inst_seed), Some(&truth)).or_data()?;
        let cfg_r = baselines::cfg(&g).or_data()?;
        let louvain_r = baselines::louvain(&g, seed::derive(inst_seed, 2)).or_data()?;
        let mut rows = Vec::new();
        for (method, p, q) in [
            ("flock", &d.partition, d.modularity.unwrap_or(0.0)),
            ("cfg", &cfg_r.partition, cfg_r.modularity),
            ("louvain", &louvain_r.partition, louvain_r.modularity),
        ] {
            rows.push(LfrRow {
                mu: *mu,
                trial: trial.clone(),
                method: method.to_string(),
                modularity: q,
                ari: metrics::adjusted_rand_index(&truth, p).or_data()?,
                nmi: metrics::nmi(&truth, p).or_data()?,
            });
        }
        log::info!("fig8 mu={mu} {trial} done");
        Ok(rows)
    })?;
    let path = out.join("fig8_nmi.csv");
    write_csv(&path, &per.into_iter().flatten().collect::<Vec<_>>())?;
    Ok(vec![path])
}

fn table1(data_dir: &Path, seed: u64, out: &Path) -> CliResult<Vec<PathBuf>> {
    let base = DetectorConfig {
        runs_per_round: 30,
        stop: StopRule::Exhaust,
        seed,
        ..DetectorConfig::default()
    };
    let fractions: Vec<Removal> = (1..=10)
        .map(|p| Removal::Fraction(p as f64 / 100.0))
        .collect();
    let t_maxes = [30, 40, 50, 60, 70];
    let mut rows = Vec::new();
    let mut written = Vec::new();
    let mut missing = Vec::new();
    for name in DATASETS {
        let path = data_dir.join(format!("{name}.gml"));
        if !path.is_file() {
            missing.push(path.display().to_string());
            continue;
        }
        let g = io::read_gml_subset(&path).or_data()?.graph;
        let grid = sweep_grid(&g, None, &base, &[0.1], &t_maxes, &fractions)?;
        let best: Option<&SweepRow> =
            grid.iter()
                .filter(|r| r.best_q.is_some())
                .fold(None, |acc, r| match acc {
                    Some(b) if b.best_q >= r.best_q => Some(b),
                    _ => Some(r),
                });
        let grid_path = out.join(format!("table1_grid_{name}.csv"));
        write_csv(&grid_path, &grid)?;
        written.push(grid_path);
        rows.push(Table1Row {
            dataset: name.to_string(),
            n: g.vertex_count(),
            m: g.edge_count(),
            best_q: best.and_then(|r| r.best_q),
            alpha: best.map(|r| r.alpha),
            t_max: best.map(|r| r.t_max),
            removal_fraction: best.map(|r| r.removal_value),
            cfg_q: baselines::cfg(&g).or_data()?.modularity,
            louvain_q: baselines::louvain(&g, seed::derive(seed, 2))
                .or_data()?
                .modularity,
        });
    }
    let path = out.join("table1.csv");
    write_csv(&path, &rows)?;
    written.push(path);
    if !missing.is_empty() {
        for p in &written {
            println!("wrote {}", p.display());
        }
        return Err(data(anyhow!("missing datasets: {}", missing.join(", "))));
    }
    Ok(written)
}

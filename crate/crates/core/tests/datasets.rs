mod common;

use common::data_dir;
use flockcd::io;
use std::fs;

/// Counts `node` and `edge` blocks by scanning tokens, without the parser.
fn gml_block_counts(text: &str) -> (usize, usize) {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let count = |key: &str| {
        tokens
            .windows(2)
            .filter(|w| w[0] == key && w[1] == "[")
            .count()
    };
    (count("node"), count("edge"))
}

#[test]
fn karate_matches_its_file() {
    let path = data_dir().join("karate.gml");
    let text = fs::read_to_string(&path).expect("karate.gml ships with the repository");
    let (nodes, edges) = gml_block_counts(&text);
    let ds = io::read_gml_subset(&path).unwrap();
    assert_eq!(
        (ds.graph.vertex_count(), ds.graph.edge_count()),
        (nodes, edges)
    );
    assert_eq!((nodes, edges), (34, 78));
    let truth = ds.ground_truth.expect("factions are stored as node values");
    assert_eq!(truth.community_count(), 2);
    let names = ds.vertex_names.unwrap();
    assert_eq!(names.first().map(String::as_str), Some("1"));
    assert_eq!(names.len(), 34);
}

#[test]
fn other_real_world_files_parse_when_present() {
    for name in ["dolphins", "football", "polbooks"] {
        let path = data_dir().join(format!("{name}.gml"));
        let Ok(text) = fs::read_to_string(&path) else {
            continue;
        };
        let (nodes, edges) = gml_block_counts(&text);
        let ds = io::read_gml_subset(&path).unwrap();
        assert_eq!(ds.graph.vertex_count(), nodes, "{name}");
        assert!(ds.graph.edge_count() <= edges, "{name}");
    }
}

#[test]
fn generated_lfr_files_have_half_as_many_edges_as_lines() {
    let root = data_dir().join("lfr");
    let Ok(mus) = fs::read_dir(&root) else { return };
    let mut checked = 0;
    for mu in mus.filter_map(Result::ok) {
        let Ok(trials) = fs::read_dir(mu.path()) else {
            continue;
        };
        for trial in trials.filter_map(Result::ok).take(2) {
            let net = trial.path().join("network.dat");
            let Ok(text) = fs::read_to_string(&net) else {
                continue;
            };
            let lines = text.lines().filter(|l| !l.trim().is_empty()).count();
            let ds = io::read_lfr_network(&net).unwrap();
            assert_eq!(ds.graph.edge_count() * 2, lines, "{}", net.display());
            let truth = io::read_lfr_community(trial.path().join("community.dat")).unwrap();
            assert_eq!(truth.len(), ds.graph.vertex_count());
            checked += 1;
        }
    }
    eprintln!("checked {checked} LFR instances");
}

//! Dataset ingestion and result emission.
//!
//! Supported inputs:
//!
//! - whitespace-separated edge lists, zero- or one-indexed, `#` comments;
//! - LFR benchmark files: `network.dat` (one-indexed, every edge listed in
//!   both directions) and `community.dat` (`node community` per line);
//! - the GML subset used by the classic social-network datasets
//!   (`graph [ node [ id label value ] edge [ source target ] ]`).
//!
//! Results are written as plain CSV with a header row. Floats are written in
//! shortest round-trip form, so reading a file back reproduces the values.

use crate::detector::{DetectionTrace, RoundRecord};
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// First line of versioned result files.
pub const SCHEMA_COMMENT: &str = "# schema=1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Indexing {
    Zero,
    One,
}

impl Indexing {
    fn offset(self) -> u64 {
        match self {
            Indexing::Zero => 0,
            Indexing::One => 1,
        }
    }
}

/// Where a dataset came from, plus anything known about how it was made.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DatasetMeta {
    pub source: String,
    /// LFR mixing parameter μ, when known.
    pub mixing: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: Graph,
    /// External name of each vertex, indexed by dense vertex id.
    pub vertex_names: Option<Vec<String>>,
    pub ground_truth: Option<Partition>,
    pub meta: DatasetMeta,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_id(token: &str, indexing: Indexing, path: &Path, line: usize) -> Result<usize> {
    let raw: i64 = token.parse().map_err(|_| {
        parse_err(
            path,
            line,
            format!("expected an integer vertex id, found {token:?}"),
        )
    })?;
    if raw < indexing.offset() as i64 {
        return Err(parse_err(
            path,
            line,
            format!(
                "vertex id {raw} is below the first valid id {}",
                indexing.offset()
            ),
        ));
    }
    Ok((raw as u64 - indexing.offset()) as usize)
}

fn parse_pairs(text: &str, indexing: Indexing, path: &Path) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(
                path,
                k + 1,
                format!("expected two vertex ids, found {} tokens", tokens.len()),
            ));
        }
        pairs.push((
            parse_id(tokens[0], indexing, path, k + 1)?,
            parse_id(tokens[1], indexing, path, k + 1)?,
        ));
    }
    Ok(pairs)
}

fn vertex_bound(pairs: &[(usize, usize)]) -> usize {
    pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0)
}

/// Parses an edge list held in memory; `path` only labels error messages.
pub fn parse_edge_list(text: &str, indexing: Indexing, path: &Path) -> Result<Dataset> {
    let pairs = parse_pairs(text, indexing, path)?;
    let graph = Graph::from_pairs(vertex_bound(&pairs), pairs)?;
    Ok(Dataset {
        graph,
        vertex_names: None,
        ground_truth: None,
        meta: DatasetMeta {
            source: path.display().to_string(),
            mixing: None,
        },
    })
}

pub fn read_edge_list(path: impl AsRef<Path>, indexing: Indexing) -> Result<Dataset> {
    let path = path.as_ref();
    parse_edge_list(&read_text(path)?, indexing, path)
}

/// Reads an LFR `network.dat`. Edges are expected in both directions; a
/// warning is logged if some are listed only once.
pub fn read_lfr_network(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let pairs = parse_pairs(&read_text(path)?, Indexing::One, path)?;
    let directed: std::collections::HashSet<(usize, usize)> = pairs.iter().copied().collect();
    let one_sided = directed
        .iter()
        .filter(|&&(a, b)| a != b && !directed.contains(&(b, a)))
        .count();
    if one_sided > 0 {
        log::warn!(
            "{}: {one_sided} edges are listed in one direction only",
            path.display()
        );
    }
    let graph = Graph::from_pairs(vertex_bound(&pairs), pairs)?;
    Ok(Dataset {
        graph,
        vertex_names: None,
        ground_truth: None,
        meta: DatasetMeta {
            source: path.display().to_string(),
            mixing: None,
        },
    })
}

/// Parses `node community` lines (one-indexed nodes). Community ids are
/// relabelled densely in order of first appearance by node.
pub fn parse_community(text: &str, path: &Path) -> Result<Partition> {
    let mut entries: HashMap<usize, String> = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(
                path,
                k + 1,
                format!("expected `node community`, found {} tokens", tokens.len()),
            ));
        }
        let node = parse_id(tokens[0], Indexing::One, path, k + 1)?;
        if entries.insert(node, tokens[1].to_string()).is_some() {
            return Err(parse_err(
                path,
                k + 1,
                format!("node {} listed twice", node + 1),
            ));
        }
    }
    let n = entries.keys().max().map_or(0, |&v| v + 1);
    let missing: Vec<String> = (0..n)
        .filter(|v| !entries.contains_key(v))
        .map(|v| (v + 1).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(parse_err(
            path,
            0,
            format!("missing node ids: {}", missing.join(", ")),
        ));
    }
    let mut ids = HashMap::new();
    let labels = (0..n)
        .map(|v| {
            let next = ids.len();
            *ids.entry(entries[&v].clone()).or_insert(next)
        })
        .collect();
    Ok(Partition::from_labels(labels))
}

/// Reads an LFR `community.dat` (or any partition written by
/// [`write_partition`]).
pub fn read_lfr_community(path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    parse_community(&read_text(path)?, path)
}

/// Writes a partition as one-indexed `node<TAB>community` lines.
pub fn write_partition(path: impl AsRef<Path>, p: &Partition) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(p.len() * 8);
    for (v, &l) in p.canonical().labels().iter().enumerate() {
        out.push_str(&format!("{}\t{}\n", v + 1, l + 1));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes live edges as `u v` lines, one per edge.
pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph, indexing: Indexing) -> Result<()> {
    let path = path.as_ref();
    let off = indexing.offset() as usize;
    let mut out = format!("# vertices={} edges={}\n", g.vertex_count(), g.edge_count());
    for (_, u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + off, v + off));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------------------
// GML

#[derive(Debug)]
enum Token {
    Open,
    Close,
    Atom(String),
    Text(String),
}

fn tokenize_gml(text: &str, path: &Path) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '[' => {
                tokens.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                tokens.push((Token::Close, line));
                chars.next();
            }
            '#' => while chars.next_if(|&c| c != '\n').is_some() {},
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(c) => s.push(c),
                        None => return Err(parse_err(path, start, "unterminated string")),
                    }
                }
                tokens.push((Token::Text(s), start));
            }
            _ => {
                let mut s = String::new();
                while let Some(c) = chars.next_if(|c| !c.is_whitespace() && *c != '[' && *c != ']')
                {
                    s.push(c);
                }
                tokens.push((Token::Atom(s), line));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug)]
enum GmlValue {
    Scalar(String),
    List(Vec<(String, GmlValue, usize)>),
}

struct GmlParser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    path: &'a Path,
}

impl GmlParser<'_> {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(0, |t| t.1)
    }

    /// Parses `key value` pairs until a closing bracket (nested) or EOF (top).
    fn list(&mut self, nested: bool) -> Result<Vec<(String, GmlValue, usize)>> {
        let mut items = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos) else {
                if nested {
                    return Err(parse_err(self.path, self.line(), "missing closing ']'"));
                }
                return Ok(items);
            };
            let line = *line;
            let key = match tok {
                Token::Close if nested => {
                    self.pos += 1;
                    return Ok(items);
                }
                Token::Atom(k) => k.clone(),
                other => {
                    return Err(parse_err(
                        self.path,
                        line,
                        format!("expected a key, found {other:?}"),
                    ))
                }
            };
            self.pos += 1;
            let value = match self.tokens.get(self.pos) {
                Some((Token::Open, _)) => {
                    self.pos += 1;
                    GmlValue::List(self.list(true)?)
                }
                Some((Token::Atom(v), _)) | Some((Token::Text(v), _)) => {
                    let v = v.clone();
                    self.pos += 1;
                    GmlValue::Scalar(v)
                }
                _ => {
                    return Err(parse_err(
                        self.path,
                        line,
                        format!("key {key:?} has no value"),
                    ))
                }
            };
            items.push((key, value, line));
        }
    }
}

/// Parses the GML subset in memory; `path` only labels error messages.
pub fn parse_gml(text: &str, path: &Path) -> Result<Dataset> {
    let tokens = tokenize_gml(text, path)?;
    let mut parser = GmlParser {
        tokens,
        pos: 0,
        path,
    };
    let top = parser.list(false)?;
    let graph_items = top
        .into_iter()
        .find_map(|(k, v, _)| match (k.as_str(), v) {
            ("graph", GmlValue::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| parse_err(path, 1, "no `graph [ ... ]` block"))?;

    struct Node {
        id: String,
        label: Option<String>,
        value: Option<String>,
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut raw_edges: Vec<(String, String, usize)> = Vec::new();
    for (key, value, line) in graph_items {
        match (key.as_str(), value) {
            ("directed", GmlValue::Scalar(v)) => {
                if v.trim() != "0" {
                    return Err(parse_err(path, line, "directed graphs are not supported"));
                }
            }
            ("node", GmlValue::List(fields)) => {
                let (mut id, mut label, mut val) = (None, None, None);
                for (k, v, _) in fields {
                    if let GmlValue::Scalar(s) = v {
                        match k.as_str() {
                            "id" => id = Some(s),
                            "label" => label = Some(s),
                            "value" => val = Some(s),
                            _ => {}
                        }
                    }
                }
                let id = id.ok_or_else(|| parse_err(path, line, "node without id"))?;
                nodes.push(Node {
                    id,
                    label,
                    value: val,
                });
            }
            ("edge", GmlValue::List(fields)) => {
                let (mut s, mut t) = (None, None);
                for (k, v, _) in fields {
                    if let GmlValue::Scalar(x) = v {
                        match k.as_str() {
                            "source" => s = Some(x),
                            "target" => t = Some(x),
                            _ => {}
                        }
                    }
                }
                match (s, t) {
                    (Some(s), Some(t)) => raw_edges.push((s, t, line)),
                    _ => return Err(parse_err(path, line, "edge needs source and target")),
                }
            }
            ("node" | "edge", GmlValue::Scalar(_)) => {
                return Err(parse_err(
                    path,
                    line,
                    format!("`{key}` must be a [ ... ] block"),
                ))
            }
            _ => {}
        }
    }

    let mut index = HashMap::with_capacity(nodes.len());
    for (k, node) in nodes.iter().enumerate() {
        if index.insert(node.id.clone(), k).is_some() {
            return Err(parse_err(path, 0, format!("duplicate node id {}", node.id)));
        }
    }
    let mut pairs = Vec::with_capacity(raw_edges.len());
    for (s, t, line) in raw_edges {
        let a = *index
            .get(&s)
            .ok_or_else(|| parse_err(path, line, format!("edge references unknown node {s}")))?;
        let b = *index
            .get(&t)
            .ok_or_else(|| parse_err(path, line, format!("edge references unknown node {t}")))?;
        pairs.push((a, b));
    }
    let graph = Graph::from_pairs(nodes.len(), pairs)?;
    let vertex_names = Some(
        nodes
            .iter()
            .map(|n| n.label.clone().unwrap_or_else(|| n.id.clone()))
            .collect(),
    );
    let ground_truth = if !nodes.is_empty() && nodes.iter().all(|n| n.value.is_some()) {
        let mut ids = HashMap::new();
        Some(Partition::from_labels(
            nodes
                .iter()
                .map(|n| {
                    let next = ids.len();
                    *ids.entry(n.value.clone().unwrap()).or_insert(next)
                })
                .collect(),
        ))
    } else {
        None
    };
    Ok(Dataset {
        graph,
        vertex_names,
        ground_truth,
        meta: DatasetMeta {
            source: path.display().to_string(),
            mixing: None,
        },
    })
}

pub fn read_gml_subset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    parse_gml(&read_text(path)?, path)
}

/// Picks a reader from the file name: `.gml` → GML, `network.dat`/`.dat` →
/// LFR, anything else → zero-indexed edge list.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("gml") => read_gml_subset(path),
        Some("dat") => read_lfr_network(path),
        _ => read_edge_list(path, Indexing::Zero),
    }
}

// ---------------------------------------------------------------------------
// CSV

/// One row of a trace CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub round: usize,
    pub edges_removed_total: usize,
    pub n_components: usize,
    pub modularity: f64,
    pub ari: Option<f64>,
    pub nmi: Option<f64>,
}

impl From<&RoundRecord> for TraceRow {
    fn from(r: &RoundRecord) -> Self {
        TraceRow {
            round: r.round,
            edges_removed_total: r.edges_removed_total,
            n_components: r.n_components,
            modularity: r.modularity,
            ari: r.ari,
            nmi: r.nmi,
        }
    }
}

pub fn trace_rows(trace: &DetectionTrace) -> Vec<TraceRow> {
    trace.rounds.iter().map(TraceRow::from).collect()
}

const TRACE_HEADER: [&str; 6] = [
    "round",
    "edges_removed_total",
    "n_components",
    "modularity",
    "ari",
    "nmi",
];

/// Serializes rows with a header row, even when there are no rows.
pub fn write_records_to<T: Serialize, W: Write>(
    rows: &[T],
    header: Option<&[&str]>,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        if let Some(h) = header {
            w.write_record(h)?;
        }
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
        .map_err(|e| Error::io(PathBuf::from("<csv>"), e))?;
    Ok(())
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::io(path, e))
}

pub fn write_trace_to<W: Write>(trace: &DetectionTrace, writer: W) -> Result<()> {
    write_records_to(&trace_rows(trace), Some(&TRACE_HEADER), writer)
}

/// Writes `round,edges_removed_total,n_components,modularity,ari,nmi`.
pub fn write_trace_csv(trace: &DetectionTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_trace_to(trace, create(path)?)
}

/// Reads any CSV of serde rows; lines starting with `#` are skipped.
pub fn read_records<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(file);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<Vec<TraceRow>> {
    read_records(path)
}

/// Writes summary rows (any serde struct) with a header derived from the
/// struct's fields.
pub fn write_summary_csv<T: Serialize>(rows: &[T], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_records_to(rows, None, create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_file(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        fs::File::create(&p)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        p
    }

    #[test]
    fn edge_list_zero_indexed_path() {
        let d = parse_edge_list("0 1\n1 2\n", Indexing::Zero, Path::new("x")).unwrap();
        assert_eq!(d.graph.vertex_count(), 3);
        assert_eq!(d.graph.edge_count(), 2);
    }

    #[test]
    fn edge_list_one_indexed_simplifies() {
        let d =
            parse_edge_list("# header\n1 2\n2 1\n1 1\n\n", Indexing::One, Path::new("x")).unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
        assert_eq!(d.graph.edge_count(), 1);
        assert_eq!(d.graph.endpoints(0), Some((0, 1)));
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n1 x\n", Indexing::Zero, Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("0 1\n\n-1 2\n", Indexing::Zero, Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_edge_list("0 2\n", Indexing::One, Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_edge_list("0 1 2\n", Indexing::Zero, Path::new("f")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn lfr_network_counts_each_edge_once() {
        let dir = tempfile::tempdir().unwrap();
        let body = "1\t2\n1\t3\n2\t1\n2\t3\n3\t1\n3\t2\n3\t4\n4\t3\n";
        let p = tmp_file(&dir, "network.dat", body);
        let d = read_lfr_network(&p).unwrap();
        assert_eq!(d.graph.vertex_count(), 4);
        assert_eq!(d.graph.edge_count(), body.lines().count() / 2);
    }

    #[test]
    fn community_files() {
        let p = Path::new("c");
        assert_eq!(
            parse_community("1 1\n2 1\n3 2\n", p).unwrap().labels(),
            &[0, 0, 1]
        );
        assert_eq!(
            parse_community("3 2\n1 1\n2 1\n", p).unwrap().labels(),
            &[0, 0, 1]
        );
        assert_eq!(
            parse_community("1 3\n2 7\n3 3\n", p).unwrap().labels(),
            &[0, 1, 0]
        );
        let err = parse_community("1 1\n4 1\n", p).unwrap_err().to_string();
        assert!(err.contains("2, 3"), "{err}");
        assert!(parse_community("1 1\n1 2\n", p).is_err());
        assert!(parse_community("0 1\n", p).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("part.txt");
        let part = Partition::from_labels(vec![4, 4, 9, 1, 9]);
        write_partition(&p, &part).unwrap();
        assert!(read_lfr_community(&p).unwrap().same_grouping(&part));
    }

    #[test]
    fn minimal_gml() {
        let text = r#"
            Creator "hand written"
            graph
            [
              directed 0
              node [ id 10 label "a b" value 1 ]
              node [ id 20 label "c" value 2 ]
              edge [ source 10 target 20 ]
            ]"#;
        let d = parse_gml(text, Path::new("m.gml")).unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
        assert_eq!(d.graph.edge_count(), 1);
        assert_eq!(d.vertex_names.unwrap(), vec!["a b", "c"]);
        assert_eq!(d.ground_truth.unwrap().labels(), &[0, 1]);
    }

    #[test]
    fn gml_string_values_become_labels() {
        let text = r#"graph [ node [ id 0 value "l" ] node [ id 1 value "c" ] node [ id 2 value "l" ]
            edge [ source 0 target 1 ] edge [ source 1 target 0 ] ]"#;
        let d = parse_gml(text, Path::new("g")).unwrap();
        assert_eq!(d.graph.edge_count(), 1);
        assert_eq!(d.ground_truth.unwrap().labels(), &[0, 1, 0]);
    }

    #[test]
    fn gml_rejections() {
        let p = Path::new("bad.gml");
        assert!(parse_gml("graph [ directed 1 node [ id 0 ] ]", p).is_err());
        assert!(parse_gml("graph [ node [ id 0 ]", p).is_err());
        assert!(parse_gml("graph [ node [ id 0 ] edge [ source 0 target 5 ] ]", p).is_err());
        assert!(parse_gml("graph [ node [ label \"x\" ] ]", p).is_err());
        assert!(parse_gml("graph [ edge [ source 0 ] ]", p).is_err());
        assert!(parse_gml("nothing 1", p).is_err());
        let err =
            parse_gml("graph [\n node [ id 0 ]\n edge [ source 0 target 9 ]\n]", p).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    fn sample_trace(rounds: usize) -> DetectionTrace {
        DetectionTrace {
            rounds: (1..=rounds)
                .map(|r| RoundRecord {
                    round: r,
                    removed: vec![r],
                    edges_removed_total: r,
                    n_components: r,
                    modularity: 0.1 * r as f64 + 1.0 / 3.0,
                    ari: (r % 2 == 0).then_some(std::f64::consts::PI / r as f64),
                    nmi: None,
                })
                .collect(),
            best_round: Some(rounds),
        }
    }

    #[test]
    fn trace_csv_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_trace_csv(&DetectionTrace::default(), &p).unwrap();
        let body = fs::read_to_string(&p).unwrap();
        assert_eq!(body.lines().count(), 1);
        assert_eq!(body.trim(), TRACE_HEADER.join(","));
        assert!(read_trace_csv(&p).unwrap().is_empty());

        write_trace_csv(&sample_trace(3), &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap().lines().count(), 4);
    }

    #[test]
    fn trace_csv_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let trace = sample_trace(7);
        let mut f = create(&p).unwrap();
        writeln!(f, "{SCHEMA_COMMENT}").unwrap();
        write_trace_to(&trace, f).unwrap();
        assert_eq!(read_trace_csv(&p).unwrap(), trace_rows(&trace));
    }

    #[test]
    fn summary_csv_round_trip() {
        #[derive(Debug, PartialEq, Serialize, Deserialize)]
        struct Row {
            name: String,
            q: f64,
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let rows = vec![
            Row {
                name: "a".into(),
                q: 0.419_790_9,
            },
            Row {
                name: "b".into(),
                q: -1e-17,
            },
        ];
        write_summary_csv(&rows, &p).unwrap();
        assert_eq!(read_records::<Row>(&p).unwrap(), rows);
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let err =
            write_trace_csv(&DetectionTrace::default(), "/nonexistent-dir/x.csv").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}

//! Versioned text formats for staged pipeline outputs. Every file starts
//! with `#format <kind> <version>`; readers reject any other kind or
//! version.

use std::fs;
use std::path::Path;

use pairperm_core::filtration::VertexFunction;
use pairperm_core::graph::{Graph, LabeledDataset};
use pairperm_core::linalg::Matrix;
use pairperm_core::persistence::{PersistenceDiagram, PersistencePoint, PointKind, Provenance};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GRAPHS: (&str, u32) = ("graphs", 1);
pub const DIAGRAMS: (&str, u32) = ("diagrams", 1);
pub const LABELS: (&str, u32) = ("labels", 1);
pub const GRAM: (&str, u32) = ("gram", 1);
pub const DISTANCE: (&str, u32) = ("distance", 1);
pub const FEATURES: (&str, u32) = ("features", 1);
pub const RESULTS: (&str, u32) = ("results", 1);
pub const CONFUSION: (&str, u32) = ("confusion", 1);
pub const FUNCTIONS: (&str, u32) = ("functions", 1);
pub const REPORT: (&str, u32) = ("report", 1);

/// Fixed-width scientific notation; round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn header((kind, version): (&str, u32)) -> String {
    format!("#format {kind} {version}\n")
}

pub(crate) fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::write(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::write(path, e))
}

/// Reads `path` and checks its format line; returns the remaining text.
pub fn read_versioned(path: &Path, (kind, version): (&'static str, u32)) -> Result<String> {
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    let first = text.lines().next().unwrap_or("").trim_end();
    if first != header((kind, version)).trim_end() {
        return Err(Error::Schema { path: path.into(), expected: kind, version, found: first.to_string() });
    }
    Ok(text[first.len()..].trim_start_matches(['\r', '\n']).to_string())
}

fn check_token(what: &str, s: &str) -> Result<()> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(Error::Config(format!("{what} `{s}` must be non-empty without whitespace")));
    }
    Ok(())
}

fn parse_f64(path: &Path, line: usize, s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::format(path, line, format!("expected a number, found `{s}`")))
}

fn parse_usize(path: &Path, line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::format(path, line, format!("expected a count, found `{s}`")))
}

/// `graph <id> <raw label>`, then `v <n>` and one `e <i> <j>` per edge.
pub fn graphs_text(ds: &LabeledDataset) -> Result<String> {
    check_token("dataset name", &ds.name)?;
    let mut out = header(GRAPHS);
    out += &format!("# name {}\n", ds.name);
    for (i, (g, &l)) in ds.graphs.iter().zip(&ds.labels).enumerate() {
        out += &format!("graph {i} {}\nv {}\n", ds.class_values[l], g.n_vertices());
        for &(a, b) in g.edges() {
            out += &format!("e {a} {b}\n");
        }
    }
    Ok(out)
}

pub fn write_graphs(path: &Path, ds: &LabeledDataset) -> Result<()> {
    write_file(path, graphs_text(ds)?.as_bytes())
}

pub fn read_graphs(path: &Path) -> Result<LabeledDataset> {
    let text = read_versioned(path, GRAPHS)?;
    let mut name = String::new();
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    let mut current: Option<(usize, Vec<(usize, usize)>)> = None;
    let flush = |current: &mut Option<(usize, Vec<(usize, usize)>)>, graphs: &mut Vec<Graph>| -> Result<()> {
        if let Some((n, edges)) = current.take() {
            graphs.push(Graph::new(n, edges)?);
        }
        Ok(())
    };
    for (i, line) in text.lines().enumerate() {
        let ln = i + 2;
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.as_slice() {
            [] => {}
            ["#", "name", n] => name = n.to_string(),
            [c, ..] if c.starts_with('#') => {}
            ["graph", _, label] => {
                flush(&mut current, &mut graphs)?;
                labels.push(label.parse::<i64>().map_err(|_| Error::format(path, ln, "bad graph label"))?);
            }
            ["v", n] => current = Some((parse_usize(path, ln, n)?, Vec::new())),
            ["e", a, b] => {
                let edge = (parse_usize(path, ln, a)?, parse_usize(path, ln, b)?);
                current.as_mut().ok_or_else(|| Error::format(path, ln, "edge before `v` line"))?.1.push(edge);
            }
            _ => return Err(Error::format(path, ln, format!("unexpected line `{line}`"))),
        }
    }
    flush(&mut current, &mut graphs)?;
    if graphs.len() != labels.len() {
        return Err(Error::format(path, 0, format!("{} graphs but {} labels", graphs.len(), labels.len())));
    }
    Ok(LabeledDataset::new(name, graphs, &labels)?)
}

/// One block per diagram: `# dataset graph_id filtration true|fake`, then
/// `kind birth death` per point.
pub fn diagrams_text(diagrams: &[PersistenceDiagram]) -> Result<String> {
    let mut out = header(DIAGRAMS);
    for d in diagrams {
        let p = &d.provenance;
        check_token("dataset", &p.dataset)?;
        check_token("graph id", &p.graph_id)?;
        check_token("filtration", &p.filtration)?;
        out += &format!("# {} {} {} {}\n", p.dataset, p.graph_id, p.filtration, if p.fake { "fake" } else { "true" });
        for q in d.points() {
            out += &format!("{} {} {}\n", q.kind.name(), fmt_f64(q.birth), fmt_f64(q.death));
        }
    }
    Ok(out)
}

pub fn write_diagrams(path: &Path, diagrams: &[PersistenceDiagram]) -> Result<()> {
    write_file(path, diagrams_text(diagrams)?.as_bytes())
}

pub fn read_diagrams(path: &Path) -> Result<Vec<PersistenceDiagram>> {
    let text = read_versioned(path, DIAGRAMS)?;
    parse_diagrams(path, &text)
}

fn parse_diagrams(path: &Path, text: &str) -> Result<Vec<PersistenceDiagram>> {
    let mut out: Vec<(Provenance, Vec<PersistencePoint>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 2;
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.as_slice() {
            [] => {}
            ["#", dataset, graph_id, filtration, tf] => {
                let fake = match *tf {
                    "true" => false,
                    "fake" => true,
                    other => return Err(Error::format(path, ln, format!("expected true|fake, found `{other}`"))),
                };
                let prov = Provenance {
                    dataset: dataset.to_string(),
                    graph_id: graph_id.to_string(),
                    filtration: filtration.to_string(),
                    fake,
                };
                out.push((prov, Vec::new()));
            }
            [kind, b, d] => {
                let kind = PointKind::parse(kind).ok_or_else(|| Error::format(path, ln, format!("unknown kind `{kind}`")))?;
                let p = PersistencePoint::new(kind, parse_f64(path, ln, b)?, parse_f64(path, ln, d)?);
                out.last_mut().ok_or_else(|| Error::format(path, ln, "point before block header"))?.1.push(p);
            }
            _ => return Err(Error::format(path, ln, format!("unexpected line `{line}`"))),
        }
    }
    Ok(out.into_iter().map(|(prov, pts)| PersistenceDiagram::new(pts).with_provenance(prov)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRow {
    pub id: String,
    pub label: i64,
}

fn csv_body(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes())
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Config(format!("csv buffer: {e}")))
}

pub fn write_labels(path: &Path, rows: &[LabelRow]) -> Result<()> {
    let mut w = csv_writer();
    for r in rows {
        w.serialize(r)?;
    }
    let mut out = header(LABELS).into_bytes();
    out.extend(finish(w)?);
    write_file(path, &out)
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRow>> {
    let text = read_versioned(path, LABELS)?;
    csv_body(&text).deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Square matrix with item ids, as stored in gram and distance files.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub descriptor: String,
    pub ids: Vec<String>,
    pub values: Matrix,
}

fn descriptor_line(text: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix("# descriptor "))
        .map(str::to_string)
        .unwrap_or_default()
}

pub fn matrix_bytes(format: (&'static str, u32), m: &LabeledMatrix) -> Result<Vec<u8>> {
    let mut w = csv_writer();
    let mut head = vec!["id".to_string()];
    head.extend(m.ids.iter().cloned());
    w.write_record(&head)?;
    for (i, id) in m.ids.iter().enumerate() {
        let mut rec = vec![id.clone()];
        rec.extend(m.values.row(i).iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec)?;
    }
    let mut out = format!("{}# descriptor {}\n", header(format), m.descriptor).into_bytes();
    out.extend(finish(w)?);
    Ok(out)
}

pub fn write_matrix(path: &Path, format: (&'static str, u32), m: &LabeledMatrix) -> Result<()> {
    write_file(path, &matrix_bytes(format, m)?)
}

pub fn read_matrix(path: &Path, format: (&'static str, u32)) -> Result<LabeledMatrix> {
    let text = read_versioned(path, format)?;
    let descriptor = descriptor_line(&text);
    let mut r = csv_body(&text);
    let ids: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let n = ids.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != n + 1 || rec.get(0) != Some(ids.get(i).map(String::as_str).unwrap_or("")) {
            return Err(Error::format(path, i + 4, "row does not match the header ids"));
        }
        for v in rec.iter().skip(1) {
            data.push(parse_f64(path, i + 4, v)?);
        }
    }
    if data.len() != n * n {
        return Err(Error::format(path, 0, format!("expected {n} rows")));
    }
    Ok(LabeledMatrix { descriptor, ids, values: Matrix::from_vec(n, n, data)? })
}

/// Feature vectors with a JSON descriptor comment.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub descriptor: serde_json::Value,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn write_features(path: &Path, t: &FeatureTable) -> Result<()> {
    let width = t.rows.first().map_or(0, Vec::len);
    let mut w = csv_writer();
    let mut head = vec!["id".to_string()];
    head.extend((0..width).map(|k| format!("f{k}")));
    w.write_record(&head)?;
    for (id, row) in t.ids.iter().zip(&t.rows) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec)?;
    }
    let json = serde_json::to_string(&t.descriptor).map_err(|e| Error::Config(e.to_string()))?;
    let mut out = format!("{}# descriptor {json}\n", header(FEATURES)).into_bytes();
    out.extend(finish(w)?);
    write_file(path, &out)
}

pub fn read_features(path: &Path) -> Result<FeatureTable> {
    let text = read_versioned(path, FEATURES)?;
    let descriptor = serde_json::from_str(&descriptor_line(&text))
        .map_err(|e| Error::format(path, 2, format!("bad descriptor: {e}")))?;
    let mut r = csv_body(&text);
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        ids.push(rec.get(0).unwrap_or("").to_string());
        rows.push(rec.iter().skip(1).map(|v| parse_f64(path, i + 4, v)).collect::<Result<Vec<f64>>>()?);
    }
    Ok(FeatureTable { descriptor, ids, rows })
}

/// One row per outer fold, plus a `summary` row per experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub filtration: String,
    pub transform: String,
    pub featurization: String,
    /// `fold` or `summary`.
    pub row: String,
    pub repeat: String,
    pub fold: String,
    pub accuracy: f64,
    /// Standard deviation over folds; summary rows only.
    pub std: Option<f64>,
    pub n_test: usize,
    pub selected: String,
    #[serde(rename = "C")]
    pub c: Option<f64>,
}

/// Results with the resolved config and any warnings as `# ` comment lines.
pub fn write_results(path: &Path, config: &str, warnings: &[String], rows: &[ResultRow]) -> Result<()> {
    let mut out = header(RESULTS);
    for l in config.lines() {
        out += &if l.is_empty() { "#\n".to_string() } else { format!("# {l}\n") };
    }
    for w in warnings {
        out += &format!("# warning: {w}\n");
    }
    let mut w = csv_writer();
    for r in rows {
        w.serialize(r)?;
    }
    let mut bytes = out.into_bytes();
    bytes.extend(finish(w)?);
    write_file(path, &bytes)
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let text = read_versioned(path, RESULTS)?;
    csv_body(&text).deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Vertex function values, one block per graph: `# <graph id>` then one
/// value per line in vertex order.
pub fn write_functions(path: &Path, ids: &[String], functions: &[VertexFunction]) -> Result<()> {
    let mut out = header(FUNCTIONS);
    for (id, f) in ids.iter().zip(functions) {
        check_token("graph id", id)?;
        out += &format!("# {id}\n");
        for &v in f.values() {
            out += &fmt_f64(v);
            out.push('\n');
        }
    }
    write_file(path, out.as_bytes())
}

pub fn read_functions(path: &Path) -> Result<(Vec<String>, Vec<VertexFunction>)> {
    let text = read_versioned(path, FUNCTIONS)?;
    let mut blocks: Vec<(String, Vec<f64>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 2;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix('#') {
            blocks.push((id.trim().to_string(), Vec::new()));
        } else {
            let v = parse_f64(path, ln, line)?;
            blocks.last_mut().ok_or_else(|| Error::format(path, ln, "value before block header"))?.1.push(v);
        }
    }
    let mut ids = Vec::with_capacity(blocks.len());
    let mut functions = Vec::with_capacity(blocks.len());
    for (id, values) in blocks {
        ids.push(id);
        functions.push(VertexFunction::new(values)?);
    }
    Ok((ids, functions))
}

/// True against permuted accuracy per dataset, filtration and featurization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub filtration: String,
    pub featurization: String,
    pub true_accuracy: Option<f64>,
    pub true_std: Option<f64>,
    pub permuted_accuracy: Option<f64>,
    pub permuted_std: Option<f64>,
    /// `true_accuracy - permuted_accuracy` when both are present.
    pub difference: Option<f64>,
}

pub fn write_report(path: &Path, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv_writer();
    for r in rows {
        w.serialize(r)?;
    }
    let mut out = header(REPORT).into_bytes();
    out.extend(finish(w)?);
    write_file(path, &out)
}

pub fn read_report(path: &Path) -> Result<Vec<ReportRow>> {
    let text = read_versioned(path, REPORT)?;
    csv_body(&text).deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// `confusion[truth][predicted]` with class names on both axes.
pub fn write_confusion(path: &Path, classes: &[String], confusion: &[Vec<u64>]) -> Result<()> {
    let mut w = csv_writer();
    let mut head = vec!["truth\\predicted".to_string()];
    head.extend(classes.iter().cloned());
    w.write_record(&head)?;
    for (name, row) in classes.iter().zip(confusion) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(u64::to_string));
        w.write_record(&rec)?;
    }
    let mut out = header(CONFUSION).into_bytes();
    out.extend(finish(w)?);
    write_file(path, &out)
}

pub fn read_confusion(path: &Path) -> Result<(Vec<String>, Vec<Vec<u64>>)> {
    let text = read_versioned(path, CONFUSION)?;
    let mut r = csv_body(&text);
    let classes: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .skip(1)
                .map(|v| v.parse().map_err(|_| Error::format(path, i + 3, format!("bad count `{v}`"))))
                .collect::<Result<Vec<u64>>>()?,
        );
    }
    Ok((classes, rows))
}

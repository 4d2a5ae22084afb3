use std::fs;
use std::path::Path;

use pairperm::off::load_off;
use pairperm::tudataset::load_tudataset;
use pairperm::Error;

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

/// Triangle (label 1) and path on three vertices (label 2). The triangle
/// lists every edge in both directions.
fn two_graphs(dir: &Path) {
    write(dir, "TOY_A.txt", "1, 2\n2, 1\n2, 3\n3, 2\n3, 1\n1, 3\n4, 5\n5, 4\n5, 6\n6, 5\n");
    write(dir, "TOY_graph_indicator.txt", "1\n1\n1\n2\n2\n2\n");
    write(dir, "TOY_graph_labels.txt", "1\n2\n");
}

#[test]
fn tudataset_two_graphs() {
    let dir = tempfile::tempdir().unwrap();
    two_graphs(dir.path());
    let ds = load_tudataset(dir.path(), "TOY").unwrap();
    assert_eq!(ds.graphs.iter().map(|g| g.n_vertices()).collect::<Vec<_>>(), [3, 3]);
    assert_eq!(ds.graphs.iter().map(|g| g.n_edges()).collect::<Vec<_>>(), [3, 2]);
    assert_eq!(ds.labels, [0, 1]);
    assert_eq!(ds.class_values, [1, 2]);
}

#[test]
fn tudataset_crlf_and_node_labels() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "T_A.txt", "1,2\r\n2,3\r\n");
    write(dir.path(), "T_graph_indicator.txt", "1\r\n1\r\n1\r\n");
    write(dir.path(), "T_graph_labels.txt", "-1\r\n");
    write(dir.path(), "T_node_labels.txt", "4\r\n5\r\n6\r\n");
    let ds = load_tudataset(dir.path(), "T").unwrap();
    assert_eq!(ds.graphs[0].n_edges(), 2);
    assert_eq!(ds.graphs[0].vertex_labels(), Some(&[4, 5, 6][..]));
}

#[test]
fn tudataset_missing_file_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    two_graphs(dir.path());
    fs::remove_file(dir.path().join("TOY_graph_labels.txt")).unwrap();
    match load_tudataset(dir.path(), "TOY") {
        Err(e @ Error::Read { .. }) => assert!(e.to_string().contains("TOY_graph_labels.txt")),
        other => panic!("expected a read error, got {other:?}"),
    }
}

#[test]
fn tudataset_unknown_graph_id_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    two_graphs(dir.path());
    write(dir.path(), "TOY_graph_indicator.txt", "1\n1\n1\n2\n2\n3\n");
    assert!(matches!(load_tudataset(dir.path(), "TOY"), Err(Error::Format { .. })));
}

#[test]
fn tudataset_edge_across_graphs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    two_graphs(dir.path());
    write(dir.path(), "TOY_A.txt", "1,2\n3,4\n");
    assert!(load_tudataset(dir.path(), "TOY").is_err());
}

const TETRAHEDRON: &str = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n";

#[test]
fn off_tetrahedron_has_six_edges() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tet.off");
    fs::write(&p, TETRAHEDRON).unwrap();
    let mesh = load_off(&p).unwrap();
    assert_eq!(mesh.vertices().len(), 4);
    assert_eq!(mesh.faces().len(), 4);
    assert_eq!(mesh.skeleton().n_edges(), 6);
}

#[test]
fn off_single_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tri.off");
    fs::write(&p, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n").unwrap();
    let g = load_off(&p).unwrap().skeleton();
    assert_eq!((g.n_vertices(), g.n_edges()), (3, 3));
}

#[test]
fn off_quad_face_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("quad.off");
    fs::write(&p, "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n").unwrap();
    assert!(matches!(load_off(&p), Err(Error::Unsupported { .. })));
}

#[test]
fn off_missing_file() {
    assert!(matches!(load_off("/nonexistent/x.off"), Err(Error::Read { .. })));
}

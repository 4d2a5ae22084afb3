use std::fs;

use pairperm::formats::{self, FeatureTable, LabelRow, LabeledMatrix, ResultRow};
use pairperm::Error;
use pairperm_core::filtration::VertexFunction;
use pairperm_core::graph::{Graph, LabeledDataset};
use pairperm_core::linalg::Matrix;
use pairperm_core::persistence::{PersistenceDiagram, PersistencePoint, PointKind, Provenance};
use proptest::prelude::*;

fn prov(id: &str, fake: bool) -> Provenance {
    Provenance { dataset: "toy".into(), graph_id: id.into(), filtration: "ricci(alpha=0.5,mean)".into(), fake }
}

fn kind_strategy() -> impl Strategy<Value = PointKind> {
    prop::sample::select(PointKind::ALL.to_vec())
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

proptest! {
    #[test]
    fn diagrams_round_trip_bit_exactly(
        raw in prop::collection::vec(prop::collection::vec((kind_strategy(), finite(), finite()), 0..8), 0..5)
    ) {
        let dgs: Vec<PersistenceDiagram> = raw
            .iter()
            .enumerate()
            .map(|(i, pts)| {
                let points = pts.iter().map(|&(k, b, d)| PersistencePoint::new(k, b, d)).collect();
                PersistenceDiagram::new(points).with_provenance(prov(&i.to_string(), i % 2 == 1))
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.txt");
        formats::write_diagrams(&p, &dgs).unwrap();
        let back = formats::read_diagrams(&p).unwrap();
        prop_assert_eq!(back.len(), dgs.len());
        for (a, b) in dgs.iter().zip(&back) {
            prop_assert_eq!(&a.provenance, &b.provenance);
            prop_assert_eq!(a.len(), b.len());
            for (p, q) in a.points().iter().zip(b.points()) {
                prop_assert_eq!(p.kind, q.kind);
                prop_assert_eq!(p.birth.to_bits(), q.birth.to_bits());
                prop_assert_eq!(p.death.to_bits(), q.death.to_bits());
            }
        }
    }

    #[test]
    fn gram_round_trips_bit_exactly(n in 1usize..6, vals in prop::collection::vec(finite(), 36)) {
        let values = Matrix::from_fn(n, n, |i, j| vals[i.min(j) * 6 + i.max(j)]);
        let m = LabeledMatrix { descriptor: "sw(sigma=1,slices=10)".into(), ids: (0..n).map(|i| format!("g{i}")).collect(), values };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        formats::write_matrix(&p, formats::GRAM, &m).unwrap();
        let back = formats::read_matrix(&p, formats::GRAM).unwrap();
        prop_assert_eq!(&back.descriptor, &m.descriptor);
        prop_assert_eq!(&back.ids, &m.ids);
        let bits = |m: &Matrix| m.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back.values), bits(&m.values));
    }
}

#[test]
fn diagram_lines_have_seventeen_significant_digits() {
    let d = PersistenceDiagram::new(vec![PersistencePoint::new(PointKind::Ord0, 0.1, 1.0 / 3.0)]).with_provenance(prov("7", false));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.txt");
    formats::write_diagrams(&p, &[d]).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert_eq!(
        text,
        "#format diagrams 1\n# toy 7 ricci(alpha=0.5,mean) true\nord0 1.0000000000000001e-1 3.3333333333333331e-1\n"
    );
}

#[test]
fn schema_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x");
    let m = LabeledMatrix { descriptor: "d".into(), ids: vec!["a".into()], values: Matrix::identity(1) };
    formats::write_matrix(&p, formats::DISTANCE, &m).unwrap();
    match formats::read_matrix(&p, formats::GRAM) {
        Err(e @ Error::Schema { .. }) => assert!(e.to_string().contains("#format gram 1"), "{e}"),
        other => panic!("expected a schema error, got {other:?}"),
    }
    fs::write(&p, "#format diagrams 2\n").unwrap();
    assert!(matches!(formats::read_diagrams(&p), Err(Error::Schema { version: 1, .. })));
    fs::write(&p, "ord0 1 2\n").unwrap();
    assert!(matches!(formats::read_diagrams(&p), Err(Error::Schema { .. })));
}

#[test]
fn malformed_diagram_lines_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.txt");
    for body in ["ord0 1 2\n", "# a 0 f true\nord9 1 2\n", "# a 0 f true\nord0 x 2\n", "# a 0 f maybe\n"] {
        fs::write(&p, format!("#format diagrams 1\n{body}")).unwrap();
        assert!(matches!(formats::read_diagrams(&p), Err(Error::Format { .. })), "{body}");
    }
}

#[test]
fn graphs_round_trip() {
    let ds = LabeledDataset::new("toy", vec![Graph::cycle(4), Graph::path(3), Graph::empty(2)], &[3, -1, 3]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.txt");
    formats::write_graphs(&p, &ds).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.contains("graph 1 -1\nv 3\ne 0 1\ne 1 2\n"), "{text}");
    assert_eq!(formats::read_graphs(&p).unwrap(), ds);
}

#[test]
fn labels_features_functions_results_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let labels = vec![LabelRow { id: "0".into(), label: 1 }, LabelRow { id: "1".into(), label: -1 }];
    let lp = dir.path().join("labels.csv");
    formats::write_labels(&lp, &labels).unwrap();
    assert_eq!(formats::read_labels(&lp).unwrap(), labels);

    let table = FeatureTable {
        descriptor: serde_json::json!({"feature": "pervec(bins=3)", "range": [0.0, 2.5]}),
        ids: vec!["0".into(), "1".into()],
        rows: vec![vec![0.5, 0.25, 0.25], vec![0.1, 0.2, 0.7]],
    };
    let fp = dir.path().join("features.csv");
    formats::write_features(&fp, &table).unwrap();
    assert_eq!(formats::read_features(&fp).unwrap(), table);

    let functions = vec![VertexFunction::new(vec![1.0, 0.1]).unwrap(), VertexFunction::new(vec![]).unwrap()];
    let ids = vec!["0".to_string(), "1".to_string()];
    let vp = dir.path().join("functions.txt");
    formats::write_functions(&vp, &ids, &functions).unwrap();
    assert_eq!(formats::read_functions(&vp).unwrap(), (ids, functions));

    let row = ResultRow {
        dataset: "toy".into(),
        filtration: "degree".into(),
        transform: "true".into(),
        featurization: "sw".into(),
        row: "fold".into(),
        repeat: "0".into(),
        fold: "3".into(),
        accuracy: 0.9,
        std: None,
        n_test: 10,
        selected: "sw(sigma=1,slices=10)".into(),
        c: Some(10.0),
    };
    let summary = ResultRow { row: "summary".into(), std: Some(0.05), c: None, selected: String::new(), ..row.clone() };
    let rp = dir.path().join("results.csv");
    formats::write_results(&rp, "a = 1\n\nb = \"x\"", &["careful".into()], &[row.clone(), summary.clone()]).unwrap();
    let text = fs::read_to_string(&rp).unwrap();
    assert!(text.starts_with("#format results 1\n# a = 1\n#\n# b = \"x\"\n# warning: careful\n"), "{text}");
    assert!(text.contains("dataset,filtration,transform,featurization,row,repeat,fold,accuracy,std,n_test,selected,C\n"));
    assert_eq!(formats::read_results(&rp).unwrap(), vec![row, summary]);

    let cp = dir.path().join("confusion.csv");
    let classes = vec!["a".to_string(), "b".to_string()];
    formats::write_confusion(&cp, &classes, &[vec![3, 1], vec![0, 4]]).unwrap();
    assert_eq!(formats::read_confusion(&cp).unwrap(), (classes, vec![vec![3, 1], vec![0, 4]]));
}

#[test]
fn whitespace_in_provenance_is_rejected() {
    let d = PersistenceDiagram::new(vec![]).with_provenance(Provenance { dataset: "a b".into(), ..prov("0", false) });
    let dir = tempfile::tempdir().unwrap();
    assert!(formats::write_diagrams(&dir.path().join("d"), &[d]).is_err());
}

use modcurve::golden::*;

fn fixtures() -> Fixtures {
    load_fixtures(&default_fixture_dir()).unwrap()
}

#[test]
fn fixtures_parse() {
    let fx = fixtures();
    assert_eq!(fx.tensor.len(), 4);
    assert_eq!(fx.tensor.iter().map(|t| t.rows.len()).sum::<usize>(), 10);
    assert_eq!(fx.sym_powers.len(), 15);
    assert_eq!(fx.series.len(), 17);
    assert_eq!(format_multiset(&parse_multiset("3*+2.6").unwrap()), "V3*+2.V6");
    assert!(parse_multiset("2.").is_err());
    assert!(matches!(load_fixtures(std::path::Path::new("/nonexistent")), Err(modcurve::Error::FixtureMissing(_))));
}

#[test]
fn convention_maps_are_involutions() {
    for c in Convention::all() {
        for l in ["V3", "V3*", "V4", "V4*", "V6'", "V6'*", "V7"] {
            assert_eq!(c.map(c.map(l)), l);
        }
    }
}

#[test]
fn symmetric_power_tables_and_a_full_row_match() {
    let fx = fixtures();
    let mut h = GoldenHarness::new(40).unwrap();
    let conv = Convention { swaps: [false, true, false] };
    let diffs = h.compare(&fx, conv).unwrap();
    let sym = diffs.iter().find(|d| d.fixture == "symmetric_powers").unwrap();
    assert!(sym.passed(), "{:?}", sym.cells);
    let t1 = diffs.iter().find(|d| d.fixture == "tensor_products_1").unwrap();
    assert!(t1.cells.iter().all(|c| c.row != "V3"), "{:?}", t1.cells);
    let q = diffs.iter().find(|d| d.fixture == "generating_functions").unwrap();
    for id in ["Q_V1", "Q_V3*", "Q_V6", "Q_V7", "Q_V8"] {
        assert!(q.cells.iter().all(|c| c.row != id), "{id}");
    }
}

#[test]
fn corrupted_fixture_is_reported_exactly() {
    let fx = fixtures();
    let conv = Convention { swaps: [false, true, false] };
    let mut h = GoldenHarness::new(20).unwrap();
    let base = h.compare(&fx, conv).unwrap();
    let mut bad = fx.clone();
    bad.tensor[0].rows[0].1[2] = parse_multiset("3+7+8").unwrap();
    let after = h.compare(&bad, conv).unwrap();
    let extra: Vec<&CellDiff> = after[0].cells.iter().filter(|c| !base[0].cells.contains(c)).collect();
    assert_eq!(extra.len(), 1);
    assert_eq!((extra[0].row.as_str(), extra[0].column.as_str()), ("V3", "V6"));
}

#[test]
fn best_convention_over_all_fixtures() {
    let r = reproduce_appendices(&default_fixture_dir(), 40).unwrap();
    assert_eq!(r.scores.len(), 8);
    assert_eq!(r.convention, vec!["V4<->V4*".to_string()]);
    let min = r.scores.iter().map(|s| s.mismatched_cells).min().unwrap();
    assert_eq!(r.mismatched_cells, min);
    assert_eq!(r.tied.len(), 4);
    assert!(r.tied.contains(&vec!["V3<->V3*".to_string()]));
    // remaining differences are confined to the V6' block, V8' x V8' and the series
    let tensor_cells: Vec<_> = r.diffs.iter().filter(|d| d.fixture.starts_with("tensor")).flat_map(|d| &d.cells).collect();
    assert!(tensor_cells.iter().all(|c| c.row.starts_with("V6'") || c.column.starts_with("V6'") || c.row == "V8'"));
    assert!(r.diffs.iter().find(|d| d.fixture == "symmetric_powers").unwrap().passed());
}


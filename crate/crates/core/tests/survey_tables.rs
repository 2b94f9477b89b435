use std::path::PathBuf;

use altan_core::survey::{
    emit_table, extremal_in_records, find_extremal, hexagons, run_survey, ColumnKey, ExtremalPredicate,
    SurveyFamily, SurveyOptions, SurveyTable, TableFormat,
};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn opts() -> SurveyOptions {
    SurveyOptions::default()
}

#[test]
fn benzenoid_table_to_five_matches_golden_files() {
    let table = run_survey(SurveyFamily::Benzenoid, 1..=5, &opts(), None).unwrap().table;
    assert_eq!(emit_table(&table, TableFormat::Markdown).unwrap(), golden("benzenoid_table_eps5.md"));
    assert_eq!(emit_table(&table, TableFormat::Csv).unwrap(), golden("benzenoid_table_eps5.csv"));
}

#[test]
fn output_is_byte_stable() {
    let a = run_survey(SurveyFamily::Catafused, 2..=6, &opts(), None).unwrap().table;
    let b = run_survey(SurveyFamily::Catafused, 2..=6, &SurveyOptions { workers: 3, ..opts() }, None)
        .unwrap()
        .table;
    for format in [TableFormat::Csv, TableFormat::Markdown, TableFormat::Json] {
        assert_eq!(emit_table(&a, format).unwrap(), emit_table(&b, format).unwrap());
    }
}

#[test]
fn json_tables_round_trip() {
    let table = run_survey(SurveyFamily::Benzenoid, 1..=6, &opts(), None).unwrap().table;
    let text = emit_table(&table, TableFormat::Json).unwrap();
    let back = SurveyTable::from_json(&text).unwrap();
    assert_eq!(back, table);
    assert_eq!(emit_table(&back, TableFormat::Json).unwrap(), text);
}

#[test]
fn even_columns_precede_odd_columns() {
    let table = run_survey(SurveyFamily::Benzenoid, 1..=6, &opts(), None).unwrap().table;
    let cols = table.columns();
    assert_eq!(
        cols,
        vec![
            ColumnKey::even(0, 1),
            ColumnKey::even(0, 2),
            ColumnKey::even(2, 2),
            ColumnKey::even(2, 3),
            ColumnKey::odd(1, 1),
        ]
    );
    let row_six = table.row(&hexagons(6)).unwrap();
    assert_eq!(row_six.total(), 81);
}

#[test]
fn seven_hexagon_cells() {
    let table = run_survey(SurveyFamily::Benzenoid, 7..=7, &opts(), None).unwrap().table;
    assert_eq!(table.count(&hexagons(7), ColumnKey::even(0, 2)), 3);
    assert_eq!(table.count(&hexagons(7), ColumnKey::even(2, 2)), 7);
}

#[test]
fn convex_family_has_no_excess_two() {
    let found = find_extremal(SurveyFamily::Convex, ExtremalPredicate::Excess(2), 1..=40, &opts()).unwrap();
    assert!(found.is_empty());
}

#[test]
fn extremal_search_agrees_with_full_survey() {
    let survey = run_survey(SurveyFamily::Benzenoid, 1..=7, &opts(), None).unwrap();
    for predicate in [
        ExtremalPredicate::Excess(2),
        ExtremalPredicate::Jump { parent: 2, altan: 3 },
        ExtremalPredicate::Jump { parent: 2, altan: 2 },
    ] {
        let streamed = find_extremal(SurveyFamily::Benzenoid, predicate, 1..=7, &opts()).unwrap();
        assert_eq!(streamed, extremal_in_records(&survey.records, predicate), "{predicate:?}");
    }
}

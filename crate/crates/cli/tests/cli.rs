//! End-to-end tests of the `sdmm` binary: spawn it exactly as a user
//! would and check bytes, files, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use sdmm::matrix::FieldMatrix;
use sdmm::matrix_io::{read_matrix_file, write_matrix_file};
use sdmm::PrimeField;
use sdmm_cli::csv;

fn sdmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdmm"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sdmm_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir should be creatable");
    dir
}

/// Deterministic full-rank-ish test data; values just need to be < q.
fn filled_matrix(field: PrimeField, rows: usize, cols: usize, salt: u64) -> FieldMatrix {
    let values: Vec<u64> = (0..rows * cols)
        .map(|i| (salt + 3 * i as u64 + 1) % field.modulus())
        .collect();
    FieldMatrix::from_rows(field, rows, cols, &values).expect("dimensions match values")
}

#[test]
fn one_by_one_example_multiplies_through_the_protocol() {
    let dir = temp_dir("one_by_one");
    let field = PrimeField::new(7).unwrap();
    let a = FieldMatrix::from_rows(field, 1, 1, &[2]).unwrap();
    let b = FieldMatrix::from_rows(field, 1, 1, &[3]).unwrap();
    let a_path = dir.join("a.txt");
    let b_path = dir.join("b.txt");
    write_matrix_file(&a_path, &a).unwrap();
    write_matrix_file(&b_path, &b).unwrap();

    let out = sdmm(&[
        "multiply",
        "--K",
        "1",
        "--L",
        "1",
        "--T",
        "1",
        "--a-file",
        a_path.to_str().unwrap(),
        "--b-file",
        b_path.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "1 1 7\n6\n");
    assert!(stderr_of(&out).contains("seed: 5"));
}

#[test]
fn multiply_matches_the_plain_product_and_reports_the_transcript() {
    let dir = temp_dir("full_product");
    let field = PrimeField::new((1 << 61) - 1).unwrap();
    let a = filled_matrix(field, 8, 8, 1 << 40);
    let b = filled_matrix(field, 8, 8, 99);
    let a_path = dir.join("a.txt");
    let b_path = dir.join("b.txt");
    let out_path = dir.join("product.txt");
    write_matrix_file(&a_path, &a).unwrap();
    write_matrix_file(&b_path, &b).unwrap();

    let out = sdmm(&[
        "multiply",
        "--K",
        "4",
        "--L",
        "4",
        "--T",
        "4",
        "--r",
        "1",
        "--a-file",
        a_path.to_str().unwrap(),
        "--b-file",
        b_path.to_str().unwrap(),
        "--seed",
        "12",
        "--out",
        out_path.to_str().unwrap(),
        "--transcript",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let product = read_matrix_file(&out_path).unwrap();
    assert_eq!(product, a.mul(&b).unwrap());
    let transcript = stdout_of(&out);
    assert!(transcript.contains("servers (N_pre): 28"), "{transcript}");
    assert!(transcript.contains("precomputed elements: 112"), "{transcript}");
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = temp_dir("determinism");
    let field = PrimeField::new(101).unwrap();
    let a = filled_matrix(field, 4, 4, 17);
    let b = filled_matrix(field, 4, 4, 29);
    let a_path = dir.join("a.txt");
    let b_path = dir.join("b.txt");
    write_matrix_file(&a_path, &a).unwrap();
    write_matrix_file(&b_path, &b).unwrap();

    let args = [
        "multiply", "--K", "2", "--L", "2", "--T", "2", "--a-file",
        a_path.to_str().unwrap(), "--b-file", b_path.to_str().unwrap(),
        "--seed", "7", "--transcript",
    ];
    let first = sdmm(&args);
    let second = sdmm(&args);
    assert!(first.status.success(), "{}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);

    let sweep = ["tables", "--K", "4", "--L", "4", "--T-max", "8", "--r-list", "1,2,3,4", "--precompute"];
    assert_eq!(sdmm(&sweep).stdout, sdmm(&sweep).stdout);
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = temp_dir("exit_codes");
    let field = PrimeField::new(7).unwrap();
    let m = FieldMatrix::from_rows(field, 1, 1, &[2]).unwrap();
    let path = dir.join("m.txt");
    write_matrix_file(&path, &m).unwrap();

    // usage error
    let out = sdmm(&["multiply", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    // input validation: declared modulus disagrees with the files
    let out = sdmm(&[
        "multiply", "--q", "11", "--K", "1", "--L", "1", "--T", "1",
        "--a-file", path.to_str().unwrap(), "--b-file", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("does not match"), "{}", stderr_of(&out));

    // point selection genuinely exhausted: with q = 11 every admissible
    // point set contains a pair x, -x that makes a mask submatrix singular
    let out = sdmm(&["audit", "--K", "2", "--L", "2", "--T", "2", "--q", "11"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr_of(&out));

    // search refused before scanning anything
    let out = sdmm(&["search", "--K", "3", "--L", "3", "--T", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("too large"), "{}", stderr_of(&out));

    // audit refused on an instance too large to enumerate
    let out = sdmm(&["audit", "--K", "1", "--L", "1", "--T", "1", "--q", "101", "--mode", "mi"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr_of(&out));
}

#[test]
fn tables_emits_the_reference_series() {
    let out = sdmm(&[
        "tables", "--K", "4", "--L", "4", "--T-max", "11", "--r-list", "1,2,4", "--precompute",
    ]);
    assert!(out.status.success());
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.header, vec!["T", "r", "N_pre"]);
    let rows: Vec<Vec<&str>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(String::as_str).collect())
        .collect();
    for expected in [
        vec!["4", "1", "28"],
        vec!["4", "2", "29"],
        vec!["11", "1", "40"],
        vec!["11", "4", "39"],
        // the reference bound series is 19 + T at K = L = 4
        vec!["4", "bound", "23"],
        vec!["11", "bound", "30"],
    ] {
        assert!(rows.contains(&expected), "missing row {expected:?}");
    }
    // r = 2 and r = 4 are inadmissible at T = 1; skipped with a comment
    assert!(table.comments.iter().any(|c| c.contains("skipped")));

    let out = sdmm(&["tables", "--K", "4", "--L", "4", "--T-max", "4", "--r-list", "1,2"]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.header, vec!["T", "r", "N"]);
    assert!(table.rows.contains(&vec!["4".into(), "1".into(), "41".into()]));
    assert!(table.rows.contains(&vec!["4".into(), "2".into(), "36".into()]));
}

#[test]
fn every_csv_output_parses_with_the_tools_own_reader() {
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec!["tables", "--K", "3", "--L", "2", "--T-max", "5", "--r-list", "1,2", "--precompute"],
            "T",
        ),
        (vec!["bounds", "--K", "3", "--L", "3", "--T", "5", "--csv"], "metric"),
        (vec!["compare", "--K", "4", "--L", "4", "--T", "20", "--csv"], "metric"),
        (
            vec!["collusion", "--K", "2", "--L", "2", "--delta", "1/3", "--mode", "nopre", "--csv"],
            "metric",
        ),
        (
            vec!["complexity", "--omega", "2.37", "--mode", "pre", "--csv"],
            "metric",
        ),
        (
            vec!["audit", "--K", "2", "--L", "2", "--T", "2", "--q", "101", "--csv"],
            "metric",
        ),
        (vec!["search", "--K", "2", "--L", "2", "--T", "2", "--csv"], "K"),
    ];
    for (args, first_column) in cases {
        let out = sdmm(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr_of(&out));
        let table = csv::parse(&stdout_of(&out))
            .unwrap_or_else(|e| panic!("{args:?} emitted unparseable CSV: {e}"));
        assert_eq!(table.header[0], first_column, "{args:?}");
        assert!(!table.rows.is_empty(), "{args:?}");
    }
}

#[test]
fn verdict_fixtures_match_the_reference_values() {
    let out = sdmm(&["compare", "--K", "2", "--L", "2", "--T", "2"]);
    assert!(stdout_of(&out).contains("verdict: Tie"));

    let out = sdmm(&["complexity", "--omega", "3", "--mode", "nopre"]);
    let text = stdout_of(&out);
    assert!(text.contains("13/5"), "{text}");
    assert!(text.contains("2.6"), "{text}");

    let out = sdmm(&["complexity", "--omega", "3", "--mode", "pre", "--csv"]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.lookup("optimal_exponent", 1), Some("5/2"));

    let out = sdmm(&["collusion", "--K", "2", "--L", "2", "--delta", "0.6", "--mode", "nopre"]);
    assert!(stdout_of(&out).contains("infeasible"));

    let out = sdmm(&["collusion", "--K", "2", "--L", "2", "--delta", "0.6", "--mode", "pre", "--csv"]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.lookup("verdict", 1), Some("feasible"));
    assert_eq!(table.lookup("servers_required", 1), Some("15"));

    let out = sdmm(&["bounds", "--K", "3", "--L", "3", "--T", "5", "--csv"]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.lookup("best_bound", 1), Some("17"));
    assert_eq!(table.lookup("construction_n_pre", 1), Some("20"));
    assert_eq!(table.lookup("optimality_gap", 1), Some("3"));
}

#[test]
fn audit_reports_render_in_both_formats() {
    let out = sdmm(&["audit", "--K", "2", "--L", "2", "--T", "2", "--q", "101", "--seed", "3"]);
    let text = stdout_of(&out);
    assert!(text.contains("verdict: pass"), "{text}");
    assert!(text.contains("28 (all)"), "{text}");

    let out = sdmm(&["audit", "--K", "2", "--L", "2", "--T", "2", "--q", "101", "--csv"]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.lookup("mode", 1), Some("rank-check"));
    assert_eq!(table.lookup("pass", 1), Some("true"));

    // the deliberately broken mask hook must be caught
    let out = sdmm(&[
        "audit", "--K", "1", "--L", "1", "--T", "1", "--q", "5",
        "--mode", "mi", "--mask", "zero-r", "--csv",
    ]);
    let table = csv::parse(&stdout_of(&out)).unwrap();
    assert_eq!(table.lookup("pass", 1), Some("false"));

    // mi-only flags rejected in rank mode
    let out = sdmm(&["audit", "--K", "1", "--L", "1", "--T", "1", "--mask", "zero-r"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_csv_row_is_the_documented_ledger_line() {
    let out = sdmm(&["search", "--K", "1", "--L", "1", "--T", "1", "--csv"]);
    assert_eq!(
        stdout_of(&out),
        "K,L,T,D,best_n_pre,bound,gap,tables_examined\n1,1,1,3,2,2,0,36\n"
    );

    let out = sdmm(&["search", "--K", "1", "--L", "1", "--T", "1"]);
    let text = stdout_of(&out);
    assert!(text.contains("best N_pre: 2"), "{text}");
    assert!(text.contains("alpha_R: [1]"), "{text}");
}

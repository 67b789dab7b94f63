use std::path::Path;
use std::process::{Command, Output};

use schur_cli::gen::{gen_randn_complex, gen_wilkinson};
use schur_cli::mm::{read_matrix_market, write_matrix_market};
use schur_cli::record::{read_records, MatrixKind};
use schur_core::refine::RefineStatus;

fn schur_refine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur-refine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<schur_cli::record::RunRecord> {
    read_records(std::io::BufReader::new(std::fs::File::open(path).unwrap())).unwrap()
}

#[test]
fn random_matrix_exits_zero() {
    let out = schur_refine(&["refine", "--kind", "randn", "--n", "64", "--seed", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let recs = read_records(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 1);
    let rec = &recs[0];
    assert_eq!(rec.report.status, RefineStatus::Converged);
    assert!(rec.report.iterations <= 4);
    assert_eq!(
        (rec.spec.kind, rec.spec.n, rec.spec.seed),
        (MatrixKind::RandnComplex, 64, 3)
    );
    assert!(rec.residuals.ortho <= 1e-28);
}

#[test]
fn records_are_appended() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.jsonl");
    let out_arg = out.to_str().unwrap();
    for (kind, n) in [("randn-real", "12"), ("wilkinson", "8")] {
        let o = schur_refine(&["refine", "--kind", kind, "--n", n, "--out", out_arg]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[1].spec.kind, MatrixKind::WilkinsonCompanion);
}

#[test]
fn qr_retraction_and_symmetric_drivers() {
    let o = schur_refine(&["refine", "--n", "20", "--ortho", "qr"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec = &read_records(o.stdout.as_slice()).unwrap()[0];
    assert!(rec.report.theta.is_some());

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sym.mtx");
    std::fs::write(
        &file,
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 1 1\n2 2 2\n3 3 5\n",
    )
    .unwrap();
    let o = schur_refine(&["refine", "--file", file.to_str().unwrap(), "--symmetric"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec = &read_records(o.stdout.as_slice()).unwrap()[0];
    assert!(rec.symmetric);
    assert_eq!((rec.spec.kind, rec.spec.n), (MatrixKind::FromFile, 3));
    assert_eq!(rec.report.sylvester_solves, 0);
}

#[test]
fn ill_conditioned_clustered_matrix_exits_two() {
    let o = schur_refine(&["refine", "--kind", "clustered", "--n", "150", "--seed", "0"]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec = &read_records(o.stdout.as_slice()).unwrap()[0];
    assert!(matches!(
        rec.report.status,
        RefineStatus::Diverged | RefineStatus::NonFinite
    ));
    let hinted = String::from_utf8_lossy(&o.stderr).contains("hint:");
    assert_eq!(hinted, rec.report.status == RefineStatus::NonFinite);
}

#[test]
fn invalid_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mtx");
    std::fs::write(
        &bad,
        "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
    )
    .unwrap();
    let rect = dir.path().join("rect.mtx");
    std::fs::write(
        &rect,
        "%%MatrixMarket matrix array real general\n2 1\n1\n2\n",
    )
    .unwrap();
    let missing = dir.path().join("missing.mtx");
    let cases: Vec<Vec<&str>> = vec![
        vec!["refine", "--file", bad.to_str().unwrap()],
        vec!["refine", "--file", rect.to_str().unwrap()],
        vec!["refine", "--file", missing.to_str().unwrap()],
        vec!["refine", "--n", "0"],
        vec!["refine", "--kind", "wilkinson", "--n", "40"],
        vec!["refine", "--kind", "clustered", "--n", "10"],
        vec!["refine", "--n", "8", "--symmetric"],
        vec!["refine", "--n", "8", "--max-iters", "0"],
    ];
    for args in cases {
        let o = schur_refine(&args);
        assert_eq!(
            o.status.code(),
            Some(3),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty());
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn triangular_input_with_repeated_eigenvalue_is_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("diag.mtx");
    std::fs::write(
        &file,
        "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 1 1\n2 2 1\n3 3 2\n",
    )
    .unwrap();
    let o = schur_refine(&["refine", "--file", file.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec = &read_records(o.stdout.as_slice()).unwrap()[0];
    assert_eq!(rec.report.iterations, 0);
    assert_eq!(rec.residuals.tri, 0.0);
}

#[test]
fn gen_then_refine_matches_direct_run() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.mtx");
    let o = schur_refine(&[
        "gen",
        "--kind",
        "wilkinson",
        "--n",
        "20",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (_, a) = read_matrix_market(&file).unwrap();
    assert_eq!(a, gen_wilkinson(20).unwrap());
    assert!(std::fs::read_to_string(&file)
        .unwrap()
        .contains("-2.43290200817664000000000000000000000e18"));

    let direct = schur_refine(&["refine", "--kind", "wilkinson", "--n", "20"]);
    let via_file = schur_refine(&["refine", "--file", file.to_str().unwrap()]);
    let (d, f) = (
        &read_records(direct.stdout.as_slice()).unwrap()[0],
        &read_records(via_file.stdout.as_slice()).unwrap()[0],
    );
    assert_eq!(d.report.residual_history, f.report.residual_history);
}

#[test]
fn matrix_market_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.mtx");
    let a = gen_randn_complex(7, 11);
    write_matrix_market(&file, &a).unwrap();
    let (h, b) = read_matrix_market(&file).unwrap();
    assert_eq!((h.rows, h.cols), (7, 7));
    assert_eq!(a, b);
}

#[test]
fn bench_reports_every_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.jsonl");
    let o = schur_refine(&[
        "bench",
        "--sizes",
        "8,16",
        "--threads",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let table = String::from_utf8(o.stdout).unwrap();
    assert_eq!(table.lines().count(), 3);
    let rows: Vec<schur_cli::commands::BenchRow> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![8, 16]);
    for r in &rows {
        assert_eq!(r.status, RefineStatus::Converged);
        assert!(
            r.hp_matmul_time + r.diagnostic_time <= r.wall_time
                && (0.0..=1.0).contains(&r.hp_fraction)
        );
        let full = 2 + 4 * r.iterations + 2;
        assert!(
            r.hp_matmul_count == full || r.hp_matmul_count == full - 1,
            "{r:?}"
        );
    }
}

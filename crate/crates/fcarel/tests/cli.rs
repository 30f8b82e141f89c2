use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fcarel::format::parse_cxt;

fn toy3() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/toy3.cxt")
}

fn fcarel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcarel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn lattice_summary_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("toy3.json");
    let out = fcarel(&["lattice", path_str(&toy3()), "--output", path_str(&json)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "3 3 2");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v[1]["extent"], serde_json::json!(["1", "2"]));
    assert_eq!(v[1]["upper"], serde_json::json!([0]));
}

#[test]
fn exit_codes() {
    assert_eq!(fcarel(&["lattice", "/nonexistent/ctx.cxt"]).status.code(), Some(1));
    let missing = fcarel(&["lattice", "/nonexistent/ctx.cxt"]);
    assert!(!missing.stderr.is_empty());
    assert_eq!(
        fcarel(&["lattice", path_str(&toy3()), "--max-concepts", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fcarel(&["lattice", path_str(&toy3()), "--format", "json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(fcarel(&["lattice"]).status.code(), Some(1));
    assert_eq!(fcarel(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let input = toy3();
    let score = |extra: &[&str]| {
        let mut args = vec!["score", path_str(&input), "--output", path_str(&out)];
        args.extend_from_slice(extra);
        fcarel(&args).status.code()
    };
    assert_eq!(score(&["--activation", "sigmoidal"]), Some(3));
    assert_eq!(score(&["--index", "robustness"]), Some(3));
    assert_eq!(score(&["--stability-method", "monte-carlo"]), Some(3));
    assert_eq!(score(&[]), Some(0));
}

#[test]
fn score_rows_for_toy3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let status = fcarel(&["score", path_str(&toy3()), "--index", "all", "--output", path_str(&out)]).status;
    assert!(status.success());
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "concept_id,extent_size,intent_size,alpha,beta,cr,stability,n_mingens\n\
         0,3,1,0,0,0,0.5,1\n\
         1,2,3,0,0.333333333333,0.166666666667,1,2\n"
    );

    let cr_only = dir.path().join("cr.csv");
    assert!(fcarel(&["score", path_str(&toy3()), "--output", path_str(&cr_only)])
        .status
        .success());
    let text = std::fs::read_to_string(&cr_only).unwrap();
    assert_eq!(text.lines().nth(2), Some("1,2,3,0,0.333333333333,0.166666666667,,2"));
}

#[test]
fn score_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("ctx.cxt");
    let gen = fcarel(&[
        "gen",
        "--objects",
        "40",
        "--attributes",
        "8",
        "--p",
        "0.4",
        "--seed",
        "5",
        "--output",
        path_str(&ctx),
    ]);
    assert!(gen.status.success());
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("s{threads}.csv"));
        let args = [
            "--threads",
            threads,
            "score",
            path_str(&ctx),
            "--index",
            "all",
            "--output",
            path_str(&out),
        ];
        assert!(fcarel(&args).status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn eval_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("ctx.cxt");
    assert!(fcarel(&[
        "gen",
        "--objects",
        "30",
        "--attributes",
        "6",
        "--p",
        "0.4",
        "--output",
        path_str(&ctx)
    ])
    .status
    .success());
    let mut scores = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let res = fcarel(&["eval", path_str(&ctx), "--seed", "9", "--output", path_str(&out)]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
        let line = stdout(&res);
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0], "cr");
        let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
        assert!(summary.starts_with("index,activation,n,xi,tau_seconds\ncr,arithmetic,"));
        assert!(std::fs::read_to_string(out.join("timings.csv"))
            .unwrap()
            .starts_with("side,concept_id,seconds\n"));
        scores.push(std::fs::read(out.join("scores.csv")).unwrap());
    }
    assert_eq!(scores[0], scores[1]);
}

#[test]
fn eval_duplicated_objects() {
    // every object appears twice; the ordered split puts one copy per side
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("dup.csv");
    std::fs::write(
        &ctx,
        ",a,b,c,d\n1,1,1,0,0\n2,0,1,1,0\n3,1,0,1,1\n4,1,1,1,0\n\
         1b,1,1,0,0\n2b,0,1,1,0\n3b,1,0,1,1\n4b,1,1,1,0\n",
    )
    .unwrap();
    for index in ["cr", "stability"] {
        let out = dir.path().join(index);
        let res = fcarel(&[
            "eval",
            path_str(&ctx),
            "--index",
            index,
            "--split",
            "ordered",
            "--output",
            path_str(&out),
        ]);
        assert!(res.status.success());
        let line = stdout(&res);
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields[0], index);
        assert!((fields[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "{line}");
    }
}

#[test]
fn eval_single_object_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = dir.path().join("one.cxt");
    std::fs::write(&ctx, "B\n\n1\n2\ng\na\nb\nX.\n").unwrap();
    let out = dir.path().join("out");
    let res = fcarel(&["eval", path_str(&ctx), "--output", path_str(&out)]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn gen_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("p0.cxt");
    assert!(fcarel(&[
        "gen",
        "--objects",
        "5",
        "--attributes",
        "4",
        "--p",
        "0",
        "--output",
        path_str(&empty)
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&empty).unwrap();
    assert!(text.lines().skip(4 + 9).all(|l| l == "...."));

    let a = dir.path().join("a.cxt");
    let b = dir.path().join("b.cxt");
    for p in [&a, &b] {
        let args = [
            "gen",
            "--objects",
            "793",
            "--attributes",
            "10",
            "--p",
            "0.3",
            "--seed",
            "7",
            "--output",
            path_str(p),
        ];
        assert!(fcarel(&args).status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let ctx = parse_cxt(std::str::from_utf8(&bytes).unwrap()).unwrap();
    assert_eq!(ctx.n_objects(), 793);
    let grid_rows = std::str::from_utf8(&bytes).unwrap().lines().skip(4 + 793 + 10).count();
    assert_eq!(grid_rows, 793);

    let bad = fcarel(&[
        "gen",
        "--objects",
        "3",
        "--attributes",
        "3",
        "--p",
        "1.5",
        "--output",
        path_str(&a),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = fcarel(&[
        "gen",
        "--objects",
        "-3",
        "--attributes",
        "3",
        "--p",
        "0.5",
        "--output",
        path_str(&a),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

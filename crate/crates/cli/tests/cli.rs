use std::process::{Command, Output};

use anticont::{
    build_table, exceptional_candidates, verify_main_theorem, CongruenceSpec, ExceptionalSet,
    TableDocument, TheoremMode, VerificationReport,
};
use serde_json::Value;

fn anticont(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anticont"))
        .args(args)
        .env_remove("ANTICONT_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = anticont(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn line(args: &[&str]) -> String {
    let s = stdout(args);
    assert!(s.ends_with('\n'), "{args:?} output not newline-terminated");
    s.trim_end().to_string()
}

#[test]
fn documented_examples() {
    assert_eq!(line(&["expand", "25", "7"]), "3,1,1,3");
    assert_eq!(line(&["anticont", "3,1,1,3"]), "0");
    assert_eq!(
        line(&["exceptional", "--n", "3", "--s", "1"]),
        "1,2,3,4,5,6,9,12,13"
    );
}

#[test]
fn signed_n_and_ranges() {
    assert_eq!(line(&["solve", "--n", "-4", "--s", "0", "11"]), "7,8");
    assert_eq!(line(&["solve", "--n=4", "--s", "0", "11"]), "3,4");
    assert_eq!(line(&["continuant", "2,1,2,1", "--range", "5", "3"]), "0");
    assert_eq!(line(&["anticont", "1,1,1,2,2,1", "--recursive"]), "2");
    assert_eq!(
        line(&["exceptional", "--n", "-4", "--s", "0", "--true-exceptions"]),
        "2/1 3/1 3/2"
    );
    assert_eq!(
        line(&["exceptional", "--n", "1", "--s", "0", "--true-exceptions"]),
        "None"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(anticont(&["expand", "25"]).status.code(), Some(1));
    assert_eq!(anticont(&["anticont", "3,0,2"]).status.code(), Some(1));
    assert_eq!(anticont(&["bogus"]).status.code(), Some(1));
    assert_eq!(anticont(&["--help"]).status.code(), Some(0));
    assert_eq!(anticont(&["--version"]).status.code(), Some(0));

    let out = anticont(&["expand", "4", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(
        anticont(&["exceptional", "--n", "2", "--s", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        anticont(&["continuant", "1,2", "--range", "0", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        anticont(&[
            "verify",
            "theorem",
            "--n",
            "1",
            "--s",
            "0",
            "--alpha-max",
            "100"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn format_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_anticont"))
        .args(["expand", "25", "7"])
        .env("ANTICONT_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "alpha,beta,expansion,parity\n25,7,3.1.1.3,even\n"
    );
    let out = Command::new(env!("CARGO_BIN_EXE_anticont"))
        .args(["expand", "25", "7", "--format", "text"])
        .env("ANTICONT_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3,1,1,3\n");
}

#[test]
fn json_round_trips() {
    let doc: TableDocument =
        serde_json::from_str(&stdout(&["table", "--n-max", "4", "--format", "json"])).unwrap();
    assert_eq!(doc, build_table(4).unwrap());

    let spec = CongruenceSpec::new(4, 0).unwrap();
    let report: VerificationReport = serde_json::from_str(&stdout(&[
        "verify",
        "theorem",
        "--n",
        "4",
        "--s",
        "0",
        "--alpha-max",
        "30",
        "--mode",
        "coarse",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(
        report,
        verify_main_theorem(&spec, 30, TheoremMode::Coarse).unwrap()
    );

    let set: ExceptionalSet = serde_json::from_str(&stdout(&[
        "exceptional",
        "--n",
        "4",
        "--s",
        "0",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(set, exceptional_candidates(&spec).unwrap());

    let v: Value =
        serde_json::from_str(&stdout(&["expand", "25", "7", "--format", "json"])).unwrap();
    assert_eq!(v["expansion"], serde_json::json!([3, 1, 1, 3]));
}

#[test]
fn table_csv_matches_library() {
    assert_eq!(
        stdout(&["table", "--format", "csv"]),
        build_table(6).unwrap().to_csv()
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify",
        "identities",
        "--max-alpha",
        "80",
        "--trials",
        "500",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

/// Every library operation is reachable from some invocation, in every format.
#[test]
fn coverage_audit() {
    let cases: &[(&str, &[&str], &str)] = &[
        ("expand", &["expand", "11", "4"], "2,1,3"),
        (
            "expand_with_parity",
            &["expand", "11", "4", "--parity", "even"],
            "2,1,2,1",
        ),
        ("evaluate", &["continuant", "2,1,2,1", "--fraction"], "11/4"),
        (
            "parity_by_inverse",
            &["expand", "25", "7", "--inverse"],
            "18 opposite even",
        ),
        ("continuant_range", &["continuant", "1,2,3"], "10"),
        ("anticontinuant_range", &["anticont", "5,1"], "4"),
        (
            "euler_residual",
            &["continuant", "3,1,1,3", "--euler", "0", "1", "2", "3"],
            "0",
        ),
        ("fibonacci", &["continuant", "--fibonacci", "10"], "55"),
        ("decompose", &["type", "2,1,2,1"], "type: (1 ; 1,2) [even]"),
        (
            "compose",
            &["type", "--c", "4", "--core", "", "--pivot", "1"],
            "5,1",
        ),
        (
            "type_value",
            &["type", "--c", "1", "--core", "1,2", "--sigma", "odd"],
            "2",
        ),
        (
            "enumerate_types",
            &["enumerate", "--n", "1", "--parity", "odd"],
            "(1 ; 1) [even]",
        ),
        (
            "solve_quadratic",
            &["solve", "--n", "0", "--s", "0", "25"],
            "7,18",
        ),
        (
            "exceptional_candidates",
            &["exceptional", "--n", "1", "--s", "0"],
            "1,2,3",
        ),
        (
            "true_exceptions",
            &["exceptional", "--n", "4", "--s", "0", "--true-exceptions"],
            "2/1 3/1 3/2",
        ),
        (
            "folded_normalize",
            &[
                "folded",
                "--b",
                "1",
                "--n",
                "4",
                "--a",
                "2",
                "--normalize-only",
            ],
            "b=4 n=2 a=1 eps=1 -> 16/7",
        ),
        (
            "folded_expand_classify",
            &["folded", "--b", "1", "--n", "5", "--a", "2", "--eps", "-1"],
            "b=1 n=5 a=2 eps=-1 -> 25/11",
        ),
        (
            "verify_identities",
            &["verify", "identities", "--max-alpha", "2", "--trials", "0"],
            "identity sweep",
        ),
        (
            "verify_main_theorem",
            &[
                "verify",
                "theorem",
                "--n",
                "1",
                "--s",
                "0",
                "--alpha-max",
                "50",
            ],
            "congruence: x^2 + 1x + 1 (n = 1, s = 0)",
        ),
        ("build_table", &["table", "--n-max", "1"], "(value,len)"),
    ];
    for (op, args, expected) in cases {
        let text = stdout(args);
        let first = text.lines().next().unwrap_or("");
        assert!(first.starts_with(expected), "{op}: {first:?}");
        for format in ["json", "csv"] {
            let mut with_format = args.to_vec();
            with_format.extend(["--format", format]);
            let out = stdout(&with_format);
            assert!(out.ends_with('\n'), "{op} {format}");
            if format == "json" {
                serde_json::from_str::<Value>(&out).unwrap_or_else(|e| panic!("{op}: {e}"));
            } else {
                assert!(out.lines().count() >= 1, "{op} csv");
            }
        }
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn rpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpart"))
        .args(args)
        .env_remove("RPART_FORMAT")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rpart-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn table_is_the_default_format() {
    let out = rpart(&[
        "count", "--parts", "1,3", "--d", "3", "--n", "10", "--method", "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "parts          1,3\nd              3\nn              10\noracle         3\nclosed         3\ndecomposition  3\nverdict        agree\n"
    );
}

#[test]
fn environment_selects_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_rpart"))
        .args(["series", "--parts", "1,2", "--d", "2", "--N", "2"])
        .env("RPART_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(
        stdout(&out),
        "field,value\nparts,\"1,2\"\nd,2\nN,2\ncoefficients[0],1\ncoefficients[1],1\ncoefficients[2],2\n"
    );
    // an explicit flag wins
    let out = Command::new(env!("CARGO_BIN_EXE_rpart"))
        .args([
            "--format", "record", "series", "--parts", "1,2", "--d", "2", "--N", "0",
        ])
        .env("RPART_FORMAT", "csv")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("{\"command\":\"series\""));
}

#[test]
fn unsorted_parts_are_canonicalized_for_counts() {
    let out = rpart(&[
        "count", "--parts", "3,1", "--d", "3", "--n", "10", "--format", "record",
    ]);
    assert_eq!(
        stdout(&out),
        "{\"command\":\"count\",\"parts\":[1,3],\"d\":3,\"n\":\"10\",\"values\":{\"oracle\":\"3\"}}\n"
    );
}

#[test]
fn unsorted_parts_are_rejected_for_weighted_counts() {
    let out = rpart(&["weighted", "--parts", "3,1", "--d", "3", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("strictly increasing"), "{err}");
}

#[test]
fn weighted_profiles() {
    let out = rpart(&[
        "weighted", "--parts", "1,2,4", "--d", "2", "--n", "6", "--method", "all", "--format",
        "record",
    ]);
    let text = stdout(&out);
    assert!(
        text.starts_with("{\"command\":\"weighted\",\"parts\":[1,2,4],\"d\":2,\"n\":\"6\",\"oracle\":{\"2\":\"1\",\"3\":\"2\",\"4\":\"1\",\"5\":\"1\",\"6\":\"1\"},\"closed\":{"),
        "{text}"
    );
    let out = rpart(&[
        "weighted", "--parts", "1,2", "--d", "2", "--n", "4", "--j", "1", "--format", "record",
    ]);
    assert_eq!(
        stdout(&out),
        "{\"command\":\"weighted\",\"parts\":[1,2],\"d\":2,\"n\":\"4\",\"oracle\":{\"1\":\"0\"}}\n"
    );
}

#[test]
fn unreduced_polynomial_part() {
    let out = rpart(&[
        "polypart",
        "--parts",
        "1,3",
        "--d",
        "3",
        "--n",
        "10",
        "--unreduced",
        "--format",
        "record",
    ]);
    assert_eq!(
        stdout(&out),
        "{\"command\":\"polypart\",\"parts\":[1,3],\"d\":3,\"n\":\"10\",\"value\":\"56/27\",\"unreduced\":\"168/81\"}\n"
    );
    let out = rpart(&[
        "polypart",
        "--parts",
        "1,3",
        "--d",
        "3",
        "--n",
        "10",
        "--unreduced",
        "--plain",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn large_targets_use_the_closed_forms() {
    let n = "1000000000000";
    let out = rpart(&[
        "count", "--parts", "1,2", "--d", "2", "--n", n, "--method", "closed", "--format", "record",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"command\":\"count\",\"parts\":[1,2],\"d\":2,\"n\":\"1000000000000\",\"values\":{\"closed\":\"500000000001\"}}\n"
    );
    // the oracle refuses to tabulate that far
    let out = rpart(&["count", "--parts", "1,2", "--d", "2", "--n", n]);
    assert_eq!(out.status.code(), Some(2));
    // beyond 64 bits
    let out = rpart(&[
        "count",
        "--parts",
        "1,2",
        "--d",
        "2",
        "--n",
        "100000000000000000000000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closed_cohomology_profile_carries_caveat() {
    let out = rpart(&[
        "cohomology",
        "--p",
        "2",
        "--n",
        "6",
        "--method",
        "closed",
        "--format",
        "record",
    ]);
    let text = stdout(&out);
    assert!(text.contains(
        "\"profile\":{\"1\":\"2\",\"2\":\"2\",\"3\":\"2\",\"4\":\"1\",\"5\":\"1\",\"6\":\"1\"}"
    ));
    assert!(text.contains("\"exactness\":\"upper-bound\""));
    let out = rpart(&[
        "cohomology",
        "--p",
        "2",
        "--n",
        "6",
        "--mode",
        "total",
        "--method",
        "closed",
        "--format",
        "record",
    ]);
    assert!(stdout(&out).ends_with("\"total\":\"6\"}\n"));
}

#[test]
fn verify_single_cases() {
    let out = rpart(&[
        "verify",
        "--case",
        "sum-over-j",
        "--parts",
        "1,3,9",
        "--d",
        "3",
        "--n",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "identity  sum-over-j\nparams    parts=1,3,9 d=3 n=9\nresult    match\n"
    );
    let out = rpart(&[
        "verify",
        "--case",
        "prop2.1-series",
        "--parts",
        "1,3",
        "--d",
        "3",
        "--N",
        "10",
        "--format",
        "record",
    ]);
    assert!(stdout(&out).ends_with("\"result\":\"match\"}\n"));
    let out = rpart(&["verify", "--case", "no-such-identity", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rpart(&["verify", "--case", "thm2.3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_grid_from_config_file() {
    let config = scratch("grid.conf");
    std::fs::write(
        &config,
        "# small grid\nidentities = congruent-closed, counted-closed\nd_values = 2,3\nn_max = 10\n",
    )
    .unwrap();
    let report = scratch("report.json");
    let out = rpart(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--r-max",
        "2",
        "--output",
        report.to_str().unwrap(),
        "--format",
        "record",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["config"]["r_max"], 2);
    assert_eq!(json["config"]["n_max"], 10);
    assert_eq!(json["verdict"], "known-only");
    let ids: Vec<&str> = json["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["identity"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["congruent-closed", "counted-closed"]);
    assert_eq!(
        json["identities"][0]["matches"],
        json["identities"][0]["cases"]
    );

    std::fs::write(&config, "n_max = ten\n").unwrap();
    let out = rpart(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_grid_is_deterministic() {
    let args = [
        "verify",
        "--identities",
        "thm2.7",
        "--n-max",
        "12",
        "--d-values",
        "2",
        "--threads",
        "3",
    ];
    let strip = |out: Output| {
        stdout(&out)
            .lines()
            .filter(|l| !l.starts_with("duration_ms"))
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    let first = strip(rpart(&args));
    assert_eq!(first, strip(rpart(&args)));
    assert!(first.iter().any(|l| l == "verdict known-only"));
    let csv = rpart(&[
        "verify",
        "--identities",
        "thm2.7",
        "--n-max",
        "12",
        "--d-values",
        "2",
        "--format",
        "csv",
    ]);
    let csv = stdout(&csv);
    assert!(csv.starts_with("identity,params,formula,oracle,gap,classification,note\n"));
    assert_eq!(
        csv.lines().count(),
        first.iter().filter(|l| l.starts_with("record")).count() + 1
    );
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["count", "--parts", "1,3", "--d", "3", "--n", "-1"][..],
        &["count", "--parts", "1,x", "--d", "3", "--n", "1"],
        &["count", "--parts", "1,3", "--n", "1"],
        &["polypart", "--parts", "4", "--d", "3", "--n", "1"],
        &["cohomology", "--p", "1", "--n", "4"],
        &["cohomology", "--p", "3", "--n", "-4"],
        &["verify", "--threads", "0"],
        &["verify", "--n-min", "5", "--n-max", "4"],
        &[
            "--format", "xml", "series", "--parts", "1", "--d", "2", "--N", "1",
        ],
        &[],
    ] {
        let out = rpart(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_documents_each_method() {
    let out = rpart(&["count", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for method in ["oracle", "closed", "decomposition", "all"] {
        assert!(text.contains(method), "{method}");
    }
    let text = stdout(&rpart(&["cohomology", "--help"]));
    assert!(text.contains("enumeration") && text.contains("overcount"));
}

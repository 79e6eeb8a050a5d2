use std::process::{Command, Output};

use serde_json::Value;

fn subsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsum")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn rational(v: &Value) -> (String, String) {
    (v["numerator"].as_str().unwrap().into(), v["denominator"].as_str().unwrap().into())
}

#[test]
fn analyze_examples() {
    let v = json(&subsum(&["--json", "analyze", "dihedral:4"]));
    assert_eq!(v["subgroup_count"], 10);
    assert_eq!(rational(&v["sigma1"]), ("31".into(), "8".into()));
    assert_eq!(v["sigma1"]["decimal"], "3.875000000000");
    assert_eq!(v["verdict"], "AboveThreshold");
    assert!(v["timing_ms"].is_u64());

    let v = json(&subsum(&["--json", "analyze", "--no-timing", "pq:3,7"]));
    assert_eq!(v["census"], serde_json::json!({"1": 1, "3": 7, "7": 1, "21": 1}));
    assert_eq!(rational(&v["sigma1"]), ("50".into(), "21".into()));
    assert!(v.get("timing_ms").is_none());

    let v = json(&subsum(&["--json", "analyze", "product:elem:2,2+cyclic:9"]));
    assert_eq!(v["order"], 36);
    assert_eq!(v["profile"]["is_nilpotent"], true);

    for (spec, verdict, structure) in [
        ("elem:2,2", "BelowThreshold", "Z2xZ2"),
        ("elem:3,2", "AtThreshold", "Z3xZ3"),
        ("sym:3", "AtThreshold", "S3"),
        ("cyclic:70", "AtThreshold", "Cyclic"),
        ("sym:4", "AboveThreshold", "Other"),
    ] {
        let v = json(&subsum(&["--json", "analyze", spec]));
        assert_eq!(
            (v["verdict"].as_str(), v["structure"].as_str()),
            (Some(verdict), Some(structure)),
            "{spec}"
        );
        assert_eq!(v["theorem1_consistent"], true);
    }

    let out = subsum(&["analyze", "cyclic:12"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sigma1:       7/3"));
    assert!(text.contains("verdict:      AtThreshold"));
}

#[test]
fn exit_codes() {
    let out = subsum(&["analyze", "pq:3,5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("pq:3,5: "));
    assert_eq!(code(&subsum(&["analyze", "nonsense"])), 2);
    assert_eq!(code(&subsum(&["analyze", "cyclic:0"])), 2);
    assert_eq!(code(&subsum(&["sequence", "0"])), 2);
    assert_eq!(code(&subsum(&["--workers", "0", "sigma-scan", "10"])), 2);
    assert_eq!(code(&subsum(&["verify", "--families", "bogus"])), 2);
    assert_eq!(code(&subsum(&["verify", "--families", ""])), 2);

    assert_eq!(code(&subsum(&["analyze", "cyclic:2001"])), 3);
    assert_eq!(code(&subsum(&["--max-order", "10", "analyze", "sym:4"])), 3);
    assert_eq!(code(&subsum(&["--max-subgroups", "50", "analyze", "elem:2,5"])), 3);
    assert_eq!(code(&subsum(&["sigma-scan", "999999999999"])), 3);
    assert_eq!(code(&subsum(&["--search-cap", "20", "sequence", "4"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3\n0 1 2\n1 2 0\n2 1 0\n").unwrap();
    assert_eq!(code(&subsum(&["analyze", bad.to_str().unwrap()])), 4);
    let not_assoc = dir.path().join("nonassoc.txt");
    // a Latin square with identity 0 that is not associative (order 5 loop)
    std::fs::write(&not_assoc, "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n").unwrap();
    assert_eq!(code(&subsum(&["analyze", not_assoc.to_str().unwrap()])), 4);
    let perm = dir.path().join("bad.perm");
    std::fs::write(&perm, "perm 3\n(0 1 5)\n").unwrap();
    assert_eq!(code(&subsum(&["analyze", perm.to_str().unwrap()])), 4);
}

#[test]
fn dump_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for spec in ["sym:4", "pq:3,7", "product:dihedral:3+cyclic:5"] {
        let path = dir.path().join("t.txt");
        let out = subsum(&["dump-table", spec, "-o", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let mut a = json(&subsum(&["--json", "analyze", "--no-timing", spec]));
        let mut b = json(&subsum(&["--json", "analyze", "--no-timing", path.to_str().unwrap()]));
        for v in [&mut a, &mut b] {
            v.as_object_mut().unwrap().remove("label");
        }
        assert_eq!(a, b, "{spec}");

        let printed = subsum(&["dump-table", spec]);
        assert_eq!(printed.stdout, std::fs::read(&path).unwrap());
    }
}

#[test]
fn permutation_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a4.perm");
    std::fs::write(&path, "perm 4\n(0 1 2)\n(0 1)(2 3)\n").unwrap();
    let v = json(&subsum(&["--json", "analyze", path.to_str().unwrap()]));
    assert_eq!(v["order"], 12);
    assert_eq!(v["subgroup_count"], 10);
    assert_eq!(v["profile"]["is_nilpotent"], false);
}

#[test]
fn sigma_scan() {
    let v = json(&subsum(&["--json", "sigma-scan", "100"]));
    assert_eq!(v["witnesses"], serde_json::json!([12, 70, 88]));
    assert_eq!(v["equal"], 3);
    let total = v["below"].as_u64().unwrap() + v["above"].as_u64().unwrap() + 3;
    assert_eq!(total, 100);
    assert_eq!(json(&subsum(&["--json", "sigma-scan", "11"]))["witnesses"], serde_json::json!([]));
    assert_eq!(json(&subsum(&["--json", "sigma-scan", "1"]))["below"], 1);
}

#[test]
fn sequence() {
    let v = json(&subsum(&["--json", "sequence", "1"]));
    let row = &v["rows"][0];
    assert_eq!((row["p"].as_u64(), row["q"].as_u64()), (Some(2), Some(3)));
    assert_eq!(rational(&row["sigma1"]), ("8".into(), "3".into()));

    let v = json(&subsum(&["--json", "sequence", "4"]));
    let qs: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, [3, 7, 11, 29]);
    assert_eq!(v["rows"][3]["status"], "Enumerated");
    assert_eq!(v["observed_strictly_decreasing"], true);

    let v = json(&subsum(&["--json", "--max-order", "100", "sequence", "4"]));
    assert_eq!(v["rows"][3]["status"], "SkippedLarge");
    assert!(v["rows"][3]["verdict"].is_null());
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "--json",
        "verify",
        "--cyclic-max",
        "100",
        "--elem-max",
        "64",
        "--dihedral-max",
        "12",
        "--pq-max",
        "100",
        "--sym-max",
        "4",
    ];
    let a = subsum(&args);
    let b = subsum(&["--workers", "1"].iter().chain(args.iter()).copied().collect::<Vec<_>>());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["errors"], 0);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["failed"], 0, "{}", check["name"]);
    }
    let at: Vec<&str> =
        v["at_hits"].as_array().unwrap().iter().map(|h| h["label"].as_str().unwrap()).collect();
    assert!(at.contains(&"cyclic:12") && at.contains(&"cyclic:70") && at.contains(&"cyclic:88"));
    assert!(at.contains(&"elem:3,2"));
}

#[test]
fn verify_extra_and_p_groups() {
    let out = subsum(&[
        "--json",
        "verify",
        "--families",
        "elem,dihedral",
        "--elem-max",
        "32",
        "--dihedral-max",
        "8",
        "--extra",
        "product:cyclic:4+cyclic:2",
        "--extra",
        "cyclic:27",
        "--noncyclic-p-groups",
    ]);
    let v = json(&out);
    let labels: Vec<&str> =
        v["entries"].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"product:cyclic:4+cyclic:2"));
    assert!(labels.contains(&"dihedral:4") && labels.contains(&"dihedral:8"));
    assert!(
        !labels.contains(&"cyclic:27") && !labels.contains(&"elem:2,1") && !labels.contains(&"dihedral:3")
    );
    let check = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "noncyclic-p-groups").unwrap();
    assert_eq!(check["failed"], 0);
    assert_eq!(check["passed"].as_u64().unwrap() as usize, labels.len());

    let text =
        String::from_utf8(subsum(&["verify", "--families", "cyclic", "--cyclic-max", "90"]).stdout).unwrap();
    assert!(text.contains("PASS threshold-classification"));
    assert!(text.contains("cyclic witness found by divisor-sum search"));
}

use assert_cmd::Command;
use reflquot::theorems::VerificationReport;

fn reflquot() -> Command {
    Command::cargo_bin("reflquot").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = reflquot().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn verify_main_prints_both_sides() {
    let s = stdout(&["verify", "main", "G(2,1,2)", "--subgroup", "classes=0"]);
    assert!(s.contains("lhs: q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t"), "{s}");
    assert!(s.contains("rhs: q^2*t^2 + 2*q*t^2 + t^2 + 2*q*t + 2*t"), "{s}");
    assert!(s.trim_end().ends_with("PASS"), "{s}");
}

#[test]
fn info_for_st28() {
    let s = stdout(&["info", "ST28"]);
    assert!(s.contains("order 1152"));
    assert!(s.contains("degrees 2,6,8,12"));
    assert!(s.contains("reflections 24 in 2 classes"));
}

#[test]
fn normal_subgroups_of_b3() {
    let s = stdout(&["normal-subgroups", "G(2,1,3)"]);
    assert!(s.starts_with("G(2,1,3): 4 normal reflection subgroups"), "{s}");
    for order in ["order 1 ", "order 8 ", "order 24 ", "order 48 "] {
        assert!(s.contains(order), "{order} missing in {s}");
    }
}

#[test]
fn classes_and_quotient() {
    let s = stdout(&["classes", "G(4,2,2)"]);
    assert!(s.starts_with("G(4,2,2): 3 reflection classes"), "{s}");
    let s = stdout(&["quotient", "G(2,1,2)", "--subgroup", "classes=0"]);
    assert!(s.contains("quotient order 2"));
    assert!(s.contains("pairs (e^G(E), e^N(V)) (0,1) (2,1)"), "{s}");
}

#[test]
fn every_theorem_id_runs() {
    let cases: [&[&str]; 11] = [
        &["shephard-todd", "ST4"],
        &["solomon", "G(3,1,2)"],
        &["numerology", "G(4,2,2)"],
        &["main", "G(3,1,2)"],
        &["bigraded", "G(2,1,2)"],
        &["coset", "G(2,1,2)", "--subgroup", "classes=0", "--coset", "1"],
        &["coset-sum", "G(4,1,2)"],
        &["orlik-solomon", "G(3,1,1)", "--sigma", "2"],
        &["main-twisted", "G(4,1,2)", "--sigma", "3"],
        &["factorizing", "G(2,1,3)"],
        &["classification", "G(4,2,3)"],
    ];
    for args in cases {
        let mut v = vec!["verify"];
        v.extend_from_slice(args);
        let s = stdout(&v);
        assert!(s.contains("PASS") && !s.contains("FAIL"), "{v:?}: {s}");
    }
}

#[test]
fn cyclic_group_twist_gives_q_plus_one() {
    let s = stdout(&["verify", "orlik-solomon", "G(3,1,1)", "--sigma", "2"]);
    assert!(s.contains("lhs: q + 1"), "{s}");
}

#[test]
fn json_reports_round_trip_and_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        stdout(&["verify", "coset-sum", "G(4,2,2)", "--json", p.to_str().unwrap()]);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.schema == 1 && r.pass));
    assert_eq!(serde_json::to_string_pretty(&reports).unwrap() + "\n", text);
}

#[test]
fn bad_input_exits_with_2() {
    for args in [
        vec!["verify", "nonsense", "ST4"],
        vec!["info", "G(4,3,2)"],
        vec!["info", "ST99"],
        vec!["verify", "main", "G(2,1,2)", "--subgroup", "classes=x"],
        vec!["verify", "main-twisted", "G(4,1,2)", "--sigma", "2"],
        vec!["verify", "coset", "G(2,1,2)", "--subgroup", "classes=0", "--coset", "9"],
        vec!["frobnicate"],
    ] {
        reflquot().args(&args).assert().code(2);
    }
}

#[test]
fn small_battery_passes() {
    let s = stdout(&["battery", "--max-order", "48", "--max-m", "6"]);
    let lines: Vec<&str> = s.lines().filter(|l| l.starts_with("PASS criterion") || l.starts_with("FAIL criterion")).collect();
    assert_eq!(lines.len(), 10, "{s}");
    assert!(lines.iter().all(|l| l.starts_with("PASS")), "{s}");
}

#[test]
fn thread_count_from_environment() {
    reflquot().env("REFLQUOT_THREADS", "2").args(["info", "ST4"]).assert().success();
    reflquot().env("REFLQUOT_THREADS", "many").args(["info", "ST4"]).assert().code(2);
}

use std::process::{Command, Output};

fn torsio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsio")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn torsion_prints_one_number() {
    let o = torsio(&["torsion", "trefoil", "--theta", "1.1"]);
    assert_eq!(o.status.code(), Some(0));
    let value: f64 = stdout(&o).trim().parse().unwrap();
    assert!(value.is_finite() && value != 0.0);
}

#[test]
fn missing_representation_index_is_a_numerical_failure() {
    let o = torsio(&["torsion", "trefoil", "--theta", "1.1", "--tangent-index", "50"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_knot_is_malformed_input() {
    assert_eq!(torsio(&["torsion", "no_such_knot", "--theta", "1"]).status.code(), Some(2));
    assert_eq!(torsio(&["verify", "trefoil"]).status.code(), Some(2));
    assert_eq!(torsio(&["mutate", "trefoil"]).status.code(), Some(2));
}

#[test]
fn alexander_of_the_figure_eight() {
    let o = torsio(&["alexander", "figure_eight"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("determinant: 5"));
}

#[test]
fn reps_round_trip_into_twisted_alexander() {
    let dir = std::env::temp_dir().join(format!("torsio-cli-reps-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let all = dir.join("reps.json");
    let o = torsio(&["reps", "trefoil", "--theta", "1.1", "--out", all.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let reps: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&all).unwrap()).unwrap();
    assert!(!reps.is_empty());
    let one = dir.join("rep.json");
    std::fs::write(&one, reps[0].to_string()).unwrap();
    let o = torsio(&["alexander", "trefoil", "--rep", one.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let f: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(f["numerator"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn classify_lists_every_rotation() {
    let o = torsio(&["mutate", "kinoshita_terasaka", "--classify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ab_cd: positive\nad_bc: negative\nac_bd: negative\n");
}

#[test]
fn build_checks_the_partner() {
    assert_eq!(torsio(&["mutate", "kinoshita_terasaka:conway", "--build"]).status.code(), Some(0));
    assert_eq!(torsio(&["mutate", "kinoshita_terasaka:trefoil", "--build"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_sidecar() {
    let dir = std::env::temp_dir().join(format!("torsio-cli-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let args = ["verify", "kinoshita_terasaka:conway", "--samples", "3", "--seed", "7", "--out", out.to_str().unwrap()];
    let o = torsio(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).ends_with("PASS\n"));
    let first = std::fs::read_to_string(&out).unwrap();
    let report: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["samples"].as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("theta,ratio_twisted,sign0,sign_mu,sign1,ratio_total"));
    torsio(&args);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn negative_move_is_report_only() {
    let o = torsio(&["verify", "kinoshita_terasaka", "--move", "ad_bc", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("REPORT ONLY\n"));
}

#[test]
fn bundled_certificate_validates() {
    let o = torsio(&["certificate", "conway"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid"));
}

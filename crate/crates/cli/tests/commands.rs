use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { data(a).display().to_string() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_gpdcalc")).args(&args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", "bz2.json"]).status.code(), Some(0));
    let broken = run(&["validate", "broken_assoc.json"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("AssociativityViolation"));
    assert_eq!(run(&["validate", "malformed.json"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "broken_datum.json"]).status.code(), Some(1));
}

#[test]
fn info_reports_orbits() {
    assert!(stdout(&run(&["info", "pair2.json"])).starts_with("1 orbit, isotropy trivial"));
    assert!(stdout(&run(&["info", "bz2.json"])).starts_with("1 orbit, isotropy Z/2"));
    assert!(stdout(&run(&["info", "disc2.json"])).starts_with("2 orbits"));
}

#[test]
fn morita_and_hs() {
    let o = run(&["morita", "z2swap.json", "pt.json"]);
    assert!(stdout(&o).starts_with("Morita equivalent: yes"));
    assert!(stdout(&o).contains("\"kind\": \"bibundle\""));
    assert!(stdout(&run(&["morita", "bz2.json", "pt.json"])).starts_with("Morita equivalent: no"));
    assert!(stdout(&run(&["hs", "bz2.json", "bz2.json"])).starts_with("2 classes"));
    assert!(stdout(&run(&["hs", "pt.json", "bz2.json"])).starts_with("1 class\n"));
    assert_eq!(run(&["hs", "bs3.json", "bs3.json", "--cap", "5"]).status.code(), Some(1));
}

#[test]
fn structured_output_is_json() {
    let o = run(&["morita", "z2swap.json", "pt.json", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["witness"]["kind"], "bibundle");
}

#[test]
fn demo_circle_summary() {
    for n in ["3", "4", "8"] {
        let o = run(&["demo-circle", n]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(
            stdout(&o).lines().next().unwrap(),
            "global classes: 2; arc classes: 1, 1; gluing obstruction: present"
        );
    }
    assert_eq!(run(&["demo-circle", "2"]).status.code(), Some(1));
}

#[test]
fn glue_compose_localize() {
    let out = std::env::temp_dir().join(format!("gpdcalc-glued-{}.json", std::process::id()));
    let o = run(&["glue", "twisted_datum.json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let glued = std::fs::read_to_string(&out).unwrap();
    assert!(glued.contains("\"kind\": \"bundle\""));
    std::fs::remove_file(&out).unwrap();
    assert_eq!(run(&["glue", "broken_datum.json"]).status.code(), Some(1));

    let o = run(&["compose", "unit_pair2.json", "pair2_to_pt.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"kind\": \"bibundle\""));
    assert_eq!(run(&["compose", "pair2_to_pt.json", "pair2_to_pt.json"]).status.code(), Some(1));

    let o = run(&["localize", "arrow_category.json", "x<=y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x<=y: two-sided inverse verified"));
    assert_eq!(run(&["localize", "arrow_category.json", "nope"]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["hs", "bz2.json", "bz2.json", "--format", "structured"]);
    let b = run(&["hs", "bz2.json", "bz2.json", "--format", "structured"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixtures_round_trip_bit_exactly() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap() == "malformed.json" {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = gpdcalc::doc::Document::parse(&text).unwrap();
        assert_eq!(doc.to_text(), text, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 10);
}

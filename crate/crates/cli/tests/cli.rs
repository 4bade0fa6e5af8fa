use std::io::Write;
use std::process::{Command, Output};

use nodal_hilb::serial::{class_from_doc, ClassDoc};
use nodal_hilb::{Family, FamilyDescriptor};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal-hilb")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn descriptor(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn fourth_power_of_the_discriminant() {
    assert_eq!(stdout(&["gamma-power", "--m", "3", "--k", "4", "--integrate"]), "13*omega2 - 9*sigma");
    assert_eq!(stdout(&["gamma-power", "--m", "2", "--k", "3", "--integrate"]), "1/2*omega2 - 1/2*sigma");
}

#[test]
fn pluecker_values() {
    assert_eq!(stdout(&["pluecker", "--which", "s2", "--m", "3"]), "6*L2 + 12*Lomega + 7*omega2 - 5*sigma");
    assert_eq!(stdout(&["pluecker", "--which", "s2", "--m", "3", "--published"]), "6*L2 + 8*Lomega + 7*omega2 - 5*sigma");
    assert_eq!(stdout(&["pluecker", "--which", "c2", "--m", "2"]), "L2 + Lomega");
}

#[test]
fn trisecants_from_overrides() {
    // substitute into the grand total: b = 1, d = 6, g = 0, Lω = ω² = σ = 0 gives 3·36 − 27·6 + 60 + 6
    let v = stdout(&["trisecants", "--d", "6", "--g", "0", "--b", "1", "--lomega", "0", "--omega2", "0", "--sigma", "0"]);
    assert_eq!(v, "12");
    assert_eq!(stdout(&["trisecants", "--scroll", "--d", "3", "--g", "0"]), "0");
    assert_eq!(stdout(&["trisecants", "--scroll", "--d", "4", "--g", "1"]), "0");
    assert_eq!(stdout(&["trisecants", "--scroll", "--d", "6", "--g", "3"]), "8");
}

#[test]
fn plane_curve_double_points() {
    for (d, g, n) in [("2", "0", "0"), ("3", "0", "1"), ("4", "3", "0"), ("4", "1", "2")] {
        assert_eq!(stdout(&["double-points", "--curve", "--d", d, "--g", g, "--n", "2"]), n, "d={d} g={g}");
    }
}

#[test]
fn descriptor_files() {
    let f = descriptor("[family]\ndim_b = 1\n\n[node.s]\nweight = 1\n");
    let p = f.path().to_str().unwrap();
    assert_eq!(stdout(&["gamma-power", "--m", "3", "--k", "4", "--integrate", p]), "-9 + 13*omega2");
    let smooth = descriptor("[family]\ndim_b = 1\n");
    assert_eq!(stdout(&["gamma-power", "--m", "3", "--k", "4", "--integrate", smooth.path().to_str().unwrap()]), "13*omega2");
}

#[test]
fn exit_codes() {
    let bad = descriptor("[family]\ndim_b = 1\n[node.s]\nweight = -1\n");
    let out = run(&["gamma-power", "--m", "2", "--k", "1", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node.s.weight"));

    let broken = descriptor("[family]\ndim_b = 1\nwhat\n");
    let out = run(&["gamma-power", "--m", "2", "--k", "1", broken.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(run(&["gamma-power", "--m", "2"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["gamma-power", "--m", "2", "--k", "1", "/nonexistent/file"]).status.code(), Some(1));

    // a class that is not top-dimensional cannot be integrated
    let out = run(&["gamma-power", "--m", "3", "--k", "2", "--integrate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not top-dimensional"));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn structured_output_round_trips_and_is_deterministic() {
    let args = ["--output", "json-like", "gamma-power", "--m", "3", "--k", "2"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let doc: ClassDoc = serde_json::from_value(v["class"].clone()).unwrap();
    let fam = Family::new(&FamilyDescriptor::generic(1)).unwrap();
    assert_eq!(class_from_doc(&doc).unwrap(), fam.gamma_power(3, 2));

    let v: serde_json::Value = serde_json::from_str(&stdout(&["--output", "json-like", "chern-numbers"])).unwrap();
    assert_eq!(v["command"], "chern-numbers");
    assert!(v["porteous"].as_str().unwrap().contains("sigma"));
}

#[test]
fn every_subcommand_answers() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["chern", "--m", "3", "--closed"],
        vec!["chern-numbers"],
        vec!["formulary"],
        vec!["formulary", "--monomial", "G2^2*G3^2"],
        vec!["transfer", "--m", "2", "--k", "1"],
        vec!["transfer", "--m", "2", "--k", "3", "--twist", "L", "--form", "j+1", "--integrate"],
        vec!["punctual-chern", "--m", "3"],
        vec!["punctual-chern", "--m", "3", "--integrate"],
        vec!["oracle-check", "--max-weight", "3", "--max-k", "2"],
    ];
    for c in cases {
        let text = stdout(&c);
        assert!(!text.is_empty(), "{c:?}");
        let mut json_args = vec!["--output", "json-like"];
        json_args.extend(&c);
        serde_json::from_str::<serde_json::Value>(&stdout(&json_args)).unwrap();
    }
    assert_eq!(stdout(&["formulary", "--monomial", "G2^2*G3^2"]), "G2^2*G3^2 † = 8*omega2 - 6*sigma");
    assert_eq!(stdout(&["transfer", "--m", "2", "--k", "3", "--twist", "L", "--integrate"]), stdout(&["transfer", "--m", "2", "--k", "3", "--twist", "L", "--form", "j+1", "--integrate"]));
}

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordlab"))
        .args(args)
        .env_remove("CHORDLAB_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn bfile(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn series_c_table() {
    let o = run(&["series", "C", "--order", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("C: 0, 1, 1, 4, 27, 248, 2830"));
}

#[test]
fn series_c2_bfile() {
    let o = run(&["series", "C2", "--order", "6", "--format", "bfile"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.collect::<Vec<_>>(), ["2 1", "3 1", "4 7", "5 63", "6 729"]);
}

#[test]
fn series_d_json_roundtrip() {
    let o = run(&["series", "D", "--order", "3", "--format", "json"]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["payload"]["coeffs"], serde_json::json!(["1", "1", "3", "15"]));
    assert_eq!(v["command"], "series");
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn rationals_print_exactly() {
    let o = run(&["asym", "C", "--image", "--terms", "5", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.contains("1,-5/2"));
    assert!(out.contains("5,-5326191/1280"));
}

#[test]
fn unknown_series_and_large_order() {
    assert_eq!(run(&["series", "Q", "--order", "3"]).status.code(), Some(2));
    assert_eq!(run(&["series", "C", "--order", "65"]).status.code(), Some(2));
}

#[test]
fn verify_chord_includes_brute_force() {
    let o = run(&["verify", "chord", "--order", "8"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("chord: brute force n=8"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_diffeo_runs_all_checks() {
    let o = run(&["verify", "diffeo", "--order", "10"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    for part in ["recurrences", "differential equations", "momentum recursion", "perturbed b rejected"] {
        assert!(out.contains(part), "missing {part}");
    }
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--order", "12"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn seed_determinism() {
    let a = run(&["verify", "bell", "--order", "6", "--seed", "5", "--format", "json"]);
    let b = run(&["verify", "bell", "--order", "6", "--seed", "5", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["diffeo", "--a", "1,2,-1/3", "--n", "4", "--kinematics", "seed=9"]);
    let d = run(&["diffeo", "--a", "1,2,-1/3", "--n", "4", "--kinematics", "seed=9"]);
    assert_eq!(c.stdout, d.stdout);
    assert!(stdout(&run(&["verify", "bell", "--order", "4"])).contains("seed=20190612"));
}

#[test]
fn enumeration_guard_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_chordlab"))
        .args(["enumerate", "--n", "6"])
        .env("CHORDLAB_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["enumerate", "--n", "5"]);
    assert!(stdout(&o).contains("connected       248"));
}

#[test]
fn enumerate_graphs() {
    assert!(stdout(&run(&["enumerate", "tadpoles", "--n", "4"])).contains("27"));
    assert_eq!(run(&["enumerate", "tadpoles", "--n", "5"]).status.code(), Some(2));
    assert!(stdout(&run(&["enumerate", "tadpoles", "--n", "5", "--extended"])).contains("248"));
    let q = stdout(&run(&["enumerate", "qqed", "--n", "3"]));
    assert!(q.lines().last().unwrap().ends_with(" 7"), "{q}");
}

#[test]
fn bijections_roundtrip_through_cli() {
    let fwd = stdout(&run(&["bijection", "nabla", "--input", "3: 4 5 6 1 2 3"]));
    let triple = fwd.lines().last().unwrap().to_string();
    let back = stdout(&run(&["bijection", "nabla", "--inverse", "--input", &triple]));
    assert_eq!(back.lines().last().unwrap(), "3: 4 5 6 1 2 3");

    let p = stdout(&run(&["bijection", "phi", "--input", "2: 3 4 1 2"]));
    assert_eq!(p.lines().last().unwrap(), "2: 4 3 2 1");

    let t = stdout(&run(&["bijection", "theta", "--input", "1: 2 1 ; 0:"]));
    let tree = t.lines().last().unwrap().to_string();
    let s = stdout(&run(&["bijection", "theta", "--inverse", "--input", &tree]));
    assert_eq!(s.lines().last().unwrap(), "1: 2 1 ; 0:");

    let l = stdout(&run(&["bijection", "lambda", "--inverse", "--input", "2: 3 4 1 2"]));
    let tad = l.lines().last().unwrap().to_string();
    let c = stdout(&run(&["bijection", "lambda", "--input", &tad]));
    assert_eq!(c.lines().last().unwrap(), "2: 3 4 1 2");

    let x = "loops: (0) ; bosons: ; leg: 0";
    let g = stdout(&run(&["bijection", "psi", "--input", &format!("{x} | {x} | 0")]));
    let g = g.lines().last().unwrap().to_string();
    let split = stdout(&run(&["bijection", "psi", "--inverse", "--input", &g]));
    assert_eq!(split.lines().last().unwrap(), format!("{x} | {x} | 0"));
}

#[test]
fn malformed_literal_is_an_error() {
    assert_eq!(run(&["bijection", "phi", "--input", "2: 1 1 3 4"]).status.code(), Some(2));
}

#[test]
fn bell_value() {
    let o = stdout(&run(&["bell", "--n", "4", "--k", "2", "--xs", "1,1,1,1"]));
    let row = o.lines().find(|l| l.starts_with("B_{4,2}")).unwrap();
    assert_eq!(row.split_whitespace().last(), Some("7"), "{o}");
}

#[test]
fn oeis_connected_prefix_matches() {
    let f = bfile("# A000699\n0 1\n1 1\n2 1\n3 4\n4 27\n5 248\n6 2830\n7 38232\n");
    let o = run(&["oeis-compare", "C", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("A000699(7) = [x^7] C"));
}

#[test]
fn oeis_two_connected_uses_offset() {
    let f = bfile("1 1\n2 1\n3 7\n4 63\n5 729\n6 10113\n");
    let o = run(&["oeis-compare", "C2", f.path().to_str().unwrap(), "--sequence", "A049464"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("A049464(1) = [x^2] C2"));
}

#[test]
fn oeis_a_matches() {
    let f = bfile("0 1\n1 2\n2 3\n3 10\n4 63\n5 558\n6 6226\n7 82836\n");
    let o = run(&["oeis-compare", "A", f.path().to_str().unwrap(), "--sequence", "A088221"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn oeis_indecomposable_matches() {
    let f = bfile("0 1\n1 1\n2 2\n3 10\n4 74\n5 706\n");
    let o = run(&["oeis-compare", "I", f.path().to_str().unwrap(), "--sequence", "A000698"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn oeis_mismatch_and_malformed() {
    let f = bfile("1 1\n2 1\n3 5\n");
    let o = run(&["oeis-compare", "C", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let g = bfile("1 one\n");
    assert_eq!(run(&["oeis-compare", "C", g.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["oeis-compare", "C", "/nonexistent/b.txt"]).status.code(), Some(2));
    let h = bfile("1 1\n");
    assert_eq!(run(&["oeis-compare", "C", h.path().to_str().unwrap(), "--sequence", "A088221"]).status.code(), Some(2));
}

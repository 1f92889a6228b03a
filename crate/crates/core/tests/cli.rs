use std::path::PathBuf;
use std::process::Command;

use galois_embed::cli::{run, Outcome};
use galois_embed::sexp::parse_one;

fn problem(name: &str) -> String {
    format!("{}/problems/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("galois-embed").chain(args.iter().copied()))
}

fn stdout(o: &Outcome) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("galois-embed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_ep_trivial_has_one_solution() {
    let o = call(&["solve-ep", &problem("trivial.sexp")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let out = stdout(&o);
    assert!(out.contains("  solutions: 1\n"), "{out}");
    assert_eq!(out.matches("\n  solution:").count(), 1);
}

#[test]
fn unsolvable_problem_still_exits_zero() {
    let o = call(&["solve-ep", &problem("c4_over_c2.sexp")]);
    assert_eq!(o.code, 0);
    assert!(stdout(&o).contains("solutions: 0"));
}

#[test]
fn decomp_zeta8_at_7() {
    let o = call(&["decomp", "--cyclotomic", "8", "--prime", "7"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let out = stdout(&o);
    assert!(out.contains("decomposition-group: 1 7\n"), "{out}");
    assert!(out.contains("decomposition-field-degree: 2\n"));
    assert!(out.contains("holds: true\n"));
}

#[test]
fn ramified_prime_is_an_input_error() {
    let o = call(&["decomp", "--cyclotomic", "8", "--prime", "2"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("divides"));
}

fn round_trip(name: &str, corrupt: Option<(&str, &str)>) -> String {
    let f = scratch(&format!("{name}.formula.sexp"));
    let w = scratch(&format!("{name}.witness.sexp"));
    let p = problem(&format!("{name}.sexp"));
    assert_eq!(call(&["compile", "--problem", &p, "--out", f.to_str().unwrap()]).code, 0);
    let g = call(&["gen-witness", "--problem", &p, "--out", w.to_str().unwrap()]);
    assert_eq!(g.code, 0, "{}", g.stderr);
    if let Some((from, to)) = corrupt {
        let text = std::fs::read_to_string(&w).unwrap();
        assert!(text.contains(from));
        std::fs::write(&w, text.replacen(from, to, 1)).unwrap();
    }
    let o =
        call(&["check-witness", "--formula", f.to_str().unwrap(), "--witness", w.to_str().unwrap(), "--problem", &p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    stdout(&o)
}

#[test]
fn compile_then_check_matches_direct_checkers() {
    let out = round_trip("sqrt2", None);
    assert!(out.contains("formula: holds\ndirect: holds\nagree: true\n"), "{out}");
    let out = round_trip("zeta8", None);
    assert!(out.contains("formula: holds\ndirect: holds\nagree: true\n"), "{out}");
}

#[test]
fn corrupted_witness_fails_at_the_same_atom() {
    let out = round_trip("sqrt2", Some(("(u (-1/8 0))", "(u (1/8 0))")));
    assert!(out.contains("formula: fails phi.unit\ndirect: fails phi.unit\nagree: true\n"), "{out}");
}

#[test]
fn check_without_problem_uses_structure_flag() {
    let f = scratch("s2.formula.sexp");
    let w = scratch("s2.witness.sexp");
    let p = problem("sqrt2.sexp");
    call(&["compile", "--problem", &p, "--out", f.to_str().unwrap()]);
    call(&["gen-witness", "--problem", &p, "--out", w.to_str().unwrap()]);
    let o = call(&[
        "check-witness",
        "--formula",
        f.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap(),
        "--structure",
        "Q:p=2",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(stdout(&o).ends_with("formula: holds\n"));
}

#[test]
fn search_over_gf2_finds_the_quadratic_extension() {
    let f = scratch("gf2.formula.sexp");
    let p = problem("gf2.sexp");
    assert_eq!(call(&["compile", "--problem", &p, "--irreducible", "--out", f.to_str().unwrap()]).code, 0);
    let o = call(&["search-witness", "--formula", f.to_str().unwrap(), "--structure", "GF:q=2", "--problem", &p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let out = stdout(&o);
    assert!(out.contains("extension-modulus: 1 1 1\n"), "{out}");
    assert!(out.contains("proper: true\n"));
}

#[test]
fn search_cap_is_a_capability_error() {
    let f = scratch("gf2cap.formula.sexp");
    call(&["compile", "--problem", &problem("gf2.sexp"), "--out", f.to_str().unwrap()]);
    let o = call(&["search-witness", "--formula", f.to_str().unwrap(), "--structure", "GF:q=2", "--cap", "3"]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert!(o.stderr.contains("cap"));
}

#[test]
fn parse_errors_carry_locations() {
    let bad = scratch("bad.sexp");
    std::fs::write(&bad, "(group L (table (0 1 2 3 4) (1 0 3 4 2) (2 4 0 1 3) (3 2 4 0 1) (4 3 1 2 0)))\n").unwrap();
    let o = call(&["solve-ep", bad.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("bad.sexp:1:") && o.stderr.contains("not associative at ("), "{}", o.stderr);

    std::fs::write(&bad, "(group C2 (catalog C2))\n(hom id C2 C2 identity)\n(lsep p (alpha nope) (beta id))\n")
        .unwrap();
    let o = call(&["solve-ep", bad.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("bad.sexp:3:") && o.stderr.contains("undeclared hom 'nope'"), "{}", o.stderr);

    let o = call(&["frobnicate"]);
    assert_eq!(o.code, 1);
}

#[test]
fn sexp_reports_parse_back() {
    let o = call(&["--format", "sexp", "freeprod", "--factors", "C2,C3", "--max-len", "2"]);
    assert_eq!(o.code, 0);
    let s = parse_one(&stdout(&o)).unwrap();
    let results = s.expect_field("results").unwrap();
    assert_eq!(results.expect_field("unseparated").unwrap().tail()[0].as_atom(), Some("0"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--format", "sexp", "solve-ep", &problem("trivial.sexp")];
    assert_eq!(call(&args).stdout, call(&args).stdout);
    let args = ["decomp", "--cyclotomic", "12", "--prime", "7", "--seed", "99"];
    let a = call(&args);
    assert_eq!(a.stdout, call(&args).stdout);
    let seq = ["--sequential", "freeprod", "--factors", "C2,C3"];
    let par = ["freeprod", "--factors", "C2,C3"];
    let strip = |o: Outcome| stdout(&o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(call(&seq)), strip(call(&par)));
}

#[test]
fn catalog_env_replaces_the_builtin_catalog() {
    let cat = scratch("catalog.sexp");
    std::fs::write(&cat, "(group C2 (catalog C2))\n(group C4 (catalog C4))\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_galois-embed"))
        .args(["scan-projectivity", "--group", "C2"])
        .env("GALOIS_EMBED_CATALOG", &cat)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("source: file\n  size: 2\n  bound: 4\n"), "{text}");
    assert!(text.contains("counterexamples: 1\n"));
}

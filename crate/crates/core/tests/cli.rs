//! The binary end to end: exit statuses, the first stderr line, emitters, and
//! catalog overrides.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cartan-forge"));
    c.env_remove("CARTAN_FORGE_CATALOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_err(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).lines().next().unwrap_or_default().to_string()
}

#[test]
fn sdim_ok() {
    let o = run(&["sdim", "g(2,3)#2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "12/10|14");
    assert_eq!(stdout(&run(&["sdim", "brj(2;5)#1"])).trim(), "10|12");
}

#[test]
fn sequential_flag_gives_same_output() {
    let a = run(&["build", "el(5;3)#7"]);
    let b = run(&["--sequential", "build", "el(5;3)#7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn error_lines_and_codes() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["sdim", "nope"], 2, "error: unknown-entry: "),
        (&["build"], 2, "error: usage: "),
        (&["frobnicate"], 2, "error: usage: "),
        (&["sdim", "bgl(3;a)", "--param", "a=1"], 2, "error: catalog: "),
        (&["build", "g(8,6)#5", "--max-height", "3"], 3, "error: limit: "),
        (&["build", "--file", "/nonexistent/x.catalog"], 2, "error: catalog: "),
    ];
    for (args, code, prefix) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}");
        assert!(first_err(&o).starts_with(prefix), "{args:?}: {}", first_err(&o));
    }
}

#[test]
fn reflect_rejections() {
    let o = run(&["reflect", "e(6,1)#cat", "--chain", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(first_err(&o), "error: reflection: simple root 6 is not odd isotropic (parity even, diagonal 0)");
    let o = run(&["reflect", "e(6,1)#cat", "--chain", "1,9"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(first_err(&o), "error: reflection: pivot 9 out of range for rank 6");
    assert_eq!(run(&["reflect", "e(6,1)#cat", "--chain", "0"]).status.code(), Some(2));
}

#[test]
fn emitters() {
    let csv = stdout(&run(&["build", "g(1,6)#1", "--emit", "csv"]));
    assert!(csv.starts_with("# k1, k2, k3, parity,isotropic\n"));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden/g16.csv")).unwrap();
    let rows = |s: &str| {
        let mut v: Vec<String> =
            s.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).map(str::to_string).collect();
        v.sort();
        v
    };
    assert_eq!(rows(&csv), rows(&golden));

    let tex = stdout(&run(&["build", "brj(2;3)#1", "--emit", "latex"]));
    assert!(tex.starts_with("\\begin{tabular}"));
    assert_eq!(tex.matches("\\underline").count(), 2);

    let json: serde_json::Value = serde_json::from_slice(&run(&["build", "brj(2;5)#1"]).stdout).unwrap();
    assert_eq!(json["roots"].as_array().unwrap().len(), 10);
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["build", "brj(2;5)#1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(json["n"], 2);
}

#[test]
fn orbit_dot_and_json() {
    let dot = stdout(&run(&["reflect", "brj(2;5)#1", "--enumerate", "--emit", "dot"]));
    assert!(dot.starts_with("digraph orbit {"));
    assert!(dot.trim_end().ends_with('}'));
    let json: serde_json::Value =
        serde_json::from_slice(&run(&["reflect", "brj(2;5)#1", "--enumerate"]).stdout).unwrap();
    assert_eq!(json["truncated"], false);
    for e in json["edges"].as_array().unwrap() {
        assert!(e["pivot"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn orbit_truncation_exits_3() {
    let o = run(&["reflect", "g(8,6)#5", "--enumerate", "--limit", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(first_err(&o).starts_with("error: limit: "));
}

const TOY: &str = "cartan-catalog v1\n\
# two entries\n\
name=toy-sl3\n\
p=5\n\
parities=00\n\
matrix=2,-1;-1,2\n\
expect.sdim=8|0\n\
expect.positive=3\n\
expect.roots=toy.csv\n\
\n\
name=toy-broken\n\
p=5\n\
parities=00\n\
matrix=2,-1;-1,2\n\
expect.positive=4\n";

const TOY_ROOTS: &str = "# k1, k2, parity,isotropic\n1,0,0,0\n0,1,0,0\n1,1,0,0\n";

fn toy_catalog(dir: &Path, text: &str) -> std::path::PathBuf {
    std::fs::write(dir.join("toy.csv"), TOY_ROOTS).unwrap();
    let path = dir.join("toy.catalog");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn catalog_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_catalog(dir.path(), TOY);
    let listed = bin().arg("list").env("CARTAN_FORGE_CATALOG", &path).output().unwrap();
    assert_eq!(stdout(&listed), "toy-sl3\tpaper\ntoy-broken\tpaper\n");
    let ok = bin().args(["verify", "toy-sl3"]).env("CARTAN_FORGE_CATALOG", &path).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = bin().args(["verify", "--all"]).env("CARTAN_FORGE_CATALOG", &path).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    // built-ins are gone under the override
    let gone = bin().args(["sdim", "g(2,3)#2"]).env("CARTAN_FORGE_CATALOG", &path).output().unwrap();
    assert_eq!(gone.status.code(), Some(2));
}

#[test]
fn build_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_catalog(dir.path(), TOY);
    let p = path.to_str().unwrap();
    let o = run(&["build", "--file", p, "toy-sl3", "--emit", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    let ambiguous = run(&["build", "--file", p]);
    assert_eq!(ambiguous.status.code(), Some(2));
    assert!(first_err(&ambiguous).starts_with("error: usage: "));
}

#[test]
fn malformed_catalog() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "not-a-header\n",
        "cartan-catalog v1\nname=x\np=5\nparities=0\nmatrix=2,1;1,2\n",
        "cartan-catalog v1\nname=x\np=5\nparities=00\nmatrix=2,1bar;1,2\n",
        "cartan-catalog v1\nname=x\np=5\nparities=0\nmatrix=2\ncolour=blue\n",
        "cartan-catalog v1\nname=x\np=5\nparities=0\nmatrix=2\nname=x\np=5\nparities=0\nmatrix=2\n",
    ] {
        let path = toy_catalog(dir.path(), text);
        let o = bin().arg("list").env("CARTAN_FORGE_CATALOG", &path).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(first_err(&o).starts_with("error: catalog: "), "{}", first_err(&o));
    }
}

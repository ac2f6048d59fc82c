use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const LIST: &str = "schema List\nSing: X\nCons: X, T\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_repchoice"))
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        fs::write(dir.path().join("list.adt"), LIST).unwrap();
        fs::write(
            dir.path().join("u.json"),
            r#"{"elements":[
                {"id":"x","attrs":{"utility":0.2,"rank":3}},
                {"id":"y","attrs":{"utility":0.8,"rank":2}},
                {"id":"z","attrs":{"utility":0.9,"rank":1}}]}"#,
        )
        .unwrap();
        fs::write(
            dir.path().join("x12.json"),
            r#"{"elements":[{"id":"x1"},{"id":"x2"}]}"#,
        )
        .unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        bin()
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }

    fn report(&self, args: &[&str]) -> (i32, Value) {
        let out = self.path("report.json");
        let mut all: Vec<&str> = args.to_vec();
        let out_str = out.to_str().unwrap();
        all.extend(["--out", out_str]);
        let status = self.run(&all).status.code().unwrap();
        let v = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        fs::remove_file(&out).unwrap();
        (status, v)
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SAT: &[&str] = &[
    "--schema",
    "list.adt",
    "--universe",
    "u.json",
    "--procedure",
    "sat_list",
    "--param",
    "u=utility",
    "--param",
    "threshold=0.5",
];

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn satisficing_ext_reports_the_witness_pair() {
    let f = Fixture::new();
    let args = with(
        &["check"],
        &with(SAT, &["--property", "EXT", "--max-leaves", "4"]),
    );
    let (code, v) = f.report(&args);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["verdict"], "Falsified");
    let pair = v["results"]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| {
            w["a"] == "(Cons x (Cons y (Sing z)))"
                && w["b"] == "(Cons x (Cons z (Sing y)))"
                && w["choice_a"] == "y"
                && w["choice_b"] == "z"
        });
    assert!(pair, "{v:#}");
}

#[test]
fn sorted_guarantee_makes_satisficing_extensional() {
    let f = Fixture::new();
    let args = with(
        &["check"],
        &with(
            SAT,
            &["--property", "EXT", "--guarantee", "sorted_by:rank:desc"],
        ),
    );
    let o = f.run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("HoldsUpToBudget"));
}

#[test]
fn proc_run_prints_the_choice() {
    let f = Fixture::new();
    let o = f.run(&[
        "proc",
        "run",
        "--schema",
        "list.adt",
        "--universe",
        "x12.json",
        "--procedure",
        "first_list",
        "--term",
        "(Cons x1 (Sing x2))",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x1");
}

/// Surjections from n positions onto k values, by inclusion-exclusion.
fn surjections(n: u64, k: u64) -> u64 {
    let binom = |n: u64, r: u64| (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    (0..=k)
        .map(|j| {
            let term = binom(k, j) * (k - j).pow(n as u32);
            if j % 2 == 0 {
                term as i64
            } else {
                -(term as i64)
            }
        })
        .sum::<i64>() as u64
}

#[test]
fn enum_matches_word_count_and_round_trips() {
    let f = Fixture::new();
    for (max, set) in [(2u64, "x1,x2"), (3, "x1,x2"), (4, "x1,x2,x3")] {
        let k = set.split(',').count() as u64;
        let max_s = max.to_string();
        let (code, v) = f.report(&[
            "enum",
            "--schema",
            "list.adt",
            "--set",
            set,
            "--max-leaves",
            &max_s,
        ]);
        assert_eq!(code, 0);
        // A list of n leaves has exactly one shape.
        let expected: u64 = (1..=max).map(|n| surjections(n, k)).sum();
        assert_eq!(v["results"]["count"], expected, "{set} <= {max}");
        let universe = f.path("enum-u.json");
        let ids: Vec<String> = set
            .split(',')
            .map(|s| format!(r#"{{"id":"{s}"}}"#))
            .collect();
        fs::write(&universe, format!(r#"{{"elements":[{}]}}"#, ids.join(","))).unwrap();
        for t in v["results"]["terms"].as_array().unwrap() {
            let o = f.run(&[
                "proc",
                "run",
                "--schema",
                "list.adt",
                "--universe",
                universe.to_str().unwrap(),
                "--procedure",
                "first_list",
                "--term",
                t.as_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0), "{t}");
        }
    }
    let o = f.run(&[
        "enum",
        "--schema",
        "list.adt",
        "--set",
        "x1,x2",
        "--max-leaves",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("2 term(s)\n"));
}

#[test]
fn classify_and_rationalize_satisficing() {
    let f = Fixture::new();
    let (code, v) = f.report(&with(&["classify"], &with(SAT, &["--max-leaves", "4"])));
    assert_eq!(code, 0);
    let c = &v["results"]["classification"];
    assert_eq!(c["cf_by_axioms"], false);
    assert_eq!(c["cc_by_axioms"], true);
    assert_eq!(c["cc_relation"], "y ~ z > x");
    assert!(v["results"]["properties"]["TIIA"]["error"].is_string());

    let fun = f.run(&with(
        &["rationalize"],
        &with(SAT, &["--target", "function"]),
    ));
    assert_eq!(fun.status.code(), Some(1));
    let cor = f.run(&with(&["rationalize"], SAT));
    assert_eq!(cor.status.code(), Some(0));
    assert!(stdout(&cor).contains("y ~ z > x"));
}

#[test]
fn schema_check_flags() {
    let f = Fixture::new();
    let o = f.run(&["schema", "check", "--schema", "list.adt"]);
    assert_eq!(o.status.code(), Some(0));
    fs::write(f.path("chain.adt"), "schema Chain; C1: X | C2: T").unwrap();
    let (code, v) = f.report(&["schema", "check", "--schema", "chain.adt"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["flags"]["representable"], false);
    assert!(v["results"]["discrepancy_note"].is_string());
    assert_eq!(v["inputs"]["schema"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn input_errors_exit_two() {
    let f = Fixture::new();
    fs::write(f.path("bad.json"), "{not json").unwrap();
    fs::write(f.path("bad.adt"), "schema Bad\nC: Q\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--bogus"],
        vec![
            "check",
            "--schema",
            "list.adt",
            "--universe",
            "bad.json",
            "--procedure",
            "first_list",
            "--property",
            "EXT",
        ],
        vec!["schema", "check", "--schema", "bad.adt"],
        vec!["schema", "check", "--schema", "missing.adt"],
        vec![
            "check",
            "--schema",
            "list.adt",
            "--universe",
            "u.json",
            "--procedure",
            "first_list",
            "--property",
            "beta",
        ],
        vec![
            "proc",
            "run",
            "--schema",
            "list.adt",
            "--universe",
            "u.json",
            "--procedure",
            "first_list",
            "--term",
            "(Cons q (Sing x))",
        ],
        vec![
            "proc",
            "run",
            "--schema",
            "list.adt",
            "--universe",
            "u.json",
            "--procedure",
            "sat_list",
            "--term",
            "(Sing x)",
        ],
        vec![
            "enum",
            "--schema",
            "list.adt",
            "--set",
            "x1,x2,x3",
            "--max-leaves",
            "2",
        ],
    ];
    for args in cases {
        let o = f.run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn reports_are_deterministic() {
    let f = Fixture::new();
    let args = with(&["classify"], &with(SAT, &["--max-leaves", "4"]));
    let strip = |mut v: Value| {
        v["timing"] = Value::Null;
        v
    };
    let (_, a) = f.report(&args);
    let (_, b) = f.report(&args);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn replicate_honours_exit_codes() {
    let f = Fixture::new();
    let (code, v) = f.report(&["replicate", "--filter", "satis"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = v["results"]["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["satis1-ext", "satis2-ext"]);
    let (code, v) = f.report(&["replicate", "--filter", "alpha-vi-witness"]);
    let passed = v["results"]["cases"][0]["outcome"]["passed"]
        .as_bool()
        .unwrap();
    assert_eq!(code, if passed { 0 } else { 1 });
}

#[test]
fn builtin_schema_names() {
    let f = Fixture::new();
    let o = f.run(&[
        "enum",
        "--schema",
        "tree",
        "--set",
        "a,b",
        "--max-leaves",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    // Ternary trees over {a,b}: 3 leaves, one shape, 6 surjective fillings.
    assert!(stdout(&o).ends_with("6 term(s)\n"));
    assert!(!Path::new(&f.path("tree")).exists());
}

use std::io::Write as _;
use std::path::Path;
use std::process::Command;

use ratlattice::cli::{self, EXIT_INVALID_ARGUMENT, EXIT_INVALID_POLYGON, EXIT_NOT_COPRIME, EXIT_OK, EXIT_PARSE};
use ratlattice::dedekind::sigma_naive;
use ratlattice::exact::{int, parse_integer, parse_rational, rat_from_int, Rational};
use ratlattice::lattice::{brute_force_count, CountMode};
use ratlattice::polygon::{parse_polygon, validate};
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("ratlattice").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn polygon_file(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path.to_str().unwrap().to_owned()
}

const UNIT_SQUARE: &str = "0 0\n1 0\n1 1\n0 1\n";
const SIMPLEX: &str = "0 0\n1 0\n0 1\n";
const HALF_SQUARE: &str = "# [0, 1/2]^2\n0 0\n1/2 0\n1/2 1/2\n0 1/2\n";

#[test]
fn count_examples() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(&dir, "square.txt", UNIT_SQUARE);
    let simplex = polygon_file(&dir, "simplex.txt", SIMPLEX);
    let half = polygon_file(&dir, "half.txt", HALF_SQUARE);

    let o = run(&["count", &square, "3", "--closure"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "16\n"));
    let o = run(&["count", &simplex, "2"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "6\n"));
    // The boundary of [0, 1/2]^2 contains the origin.
    let o = run(&["count", &half, "1", "--boundary"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "1\n"));
    let o = run(&["count", &half, "3", "--interior"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "1\n"));
}

#[test]
fn count_matches_brute_force_for_every_mode() {
    let dir = TempDir::new().unwrap();
    let body = "-1/3 0\n5/2 -1/2\n2 7/3\n0 3/2\n";
    let file = polygon_file(&dir, "quad.txt", body);
    let poly = validate(&parse_polygon(body).unwrap()).unwrap();
    for (flag, mode) in [
        ("--closure", CountMode::Closure),
        ("--interior", CountMode::Interior),
        ("--boundary", CountMode::Boundary),
    ] {
        for t in 1..=9i64 {
            let o = run(&["count", &file, &t.to_string(), flag]);
            assert_eq!(o.code, EXIT_OK);
            let expected = brute_force_count(poly.vertices(), &int(t), mode).unwrap();
            assert_eq!(o.stdout.trim(), expected.to_string(), "{flag} t={t}");
        }
    }
}

#[test]
fn count_json() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(&dir, "square.txt", UNIT_SQUARE);
    let o = run(&["count", &square, "3", "--interior", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["count"], "4");
    assert_eq!(v["mode"], "interior");
    assert!(v["path"].is_string());
}

#[test]
fn count_exit_codes() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(&dir, "square.txt", UNIT_SQUARE);
    for bad_t in ["0", "-2", "abc", "1/2"] {
        let o = run(&["count", &square, bad_t]);
        assert_eq!(o.code, EXIT_INVALID_ARGUMENT, "t = {bad_t}");
        assert!(!o.stderr.is_empty());
    }

    let garbage = polygon_file(&dir, "garbage.txt", "0 0\n1 x\n0 1\n");
    let o = run(&["count", &garbage, "1"]);
    assert_eq!(o.code, EXIT_PARSE);
    assert!(o.stderr.contains("line 2"), "{}", o.stderr);
    let three_fields = polygon_file(&dir, "fields.txt", "0 0 0\n");
    assert_eq!(run(&["count", &three_fields, "1"]).code, EXIT_PARSE);
    let zero_den = polygon_file(&dir, "zero.txt", "0 0\n1/0 0\n0 1\n");
    assert_eq!(run(&["count", &zero_den, "1"]).code, EXIT_PARSE);
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["count", missing.to_str().unwrap(), "1"]).code, EXIT_PARSE);

    for (name, body) in [
        ("collinear.txt", "0 0\n1 1\n2 2\n"),
        ("bowtie.txt", "0 0\n1 1\n1 0\n0 1\n"),
        ("two.txt", "0 0\n1 1\n"),
        ("empty.txt", "# nothing\n"),
    ] {
        let file = polygon_file(&dir, name, body);
        assert_eq!(run(&["count", &file, "1"]).code, EXIT_INVALID_POLYGON, "{name}");
    }
    assert_eq!(run(&["count"]).code, EXIT_PARSE);
    assert_eq!(run(&["count", &square, "1", "--closure", "--interior"]).code, EXIT_PARSE);
}

#[test]
fn ehrhart_text_and_json() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(&dir, "square.txt", UNIT_SQUARE);
    let half = polygon_file(&dir, "half.txt", HALF_SQUARE);
    let simplex = polygon_file(&dir, "simplex.txt", SIMPLEX);

    let o = run(&["ehrhart", &square]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "period: 1\nc2: 1\nr=0: c1=2 c0=1\n"));
    assert_eq!(run(&["ehrhart", &square, "--text"]).stdout, o.stdout);

    let o = run(&["ehrhart", &half, "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"period": "2", "c2": "1/4", "c1": ["1", "1/2"], "c0": ["1", "1/4"]})
    );

    let o = run(&["ehrhart", &simplex, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"period": "1", "c2": "1/2", "c1": ["3/2"], "c0": ["1"]}));

    assert_eq!(run(&["ehrhart", &half, "--json", "--text"]).code, EXIT_PARSE);
}

#[test]
fn ehrhart_errors() {
    let dir = TempDir::new().unwrap();
    let huge = polygon_file(&dir, "huge.txt", "0 0\n1/1000003 0\n0 1/7\n");
    assert_eq!(run(&["ehrhart", &huge]).code, EXIT_INVALID_ARGUMENT);
    let collinear = polygon_file(&dir, "collinear.txt", "0 0\n1 1\n2 2\n");
    assert_eq!(run(&["ehrhart", &collinear]).code, EXIT_INVALID_POLYGON);
    let garbage = polygon_file(&dir, "garbage.txt", "zero zero\n");
    assert_eq!(run(&["ehrhart", &garbage]).code, EXIT_PARSE);
}

/// Every rational the quasipolynomial prints re-parses, and the re-parsed
/// coefficients reproduce the counts.
#[test]
fn ehrhart_json_round_trip() {
    let dir = TempDir::new().unwrap();
    let body = "-1/3 0\n5/2 -1/2\n2 7/3\n0 3/2\n";
    let file = polygon_file(&dir, "quad.txt", body);
    let poly = validate(&parse_polygon(body).unwrap()).unwrap();
    let o = run(&["ehrhart", &file, "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let parse = |x: &serde_json::Value| parse_rational(x.as_str().unwrap()).unwrap();
    let period: usize = v["period"].as_str().unwrap().parse().unwrap();
    let c2 = parse(&v["c2"]);
    let c1: Vec<Rational> = v["c1"].as_array().unwrap().iter().map(parse).collect();
    let c0: Vec<Rational> = v["c0"].as_array().unwrap().iter().map(parse).collect();
    assert_eq!(period, 6);
    for t in 1..=18usize {
        let tr = rat_from_int(&int(t as i64));
        let value = &c2 * &tr * &tr + &c1[t % period] * &tr + &c0[t % period];
        let expected = brute_force_count(poly.vertices(), &int(t as i64), CountMode::Closure).unwrap();
        assert_eq!(value, rat_from_int(&expected), "t={t}");
    }
}

#[test]
fn sigma_examples() {
    let o = run(&["sigma", "3", "5", "0"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "1/4\n"));
    let o = run(&["sigma", "1", "1", "0"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "1/4\n"));
    let o = run(&["sigma", "0", "7", "2", "--naive"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "3/28\n"));
}

#[test]
fn sigma_fast_and_naive_agree_and_round_trip() {
    for (a, b, t) in [("5", "7", "0"), ("-3", "11", "7/3"), ("13", "8", "-5/4"), ("2", "9", "1/2")] {
        let fast = run(&["sigma", a, b, t]);
        let naive = run(&["sigma", a, b, t, "--naive"]);
        assert_eq!(fast.code, EXIT_OK);
        assert_eq!(fast.stdout, naive.stdout);
        let printed = parse_rational(fast.stdout.trim()).unwrap();
        let direct = sigma_naive(
            &parse_integer(a).unwrap(),
            &parse_integer(b).unwrap(),
            &parse_rational(t).unwrap(),
        )
        .unwrap();
        assert_eq!(printed, direct);
    }
}

#[test]
fn sigma_exit_codes() {
    let o = run(&["sigma", "2", "4", "0"]);
    assert_eq!(o.code, EXIT_NOT_COPRIME);
    assert!(o.stderr.contains("--naive"));
    assert_eq!(run(&["sigma", "2", "4", "0", "--naive"]).code, EXIT_OK);
    assert_eq!(run(&["sigma", "1", "0", "0"]).code, EXIT_INVALID_ARGUMENT);
    assert_eq!(run(&["sigma", "1", "-3", "0"]).code, EXIT_INVALID_ARGUMENT);
    assert_eq!(run(&["sigma", "1", "3", "x/2"]).code, EXIT_PARSE);
    assert_eq!(run(&["sigma", "1", "3"]).code, EXIT_PARSE);
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--suite", "dedekind", "--trials", "1000", "--seed", "7", "--max-size", "1000000000"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(o.stdout.contains("1000/1000 pass"));

    let o = run(&["verify", "--suite", "oracle-triangle", "--trials", "200", "--seed", "1", "--max-size", "6"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);

    let o = run(&["verify", "--suite", "fourier", "--trials", "50", "--seed", "3", "--max-size", "12"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(o.stdout.contains("max deviation: "));
}

#[test]
fn verify_every_suite_passes() {
    for suite in ["dedekind", "rademacher", "unified", "gessel", "fourier", "oracle-triangle", "oracle-polygon", "ehrhart"] {
        let o = run(&["verify", "--suite", suite, "--trials", "20", "--seed", "11", "--max-size", "6"]);
        assert_eq!(o.code, EXIT_OK, "{suite}: {}", o.stdout);
        assert!(o.stdout.contains("20/20 pass"), "{suite}: {}", o.stdout);
    }
}

#[test]
fn verify_argument_errors() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).code, EXIT_PARSE);
    assert_eq!(run(&["verify", "--suite", "dedekind", "--trials", "0"]).code, EXIT_PARSE);
    assert_eq!(run(&["verify", "--suite", "dedekind", "--max-size", "0"]).code, EXIT_PARSE);
}

/// Output is byte-identical across repeated runs and thread counts.
#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "oracle-polygon", "--trials", "30", "--seed", "99", "--max-size", "5"];
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run(&args));
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| run(&args));
    let again = run(&args);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
    assert_eq!(one.code, EXIT_OK);
    let other_seed = run(&["verify", "--suite", "oracle-polygon", "--trials", "30", "--seed", "100", "--max-size", "5"]);
    assert_ne!(one.stdout, other_seed.stdout);
}

#[test]
fn help_and_version() {
    let o = run(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    for cmd in ["count", "ehrhart", "sigma", "verify"] {
        assert!(o.stdout.contains(cmd));
    }
    let o = run(&["--version"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(run(&["frobnicate"]).code, EXIT_PARSE);
}

#[test]
fn binary_end_to_end() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(&dir, "square.txt", UNIT_SQUARE);
    let bin = Path::new(env!("CARGO_BIN_EXE_ratlattice"));
    let out = Command::new(bin).args(["count", &square, "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "16\n");
    let out = Command::new(bin).args(["sigma", "4", "6", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NOT_COPRIME));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--naive"));
    let out = Command::new(bin).args(["count", &square, "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID_ARGUMENT));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use preper_algebra::{rat, Complex64, Rational};
use preper_cli::input::{AnyMap, MapSpec};
use preper_cli::parse::{
    format_complex, format_rational, parse_complex, parse_point, parse_rational,
};
use preper_core::projective::ProjPoint;
use proptest::prelude::*;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn preper(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_preper"));
    for key in [
        "PREPER_MAX_N",
        "PREPER_DEPTH",
        "PREPER_SAMPLES",
        "PREPER_ITERS",
        "PREPER_RESOLUTION",
    ] {
        cmd.env_remove(key);
    }
    cmd.args(args).envs(env.iter().copied()).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = preper(args, &[]);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn status(args: &[&str]) -> (i32, String) {
    let out = preper(args, &[]);
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn reruns_are_byte_identical() {
    let cheb = data("chebyshev.json");
    let args = [
        "measure-sample",
        "--map",
        path(&cheb),
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    assert_eq!(ok(&args), ok(&args));
    let cfg = data("configs/bifslice_symmetric.json");
    let small = ["run", path(&cfg), "--format", "json"];
    let first = ok(&small);
    assert_eq!(first, ok(&small));
    // The schedule does not change the result.
    let mut one_thread = small.to_vec();
    one_thread.extend(["--threads", "1"]);
    assert_eq!(first, ok(&one_thread));
}

#[test]
fn seeds_change_samples() {
    let cheb = data("chebyshev.json");
    let a = ok(&[
        "measure-sample",
        "--map",
        path(&cheb),
        "--samples",
        "50",
        "--seed",
        "1",
    ]);
    let b = ok(&[
        "measure-sample",
        "--map",
        path(&cheb),
        "--samples",
        "50",
        "--seed",
        "2",
    ]);
    assert_ne!(a, b);
}

#[test]
fn outputs_embed_config_and_version() {
    let doc = json(&["monomial-rank", "--degree", "2"]);
    assert_eq!(doc["tool"], "preper");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["command"], "monomial-rank");
    assert_eq!(doc["config"]["degree"], 2);
    assert_eq!(doc["result"]["rank"], 7);
    assert_eq!(doc["result"]["matrix_dims"], serde_json::json!([10, 9]));

    let f = data("quadratic_f.json");
    let csv = ok(&[
        "preper",
        "--map",
        path(&f),
        "--max-n",
        "2",
        "--format",
        "csv",
    ]);
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with(&format!("# preper {} preper", env!("CARGO_PKG_VERSION"))));
    assert!(lines.next().unwrap().starts_with("# config: {"));
}

#[test]
fn intersect_csv_columns() {
    let (f, g) = (data("quadratic_f.json"), data("quadratic_g.json"));
    let csv = ok(&[
        "intersect",
        "--f",
        path(&f),
        "--g",
        path(&g),
        "--max-n",
        "4",
        "--format",
        "csv",
    ]);
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        body[0],
        "re,im,preperiod_f,period_f,preperiod_g,period_g,certification"
    );
    assert!(
        body.iter().any(|l| l.starts_with("1.25,0.0,1,2,0,3,exact")),
        "{csv}"
    );
    assert!(body.iter().all(|l| l.split(',').count() == 7));
}

#[test]
fn grids_keep_every_cell() {
    let fam = data("quadratic_family.json");
    let csv = ok(&[
        "marked-grid",
        "--family",
        path(&fam),
        "--marked",
        "0",
        "--re=-2,0.5",
        "--im=-1,1",
        "--resolution",
        "7",
        "--format",
        "csv",
    ]);
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "t_re,t_im,value,laplacian,flag");
    assert_eq!(body.len(), 1 + 49);
    // Edge cells carry a flag and no laplacian.
    assert!(body[1].ends_with(",NaN,edge"), "{}", body[1]);
}

#[test]
fn env_overrides_budget_defaults() {
    let f = data("quadratic_f.json");
    let out = preper(&["preper", "--map", path(&f)], &[("PREPER_MAX_N", "2")]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["max_n"], 2);
    // An explicit flag wins.
    let out = preper(
        &["preper", "--map", path(&f), "--max-n", "3"],
        &[("PREPER_MAX_N", "2")],
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["max_n"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cheb = data("chebyshev.json");

    assert_eq!(status(&["--help"]).0, 0);
    assert_eq!(status(&["--version"]).0, 0);
    assert_eq!(status(&["no-such-command"]).0, 1);

    let (code, err) = status(&["measure-sample", "--map", path(&cheb)]);
    assert_eq!(code, 1);
    assert!(err.contains("seed"), "{err}");

    let bad = write(dir.path(), "bad.json", r#"{"num": ["1", "zz", "1"]}"#);
    let (code, err) = status(&["orbit", "--map", path(&bad), "--point", "0"]);
    assert_eq!(code, 1);
    assert!(err.contains("num[1]"), "{err}");

    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"command": "monomial-rank", "args": {"degree": 3, "sides": 4}}"#,
    );
    let (code, err) = status(&["run", path(&unknown)]);
    assert_eq!(code, 1);
    assert!(err.contains("sides"), "{err}");

    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"command": "preper", "args": {"map": "x.json", "max_n": 0}}"#,
    );
    let (code, err) = status(&["run", path(&zero)]);
    assert_eq!(code, 1);
    assert!(err.contains("max_n"), "{err}");

    let (code, err) = status(&["monomial-rank", "--degree", "3", "--zeta-order", "0"]);
    assert_eq!(code, 1);
    assert!(err.contains("zeta_order"), "{err}");

    // z / z has degree 0 after cancellation: a computation-level failure.
    let degenerate = write(
        dir.path(),
        "deg.json",
        r#"{"num": ["0", "1"], "den": ["0", "1"]}"#,
    );
    assert_eq!(
        status(&["orbit", "--map", path(&degenerate), "--point", "1"]).0,
        2
    );

    let (code, _) = status(&["lattes-torsion", "--t", "1"]);
    assert_eq!(code, 2);

    let (code, err) = status(&["monomial-rank", "--degree", "3", "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("format"), "{err}");
}

#[test]
fn config_paths_and_output_are_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("quadratic_f.json"), dir.path().join("f.json")).unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"command": "orbit", "args": {"map": "f.json", "point": "5/4"}, "output": "out.json"}"#,
    );
    ok(&["run", path(&cfg)]);
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.json")).unwrap())
            .unwrap();
    assert_eq!(doc["config"]["map"], "f.json");
    assert_eq!(doc["result"]["preperiod"], 1);
    assert_eq!(doc["result"]["period"], 2);
    assert_eq!(doc["result"]["multiplier"], "-5/4");
    assert_eq!(doc["result"]["status"], "certified_exact");
    assert_eq!(doc["result"]["class"], "repelling");
}

#[test]
fn command_line_and_config_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("quadratic_f.json");
    let direct = ok(&[
        "dynatomic",
        "--map",
        path(&f),
        "--period",
        "2",
        "--preperiod",
        "1",
    ]);
    let cfg = write(
        dir.path(),
        "cfg.json",
        &format!(
            r#"{{"command": "dynatomic", "args": {{"map": {}, "period": 2, "preperiod": 1}}}}"#,
            serde_json::to_string(path(&f)).unwrap()
        ),
    );
    assert_eq!(direct, ok(&["run", path(&cfg)]));
    let doc: Value = serde_json::from_str(&direct).unwrap();
    // z^2 - z - 5/16 at c = -21/16.
    assert_eq!(
        doc["result"]["coefficients"],
        serde_json::json!(["-5/16", "-1", "1"])
    );
}

#[test]
fn emitted_points_reparse() {
    let f = data("quadratic_f.json");
    let doc = json(&[
        "iterate",
        "--map",
        path(&f),
        "--point",
        "-7/4",
        "--steps",
        "3",
    ]);
    let orbit: Vec<Rational> = doc["result"]["orbit"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| parse_rational(v.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(orbit, vec![rat(-7, 4), rat(7, 4), rat(7, 4), rat(7, 4)]);

    let doc = json(&["preper", "--map", path(&f), "--max-n", "3"]);
    let spec: MapSpec = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let AnyMap::Exact(map) = spec.build().unwrap() else {
        panic!()
    };
    let map = map.to_complex();
    for p in doc["result"]["points"].as_array().unwrap() {
        let text = p["point"].as_str().unwrap();
        let point: ProjPoint<Complex64> = parse_point(text, parse_complex).unwrap();
        // Exact re-parse of the printed value, which still lies on a short orbit.
        assert_eq!(
            parse_point(
                &point.affine().map_or("inf".into(), format_complex),
                parse_complex
            )
            .unwrap(),
            point
        );
        let n = (p["preperiod"].as_u64().unwrap() + p["period"].as_u64().unwrap()) as usize;
        let m = p["preperiod"].as_u64().unwrap() as usize;
        let (mut a, mut b) = (point.clone(), point.clone());
        for _ in 0..n {
            a = map.eval(&a).unwrap();
        }
        for _ in 0..m {
            b = map.eval(&b).unwrap();
        }
        assert!(a.chordal_distance(&b) < 1e-8, "{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn complex_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6, tiny in -30i32..30) {
        let z = Complex64::new(re * 10f64.powi(tiny), im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn maps_round_trip(coeffs in prop::collection::vec((-50i64..50, 1i64..20), 2..6), den in prop::collection::vec((-50i64..50, 1i64..20), 1..3)) {
        let text = |v: &[(i64, i64)]| v.iter().map(|&(p, q)| format_rational(&rat(p, q))).collect::<Vec<_>>();
        let spec = MapSpec { degree: None, num: text(&coeffs), den: text(&den), domain: Default::default() };
        if let Ok(f) = spec.build() {
            let again = MapSpec::from_map(&f);
            let back: MapSpec = serde_json::from_str(&serde_json::to_string(&again).unwrap()).unwrap();
            prop_assert_eq!(back.build().unwrap(), f);
        }
    }
}

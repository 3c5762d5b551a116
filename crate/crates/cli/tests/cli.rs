use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use skewdet_cli::problem::ProblemFile;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn skewdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewdet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Runs a command on a fixture, expects success and returns the value of `key`.
fn value(cmd: &str, file: &str, key: &str, extra: &[&str]) -> String {
    let path = fixture(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = skewdet(&args);
    assert!(
        o.status.success(),
        "{cmd} {file}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

#[test]
fn degree_of_the_determinant() {
    assert_eq!(value("degdet", "diag_s_s.json", "degdet", &[]), "2");
    assert_eq!(
        value("degdet", "witness.json", "degdet", &["--algo", "all"]),
        "0"
    );
    assert_eq!(
        value("degdet", "singular.json", "degdet", &[]),
        "-inf (singular)"
    );
    assert_eq!(
        value("degdet", "d_squared.json", "degdet", &["--algo", "oracle"]),
        "2"
    );
    assert_eq!(
        value("degdet", "diag_1_s_s2.json", "degdet", &["--bound", "1"]),
        "below 5"
    );
    assert_eq!(
        value("degdet", "diag_1_s_s2.json", "budget", &["--bound", "1"]),
        "1"
    );
}

#[test]
fn order_and_dimension() {
    assert_eq!(value("orddet", "t_s.json", "orddet", &[]), "1");
    assert_eq!(value("orddet", "s_minus_1.json", "orddet", &[]), "0");
    assert_eq!(
        value("dimension", "d_plus_1.json", "dimension", &[]),
        "1 (over an adequate extension)"
    );
    assert!(value("dimension", "s_minus_1.json", "dimension", &[]).starts_with("1 "));
    assert!(value("dimension", "t_s.json", "dimension", &[]).starts_with("0 "));
    assert!(value("dimension", "qshift.json", "note", &[]).contains("q-shift"));
    assert_eq!(
        value("dimension", "singular.json", "dimension", &[]),
        "inf (singular)"
    );
}

#[test]
fn smith_data() {
    assert_eq!(
        value("smith", "diag_1_s_s2.json", "alpha", &[]),
        "[0, 1, 2]"
    );
    assert_eq!(
        value("smith", "worked_2x2.json", "omega", &[]),
        "[0, 1, 3, 5]"
    );
    assert_eq!(
        value("smith", "worked_2x2.json", "zeta_k", &[]),
        "[0, 0, 1]"
    );
    assert_eq!(value("zeta", "worked_2x2.json", "zeta", &[]), "1");
    assert_eq!(
        value("zeta", "diag_1_s_s2.json", "zeta", &["--bound", "2"]),
        "beyond 2"
    );
}

#[test]
fn exit_codes() {
    let comm = fixture("diag_s_s.json");
    let o = skewdet(&["dimension", comm.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("commutative"));
    let diff = fixture("d_plus_1.json");
    assert_eq!(
        skewdet(&["orddet", diff.to_str().unwrap()]).status.code(),
        Some(4)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"field": {"base": "Q", "twist": "commutative"}, "matrix": [[["1/"]]]}"#,
    )
    .unwrap();
    assert_eq!(
        skewdet(&["degdet", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(
        skewdet(&["degdet", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        skewdet(&["degdet", "/no/such/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(skewdet(&["degdet"]).status.code(), Some(2));
}

#[test]
fn json_output() {
    let o = skewdet(&[
        "degdet",
        fixture("singular.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degdet"], "-inf");
    assert_eq!(v["algorithm"], "all");
    assert_eq!(v["n"], 2);
    let o = skewdet(&[
        "smith",
        fixture("diag_1_s_s2.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha"], serde_json::json!([0, 1, 2]));
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("steps.jsonl");
    let z = value(
        "zeta",
        "worked_2x2.json",
        "zeta",
        &["--trace", trace.to_str().unwrap()],
    );
    let steps: Vec<serde_json::Value> = std::fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let gammas: Vec<u64> = steps.iter().map(|s| s["gamma"].as_u64().unwrap()).collect();
    assert_eq!(gammas, vec![0, 1]);
    assert_eq!(gammas.last().unwrap().to_string(), z);
    assert!(steps
        .iter()
        .all(|s| s["dp"].is_array() && s["tight_rank"].is_u64()));
}

#[test]
fn fixtures_round_trip() {
    let mut twists = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let file = ProblemFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let normal = file.normalize().unwrap();
        assert_eq!(
            file.parse().unwrap().to_file(),
            normal,
            "{}",
            path.display()
        );
        assert_eq!(normal.normalize().unwrap(), normal);
        assert_eq!(ProblemFile::from_json(&normal.to_json()).unwrap(), normal);
        twists.insert(normal.field.twist.clone());
    }
    let expected: std::collections::BTreeSet<String> =
        ["commutative", "differential", "qshift", "shift"]
            .into_iter()
            .map(String::from)
            .collect();
    assert_eq!(twists, expected);
}

/// A small deterministic generator; enough for varied problem files.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self, bound: u64) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0 % bound
    }
}

#[test]
fn all_engines_agree_on_generated_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
    let fields = [
        r#"{"base": "Q", "twist": "commutative"}"#,
        r#"{"base": "GF(5)", "variable": "t", "twist": "differential"}"#,
        r#"{"base": "Q", "variable": "t", "twist": "shift"}"#,
        r#"{"base": "Q", "variable": "t", "twist": "qshift", "q": "-1/2"}"#,
    ];
    let scalars = ["0", "1", "-2", "t", "t + 1", "3/2", "1/t", "2*t^2 - 1"];
    for (idx, field) in fields.iter().enumerate() {
        for round in 0..3 {
            let n = 1 + rng.next(3) as usize;
            let len = 1 + rng.next(3) as usize;
            let pool = if idx == 0 {
                &scalars[..3]
            } else {
                &scalars[..]
            };
            let matrix: Vec<Vec<Vec<&str>>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            (0..len)
                                .map(|_| pool[rng.next(pool.len() as u64) as usize])
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let text = format!(
                r#"{{"field": {field}, "matrix": {}}}"#,
                serde_json::to_string(&matrix).unwrap()
            );
            let path = dir.path().join(format!("gen_{idx}_{round}.json"));
            std::fs::write(&path, text).unwrap();
            let p = path.to_str().unwrap();
            let o = skewdet(&["degdet", p, "--algo", "all"]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            let out = stdout(&o);
            let agreed: Vec<&str> = out.lines().filter(|l| l.starts_with("degdet = ")).collect();
            assert_eq!(agreed.len(), 1);
            for algo in ["relax", "expand", "oracle"] {
                let single = stdout(&skewdet(&["degdet", p, "--algo", algo]));
                assert!(
                    single.contains(agreed[0]),
                    "{algo}: {single} vs {}",
                    agreed[0]
                );
            }
        }
    }
}

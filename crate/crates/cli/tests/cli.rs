use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use surfconf_core::verifier::{Status, Verdict};

fn surfconf(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_surfconf"));
    cmd.args(args).env_remove("SURFCONF_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout_json(args: &[&str], cache: Option<&Path>) -> Value {
    let out = surfconf(args, cache);
    assert!(out.status.code().is_some_and(|c| c < 2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_elapsed);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("basis-2-1", &["basis", "--n", "2", "--g", "1", "--json"]),
    ("basis-3-2", &["basis", "--n", "3", "--g", "2", "--json"]),
    ("basis-3-3", &["basis", "--n", "3", "--g", "3", "--json"]),
    ("kernel-k3-3-3", &["kernel", "--k", "3", "--n", "3", "--g", "3", "--json"]),
    ("weights-3-1-2", &["weights", "--n", "3", "--w", "1", "--g", "2", "--json"]),
    ("delta-mu-2-1", &["delta", "--mu", "--n", "2", "--g", "1", "--json"]),
    ("delta-zeta-3-2", &["delta", "--zeta", "--n", "3", "--g", "2", "--json"]),
    ("verify-a-3-3", &["verify", "A", "--n", "3", "--g", "3", "--json"]),
    ("verify-mu-3-2", &["verify", "mu", "--n", "3", "--g", "2", "--json"]),
    ("verify-all-fast", &["verify", "all", "--tier", "fast", "--json"]),
    ("pairing-3-3", &["pairing", "--n", "3", "--g", "3", "--json"]),
];

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("SURFCONF_BLESS").is_some();
    for (name, args) in GOLDEN {
        let mut got = stdout_json(args, None);
        strip_elapsed(&mut got);
        let path = golden_path(name);
        if bless {
            fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn golden_values_are_the_expected_ones() {
    let read = |name: &str| -> Value { serde_json::from_str(&fs::read_to_string(golden_path(name)).unwrap()).unwrap() };
    assert_eq!(read("basis-3-2")["kernel_rank"], 14);
    assert_eq!(read("basis-3-3")["kernel_rank"], 20);
    // 4g² + 2g − 1
    assert_eq!(read("basis-2-1")["quotient_dim"], 5);
    assert_eq!(read("kernel-k3-3-3")["kernel_dim"], 6);
    assert_eq!(read("delta-zeta-3-2")["surface_zero"], true);
    assert_eq!(read("verify-mu-3-2")[0]["status"], "refuted");
    let p = read("pairing-3-3");
    assert_eq!(p["family_size"], 27);
    assert_eq!(p["off_diagonal_max_abs"], "0");
}

#[test]
fn verdict_json_parses_back() {
    let v = stdout_json(&["verify", "all", "--tier", "fast", "--json"], None);
    let items = v.as_array().unwrap();
    assert!(!items.is_empty());
    for item in items {
        assert!(item["elapsed_ms"].is_u64());
        let verdict: Verdict = serde_json::from_value(item.clone()).unwrap();
        let mut stripped = item.clone();
        strip_elapsed(&mut stripped);
        assert_eq!(serde_json::to_value(&verdict).unwrap(), stripped);
        assert_ne!(verdict.status, Status::Refuted);
    }
}

#[test]
fn warm_cache_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "all", "--tier", "fast", "--json"];
    let mut cold = stdout_json(&args, Some(dir.path()));
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
    let mut warm = stdout_json(&args, Some(dir.path()));
    let mut none = stdout_json(&args, None);
    for v in [&mut cold, &mut warm, &mut none] {
        strip_elapsed(v);
    }
    let text = |v: &Value| serde_json::to_string(v).unwrap();
    assert_eq!(text(&cold), text(&warm));
    assert_eq!(text(&cold), text(&none));
}

#[test]
fn exit_code_reflects_refutation() {
    assert_eq!(surfconf(&["verify", "A", "--n", "3", "--g", "2"], None).status.code(), Some(0));
    assert_eq!(surfconf(&["verify", "mu", "--n", "3", "--g", "2"], None).status.code(), Some(1));
    assert_eq!(surfconf(&["verify", "mu", "--n", "3", "--g", "1"], None).status.code(), Some(0));
    assert_eq!(surfconf(&["verify", "cyclic", "--g", "2"], None).status.code(), Some(2));
    assert_eq!(surfconf(&["verify", "A", "--n", "1", "--g", "2"], None).status.code(), Some(2));
}

#[test]
fn csv_and_text_formats() {
    let out = surfconf(&["verify", "C", "--n", "3", "--g", "3", "--format", "csv"], None);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&r.headers().unwrap()[5], "status");
    assert!(rows.iter().all(|row| &row[5] == "verified-equal"));

    let out = surfconf(&["basis", "--n", "2", "--g", "1"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kernel_rank: 1"), "{text}");
}

#[test]
fn resource_ceiling_is_reported_not_fatal() {
    let v = stdout_json(&["--max-dim", "50", "verify", "pairing", "--n", "3", "--g", "3", "--json"], None);
    assert_eq!(v[0]["status"], "skipped-resource");
}

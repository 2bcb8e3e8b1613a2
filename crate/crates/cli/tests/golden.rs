//! Compares the CSV and JSON written by short runs against tests/golden.
//! Set `NEVLAB_BLESS=1` to rewrite the stored files.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &[&str])] = &[
    (
        "acprod-construction",
        &["acprod", "--rho", "3", "--check", "construction"],
    ),
    ("acprod-maxmod", &["acprod", "--rho", "3", "--check", "maxmod"]),
    (
        "characteristic-ac",
        &["characteristic", "--kind", "ac", "--n-max", "3", "--grid", "2:1e3:4"],
    ),
    (
        "lindelof",
        &["lindelof", "--rho", "0.75", "--grid", "10:1e3:3", "--at", "-5,1"],
    ),
    (
        "oracle",
        &["oracle", "--samples", "500", "--sandwich", "20", "--seed", "9"],
    ),
    ("residual", &["residual", "--fixture", "all"]),
    (
        "separation-bank",
        &[
            "separation",
            "--kind",
            "bank",
            "--q",
            "1",
            "--C",
            "1",
            "--K",
            "12",
            "--expect",
            "decaying",
        ],
    ),
    (
        "deficiency-geometric",
        &["deficiency", "--kind", "geometric", "--grid", "1e2:1e6:4"],
    ),
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

#[test]
fn outputs_match_golden_files() {
    let bless = std::env::var_os("NEVLAB_BLESS").is_some();
    let scratch = std::env::temp_dir().join(format!("nevlab-golden-{}", std::process::id()));
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let out = scratch.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_nevlab"))
            .env("NEVLAB_THREADS", "2")
            .arg("--out")
            .arg(&out)
            .arg("--quiet")
            .args(*args)
            .status()
            .unwrap();
        assert!(status.success(), "{name}: {status}");
        for ext in ["csv", "json"] {
            let file = format!("{}.{ext}", args[0]);
            let got = std::fs::read_to_string(out.join(&file)).unwrap();
            let stored = golden_dir().join(name).join(&file);
            if bless {
                std::fs::create_dir_all(stored.parent().unwrap()).unwrap();
                std::fs::write(&stored, &got).unwrap();
            } else if std::fs::read_to_string(&stored).ok().as_deref() != Some(got.as_str()) {
                mismatched.push(format!("{name}/{file}"));
            }
        }
    }
    let _ = std::fs::remove_dir_all(&scratch);
    assert!(mismatched.is_empty(), "differs from golden: {mismatched:?}");
}

#[test]
fn usage_errors_exit_with_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_nevlab"))
        .args(["--quiet", "--n-theta", "100", "characteristic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n-theta"));
}

#[test]
fn failed_verdict_exits_with_one() {
    let dir = std::env::temp_dir().join(format!("nevlab-fail-{}", std::process::id()));
    // the Bank scan decays, so expecting a lower bound fails
    let out = Command::new(env!("CARGO_BIN_EXE_nevlab"))
        .arg("--out")
        .arg(&dir)
        .args([
            "--quiet",
            "separation",
            "--kind",
            "bank",
            "--q",
            "1",
            "--C",
            "1",
            "--K",
            "12",
            "--expect",
            "bounded-below",
        ])
        .output()
        .unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("separation"));
}

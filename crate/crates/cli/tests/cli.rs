use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use mixstate::dqc1::random_unitary;
use mixstate::factory::werner;
use mixstate::DensityMatrix;
use mixstate_cli::state_file::StateFile;
use mixstate_cli::{run, Outcome};
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("mixstate").chain(args.iter().copied()))
}

fn json_ok(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixstate"))
}

#[test]
fn werner_threshold_example() {
    let v = json_ok(&[
        "entangle",
        "threshold",
        "--family",
        "werner",
        "--tol",
        "1e-9",
    ]);
    assert!((v["epsilon_c"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn identity_trace_example() {
    let v = json_ok(&["dqc1", "exact", "--u", "identity", "--n", "3"]);
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() <= 1e-10);
    assert_eq!(v["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn bell_discord_example() {
    let v = json_ok(&["discord", "--state", "bell", "--cut", "0"]);
    assert!((v["I"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert!((v["J_max"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert!((v["D_standard"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
}

#[test]
fn exit_codes() {
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"), "{}", out.stderr);
    assert!(out.stdout.is_empty());

    assert_eq!(
        cli(&["entangle", "threshold", "--family", "werner", "--tol", "-1"]).code,
        2
    );
    assert_eq!(
        cli(&["coherence", "signal", "--n", "3", "--samples", "48"]).code,
        2
    );
    assert_eq!(cli(&["entangle", "ppt", "--state", "werner"]).code, 2);

    // domain and resource failures
    assert_eq!(
        cli(&[
            "dqc1",
            "exact",
            "--u",
            "identity",
            "--n",
            "2",
            "--epsilon",
            "0"
        ])
        .code,
        3
    );
    assert_eq!(
        cli(&["dqc1", "exact", "--u", "identity", "--n", "12"]).code,
        3
    );
    assert_eq!(
        cli(&["discord", "--state", "cat", "--n", "3", "--cut", "0"]).code,
        3
    );

    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("entangle"));
}

#[test]
fn outputs_match_schemas() {
    let cases: &[(&str, &[&str])] = &[
        (
            "state_file",
            &[
                "state",
                "make",
                "--state",
                "pseudo-pure-cat",
                "--n",
                "3",
                "--epsilon",
                "0.3",
            ],
        ),
        (
            "ppt",
            &["entangle", "ppt", "--state", "werner", "--epsilon", "0.5"],
        ),
        (
            "ppt",
            &[
                "entangle", "ppt", "--state", "cat", "--n", "3", "--cut", "0,2",
            ],
        ),
        (
            "threshold",
            &["entangle", "threshold", "--family", "werner"],
        ),
        (
            "threshold",
            &[
                "entangle",
                "threshold",
                "--family",
                "cat",
                "--n",
                "4",
                "--cut",
                "balanced",
            ],
        ),
        (
            "threshold",
            &["entangle", "threshold", "--family", "cat", "--n-max", "5"],
        ),
        ("crossing", &["entangle", "crossing"]),
        (
            "crossing",
            &[
                "entangle",
                "crossing",
                "--curve",
                "cat-ppt",
                "--numeric-up-to",
                "4",
                "--n-max",
                "8",
            ],
        ),
        (
            "discord",
            &[
                "discord",
                "--state",
                "werner",
                "--epsilon",
                "0.25",
                "--theta",
                "1.0",
                "--phi",
                "0.5",
            ],
        ),
        (
            "dqc1_exact",
            &[
                "dqc1", "exact", "--u", "random", "--n", "3", "--u-seed", "9",
            ],
        ),
        (
            "dqc1_sample",
            &[
                "dqc1",
                "sample",
                "--u",
                "hadamard",
                "--n",
                "2",
                "--epsilon",
                "1",
                "--shots",
                "1000",
            ],
        ),
        (
            "coherence_spectrum",
            &[
                "coherence",
                "spectrum",
                "--state",
                "cat",
                "--n",
                "3",
                "--dephase",
                "0.3",
            ],
        ),
        (
            "coherence_signal",
            &["coherence", "signal", "--n", "3", "--samples", "16"],
        ),
    ];
    for (name, args) in cases {
        assert_valid(name, &json_ok(args));
    }
}

#[test]
fn state_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let p = path.to_str().unwrap();
    let v = json_ok(&[
        "state",
        "make",
        "--state",
        "werner",
        "--epsilon",
        "0.25",
        "--output",
        p,
    ]);
    assert_valid("state_summary", &v);
    let back = StateFile::read(&path).unwrap().to_density().unwrap();
    assert_eq!(back.matrix(), werner(0.25).unwrap().matrix());

    let check = json_ok(&["state", "check", "--input", p]);
    assert_valid("state_check", &check);
    assert_eq!(check["n_qubits"], 2);

    // random 6-qubit state: write, copy through the CLI, read back
    let u = random_unitary(64, 3).unwrap();
    let probs: Vec<f64> = (1..=64).map(|k| k as f64 / 2080.0).collect();
    let rho = DensityMatrix::diagonal(&probs)
        .unwrap()
        .apply_unitary(&u)
        .unwrap();
    let src = dir.path().join("r6.json");
    let dst = dir.path().join("r6-copy.json");
    StateFile::from_density(&rho, BTreeMap::new())
        .write(&src)
        .unwrap();
    json_ok(&[
        "state",
        "make",
        "--input",
        src.to_str().unwrap(),
        "--output",
        dst.to_str().unwrap(),
    ]);
    let copy = StateFile::read(&dst).unwrap().to_density().unwrap();
    assert!(copy
        .matrix()
        .iter()
        .zip(rho.matrix().iter())
        .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
}

#[test]
fn corrupt_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut file = StateFile::from_density(&werner(0.25).unwrap(), BTreeMap::new());
    for e in &mut file.entries {
        e.re *= 2.0;
    }
    file.write(&path).unwrap();
    let out = cli(&["state", "check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("unit trace"), "{}", out.stderr);

    std::fs::write(
        &path,
        r#"{"schema_version": 1, "n_qubits": 1, "entries": []}"#,
    )
    .unwrap();
    let out = cli(&["entangle", "ppt", "--input", path.to_str().unwrap()]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("schema mismatch"));

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(cli(&["discord", "--input", path.to_str().unwrap()]).code, 3);
}

#[test]
fn csv_output() {
    let out = cli(&[
        "coherence",
        "spectrum",
        "--state",
        "cat",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.code, 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["order", "weight"]);
    let rows: Vec<(i32, f64)> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert!((rows.iter().find(|r| r.0 == 2).unwrap().1 - 0.25).abs() < 1e-12);

    let out = cli(&["entangle", "crossing", "--format", "csv"]);
    assert_eq!(out.stdout.lines().count(), 20);
}

#[test]
fn seeded_runs_reproduce_across_threads() {
    let args = [
        "dqc1", "sample", "--u", "random", "--n", "3", "--shots", "300000", "--seed", "17",
    ];
    let base = cli(&args);
    assert_eq!(base.code, 0);
    assert_eq!(cli(&args), base);
    for threads in ["1", "3", "8"] {
        let out = binary()
            .args(["--threads", threads])
            .args(args)
            .output()
            .unwrap();
        assert_eq!(
            String::from_utf8(out.stdout).unwrap(),
            base.stdout,
            "threads = {threads}"
        );
    }
    let other = cli(&[
        "dqc1", "sample", "--u", "random", "--n", "3", "--shots", "300000", "--seed", "18",
    ]);
    assert_ne!(other.stdout, base.stdout);

    let d = ["discord", "--state", "werner", "--epsilon", "0.6"];
    let one = binary().args(["--threads", "1"]).args(d).output().unwrap();
    let many = binary().args(["--threads", "6"]).args(d).output().unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn help_shows_library_defaults() {
    let settings = mixstate::discord::OptimizerSettings::default();
    let help = cli(&["discord", "--help"]).stdout;
    for d in [
        settings.theta_points,
        settings.phi_points,
        settings.refine_iters,
    ] {
        assert!(help.contains(&format!("[default: {d}]")), "{help}");
    }
    let help = cli(&["entangle", "crossing", "--help"]).stdout;
    assert!(
        help.contains(&format!(
            "[default: {}]",
            mixstate::factory::NMR_POLARIZATION
        )),
        "{help}"
    );
    assert!(help.contains("[default: separability-bound]"));
    let help = cli(&["dqc1", "exact", "--help"]).stdout;
    assert!(help.contains(&format!(
        "[default: {}]",
        mixstate::factory::NMR_POLARIZATION
    )));
    assert!(help.contains("[default: minus]"));
    let help = cli(&["entangle", "threshold", "--help"]).stdout;
    assert!(help.contains("[default: one-vs-rest]"));
    let help = cli(&["--help"]).stdout;
    assert!(help.contains(&format!("[default: {}]", mixstate::DEFAULT_MAX_QUBITS)));
}

#[test]
fn out_dir_and_cap_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = binary()
        .env(mixstate_cli::OUT_DIR_ENV, dir.path())
        .args([
            "state",
            "make",
            "--state",
            "cat",
            "--n",
            "3",
            "--output",
            "cat3.json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("cat3.json").exists());

    let capped = binary()
        .args(["--cap", "3", "state", "make", "--state", "cat", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let raised = binary()
        .args(["--cap", "4", "state", "make", "--state", "cat", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(
        raised.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&raised.stderr)
    );
}

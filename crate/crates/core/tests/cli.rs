use std::path::Path;
use std::process::{Command, Output};

use dicke_phase::cli::csv::echoed_config;
use dicke_phase::cli::{Command as Sub, RunConfig};

const BIN: &str = env!("CARGO_BIN_EXE_dicke-phase");

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("DICKE_PHASE_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header row followed by data rows, metadata stripped.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

const PARAMS: [&str; 8] = [
    "--lambda",
    "0.92",
    "--spin-coupling",
    "1",
    "--epsilon",
    "1.1",
    "--beta",
    "100",
];

fn with_params<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&PARAMS);
    v.extend_from_slice(extra);
    v
}

fn cheap_commands() -> Vec<Vec<&'static str>> {
    vec![
        with_params("eval-omega", &["--x-range", "0:1.5:31"]),
        with_params("find-max", &[]),
        with_params("sweep", &["--sweep", "lambda:0.8:1.0:9"]),
        with_params(
            "phase-map",
            &["--sweep", "lambda:0.8:1.0:4", "--sweep", "epsilon:0.9:1.3:3"],
        ),
        with_params("hysteresis", &["--sweep", "lambda:0.8:1.0:9"]),
        vec![
            "oracle-chain",
            "--lambda",
            "0.9",
            "--spin-coupling",
            "1",
            "--epsilon",
            "1.1",
            "--beta",
            "2",
            "--sites",
            "6",
            "--x",
            "0.3",
        ],
        vec![
            "oracle-full",
            "--lambda",
            "0.9",
            "--spin-coupling",
            "1",
            "--epsilon",
            "1.1",
            "--beta",
            "4",
            "--sites",
            "3",
            "--cutoff",
            "16",
        ],
    ]
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in cheap_commands() {
        let a = stdout_ok(&args);
        let b = stdout_ok(&args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn echoed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for args in cheap_commands() {
        let first = stdout_ok(&args);
        let cfg = echoed_config(&first).unwrap();
        let path = dir.path().join(format!("{}.toml", cfg.command.name()));
        std::fs::write(&path, cfg.to_toml()).unwrap();
        let again = stdout_ok(&[args[0], "--config", path.to_str().unwrap()]);
        assert_eq!(echoed_config(&again).unwrap(), cfg);
        assert_eq!(first, again, "{args:?}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("find.toml");
    std::fs::write(
        &path,
        "command = \"find-max\"\n[params]\nlambda = 0.5\nspin_coupling = 1.0\nepsilon = 1.1\nbeta = 100.0\n",
    )
    .unwrap();
    let out = stdout_ok(&["find-max", "--config", path.to_str().unwrap(), "--lambda", "0.92"]);
    let cfg: RunConfig = echoed_config(&out).unwrap();
    assert_eq!(cfg.command, Sub::FindMax);
    assert_eq!(cfg.params.lambda, 0.92);
    assert_eq!(cfg.params.beta, 100.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));

    let missing = run(&["find-max", "--lambda", "1", "--epsilon", "1", "--beta", "1"]);
    assert_eq!(missing.status.code(), Some(1));
    let msg = String::from_utf8(missing.stderr).unwrap();
    assert_eq!(msg.lines().count(), 1, "{msg}");
    assert!(msg.contains("spin_coupling"), "{msg}");

    let negative = run(&with_params("find-max", &["--beta", "-1"]));
    assert_eq!(negative.status.code(), Some(1));
    assert!(String::from_utf8(negative.stderr).unwrap().contains("beta"));

    assert_eq!(run(&["find-max", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["not-a-command"]).status.code(), Some(1));
    assert_eq!(
        run(&with_params("sweep", &["--sweep", "lambda:1:0.5"])).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["find-max", "--config", "/nonexistent/dp.toml"]).status.code(),
        Some(1)
    );

    let unconverged = run(&[
        "oracle-full",
        "--lambda",
        "1.5",
        "--spin-coupling",
        "0.5",
        "--epsilon",
        "1",
        "--beta",
        "0.5",
        "--sites",
        "2",
        "--cutoff",
        "4",
    ]);
    assert_eq!(unconverged.status.code(), Some(2));
    assert!(String::from_utf8(unconverged.stderr).unwrap().contains("cutoff"));
}

#[test]
fn thread_setting() {
    let args = with_params("sweep", &["--sweep", "lambda:0.8:1.0:9"]);
    let one = run_env(&args, &[("DICKE_PHASE_THREADS", "1")]);
    let auto = run_env(&args, &[("DICKE_PHASE_THREADS", "0")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    assert_eq!(
        run_env(&args, &[("DICKE_PHASE_THREADS", "many")]).status.code(),
        Some(1)
    );
}

#[test]
fn row_counts_and_columns() {
    let (header, rows) = table(&stdout_ok(&with_params("eval-omega", &["--x-range", "0:1.5:31"])));
    assert_eq!(header, ["x", "omega", "landscape_i", "g"]);
    assert_eq!(rows.len(), 31);

    let (header, rows) = table(&stdout_ok(&with_params("sweep", &["--sweep", "beta:50:150:5"])));
    assert_eq!(header, ["beta", "x_star", "theta", "omega_star", "tie", "n_maxima"]);
    assert_eq!(rows.len(), 5);

    let (_, rows) = table(&stdout_ok(&with_params(
        "phase-map",
        &["--sweep", "lambda:0.8:1.0:4", "--sweep", "epsilon:0.9:1.3:3"],
    )));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r[5] == "sub" || r[5] == "super"));
}

#[test]
fn decoupled_landscape_column_is_flat() {
    let out = stdout_ok(&[
        "eval-omega",
        "--lambda",
        "0",
        "--spin-coupling",
        "1",
        "--epsilon",
        "1.1",
        "--beta",
        "10",
        "--x-range",
        "-1:1:9",
    ]);
    let (_, rows) = table(&out);
    assert!(rows.iter().all(|r| r[2] == rows[0][2]));
}

#[test]
fn transition_metadata_is_reported() {
    let out = stdout_ok(&with_params("sweep", &["--sweep", "lambda:0.7:1.1:21"]));
    let transitions: Vec<_> = out.lines().filter(|l| l.starts_with("# transition")).collect();
    assert_eq!(transitions.len(), 1, "{out}");
    assert!(transitions[0].contains("first"));
}

#[test]
fn output_file_and_figure_directory() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nested/find.csv");
    let out = run(&with_params("find-max", &["--out", file.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("# dicke-phase "));

    let fig = dir.path().join("fig2");
    let out = run(&[
        "reproduce-fig2",
        "--sweep",
        "lambda:0.5:1.0:6",
        "--out",
        fig.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<_> = std::fs::read_dir(&fig)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 2, "{names:?}");
    for name in names {
        let (_, rows) = table(&std::fs::read_to_string(Path::new(&fig).join(name)).unwrap());
        assert_eq!(rows.len(), 6);
    }
}

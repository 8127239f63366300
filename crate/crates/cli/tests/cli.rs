use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oversmooth"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn nonlinearity_check_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "nonlinearity-check",
        "--grid-n",
        "128",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("nonlinearity-check: pass"));
    let csv = std::fs::read_to_string(dir.path().join("nonlinearity.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);
    let json = std::fs::read_to_string(dir.path().join("nonlinearity-check.json")).unwrap();
    assert!(json.contains("\"generated_at\": \"2023-11-14T22:13:20Z\""));
}

#[test]
fn rate_study_from_config_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("study.toml");
    std::fs::write(
        &config,
        "grid_n = 64\nconfirm_grid_n = 0\ndeltas = [0.1, 0.01, 0.001]\nseed = 3\n",
    )
    .unwrap();
    let target = dir.path().join("run");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = run(&[
            "rate-study",
            "--config",
            config.to_str().unwrap(),
            "--regime",
            "hoelder",
            "--p",
            "1",
            "--out",
            target.to_str().unwrap(),
        ]);
        assert!(matches!(out.status.code(), Some(0 | 1)), "{}", stdout(&out));
        assert!(stdout(&out).contains("rate-study n=64"));
        outputs.push((
            std::fs::read(target.join("rate_study.csv")).unwrap(),
            std::fs::read(target.join("rate_study.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "delta,alpha,beta,error_sup,residual,penalty,certified"
    );
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["suite", "no-such-suite"],
        vec!["rate-study", "--regime", "cubic"],
        vec!["rate-study", "--grid-n", "10"],
        vec!["rate-study", "--m", "1"],
        vec!["rate-study", "--config", "/nonexistent/config.toml"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_lists_subcommands() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "fracpow-check",
        "decay-check",
        "aux-rates",
        "nonlinearity-check",
        "rate-study",
        "suite",
    ] {
        assert!(text.contains(name), "{name}");
    }
}

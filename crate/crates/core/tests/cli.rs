//! End-to-end runs of the `lastiter` binary.

use std::path::Path;
use std::process::{Command, Output};

use lastiter::harness::{read_curve_csv, read_trace_csv, TRACE_HEADER};

fn lastiter(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lastiter"))
        .args(args)
        .current_dir(cwd)
        .env_remove("LASTITER_OUT")
        .output()
        .expect("spawn lastiter")
}

fn static_run(out: &Path, algos: [&str; 2], horizon: &str, extra: &[&str]) -> Output {
    let dir = out.to_str().unwrap();
    let checkpoints = format!("1,{horizon}");
    let mut args = vec![
        "run",
        "--game",
        "hard:0",
        "--min-algo",
        algos[0],
        "--max-algo",
        algos[1],
        "--horizon",
        horizon,
        "--reps",
        "1",
        "--traces",
        "1",
        "--checkpoints",
        &checkpoints,
        "--out",
        dir,
    ];
    args.extend_from_slice(extra);
    lastiter(&args, out)
}

#[test]
fn static_run_writes_one_row_per_round() {
    let dir = tempfile::tempdir().unwrap();
    let out = static_run(dir.path(), ["uniform", "uniform"], "10", &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(dir.path().join("trace-0.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), TRACE_HEADER.join(","));
    let rounds = read_trace_csv(text.as_bytes()).unwrap();
    assert_eq!(rounds.len(), 10);
    for (i, r) in rounds.iter().enumerate() {
        assert_eq!(r.t, i as u64 + 1);
        // Uniform against uniform on the zero-gap instance is an equilibrium.
        assert!(r.eg.unwrap().abs() < 1e-12);
        assert!(r.loss == 0.0 || r.loss == 1.0);
    }

    let curve = std::fs::read(dir.path().join("curve.csv")).unwrap();
    let curve = read_curve_csv(curve.as_slice(), 2.0).unwrap();
    assert_eq!(curve.points.iter().map(|c| c.t).collect::<Vec<_>>(), vec![1, 10]);
}

#[test]
fn same_seed_reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = static_run(dir.path(), ["regexp3:T=200", "exp3ix"], "200", &["--seed", "7", "--svg"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["curve.csv", "trace-0.csv", "curve.svg"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between identical runs");
    }
}

#[test]
fn invalid_config_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "horizon = 10\nbogus_key = 3\n").unwrap();
    let out_dir = dir.path().join("results");
    let out = lastiter(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
    assert!(!out_dir.exists());

    let out = lastiter(&["run", "--horizon", "0", "--out", out_dir.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());

    let out = lastiter(&["run", "--min-algo", "eoe:p=-1", "--out", out_dir.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_suite_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = lastiter(&["verify", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonsense"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("pennies.txt");
    std::fs::write(&game, "# matching pennies\n2 2 deterministic\n1 0\n0 1\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "game = {}\nmin-algo = exp3ix\nmax_algo = exp3ix\nhorizon = 50\nreps = 2\ncheckpoints = 5,50\ntraces = 1\n",
            game.display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let out = lastiter(
        &[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--horizon",
            "20",
            "--checkpoints",
            "5,20",
            "--out",
            out_dir.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rounds = read_trace_csv(std::fs::File::open(out_dir.join("trace-0.csv")).unwrap()).unwrap();
    assert_eq!(rounds.len(), 20);
    assert!(rounds.iter().all(|r| r.a < 2 && r.b < 2));
    let curve = read_curve_csv(std::fs::File::open(out_dir.join("curve.csv")).unwrap(), 2.0).unwrap();
    assert!(curve.points.iter().all(|c| c.reps == 2));
}

#[test]
fn output_directory_defaults_to_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_lastiter"))
        .args([
            "run",
            "--min-algo",
            "uniform",
            "--max-algo",
            "uniform",
            "--horizon",
            "5",
            "--reps",
            "1",
            "--checkpoints",
            "5",
        ])
        .current_dir(dir.path())
        .env("LASTITER_OUT", &target)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(target.join("curve.csv").exists());
    assert!(!dir.path().join("lastiter-out").exists());
}

#[test]
fn oracle_suite_passes_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = lastiter(&["verify", "oracles", "--threads", "2"], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("PASS")));
    assert!(!stdout.lines().any(|l| l.starts_with("FAIL")));
}

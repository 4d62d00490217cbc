use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ionpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.cfg");
    fs::write(
        &path,
        "scenario.delays_s = 0.5, 5, 10, 15, 20\nscenario.cycles_per_point = 40\nscenario.shots_per_setting = 20\n",
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn prepare_prints_fidelities() {
    let o = ionpair(&["prepare"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[prepared]\nfidelity = 0.96"), "{text}");
    assert!(text.contains("[transferred]\nfidelity = 0.89"), "{text}");
}

#[test]
fn decay_report_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = ionpair(&["decay", "--config", &cfg, "--seed", "11", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("tau_s = "));
    }
    for name in ["decay.csv", "fit.txt", "decay.dat"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let csv = fs::read_to_string(a.join("decay.csv")).unwrap();
    assert!(csv.starts_with("t_s,fmin,stderr\n"));
    assert_eq!(csv.lines().count(), 6);

    let refit = ionpair(&["fit", a.join("decay.csv").to_str().unwrap()]);
    assert!(refit.status.success());
    assert_eq!(stdout(&refit), fs::read_to_string(a.join("fit.txt")).unwrap());
}

#[test]
fn tomo_writes_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionpair(&["tomo", "--delay", "1", "--shots", "200", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let counts = fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert!(counts.starts_with("setting_rot1,setting_rot2,n00,n01,n10,n11,shots\n"));
    assert_eq!(counts.lines().count(), 10);
}

#[test]
fn calibrate_reports_lamb_dicke() {
    let o = ionpair(&["calibrate"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("noise.lamb_dicke = 0.101"), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "noise.unknown_rate = 3\n").unwrap();
    assert_eq!(ionpair(&["decay", "--config", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ionpair(&["decay", "--mode", "guess"]).status.code(), Some(1));
    assert_eq!(ionpair(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.csv");
    fs::write(&zero, "t_s,fmin,stderr\n1,0,0\n2,0,0\n3,0,0\n4,0,0\n").unwrap();
    assert_eq!(ionpair(&["fit", zero.to_str().unwrap()]).status.code(), Some(2));

    let cold = dir.path().join("cold.cfg");
    fs::write(&cold, "noise.heating_rate_phonons_per_s = 0\n").unwrap();
    assert_eq!(ionpair(&["calibrate", "--config", cold.to_str().unwrap()]).status.code(), Some(2));
}

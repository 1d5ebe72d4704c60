use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphere-nls")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn successful_run_writes_csv_to_stdout() {
    let out = bin(&["sogge", "--set", "q=4,8,16"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,measured,reference,slope,reference_slope"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weyl.csv");
    let out = bin(&["weyl", "--set", "N=16", "--set", "samples=50", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("N,samples,max_ratio"));
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn config_file_and_out_key() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("conc.csv");
    let cfg = write(dir.path(), "conc.cfg", &format!("# cap scan\nN = 2\nq = 16, 32\nout = {}\n", csv.display()));
    let out = bin(&["concentration", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
}

#[test]
fn seed_flag_changes_random_output_and_reruns_match() {
    let args = |seed: &str| {
        let out = bin(&["strichartz", "--seed", seed, "--set", "N=2,4", "--set", "replicates=2", "--set", "t_lo=0", "--set", "t_hi=0.2"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        out.stdout
    };
    assert_eq!(args("3"), args("3"));
    assert_ne!(args("3"), args("4"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "a.cfg", "K = 16\nbogus = 1\n");
    let out = bin(&["simulate", "--config", &bad_key]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let bad_value = write(dir.path(), "b.cfg", "K = sixteen\n");
    assert_eq!(code(&bin(&["simulate", "--config", &bad_value])), 1);
    assert_eq!(code(&bin(&["simulate", "--set", "K"])), 1);
    assert_eq!(code(&bin(&["simulate", "--config", "/nonexistent/run.cfg"])), 1);
    assert_eq!(code(&bin(&["params", "nonsense"])), 1);
}

#[test]
fn precondition_errors_exit_two() {
    let out = bin(&["simulate", "--set", "K=64", "--set", "dt=1e-2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("dt"), "{}", stderr(&out));
    assert_eq!(code(&bin(&["strichartz", "--set", "N=12"])), 2);
    assert_eq!(code(&bin(&["extinction", "--set", "N=8", "--set", "T=16"])), 2);
}

#[test]
fn blow_up_exits_three() {
    let out = bin(&["simulate", "--set", "K=8", "--set", "dt=1e-3", "--set", "rho=1", "--set", "T=0.01", "--set", "amplitude=1e80"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn params_lists_keys() {
    let out = bin(&["params", "simulate"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["K =", "dt =", "rho =", "init ="] {
        assert!(text.lines().any(|l| l.starts_with(key)), "missing {key}");
    }
}

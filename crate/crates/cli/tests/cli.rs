use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn iqp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iqp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn small_bundle(dir: &Path) {
    let out = iqp(dir, &["generate", "-n", "10", "-m", "16", "-g", "2", "--lambda", "0", "--seed", "5", "-o", "small"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for prefix in ["a", "b"] {
        let out = iqp(d, &["generate", "-n", "40", "-m", "60", "-g", "2", "--lambda", "10", "--seed", "9", "-o", prefix]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    for ext in ["pub", "sec", "manifest"] {
        assert_eq!(fs::read(d.join(format!("a.{ext}"))).unwrap(), fs::read(d.join(format!("b.{ext}"))).unwrap());
    }
    let public = fs::read_to_string(d.join("a.pub")).unwrap();
    assert!(public.starts_with("IQP1 n=40 m=60\n"));
    assert_eq!(public.lines().count(), 61);
    assert!(fs::read_to_string(d.join("a.manifest")).unwrap().contains("seed=9\n"));
}

#[test]
fn challenge_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = iqp(dir.path(), &["generate", "-n", "300", "-m", "360", "--lambda", "50", "--seed", "7", "-o", "c"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(fs::read_to_string(dir.path().join("c.pub")).unwrap().lines().count(), 361);
}

#[test]
fn infeasible_parameters_name_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let out = iqp(dir.path(), &["generate", "-n", "10", "-m", "100", "-g", "2", "--lambda", "10"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("m<=2(n-lambda)"));
}

#[test]
fn honest_accepted_uniform_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    small_bundle(d);
    let out = iqp(d, &["simulate", "--public", "small.pub", "-T", "4000", "--seed", "1", "-o", "honest.txt"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(fs::read_to_string(d.join("honest.txt")).unwrap().lines().count(), 4000);
    let out = iqp(d, &["verify", "--public", "small.pub", "--secret", "small.sec", "--samples", "honest.txt"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("ACCEPT\n"));

    let uniform: String = (0..4000u32)
        .map(|i| format!("{:010b}\n", i.wrapping_mul(2_654_435_761) >> 22))
        .collect();
    fs::write(d.join("uniform.txt"), uniform).unwrap();
    let out = iqp(d, &["verify", "--public", "small.pub", "--secret", "small.sec", "--samples", "uniform.txt"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("REJECT\n"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    small_bundle(d);
    let a = stdout(&iqp(d, &["simulate", "--public", "small.pub", "-T", "50", "--seed", "3"]));
    let b = stdout(&iqp(d, &["simulate", "--public", "small.pub", "-T", "50", "--seed", "3"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 50);
}

#[test]
fn malformed_samples_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    small_bundle(d);
    fs::write(d.join("bad.txt"), "0101010101\n01\n").unwrap();
    let out = iqp(d, &["verify", "--public", "small.pub", "--secret", "small.sec", "--samples", "bad.txt"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"));
    let out = iqp(d, &["verify", "--public", "small.pub", "--secret", "small.sec", "--samples", "missing.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simulator_cap_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = iqp(d, &["generate", "-n", "40", "-m", "60", "-g", "2", "--lambda", "10", "--seed", "1", "-o", "big"]);
    assert_eq!(code(&out), 0);
    let out = iqp(d, &["simulate", "--public", "big.pub"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn qrc_linearity_spoofs_verifier() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = iqp(d, &["generate", "--scheme", "qrc", "-q", "7", "-n", "5", "-m", "14", "--seed", "3", "-o", "sb"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"));
    let out = iqp(
        d,
        &["attack", "--public", "sb.pub", "--method", "linearity", "--seed", "1", "-o", "report.txt", "--samples-out", "spoof.txt"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = fs::read_to_string(d.join("report.txt")).unwrap();
    assert!(report.lines().last().unwrap().starts_with("SECRET "));
    let out = iqp(d, &["verify", "--public", "sb.pub", "--secret", "sb.sec", "--samples", "spoof.txt"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn hardened_bundle_resists_radical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = iqp(
        d,
        &[
            "generate", "--scheme", "hardened", "-n", "60", "-m", "100", "-g", "4", "--m1", "40", "--d", "15", "--lambda",
            "0", "--seed", "2", "-o", "hard",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = iqp(d, &["attack", "--public", "hard.pub", "--method", "radical"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("FAIL\n"));
}

#[test]
fn budget_one_uses_one_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = iqp(d, &["generate", "-n", "40", "-m", "60", "-g", "3", "--lambda", "10", "--seed", "4", "-o", "c"]);
    assert_eq!(code(&out), 0);
    let out = iqp(d, &["attack", "--public", "c.pub", "--method", "linearity", "--budget", "1", "--g-threshold", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("method=linearity checks="));
    let checks: u64 = text.lines().next().unwrap().split_whitespace().nth(1).unwrap()[7..].parse().unwrap();
    assert!(checks <= 1);
}

#[test]
fn unknown_method_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = iqp(dir.path(), &["attack", "--public", "x.pub", "--method", "quantum"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn secret_stays_off_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    small_bundle(d);
    let secret = fs::read_to_string(d.join("small.sec")).unwrap();
    let bits = secret.lines().next().unwrap();
    for method in ["linearity", "radical", "hamming", "km", "lazy", "double-meyer"] {
        let out = iqp(d, &["attack", "--public", "small.pub", "--method", method, "--budget", "64", "--d-budget", "8"]);
        assert!(!stderr(&out).contains(bits), "{method}");
    }
}

#[test]
fn correlation_and_compile() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    small_bundle(d);
    let out = iqp(d, &["correlation", "--public", "small.pub", "--secret", "small.sec"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("correlation=+2^(-2/2) value=0.500000000000"));
    let out = iqp(d, &["compile", "--public", "small.pub"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("ROT "));
}

#[test]
fn bench_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_iqp"))
        .current_dir(dir.path())
        .env("IQP_THREADS", "2")
        .args(["bench", "fig2a", "-g", "1", "--n-min", "40", "--n-max", "42", "--seeds", "5"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("g\tn\tinstances\tmean_dim\tbound"));
    assert_eq!(text.lines().count(), 4);
    let out = iqp(dir.path(), &["bench", "good-d", "-g", "1", "--n-min", "20", "-m", "30", "--seeds", "4", "--trials", "500"]);
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let freq: f64 = row.split('\t').nth(4).unwrap().parse().unwrap();
    assert!((freq - 0.5).abs() < 0.06, "{row}");
}

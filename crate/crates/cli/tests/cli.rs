use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_braidauth"));
    cmd.env_remove("BRAIDAUTH_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn braidauth")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn keygen(dir: &Path, name: &str, extra: &[&str]) -> (String, String) {
    let public = dir.join(format!("{name}.pub")).display().to_string();
    let secret = dir.join(format!("{name}.key")).display().to_string();
    let mut args = vec!["keygen", "--n", "8", "--len", "16", "--pub", &public, "--secret", &secret];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    (public, secret)
}

struct Server {
    child: std::process::Child,
    addr: String,
}

fn spawn_server(args: &[&str]) -> Server {
    let mut child = bin()
        .args(["verify-serve", "--listen", "127.0.0.1:0", "--once", "--len", "16"])
        .args(args)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn server");
    let mut line = String::new();
    BufReader::new(child.stdout.as_mut().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on ").expect("listening line").to_string();
    Server { child, addr }
}

#[test]
fn keygen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, s1) = keygen(dir.path(), "a", &["--seed", "9"]);
    let (p2, s2) = keygen(dir.path(), "b", &["--seed", "9"]);
    let (p3, _) = keygen(dir.path(), "c", &["--seed", "10"]);
    let read = |p: &str| std::fs::read_to_string(p).unwrap();
    assert_eq!(read(&p1), read(&p2));
    assert_eq!(read(&s1), read(&s2));
    assert_ne!(read(&p1), read(&p3));
}

#[test]
fn keygen_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.pub").display().to_string();
    let k = dir.path().join("x.key").display().to_string();
    let out = run(&["keygen", "--r", "1", "--pub", &p, "--secret", &k]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("r must be ≥ 2, got 1"), "{}", stderr(&out));
    let out = run(&["keygen", "--n", "7", "--pub", &p, "--secret", &k]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&p).exists());
    let out = run(&["keygen", "--scheme", "1", "--e", "2", "--pub", &p, "--secret", &k]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn keygen_reports_io_errors() {
    let out = run(&["keygen", "--n", "4", "--len", "4", "--pub", "/nonexistent/dir/x.pub"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn run_local_accepts_and_is_deterministic() {
    for scheme in ["1", "2"] {
        let args = ["run-local", "--scheme", scheme, "--n", "8", "--len", "16", "--seed", "3"];
        let a = run(&args);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        let text = stdout(&a);
        assert!(text.starts_with("n=8 L=16 minlen=8 seed=3\n"), "{text}");
        assert_eq!(text.lines().filter(|l| l.ends_with("verdict=1")).count(), 3);
        assert!(text.trim_end().ends_with("ACCEPTED"));
        assert_eq!(text, stdout(&run(&args)));
    }
}

#[test]
fn seed_environment_overrides_flag() {
    let args = ["run-local", "--n", "8", "--len", "16", "--seed", "1"];
    let with_env = bin().env("BRAIDAUTH_SEED", "77").args(args).output().unwrap();
    let direct = run(&["run-local", "--n", "8", "--len", "16", "--seed", "77"]);
    assert_eq!(stdout(&with_env), stdout(&direct));
    let bad = bin().env("BRAIDAUTH_SEED", "abc").args(args).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn prove_against_verify_serve() {
    let dir = tempfile::tempdir().unwrap();
    for scheme in ["1", "2"] {
        let (p, s) = keygen(dir.path(), &format!("k{scheme}"), &["--scheme", scheme]);
        let server = spawn_server(&["--scheme", scheme, "--pub", &p]);
        let out = run(&["prove", "--connect", &server.addr, "--pub", &p, "--secret", &s]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).contains("ACCEPTED"));
        let server_out = server.child.wait_with_output().unwrap();
        assert_eq!(server_out.status.code(), Some(0), "{}", stderr(&server_out));
    }
}

#[test]
fn prove_with_wrong_secret_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for scheme in ["1", "2"] {
        let (p, _) = keygen(dir.path(), &format!("a{scheme}"), &["--scheme", scheme, "--seed", "1"]);
        let (_, s) = keygen(dir.path(), &format!("b{scheme}"), &["--scheme", scheme, "--seed", "2"]);
        let server = spawn_server(&["--scheme", scheme]);
        let out = run(&["prove", "--connect", &server.addr, "--pub", &p, "--secret", &s]);
        assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
        let text = stdout(&out);
        assert_eq!(text.lines().filter(|l| l.ends_with("verdict=0")).count(), 3, "{text}");
        assert!(text.contains("REJECTED"));
        assert_eq!(server.child.wait_with_output().unwrap().status.code(), Some(1));
    }
}

#[test]
fn prove_with_other_key_is_rejected_by_pinned_server() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, _) = keygen(dir.path(), "a", &["--seed", "1"]);
    let (p2, s2) = keygen(dir.path(), "b", &["--seed", "2"]);
    let server = spawn_server(&["--pub", &p1]);
    let out = run(&["prove", "--connect", &server.addr, "--pub", &p2, "--secret", &s2]);
    assert_eq!(out.status.code(), Some(4), "{}", stdout(&out));
    assert_eq!(server.child.wait_with_output().unwrap().status.code(), Some(4));
}

#[test]
fn scheme_mismatch_is_a_protocol_error() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = keygen(dir.path(), "a", &["--scheme", "2"]);
    let server = spawn_server(&["--scheme", "1"]);
    let out = run(&["prove", "--connect", &server.addr, "--pub", &p, "--secret", &s]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(server.child.wait_with_output().unwrap().status.code(), Some(4));
}

#[test]
fn prove_reports_missing_files_and_refused_connections() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["prove", "--pub", dir.path().join("none.pub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let (p, s) = keygen(dir.path(), "a", &[]);
    let garbage = dir.path().join("garbage.pub");
    std::fs::write(&garbage, "not a key\n").unwrap();
    let out = run(&["prove", "--pub", garbage.to_str().unwrap(), "--secret", &s]);
    assert_eq!(out.status.code(), Some(2));
    let closed = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().to_string();
    let out = run(&["prove", "--connect", &closed, "--pub", &p, "--secret", &s]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn attack_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = run(&["attack", "--strategy", "random", "--trials", "50", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("random-digest"), "{text}");
    assert!(std::fs::read_to_string(&report).unwrap().contains("successes=0"));

    let out = run(&["attack", "--strategy", "root", "--n", "4", "--len", "2", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let row = stdout(&out).lines().find(|l| l.starts_with("root-attack")).unwrap().to_string();
    assert_eq!(row.split_whitespace().nth(3), Some("20"), "{row}");

    let seq = run(&["attack", "--strategy", "replay", "--trials", "30", "--sequential"]);
    let par = run(&["attack", "--strategy", "replay", "--trials", "30"]);
    assert_eq!(stdout(&seq), stdout(&par));

    let out = run(&["attack", "--strategy", "root", "--n", "3", "--len", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("even"));
    assert_eq!(run(&["attack", "--strategy", "nonsense"]).status.code(), Some(2));
}

#[test]
fn selftest_passes_and_catches_a_broken_normalizer() {
    let out = run(&["selftest", "--n", "4", "--samples", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS relation-invariance"));
    assert!(!stdout(&out).contains("FAIL"));

    let out = run(&["selftest", "--n", "4", "--samples", "6", "--mutate-normalize"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL relation-invariance"), "{}", stdout(&out));

    assert_eq!(run(&["selftest", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--only", "no-such-check"]).status.code(), Some(2));
}

#[test]
fn keygen_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.pub");
    let k = dir.path().join("g.key");
    let out = run(&[
        "keygen", "--scheme", "1", "--n", "16", "--r", "2", "--s", "3", "--len", "128", "--seed", "7", "--pub",
        p.to_str().unwrap(), "--secret", k.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let read = |p: &Path| std::fs::read_to_string(p).unwrap();
    assert_eq!(read(&p), read(&golden.join("scheme1-n16-seed7.pub")));
    assert_eq!(read(&k), read(&golden.join("scheme1-n16-seed7.key")));
}

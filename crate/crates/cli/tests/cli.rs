use std::process::{Command, Output};

fn gpade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpade"))
        .args(args)
        .env_remove("GPADE_CONFIG")
        .output()
        .expect("spawn gpade")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn line<'a>(report: &'a str, prefix: &str) -> &'a str {
    report.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no line {prefix:?} in\n{report}"))
}

#[test]
fn build_log1m_kernel_example() {
    let o = gpade(&["build", "--system", "log1m", "--p", "1", "--q", "1", "--h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert_eq!(line(&r, "value poly/Q"), "value poly/Q coeffs=[2,-1]");
    assert!(line(&r, "check order/j1").contains("status=certified"));
    assert!(line(&r, "check siegel").contains("status=certified"));
    assert!(r.ends_with("summary certified=3 violated=0 indeterminate=0 hypothesis-unmet=0\n"));
}

#[test]
fn constants_li2_reproduces_c1_and_c2() {
    let o = gpade(&["constants", "--system", "polylog2", "--a", "1", "--b", "10", "--t", "0", "--m", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    let fam = line(&r, "value family");
    assert!(fam.contains(" c1=4*e^66 "), "{fam}");
    assert!(fam.contains(" c2=12 "), "{fam}");
    assert!(line(&r, "check c4/below-10^5.78").contains("status=certified"));
    // b = 10 is far below the scale where x > N + 1
    assert!(line(&r, "check hypothesis/x>N+1").contains("status=hypothesis-unmet"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--system", "log1m", "--a", "1", "--b", "1000", "--m", "4", "--scan-nearest", "--property-mode"];
    let a = gpade(&args);
    let b = gpade(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = stdout(&a);
    assert!(line(&r, "check theorem1").contains("status=certified"));
    for k in ["chain/b^m|xi", "chain/remainder", "chain/xi-inequality", "chain/distance"] {
        assert!(line(&r, &format!("check {k} ")).contains("status=certified"), "{k}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gpade(&["build", "--system", "log1m", "--p", "1"]).status.code(), Some(2));
    assert_eq!(gpade(&["build", "--system", "nope", "--p", "1", "--q", "1", "--h", "1"]).status.code(), Some(2));
    assert_eq!(gpade(&["build", "--system", "log1m", "--p", "1", "--q", "2", "--h", "1"]).status.code(), Some(2));
    assert_eq!(gpade(&["sqrt", "--d", "4"]).status.code(), Some(2));
    assert_eq!(gpade(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gpade(&["verify", "--system", "log1m", "--a", "1", "--b", "10", "--m", "1"]).status.code(), Some(2));
}

#[test]
fn hypothesis_refusal_is_not_a_violation() {
    let o = gpade(&["verify", "--system", "polylog2", "--a", "1", "--b", "10", "--m", "3", "--scan-nearest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status=hypothesis-unmet"));
}

#[test]
fn artifact_round_trip_matches_direct_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("a.toml");
    let art_s = art.to_str().unwrap();
    let o = gpade(&["build", "--system", "polylog2", "--p", "6", "--q", "4", "--h", "2", "--artifact", art_s]);
    assert_eq!(o.status.code(), Some(0));
    let via_file = gpade(&["iterate", "--from", art_s, "--k-max", "2"]);
    let direct = gpade(&["iterate", "--system", "polylog2", "--p", "6", "--q", "4", "--h", "2", "--k-max", "2"]);
    assert_eq!(via_file.status.code(), Some(0));
    let body = |o: &Output| stdout(o).lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&via_file), body(&direct));
    assert!(stdout(&direct).contains("summary certified=3 violated=0"));

    let z = gpade(&["zerocheck", "--from", art_s]);
    assert_eq!(z.status.code(), Some(0));
    assert!(line(&stdout(&z), "check zero-estimate").contains("status=certified"));
}

#[test]
fn config_from_env_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gpade.toml");
    std::fs::write(&cfg, "precision = 60\nmax_precision = 600\n").unwrap();
    let out = dir.path().join("report.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_gpade"))
        .args(["sqrt", "--d", "3", "--convergents", "3", "--out", out.to_str().unwrap()])
        .env("GPADE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r = std::fs::read_to_string(&out).unwrap();
    assert!(line(&r, "config").starts_with("config precision=60 max_precision=600"));
    // flags beat the file
    let o = Command::new(env!("CARGO_BIN_EXE_gpade"))
        .args(["--precision", "80", "sqrt", "--d", "3", "--convergents", "3"])
        .env("GPADE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(line(&stdout(&o), "config").starts_with("config precision=80 max_precision=600"));

    std::fs::write(&cfg, "precison = 60\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gpade")).args(["sqrt", "--d", "3"]).env("GPADE_CONFIG", &cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sqrt_pell_and_reduction() {
    let o = gpade(&["sqrt", "--d", "2", "--convergents", "4", "--scan-m", "1..3", "--den", "beta"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert!(line(&r, "value cf").contains("preperiod=[1] period=[2]"));
    let c2 = line(&r, "check conv/002/identity");
    assert!(c2.contains("status=certified") && c2.contains(" a=-1 b=49 "), "{c2}");
    assert!(line(&r, "check conv/002/pell").contains("alpha=7 beta=5 value=-1"));
    assert!(line(&r, "value scan/m0001").contains("n=17"));
}

#[test]
fn digits_flag_the_convergent_bound_pairs() {
    let o = gpade(&["digits", "--system", "polylog2", "--a", "1", "--b", "10", "--count", "14", "--window", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert!(line(&r, "value digits").ends_with("digits=10261779109939"));
    let c = line(&r, "check convergents/");
    assert!(c.contains("status=certified") && c.contains("exceeded_at=[10,27]"), "{c}");
}

#[test]
fn quick_suite_fails_only_on_the_convergent_bound() {
    let o = gpade(&["suite", "--quick"]);
    assert_eq!(o.status.code(), Some(1));
    let r = stdout(&o);
    let violated: Vec<&str> = r.lines().filter(|l| l.contains("status=violated")).collect();
    assert_eq!(violated.len(), 5);
    assert!(violated.iter().all(|l| l.starts_with("check c09/convergent/")));
    assert!(!r.contains("status=indeterminate"));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert_eq!(stderr.lines().filter(|l| l.starts_with("criterion")).count(), 10);
}

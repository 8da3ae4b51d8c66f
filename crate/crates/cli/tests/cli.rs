use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trading-prophet"));
    cmd.env_remove("TRADING_PROPHET_SEED");
    cmd
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const SIMULATE: &str = r#"{
  "matroid": { "kind": "uniform", "k": 3, "capacity": 2 },
  "model": { "type": "iid", "atoms": [
    { "prices": ["0", "1", "2"], "prob": "1/3" },
    { "prices": ["2", "0", "1"], "prob": "2/3" } ] },
  "horizon": 6,
  "seed": 5,
  "trials": 300
}"#;

#[test]
fn density_of_uniform_six_two() {
    let o = run(bin().args(["density", "--config"]).arg(shipped("density_uniform.json")));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "3/1\n");
}

#[test]
fn exact_spot_instance_reports_six_sevenths() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["exact", "--quiet", "--config"])
        .arg(shipped("exact_spot.json"))
        .arg("--out")
        .arg(dir.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let csv = fs::read_to_string(dir.path().join("ratio.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,matroid_kind,density,online,offline,ratio,bound,satisfied"
    );
    assert_eq!(lines.next().unwrap(), "uniform-ratio-spot,uniform,2/1,3/4,7/8,6/7,1/2,true");
}

#[test]
fn missing_config_file_exits_two() {
    let o = run(bin().args(["exact", "--config", "/nonexistent/config.json"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot read"));
    let o = run(bin().arg("simulate"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn syntax_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bad.json", "{\n  \"matroid\": { \"kind\": \"uniform\", \"k\": 2,\n  }\n}");
    let o = run(bin().arg("density").arg("--config").arg(&path));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn field_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "c.json",
        r#"{"matroid": {"kind": "uniform", "k": 2, "capacity": 1},
            "model": {"type": "iid", "atoms": [{"prices": ["1", "x/2"], "prob": "1"}]}}"#,
    );
    let o = run(bin().arg("exact").arg("--config").arg(&path));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model.atoms[0].prices[1]"), "{}", stderr(&o));

    let path = write_config(dir.path(), "d.json", r#"{"matroid": {"kind": "uniform", "k": 2}}"#);
    let o = run(bin().arg("density").arg("--config").arg(&path));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));
}

#[test]
fn mode_mismatch_is_a_config_error() {
    let o = run(bin().args(["simulate", "--config"]).arg(shipped("density_uniform.json")));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mode"));
}

#[test]
fn capacity_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "big.json", r#"{"matroid": {"kind": "uniform", "k": 100, "capacity": 1}}"#);
    let o = run(bin().arg("density").arg("--config").arg(&path));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let path = write_config(
        dir.path(),
        "wide.json",
        r#"{"matroid": {"kind": "uniform", "k": 40, "capacity": 1},
            "model": {"type": "generator", "name": "uniform-ratio", "epsilon": "1/2"}}"#,
    );
    let o = run(bin().arg("exact").arg("--config").arg(&path));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sim.json", SIMULATE);
    let files = ["stats.csv", "trace.csv", "offline_trace.csv"];
    let produce = |out: &str, extra: &[&str]| {
        let out = dir.path().join(out);
        let o = run(bin().arg("simulate").arg("--config").arg(&config).arg("--out").arg(&out).args(extra));
        assert!(o.status.success(), "{}", stderr(&o));
        files.map(|f| fs::read(out.join(f)).unwrap())
    };
    let a = produce("a", &[]);
    assert_eq!(a, produce("b", &[]));
    assert_eq!(a, produce("c", &["--seed", "5"]));
    assert_ne!(a, produce("d", &["--seed", "6"]));
    let stats = String::from_utf8(a[0].clone()).unwrap();
    assert!(stats.starts_with("policy,trials,mean,stderr,per_step_mean\nonline_iid,300,"));
}

#[test]
fn environment_seed_applies_only_without_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sim.json", SIMULATE);
    let stats = |out: &str, env: Option<&str>, flag: Option<&str>| {
        let out = dir.path().join(out);
        let mut cmd = bin();
        cmd.arg("simulate").arg("--config").arg(&config).arg("--out").arg(&out).arg("--quiet");
        if let Some(seed) = env {
            cmd.env("TRADING_PROPHET_SEED", seed);
        }
        if let Some(seed) = flag {
            cmd.args(["--seed", seed]);
        }
        assert!(run(&mut cmd).status.success());
        fs::read(out.join("stats.csv")).unwrap()
    };
    let config_seed = stats("a", None, None);
    let env_seed = stats("b", Some("99"), None);
    assert_ne!(config_seed, env_seed);
    assert_eq!(env_seed, stats("c", None, Some("99")));
    assert_eq!(config_seed, stats("d", Some("99"), Some("5")));
}

#[test]
fn certify_passes_on_the_shipped_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["certify", "--trials", "40", "--out"])
        .arg(dir.path())
        .arg("--config")
        .arg(shipped("certify.json")));
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("certify.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",40,0,true")), "{csv}");
    let o = run(bin().args(["certify", "--trials", "0"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_shipped_config_runs() {
    for entry in fs::read_dir(shipped("")).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let mode = text
            .split("\"mode\": \"")
            .nth(1)
            .and_then(|rest| rest.split('"').next())
            .expect("shipped configs name their mode");
        let dir = tempfile::tempdir().unwrap();
        let o = run(bin()
            .arg(mode)
            .arg("--config")
            .arg(&path)
            .args(["--trials", "50", "--quiet", "--out"])
            .arg(dir.path()));
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        assert!(fs::read_dir(dir.path()).unwrap().count() > 0, "{}", path.display());
    }
}

#[test]
fn sweep_and_random_order_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["hardness-sweep", "--quiet", "--config"])
        .arg(shipped("sweep_matroid.json"))
        .arg("--out")
        .arg(dir.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(1).unwrap().starts_with("matroid,1/10,"));
    assert!(csv.lines().skip(1).all(|l| l.contains(",1/3,") && l.ends_with(",true")));

    let o = run(bin()
        .args(["random-order", "--trials", "200", "--config"])
        .arg(shipped("random_order_partition.json"))
        .arg("--out")
        .arg(dir.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let lemmas = fs::read_to_string(dir.path().join("lemmas.csv")).unwrap();
    assert!(lemmas.starts_with("lemma,lhs,rhs,holds\nmixture_pair,"));
    assert!(stdout(&o).contains("online_random_order"));
}

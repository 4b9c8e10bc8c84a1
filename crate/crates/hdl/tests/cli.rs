use std::fs;
use std::process::Command;

use hdl::config::{Experiment, InstanceConfig, ThetaSelector};
use hdl::oracles;
use hdl::Instance;

fn config(text: &str) -> InstanceConfig {
    InstanceConfig::from_text(text).unwrap()
}

#[test]
fn classify_split_q3_r3() {
    let c = config("ring = mixed:p3:e1:r3:a1\ntorus = 1,1\ntheta = all\nexperiments = classify");
    let report = hdl::run(&c).unwrap();
    let e = &report.experiments[0];
    assert!(e.passed);
    assert_eq!(e.rows, 324);
    assert_eq!(e.summary, "324 characters, 216 strongly generic");
    assert!(e.csv.lines().skip(1).all(|l| l.contains("gl2:r3:q3:torus(1,1)")));
}

#[test]
fn reports_are_byte_identical() {
    let c = config(
        "ring = mixed:p3:e1:r3:a1\ntorus = 2\ntheta = sample:3\nseed = 11\nexperiments = classify,dim,rss,build\nthreads = 2",
    );
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = hdl::run(&c).unwrap();
    assert!(ra.passed());
    ra.write(a.path()).unwrap();
    hdl::run(&c).unwrap().write(b.path()).unwrap();
    for name in ["classify.csv", "dim.csv", "rss.csv", "build.csv", "report.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn sampling_depends_on_seed_only() {
    let mut c = config("ring = mixed:p3:e1:r3:a1\ntorus = 1,1\ntheta = sample:10\nseed = 3");
    let first = Instance::new(c.clone()).unwrap().select_thetas().unwrap();
    assert_eq!(first.len(), 10);
    assert_eq!(Instance::new(c.clone()).unwrap().select_thetas().unwrap(), first);
    c.seed = 4;
    assert_ne!(Instance::new(c).unwrap().select_thetas().unwrap(), first);
}

#[test]
fn guard_rejects_oversized_experiments() {
    let c = config("ring = mixed:p3:e1:r3:a1\ntorus = 1,1\nexperiments = hill\nguard = 100000\noracle_guard = 1000");
    let err = Instance::new(c).err().unwrap().to_string();
    assert!(err.contains("guard exceeded"), "{err}");
}

#[test]
fn explicit_non_generic_theta_is_rejected() {
    let c = config("ring = mixed:p3:e1:r2:a1\ntorus = 1,1\ntheta = 0,0\nexperiments = dim");
    let err = format!("{:#}", hdl::run(&c).err().unwrap());
    assert!(err.contains("genericity"), "{err}");
}

#[test]
fn json_config_runs_like_text() {
    let c = config("ring = mixed:p2:e1:r2:a1\ntorus = 2\nexperiments = dim,irred,omega");
    let json = serde_json::to_string(&c).unwrap();
    let d = InstanceConfig::parse(&json).unwrap();
    assert_eq!(d.theta, ThetaSelector::StronglyGeneric);
    assert_eq!(d.experiments, vec![Experiment::Dim, Experiment::Irred, Experiment::Omega]);
    let report = hdl::run(&d).unwrap();
    assert!(report.passed(), "{:?}", report.experiments.iter().map(|e| &e.summary).collect::<Vec<_>>());
}

#[test]
fn hill_reports_both_counts() {
    let c = config("ring = mixed:p3:e1:r2:a1\ntorus = 1,1\nexperiments = hill");
    let e = hdl::run(&c).unwrap().experiments.remove(0);
    assert!(e.passed);
    assert_eq!(e.records[0]["characters"], 4);
    assert_eq!(e.records[0]["level_quotient"], 4);
    assert_eq!(e.records[0]["level_kernel"], 9);
}

#[test]
fn oracle_suite_small_instance() {
    let c = config("ring = mixed:p2:e1:r3:a1\ntorus = 1,1");
    let inst = Instance::new(c).unwrap();
    let results = oracles::run(&inst, &["all".to_string()], 20, 1).unwrap();
    let names: Vec<&str> = results.iter().map(|r| r.oracle.as_str()).collect();
    for n in oracles::NAMES {
        assert!(names.contains(&n), "{n} missing from {names:?}");
    }
    assert!(results.iter().all(|r| r.passed), "{results:?}");
    assert!(oracles::run(&inst, &["nonsense".to_string()], 1, 1).is_err());
}

#[test]
fn lagrangian_counts() {
    assert_eq!(oracles::lagrangian_count(3, 1), 4);
    assert_eq!(oracles::lagrangian_count(2, 2), 15);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hdl");
    let dir = tempfile::tempdir().unwrap();
    let ok = Command::new(bin)
        .args(["classify", "--ring", "mixed:p2:e1:r2:a1", "--torus", "1,1", "--theta", "all", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS classify"));
    assert!(dir.path().join("classify.csv").exists());

    let bad = Command::new(bin).args(["build", "--ring", "mixed:p4:e1:r2:a1", "--torus", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

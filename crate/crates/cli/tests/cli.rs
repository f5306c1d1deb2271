use std::path::Path;
use std::process::{Command, Output};

fn gaugelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaugelab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_scenario() {
    let o = gaugelab(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in [
        "soft_coulomb_bound_states",
        "yang_failure",
        "hamiltonian_noninvariance",
        "evolution_covariance",
        "helmholtz_decomposition",
        "chen_invariance",
        "landau_gauge_pair",
        "stationary_phase",
        "kinetic_momentum_commutator",
    ] {
        assert!(text.contains(name), "{name} missing from list");
    }
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("split");
    let o = gaugelab(&[
        "run",
        "helmholtz_decomposition",
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "7",
        "--dump-decomposition",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    for f in ["report.json", "timing.json", "a_pure.field", "a_phys.field", "a0_phys.field"] {
        assert!(out.join(f).is_file(), "{f} not written");
    }
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"seed\": 7"));

    let r = gaugelab(&["report", dir.path().to_str().unwrap()]);
    assert!(r.status.success());
    assert!(stdout(&r).contains("helmholtz_decomposition [PASS]"));
}

fn with_config(body: &str, f: impl FnOnce(&Path, &Path)) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, body).unwrap();
    f(&cfg, &dir.path().join("out"));
}

#[test]
fn failing_claim_exits_with_one() {
    // a tolerance below roundoff cannot be met
    with_config("exact_tol = 1e-300\n", |cfg, out| {
        let o = gaugelab(&[
            "run",
            "kinetic_momentum_commutator",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--dump-fields",
        ]);
        assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
        assert!(out.join("landau_psi.field").is_file());
        let r = gaugelab(&["report", out.to_str().unwrap()]);
        assert_eq!(r.status.code(), Some(1));
    });
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(gaugelab(&["run", "no_such_scenario"]).status.code(), Some(2));
    with_config("not_a_key = 3\n", |cfg, out| {
        let o = gaugelab(&["run", "stationary_phase", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
    });
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(gaugelab(&["report", empty.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn operators_export_as_triplets() {
    with_config("n = 16\nsamples = 1\n", |cfg, out| {
        let o = gaugelab(&[
            "run",
            "chen_invariance",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--export-operators",
        ]);
        assert!(o.status.code().is_some_and(|c| c < 2), "{}", stdout(&o));
        let text = std::fs::read_to_string(out.join("chen_static.triplets")).unwrap();
        assert!(text.starts_with("# gaugelab-operator n=256 "));
    });
}

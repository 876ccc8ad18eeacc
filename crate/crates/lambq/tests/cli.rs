//! End-to-end tests of the `lambq` binary: exit codes, output files, and
//! byte-level determinism, all driven through a real process spawn.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

/// Scratch directory that cleans up after itself. Each test passes a
/// distinct tag so parallel tests never share a path.
struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("lambq-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).expect("create scratch dir");
        Scratch(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    fn write_config(&self, name: &str, body: &str) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, body).expect("write config");
        path
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn lambq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambq"))
        .args(args)
        .output()
        .expect("spawn lambq")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited without a code")
}

/// Two string modes; small enough that every command is instant.
const TWO_MODE: &str = r#"{
  "dimensionless": { "r": 0.45, "y": 0.8, "n_modes": 2, "big_l": 2.0943951023931953 }
}"#;

/// Moderate damping with the band edge well above the bead frequency, so
/// the decay command has a real resonance to find.
const DAMPED: &str = r#"{
  "raw": { "m": 1.0, "kappa": 0.8, "kappa_c": 0.2, "tau": 0.04, "sigma": 0.04,
           "ell": 125.66370614359172, "n_modes": 200 }
}"#;

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let scratch = Scratch::new("determinism");
    let config = scratch.write_config("config.json", TWO_MODE);
    for run in ["a", "b"] {
        let out = lambq(&[
            "spectrum",
            "--config",
            config.to_str().unwrap(),
            "--out",
            scratch.path(run).to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
        let out = lambq(&[
            "ground-state",
            "--config",
            config.to_str().unwrap(),
            "--out",
            scratch.path(run).to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    }
    for name in ["spectrum.csv", "occupation.csv", "rho.csv", "ground_state.json"] {
        let first = fs::read(scratch.path("a").join(name)).unwrap();
        let second = fs::read(scratch.path("b").join(name)).unwrap();
        assert_eq!(first, second, "{name} differs between identical runs");
    }
}

#[test]
fn spectrum_table_has_one_row_per_mode() {
    let scratch = Scratch::new("rows");
    let config = scratch.write_config("config.json", TWO_MODE);
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let table = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    // Header plus three modes: the bead and two string modes.
    assert_eq!(table.lines().count(), 4);
    assert!(table.starts_with("alpha,Omega,"));
}

#[test]
fn mode_count_override_reshapes_the_spectrum() {
    let scratch = Scratch::new("override");
    let config = scratch.write_config("config.json", TWO_MODE);
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--n-modes",
        "6",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let table = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    assert_eq!(table.lines().count(), 8);
}

#[test]
fn malformed_configuration_exits_one_and_writes_nothing() {
    let scratch = Scratch::new("malformed");
    let config = scratch.write_config("broken.json", "{ not json");
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("cannot parse"));
    assert!(!out_dir.join("spectrum.csv").exists());
}

#[test]
fn unknown_configuration_keys_are_rejected() {
    let scratch = Scratch::new("unknown-key");
    let config = scratch.write_config(
        "typo.json",
        r#"{ "dimensionles": { "r": 0.45, "y": 0.8, "n_modes": 2, "big_l": 2.0 } }"#,
    );
    let out = lambq(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("config error"));
}

#[test]
fn ambiguous_parameter_sections_are_rejected() {
    let scratch = Scratch::new("ambiguous");
    let config = scratch.write_config(
        "both.json",
        r#"{
  "raw": { "m": 1.0, "kappa": 0.8, "kappa_c": 0.2, "tau": 0.04, "sigma": 0.04,
           "ell": 10.0, "n_modes": 5 },
  "dimensionless": { "r": 0.5, "y": 1.0, "n_modes": 5, "big_l": 10.0 }
}"#,
    );
    let out = lambq(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("not both"));
}

#[test]
fn missing_config_flag_is_reported() {
    let out = lambq(&["spectrum"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("--config is required"));
}

#[test]
fn overdriven_coupling_exits_with_the_instability_code() {
    let scratch = Scratch::new("unstable");
    let config = scratch.write_config(
        "unstable.json",
        r#"{
  "dimensionless": { "r": 0.7, "y": 0.5, "n_modes": 50, "big_l": 52.35987755982988 },
  "gamma_scale": 2.0
}"#,
    );
    let out = lambq(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let message = stderr_of(&out);
    assert!(message.contains("coupling strength g"), "stderr: {message}");
}

#[test]
fn zero_coupling_spectrum_is_the_bare_one() {
    let scratch = Scratch::new("silent");
    let config = scratch.write_config(
        "silent.json",
        r#"{
  "dimensionless": { "r": 0.45, "y": 0.8, "n_modes": 3, "big_l": 6.0 },
  "gamma_scale": 0.0
}"#,
    );
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let table = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    let mut omegas = Vec::new();
    for row in table.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        omegas.push(fields[1].parse::<f64>().unwrap());
        assert_eq!(
            fields[4].parse::<f64>().unwrap(),
            0.0,
            "decoupled residual must be exactly zero: {row}"
        );
    }
    // The dressed frequencies are the bare ones: the bead line sits at
    // exactly omega_0 = 1 and the column stays sorted.
    assert!(omegas.contains(&1.0));
    assert!(omegas.windows(2).all(|pair| pair[0] < pair[1]));
}

#[test]
fn verify_passes_on_a_healthy_instance() {
    let scratch = Scratch::new("verify-pass");
    let config = scratch.write_config("config.json", TWO_MODE);
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let report = stdout_of(&out);
    assert!(report.contains("verification passed"));
    assert!(!report.contains("FAIL"));
    assert!(report.matches("PASS").count() >= 10);
    assert!(out_dir.join("verify.json").exists());
}

#[test]
fn injected_perturbation_trips_verification() {
    let scratch = Scratch::new("verify-inject");
    let config = scratch.write_config("config.json", TWO_MODE);
    let out = lambq(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--inject-perturbation",
        "--out",
        scratch.path("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
    let message = stderr_of(&out);
    assert!(message.contains("invariant broken"), "stderr: {message}");
    assert!(stdout_of(&out).contains("FAIL"));
}

#[test]
fn decay_needs_a_band_that_reaches_the_bead_frequency() {
    let scratch = Scratch::new("no-resonance");
    // Twenty modes crammed below omega_d = 0.5: the band ends under the
    // bead frequency and no resonance crossing exists.
    let config = scratch.write_config(
        "narrow.json",
        r#"{
  "dimensionless": { "r": 0.3, "y": 0.4, "n_modes": 20, "big_l": 125.66370614359172 }
}"#,
    );
    let out = lambq(&["decay", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("no resonance"));
}

#[test]
fn decay_writes_rates_and_a_trace() {
    let scratch = Scratch::new("decay");
    let config = scratch.write_config("damped.json", DAMPED);
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "decay",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let report = fs::read_to_string(out_dir.join("decay.json")).unwrap();
    for key in ["gamma_closed", "gamma_fit", "gamma_gr", "omega_r"] {
        assert!(report.contains(key), "decay.json lacks {key}");
    }
    let trace = fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(trace.lines().count() > 1000);
}

#[test]
fn figures_need_no_configuration() {
    let scratch = Scratch::new("figures");
    let out_dir = scratch.path("figs");
    let out = lambq(&["figures", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    for name in ["fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "figs3.csv"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    // The emission dataset keeps about 0.907 of the total weight at the
    // default working point.
    let emission = fs::read_to_string(out_dir.join("fig5.csv")).unwrap();
    let total: f64 = emission
        .lines()
        .skip(1)
        .map(|row| row.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 0.907).abs() < 0.002, "fig5 total weight is {total}");
    // The variance-ratio dataset starts at zero damping, where the ratio
    // is exactly one for every band edge.
    let curve = fs::read_to_string(out_dir.join("figs3.csv")).unwrap();
    let zero_rows: Vec<&str> = curve
        .lines()
        .filter(|row| row.starts_with("0.0000000000000000e0,"))
        .collect();
    assert_eq!(zero_rows.len(), 4, "one zero-damping row per band edge");
    for row in zero_rows {
        assert!(
            row.ends_with(",1.0000000000000000e0"),
            "zero damping must give a ratio of exactly one: {row}"
        );
    }
}

#[test]
fn output_directory_falls_back_to_the_environment() {
    let scratch = Scratch::new("env-out");
    let config = scratch.write_config("config.json", TWO_MODE);
    let out_dir = scratch.path("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_lambq"))
        .args(["spectrum", "--config", config.to_str().unwrap()])
        .env("LAMBQ_OUT", &out_dir)
        .output()
        .expect("spawn lambq");
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(out_dir.join("spectrum.csv").exists());
}

#[test]
fn sweep_is_reproducible_under_a_fixed_seed() {
    let scratch = Scratch::new("sweep");
    let config = scratch.write_config(
        "sweep.json",
        r#"{
  "dimensionless": { "r": 0.7, "y": 0.5, "n_modes": 12, "big_l": 15.0 },
  "seed": 7,
  "sweep": { "count": 3 }
}"#,
    );
    for run in ["a", "b"] {
        let out = lambq(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--out",
            scratch.path(run).to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    }
    let first = fs::read(scratch.path("a").join("summary.csv")).unwrap();
    let second = fs::read(scratch.path("b").join("summary.csv")).unwrap();
    assert_eq!(first, second, "seeded sweep is not reproducible");
    let summary = String::from_utf8(first).unwrap();
    assert_eq!(summary.lines().count(), 4, "header plus three draws");
    assert!(scratch.path("a").join("sweep_000/spectrum.csv").exists());
    assert!(scratch.path("a").join("sweep_002/spectrum.csv").exists());

    // A different seed must change the drawn parameters.
    let out = lambq(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "8",
        "--out",
        scratch.path("c").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let third = fs::read(scratch.path("c").join("summary.csv")).unwrap();
    assert_ne!(second, third, "seed override had no effect");
}

#[test]
fn sweep_over_coupling_targets_orders_the_softening() {
    let scratch = Scratch::new("sweep-targets");
    let config = scratch.write_config(
        "targets.json",
        r#"{
  "dimensionless": { "r": 0.7, "n_modes": 15, "big_l": 15.0 },
  "sweep": { "g_targets": [0.1, 0.3, 0.45] }
}"#,
    );
    let out_dir = scratch.path("out");
    let out = lambq(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let omega_min: Vec<f64> = summary
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(omega_min.len(), 3);
    assert!(
        omega_min[0] > omega_min[1] && omega_min[1] > omega_min[2],
        "stronger coupling must soften the lowest mode: {omega_min:?}"
    );
}

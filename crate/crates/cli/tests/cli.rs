//! End-to-end tests of the `oscnet` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const SMALL_PROPAGATION: &str = r#"
[scenario]
name = "propagation"

[network]
sites = 12
n = 5
coupling = 0.3
model = "rwa"

[state]
r = 0.8

[time]
t_max = 40
dt = 0.5
"#;

fn oscnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscnet")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run_into(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    oscnet(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_is_alphabetized_and_complete() {
    let out = oscnet(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().filter(|l| !l.starts_with(' ')).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    for want in [
        "bessel", "block", "efficiency", "endpoint", "interferometer", "perfect_transfer", "perturbation", "propagation",
        "spontaneous", "swap", "switch", "y_shape",
    ] {
        assert_eq!(names.iter().filter(|&&n| n == want).count(), 1, "{want}");
    }
    assert_eq!(names.len(), 12);
    assert_eq!(text.matches("reproduces:").count(), 12);
}

#[test]
fn same_config_gives_byte_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.toml", SMALL_PROPAGATION);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run_into(&cfg, &a, &[]).status.success());
    assert!(run_into(&cfg, &b, &["--threads", "1"]).status.success());
    let csv_a = fs::read(a.join("propagation.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.join("propagation.csv")).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.starts_with("t,N\n"));
    assert_eq!(text.lines().count(), 1 + 81);
}

#[test]
fn monte_carlo_is_deterministic_for_a_fixed_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mc.toml",
        "[scenario]\nname = \"perturbation\"\n[network]\nlength = 6\ncoupling = 0.3\nmodel = \"rwa\"\n\
         [monte_carlo]\nrelative_sigma = [0.0, 0.2]\nrealizations = 8\nseed = 7\n[time]\ndt = 0.2\n",
    );
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    assert!(run_into(&cfg, &a, &[]).status.success());
    assert!(run_into(&cfg, &b, &[]).status.success());
    assert!(run_into(&cfg, &c, &["--set", "seed=8"]).status.success());
    let read = |d: &Path| fs::read_to_string(d.join("perturbation.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let meta = fs::read_to_string(a.join("perturbation.meta.toml")).unwrap();
    assert!(meta.contains("clamped_couplings") && meta.contains("seed = 7"), "{meta}");
}

#[test]
fn misspelt_key_is_rejected_with_a_suggestion() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", &SMALL_PROPAGATION.replace("coupling = 0.3", "couplng = 0.3"));
    let out = run_into(&cfg, &tmp.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("network.couplng") && msg.contains("network.coupling"), "{msg}");
    assert!(!tmp.path().join("o").exists(), "nothing may be written on validation errors");

    let out = run_into(&write_config(tmp.path(), "ok.toml", SMALL_PROPAGATION), &tmp.path().join("o"), &["--set", "couplng=0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("coupling"));
}

#[test]
fn validation_and_numerical_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let cfg = write_config(tmp.path(), "p.toml", SMALL_PROPAGATION);
    for bad in ["n=40", "coupling=-1", "model=harmonic", "sites=\"many\""] {
        let out = run_into(&cfg, &out_dir, &["--set", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}: {}", stderr(&out));
    }
    assert_eq!(oscnet(&["run", tmp.path().join("missing.toml").to_str().unwrap()]).status.code(), Some(2));
    let unknown = write_config(tmp.path(), "u.toml", "[scenario]\nname = \"propagaton\"\n");
    let out = run_into(&unknown, &out_dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("propagation"));

    // Without squeezing nothing ever arrives: the study cannot find a peak.
    let mc = write_config(
        tmp.path(),
        "mc.toml",
        "[scenario]\nname = \"perturbation\"\n[network]\nlength = 5\ncoupling = 0.3\nmodel = \"rwa\"\n[state]\nr = 0\n\
         [monte_carlo]\nrelative_sigma = [0.1]\nrealizations = 2\n",
    );
    let out = run_into(&mc, &out_dir, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn sidecar_round_trips_the_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.toml", SMALL_PROPAGATION);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run_into(&cfg, &a, &["--set", "state.r=1.1"]).status.success());
    let meta_a = a.join("propagation.meta.toml");
    assert!(run_into(&meta_a, &b, &[]).status.success());

    let config_of = |p: &Path| {
        let t: toml::Table = toml::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        let mut c = t["config"].as_table().unwrap().clone();
        c.remove("output");
        c
    };
    let ca = config_of(&meta_a);
    assert_eq!(ca, config_of(&b.join("propagation.meta.toml")));
    assert_eq!(ca["state"]["r"].as_float(), Some(1.1));
    assert_eq!(ca["network"]["boundary"].as_str(), Some("periodic"));
    assert_eq!(fs::read(a.join("propagation.csv")).unwrap(), fs::read(b.join("propagation.csv")).unwrap());
}

#[test]
fn svg_is_self_contained_and_plots_every_row() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.toml", SMALL_PROPAGATION);
    let out = tmp.path().join("o");
    assert!(run_into(&cfg, &out, &["--formats", "csv,svg"]).status.success());
    let svg = fs::read_to_string(out.join("propagation.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("href") && !svg.contains("url("));
    let rows = fs::read_to_string(out.join("propagation.csv")).unwrap().lines().count() - 1;
    let points: usize = svg
        .lines()
        .filter(|l| l.contains("<polyline"))
        .map(|l| l.split("points=\"").nth(1).unwrap().split('"').next().unwrap().split(' ').count())
        .sum();
    assert_eq!(points, rows);
}

#[test]
fn outputs_stay_inside_the_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.toml", SMALL_PROPAGATION);
    let out = tmp.path().join("o");
    assert!(run_into(&cfg, &out, &["--formats", "csv,svg"]).status.success());
    let mut top: Vec<String> = fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    top.sort();
    assert_eq!(top, ["o", "p.toml"]);
    let mut inside: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    inside.sort();
    assert_eq!(inside, ["propagation.csv", "propagation.meta.toml", "propagation.svg"]);
}

#[test]
fn shipped_configs_resolve() {
    // Validation only: an unknown key makes `run` fail before any numerics,
    // so resolve each shipped config with an impossible override and check
    // the error is about that override alone.
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = oscnet(&["run", path.to_str().unwrap(), "--set", "no_such_key=1"]);
        assert_eq!(out.status.code(), Some(2));
        assert!(stderr(&out).contains("unknown key 'no_such_key'"), "{}: {}", path.display(), stderr(&out));
        seen += 1;
    }
    assert_eq!(seen, 12);
}

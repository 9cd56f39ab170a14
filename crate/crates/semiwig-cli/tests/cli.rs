use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn semiwig(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiwig"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn scenario(
    name: &str,
    eps: &str,
    times: &str,
    expansion: &str,
    potential: &str,
    extra: &str,
) -> String {
    format!(
        "name = \"{name}\"\neps = {eps}\ntimes = {times}\nexpansion = \"{expansion}\"\n\n[potential]\n{potential}\n\n\
         [initial]\nkind = \"wkb-gauss-fresnel\"\n\n[grid]\nhalf_width = 4.0\npoints = 64\n{extra}"
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

/// Rows of a CSV file as string fields, header dropped.
fn rows(path: PathBuf) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn run_ok(dir: &Path, config: &str, out: &str) -> PathBuf {
    let o = semiwig(&["run", config, "--out", out], dir);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir.join(out)
}

#[test]
fn figure1_caustic_lines_sit_at_focal_times() {
    let tmp = TempDir::new().unwrap();
    let out = run_ok(tmp.path(), "figure1-harmonic-rays", "fig1");
    let pts = rows(out.join("caustics_e0.csv"));
    assert!(!pts.is_empty());
    for p in &pts {
        let (x, t): (f64, f64) = (p[0].parse().unwrap(), p[1].parse().unwrap());
        assert_eq!(p[2], "focal");
        assert!(x.abs() < 1e-12, "x = {x}");
        let nearest = (1..=2)
            .map(|nu| (t - (nu as f64 * PI - FRAC_PI_4)).abs())
            .fold(f64::MAX, f64::min);
        assert!(nearest < 1e-8, "t = {t}");
    }
    let rays = rows(out.join("rays_e0.csv"));
    assert_eq!(rays.len(), 21 * 200);
    for f in rows(out.join("focal.csv")) {
        let eps: f64 = f[0].parse().unwrap();
        let a: f64 = f[6].parse().unwrap();
        assert!((a - 2f64.sqrt() / eps).abs() < 1e-9 * a);
    }
}

#[test]
fn figure2_catalog_has_beaks_at_focal_points() {
    let tmp = TempDir::new().unwrap();
    let out = run_ok(tmp.path(), "figure2-quartic-rays", "fig2");
    let pts = rows(out.join("caustics_e0.csv"));
    for nu in 1..=2 {
        let tn = nu as f64 * PI - FRAC_PI_4;
        let found = pts.iter().any(|p| {
            let (x, t): (f64, f64) = (p[0].parse().unwrap(), p[1].parse().unwrap());
            p[2] == "cusp-beak" && x.abs() < 1e-6 && (t - tn).abs() < 1e-6
        });
        assert!(found, "no beak at t_{nu}");
    }
    assert!(pts.iter().any(|p| p[2] == "fold"));
    assert!(
        out.join("fields/classical_e0_t2.csv").is_file()
            && out.join("fields/harmonic_e0_t2.csv").is_file()
    );
}

#[test]
fn manifest_lists_every_output_with_its_checksum() {
    let tmp = TempDir::new().unwrap();
    let out = run_ok(tmp.path(), "figure2-quartic-rays", "fig2");
    let m = json(out.join("manifest.json"));
    let listed: Vec<&str> = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["path"].as_str().unwrap())
        .collect();
    for f in m["files"].as_array().unwrap() {
        let bytes = fs::read(out.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(
            format!("{:x}", Sha256::digest(&bytes)),
            f["sha256"].as_str().unwrap()
        );
        assert_eq!(bytes.len() as u64, f["bytes"].as_u64().unwrap());
    }
    let on_disk: Vec<PathBuf> = walk(&out);
    assert_eq!(
        on_disk.len(),
        listed.len() + 1,
        "only the manifest itself is unlisted"
    );
    let config = fs::read(out.join("config.toml")).unwrap();
    assert_eq!(
        format!("{:x}", Sha256::digest(&config)),
        m["config_hash"].as_str().unwrap()
    );
    assert_eq!(m["code_version"], env!("CARGO_PKG_VERSION"));
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(tmp.path(), "figure2-quartic-rays", "a");
    let b = run_ok(tmp.path(), "figure2-quartic-rays", "b");
    assert_eq!(
        fs::read(a.join("manifest.json")).unwrap(),
        fs::read(b.join("manifest.json")).unwrap()
    );
}

#[test]
fn empty_time_list_writes_only_initial_outputs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "s.toml",
        &scenario("empty", "[0.1]", "[]", "both", "kind = \"harmonic\"", ""),
    );
    let out = run_ok(tmp.path(), &cfg, "o");
    let mut names: Vec<String> = fs::read_dir(out.join("fields"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["classical_e0_t0.csv", "harmonic_e0_t0.csv"]);
}

#[test]
fn validate_reports_field_paths() {
    let tmp = TempDir::new().unwrap();
    let o = semiwig(&["validate", "figure1-harmonic-rays"], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok: figure1-harmonic-rays"));
    let bad = scenario(
        "bad",
        "[0.1, 2.0]",
        "[]",
        "harmonic",
        "kind = \"harmonic\"",
        "",
    );
    let o = semiwig(
        &["validate", &write(tmp.path(), "bad.toml", &bad)],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`eps[1]`"), "{}", stderr(&o));
    let typo = scenario("typo", "[0.1]", "[]", "harmonic", "kind = \"harmonic\"", "")
        .replace("points = 64", "points = -3");
    let o = semiwig(
        &["validate", &write(tmp.path(), "typo.toml", &typo)],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`grid.points`"), "{}", stderr(&o));
    let o = semiwig(&["validate", "no-such-scenario"], tmp.path());
    assert_eq!(code(&o), 2);
    let o = semiwig(&["run", "no-such-scenario"], tmp.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_identical_runs_has_zero_deltas() {
    let tmp = TempDir::new().unwrap();
    let out = run_ok(tmp.path(), "figure1-harmonic-rays", "a");
    let o = semiwig(&["compare", "a", "a", "--out", "cmp"], tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(tmp.path().join("cmp/report.json"));
    for f in r["fields"].as_array().unwrap() {
        assert_eq!(f["max_abs_delta"].as_f64().unwrap(), 0.0);
        assert_eq!(f["max_density_delta"].as_f64().unwrap(), 0.0);
    }
    for p in r["focal"].as_array().unwrap() {
        assert_eq!(p["ratio"].as_f64().unwrap(), 1.0);
    }
    assert!(out.is_dir());
}

#[test]
fn compare_rejects_different_grids() {
    let tmp = TempDir::new().unwrap();
    run_ok(tmp.path(), "figure1-harmonic-rays", "a");
    let text = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/figure1-harmonic-rays.toml"),
    )
    .unwrap()
    .replace("points = 64", "points = 32");
    let cfg = write(tmp.path(), "coarse.toml", &text);
    run_ok(tmp.path(), &cfg, "b");
    let o = semiwig(&["compare", "a", "b", "--out", "cmp"], tmp.path());
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("comparability error: grid mismatch"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn compare_detects_tampering() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(tmp.path(), "figure1-harmonic-rays", "a");
    fs::write(
        a.join("focal.csv"),
        "eps,mu,nu,t,expansion,terms,amplitude\n",
    )
    .unwrap();
    let o = semiwig(&["compare", "a", "a", "--out", "cmp"], tmp.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
}

/// Runs both expansions of a `μ = ε^exponent` scenario and returns the comparison report.
fn focal_comparison(tmp: &Path, exponent: f64) -> Value {
    let potential = format!("kind = \"quartic\"\nmu = {{ coef = 1.0, exponent = {exponent} }}");
    for m in ["harmonic", "classical"] {
        let text = scenario(
            m,
            "[0.1, 0.05]",
            "[]",
            m,
            &potential,
            "\n[focal]\nindices = [1]\n",
        );
        let cfg = write(tmp, &format!("{m}.toml"), &text);
        run_ok(tmp, &cfg, m);
    }
    let o = semiwig(&["compare", "harmonic", "classical", "--out", "cmp"], tmp);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    json(tmp.join("cmp/report.json"))
}

#[test]
fn linear_coupling_gives_the_same_focal_effect() {
    let tmp = TempDir::new().unwrap();
    let r = focal_comparison(tmp.path(), 1.0);
    let focal = r["focal"].as_array().unwrap();
    assert_eq!(focal.len(), 2);
    for p in focal {
        let ratio = p["ratio"].as_f64().unwrap();
        assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
        assert_eq!(p["same_order"], true);
    }
}

#[test]
fn square_root_coupling_flags_an_order_mismatch() {
    let tmp = TempDir::new().unwrap();
    let r = focal_comparison(tmp.path(), 0.5);
    let s = &r["scaling"][0];
    assert!((s["slope_a"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!(s["slope_b"].as_f64().unwrap() > -0.9);
    assert_eq!(s["order_mismatch"], true);
}

#[test]
fn coverage_failures_exit_with_four() {
    let tmp = TempDir::new().unwrap();
    let text = scenario(
        "edge",
        "[0.1]",
        "[1.0]",
        "harmonic",
        "kind = \"harmonic\"",
        "",
    )
    .replace(
        "kind = \"wkb-gauss-fresnel\"",
        "kind = \"coherent\"\nx0 = 3.7\nk0 = 0.0",
    )
    .replace(
        "expansion = \"harmonic\"",
        "expansion = \"harmonic\"\noracle = true",
    );
    let o = semiwig(
        &["run", &write(tmp.path(), "edge.toml", &text), "--out", "o"],
        tmp.path(),
    );
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("coverage error"));
}

#[test]
fn oracle_remainders_shrink_with_order() {
    let tmp = TempDir::new().unwrap();
    let text = scenario(
        "oracle",
        "[0.1]",
        "[1.0]",
        "harmonic",
        "kind = \"quartic\"\nmu = 0.1",
        "",
    )
    .replace(
        "kind = \"wkb-gauss-fresnel\"",
        "kind = \"coherent\"\nx0 = 0.5\nk0 = 0.0",
    )
    .replace(
        "expansion = \"harmonic\"",
        "expansion = \"harmonic\"\norder = 2\noracle = true",
    )
    .replace(
        "half_width = 4.0\npoints = 64",
        "half_width = 5.0\npoints = 256",
    );
    let out = run_ok(tmp.path(), &write(tmp.path(), "o.toml", &text), "o");
    let r = rows(out.join("remainder.csv"));
    let at = |order: &str| -> f64 {
        r.iter().find(|l| l[1] == "1" && l[3] == order).unwrap()[5]
            .parse()
            .unwrap()
    };
    assert!(at("2") < 0.2 * at("0"), "{} vs {}", at("2"), at("0"));
}

#[test]
fn custom_samples_match_the_closed_form_start() {
    let tmp = TempDir::new().unwrap();
    let eps = 0.1f64;
    let mut csv = String::from("x,re,im\n");
    for i in 0..64 {
        let x = -4.0 + 0.125 * i as f64;
        let a = (PI * eps).powf(-0.25) * (-(x - 0.5) * (x - 0.5) / (2.0 * eps)).exp();
        csv.push_str(&format!("{x},{a},0\n"));
    }
    write(tmp.path(), "psi.csv", &csv);
    let closed = scenario(
        "coherent",
        "[0.1]",
        "[]",
        "classical",
        "kind = \"harmonic\"",
        "",
    )
    .replace(
        "kind = \"wkb-gauss-fresnel\"",
        "kind = \"coherent\"\nx0 = 0.5\nk0 = 0.0",
    );
    let sampled = closed.replace(
        "kind = \"coherent\"\nx0 = 0.5\nk0 = 0.0",
        "kind = \"samples\"\nfile = \"psi.csv\"",
    );
    run_ok(
        tmp.path(),
        &write(tmp.path(), "closed.toml", &closed),
        "closed",
    );
    run_ok(
        tmp.path(),
        &write(tmp.path(), "sampled.toml", &sampled),
        "sampled",
    );
    let o = semiwig(
        &["compare", "closed", "sampled", "--out", "cmp"],
        tmp.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(tmp.path().join("cmp/report.json"));
    let d = r["fields"][0]["max_density_delta"].as_f64().unwrap();
    assert!(d < 1e-6, "density delta {d}");
}

#[test]
fn thread_variable_is_checked() {
    let tmp = TempDir::new().unwrap();
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_semiwig"))
            .args(["validate", "figure1-harmonic-rays"])
            .env("SEMIWIG_THREADS", v)
            .current_dir(tmp.path())
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1")), 0);
    assert_eq!(code(&run("zero")), 2);
    assert_eq!(code(&run("0")), 2);
}

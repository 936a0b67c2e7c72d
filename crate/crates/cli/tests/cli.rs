use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn configeo(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_configeo"))
        .current_dir(dir)
        .env_remove("CONFIGEO_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const SQUARE: &str = "pointset v1 d=2 n=4\n0 0\n1 0\n0 1\n1 1\n";

const COUNT_CFG: &str = "\
command = count
seed = 7
output_dir = out
[generator]
kind = lattice
d = 2
m = 20
[query]
family = simplex
k = 1
t = 0.5
delta = 0.01
";

#[test]
fn count_square_corners() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "square.txt", SQUARE);
    let out = configeo(
        tmp.path(),
        &["count", "--points", "square.txt", "--family", "simplex", "--k", "1", "--t", "1", "--delta", "0.01", "--out", "res"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("res/count.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "simplex");
    assert_eq!(row[6], "8");
    assert!(String::from_utf8_lossy(&out.stdout).contains("count = 8"));
}

#[test]
fn missing_target_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.cfg", &COUNT_CFG.replace("t = 0.5\n", ""));
    let out = configeo(tmp.path(), &["--config", "c.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("query.t"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn syntax_error_names_line() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.cfg", "command = count\n[generator\n");
    let out = configeo(tmp.path(), &["--config", "c.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn seed_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.cfg", COUNT_CFG);
    let out = configeo(tmp.path(), &["--config", "c.cfg", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let manifest = fs::read_to_string(tmp.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("\nseed = 42\n"), "{manifest}");

    write(tmp.path(), "c.cfg", &COUNT_CFG.replace("seed = 7\n", ""));
    let out = Command::new(env!("CARGO_BIN_EXE_configeo"))
        .current_dir(tmp.path())
        .env("CONFIGEO_SEED", "99")
        .args(["--config", "c.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let manifest = fs::read_to_string(tmp.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("\nseed = 99\n"), "{manifest}");
}

#[test]
fn set_flag_overrides_file() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.cfg", COUNT_CFG);
    let out = configeo(tmp.path(), &["--config", "c.cfg", "--set", "generator.m=10", "--threads", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("out/count.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("simplex,1,2,100,"));
}

#[test]
fn coplanar_volume_scan_is_inconclusive() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "command = scan\nseed = 3\n[scan]\ngenerator = coplanar\nd = 3\nschedule = 30, 36, 42\n[query]\nfamily = volume\nt = 0.2\n";
    write(tmp.path(), "c.cfg", cfg);
    let out = configeo(tmp.path(), &["--config", "c.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("inconclusive"));
}

#[test]
fn sphere_decay_exponent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "command = ft\n[ft]\nmeasure = sphere\nd = 3\nradius_min = 10\nradius_max = 1000\nradius_step = 0.05\n";
    write(tmp.path(), "c.cfg", cfg);
    let out = configeo(tmp.path(), &["--config", "c.cfg"]);
    assert_eq!(out.status.code(), Some(0));
    let txt = fs::read_to_string(tmp.path().join("out/ft.txt")).unwrap();
    let line = txt.lines().find(|l| l.starts_with("fitted_exponent:")).unwrap();
    let v: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!((v - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn unknown_command_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = configeo(tmp.path(), &["plot"]);
    assert_eq!(out.status.code(), Some(2));
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let configs = [
        "command = count\nseed = 5\n[generator]\nkind = uniform_random\nd = 2\nn = 80\n[query]\nfamily = simplex\nk = 2\nt = 0.3, 0.4, 0.5\ndelta = 0.05\n",
        "command = gen\nseed = 5\n[generator]\nkind = homogeneous\nd = 2\nn = 50\n",
        "command = scan\nseed = 5\n[scan]\ngenerator = random\nd = 2\nschedule = 40, 60, 80\n[query]\nfamily = simplex\nk = 1\n",
        "command = ft\nseed = 5\n[ft]\nmeasure = triangle2d\nmethod = montecarlo\nsamples = 20000\nradii = 1, 2, 4, 8, 16\n",
        "command = energy\n[generator]\nkind = cantor\nd = 2\nratio = 0.25\nlevel = 3\n[energy]\ns = 0.5, 1\n",
    ];
    for cfg in configs {
        let tmp = tempfile::tempdir().unwrap();
        write(tmp.path(), "c.cfg", cfg);
        let first = configeo(tmp.path(), &["--config", "c.cfg"]);
        let a = snapshot(&tmp.path().join("out"));
        let second = configeo(tmp.path(), &["--config", "c.cfg", "--threads", "1"]);
        let b = snapshot(&tmp.path().join("out"));
        assert_eq!(first.status.code(), second.status.code(), "{cfg}");
        assert!(a.len() >= 2, "{cfg}");
        // The thread count is part of the manifest, so compare reports only.
        let reports = |v: &[(String, Vec<u8>)]| {
            v.iter().filter(|(n, _)| n != "manifest.txt").cloned().collect::<Vec<_>>()
        };
        assert_eq!(reports(&a), reports(&b), "{cfg}");
        let third = configeo(tmp.path(), &["--config", "c.cfg"]);
        assert_eq!(third.status.code(), first.status.code());
        assert_eq!(snapshot(&tmp.path().join("out")), a, "{cfg}");
    }
}

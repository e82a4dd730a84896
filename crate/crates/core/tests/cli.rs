mod common;

use std::process::Command;

use common::*;

fn persim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_persim"))
}

#[test]
fn compare_same_file_twice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.png");
    write_png(&texture(48, 64), &path);
    let out = persim().arg("compare").arg(&path).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("persim\t1\n"), "{text}");
    assert!(text.contains("rmse\t0\n"));
    assert!(text.contains("psnr\t100\n"));
}

#[test]
fn compare_json_has_all_scores() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.png"), dir.path().join("b.bmp"));
    let img = natural();
    write_png(&img, &a);
    write_png(&blur(&img, 2.0), &b);
    let out = persim().args(["compare", "--json"]).arg(&a).arg(&b).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["persim", "persim_sr", "logsim", "psnr", "rmse"] {
        assert!(v[key].is_f64(), "{key}");
    }
    assert!(v["persim"].as_f64().unwrap() < 1.0);
    assert!(v["psnr"].as_f64().unwrap().is_finite());
    assert_eq!(v["config_fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn compare_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.png"), dir.path().join("b.png"));
    write_png(&texture(40, 40), &a);
    write_png(&texture(40, 50), &b);
    let mismatch = persim().arg("compare").arg(&a).arg(&b).output().unwrap();
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("dimension mismatch"));
    let missing = persim().arg("compare").arg(&a).arg(dir.path().join("nope.png")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let usage = persim().arg("compare").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "pooling_power = 0.1\n").unwrap();
    let bad = persim().arg("compare").arg(&a).arg(&a).arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn config_file_changes_scores() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.png"), dir.path().join("b.png"));
    let img = texture(48, 48);
    write_png(&img, &a);
    write_png(&add_noise(&img, 10.0, 1), &b);
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "pooling_power = 1.0\n").unwrap();
    let run = |extra: &[&std::path::Path]| {
        let mut cmd = persim();
        cmd.args(["compare", "--json"]).arg(&a).arg(&b);
        if let Some(p) = extra.first() {
            cmd.arg("--config").arg(p);
        }
        let v: serde_json::Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["persim"].as_f64().unwrap()
    };
    let (default, linear) = (run(&[]), run(&[&cfg]));
    assert!((default - linear.powf(25.0)).abs() < 1e-12);
}

#[test]
fn evaluate_writes_report_and_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_ladder_database(dir.path(), &[("tex", texture(48, 64))], false);
    let (report, scatter) = (dir.path().join("r.json"), dir.path().join("s.csv"));
    let out = persim()
        .args(["evaluate", "--metrics", "persim,logsim,psnr", "--jobs", "2", "--manifest"])
        .arg(&manifest)
        .arg("--out")
        .arg(&report)
        .arg("--scatter")
        .arg(&scatter)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("SROCC") && table.contains("persim"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 8);
    assert_eq!(std::fs::read_to_string(&scatter).unwrap().lines().count(), 9);

    let csv = persim().args(["evaluate", "--csv", "--metrics", "psnr", "--manifest"]).arg(&manifest).output().unwrap();
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("metric,category,n,plcc,rmse,srocc,kcc,b1"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn evaluate_rejects_bad_manifest_and_metric() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    std::fs::write(&path, "ref,dist,score,distortion,category\nx.png,y.png,oops,a,b\n").unwrap();
    let out = persim().args(["evaluate", "--manifest"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2, column score") && err.contains("x.png"), "{err}");
    let out = persim().args(["evaluate", "--metrics", "ssim", "--manifest"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn default_config_round_trips() {
    let out = persim().arg("default-config").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(persim::PersimConfig::from_toml_str(&text).unwrap(), persim::PersimConfig::default());
}

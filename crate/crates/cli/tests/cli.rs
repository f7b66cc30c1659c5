use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn thurston(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thurston")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV artifact (comment lines and the header dropped).
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn stderr_error(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr carries one JSON document")
}

#[test]
fn annulus_stretch_trajectory() {
    let o = thurston(&["stretch", "--annulus", "l=1,tau=0", "--pattern", "opposite+", "--t", "ln2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# thurston stretch-annulus csv v1\n# annulus=l=1,tau=0\n# pattern=opposite+\n"));
    let last = rows(&text).pop().unwrap();
    let ell: f64 = last[2].parse().unwrap();
    let tau: f64 = last[3].parse().unwrap();
    assert!((ell - 2.0).abs() < 1e-12);
    assert!((tau - 1.5438758).abs() < 1e-5);
}

#[test]
fn surface_stretch_certificates_pass() {
    let o = thurston(&["stretch", "--surface", "markov333", "--pattern", "opposite-", "--t", "0.5", "--steps", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for r in rows(&stdout(&o)) {
        assert_eq!(r[7], "false");
    }
}

#[test]
fn distance_to_self_is_zero() {
    let o = thurston(&["distance", "--x", "markov333", "--y", "markov333", "--depth", "7"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["params"]["depth"], 7);
    assert_eq!(v["per_depth"].as_array().unwrap().len(), 6);
}

#[test]
fn backtime_converges_to_intersections() {
    let o = thurston(&["backtime", "--smax", "25", "--probes", "1/0,1/1,2/1"]);
    assert!(o.status.success());
    let last = rows(&stdout(&o)).pop().unwrap();
    for (k, i) in [1.0, 1.0, 2.0].iter().enumerate() {
        let v: f64 = last[4 + k].parse().unwrap();
        assert!((v - i).abs() / i < 0.02);
    }
}

#[test]
fn norm_and_extraction_and_width() {
    let o = thurston(&["norm", "--x", "chart:1.2,0.3", "--v", "-0.5,1", "--depth", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["value"].as_f64().unwrap() > 0.0);

    let o = thurston(&["extract-length", "--m-max", "6"]);
    assert!(o.status.success());
    assert_eq!(rows(&stdout(&o)).len(), 6);

    let o = thurston(&["twist-width", "--regime", "all", "--steps", "7"]);
    let text = stdout(&o);
    assert_eq!(rows(&text).len(), 4 * 8);
    assert_eq!(text.matches("monotone_decreasing=true").count(), 4);
}

#[test]
fn convex_fixtures_and_files() {
    let o = thurston(&["convex", "analyze", "--fixture", "stadium"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let x = v["faces"].as_array().unwrap().iter().find(|f| f["id"] == "x").unwrap();
    assert_eq!((x["dim"].as_u64(), x["fdim"].as_u64(), x["closure"].as_str()), (Some(0), Some(1), Some("e")));

    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.json");
    fs::write(&square, r#"{"schema_version":1,"points":[[0,0],[2,0],[2,2],[0,2]]}"#).unwrap();
    let sq = square.to_str().unwrap();
    let o = thurston(&["convex", "analyze", "--points", sq, "--query", "0,1;0,0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["queries"][0]["dim"], 1);
    assert_eq!(v["queries"][1]["dim"], 0);

    // the square is not centred, so its polar is undefined
    let o = thurston(&["convex", "dual", "--points", sq]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_error(&o)["error"]["kind"], "origin_not_interior");
}

#[test]
fn input_errors_exit_three_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    for args in [
        vec!["distance", "--x", bad.to_str().unwrap(), "--y", "markov333"],
        vec!["stretch", "--annulus", "l=-1,tau=0", "--t", "1"],
        vec!["stretch", "--annulus", "l=1,tau=0", "--t", "1", "--pattern", "sideways"],
        vec!["norm", "--x", "markov333", "--v", "1,0", "--fd-step", "0.5"],
        vec!["convex", "analyze", "--poset", bad.to_str().unwrap()],
        vec!["frobnicate"],
    ] {
        let o = thurston(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        let e = stderr_error(&o);
        assert_eq!(e["schema_version"], 1);
        assert!(e["error"]["kind"].is_string() && e["error"]["message"].is_string());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn validation_flag_exits_two() {
    // a coarse rationalization grid swallows the shallowest hull vertices
    let o = thurston(&["dual-sphere", "--denominator", "1000000000"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error(&o)["validation"]["kind"], "validation_flag");
    assert!(!o.stdout.is_empty());
    let o = thurston(&["dual-sphere"]);
    assert!(o.status.success());
}

fn hash_of(path: &Path) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    fs::read(path).unwrap().hash(&mut h);
    h.finish()
}

#[test]
fn identical_arguments_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["convex", "invariance", "--polytopes", "2", "--maps", "5", "--seed", "11"],
        &["primal-sphere", "--directions", "360", "--depth", "4"],
        &["backtime", "--smax", "10", "--steps", "40"],
        &["distance", "--x", "chart:1,0.3", "--y", "chart:1.4,-0.2", "--depth", "6"],
    ];
    for args in runs {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        for p in [&a, &b] {
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            assert!(thurston(&full).status.success(), "{args:?}");
        }
        assert_eq!(hash_of(&a), hash_of(&b), "{args:?}");
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let other = dir.path().join("c.out");
    let same = dir.path().join("d.out");
    thurston(&["convex", "invariance", "--maps", "3", "--seed", "1", "--out", other.to_str().unwrap()]);
    thurston(&["convex", "invariance", "--maps", "3", "--seed", "2", "--out", same.to_str().unwrap()]);
    assert_ne!(hash_of(&other), hash_of(&same));
}

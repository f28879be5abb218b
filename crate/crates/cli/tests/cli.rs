use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn ivol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entries(v: &Value) -> &Vec<Value> {
    v["results"]["entries"].as_array().unwrap()
}

#[test]
fn disk_perimeter_half() {
    let v = json(&ivol(&["vk", "--semiaxes", "1,1", "--k", "1"]));
    let e = &entries(&v)[0];
    assert_eq!(e["k"], 1);
    assert!((e["value"].as_f64().unwrap() - PI).abs() < 1e-13);
    assert_eq!(v["command"][0], "vk");
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn all_k_top_entry_is_volume() {
    let v = json(&ivol(&["vk", "--semiaxes", "3,2,1", "--all"]));
    let es = entries(&v);
    assert_eq!(es.len(), 4);
    assert_eq!(es[0]["value"].as_f64().unwrap(), 1.0);
    let v3 = es[3]["value"].as_f64().unwrap();
    assert!((v3 - 8.0 * PI).abs() < 1e-12 * v3);
}

#[test]
fn zero_semiaxis_is_rejected() {
    let out = ivol(&["vk", "--semiaxes", "1,0", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("semiaxis"), "{msg}");
    assert!(out.stdout.is_empty());
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        &["vk", "--semiaxes", "1,2", "--k", "3"][..],
        &["vk", "--semiaxes", "1,2", "--backend", "nope"],
        &["vk"],
        &["simplex", "gaussian", "--eigenvalues", "1,-1", "--k", "1"],
        &["steiner", "--semiaxes", "1,1", "--r", "-1"],
        &["verify", "--suite", "ball", "--samples", "1"],
    ] {
        assert_eq!(ivol(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn backends_agree() {
    let base = ["vk", "--semiaxes", "2,1.5,0.5", "--all"];
    let reference = json(&ivol(&base));
    for backend in ["quadrature", "duality", "rfunction"] {
        let mut args = base.to_vec();
        args.extend(["--backend", backend]);
        let v = json(&ivol(&args));
        for (a, b) in entries(&v).iter().zip(entries(&reference)) {
            let (x, y) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
            assert!((x - y).abs() < 1e-9 * y, "{backend}: {x} vs {y}");
        }
    }
    for backend in ["sphere-mc", "gram-mc"] {
        let mut args = base.to_vec();
        args.extend(["--backend", backend, "--samples", "200000", "--seed", "3"]);
        let v = json(&ivol(&args));
        for (a, b) in entries(&v).iter().zip(entries(&reference)).skip(1) {
            assert_eq!(a["error_kind"], "statistical");
            let (x, y) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
            assert!(
                (x - y).abs() < 4.0 * a["error"].as_f64().unwrap(),
                "{backend}: {x} vs {y}"
            );
        }
    }
}

fn without_wall_time(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn deterministic_apart_from_wall_time() {
    let args = [
        "vk",
        "--semiaxes",
        "2,1,1",
        "--k",
        "2",
        "--backend",
        "sphere-mc",
        "--samples",
        "100000",
        "--seed",
        "9",
    ];
    let a = without_wall_time(&ivol(&args));
    let mut threaded = vec!["--threads", "1"];
    threaded.extend(args);
    let b = without_wall_time(&ivol(&threaded));
    assert_eq!(a["results"], b["results"]);
    let c = without_wall_time(&ivol(&args));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&c).unwrap()
    );
}

#[test]
fn json_round_trips() {
    let out = ivol(&["vk", "--semiaxes", "0.7,1.3,2.9", "--all"]);
    let v = json(&out);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["command", "inputs", "results", "version", "wall_time_ms"]
    );
}

#[test]
fn csv_layout() {
    let out = ivol(&["vk", "--semiaxes", "3,2,1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,value,error,error_kind,backend,samples");
    assert_eq!(lines.len(), 5);
    let last: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(last[0], "3");
    assert!((last[1].parse::<f64>().unwrap() - 8.0 * PI).abs() < 1e-12);
}

#[test]
fn simplex_disk_mean_distance() {
    let v = json(&ivol(&[
        "simplex",
        "uniform",
        "--semiaxes",
        "1,1",
        "--k",
        "1",
        "--oracle",
        "--samples",
        "200000",
    ]));
    let es = entries(&v);
    assert_eq!(es.len(), 2);
    let formula = es[0]["value"].as_f64().unwrap();
    assert!((formula - 128.0 / (45.0 * PI)).abs() < 1e-8);
    assert!(v["results"]["z_score"].as_f64().unwrap() < 4.0);
}

#[test]
fn gaussian_identity_spectrum() {
    // mean Gaussian distance in R^2: 2 Γ(3/2) / Γ(1) = sqrt(π)
    let v = json(&ivol(&[
        "simplex",
        "gaussian",
        "--eigenvalues",
        "1,1",
        "--k",
        "1",
    ]));
    let x = entries(&v)[0]["value"].as_f64().unwrap();
    assert!((x - PI.sqrt()).abs() < 1e-10);
}

#[test]
fn steiner_disk() {
    let v = json(&ivol(&["steiner", "--semiaxes", "1,1", "--r", "1"]));
    let x = entries(&v)[0]["value"].as_f64().unwrap();
    assert!((x - 4.0 * PI).abs() < 1e-12);
}

#[test]
fn verify_suite_passes() {
    let out = ivol(&[
        "verify",
        "--suite",
        "simplex",
        "--samples",
        "100000",
        "--seed",
        "1",
    ]);
    let v = json(&out);
    assert_eq!(v["results"]["passed"], true);
    assert_eq!(v["results"]["suites"][0]["suite"], "simplex");
}

use std::process::{Command, Output};

use gbe_core::density::SmoothedDensity;
use gbe_core::moments::MomentPoly;
use gbe_core::reference;
use gbe_core::spectral::SpectralExpr;
use serde_json::Value;

fn gbe(args: &[&str]) -> Output {
    gbe_env(args, &[])
}

fn gbe_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gbe"));
    for var in [
        "GBE_G",
        "GBE_CONVENTION",
        "GBE_FORMAT",
        "GBE_OUT",
        "GBE_THREADS",
    ] {
        cmd.env_remove(var);
    }
    cmd.args(args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn moments_latex_is_the_m6_line() {
    let out = stdout(&gbe(&["moments", "--p", "3", "--format", "latex"]));
    assert_eq!(out.trim(), reference::moment(3).to_latex());
    assert!(out.starts_with("m_{6} = 5 N^{4}+22 N^{3}"));
}

#[test]
fn resolvent_json_round_trips() {
    let v = json(&gbe(&["resolvent", "--lmax", "2", "--format", "json"]));
    assert_eq!(v["schema"], "gbe/1");
    let ws = v["coefficients"].as_array().unwrap();
    assert_eq!(ws.len(), 3);
    for (l, w) in ws.iter().enumerate() {
        assert_eq!(SpectralExpr::from_json(w).unwrap(), reference::resolvent(l));
    }
}

#[test]
fn resolvent_text_reparses() {
    let out = stdout(&gbe(&["resolvent", "--lmax", "3", "--format", "text"]));
    for (l, line) in out.lines().enumerate() {
        assert_eq!(
            line.parse::<SpectralExpr>().unwrap(),
            reference::resolvent(l)
        );
    }
}

#[test]
fn density_and_moment_json_round_trip() {
    let v = json(&gbe(&["density", "--l", "3"]));
    assert_eq!(
        SmoothedDensity::from_json(&v).unwrap(),
        reference::density(3)
    );
    let v = json(&gbe(&["moments", "--p", "4", "--n", "3", "--kappa", "1/2"]));
    assert_eq!(MomentPoly::from_json(&v).unwrap(), reference::moment(4));
    assert_eq!(
        v["value"],
        reference::moment(4)
            .eval(&3.into(), &gbe_core::arith::Rational::new(1, 2))
            .to_string()
    );
}

#[test]
fn integrate_reports_exact_orders() {
    let out = stdout(&gbe(&[
        "integrate",
        "--stat",
        "poly:4",
        "--lmax",
        "2",
        "--format",
        "csv",
    ]));
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    // leading order g² C₂ = 2/16
    assert_eq!(rows[0][2], "1/8");
    assert_eq!(rows.len(), 3);
    let v = json(&gbe(&[
        "integrate",
        "--stat",
        "cos:1",
        "--lmax",
        "2",
        "--n",
        "20",
    ]));
    assert!(v["orders"][0]["exact"].is_null());
    assert!(v["total"].as_f64().unwrap() > 0.0);
}

#[test]
fn mc_csv_is_deterministic_across_threads() {
    let args = [
        "mc",
        "--n",
        "6",
        "--beta",
        "2.5",
        "--samples",
        "5000",
        "--p",
        "3",
        "--seed",
        "42",
    ];
    let one = stdout(&gbe(&args));
    let mut more = args.to_vec();
    more.extend(["--threads", "3"]);
    assert_eq!(stdout(&gbe(&more)), one);
    let mut lines = one.lines();
    assert_eq!(lines.next(), Some("p,estimate,stderr,exact,z"));
    let row: Vec<f64> = lines
        .nth(1)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(row[0], 1.0);
    // starred, g = 1/4: m₂* = (g/N) m₂
    let m2 = 36.0 + 6.0 * (1.0 / 1.25 - 1.0);
    assert!((row[3] - m2 / 24.0).abs() < 1e-12);
}

#[test]
fn flags_override_environment() {
    let env = [("GBE_CONVENTION", "unscaled")];
    let args = [
        "mc",
        "--n",
        "3",
        "--beta",
        "2",
        "--samples",
        "200",
        "--p",
        "1",
    ];
    let exact = |o: &Output| {
        stdout(o)
            .lines()
            .nth(2)
            .unwrap()
            .split(',')
            .nth(3)
            .unwrap()
            .to_string()
    };
    assert_eq!(exact(&gbe_env(&args, &env)), "9");
    let mut flagged = args.to_vec();
    flagged.extend(["--convention", "starred"]);
    assert_eq!(exact(&gbe_env(&flagged, &env)), "0.75");
    let g = [("GBE_G", "1/2")];
    assert_eq!(exact(&gbe_env(&args, &g)), "1.5");
}

#[test]
fn usage_errors_exit_with_two_and_name_the_flag() {
    for (args, flag) in [
        (
            vec!["mc", "--n", "4", "--beta", "1", "--format", "latex"],
            "--format",
        ),
        (
            vec!["mc", "--n", "4", "--beta", "1", "--threads", "0"],
            "--threads",
        ),
        (vec!["integrate", "--stat", "sin:2"], "--stat"),
        (vec!["--g", "0", "density", "--l", "1"], "--g"),
        (vec!["moments", "--p", "2", "--n", "3"], "--kappa"),
    ] {
        let o = gbe(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("gbe-cli-{}.json", std::process::id()));
    let o = gbe(&["density", "--l", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(
        SmoothedDensity::from_json(&v).unwrap(),
        reference::density(2)
    );
}

#[test]
fn classical_suite_passes_at_low_order() {
    let o = gbe(&[
        "verify",
        "--suite",
        "classical",
        "--pmax",
        "4",
        "--threads",
        "2",
    ]);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
    let single = gbe(&["verify", "--suite", "classical", "--pmax", "4"]);
    assert_eq!(json(&single), v);
}

#[test]
fn golden_suite_passes() {
    let o = gbe(&[
        "verify",
        "--suite",
        "golden",
        "--pmax",
        "8",
        "--threads",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    for id in [
        "resolvent/W1^6",
        "density/rho6",
        "moments/m20",
        "classical/GOE/N8/triple",
    ] {
        assert!(ids.contains(&id), "{id}");
    }
}

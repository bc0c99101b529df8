use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

/// Closed-form price of the default contract, from a 50-digit evaluation.
const CLOSED_DEFAULT: f64 = 0.001_694_902_675_223_563_3;

fn adopt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adopt"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn adopt")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const DECAYING_VOL: [&str; 18] = [
    "--spot", "0.7417", "--sigma", "0.8723", "--kappa", "96.4953", "--theta", "0.2959", "--delta", "14.9874",
    "--expiry", "0.0384", "--steps", "14", "--ctr", "0.03", "--strike", "0.0247233333333",
];

#[test]
fn price_closed_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&adopt(dir.path(), &["price", "--method", "closed"]));
    assert_eq!(v["method"], "closed");
    assert!((v["price"].as_f64().unwrap() / CLOSED_DEFAULT - 1.0).abs() < 1e-11);
    assert_eq!(v["contract"]["strike_basis"], "per-click");
}

#[test]
fn price_sv_lattice_below_crr() {
    let dir = tempfile::tempdir().unwrap();
    let price = |method: &str| {
        let mut args = vec!["price", "--method", method];
        args.extend(DECAYING_VOL);
        json(&adopt(dir.path(), &args))["price"].as_f64().unwrap()
    };
    assert!(price("sv-lattice") < price("crr"));
}

#[test]
fn price_mc_reports_interval() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&adopt(
        dir.path(),
        &["price", "--method", "mc-euler", "--paths", "20000", "--steps", "20"],
    ));
    let mc = &v["monte_carlo"];
    let (lo, hi) = (mc["ci_low"].as_f64().unwrap(), mc["ci_high"].as_f64().unwrap());
    assert!(lo < v["price"].as_f64().unwrap() && v["price"].as_f64().unwrap() < hi);
    assert!(lo <= CLOSED_DEFAULT && CLOSED_DEFAULT <= hi);
    assert_eq!(mc["n_paths"], 20000);
}

#[test]
fn unknown_method_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = adopt(dir.path(), &["price", "--method", "bogus", "--out", "p.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("p.json").exists());
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["price", "--method", "crr", "--sigma", "-1"][..],
        &["price", "--method", "crr", "--ctr", "1.5"],
        &["price", "--method", "boyle-trin", "--lambda", "0.5"],
        &["converge", "--n", "100,10"],
    ] {
        assert_eq!(adopt(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn converge_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = adopt(dir.path(), &["converge"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(rdr.headers().unwrap(), vec!["method", "n", "price", "abs_error"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 18);
    let err = |m: &str| -> f64 {
        rows.iter().find(|r| &r[0] == m && &r[1] == "100").unwrap()[3].parse().unwrap()
    };
    assert!(err("tian-trin") < err("crr"));

    assert_eq!(adopt(dir.path(), &["converge", "--methods", ""]).status.code(), Some(2));
    assert_eq!(adopt(dir.path(), &["converge", "--methods", "crr,nope"]).status.code(), Some(2));
}

fn write_series(path: &Path, prices: &[f64]) {
    let start = chrono::NaiveDate::from_ymd_opt(2013, 1, 1).unwrap();
    let mut s = String::from("date,price\n");
    for (i, p) in prices.iter().enumerate() {
        s += &format!("{},{p}\n", start + chrono::Days::new(i as u64));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn diagnose_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    // Deterministic, roughly normal log-returns.
    let mut p = vec![1.0];
    for i in 1..80 {
        let z = ((i * 7919) % 101) as f64 / 101.0 - 0.5;
        p.push(p[i - 1] * (0.03 * z).exp());
    }
    write_series(&dir.path().join("s.csv"), &p);
    let v = json(&adopt(dir.path(), &["diagnose", "--input", "s.csv", "--out-dir", "out", "--lags", "5"]));
    assert_eq!(v["observations"], 80);
    assert_eq!(v["lags"], 5);
    assert!(v["shapiro_w"].as_f64().unwrap() <= 1.0);
    assert!(v["gbm_estimate"]["sigma"].as_f64().unwrap() > 0.0);
    let out = dir.path().join("out");
    let acf = std::fs::read_to_string(out.join("acf.csv")).unwrap();
    assert_eq!(acf.lines().count(), 7);
    assert_eq!(std::fs::read_to_string(out.join("qq.csv")).unwrap().lines().count(), 80);
    let hist = std::fs::read_to_string(out.join("hist.csv")).unwrap();
    let total: usize = hist.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 79);
}

#[test]
fn diagnose_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_series(&dir.path().join("one.csv"), &[1.0]);
    let out = adopt(dir.path(), &["diagnose", "--input", "one.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("need at least 2 observations"), "{}", stderr(&out));

    std::fs::write(dir.path().join("bad.csv"), "date,price\n2013-01-01,1\n2013-01-02,abc\n").unwrap();
    let out = adopt(dir.path(), &["diagnose", "--input", "bad.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    assert_eq!(adopt(dir.path(), &["diagnose", "--input", "one.csv", "--alpha", "2"]).status.code(), Some(2));
}

#[test]
fn validate_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = adopt(
        dir.path(),
        &["validate", "--sweep", "kappa=1:6:3", "--scheme", "euler", "--paths", "4000", "--mc-steps", "50"],
    );
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme,param,value,lattice_price,mc_price,ci_low,ci_high,verdict");
    assert_eq!(lines.len(), 4);
    let all_in = lines[1..].iter().all(|l| l.ends_with(",contained"));
    assert_eq!(out.status.code(), Some(if all_in { 0 } else { 1 }));

    for bad in ["kappa=1:6:0", "rho=1:2:3", "kappa=1:6", "kappa=-1:1:2"] {
        assert_eq!(adopt(dir.path(), &["validate", "--sweep", bad]).status.code(), Some(2), "{bad}");
    }
    assert_eq!(adopt(dir.path(), &["validate", "--scheme", "rk4"]).status.code(), Some(2));
}

#[test]
fn simulate_market_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.csv"),
        "date,avg_cpm,supply\n2013-02-08,0.9585,8298\n2013-02-09,0.8211,8277\n2013-02-10,0.7,8100\n",
    )
    .unwrap();
    let args = [
        "simulate", "--market", "m.csv", "--premium", "0.002", "--strike", "0.03", "--sell-ratio", "0", "--out-dir",
        "out",
    ];
    let v = json(&adopt(dir.path(), &args));
    assert_eq!(v["days"], 3);
    assert_eq!(v["revenue"]["mean"], v["revenue_without_options"]["mean"]);
    let out = dir.path().join("out");
    let revenue = std::fs::read_to_string(out.join("revenue.csv")).unwrap();
    for (line, (cpm, supply)) in revenue.lines().skip(1).zip([(0.9585, 8298.0), (0.8211, 8277.0), (0.7, 8100.0)]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[4], "0");
        let rev: f64 = f[9].parse().unwrap();
        assert!((rev - cpm * supply / 1000.0).abs() < 1e-9);
    }
    let rtb = std::fs::read_to_string(out.join("rtb.csv")).unwrap();
    assert!(rtb.lines().last().unwrap().starts_with("total,"));
    assert!(out.join("options.csv").exists());
}

#[test]
fn simulate_bull_scenario() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.json"), r#"{"model": {"kind": "gbm", "sigma": 0.5, "mu": 3}}"#).unwrap();
    let bull = (0..50)
        .map(|seed| {
            let seed = seed.to_string();
            json(&adopt(dir.path(), &["simulate", "--scenario", "s.json", "--seed", &seed, "--out-dir", "out"]))
        })
        .find(|v| v["trend"] == "bull")
        .expect("a bull market among 50 seeds");
    assert!(bull["options"]["clicks"].as_u64().unwrap() >= bull["rtb"]["clicks"].as_u64().unwrap());
    assert_eq!(bull["premiums"].as_array().unwrap().len(), 7);
}

#[test]
fn simulate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = adopt(dir.path(), &["simulate", "--market", "missing.csv", "--premium", "0.01", "--strike", "0.03"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.csv"));
    assert_eq!(adopt(dir.path(), &["simulate"]).status.code(), Some(2));
    assert_eq!(adopt(dir.path(), &["simulate", "--market", "m.csv"]).status.code(), Some(2));
    std::fs::write(dir.path().join("s.json"), r#"{"model": {"kind": "gbm", "sigma": 0.5, "mu": 3}, "budgett": 1}"#).unwrap();
    assert_eq!(adopt(dir.path(), &["simulate", "--scenario", "s.json"]).status.code(), Some(2));
}

use assert_cmd::Command;
use serde_json::Value;

fn bcff() -> Command {
    let mut c = Command::cargo_bin("bcff").unwrap();
    c.env_remove("BCFF_CACHE_DIR");
    c
}

fn json(args: &[&str]) -> Value {
    let out = bcff().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn primes_degree_four() {
    let v = json(&["primes", "--q", "2", "--d", "4"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["count"], 3);
    assert_eq!(v["result"]["necklace_count"], 3);
    assert_eq!(v["result"]["primes"].as_array().unwrap().len(), 3);
}

#[test]
fn negative_beta_is_rejected() {
    let out = bcff().args(["kms", "--q", "2", "--beta", "-1"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no KMS states for β < 0"));
}

#[test]
fn bad_flag_prints_usage() {
    let out = bcff().args(["primes", "--nope"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn ratio_set_constant_quadratic() {
    let v = json(&["ratio-set", "--q", "2", "--n", "2", "--beta", "1", "--dmax", "16"]);
    assert_eq!(v["result"]["verdict"]["kind"], "iii_lambda");
    assert_eq!(v["result"]["verdict"]["exponent"], 2);
}

#[test]
fn ratio_set_csv_rows() {
    let out = bcff()
        .args(["ratio-set", "--beta", "2", "--dmax", "10", "--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,block_count,increment,partial_sum"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn gibbs_value_is_exact() {
    let v = json(&[
        "kms",
        "--beta",
        "2",
        "--cylinder",
        r#"{"constraints":[{"prime":"T","eq":0}]}"#,
    ]);
    assert_eq!(v["result"]["value"], "3/4");
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["result"]["consistent"], true);
}

#[test]
fn decimal_beta_carries_banner() {
    let v = json(&["kms", "--beta", "0.5"]);
    assert_eq!(v["inexact"], true);
    assert!(v["banner"].as_str().unwrap().starts_with("inexact"));
    let v = json(&["kms", "--beta", "1/2"]);
    assert!(v.get("banner").is_none());
}

#[test]
fn carlitz_outputs() {
    let v = json(&["carlitz", "--phi", "T^2"]);
    assert_eq!(v["result"]["phi"], "T^2 + (T^2+T)*t + t^2");
    let v = json(&["carlitz", "--q", "3", "--torsion", "T^2,T+1"]);
    assert_eq!(v["result"]["count"], 9);
    assert_eq!(v["result"]["frobenius_action"], true);
    let v = json(&["carlitz", "--exp", "2"]);
    assert_eq!(v["result"]["functional_equation"], true);
    let out = bcff().args(["carlitz"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn bc_check_report() {
    let v = json(&["bc-check", "--q", "2", "--m", "T^2+T+1", "--dmax", "3"]);
    for k in ["bijective", "ideal_equivariant", "galois_equivariant"] {
        assert_eq!(v["result"][k], true, "{k}");
    }
}

#[test]
fn chebotarev_csv_header() {
    let out = bcff()
        .args(["chebotarev", "--n", "2", "--dmax", "6", "--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d,class,count,prediction,normalized_error\n"));
    assert!(text.contains("6,\"(0, 0)\",9,"));
}

#[test]
fn flow_rejects_zero() {
    assert!(!bcff().args(["flow", "--beta", "0"]).output().unwrap().status.success());
    let v = json(&["flow", "--beta", "1", "--n", "2"]);
    assert!((v["result"]["period_on_finite_quotient"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn prime_power_field_needs_modulus() {
    assert!(!bcff().args(["primes", "--q", "4", "--d", "2"]).output().unwrap().status.success());
    let v = json(&["primes", "--q", "4", "--modulus", "1,1,1", "--d", "2"]);
    assert_eq!(v["result"]["count"], 6);
}

#[test]
fn output_is_deterministic() {
    let args = ["zeta", "--q", "3", "--dmax", "8", "--beta", "3/2", "--exclude", "T"];
    let a = bcff().args(args).output().unwrap().stdout;
    let b = bcff().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn cache_dir_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("report.json");
    let run = || {
        bcff()
            .env("BCFF_CACHE_DIR", &cache)
            .args(["primes", "--q", "3", "--d", "3", "--out"])
            .arg(&out)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    assert!(cache.exists());
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["cache", "report.json"]);
    assert_eq!(run().stdout, first.stdout);
}

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn sw(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_superweight"));
    c.args(args).env_remove("SUPERWEIGHT_CACHE");
    if let Some(d) = cache {
        c.env("SUPERWEIGHT_CACHE", d);
    }
    c.output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SL2: &str = r#"{"algebra":{"kind":"GL","m":2,"n":0},"parabolic_l":[0,0],"lambda_blocks":[["-1/3","1/3"]],"lambda_z":"0,0","sigma":"-1/3,1/3"}"#;

#[test]
fn classify_w2_atypical_form() {
    let o = sw(&["classify", "--algebra", r#"{"kind":"W","n":2}"#, "--weight", "5,1", "--basis", "standard"], None);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["typical"], false);
    assert_eq!(v["witness_i"], 1);
}

#[test]
fn classify_reports_boundedness_with_a_parabolic() {
    // sl(3) with the gl(2) block: (−1/2, 1/2) is in normal form
    let o = sw(
        &["classify", "--algebra", r#"{"kind":"GL","m":3}"#, "--weight=-1/2,1/2,0", "--parabolic=0,0,-1"],
        None,
    );
    let v = json(&o);
    assert_eq!(v["typical"], true);
    assert_eq!(v["normal_form_valid"], true);
    assert_eq!(v["partially_finite"], false);
    assert_eq!(v["gamma_injective"], true);
}

#[test]
fn degree_of_nonintegral_sl2_block_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", SL2);
    let o = sw(&["degree", "--spec", &spec], None);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["degree"], 1);
    assert_eq!(v["d_blocks"], serde_json::json!([1]));
}

#[test]
fn char_on_torsion_free_sl2_module() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", SL2);
    let o = sw(&["char", "--spec", &spec, "--weight=-4/3,4/3"], None);
    let v = json(&o);
    assert_eq!(v["multiplicity"], 1);
    assert_eq!(v["terms"][0]["c"], 1);
    // off the coset
    let o = sw(&["char", "--spec", &spec, "--weight=0,0"], None);
    assert_eq!(json(&o)["multiplicity"], 0);
}

#[test]
fn char_fans_out_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", SL2);
    let ws = ["-1/3,1/3", "2/3,-2/3", "0,0", "-7/3,7/3"];
    let mut args = vec!["char", "--spec", spec.as_str(), "--workers", "3"];
    let flags: Vec<String> = ws.iter().map(|w| format!("--weight={w}")).collect();
    args.extend(flags.iter().map(String::as_str));
    let v = json(&sw(&args, None));
    let got: Vec<(&str, u64)> =
        v.as_array().unwrap().iter().map(|r| (r["weight"].as_str().unwrap(), r["multiplicity"].as_u64().unwrap())).collect();
    assert_eq!(got, vec![("-1/3,1/3", 1), ("2/3,-2/3", 1), ("0,0", 0), ("-7/3,7/3", 1)]);
}

#[test]
fn missing_table_is_a_provider_gap() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SL2.trim_end_matches('}').to_string() + r#","tables":{"g":"absent.jsonl"}}"#;
    let spec = write(dir.path(), "s.json", &spec);
    let o = sw(&["char", "--spec", &spec, "--weight=-1/3,1/3"], None);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"], "provider-gap");
    assert!(!v["needed"].as_array().unwrap().is_empty());
    assert!(v.get("multiplicity").is_none());
}

#[test]
fn algebra_without_builtin_data_needs_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"algebra":{"kind":"GL","m":2,"n":2},"parabolic_l":[0,0,1,1],"lambda":"-1/2,1/2|1/3,-1/3"}"#,
    );
    let o = sw(&["char", "--spec", &spec, "--weight=-1/2,1/2|1/3,-1/3"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "provider-gap");
}

#[test]
fn table_without_the_needed_row_is_a_provider_gap() {
    let dir = tempfile::tempdir().unwrap();
    let t = sw(&["tables", "export", "--algebra", r#"{"kind":"GL","m":2}"#, "--seed", "2,0"], None);
    assert!(t.status.success());
    write(dir.path(), "t.jsonl", std::str::from_utf8(&t.stdout).unwrap());
    let spec = SL2.trim_end_matches('}').to_string() + r#","tables":{"g":"t.jsonl"}}"#;
    let spec = write(dir.path(), "s.json", &spec);
    let o = sw(&["char", "--spec", &spec, "--weight=-1/3,1/3"], None);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"], "provider-gap");
    assert_eq!(v["needed"], serde_json::json!(["-1/3,1/3"]));
}

#[test]
fn usage_and_spec_errors_exit_2() {
    let o = sw(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "usage");
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", &(SL2.trim_end_matches('}').to_string() + r#","colour":"red"}"#));
    let o = sw(&["degree", "--spec", &spec], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "spec-validation");
    let o = sw(&["lab", "run", "--suite", "nope", "--depth", "4"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn not_bounded_spec_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    // (1, 0) is not in normal form: the first gap is a nonnegative integer
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"algebra":{"kind":"GL","m":2},"parabolic_l":[0,0],"lambda_blocks":[[1,-1]],"lambda_z":"0,0"}"#,
    );
    let o = sw(&["degree", "--spec", &spec], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "not-bounded");
}

#[test]
fn output_is_byte_identical_across_runs_and_cache_hits() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let spec = write(dir.path(), "s.json", SL2);
    let args = ["coeffs", "--spec", spec.as_str(), "--order-ideal", "4"];
    let plain = sw(&args, None).stdout;
    assert_eq!(sw(&args, None).stdout, plain);
    assert_eq!(sw(&args, Some(&cache)).stdout, plain);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(sw(&args, Some(&cache)).stdout, plain);
}

fn tamper(cache: &Path) {
    for e in std::fs::read_dir(cache).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "json") {
            let mut v: Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
            v["value"] = Value::String("{\"tampered\":true}".into());
            std::fs::write(&p, v.to_string()).unwrap();
        }
    }
}

#[test]
fn changed_table_invalidates_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let export = |seeds: &[&str]| {
        let mut a = vec!["tables", "export", "--algebra", r#"{"kind":"GL","m":2}"#];
        for s in seeds {
            a.push("--seed");
            a.push(s);
        }
        let o = sw(&a, None);
        assert!(o.status.success());
        write(dir.path(), "t.jsonl", std::str::from_utf8(&o.stdout).unwrap());
    };
    export(&["-1/3,1/3"]);
    let spec = write(dir.path(), "s.json", &(SL2.trim_end_matches('}').to_string() + r#","tables":{"g":"t.jsonl"}}"#));
    let args = ["char", "--spec", spec.as_str(), "--weight=2/3,-2/3"];
    let first = json(&sw(&args, Some(&cache)));
    assert_eq!(first["multiplicity"], 1);
    // a hit returns the stored bytes
    tamper(&cache);
    assert_eq!(json(&sw(&args, Some(&cache)))["tampered"], true);
    // a different table is a miss
    export(&["-1/3,1/3", "3,0"]);
    assert_eq!(json(&sw(&args, Some(&cache))), first);
}

#[test]
fn tables_round_trip_through_import() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let o = sw(&["tables", "export", "--algebra", r#"{"kind":"GL","m":3}"#, "--seed", "1,0,-1"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    // the regular integral block: one entry per Bruhat-comparable pair in S₃
    assert_eq!(text.lines().count(), 1 + 19);
    let path = write(dir.path(), "t.jsonl", &text);
    let v = json(&sw(&["tables", "import", "--file", &path], Some(&cache)));
    assert_eq!(v["entries"], 19);
    assert_eq!(v["kind"], "a");
    let stored = v["stored"].as_str().unwrap();
    assert_eq!(std::fs::read_to_string(stored).unwrap(), text);
    // a corrupted table is rejected
    let bad = write(dir.path(), "bad.jsonl", &text.replace("\"value\":1}", "\"value\":2}"));
    let o = sw(&["tables", "import", "--file", &bad], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "invariant-violation");
}

#[test]
fn w2_character_from_a_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "w.json", r#"{"algebra":{"kind":"W","n":2},"lambda":"3,1","depth":4}"#);
    let v = json(&sw(&["char", "--spec", &spec, "--weight", "3,1"], None));
    assert_eq!(v["multiplicity"], 1);
    assert!(v["terms"].as_array().unwrap().len() > 1);
    let v = json(&sw(&["coeffs", "--spec", &spec, "--order-ideal", "2"], None));
    let top: Vec<&Value> = v["coefficients"].as_array().unwrap().iter().filter(|r| r["mu"] == "3,1").collect();
    assert_eq!(top.len(), 1);
    assert_eq!(top[0]["c"], 1);
    let o = sw(&["degree", "--spec", &spec], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lab_run_reports_json() {
    let o = sw(&["lab", "run", "--suite", "theta-integer", "--depth", "6", "--seed", "3", "--cases", "4"], None);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["suite"], "theta-integer");
    assert_eq!(v["cases"], 4);
    assert_eq!(v["failures"], serde_json::json!([]));
    let again = sw(&["lab", "run", "--suite", "theta-integer", "--depth", "6", "--seed", "3", "--cases", "4"], None);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn out_flag_writes_the_result_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", SL2);
    let out = dir.path().join("r.json");
    let o = sw(&["degree", "--spec", &spec, "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["degree"], 1);
}

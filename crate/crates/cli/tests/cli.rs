use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zsring(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zsring"));
    cmd.args(args).env_remove("ZSRING_CACHE");
    if let Some(c) = cache {
        cmd.env("ZSRING_CACHE", c);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_runtime(text: &[u8]) -> String {
    String::from_utf8_lossy(text)
        .lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("runtime_ms");
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn documented_examples() {
    let t = json(&zsring(&["tfunc", "3", "2"], None));
    assert_eq!(t["value"], 3);
    assert_eq!(t["profile"], serde_json::json!([2, 1]));

    let out = zsring(&["burgess", "--ring", "Z/4", "--psi", "id"], None);
    assert!(out.status.success());
    assert_eq!(json(&out)["I"], 3);

    let out = zsring(&["verify", "--ring", "Z/4 x Z/4", "--psi", "swap(0,1)"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["equality"], true);
    assert_eq!(v["theorem"]["predicted"], "square-swap");
    assert_eq!((v["burgess"].clone(), v["davenport"].clone(), v["sigma-term"].clone()), (5.into(), 3.into(), 2.into()));
    assert_eq!(v["pass"], true);
}

#[test]
fn structure_commands() {
    let v = json(&zsring(&["idempotents", "--ring", "Z/6"], None));
    assert_eq!(v["count"], 4);
    let v = json(&zsring(&["units", "--ring", "Z/10"], None));
    assert_eq!(v["count"], 4);
    let v = json(&zsring(&["spec-primes", "--ring", "Z/12"], None));
    let primes = v["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 2);
    assert_eq!((primes[0]["index"].clone(), primes[0]["size"].clone()), (2.into(), 6.into()));
    assert_eq!((primes[1]["index"].clone(), primes[1]["size"].clone()), (1.into(), 4.into()));
    let v = json(&zsring(&["orbits", "--ring", "GF(4) x GF(4)", "--psi", "swap(0,1)"], None));
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    assert_eq!(v["orbits"][0]["size"], 2);
    let v = json(&zsring(&["davenport", "--ring", "Z/7"], None));
    assert_eq!(v["D"], 6);
}

#[test]
fn csv_columns() {
    let out = zsring(&["verify", "--ring", "Z/6", "--format", "csv"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "ring,psi,D_psi,sigma_term,I_psi,bound,equality,pass\nZ/2 x Z/3,id,2,0,2,2,true,true\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--ring", "GF(2)[x]/x^3 x Z/3", "--psi", "full"];
    let a = zsring(&args, None);
    let b = zsring(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let family = dir.path().join("family.json");
    std::fs::write(&family, r#"{"rings": ["Z/8", "Z/2 x Z/2", "GF(4)"], "psi": ["id", "full"]}"#).unwrap();
    let sweep = ["sweep", "--family", family.to_str().unwrap()];
    let a = zsring(&sweep, None);
    let b = zsring(&sweep, None);
    assert!(a.status.success());
    assert_eq!(strip_runtime(&a.stdout), strip_runtime(&b.stdout));
    assert_eq!(a.stdout.iter().filter(|&&c| c == b'\n').count(), 6);
}

#[test]
fn cache_hits_match_fresh_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    for args in [
        &["burgess", "--ring", "Z/2 x Z/9", "--psi", "full"][..],
        &["davenport", "--ring", "GF(8)", "--psi", "frobenius(0)"][..],
        &["witness", "--ring", "Z/4 x Z/4"][..],
        &["verify", "--ring", "Z/3 x Z/3", "--psi", "swap(0,1)"][..],
    ] {
        let fresh = zsring(args, None);
        let first = zsring(args, Some(&cache));
        let hit = zsring(args, Some(&cache));
        assert!(fresh.status.success(), "{args:?}");
        assert_eq!(fresh.stdout, first.stdout, "{args:?}");
        assert_eq!(fresh.stdout, hit.stdout, "{args:?}");
    }
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 4);

    let sweep = ["sweep", "--max-order", "8", "--jobs", "2"];
    let first = zsring(&sweep, Some(&cache));
    let hit = zsring(&sweep, Some(&cache));
    assert!(first.status.success());
    assert_eq!(first.stdout, hit.stdout);
    assert_eq!(strip_runtime(&first.stdout), strip_runtime(&zsring(&sweep, None).stdout));
}

#[test]
fn incomplete_search_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let out = zsring(&["burgess", "--ring", "Z/64", "--max-states", "5"], Some(&cache));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["complete"], false);
    assert!(v["I"].is_null());
    assert!(v["lower-bound"].as_u64().unwrap() >= 1);
    // partial results are never cached
    assert!(!cache.exists() || std::fs::read_to_string(&cache).unwrap().is_empty());
}

#[test]
fn bad_input_is_reported_not_panicked() {
    for spec in ["Z/0", "Z/1", "GF(6)", "GF(4)[x]/x^0", "Z/4 x", "", "x", "Z/99999999999999999999", "GF(", "Z/4 + Z/2", "Zé/3"] {
        let out = zsring(&["units", "--ring", spec], None);
        assert_eq!(out.status.code(), Some(1), "{spec:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error: "), "{spec:?}: {err}");
    }
    let out = zsring(&["units", "--ring", "Z/0"], None);
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 2"));
    for psi in ["swap(0,1)", "rotate(1)", "aut(99)", "gens:/nonexistent.json"] {
        let out = zsring(&["davenport", "--ring", "Z/5", "--psi", psi], None);
        assert_eq!(out.status.code(), Some(1), "{psi}");
    }
}

#[test]
fn explicit_generator_tables() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("swap.json");
    // the factor swap on GF(3) x GF(3) as an element permutation
    let table: Vec<u32> = (0..9).map(|i| (i % 3) * 3 + i / 3).collect();
    std::fs::write(&gens, serde_json::to_string(&[table]).unwrap()).unwrap();
    let desc = format!("gens:{}", gens.display());
    let by_table = json(&zsring(&["davenport", "--ring", "GF(3) x GF(3)", "--psi", &desc], None));
    let by_name = json(&zsring(&["davenport", "--ring", "GF(3) x GF(3)", "--psi", "swap(0,1)"], None));
    assert_eq!(by_table["psi-order"], 2);
    assert_eq!(by_table["D"], by_name["D"]);
    assert!(by_table["psi"].as_str().unwrap().starts_with("gens:"));
    assert!(!by_table["psi"].as_str().unwrap().contains('/'));

    std::fs::write(&gens, "[[0, 0, 0, 0, 0, 0, 0, 0, 0]]").unwrap();
    let out = zsring(&["davenport", "--ring", "GF(3) x GF(3)", "--psi", &desc], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_append_writes_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let family = dir.path().join("family.json");
    std::fs::write(&family, r#"{"rings": ["Z/4", "Z/6"]}"#).unwrap();
    let table = dir.path().join("rows.csv");
    for _ in 0..2 {
        let args = ["sweep", "--family", family.to_str().unwrap(), "--format", "csv", "--out", table.to_str().unwrap(), "--append"];
        assert!(zsring(&args, None).status.success());
    }
    let text = std::fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "ring,psi,D_psi,sigma_term,I_psi,bound,equality,runtime_ms");
    assert!(lines[1].starts_with("Z/4,id,2,1,3,3,true,"));
    assert!(lines[2].starts_with("Z/2 x Z/3,id,2,0,2,2,true,"));
}

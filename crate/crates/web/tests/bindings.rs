use zsring_web::{structure, tfunc_rows, tfunc_table, verification};

#[test]
fn tfunc_table_shape() {
    let rows = tfunc_rows(4, 3);
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert_eq!(rows[2][1]["value"], 3);
    assert_eq!(rows[2][1]["profile"], serde_json::json!([2, 1]));
    let text = tfunc_table(0, 0);
    assert_eq!(text, r#"[[{"h":1,"m":1,"profile":[0],"value":0}]]"#);
}

#[test]
fn structure_of_small_rings() {
    let s = structure("Z/12", "id").unwrap();
    assert_eq!(s["ring"], "Z/4 x Z/3");
    assert_eq!(s["idempotents"].as_array().unwrap().len(), 4);
    assert_eq!(s["units"].as_array().unwrap().len(), 4);
    assert_eq!(s["primes"][0]["index"], 2);
    let s = structure("GF(4) x GF(4)", "swap(0,1)").unwrap();
    assert_eq!(s["orbits"].as_array().unwrap().len(), 1);
    assert!(structure("Z/0", "id").unwrap_err().contains("byte 2"));
    assert!(structure("Z/5", "swap(0,1)").is_err());
}

#[test]
fn verification_report() {
    let v = verification("Z/4 x Z/4", "swap(0,1)").unwrap();
    assert_eq!(v["burgess"], 5);
    assert_eq!(v["equality"], true);
    assert_eq!(v["theorem"]["predicted"], "square-swap");
    let big = verification("GF(128)", "id").unwrap();
    assert!(big["burgess"].is_null() && big["theorem"].is_null());
}

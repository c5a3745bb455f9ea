use std::process::{Command, Output};

use serde_json::Value;

fn ex(name: &str) -> String {
    format!("{}/../../ex/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn pcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcoh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn dist_of_coin_omega_and_geometric() {
    let o = pcoh(&["dist", &ex("coin.pcf"), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o), serde_json::json!({"probs": {"0": "1/2", "1": "1/2"}, "residual": "0"}));
    let o = pcoh(&["dist", &ex("omega.pcf"), "--json"]);
    assert_eq!((code(&o), json(&o)["residual"].clone()), (0, Value::from("1")));
    let o = pcoh(&["dist", &ex("geom.pcf"), "--fuel", "40", "--json"]);
    let v = json(&o);
    for n in 0..10u32 {
        assert_eq!(v["probs"][n.to_string()], format!("1/{}", 1u64 << (n + 1)));
    }
    assert_eq!(v["residual"], "1/1024");
    let table = stdout(&pcoh(&["dist", &ex("coin.pcf")]));
    assert_eq!(table, "n\tprobability\n0\t1/2\n1\t1/2\nresidual\t0\n");
}

#[test]
fn denotations() {
    let o = pcoh(&["denote", &ex("m.pcf"), "--W", "4", "--D", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let coeffs: Vec<(String, String, String)> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["mu"].to_string(), c["b"].as_str().unwrap().into(), c["val"].as_str().unwrap().into()))
        .collect();
    let want = [
        ("[]", "0"),
        (r#"[["0",1]]"#, "1"),
        (r#"[["0",1],["1",1]]"#, "0"),
        (r#"[["0",1],["2",1]]"#, "0"),
        (r#"[["0",1],["3",1]]"#, "0"),
    ];
    assert_eq!(coeffs.len(), want.len());
    for ((mu, b, val), (wmu, wb)) in coeffs.iter().zip(want) {
        assert_eq!((mu.as_str(), b.as_str(), val.as_str()), (wmu, wb, "1/2"));
    }
    // The checked-in copy is exactly what `denote` prints.
    assert_eq!(stdout(&o), std::fs::read_to_string(ex("m.json")).unwrap());
    let v = json(&pcoh(&["denote", &ex("coin.pcf"), "--json"]));
    assert_eq!(v["entries"], serde_json::json!([["0", "1/2"], ["1", "1/2"]]));
    let o = pcoh(&["denote", &ex("geom.pcf"), "--K", "8", "--W", "6"]);
    assert_eq!(stdout(&o), "n\tprobability\n0\t1/2\n1\t1/4\n2\t1/8\n3\t1/16\n4\t1/32\n5\t1/64\n");
}

#[test]
fn adequacy_gap_shrinks() {
    let o = pcoh(&["adequacy", &ex("geom.pcf"), "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let gaps: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["gap"].as_str().unwrap()).collect();
    assert_eq!(gaps, ["1/4", "1/8", "1/32", "0", "0"]);
    assert_eq!(v["gap_nonincreasing"], true);
}

#[test]
fn pcs_certification() {
    for f in ["bool.pcs", "nat4.pcs", "square.pcs"] {
        let o = pcoh(&["pcs-check", &ex(f)]);
        assert_eq!(code(&o), 0, "{f}");
        assert!(stdout(&o).ends_with("passed\ttrue\n"));
    }
    let o = pcoh(&["pcs-check", &ex("bool_arrow.pcs")]);
    assert_eq!(code(&o), 3);
}

#[test]
fn extraction_round_trips() {
    let denoted = stdout(&pcoh(&["denote", &ex("m.pcf"), "--W", "4", "--D", "2", "--json"]));
    let o = pcoh(&["extract", "--from-denote", &ex("m.pcf"), "--W", "4", "--D", "2", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), denoted);
    let o = pcoh(&["extract", "--morphism", &ex("m.json"), "--mode", "scaling", "--richardson", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 5);
}

#[test]
fn cone_subcommands() {
    let o = pcoh(&["prestable", "--coeffs", "0,1,-1", "--seed", "1", "--trials", "50"]);
    assert_eq!(code(&o), 4);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    assert!(v["orders"][1]["witness"]["us"].as_array().unwrap().len() == 2);
    let o = pcoh(&["prestable", "--morphism", &ex("m.json"), "--seed", "1", "--trials", "50"]);
    assert_eq!(code(&o), 0);
    let o = pcoh(&["derivative", "--coeffs", "0,0,1", "--x", "1/4", "--dir", "1/2", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schedule"].as_array().unwrap().len(), 13);
    assert_eq!(v["phi"][0], "1/2");
    assert_eq!(v["estimate"], "4097/16384");
    let o = pcoh(&["bernstein", "--exp-degree", "6", "--x", "1/2", "--mode", "scaling", "--richardson", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0);
    let o = pcoh(&["bernstein", "--coeffs", "0,1,-1", "--x", "1/2", "--json"]);
    assert_eq!(code(&o), 4);
    let o = pcoh(&["refine", &ex("partitions.json"), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verified"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&pcoh(&["sample", &ex("geom.pcf")])), 1);
    assert_eq!(code(&pcoh(&["frobnicate"])), 1);
    assert_eq!(code(&pcoh(&["--help"])), 0);
    assert_eq!(code(&pcoh(&["dist", &ex("missing.pcf")])), 2);
    assert_eq!(code(&pcoh(&["dist", &ex("m.pcf")])), 2);
    assert_eq!(code(&pcoh(&["dist", &ex("bool.pcs")])), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["sample".to_string(), ex("geom.pcf"), "--seed".into(), "11".into(), "--trials".into(), "500".into(), "--json".into()],
        vec!["prestable".to_string(), "--morphism".into(), ex("m.json"), "--seed".into(), "5".into(), "--json".into()],
        vec!["adequacy".to_string(), ex("geom.pcf"), "--json".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = pcoh(&args);
        let mut seq = args.clone();
        seq.push("--sequential");
        let b = pcoh(&seq);
        assert_eq!(a.stdout, pcoh(&args).stdout);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

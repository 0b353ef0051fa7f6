use std::path::PathBuf;

use regulous_cli::{parse_expression, run_captured, EXIT_ERROR, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE};
use regulous_core::{verify_certificate, RatSosCertificate};
use serde_json::Value;

const CORPUS: &[&str] = &[
    "x^3/(x^2+y^2)",
    "x^3/(x^2+y^4)",
    "y*x^2/(x^2+y^4)",
    "y^2*x^2/(x^2+y^4)",
    "x^3*(x-1)^3/((x^2+y^2)*((x-1)^2+y^2))",
    "1 - x^5/(y^2+x^4)",
    "1 - x^9/(y^2+x^6)",
    "x^6/(x^2+y^2)^2",
    "((x+y)^2+(x-y+y^2)^2)/((x+y^2)^2+y^2)",
    "(x^4+y^4)/(x^2+y^2)",
    "x*y/(x^2+y^2)",
    "-1/2*x*y + 3/7",
    "(x - 2/3*y^3)/(1 + x^2)",
];

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regulous-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn result(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run_captured(args);
    let v: Value = serde_json::from_str(&out).unwrap_or(Value::Null);
    (code, v["result"].clone())
}

#[test]
fn printing_round_trips() {
    for text in CORPUS {
        let f = parse_expression(text).unwrap();
        assert_eq!(parse_expression(&f.to_string()).unwrap(), f, "{text}");
        let (_, out, _) = run_captured(&["resolve", text]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parse_expression(v["input"].as_str().unwrap()).unwrap(), f, "{text}");
    }
}

#[test]
fn reports_are_deterministic() {
    for text in CORPUS {
        for cmd in ["classify", "resolve"] {
            for format in ["json", "text"] {
                let a = run_captured(&[cmd, text, "--format", format]);
                let b = run_captured(&[cmd, text, "--format", format]);
                assert_eq!(a, b, "{cmd} {text} {format}");
            }
        }
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["classify", "x^3/(x^2+y^2)"], EXIT_OK),
        (&["classify", "x*y/(x^2+y^2)"], EXIT_OK),
        (&["resolve", "1/(x*y)"], EXIT_OK),
        (&["flat-power", "x*y/(x^2+y^2)", "--k", "1"], EXIT_OK),
        (&["certify", "x^3/(x^2+y^2)"], EXIT_OK),
        (&["resolve", "x^2/((x^2-2)^2+y^2)"], EXIT_UNSUPPORTED),
        (&["classify", "x^2/((x^2-2)^2+y^2)"], EXIT_UNSUPPORTED),
        (&["certify", "x^2/(x^2+y^4)"], EXIT_UNSUPPORTED),
        (&["certify", "x^4*y^2+x^2*y^4-3*x^2*y^2+1"], EXIT_UNSUPPORTED),
        (&["resolve", "x + * y"], EXIT_ERROR),
        (&["resolve", "x/(y-y)"], EXIT_ERROR),
        (&["verify", "/nonexistent/certificate.json"], EXIT_ERROR),
        (&["sample", "x", "--arc", "1/t,t"], EXIT_ERROR),
        (&["bogus"], EXIT_USAGE),
        (&["classify"], EXIT_USAGE),
        (&["flat-power", "x"], EXIT_USAGE),
    ];
    for (args, want) in cases {
        let (code, _, _) = run_captured(args);
        assert_eq!(code, *want, "{args:?}");
    }
}

#[test]
fn errors_report_kind_and_position() {
    let (code, r) = result(&["classify", "x^2 + (y"]);
    assert_eq!(code, EXIT_ERROR);
    assert_eq!(r["error"], "parse_error");
    assert!(r["message"].as_str().unwrap().contains("at 8"), "{r}");
    let (_, r) = result(&["classify", "x/(y-y)"]);
    assert_eq!(r["error"], "zero_denominator");
}

#[test]
fn negative_functions_are_refused_with_a_point() {
    let (code, r) = result(&["certify", "x - 1/2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["certified"], false);
    let p = &r["negative_value"]["point"];
    let f = parse_expression("x - 1/2").unwrap();
    let pt = regulous_core::Point::new(
        regulous_core::parse_rat(p[0].as_str().unwrap()).unwrap(),
        regulous_core::parse_rat(p[1].as_str().unwrap()).unwrap(),
    );
    assert_eq!(f.evaluate(&pt).unwrap().to_string(), r["negative_value"]["value"]);
}

#[test]
fn certify_with_witness_files_then_verify() {
    let dir = scratch("witness");
    let p = dir.join("p.json");
    let q = dir.join("q.json");
    let cert = dir.join("cert.json");
    // numerator x^4 + y^4 and denominator x^2 + y^2 of the same function
    std::fs::write(&p, r#"{"scalar": "1", "terms": [[[2, 0, "1"]], [[0, 2, "1"]]]}"#).unwrap();
    std::fs::write(&q, r#"{"scalar": "1", "terms": [[[1, 0, "1"]], [[0, 1, "1"]]]}"#).unwrap();
    let (code, r) = result(&[
        "certify",
        "(x^4+y^4)/(x^2+y^2)",
        "--p-witness",
        p.to_str().unwrap(),
        "--q-witness",
        q.to_str().unwrap(),
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{r}");
    assert_eq!(r["witnesses"]["numerator"]["source"], "file");
    assert!(r.get("certificate").is_none());
    let c: RatSosCertificate = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(verify_certificate(&c).passed);
    let (code, v) = result(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["passed"], true);

    std::fs::write(&p, r#"{"scalar": "2", "terms": [[[2, 0, "1"]], [[0, 2, "1"]]]}"#).unwrap();
    let (code, r) =
        result(&["certify", "(x^4+y^4)/(x^2+y^2)", "--p-witness", p.to_str().unwrap(), "--q-witness", q.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert_eq!(r["error"], "witness_invalid");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn witnesses_fall_back_to_search() {
    let (code, r) = result(&["certify", "(x^2+2*x*y+2*y^2)/(1+x^2)"]);
    assert_eq!(code, EXIT_OK, "{r}");
    assert_eq!(r["witnesses"]["numerator"]["source"], "search");
    assert_eq!(r["verified"], true);
}

#[test]
fn sample_is_exact_on_dyadic_parameters() {
    let (code, r) = result(&["sample", "x^3/(x^2+y^2)", "--arc", "t,0", "--depth", "5"]);
    assert_eq!(code, EXIT_OK);
    let vals: Vec<&str> = r["samples"].as_array().unwrap().iter().map(|s| s["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["1/2", "1/4", "1/8", "1/16", "1/32"]);
    let (_, r) = result(&["sample", "1/x", "--arc", "t,1", "--depth", "2"]);
    assert_eq!(r["limit_at_0"], Value::Null);
}

#[test]
fn text_format_carries_the_same_fields() {
    let (_, text, _) = run_captured(&["classify", "x^3/(x^2+y^2)", "--format", "text"]);
    for needle in ["regulous: true", "max_verified_k: 0", "stages: 1", "limit: 0"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}

#[test]
fn fixtures_pass() {
    let (code, r) = result(&["fixtures", "run"]);
    assert_eq!(code, EXIT_OK, "{r}");
    assert_eq!(r["failed"], 0);
    assert!(r["fixtures"].as_array().unwrap().iter().all(|f| f["status"] == "pass"));
}

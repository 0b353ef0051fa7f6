//! Regression fixtures: commands with golden structured reports.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::report::{EXIT_ERROR, EXIT_OK};

pub struct Fixture {
    pub name: &'static str,
    /// `{dir}` is replaced by the fixture directory.
    pub args: &'static [&'static str],
    pub exit: i32,
}

const WORKED: &str = "((x+y)^2+(x-y+y^2)^2)/((x+y^2)^2+y^2)";

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "classify_cubic_circle", args: &["classify", "x^3/(x^2+y^2)", "--kmax", "2"], exit: 0 },
    Fixture { name: "sample_cubic_circle_axis", args: &["sample", "x^3/(x^2+y^2)", "--arc", "t,0", "--depth", "5"], exit: 0 },
    Fixture { name: "resolve_cubic_quartic", args: &["resolve", "x^3/(x^2+y^4)"], exit: 0 },
    Fixture { name: "classify_yx2_quartic", args: &["classify", "y*x^2/(x^2+y^4)"], exit: 0 },
    Fixture { name: "classify_y2x2_quartic", args: &["classify", "y^2*x^2/(x^2+y^4)"], exit: 0 },
    Fixture {
        name: "sample_y2x2_dx_parabola",
        args: &["sample", "y^2*x^2/(x^2+y^4)", "--partial", "x", "--arc", "t^2,t", "--depth", "6"],
        exit: 0,
    },
    Fixture {
        name: "sample_y2x2_dx_x_axis",
        args: &["sample", "y^2*x^2/(x^2+y^4)", "--partial", "x", "--arc", "t,0", "--depth", "6"],
        exit: 0,
    },
    Fixture {
        name: "sample_y2x2_dx_y_axis",
        args: &["sample", "y^2*x^2/(x^2+y^4)", "--partial", "x", "--arc", "0,t", "--depth", "6"],
        exit: 0,
    },
    Fixture { name: "resolve_two_poles", args: &["resolve", "x^3*(x-1)^3/((x^2+y^2)*((x-1)^2+y^2))"], exit: 0 },
    Fixture { name: "resolve_topology_1_3", args: &["resolve", "1 - x^5/(y^2+x^2)"], exit: 0 },
    Fixture { name: "resolve_topology_2_5", args: &["resolve", "1 - x^9/(y^2+x^4)"], exit: 0 },
    Fixture { name: "resolve_topology_3_3", args: &["resolve", "1 - x^9/(y^2+x^6)"], exit: 0 },
    Fixture { name: "certify_worked_example", args: &["certify", WORKED], exit: 0 },
    Fixture { name: "verify_worked_example", args: &["verify", "{dir}/worked_certificate.json"], exit: 0 },
    Fixture { name: "verify_tampered_term", args: &["verify", "{dir}/tampered_certificate.json"], exit: 0 },
    Fixture { name: "verify_degenerate_denominator", args: &["verify", "{dir}/degenerate_certificate.json"], exit: 0 },
];

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Run one fixture; returns the exit code and the report with the fixture
/// directory replaced by `{dir}`.
pub fn run_one(fx: &Fixture, dir: &Path) -> (i32, String) {
    let d = dir.display().to_string();
    let args: Vec<String> = fx.args.iter().map(|a| a.replace("{dir}", &d)).collect();
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let (code, out, _) = crate::run_captured(&argv);
    (code, out.replace(&d, "{dir}"))
}

pub fn run_all(dir: Option<&Path>, update: bool) -> Result<(i32, Value), String> {
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(default_dir);
    let mut rows = Vec::new();
    let mut failed = 0;
    for fx in FIXTURES {
        let (code, out) = run_one(fx, &dir);
        let golden = dir.join(format!("{}.json", fx.name));
        let status = if update {
            std::fs::write(&golden, &out).map_err(|e| format!("{}: {e}", golden.display()))?;
            "updated"
        } else {
            match std::fs::read_to_string(&golden) {
                Ok(g) if g == out && code == fx.exit => "pass",
                Ok(_) => "fail",
                Err(_) => "missing",
            }
        };
        if status == "fail" || status == "missing" {
            failed += 1;
        }
        rows.push(json!({ "name": fx.name, "exit": code, "expected_exit": fx.exit, "status": status }));
    }
    let code = if failed == 0 { EXIT_OK } else { EXIT_ERROR };
    Ok((code, json!({ "fixtures": rows, "total": FIXTURES.len(), "failed": failed })))
}

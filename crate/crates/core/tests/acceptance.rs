//! One PASS/FAIL line per acceptance criterion, over the default catalog.

use std::process::ExitCode;
use std::time::Instant;

use reflquot::battery::{run_battery, BatteryOptions};
use reflquot::theorems::VerificationReport;

fn main() -> ExitCode {
    let t0 = Instant::now();
    let out = run_battery(&BatteryOptions::default());
    for c in &out.criteria {
        println!("{}", c.line(true));
        for f in c.failures.iter().skip(1).take(9) {
            println!("    {f}");
        }
    }
    let json = serde_json::to_string(&out.reports).expect("serialize");
    let back: Vec<VerificationReport> = serde_json::from_str(&json).expect("parse");
    let round_trip = back == out.reports;
    println!(
        "{} report JSON round trip ({} reports)",
        if round_trip { "PASS" } else { "FAIL" },
        out.reports.len()
    );
    println!("acceptance finished in {:.1} s", t0.elapsed().as_secs_f64());
    if out.pass() && round_trip && out.criteria.len() == 10 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

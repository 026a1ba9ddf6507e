//! Runs every registered law for a campaign and prints one summary line each.
//!
//! cargo run --release --example falsify_campaign -- [trials] [seed]

use rcdkit::falsifier::{Campaign, LAWS};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let campaign = Campaign { trials, seed, ..Campaign::default() };
    for law in LAWS.iter() {
        let report = campaign.run(law.id).expect("campaign runs");
        let shrunk = report.shrunk.as_ref().map(|c| format!("  shrunk to n={}", c.n())).unwrap_or_default();
        println!(
            "{:<9} {:<4} premise {:>5.1}%  counterexamples {:>4}  {:>6} ms{}",
            report.law,
            if report.passed() { "ok" } else { "FAIL" },
            100.0 * report.premise_rate,
            report.counterexamples.len(),
            report.elapsed_ms,
            shrunk,
        );
    }
}

// Runs the engine against every closed-form curve in the catalog, the
// same check as `quflux verify`, and then again with a deliberately
// corrupted oracle to show that failures are caught.

use quflux::cli::{verify, VerifyOptions};

pub fn main() {
    let summary = verify(&VerifyOptions::new()).unwrap();
    let worst = summary.rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    println!("{} curves checked, worst deviation {worst:.2e}, exit code {}", summary.rows.len(), summary.exit_code());

    let faulty = VerifyOptions { filter: Some("model1".into()), inject_fault: true, ..VerifyOptions::new() };
    let summary = verify(&faulty).unwrap();
    println!("with an injected fault: {} of {} fail, exit code {}", summary.failures().len(), summary.rows.len(), summary.exit_code());
}

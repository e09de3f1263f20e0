//! Build a report, round-trip it through JSON and re-verify it from scratch.

use qhi::generate::{random_element, ElementRecipe};
use qhi::io::to_json_string;
use qhi::reversibility::{build_report, verify_report, ReportOptions, ReversibilityReport};
use qhi::Kind;

fn main() {
    let g = random_element(&ElementRecipe::new(Kind::NonVertical, 2, 3)).unwrap().element;
    let opts = ReportOptions { witness: true, ..Default::default() };
    let report = build_report(&g, 1e-9, opts).unwrap();
    let json = to_json_string(&report, 2);
    println!("{} bytes of JSON", json.len());

    let back: ReversibilityReport = serde_json::from_str(&json).unwrap();
    let cert = verify_report(&back, 1e-9);
    for c in &cert.clauses {
        println!("{:<22} {:>5} {:.1e} < {:.0e}", c.name, c.passed, c.value, c.threshold);
    }

    let mut tampered = back;
    if let Some(w) = tampered.involution_witness.as_mut() {
        w.mat[(0, 0)] = w.mat[(0, 0)] * 1.001;
    }
    println!("tampered report passes: {}", verify_report(&tampered, 1e-9).passed);
}

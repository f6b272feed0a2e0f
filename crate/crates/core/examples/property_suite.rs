//! Runs the randomized invariant suite and prints one line per property.

use std::fmt::Write;

use triopoly::{property_suite, ModelParams, Rational};

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let params = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();
    let report = property_suite(&params, 30, 11).unwrap();
    let mut out = String::new();
    for p in &report.properties {
        writeln!(out, "{:<26} {:?} ({} checks)", p.name, p.status, p.checked).unwrap();
        if let Some(cx) = &p.counterexample {
            writeln!(out, "  draw {}: {}", cx.draw, cx.detail).unwrap();
        }
    }
    writeln!(out, "all passed: {}", report.all_passed()).unwrap();
    out
}

fn main() {
    print!("{}", run());
}

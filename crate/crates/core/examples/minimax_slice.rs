//! Grid check of the equal-value chain for a firm's relative profit on a
//! two-variable slice through the Cournot equilibrium.

use std::fmt::Write;

use triopoly::verification::equilibrium_slice;
use triopoly::{minimax_check, Firm, GridSpec, ModelParams, Rational};

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let params = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();
    let grid = GridSpec::new(r("0"), r("10"), 401).unwrap();
    let mut out = String::new();

    for firm in [Firm::A, Firm::B] {
        let slice = equilibrium_slice(&params, firm).unwrap();
        let report = minimax_check(&params, &slice, &grid).unwrap();
        writeln!(out, "psi{firm} vs firm {}, x{} fixed at {}", slice.min_firm, slice.fixed_firm().unwrap(), slice.fixed).unwrap();
        for q in &report.quantities {
            writeln!(out, "  {:<12} {:.10}", q.label, q.value).unwrap();
        }
        writeln!(out, "  spread {:.2e} within {:.2e}: {}", report.spread, report.tolerance, report.pass).unwrap();
    }
    out
}

fn main() {
    print!("{}", run());
}

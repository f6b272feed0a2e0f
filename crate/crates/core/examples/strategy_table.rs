//! Solves every quantity/price assignment for one market and prints the
//! equilibrium outputs, prices and relative profits.
//!
//! cargo run --example strategy_table

use std::fmt::Write;

use triopoly::{solve_equilibrium, ModelParams, Rational, StrategyAssignment};

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let params = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();

    let mut out = String::new();
    writeln!(out, "{:<4} {:>8} {:>8} {:>8}   {:>8} {:>8} {:>8}   {:>9}", "", "xA", "xB", "xC", "pA", "pB", "pC", "psiC").unwrap();
    for asg in StrategyAssignment::all() {
        let eq = solve_equilibrium(&params, asg).unwrap();
        let x = eq.state.x();
        let p = eq.state.p();
        let label = asg.pattern().map(|p| format!("P{}", p.number())).unwrap_or_else(|| "  ".into());
        writeln!(
            out,
            "{asg} {:>8.4} {:>8.4} {:>8.4}   {:>8.4} {:>8.4} {:>8.4}   {:>9} {label}",
            x[0].to_f64(),
            x[1].to_f64(),
            x[2].to_f64(),
            p[0].to_f64(),
            p[1].to_f64(),
            p[2].to_f64(),
            eq.payoffs.psi[2].to_string(),
        )
        .unwrap();
    }
    out
}

fn main() {
    print!("{}", run());
}

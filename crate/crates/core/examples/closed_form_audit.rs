//! Compares the published closed-form outputs with the exact solver and
//! lists every component where the printed formula is off.

use std::fmt::Write;

use triopoly::{closed_form_outputs, solve_equilibrium, typo_ledger, ModelParams, Pattern, Rational};

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let params = ModelParams::new(r("20"), r("3/4"), r("1"), r("1"), r("4")).unwrap();
    let mut out = String::new();

    for pattern in Pattern::ALL {
        let cf = closed_form_outputs(&params, pattern).unwrap();
        let eq = solve_equilibrium(&params, pattern.assignment()).unwrap();
        let verdict = match (cf.printed_matches_corrected(), &cf.corrected == eq.state.x()) {
            (true, true) => "printed ok",
            (false, true) => "printed slip, corrected ok",
            (_, false) => "MISMATCH",
        };
        writeln!(out, "P{} {}  xC = {}  {verdict}", pattern.number(), pattern.assignment(), eq.state.x()[2]).unwrap();
    }
    for entry in typo_ledger(&params).unwrap() {
        writeln!(out, "slip: pattern {} {} printed {} should be {}", entry.pattern, entry.component, entry.printed, entry.corrected).unwrap();
    }
    out
}

fn main() {
    print!("{}", run());
}

//! Damped best-response iteration from an arbitrary start, compared with the
//! exact equilibrium.

use std::fmt::Write;

use triopoly::{best_response_iteration, solve_equilibrium, IterationOptions, ModelParams, Pattern, Rational};

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let params = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();
    let mut out = String::new();

    for pattern in [Pattern::P1, Pattern::P3, Pattern::P6] {
        let asg = pattern.assignment();
        let exact = solve_equilibrium(&params, asg).unwrap();
        let run = best_response_iteration(&params, asg, [0.0, 9.0, 1.5], IterationOptions::default()).unwrap();
        let err = run.chosen.iter().zip(&exact.chosen).map(|(v, e)| (v - e.to_f64()).abs()).fold(0.0, f64::max);
        writeln!(
            out,
            "{asg}: {} after {} steps, limit ({:.6}, {:.6}, {:.6}), max error {err:.1e}",
            if run.converged { "converged" } else { "stalled" },
            run.iterations,
            run.chosen[0],
            run.chosen[1],
            run.chosen[2],
        )
        .unwrap();
    }
    out
}

fn main() {
    print!("{}", run());
}

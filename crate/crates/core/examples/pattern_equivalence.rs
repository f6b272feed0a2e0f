//! Which assignments produce the same market outcome? Compares the six
//! named patterns pairwise, once with a cost-disadvantaged third firm and
//! once with identical costs.

use std::fmt::Write;

use triopoly::verification::equal_pairs;
use triopoly::{equivalence_matrix, ModelParams, Rational};

fn describe(out: &mut String, params: &ModelParams) {
    let matrix = equivalence_matrix(params).unwrap();
    writeln!(out, "cC = {}", params.costs()[2]).unwrap();
    for (i, row) in matrix.iter().enumerate() {
        let cells: String = row.iter().map(|rep| if rep.equal { " =" } else { " ." }).collect();
        writeln!(out, "  P{}{cells}", i + 1).unwrap();
    }
    let pairs: Vec<String> = equal_pairs(&matrix).iter().map(|(a, b)| format!("P{a}~P{b}")).collect();
    writeln!(out, "  equal: {}", pairs.join(", ")).unwrap();
    let far = &matrix[0][2];
    writeln!(out, "  largest P1/P3 gap: {}", far.max_abs_diff).unwrap();
}

pub fn run() -> String {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let mut out = String::new();
    describe(&mut out, &ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap());
    describe(&mut out, &ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("2")).unwrap());
    out
}

fn main() {
    print!("{}", run());
}

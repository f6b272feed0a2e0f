//! Published closed-form equilibrium outputs, kept as an independent oracle.
//!
//! The formulas are transcribed as printed (`printed`) and with known slips
//! fixed (`corrected`). The only output slip is the Cournot `x_C`, whose
//! printed denominator `(4−b)(b+2)` flips its sign; the matching formula
//! for the `QQP` pattern carries the correct `(b−4)(b+2)`.
//!
//! All formulas assume `c_A = c_B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::market::{Firm, ModelParams, Pattern};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub pattern: u8,
    pub printed: [Rational; 3],
    pub corrected: [Rational; 3],
}

impl ClosedForm {
    pub fn printed_matches_corrected(&self) -> bool {
        self.printed == self.corrected
    }
}

/// One component where the printed formula disagrees with the corrected one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypoEntry {
    pub pattern: u8,
    pub component: String,
    pub printed: Rational,
    pub corrected: Rational,
}

/// Polynomial in (a, b, c_A, c_C) given as `(coef, [pow_a, pow_b, pow_cA, pow_cC])` terms.
struct Poly(&'static [(i64, [u8; 4])]);

impl Poly {
    fn eval(&self, vars: &[Rational; 4]) -> Rational {
        self.0
            .iter()
            .map(|(coef, pows)| {
                let mut term = Rational::integer(*coef);
                for (v, &p) in vars.iter().zip(pows) {
                    for _ in 0..p {
                        term *= v;
                    }
                }
                term
            })
            .sum()
    }
}

// Variable order in exponent arrays: a, b, cA, cC.
const A: [u8; 4] = [1, 0, 0, 0];
const AB: [u8; 4] = [1, 1, 0, 0];
const AB2: [u8; 4] = [1, 2, 0, 0];
const AB3: [u8; 4] = [1, 3, 0, 0];
const CA: [u8; 4] = [0, 0, 1, 0];
const BCA: [u8; 4] = [0, 1, 1, 0];
const B2CA: [u8; 4] = [0, 2, 1, 0];
const B3CA: [u8; 4] = [0, 3, 1, 0];
const CC: [u8; 4] = [0, 0, 0, 1];
const BCC: [u8; 4] = [0, 1, 0, 1];
const B2CC: [u8; 4] = [0, 2, 0, 1];
const B3CC: [u8; 4] = [0, 3, 0, 1];

// bc_C − 4c_A − ab + 4a
const COURNOT_AB: Poly = Poly(&[(1, BCC), (-4, CA), (-1, AB), (4, A)]);
// bc_C + 4c_C − 2bc_A + ab − 4a
const COURNOT_C: Poly = Poly(&[(1, BCC), (4, CC), (-2, BCA), (1, AB), (-4, A)]);
// 5b²c_C + 4bc_C − 3b³c_A + 6b²c_A + 4bc_A − 16c_A + 3ab³ − 11ab² − 8ab + 16a
const P3_A: Poly = Poly(&[
    (5, B2CC), (4, BCC), (-3, B3CA), (6, B2CA), (4, BCA), (-16, CA), (3, AB3), (-11, AB2), (-8, AB), (16, A),
]);
// 7b²c_C − 16c_C − 3b³c_A + 4b²c_A + 8bc_A + 3ab³ − 11ab² − 8ab + 16a
const P3_C: Poly = Poly(&[
    (7, B2CC), (-16, CC), (-3, B3CA), (4, B2CA), (8, BCA), (3, AB3), (-11, AB2), (-8, AB), (16, A),
]);
// 2b²c_C + bc_C + 3b²c_A − 2bc_A − 4c_A − 5ab² + ab + 4a
const BERTRAND_AB: Poly = Poly(&[(2, B2CC), (1, BCC), (3, B2CA), (-2, BCA), (-4, CA), (-5, AB2), (1, AB), (4, A)]);
// b²c_C − 3bc_C − 4c_C + 4b²c_A + 2bc_A − 5ab² + ab + 4a
const BERTRAND_C: Poly = Poly(&[(1, B2CC), (-3, BCC), (-4, CC), (4, B2CA), (2, BCA), (-5, AB2), (1, AB), (4, A)]);
// 3b²c_C − b³c_C + 4bc_C + 6b³c_A + 16b²c_A − 12bc_A − 16c_A − 5ab³ − 19ab² + 8ab + 16a
const P5_A: Poly = Poly(&[
    (3, B2CC), (-1, B3CC), (4, BCC), (6, B3CA), (16, B2CA), (-12, BCA), (-16, CA), (-5, AB3), (-19, AB2), (8, AB),
    (16, A),
]);
// 4b³c_C + 7b²c_C − 16bc_C − 16c_C + b³c_A + 12b²c_A + 8bc_A − 5ab³ − 19ab² + 8ab + 16a
const P5_C: Poly = Poly(&[
    (4, B3CC), (7, B2CC), (-16, BCC), (-16, CC), (1, B3CA), (12, B2CA), (8, BCA), (-5, AB3), (-19, AB2), (8, AB),
    (16, A),
]);

fn vars(params: &ModelParams) -> [Rational; 4] {
    [params.a().clone(), params.b().clone(), params.cost(Firm::A).clone(), params.cost(Firm::C).clone()]
}

fn product(factors: &[Rational]) -> Rational {
    factors.iter().cloned().product()
}

/// Printed and corrected equilibrium outputs for `pattern`.
pub fn closed_form_outputs(params: &ModelParams, pattern: Pattern) -> Result<ClosedForm> {
    if !params.ab_symmetric() {
        return Err(Error::AsymmetricCosts);
    }
    let v = vars(params);
    let b = params.b();
    let int = Rational::integer;
    let (one, two, four) = (int(1), int(2), int(4));
    let four_minus_b = &four - b;
    let b_plus_2 = b + &two;
    let one_minus_b = &one - b;
    let b_plus_4 = b + &four;
    let three_b_plus_4 = b * int(3) + &four;
    let five_b_plus_4 = b * int(5) + &four;

    let d_cournot = &four_minus_b * &b_plus_2;
    let d_p2_c = (b - &four) * &b_plus_2;
    let d_p3 = product(&[four_minus_b.clone(), one_minus_b.clone(), b_plus_2.clone(), three_b_plus_4]);
    let d_bertrand = product(&[one_minus_b.clone(), b_plus_2.clone(), five_b_plus_4.clone()]);
    let d_p5 = product(&[one_minus_b, b_plus_2, b_plus_4, five_b_plus_4]);

    let cournot_ab = COURNOT_AB.eval(&v) / &d_cournot;
    let bertrand_ab = BERTRAND_AB.eval(&v) / &d_bertrand;
    let bertrand_c = BERTRAND_C.eval(&v) / &d_bertrand;

    let (printed, corrected) = match pattern {
        Pattern::P1 => {
            let printed_c = COURNOT_C.eval(&v) / &d_cournot;
            let corrected_c = -&printed_c;
            (
                [cournot_ab.clone(), cournot_ab.clone(), printed_c],
                [cournot_ab.clone(), cournot_ab, corrected_c],
            )
        }
        Pattern::P2 => {
            let out = [cournot_ab.clone(), cournot_ab, COURNOT_C.eval(&v) / &d_p2_c];
            (out.clone(), out)
        }
        Pattern::P3 => {
            let out = [P3_A.eval(&v) / &d_p3, cournot_ab, P3_C.eval(&v) / &d_p3];
            (out.clone(), out)
        }
        Pattern::P4 | Pattern::P6 => {
            let out = [bertrand_ab.clone(), bertrand_ab, bertrand_c];
            (out.clone(), out)
        }
        Pattern::P5 => {
            let out = [P5_A.eval(&v) / &d_p5, bertrand_ab, P5_C.eval(&v) / &d_p5];
            (out.clone(), out)
        }
    };
    Ok(ClosedForm { pattern: pattern.number(), printed, corrected })
}

/// Every component, across all six patterns, where the printed formula
/// differs from the corrected one at these parameters.
pub fn typo_ledger(params: &ModelParams) -> Result<Vec<TypoEntry>> {
    let mut out = Vec::new();
    for pattern in Pattern::ALL {
        let cf = closed_form_outputs(params, pattern)?;
        for firm in Firm::ALL {
            let i = firm.index();
            if cf.printed[i] != cf.corrected[i] {
                out.push(TypoEntry {
                    pattern: pattern.number(),
                    component: format!("x{firm}"),
                    printed: cf.printed[i].clone(),
                    corrected: cf.corrected[i].clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn params(c: [&str; 3]) -> ModelParams {
        ModelParams::new(r("10"), r("1/2"), r(c[0]), r(c[1]), r(c[2])).unwrap()
    }

    #[test]
    fn cournot_sign_slip() {
        let cf = closed_form_outputs(&params(["2", "2", "3"]), Pattern::P1).unwrap();
        assert_eq!(cf.corrected, [r("114/35"), r("114/35"), r("94/35")]);
        assert_eq!(cf.printed[2], r("-94/35"));
        assert!(!cf.printed_matches_corrected());
    }

    #[test]
    fn bertrand_spot_values() {
        let cf = closed_form_outputs(&params(["2", "2", "3"]), Pattern::P6).unwrap();
        assert_eq!(cf.corrected, [r("216/65"), r("216/65"), r("166/65")]);
        assert!(cf.printed_matches_corrected());
    }

    #[test]
    fn ledger_lists_only_cournot_xc() {
        let ledger = typo_ledger(&params(["2", "2", "3"])).unwrap();
        assert_eq!(ledger.len(), 1);
        assert_eq!(ledger[0].pattern, 1);
        assert_eq!(ledger[0].component, "xC");
    }

    #[test]
    fn symmetric_costs_give_common_output() {
        let p = params(["4", "4", "4"]);
        for pat in Pattern::ALL {
            let cf = closed_form_outputs(&p, pat).unwrap();
            assert_eq!(cf.corrected, [r("12/5"), r("12/5"), r("12/5")], "pattern {pat}");
        }
    }

    #[test]
    fn requires_ab_symmetry() {
        assert_eq!(closed_form_outputs(&params(["1", "2", "3"]), Pattern::P1), Err(Error::AsymmetricCosts));
    }
}

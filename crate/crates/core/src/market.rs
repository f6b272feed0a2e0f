//! The three-firm linear demand economy.
//!
//! Inverse demand is `p_i = a − x_i − b·(x_j + x_k)`. Every other
//! representation (direct demand, the mixed quantity/price systems) is
//! obtained from it by an exact linear solve.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, AffineForm, Matrix};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Firm {
    A,
    B,
    C,
}

impl Firm {
    pub const ALL: [Firm; 3] = [Firm::A, Firm::B, Firm::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Firm> {
        Self::ALL.get(i).copied()
    }

    /// The two rivals, in A, B, C order.
    pub fn rivals(self) -> [Firm; 2] {
        match self {
            Firm::A => [Firm::B, Firm::C],
            Firm::B => [Firm::A, Firm::C],
            Firm::C => [Firm::A, Firm::B],
        }
    }
}

impl fmt::Display for Firm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Firm::A => "A",
            Firm::B => "B",
            Firm::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Firm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Firm::A),
            "B" | "b" => Ok(Firm::B),
            "C" | "c" => Ok(Firm::C),
            _ => Err(Error::InvalidParams(format!("unknown firm {s:?}"))),
        }
    }
}

/// Which strategic variable a firm commits to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    Quantity,
    Price,
}

impl Choice {
    pub fn letter(self) -> char {
        match self {
            Choice::Quantity => 'Q',
            Choice::Price => 'P',
        }
    }
}

/// Per-firm choice of strategic variable, written as e.g. `"QQP"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyAssignment(pub [Choice; 3]);

impl StrategyAssignment {
    pub fn choice(&self, firm: Firm) -> Choice {
        self.0[firm.index()]
    }

    /// All eight assignments, from `QQQ` to `PPP`.
    pub fn all() -> [StrategyAssignment; 8] {
        std::array::from_fn(|n| {
            let pick = |bit: usize| if n >> (2 - bit) & 1 == 0 { Choice::Quantity } else { Choice::Price };
            StrategyAssignment([pick(0), pick(1), pick(2)])
        })
    }

    /// Exchanges the roles of firms A and B.
    pub fn swap_ab(self) -> Self {
        let [a, b, c] = self.0;
        StrategyAssignment([b, a, c])
    }

    pub fn pattern(self) -> Option<Pattern> {
        Pattern::ALL.into_iter().find(|p| p.assignment() == self)
    }
}

impl fmt::Display for StrategyAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0 {
            write!(f, "{}", c.letter())?;
        }
        Ok(())
    }
}

impl FromStr for StrategyAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 3 {
            return Err(Error::ParseAssignment(s.to_string()));
        }
        let mut out = [Choice::Quantity; 3];
        for (slot, b) in out.iter_mut().zip(bytes) {
            *slot = match b {
                b'Q' | b'q' => Choice::Quantity,
                b'P' | b'p' => Choice::Price,
                _ => return Err(Error::ParseAssignment(s.to_string())),
            };
        }
        Ok(StrategyAssignment(out))
    }
}

impl Serialize for StrategyAssignment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StrategyAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The six named competition patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    /// All firms set quantities (Cournot).
    P1,
    /// A, B quantities; C price.
    P2,
    /// A, C quantities; B price.
    P3,
    /// A, B prices; C quantity.
    P4,
    /// A, C prices; B quantity.
    P5,
    /// All firms set prices (Bertrand).
    P6,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [Pattern::P1, Pattern::P2, Pattern::P3, Pattern::P4, Pattern::P5, Pattern::P6];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Pattern> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn assignment(self) -> StrategyAssignment {
        use Choice::{Price as P, Quantity as Q};
        StrategyAssignment(match self {
            Pattern::P1 => [Q, Q, Q],
            Pattern::P2 => [Q, Q, P],
            Pattern::P3 => [Q, P, Q],
            Pattern::P4 => [P, P, Q],
            Pattern::P5 => [P, Q, P],
            Pattern::P6 => [P, P, P],
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Demand intercept `a`, substitution degree `b`, and marginal costs.
///
/// Valid parameters satisfy `0 < b < 1`, `c_i ≥ 0` and `a > max c_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    a: Rational,
    b: Rational,
    costs: [Rational; 3],
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: Rational,
    b: Rational,
    #[serde(rename = "cA")]
    c_a: Rational,
    #[serde(rename = "cB")]
    c_b: Rational,
    #[serde(rename = "cC")]
    c_c: Rational,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        ModelParams::new(r.a, r.b, r.c_a, r.c_b, r.c_c)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        let [c_a, c_b, c_c] = p.costs;
        RawParams { a: p.a, b: p.b, c_a, c_b, c_c }
    }
}

impl ModelParams {
    pub fn new(a: Rational, b: Rational, c_a: Rational, c_b: Rational, c_c: Rational) -> Result<Self> {
        if !(b.is_positive() && b < 1) {
            return Err(Error::InvalidParams("b must satisfy 0 < b < 1".into()));
        }
        let costs = [c_a, c_b, c_c];
        if costs.iter().any(Rational::is_negative) {
            return Err(Error::InvalidParams("marginal costs must be nonnegative".into()));
        }
        if costs.iter().any(|c| *c >= a) {
            return Err(Error::InvalidParams("a must exceed every marginal cost".into()));
        }
        Ok(ModelParams { a, b, costs })
    }

    /// Extra check for double-precision work, where `1 − b` in a
    /// denominator loses accuracy.
    pub fn check_float_safe(&self) -> Result<()> {
        if (Rational::one() - &self.b) < Rational::frac(1, 1_000_000) {
            return Err(Error::InvalidParams("b within 1e-6 of 1 is not supported in float mode".into()));
        }
        Ok(())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn cost(&self, firm: Firm) -> &Rational {
        &self.costs[firm.index()]
    }

    pub fn costs(&self) -> &[Rational; 3] {
        &self.costs
    }

    /// Whether firms A and B face the same payoff function.
    pub fn ab_symmetric(&self) -> bool {
        self.costs[0] == self.costs[1]
    }

    /// Same economy with the cost labels of A and B exchanged.
    pub fn swap_ab(&self) -> Self {
        let [a, b, c] = self.costs.clone();
        ModelParams { a: self.a.clone(), b: self.b.clone(), costs: [b, a, c] }
    }

    /// Row `i` of the inverse demand matrix, i.e. `∂p_i/∂x = −row`.
    fn demand_row(&self, i: usize) -> Vec<Rational> {
        (0..3).map(|j| if i == j { Rational::one() } else { self.b.clone() }).collect()
    }
}

type Triple = [Rational; 3];

pub fn inverse_demand(params: &ModelParams, x: &Triple) -> Triple {
    std::array::from_fn(|i| {
        let rivals: Rational = (0..3).filter(|&j| j != i).map(|j| &x[j]).sum();
        params.a() - &x[i] - params.b() * rivals
    })
}

pub fn direct_demand(params: &ModelParams, p: &Triple) -> Triple {
    let one = Rational::one();
    let b = params.b();
    let denom = (&one - b) * (&one + &(b * Rational::integer(2)));
    std::array::from_fn(|i| {
        let rivals: Rational = (0..3).filter(|&j| j != i).map(|j| &p[j]).sum();
        (params.a() * (&one - b) - (&one + b) * &p[i] + b * rivals) / &denom
    })
}

/// Outputs and prices of all three goods. Prices are always the inverse
/// demand of the outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarketState {
    x: Triple,
    p: Triple,
}

impl MarketState {
    pub fn from_outputs(params: &ModelParams, x: Triple) -> Self {
        let p = inverse_demand(params, &x);
        MarketState { x, p }
    }

    pub fn from_prices(params: &ModelParams, p: Triple) -> Self {
        let x = direct_demand(params, &p);
        MarketState { x, p }
    }

    pub fn x(&self) -> &Triple {
        &self.x
    }

    pub fn p(&self) -> &Triple {
        &self.p
    }

    /// `x` followed by `p`.
    pub fn components(&self) -> impl Iterator<Item = &Rational> {
        self.x.iter().chain(self.p.iter())
    }

    /// The value of the variable `choice` for `firm`.
    pub fn value(&self, firm: Firm, choice: Choice) -> &Rational {
        match choice {
            Choice::Quantity => &self.x[firm.index()],
            Choice::Price => &self.p[firm.index()],
        }
    }

    pub fn chosen(&self, assignment: StrategyAssignment) -> Triple {
        Firm::ALL.map(|f| self.value(f, assignment.choice(f)).clone())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.components().all(|v| !v.is_negative())
    }

    pub fn swap_ab(&self) -> Self {
        let sw = |t: &Triple| [t[1].clone(), t[0].clone(), t[2].clone()];
        MarketState { x: sw(&self.x), p: sw(&self.p) }
    }
}

/// The linear system `A·x = B·v + c` pinning each firm's chosen variable
/// to `v_i`.
fn pinning_system(params: &ModelParams, assignment: StrategyAssignment) -> (Matrix, Matrix, Vec<Rational>) {
    let mut a = Vec::with_capacity(3);
    let mut bmat = Vec::with_capacity(3);
    let mut c = Vec::with_capacity(3);
    for firm in Firm::ALL {
        let i = firm.index();
        let unit = |s: i64| (0..3).map(|j| Rational::integer(if j == i { s } else { 0 })).collect::<Vec<_>>();
        match assignment.choice(firm) {
            // x_i = v_i
            Choice::Quantity => {
                a.push(unit(1));
                bmat.push(unit(1));
                c.push(Rational::zero());
            }
            // x_i + b·Σx_j = a − v_i
            Choice::Price => {
                a.push(params.demand_row(i));
                bmat.push(unit(-1));
                c.push(params.a().clone());
            }
        }
    }
    (a, bmat, c)
}

/// The market state consistent with inverse demand when each firm's
/// assigned variable takes the matching value of `chosen`.
pub fn resolve_market(params: &ModelParams, assignment: StrategyAssignment, chosen: &Triple) -> Result<MarketState> {
    let (a, bmat, c) = pinning_system(params, assignment);
    let rhs: Vec<Rational> = linalg::mat_vec(&bmat, chosen).into_iter().zip(c).map(|(l, r)| l + r).collect();
    let x = linalg::solve_linear(&a, &rhs)?;
    let state = MarketState::from_outputs(params, [x[0].clone(), x[1].clone(), x[2].clone()]);
    debug_assert_eq!(&state.chosen(assignment), chosen);
    Ok(state)
}

/// Outputs and prices as affine functions of the chosen vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMarket {
    pub x: [AffineForm; 3],
    pub p: [AffineForm; 3],
}

/// Symbolic counterpart of [`resolve_market`].
pub fn resolve_affine(params: &ModelParams, assignment: StrategyAssignment) -> Result<AffineMarket> {
    let (a, bmat, c) = pinning_system(params, assignment);
    let rhs: Matrix = bmat.into_iter().zip(c).map(|(mut row, ci)| {
        row.push(ci);
        row
    }).collect();
    let sol = linalg::solve_linear_multi(&a, &rhs)?;
    let x: [AffineForm; 3] = std::array::from_fn(|i| AffineForm {
        coeffs: sol[i][..3].to_vec(),
        constant: sol[i][3].clone(),
    });
    let p = std::array::from_fn(|i| {
        let row = params.demand_row(i);
        let mut f = AffineForm::constant(3, params.a().clone());
        for (j, w) in row.iter().enumerate() {
            f = f.sub(&x[j].scale(w));
        }
        f
    });
    Ok(AffineMarket { x, p })
}

pub fn profit(params: &ModelParams, firm: Firm, state: &MarketState) -> Rational {
    let i = firm.index();
    (&state.p[i] - params.cost(firm)) * &state.x[i]
}

/// Absolute profits `pi` and relative profits `psi`, where
/// `psi_i = pi_i − (pi_j + pi_k)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PayoffVector {
    pub psi: Triple,
    pub pi: Triple,
}

pub fn payoff_vector(params: &ModelParams, state: &MarketState) -> PayoffVector {
    let pi = Firm::ALL.map(|f| profit(params, f, state));
    let half = Rational::frac(1, 2);
    let psi: Triple = Firm::ALL.map(|f| {
        let [j, k] = f.rivals();
        &pi[f.index()] - (&pi[j.index()] + &pi[k.index()]) * &half
    });
    debug_assert!(psi.iter().sum::<Rational>().is_zero(), "relative profits must sum to zero");
    PayoffVector { psi, pi }
}

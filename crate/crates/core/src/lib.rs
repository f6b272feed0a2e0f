//! Nash equilibria of a three-firm relative-profit oligopoly with
//! differentiated goods, where each firm competes either in quantity or in
//! price.
//!
//! Every payoff in this game is quadratic in the chosen strategic
//! variables, so equilibria are solutions of small exact linear systems.
//! The crate solves them over arbitrary-precision rationals and checks,
//! without rounding, which strategy assignments lead to the same market
//! outcome.
//!
//! ```
//! use triopoly::{solve_equilibrium, ModelParams, Pattern, Rational};
//!
//! let r = |s: &str| s.parse::<Rational>().unwrap();
//! let params = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();
//! let cournot = solve_equilibrium(&params, Pattern::P1.assignment()).unwrap();
//! assert_eq!(cournot.state.x()[0], r("114/35"));
//! ```

pub mod cli;
pub mod closed_form;
pub mod equilibrium;
pub mod error;
pub mod linalg;
pub mod market;
pub mod rational;
pub mod report;
pub mod verification;

pub use closed_form::{closed_form_outputs, typo_ledger, ClosedForm};
pub use equilibrium::{
    best_response, best_response_iteration, build_payoff_quadratic, solve_equilibrium, Equilibrium,
    IterationOptions, IterationOutcome, QuadraticPayoff,
};
pub use error::{Error, Result};
pub use linalg::{solve_linear, QuadraticForm};
pub use market::{
    direct_demand, inverse_demand, payoff_vector, profit, resolve_market, Choice, Firm, MarketState, ModelParams,
    Pattern, PayoffVector, StrategyAssignment,
};
pub use rational::Rational;
pub use verification::{
    check_equivalence, equivalence_matrix, minimax_check, property_suite, GridSpec, MinimaxReport, MinimaxSlice,
    SuiteReport,
};

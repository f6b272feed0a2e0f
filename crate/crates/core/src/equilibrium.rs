//! Nash equilibria of the relative-profit game.
//!
//! Each firm's relative profit is an exact quadratic form in the vector of
//! chosen strategic variables. Stacking the three own-coordinate first
//! order conditions gives a 3×3 linear system whose solution is the
//! equilibrium. [`best_response_iteration`] reaches the same point by damped
//! simultaneous best responses in floating point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, QuadraticForm};
use crate::market::{self, AffineMarket, Firm, MarketState, ModelParams, PayoffVector, StrategyAssignment};
use crate::rational::Rational;

/// A firm's relative profit over the chosen 3-vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPayoff {
    pub firm: Firm,
    pub assignment: StrategyAssignment,
    pub form: QuadraticForm,
}

impl QuadraticPayoff {
    pub fn own_curvature(&self) -> Rational {
        self.form.curvature(self.firm.index())
    }

    pub fn is_strictly_concave_in_own(&self) -> bool {
        self.own_curvature().is_negative()
    }

    /// Row of the stacked first-order system: coefficients and right-hand
    /// side of `∂ψ/∂v_own = 0`.
    fn foc_row(&self) -> (Vec<Rational>, Rational) {
        let i = self.firm.index();
        let two = Rational::integer(2);
        let coeffs = self.form.q()[i].iter().map(|q| q * &two).collect();
        (coeffs, -&self.form.l()[i])
    }

    /// Maximizer in the own coordinate with the rivals' variables (in A, B,
    /// C order, own slot skipped) held fixed.
    pub fn best_response(&self, others: &[Rational; 2]) -> Result<Rational> {
        if !self.is_strictly_concave_in_own() {
            return Err(Error::ConcavityViolation { firm: self.firm });
        }
        let i = self.firm.index();
        let (row, rhs) = self.foc_row();
        let rivals = self.firm.rivals();
        let off: Rational = rivals.iter().zip(others).map(|(f, v)| &row[f.index()] * v).sum();
        Ok((rhs - off) / &row[i])
    }
}

/// Relative profit of `firm` as a quadratic form in the chosen variables.
pub fn build_payoff_quadratic(
    params: &ModelParams,
    assignment: StrategyAssignment,
    firm: Firm,
) -> Result<QuadraticPayoff> {
    let aff = market::resolve_affine(params, assignment)?;
    Ok(payoff_from_affine(params, assignment, &aff, firm))
}

fn payoff_from_affine(params: &ModelParams, assignment: StrategyAssignment, aff: &AffineMarket, firm: Firm) -> QuadraticPayoff {
    let profit = |f: Firm| {
        let i = f.index();
        let margin = aff.p[i].add(&linalg::AffineForm::constant(3, -params.cost(f)));
        margin.mul(&aff.x[i])
    };
    let half = Rational::frac(-1, 2);
    let [j, k] = firm.rivals();
    let form = profit(firm).combine(&profit(j), &half).combine(&profit(k), &half);
    QuadraticPayoff { firm, assignment, form }
}

pub fn best_response(
    params: &ModelParams,
    assignment: StrategyAssignment,
    firm: Firm,
    others: &[Rational; 2],
) -> Result<Rational> {
    build_payoff_quadratic(params, assignment, firm)?.best_response(others)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquilibriumFlags {
    /// Every output and price is nonnegative.
    pub interior: bool,
    /// Every firm's payoff is strictly concave in its own variable.
    pub soc_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub assignment: StrategyAssignment,
    /// Equilibrium value of each firm's own strategic variable.
    pub chosen: [Rational; 3],
    pub state: MarketState,
    pub payoffs: PayoffVector,
    pub flags: EquilibriumFlags,
}

/// All three relative-profit forms for one assignment.
pub fn payoff_system(params: &ModelParams, assignment: StrategyAssignment) -> Result<[QuadraticPayoff; 3]> {
    let aff = market::resolve_affine(params, assignment)?;
    Ok(Firm::ALL.map(|f| payoff_from_affine(params, assignment, &aff, f)))
}

pub fn solve_equilibrium(params: &ModelParams, assignment: StrategyAssignment) -> Result<Equilibrium> {
    let payoffs = payoff_system(params, assignment)?;
    if let Some(bad) = payoffs.iter().find(|p| !p.is_strictly_concave_in_own()) {
        return Err(Error::ConcavityViolation { firm: bad.firm });
    }
    let (rows, rhs): (Vec<_>, Vec<_>) = payoffs.iter().map(QuadraticPayoff::foc_row).unzip();
    let chosen = linalg::solve_linear(&rows, &rhs)?;
    for p in &payoffs {
        let g = p.form.grad(&chosen)?;
        assert!(g[p.firm.index()].is_zero(), "own gradient must vanish at equilibrium");
    }
    let chosen: [Rational; 3] = [chosen[0].clone(), chosen[1].clone(), chosen[2].clone()];
    let state = market::resolve_market(params, assignment, &chosen)?;
    let payoff_values = market::payoff_vector(params, &state);
    let flags = EquilibriumFlags { interior: state.is_nonnegative(), soc_ok: true };
    Ok(Equilibrium { assignment, chosen, state, payoffs: payoff_values, flags })
}

/// Double-precision solve of the same stacked system. Coefficients are
/// extracted exactly and rounded once.
pub fn solve_equilibrium_f64(params: &ModelParams, assignment: StrategyAssignment) -> Result<FloatEquilibrium> {
    params.check_float_safe()?;
    let payoffs = payoff_system(params, assignment)?;
    if let Some(bad) = payoffs.iter().find(|p| !p.is_strictly_concave_in_own()) {
        return Err(Error::ConcavityViolation { firm: bad.firm });
    }
    let (rows, rhs): (Vec<Vec<f64>>, Vec<f64>) = payoffs
        .iter()
        .map(|p| {
            let (r, b) = p.foc_row();
            (r.iter().map(Rational::to_f64).collect(), b.to_f64())
        })
        .unzip();
    let chosen = linalg::solve_linear_f64(rows, rhs)?;
    let aff = market::resolve_affine(params, assignment)?;
    let eval = |f: &linalg::AffineForm| {
        f.coeffs.iter().zip(&chosen).map(|(c, v)| c.to_f64() * v).sum::<f64>() + f.constant.to_f64()
    };
    let x: [f64; 3] = std::array::from_fn(|i| eval(&aff.x[i]));
    let p: [f64; 3] = std::array::from_fn(|i| eval(&aff.p[i]));
    let pi: [f64; 3] = std::array::from_fn(|i| (p[i] - params.costs()[i].to_f64()) * x[i]);
    let psi = std::array::from_fn(|i| pi[i] - (pi.iter().sum::<f64>() - pi[i]) / 2.0);
    Ok(FloatEquilibrium {
        assignment,
        chosen: [chosen[0], chosen[1], chosen[2]],
        x,
        p,
        psi,
        pi,
        flags: EquilibriumFlags { interior: x.iter().chain(&p).all(|v| *v >= 0.0), soc_ok: true },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatEquilibrium {
    pub assignment: StrategyAssignment,
    pub chosen: [f64; 3],
    pub x: [f64; 3],
    pub p: [f64; 3],
    pub psi: [f64; 3],
    pub pi: [f64; 3],
    pub flags: EquilibriumFlags,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub damping: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        IterationOptions { max_iter: 10_000, tol: 1e-12, damping: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    pub chosen: [f64; 3],
    pub converged: bool,
    pub iterations: usize,
}

/// Damped simultaneous best-response dynamics
/// `v ← (1 − d)·v + d·BR(v)`, stopping once no coordinate moves by more
/// than `tol`.
pub fn best_response_iteration(
    params: &ModelParams,
    assignment: StrategyAssignment,
    init: [f64; 3],
    opts: IterationOptions,
) -> Result<IterationOutcome> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidOptions("tol must be positive".into()));
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::InvalidOptions("damping must lie in (0, 1]".into()));
    }
    let payoffs = payoff_system(params, assignment)?;
    let mut rows = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for p in &payoffs {
        if !p.is_strictly_concave_in_own() {
            return Err(Error::ConcavityViolation { firm: p.firm });
        }
        let i = p.firm.index();
        let (row, b) = p.foc_row();
        for (slot, v) in rows[i].iter_mut().zip(&row) {
            *slot = v.to_f64();
        }
        rhs[i] = b.to_f64();
    }

    let mut v = init;
    for iter in 0..opts.max_iter {
        let br: [f64; 3] = std::array::from_fn(|i| {
            let off: f64 = (0..3).filter(|&j| j != i).map(|j| rows[i][j] * v[j]).sum();
            (rhs[i] - off) / rows[i][i]
        });
        let next: [f64; 3] = std::array::from_fn(|i| (1.0 - opts.damping) * v[i] + opts.damping * br[i]);
        let step = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if !step.is_finite() {
            return Ok(IterationOutcome { chosen: v, converged: false, iterations: iter + 1 });
        }
        if step <= opts.tol {
            return Ok(IterationOutcome { chosen: v, converged: true, iterations: iter + 1 });
        }
    }
    Ok(IterationOutcome { chosen: v, converged: false, iterations: opts.max_iter })
}

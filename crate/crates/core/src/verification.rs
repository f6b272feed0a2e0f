//! Machine checks of the equilibrium-equivalence results, the zero-sum
//! structure and the minimax equalities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form;
use crate::equilibrium::{self, Equilibrium};
use crate::error::{Error, Result};
use crate::linalg::{FloatQuadratic, QuadraticForm};
use crate::market::{self, Choice, Firm, MarketState, ModelParams, Pattern, StrategyAssignment};
use crate::rational::Rational;

/// Uniform grid on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    lo: Rational,
    hi: Rational,
    points: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 1001;

    pub fn new(lo: Rational, hi: Rational, points: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidGrid("lo must be below hi".into()));
        }
        if points < 3 {
            return Err(Error::InvalidGrid("at least 3 points required".into()));
        }
        Ok(GridSpec { lo, hi, points })
    }

    /// `[0, a]` with the default point count.
    pub fn for_params(params: &ModelParams) -> Self {
        GridSpec { lo: Rational::zero(), hi: params.a().clone(), points: Self::DEFAULT_POINTS }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        (&self.hi - &self.lo).to_f64() / (self.points - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let lo = self.lo.to_f64();
        let hi = self.hi.to_f64();
        let n = self.points - 1;
        (0..=n).map(move |i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
    }
}

// ---------------------------------------------------------------------------
// Equivalence
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub left: StrategyAssignment,
    pub right: StrategyAssignment,
    pub equal: bool,
    pub max_abs_diff: Rational,
    /// Both equilibrium states when they differ.
    pub witness: Option<(MarketState, MarketState)>,
}

fn compare_states(left: &Equilibrium, right: &Equilibrium) -> EquivalenceReport {
    let max_abs_diff = left
        .state
        .components()
        .zip(right.state.components())
        .map(|(l, r)| (l - r).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let equal = max_abs_diff.is_zero();
    EquivalenceReport {
        left: left.assignment,
        right: right.assignment,
        equal,
        max_abs_diff,
        witness: (!equal).then(|| (left.state.clone(), right.state.clone())),
    }
}

/// Solves both assignments exactly and compares the resulting market states.
pub fn check_equivalence(
    params: &ModelParams,
    left: StrategyAssignment,
    right: StrategyAssignment,
) -> Result<EquivalenceReport> {
    let l = equilibrium::solve_equilibrium(params, left)?;
    let r = equilibrium::solve_equilibrium(params, right)?;
    Ok(compare_states(&l, &r))
}

/// Pairwise reports among the six named patterns, indexed by pattern
/// number minus one.
pub fn equivalence_matrix(params: &ModelParams) -> Result<Vec<Vec<EquivalenceReport>>> {
    let eqs: Vec<Equilibrium> = Pattern::ALL
        .iter()
        .map(|p| equilibrium::solve_equilibrium(params, p.assignment()))
        .collect::<Result<_>>()?;
    Ok(eqs.iter().map(|l| eqs.iter().map(|r| compare_states(l, r)).collect()).collect())
}

/// Unordered pairs `(i, j)`, `i < j`, of pattern numbers whose equilibria
/// coincide.
pub fn equal_pairs(matrix: &[Vec<EquivalenceReport>]) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        for (j, rep) in row.iter().enumerate().skip(i + 1) {
            if rep.equal {
                out.push((i as u8 + 1, j as u8 + 1));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Minimax
// ---------------------------------------------------------------------------

/// Whether the minimizing firm's variable is its quantity only (`Direct`)
/// or is additionally re-parameterized through its price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Transform {
    Direct,
    ViaOtherVariable,
}

/// A two-variable slice of one firm's relative profit.
///
/// `payoff_firm` maximizes over its own quantity, `min_firm` minimizes over
/// its quantity (and, for [`Transform::ViaOtherVariable`], its price), and
/// the remaining firm's quantity is pinned at `fixed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaxSlice {
    pub payoff_firm: Firm,
    pub min_firm: Firm,
    pub fixed: Rational,
    pub transform: Transform,
}

impl MinimaxSlice {
    pub fn fixed_firm(&self) -> Result<Firm> {
        Firm::ALL
            .into_iter()
            .find(|f| *f != self.payoff_firm && *f != self.min_firm)
            .filter(|_| self.payoff_firm != self.min_firm)
            .ok_or_else(|| Error::InvalidParams("payoff firm and minimizing firm must differ".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxQuantity {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxReport {
    pub quantities: Vec<MinimaxQuantity>,
    pub spread: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Grid step.
    pub h: f64,
    /// Bound on the outer-variable partial derivatives over the box.
    pub g: f64,
}

/// Exact optimum of `c2·t² + c1·t + c0` over `[lo, hi]`.
fn optimize_1d(c2: f64, c1: f64, c0: f64, lo: f64, hi: f64, maximize: bool) -> f64 {
    let f = |t: f64| (c2 * t + c1) * t + c0;
    let mut best = if maximize { f(lo).max(f(hi)) } else { f(lo).min(f(hi)) };
    if c2 != 0.0 {
        let vertex = (-c1 / (2.0 * c2)).clamp(lo, hi);
        best = if maximize { best.max(f(vertex)) } else { best.min(f(vertex)) };
    }
    best
}

fn check_not_constant(form: &QuadraticForm, coordinate: usize) -> Result<()> {
    let other = 1 - coordinate;
    if form.q()[coordinate][coordinate].is_zero() && form.q()[coordinate][other].is_zero() && form.l()[coordinate].is_zero() {
        return Err(Error::DegenerateSlice { coordinate });
    }
    Ok(())
}

/// `(min_y max_x f, max_x min_y f)` for a two-variable form with `x` at
/// index 0 and `y` at index 1. The inner optimum is exact; the outer runs
/// over the grid.
fn saddle_values(form: &QuadraticForm, grid: &GridSpec) -> Result<(f64, f64)> {
    if form.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: form.dim() });
    }
    check_not_constant(form, 0)?;
    check_not_constant(form, 1)?;
    let FloatQuadratic { q, l, k } = form.to_f64();
    let (lo, hi) = (grid.lo.to_f64(), grid.hi.to_f64());

    let min_max = grid
        .values()
        .map(|y| optimize_1d(q[0][0], 2.0 * q[0][1] * y + l[0], (q[1][1] * y + l[1]) * y + k, lo, hi, true))
        .fold(f64::INFINITY, f64::min);
    let max_min = grid
        .values()
        .map(|x| optimize_1d(q[1][1], 2.0 * q[0][1] * x + l[1], (q[0][0] * x + l[0]) * x + k, lo, hi, false))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((min_max, max_min))
}

/// Largest `|∂f/∂x|`, `|∂f/∂y|` over the box. Both partials are affine, so
/// the corners suffice.
fn gradient_bound(form: &QuadraticForm, grid: &GridSpec) -> Result<Rational> {
    let corners = [grid.lo.clone(), grid.hi.clone()];
    let mut best = Rational::zero();
    for x in &corners {
        for y in &corners {
            for g in form.grad(&[x.clone(), y.clone()])? {
                best = best.max(g.abs());
            }
        }
    }
    Ok(best)
}

/// Min-max and max-min values of `direct`, and of `transformed` when
/// given, with the spread of all values and the tolerance `2·h·G`.
pub fn minimax_chain(direct: &QuadraticForm, transformed: Option<&QuadraticForm>, grid: &GridSpec) -> Result<MinimaxReport> {
    let h = grid.step();
    let mut g = gradient_bound(direct, grid)?;
    let (mm, xm) = saddle_values(direct, grid)?;
    let mut quantities = vec![
        MinimaxQuantity { label: "min_t max_t".into(), value: mm },
        MinimaxQuantity { label: "max_t min_t".into(), value: xm },
    ];
    if let Some(t) = transformed {
        g = g.max(gradient_bound(t, grid)?);
        let (mm, xm) = saddle_values(t, grid)?;
        quantities.push(MinimaxQuantity { label: "min_s max_t".into(), value: mm });
        quantities.push(MinimaxQuantity { label: "max_t min_s".into(), value: xm });
    }
    let hi = quantities.iter().map(|q| q.value).fold(f64::NEG_INFINITY, f64::max);
    let lo = quantities.iter().map(|q| q.value).fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    let g = g.to_f64();
    let tolerance = 2.0 * h * g;
    Ok(MinimaxReport { quantities, spread, tolerance, pass: spread <= tolerance, h, g })
}

/// Restricts `payoff_firm`'s relative profit under `assignment` to the
/// (payoff firm, min firm) coordinates.
fn slice_form(params: &ModelParams, slice: &MinimaxSlice, assignment: StrategyAssignment) -> Result<QuadraticForm> {
    let fixed_firm = slice.fixed_firm()?;
    let payoff = equilibrium::build_payoff_quadratic(params, assignment, slice.payoff_firm)?;
    let mut point = vec![Rational::zero(); 3];
    point[fixed_firm.index()] = slice.fixed.clone();
    payoff.form.restrict(&[slice.payoff_firm.index(), slice.min_firm.index()], &point)
}

pub fn minimax_check(params: &ModelParams, slice: &MinimaxSlice, grid: &GridSpec) -> Result<MinimaxReport> {
    let direct = slice_form(params, slice, Pattern::P1.assignment())?;
    match slice.transform {
        Transform::Direct => minimax_chain(&direct, None, grid),
        Transform::ViaOtherVariable => {
            let mut choices = [Choice::Quantity; 3];
            choices[slice.min_firm.index()] = Choice::Price;
            let via = slice_form(params, slice, StrategyAssignment(choices))?;
            minimax_chain(&direct, Some(&via), grid)
        }
    }
}

/// The slice through the Cournot equilibrium: `payoff_firm` against firm C,
/// with the remaining firm's output fixed at its equilibrium value.
pub fn equilibrium_slice(params: &ModelParams, payoff_firm: Firm) -> Result<MinimaxSlice> {
    let min_firm = if payoff_firm == Firm::C { Firm::A } else { Firm::C };
    let eq = equilibrium::solve_equilibrium(params, Pattern::P1.assignment())?;
    let fixed_firm = Firm::ALL.into_iter().find(|f| *f != payoff_firm && *f != min_firm).expect("three firms");
    Ok(MinimaxSlice {
        payoff_firm,
        min_firm,
        fixed: eq.state.x()[fixed_firm.index()].clone(),
        transform: Transform::ViaOtherVariable,
    })
}

// ---------------------------------------------------------------------------
// Property suite
// ---------------------------------------------------------------------------

/// Deterministic parameter sampler: `a ∈ {5, …, 50}`, `b = k/64` with
/// `k ∈ {1, …, 63}`, costs `j/8` below `a`, `c_B = c_A`, and `c_C = c_A`
/// on roughly one draw in eight.
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        ParamSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn cost(&mut self, a: i64) -> Rational {
        Rational::frac(self.rng.random_range(0..8 * a), 8)
    }

    pub fn next_params(&mut self) -> ModelParams {
        let a = self.rng.random_range(5..=50i64);
        let b = Rational::frac(self.rng.random_range(1..=63), 64);
        let c_a = self.cost(a);
        let c_c = if self.rng.random_range(0..8) == 0 { c_a.clone() } else { self.cost(a) };
        ModelParams::new(Rational::integer(a), b, c_a.clone(), c_a, c_c).expect("sampler stays in the valid region")
    }

    /// Outputs with numerators in `[-50, 50]` and denominators in `[1, 16]`.
    pub fn next_outputs(&mut self) -> [Rational; 3] {
        std::array::from_fn(|_| Rational::frac(self.rng.random_range(-50..=50), self.rng.random_range(1..=16)))
    }
}

/// Which closed-form variant the oracle-agreement property compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum OracleKind {
    #[default]
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    pub oracle: OracleKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub draw: usize,
    pub params: ModelParams,
    pub detail: String,
    pub states: Vec<MarketState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub status: Status,
    /// Draws on which the property applied.
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub draws: usize,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.status != Status::Fail)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

pub const PROPERTY_NAMES: [&str; 12] = [
    "zero_sum",
    "demand_round_trip",
    "foc_residual",
    "oracle_agreement",
    "ab_symmetry",
    "swap_covariance",
    "cournot_matches_qqp",
    "bertrand_matches_ppq",
    "nonequivalence_p1_p3",
    "nonequivalence_p6_p5",
    "nonequivalence_p1_p6",
    "symmetric_collapse",
];

enum Outcome {
    Pass,
    Fail(String, Vec<MarketState>),
    NotApplicable,
}

impl Outcome {
    fn check(ok: bool, detail: impl FnOnce() -> (String, Vec<MarketState>)) -> Self {
        if ok {
            Outcome::Pass
        } else {
            let (d, s) = detail();
            Outcome::Fail(d, s)
        }
    }
}

struct Draw {
    params: ModelParams,
    states: Vec<[Rational; 3]>,
}

const STATES_PER_DRAW: usize = 10;

fn evaluate_draw(draw: &Draw, opts: &SuiteOptions) -> Result<Vec<Outcome>> {
    let p = &draw.params;
    let mut out = Vec::with_capacity(PROPERTY_NAMES.len());

    // zero_sum and demand_round_trip on random states
    let mut zero_sum = Outcome::Pass;
    let mut round_trip = Outcome::Pass;
    for x in &draw.states {
        let state = MarketState::from_outputs(p, x.clone());
        let pv = market::payoff_vector(p, &state);
        if !pv.psi.iter().sum::<Rational>().is_zero() {
            zero_sum = Outcome::Fail(format!("sum of psi = {}", pv.psi.iter().sum::<Rational>()), vec![state.clone()]);
        }
        let prices = market::inverse_demand(p, x);
        let back = market::direct_demand(p, &prices);
        let again = market::inverse_demand(p, &back);
        if &back != x || again != prices {
            round_trip = Outcome::Fail("direct_demand(inverse_demand(x)) != x".into(), vec![state]);
        }
    }
    out.push(zero_sum);
    out.push(round_trip);

    let eqs: Vec<Equilibrium> = StrategyAssignment::all()
        .iter()
        .map(|&asg| equilibrium::solve_equilibrium(p, asg))
        .collect::<Result<_>>()?;
    let eq_of = |asg: StrategyAssignment| eqs.iter().find(|e| e.assignment == asg).expect("all assignments solved");
    let pat = |n: Pattern| eq_of(n.assignment());

    // foc_residual
    let mut foc = Outcome::Pass;
    for e in &eqs {
        for q in equilibrium::payoff_system(p, e.assignment)? {
            let f = q.firm;
            let g = q.form.grad(&e.chosen)?;
            if !g[f.index()].is_zero() {
                foc = Outcome::Fail(format!("{} firm {f}: own gradient {}", e.assignment, g[f.index()]), vec![e.state.clone()]);
            }
        }
    }
    out.push(foc);

    let ab = p.ab_symmetric();

    // oracle_agreement
    out.push(if ab {
        let mut o = Outcome::Pass;
        for pattern in Pattern::ALL {
            let cf = closed_form::closed_form_outputs(p, pattern)?;
            let oracle = match opts.oracle {
                OracleKind::Corrected => &cf.corrected,
                OracleKind::Printed => &cf.printed,
            };
            let solved = pat(pattern).state.x();
            if let Some(i) = (0..3).find(|&i| oracle[i] != solved[i]) {
                let firm = Firm::from_index(i).expect("index < 3");
                o = Outcome::Fail(
                    format!("pattern {pattern} x{firm}: oracle {} vs solver {}", oracle[i], solved[i]),
                    vec![pat(pattern).state.clone()],
                );
                break;
            }
        }
        o
    } else {
        Outcome::NotApplicable
    });

    // ab_symmetry
    out.push(if ab {
        let bad = [Pattern::P1, Pattern::P2, Pattern::P4, Pattern::P6].into_iter().find(|&n| {
            let s = &pat(n).state;
            s.x()[0] != s.x()[1] || s.p()[0] != s.p()[1]
        });
        Outcome::check(bad.is_none(), || {
            let n = bad.expect("failing pattern");
            (format!("pattern {n}: A and B differ"), vec![pat(n).state.clone()])
        })
    } else {
        Outcome::NotApplicable
    });

    // swap_covariance: relabelling A and B in both the costs and the
    // assignment relabels the equilibrium.
    let swapped = p.swap_ab();
    let mut swap = Outcome::Pass;
    for e in &eqs {
        let mirror = equilibrium::solve_equilibrium(&swapped, e.assignment.swap_ab())?;
        if mirror.state != e.state.swap_ab() {
            swap = Outcome::Fail(format!("{} vs swapped {}", e.assignment, mirror.assignment), vec![e.state.clone(), mirror.state]);
            break;
        }
    }
    out.push(swap);

    let pair = |l: Pattern, r: Pattern| compare_states(pat(l), pat(r));
    let expect_equal = |l: Pattern, r: Pattern| {
        if !ab {
            return Outcome::NotApplicable;
        }
        let rep = pair(l, r);
        Outcome::check(rep.equal, || (format!("patterns {l} and {r} differ by {}", rep.max_abs_diff), vec![pat(l).state.clone(), pat(r).state.clone()]))
    };
    out.push(expect_equal(Pattern::P1, Pattern::P2));
    out.push(expect_equal(Pattern::P6, Pattern::P4));

    let c_differs = p.cost(Firm::C) != p.cost(Firm::A);
    let expect_unequal = |l: Pattern, r: Pattern| {
        if !(ab && c_differs) {
            return Outcome::NotApplicable;
        }
        let rep = pair(l, r);
        Outcome::check(!rep.equal, || (format!("patterns {l} and {r} coincide"), vec![pat(l).state.clone()]))
    };
    out.push(expect_unequal(Pattern::P1, Pattern::P3));
    out.push(expect_unequal(Pattern::P6, Pattern::P5));
    out.push(expect_unequal(Pattern::P1, Pattern::P6));

    // symmetric_collapse
    out.push(if ab && !c_differs {
        let c = p.cost(Firm::A);
        let common = (p.a() - c) / (p.b() + Rational::integer(2));
        let target = [common.clone(), common.clone(), common];
        let bad = Pattern::ALL.into_iter().find(|&n| pat(n).state.x() != &target);
        Outcome::check(bad.is_none(), || {
            let n = bad.expect("failing pattern");
            (format!("pattern {n} departs from (a-c)/(2+b)"), vec![pat(n).state.clone()])
        })
    } else {
        Outcome::NotApplicable
    });

    debug_assert_eq!(out.len(), PROPERTY_NAMES.len());
    Ok(out)
}

/// Runs every property over `params` (draw 0) followed by `draws − 1`
/// seeded random parameter sets.
pub fn property_suite(params: &ModelParams, draws: usize, seed: u64) -> Result<SuiteReport> {
    property_suite_with(params, draws, seed, &SuiteOptions::default())
}

pub fn property_suite_with(params: &ModelParams, draws: usize, seed: u64, opts: &SuiteOptions) -> Result<SuiteReport> {
    if draws == 0 {
        return Err(Error::InvalidParams("draws must be at least 1".into()));
    }
    let mut sampler = ParamSampler::new(seed);
    let mut inputs = Vec::with_capacity(draws);
    for i in 0..draws {
        let params = if i == 0 { params.clone() } else { sampler.next_params() };
        let states = (0..STATES_PER_DRAW).map(|_| sampler.next_outputs()).collect();
        inputs.push(Draw { params, states });
    }

    let outcomes: Vec<Vec<Outcome>> = inputs.par_iter().map(|d| evaluate_draw(d, opts)).collect::<Result<_>>()?;

    let properties = PROPERTY_NAMES
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let mut checked = 0;
            let mut counterexample = None;
            for (draw, row) in outcomes.iter().enumerate() {
                match &row[k] {
                    Outcome::Pass => checked += 1,
                    Outcome::Fail(detail, states) => {
                        checked += 1;
                        if counterexample.is_none() {
                            counterexample = Some(Counterexample {
                                draw,
                                params: inputs[draw].params.clone(),
                                detail: detail.clone(),
                                states: states.clone(),
                            });
                        }
                    }
                    Outcome::NotApplicable => {}
                }
            }
            let status = match (&counterexample, checked) {
                (Some(_), _) => Status::Fail,
                (None, 0) => Status::Skipped,
                (None, _) => Status::Pass,
            };
            PropertyResult { name, status, checked, counterexample }
        })
        .collect();

    Ok(SuiteReport { draws, seed, properties })
}

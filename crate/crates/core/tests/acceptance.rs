//! Acceptance criteria. Runs outside the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even when others fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triopoly::verification::{equilibrium_slice, ParamSampler};
use triopoly::{
    best_response_iteration, closed_form_outputs, minimax_check, payoff_vector, resolve_market, solve_equilibrium,
    solve_linear, typo_ledger, Equilibrium, Firm, GridSpec, IterationOptions, ModelParams, Pattern, Rational,
    StrategyAssignment,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const DRAWS: usize = 1000;
const SEED: u64 = 20_240_611;

fn r(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn example_params() -> ModelParams {
    ModelParams::new(r(10, 1), r(1, 2), r(2, 1), r(2, 1), r(3, 1)).unwrap()
}

fn draws(n: usize, seed: u64) -> Vec<ModelParams> {
    let mut sampler = ParamSampler::new(seed);
    (0..n).map(|_| sampler.next_params()).collect()
}

/// Equilibria for all six patterns on one parameter draw.
fn solve_patterns(params: &ModelParams) -> Result<Vec<Equilibrium>, String> {
    Pattern::ALL
        .iter()
        .map(|p| solve_equilibrium(params, p.assignment()).map_err(|e| format!("{params:?} {p}: {e}")))
        .collect()
}

fn closed_forms_match_solver(sample: &[ModelParams]) -> Outcome {
    let start = Instant::now();
    for params in sample {
        for (pattern, eq) in Pattern::ALL.iter().zip(solve_patterns(params)?) {
            let cf = closed_form_outputs(params, *pattern).map_err(|e| e.to_string())?;
            if &cf.corrected != eq.state.x() {
                return Err(format!("{params:?} {pattern}: closed form {:?} vs solver {:?}", cf.corrected, eq.state.x()));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("correct but took {:.2?}", elapsed));
    }
    Ok(format!("{} draws x 6 patterns in {:.2?}", sample.len(), elapsed))
}

fn pattern_pair_equal(sample: &[ModelParams], left: Pattern, right: Pattern) -> Outcome {
    for params in sample {
        let l = solve_equilibrium(params, left.assignment()).map_err(|e| e.to_string())?;
        let rr = solve_equilibrium(params, right.assignment()).map_err(|e| e.to_string())?;
        if l.state != rr.state {
            return Err(format!("{params:?}: {left} {:?} vs {right} {:?}", l.state, rr.state));
        }
    }
    Ok(format!("{} draws, states identical", sample.len()))
}

fn nonequivalence_and_collapse(sample: &[ModelParams]) -> Outcome {
    let (mut asym, mut sym) = (0usize, 0usize);
    for params in sample {
        let eqs = solve_patterns(params)?;
        let state = |p: usize| eqs[p - 1].state.clone();
        let c_a = params.cost(Firm::A);
        if params.cost(Firm::C) != c_a {
            asym += 1;
            for (i, j) in [(1, 3), (6, 5), (1, 6)] {
                if state(i) == state(j) {
                    return Err(format!("{params:?}: patterns {i} and {j} coincide"));
                }
            }
        } else {
            sym += 1;
            let expected = (params.a() - c_a) / &(Rational::integer(2) + params.b());
            for (n, eq) in eqs.iter().enumerate() {
                if eq.state.x().iter().any(|x| *x != expected) {
                    return Err(format!("{params:?}: pattern {} gives {:?}, expected {expected}", n + 1, eq.state.x()));
                }
            }
        }
    }
    if asym == 0 || sym == 0 {
        return Err(format!("sample lacks a case: {asym} asymmetric, {sym} symmetric"));
    }
    Ok(format!("{asym} asymmetric draws distinct, {sym} symmetric draws collapse"))
}

/// Central differences of the market-level payoff along each firm's own
/// variable. Payoffs are quadratic, so the first difference is the exact
/// derivative.
fn market_foc_holds(params: &ModelParams, asg: StrategyAssignment, chosen: &[Rational; 3]) -> Result<(), String> {
    let h = r(1, 7);
    let psi = |v: &[Rational; 3], f: Firm| -> Result<Rational, String> {
        let state = resolve_market(params, asg, v).map_err(|e| e.to_string())?;
        Ok(payoff_vector(params, &state).psi[f.index()].clone())
    };
    for f in Firm::ALL {
        let mut up = chosen.clone();
        let mut down = chosen.clone();
        up[f.index()] += &h;
        down[f.index()] -= &h;
        let (pu, pd, p0) = (psi(&up, f)?, psi(&down, f)?, psi(chosen, f)?);
        if !(&pu - &pd).is_zero() {
            return Err(format!("{asg}: firm {f} has nonzero own derivative"));
        }
        if !(pu + pd - p0.clone() - p0).is_negative() {
            return Err(format!("{asg}: firm {f} is not at a maximum"));
        }
    }
    Ok(())
}

fn spot_values() -> Outcome {
    let params = example_params();
    let p1 = [r(114, 35), r(114, 35), r(94, 35)];
    let p6 = [r(216, 65), r(216, 65), r(166, 65)];

    // Cournot FOC written out by hand: 2x_i + (b/2)(x_j + x_k) = a − c_i.
    let b2 = r(1, 4);
    let two = Rational::integer(2);
    let matrix = vec![
        vec![two.clone(), b2.clone(), b2.clone()],
        vec![b2.clone(), two.clone(), b2.clone()],
        vec![b2.clone(), b2, two],
    ];
    let rhs = [r(8, 1), r(8, 1), r(7, 1)];
    let by_hand = solve_linear(&matrix, &rhs).map_err(|e| e.to_string())?;
    if by_hand != p1 {
        return Err(format!("hand-built Cournot system gives {by_hand:?}"));
    }

    for (pattern, expected) in [(Pattern::P1, &p1), (Pattern::P6, &p6)] {
        let eq = solve_equilibrium(&params, pattern.assignment()).map_err(|e| e.to_string())?;
        if eq.state.x() != expected {
            return Err(format!("{pattern}: solver gives {:?}", eq.state.x()));
        }
        market_foc_holds(&params, pattern.assignment(), &eq.chosen)?;
    }
    Ok("P1 = (114/35, 114/35, 94/35), P6 = (216/65, 216/65, 166/65)".into())
}

fn zero_sum() -> Outcome {
    let start = Instant::now();
    let mut sampler = ParamSampler::new(SEED ^ 0x5eed);
    let mut count = 0usize;
    for _ in 0..100 {
        let params = sampler.next_params();
        for _ in 0..100 {
            let x = sampler.next_outputs();
            let state = triopoly::MarketState::from_outputs(&params, x);
            let total: Rational = payoff_vector(&params, &state).psi.iter().sum();
            if !total.is_zero() {
                return Err(format!("{params:?} at {:?}: sum {total}", state.x()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} states, sum exactly 0, {:.2?}", start.elapsed()))
}

fn minimax_chain() -> Outcome {
    let start = Instant::now();
    let mut sampler = ParamSampler::new(SEED ^ 0x1e33a2);
    let (mut used, mut skipped, mut worst) = (0usize, 0usize, 0.0f64);
    while used < 50 {
        let params = sampler.next_params();
        let eq = solve_equilibrium(&params, Pattern::P1.assignment()).map_err(|e| e.to_string())?;
        if !eq.flags.interior {
            skipped += 1;
            continue;
        }
        used += 1;
        let grid = GridSpec::for_params(&params);
        for firm in [Firm::A, Firm::B] {
            let slice = equilibrium_slice(&params, firm).map_err(|e| e.to_string())?;
            let report = minimax_check(&params, &slice, &grid).map_err(|e| e.to_string())?;
            if !report.pass {
                return Err(format!("{params:?} psi_{firm}: spread {} > {}", report.spread, report.tolerance));
            }
            worst = worst.max(report.spread / report.tolerance);
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("correct but took {:.2?}", elapsed));
    }
    Ok(format!("{used} interior draws ({skipped} skipped), max spread/2hG = {worst:.3}, {elapsed:.2?}"))
}

fn dynamics() -> Outcome {
    let opts = IterationOptions { max_iter: 10_000, tol: 1e-12, damping: 0.5 };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xd1a);
    let mut summary = Vec::new();
    for pattern in [Pattern::P1, Pattern::P6] {
        let sample = draws(200, SEED ^ u64::from(pattern.number()));
        let mut converged = 0usize;
        for params in &sample {
            let a = params.a().to_f64();
            let init = std::array::from_fn(|_| rng.random_range(0.0..a));
            let out = best_response_iteration(params, pattern.assignment(), init, opts).map_err(|e| e.to_string())?;
            if !out.converged {
                continue;
            }
            converged += 1;
            let exact = solve_equilibrium(params, pattern.assignment()).map_err(|e| e.to_string())?;
            for (got, want) in out.chosen.iter().zip(&exact.chosen) {
                let want = want.to_f64();
                if (got - want).abs() > 1e-10 {
                    return Err(format!("{params:?} {pattern}: limit {got} vs exact {want}"));
                }
            }
        }
        if converged * 100 < sample.len() * 99 {
            return Err(format!("{pattern}: only {converged}/{} converged", sample.len()));
        }
        summary.push(format!("pattern {pattern}: {converged}/{}", sample.len()));
    }
    Ok(format!("{} converged, limits within 1e-10", summary.join(", ")))
}

/// Direct demand exactly as printed for the all-price pattern, where the
/// first firm's cross-price term reads `p_A + p_C`.
fn printed_pattern6_demand_x_a(params: &ModelParams, p: &[Rational; 3]) -> Rational {
    let (a, b) = (params.a(), params.b());
    let one = Rational::one();
    let two = Rational::integer(2);
    let num = a * &(&one - b) - &((&one + b) * &p[0]) + b * &(&p[0] + &p[2]);
    num / &((&one - b) * &(&one + &(&two * b)))
}

fn typo_ledger_check(sample: &[ModelParams]) -> Outcome {
    for params in sample {
        let ledger = typo_ledger(params).map_err(|e| e.to_string())?;
        if ledger.len() != 1 || ledger[0].pattern != 1 || ledger[0].component != "xC" {
            return Err(format!("{params:?}: unexpected ledger {ledger:?}"));
        }
        for (pattern, eq) in Pattern::ALL.iter().zip(solve_patterns(params)?) {
            let cf = closed_form_outputs(params, *pattern).map_err(|e| e.to_string())?;
            let solver = eq.state.x();
            let ok = if *pattern == Pattern::P1 {
                cf.printed[..2] == solver[..2] && cf.printed[2] == -&solver[2]
            } else {
                &cf.printed == solver
            };
            if !ok {
                return Err(format!("{params:?} {pattern}: printed {:?} vs solver {solver:?}", cf.printed));
            }
        }
    }

    // The cross-price index slip only matters when p_A differs from p_B.
    let params = example_params();
    let p = [r(5, 1), r(6, 1), r(4, 1)];
    let printed = printed_pattern6_demand_x_a(&params, &p);
    let state = triopoly::MarketState::from_prices(&params, p.clone());
    if printed == state.x()[0] {
        return Err("printed all-price demand unexpectedly agrees".into());
    }
    let mut q = p.clone();
    q[1] = q[0].clone();
    let state = triopoly::MarketState::from_prices(&params, q.clone());
    if printed_pattern6_demand_x_a(&params, &q) != state.x()[0] {
        return Err("printed all-price demand disagrees even when p_A = p_B".into());
    }
    Ok(format!(
        "printed P1 xC = -solver on {} draws, P2-P6 printed = solver; all-price demand index slip detected",
        sample.len()
    ))
}

fn run_verify() -> Result<(i32, Vec<u8>), String> {
    let argv = [
        "triopoly", "verify", "--a", "10", "--b", "1/2", "--cA", "2", "--cB", "2", "--cC", "3", "--draws", "25", "--seed",
        "7", "--format", "json",
    ];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = triopoly::cli::run_cli(argv, &mut out, &mut err);
    if !err.is_empty() {
        return Err(String::from_utf8_lossy(&err).into_owned());
    }
    Ok((code, out))
}

fn determinism() -> Outcome {
    let (c1, o1) = run_verify()?;
    let (c2, o2) = run_verify()?;
    if c1 != 0 || c2 != 0 {
        return Err(format!("exit codes {c1}, {c2}"));
    }
    if o1 != o2 {
        return Err("outputs differ between runs".into());
    }
    Ok(format!("two runs, {} identical bytes", o1.len()))
}

fn main() -> ExitCode {
    let sample = draws(DRAWS, SEED);
    let criteria: Vec<Criterion> = vec![
        ("closed forms match exact solver", Box::new(|| closed_forms_match_solver(&sample))),
        ("Cournot equals QQP pattern", Box::new(|| pattern_pair_equal(&sample, Pattern::P1, Pattern::P2))),
        ("all-price equals PPQ pattern", Box::new(|| pattern_pair_equal(&sample, Pattern::P6, Pattern::P4))),
        ("non-equivalence and symmetric collapse", Box::new(|| nonequivalence_and_collapse(&sample))),
        ("spot equilibrium values", Box::new(spot_values)),
        ("relative profits sum to zero", Box::new(zero_sum)),
        ("minimax chain within 2hG", Box::new(minimax_chain)),
        ("best-response dynamics agree", Box::new(dynamics)),
        ("typo ledger", Box::new(|| typo_ledger_check(&sample))),
        ("verify output deterministic", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({detail})", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

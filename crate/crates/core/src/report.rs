//! Serializable documents and text renderers for equilibria, suites and
//! minimax checks.

use std::fmt::Write as _;

use serde::Serialize;

use crate::closed_form::{ClosedForm, TypoEntry};
use crate::equilibrium::{Equilibrium, EquilibriumFlags, FloatEquilibrium};
use crate::market::{ModelParams, StrategyAssignment};
use crate::rational::{round_sig, Rational};
use crate::verification::{equal_pairs, EquivalenceReport, MinimaxReport, MinimaxSlice, Status, SuiteReport};

/// Decimal rendering to 12 significant digits.
pub fn decimal(v: f64) -> f64 {
    round_sig(v, 12)
}

fn decimals(v: &[Rational; 3]) -> [f64; 3] {
    v.each_ref().map(|r| decimal(r.to_f64()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormDoc {
    pub printed: [Rational; 3],
    pub corrected: [Rational; 3],
    pub printed_matches_corrected: bool,
}

impl From<&ClosedForm> for ClosedFormDoc {
    fn from(cf: &ClosedForm) -> Self {
        ClosedFormDoc {
            printed: cf.printed.clone(),
            corrected: cf.corrected.clone(),
            printed_matches_corrected: cf.printed_matches_corrected(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumDoc {
    pub pattern: Option<u8>,
    pub assignment: StrategyAssignment,
    pub params: ModelParams,
    pub chosen: [Rational; 3],
    pub x: [Rational; 3],
    pub p: [Rational; 3],
    pub psi: [Rational; 3],
    pub pi: [Rational; 3],
    pub x_f: [f64; 3],
    pub p_f: [f64; 3],
    pub psi_f: [f64; 3],
    pub pi_f: [f64; 3],
    pub flags: EquilibriumFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormDoc>,
}

impl EquilibriumDoc {
    pub fn new(params: &ModelParams, eq: &Equilibrium, closed_form: Option<&ClosedForm>) -> Self {
        EquilibriumDoc {
            pattern: eq.assignment.pattern().map(|p| p.number()),
            assignment: eq.assignment,
            params: params.clone(),
            chosen: eq.chosen.clone(),
            x: eq.state.x().clone(),
            p: eq.state.p().clone(),
            psi: eq.payoffs.psi.clone(),
            pi: eq.payoffs.pi.clone(),
            x_f: decimals(eq.state.x()),
            p_f: decimals(eq.state.p()),
            psi_f: decimals(&eq.payoffs.psi),
            pi_f: decimals(&eq.payoffs.pi),
            flags: eq.flags,
            closed_form: closed_form.map(ClosedFormDoc::from),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FloatEquilibriumDoc {
    pub pattern: Option<u8>,
    pub assignment: StrategyAssignment,
    pub params: ModelParams,
    pub chosen_f: [f64; 3],
    pub x_f: [f64; 3],
    pub p_f: [f64; 3],
    pub psi_f: [f64; 3],
    pub pi_f: [f64; 3],
    pub flags: EquilibriumFlags,
}

impl FloatEquilibriumDoc {
    pub fn new(params: &ModelParams, eq: &FloatEquilibrium) -> Self {
        let r = |v: [f64; 3]| v.map(decimal);
        FloatEquilibriumDoc {
            pattern: eq.assignment.pattern().map(|p| p.number()),
            assignment: eq.assignment,
            params: params.clone(),
            chosen_f: r(eq.chosen),
            x_f: r(eq.x),
            p_f: r(eq.p),
            psi_f: r(eq.psi),
            pi_f: r(eq.pi),
            flags: eq.flags,
        }
    }
}

/// Column names of the solve CSV.
pub const CSV_HEADER: [&str; 22] = [
    "pattern", "assignment", "xA", "xB", "xC", "pA", "pB", "pC", "psiA", "psiB", "psiC", "xA_f", "xB_f", "xC_f",
    "pA_f", "pB_f", "pC_f", "psiA_f", "psiB_f", "psiC_f", "interior", "soc_ok",
];

fn csv_row(pattern: Option<u8>, assignment: StrategyAssignment, exact: Option<[&[Rational; 3]; 3]>, approx: [[f64; 3]; 3], flags: EquilibriumFlags) -> Vec<String> {
    let mut row = vec![pattern.map(|p| p.to_string()).unwrap_or_default(), assignment.to_string()];
    match exact {
        Some(blocks) => row.extend(blocks.iter().flat_map(|b| b.iter().map(ToString::to_string))),
        None => row.extend(std::iter::repeat_n(String::new(), 9)),
    }
    row.extend(approx.iter().flat_map(|b| b.iter().map(|v| decimal(*v).to_string())));
    row.push(flags.interior.to_string());
    row.push(flags.soc_ok.to_string());
    row
}

pub fn equilibrium_csv_row(eq: &Equilibrium) -> Vec<String> {
    csv_row(
        eq.assignment.pattern().map(|p| p.number()),
        eq.assignment,
        Some([eq.state.x(), eq.state.p(), &eq.payoffs.psi]),
        [eq.state.x(), eq.state.p(), &eq.payoffs.psi].map(|b| b.each_ref().map(Rational::to_f64)),
        eq.flags,
    )
}

pub fn float_equilibrium_csv_row(eq: &FloatEquilibrium) -> Vec<String> {
    csv_row(eq.assignment.pattern().map(|p| p.number()), eq.assignment, None, [eq.x, eq.p, eq.psi], eq.flags)
}

/// Renders rows under `header` as left-aligned, space-separated columns.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let s: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(s.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn render_params(params: &ModelParams) -> String {
    let [ca, cb, cc] = params.costs();
    format!("a={} b={} cA={ca} cB={cb} cC={cc}", params.a(), params.b())
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceCell {
    pub equal: bool,
    pub max_abs_diff: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceDoc {
    pub equal_pairs: Vec<(u8, u8)>,
    pub matrix: Vec<Vec<EquivalenceCell>>,
}

impl EquivalenceDoc {
    pub fn new(matrix: &[Vec<EquivalenceReport>]) -> Self {
        EquivalenceDoc {
            equal_pairs: equal_pairs(matrix),
            matrix: matrix
                .iter()
                .map(|row| row.iter().map(|r| EquivalenceCell { equal: r.equal, max_abs_diff: r.max_abs_diff.clone() }).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternClosedForm {
    pub pattern: u8,
    #[serde(flatten)]
    pub form: ClosedFormDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDoc {
    pub params: ModelParams,
    pub suite: SuiteReport,
    pub equivalence: EquivalenceDoc,
    /// Absent when cA ≠ cB; the closed forms assume equal costs for A and B.
    pub closed_forms: Option<Vec<PatternClosedForm>>,
    pub typo_ledger: Option<Vec<TypoEntry>>,
    pub passed: bool,
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
    }
}

pub fn render_verify_table(doc: &VerifyDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "params  {}", render_params(&doc.params));
    let _ = writeln!(out);
    let _ = writeln!(out, "property suite (draws={}, seed={})", doc.suite.draws, doc.suite.seed);
    let rows: Vec<Vec<String>> = doc
        .suite
        .properties
        .iter()
        .map(|p| vec![p.name.to_string(), status_word(p.status).to_string(), p.checked.to_string()])
        .collect();
    for line in render_table(&["property", "status", "checked"], &rows).lines() {
        let _ = writeln!(out, "  {line}");
    }
    for p in &doc.suite.properties {
        if let Some(cx) = &p.counterexample {
            let _ = writeln!(out, "  counterexample for {} at draw {}: {} [{}]", p.name, cx.draw, cx.detail, render_params(&cx.params));
        }
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "equivalence matrix (= same market state, x differs)");
    let _ = writeln!(out, "     1 2 3 4 5 6");
    for (i, row) in doc.equivalence.matrix.iter().enumerate() {
        let cells: Vec<&str> = row.iter().map(|c| if c.equal { "=" } else { "x" }).collect();
        let _ = writeln!(out, "  {}  {}", i + 1, cells.join(" "));
    }
    let pairs: Vec<String> = doc.equivalence.equal_pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
    let _ = writeln!(out, "  equal pairs: {}", if pairs.is_empty() { "none".to_string() } else { pairs.join(" ") });

    let _ = writeln!(out);
    let _ = writeln!(out, "typo ledger");
    match &doc.typo_ledger {
        None => {
            let _ = writeln!(out, "  skipped: closed-form outputs assume cA = cB");
        }
        Some(entries) if entries.is_empty() => {
            let _ = writeln!(out, "  printed formulas match corrected values");
        }
        Some(entries) => {
            for e in entries {
                let _ = writeln!(out, "  pattern {} {}: printed {}, corrected {}", e.pattern, e.component, e.printed, e.corrected);
            }
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "result: {}", if doc.passed { "PASS" } else { "FAIL" });
    out
}

pub fn render_verify_csv(doc: &VerifyDoc) -> Vec<Vec<String>> {
    doc.suite
        .properties
        .iter()
        .map(|p| {
            vec![
                p.name.to_string(),
                status_word(p.status).to_lowercase(),
                p.checked.to_string(),
                p.counterexample.as_ref().map(|c| c.detail.clone()).unwrap_or_default(),
            ]
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxDoc {
    pub params: ModelParams,
    pub payoff_firm: String,
    pub min_firm: String,
    pub fixed_variable: String,
    pub fixed_value: Rational,
    pub grid_lo: Rational,
    pub grid_hi: Rational,
    pub grid_points: usize,
    pub report: MinimaxReport,
}

impl MinimaxDoc {
    pub fn new(params: &ModelParams, slice: &MinimaxSlice, grid: &crate::verification::GridSpec, report: MinimaxReport) -> Self {
        let fixed = slice.fixed_firm().map(|f| format!("x{f}")).unwrap_or_default();
        MinimaxDoc {
            params: params.clone(),
            payoff_firm: slice.payoff_firm.to_string(),
            min_firm: slice.min_firm.to_string(),
            fixed_variable: fixed,
            fixed_value: slice.fixed.clone(),
            grid_lo: grid.lo().clone(),
            grid_hi: grid.hi().clone(),
            grid_points: grid.points(),
            report,
        }
    }
}

pub fn render_minimax_table(doc: &MinimaxDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "params  {}", render_params(&doc.params));
    let _ = writeln!(
        out,
        "slice   psi{} over x{} (max) against firm {} (min), {} = {}",
        doc.payoff_firm, doc.payoff_firm, doc.min_firm, doc.fixed_variable, doc.fixed_value
    );
    let _ = writeln!(out, "grid    [{}, {}] with {} points", doc.grid_lo, doc.grid_hi, doc.grid_points);
    let rows: Vec<Vec<String>> = doc.report.quantities.iter().map(|q| vec![q.label.clone(), format!("{:.12}", q.value)]).collect();
    for line in render_table(&["quantity", "value"], &rows).lines() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "spread     {:.3e}", doc.report.spread);
    let _ = writeln!(out, "tolerance  {:.3e} (2*h*G, h={:.3e}, G={:.6})", doc.report.tolerance, doc.report.h, doc.report.g);
    let _ = writeln!(out, "result: {}", if doc.report.pass { "PASS" } else { "FAIL" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::solve_equilibrium;
    use crate::market::Pattern;

    #[test]
    fn header_is_fixed() {
        let h = CSV_HEADER;
        assert_eq!(&h[..3], &["pattern", "assignment", "xA"]);
        assert_eq!(&h[20..], &["interior", "soc_ok"]);
    }

    #[test]
    fn csv_row_has_header_width() {
        let r = |s: &str| s.parse::<Rational>().unwrap();
        let p = ModelParams::new(r("10"), r("1/2"), r("2"), r("2"), r("3")).unwrap();
        let eq = solve_equilibrium(&p, Pattern::P1.assignment()).unwrap();
        let row = equilibrium_csv_row(&eq);
        assert_eq!(row.len(), CSV_HEADER.len());
        assert_eq!(row[2], "114/35");
        assert_eq!(row[11], "3.25714285714");
    }

    #[test]
    fn table_alignment() {
        let t = render_table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }
}

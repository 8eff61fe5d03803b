//! Two-stage stochastic MILP data, scenario subproblems and the Lagrangian
//! dual function.
//!
//! Scenario `s` owns the rows `T_s x + W_s y (rel) h_s`; its feasible set
//! `K_s` additionally carries the first-stage rows and bounds. Scenario models
//! always order columns as `(x, y)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, SubproblemFailure};
use crate::exec::ScenarioExecutor;
use crate::lp::{Bound, Constraint, LinearProgram, Relation};
use crate::milp::{MilpModel, MilpSolver, MilpStatus, VarKind};
use crate::num;

/// Tolerance on `sum p_s = 1`.
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FirstStageData {
    pub c: Vec<f64>,
    pub rows: Vec<Constraint>,
    pub bounds: Vec<Bound>,
    pub kinds: Vec<VarKind>,
}

impl FirstStageData {
    pub fn n_x(&self) -> usize {
        self.c.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioData {
    pub probability: f64,
    pub q: Vec<f64>,
    /// Recourse matrix, one row per scenario constraint.
    pub w: Vec<Vec<f64>>,
    /// Technology matrix, one row per scenario constraint.
    pub t: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    pub relations: Vec<Relation>,
    pub y_bounds: Vec<Bound>,
    pub y_kinds: Vec<VarKind>,
}

impl ScenarioData {
    pub fn n_y(&self) -> usize {
        self.q.len()
    }

    pub fn n_rows(&self) -> usize {
        self.h.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageProblem {
    pub first: FirstStageData,
    pub scenarios: Vec<ScenarioData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IssueKind {
    NoScenarios,
    NoFirstStageVariables,
    ProbabilitySum { sum: f64 },
    NonPositiveProbability { p: f64 },
    Dimension { what: &'static str, expected: usize, found: usize },
    NonFinite { what: &'static str },
    BadBound { var: usize, second_stage: bool },
    BinaryOutsideUnit { var: usize, second_stage: bool },
    UnboundedInteger { var: usize, second_stage: bool },
    /// Boundedness then has to come from the rows; the solvers report it
    /// if it does not.
    UnboundedContinuous { var: usize, second_stage: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub severity: Severity,
    /// `None` for first-stage or problem-wide issues.
    pub scenario: Option<usize>,
    pub kind: IssueKind,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stage = |second: bool| if second { "y" } else { "x" };
        if let Some(s) = self.scenario {
            write!(f, "scenario {s}: ")?;
        }
        match &self.kind {
            IssueKind::NoScenarios => f.write_str("no scenarios"),
            IssueKind::NoFirstStageVariables => f.write_str("no first-stage variables"),
            IssueKind::ProbabilitySum { sum } => write!(f, "probabilities sum to {sum}, not 1"),
            IssueKind::NonPositiveProbability { p } => write!(f, "probability {p} is not positive"),
            IssueKind::Dimension { what, expected, found } => {
                write!(f, "{what} has size {found}, expected {expected}")
            }
            IssueKind::NonFinite { what } => write!(f, "{what} contains a non-finite entry"),
            IssueKind::BadBound { var, second_stage } => {
                write!(f, "{}[{var}] has lower bound above upper bound", stage(*second_stage))
            }
            IssueKind::BinaryOutsideUnit { var, second_stage } => {
                write!(f, "binary {}[{var}] has bounds outside [0, 1]", stage(*second_stage))
            }
            IssueKind::UnboundedInteger { var, second_stage } => {
                write!(f, "integer {}[{var}] needs finite bounds", stage(*second_stage))
            }
            IssueKind::UnboundedContinuous { var, second_stage } => {
                write!(f, "continuous {}[{var}] has an infinite bound", stage(*second_stage))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    /// True when no issue is an error; warnings are allowed.
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    fn push(&mut self, severity: Severity, scenario: Option<usize>, kind: IssueKind) {
        self.issues.push(Issue { severity, scenario, kind });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("ok");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

fn check_columns(
    report: &mut ValidationReport,
    scenario: Option<usize>,
    bounds: &[Bound],
    kinds: &[VarKind],
    second_stage: bool,
) {
    for (var, (b, k)) in bounds.iter().zip(kinds).enumerate() {
        if b.lower.is_nan() || b.upper.is_nan() || b.lower == f64::INFINITY || b.upper == f64::NEG_INFINITY {
            report.push(Severity::Error, scenario, IssueKind::NonFinite { what: "bounds" });
            continue;
        }
        if b.lower > b.upper {
            report.push(Severity::Error, scenario, IssueKind::BadBound { var, second_stage });
        }
        match k {
            VarKind::Binary if b.lower < 0.0 || b.upper > 1.0 => {
                report.push(Severity::Error, scenario, IssueKind::BinaryOutsideUnit { var, second_stage })
            }
            VarKind::Integer if !b.is_finite() => {
                report.push(Severity::Error, scenario, IssueKind::UnboundedInteger { var, second_stage })
            }
            VarKind::Continuous if !b.is_finite() => {
                report.push(Severity::Warning, scenario, IssueKind::UnboundedContinuous { var, second_stage })
            }
            _ => {}
        }
    }
}

fn check_len(report: &mut ValidationReport, scenario: Option<usize>, what: &'static str, expected: usize, found: usize) -> bool {
    if expected != found {
        report.push(Severity::Error, scenario, IssueKind::Dimension { what, expected, found });
        return false;
    }
    true
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Checks every structural invariant; never fails, only reports.
pub fn validate(problem: &TwoStageProblem) -> ValidationReport {
    let mut r = ValidationReport::default();
    let first = &problem.first;
    let nx = first.n_x();
    if nx == 0 {
        r.push(Severity::Error, None, IssueKind::NoFirstStageVariables);
    }
    if !all_finite(&first.c) {
        r.push(Severity::Error, None, IssueKind::NonFinite { what: "c" });
    }
    let cols_ok = check_len(&mut r, None, "first-stage bounds", nx, first.bounds.len())
        & check_len(&mut r, None, "first-stage integrality", nx, first.kinds.len());
    if cols_ok {
        check_columns(&mut r, None, &first.bounds, &first.kinds, false);
    }
    for row in &first.rows {
        check_len(&mut r, None, "first-stage row", nx, row.coeffs.len());
        if !all_finite(&row.coeffs) || !row.rhs.is_finite() {
            r.push(Severity::Error, None, IssueKind::NonFinite { what: "first-stage rows" });
        }
    }

    if problem.scenarios.is_empty() {
        r.push(Severity::Error, None, IssueKind::NoScenarios);
        return r;
    }
    let mut psum = num::NeumaierSum::new();
    for (s, sc) in problem.scenarios.iter().enumerate() {
        let at = Some(s);
        if !(sc.probability > 0.0) || !sc.probability.is_finite() {
            r.push(Severity::Error, at, IssueKind::NonPositiveProbability { p: sc.probability });
        }
        psum.add(sc.probability);
        let ny = sc.n_y();
        let m = sc.n_rows();
        if !all_finite(&sc.q) || !all_finite(&sc.h) {
            r.push(Severity::Error, at, IssueKind::NonFinite { what: "q or h" });
        }
        check_len(&mut r, at, "W row count", m, sc.w.len());
        check_len(&mut r, at, "T row count", m, sc.t.len());
        check_len(&mut r, at, "relation count", m, sc.relations.len());
        for row in &sc.w {
            check_len(&mut r, at, "W column count", ny, row.len());
        }
        for row in &sc.t {
            check_len(&mut r, at, "T column count", nx, row.len());
        }
        if !sc.w.iter().chain(&sc.t).all(|row| all_finite(row)) {
            r.push(Severity::Error, at, IssueKind::NonFinite { what: "W or T" });
        }
        let cols_ok = check_len(&mut r, at, "second-stage bounds", ny, sc.y_bounds.len())
            & check_len(&mut r, at, "second-stage integrality", ny, sc.y_kinds.len());
        if cols_ok {
            check_columns(&mut r, at, &sc.y_bounds, &sc.y_kinds, true);
        }
    }
    let sum = psum.value();
    if (sum - 1.0).abs() > PROBABILITY_TOL {
        r.push(Severity::Error, None, IssueKind::ProbabilitySum { sum });
    }
    r
}

impl TwoStageProblem {
    pub fn n_x(&self) -> usize {
        self.first.n_x()
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.scenarios.iter().map(|s| s.probability).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Returns the problem back when it has no validation errors.
    pub fn checked(&self) -> Result<&Self, Error> {
        let report = validate(self);
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// True when every first-stage variable is binary, or integer within [0, 1].
    pub fn has_binary_first_stage(&self) -> Result<(), Error> {
        for (var, (k, b)) in self.first.kinds.iter().zip(&self.first.bounds).enumerate() {
            let ok = match k {
                VarKind::Binary => true,
                VarKind::Integer => b.lower >= 0.0 && b.upper <= 1.0,
                VarKind::Continuous => false,
            };
            if !ok {
                return Err(Error::NonBinaryFirstStage { var });
            }
        }
        Ok(())
    }

    /// The deterministic equivalent over `(x, y_1, ..., y_S)`.
    pub fn build_extensive_form(&self) -> MilpModel {
        let nx = self.n_x();
        let total = nx + self.scenarios.iter().map(ScenarioData::n_y).sum::<usize>();
        let mut objective = self.first.c.clone();
        let mut bounds = self.first.bounds.clone();
        let mut kinds = self.first.kinds.clone();
        for sc in &self.scenarios {
            objective.extend(sc.q.iter().map(|q| sc.probability * q));
            bounds.extend_from_slice(&sc.y_bounds);
            kinds.extend_from_slice(&sc.y_kinds);
        }
        let mut lp = LinearProgram::new(objective, bounds);
        for row in &self.first.rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.resize(total, 0.0);
            lp.push(Constraint::new(coeffs, row.relation, row.rhs));
        }
        let mut offset = nx;
        for sc in &self.scenarios {
            for i in 0..sc.n_rows() {
                let mut coeffs = vec![0.0; total];
                coeffs[..nx].copy_from_slice(&sc.t[i]);
                coeffs[offset..offset + sc.n_y()].copy_from_slice(&sc.w[i]);
                lp.push(Constraint::new(coeffs, sc.relations[i], sc.h[i]));
            }
            offset += sc.n_y();
        }
        MilpModel::new(lp, kinds)
    }

    /// `K_s` as a MILP over `(x, y)` with objective `(c + w)^T x + q_s^T y`.
    pub fn scenario_milp(&self, s: usize, w: &[f64]) -> MilpModel {
        let sc = &self.scenarios[s];
        let nx = self.n_x();
        let mut objective: Vec<f64> = self.first.c.iter().zip(w).map(|(c, w)| c + w).collect();
        objective.extend_from_slice(&sc.q);
        let mut bounds = self.first.bounds.clone();
        bounds.extend_from_slice(&sc.y_bounds);
        let mut kinds = self.first.kinds.clone();
        kinds.extend_from_slice(&sc.y_kinds);
        let n = nx + sc.n_y();
        let mut lp = LinearProgram::new(objective, bounds);
        for row in &self.first.rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.resize(n, 0.0);
            lp.push(Constraint::new(coeffs, row.relation, row.rhs));
        }
        for i in 0..sc.n_rows() {
            let mut coeffs = sc.t[i].clone();
            coeffs.extend_from_slice(&sc.w[i]);
            lp.push(Constraint::new(coeffs, sc.relations[i], sc.h[i]));
        }
        MilpModel::new(lp, kinds)
    }

    /// Recourse problem `min q_s^T y` over `y` with `x` held fixed.
    pub fn recourse_milp(&self, s: usize, x: &[f64]) -> MilpModel {
        let sc = &self.scenarios[s];
        let mut lp = LinearProgram::new(sc.q.clone(), sc.y_bounds.clone());
        for i in 0..sc.n_rows() {
            let rhs = sc.h[i] - num::dot(&sc.t[i], x);
            lp.push(Constraint::new(sc.w[i].clone(), sc.relations[i], rhs));
        }
        MilpModel::new(lp, sc.y_kinds.clone())
    }

    /// `c^T x + q_s^T y`.
    pub fn scenario_cost(&self, s: usize, x: &[f64], y: &[f64]) -> f64 {
        num::dot(&self.first.c, x) + num::dot(&self.scenarios[s].q, y)
    }

    /// Largest violation of `K_s` at `(x, y)`, integrality excluded.
    pub fn scenario_violation(&self, s: usize, x: &[f64], y: &[f64]) -> f64 {
        let mut point = Vec::with_capacity(x.len() + y.len());
        point.extend_from_slice(x);
        point.extend_from_slice(y);
        self.scenario_milp(s, &vec![0.0; x.len()]).lp.max_violation(&point)
    }

    /// Short human-readable size summary.
    pub fn describe(&self) -> String {
        let ny: usize = self.scenarios.iter().map(ScenarioData::n_y).max().unwrap_or(0);
        format!("{} scenarios, {} first-stage vars, up to {} second-stage vars", self.n_scenarios(), self.n_x(), ny)
    }
}

/// Scaled multipliers `w_s`, one vector per scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMultipliers {
    pub omega: Vec<Vec<f64>>,
}

impl DualMultipliers {
    pub fn zeros(problem: &TwoStageProblem) -> Self {
        DualMultipliers { omega: vec![vec![0.0; problem.n_x()]; problem.n_scenarios()] }
    }

    /// From unscaled multipliers `mu_s = p_s w_s`.
    pub fn from_unscaled(mu: &[Vec<f64>], probabilities: &[f64]) -> Self {
        DualMultipliers { omega: mu.iter().zip(probabilities).map(|(m, p)| m.iter().map(|v| v / p).collect()).collect() }
    }

    pub fn unscaled(&self, probabilities: &[f64]) -> Vec<Vec<f64>> {
        self.omega.iter().zip(probabilities).map(|(w, p)| w.iter().map(|v| v * p).collect()).collect()
    }

    /// `sum_s p_s w_s`, accumulated in scenario order.
    pub fn weighted_sum(&self, probabilities: &[f64]) -> Vec<f64> {
        let refs: Vec<&[f64]> = self.omega.iter().map(Vec::as_slice).collect();
        num::weighted_mean(probabilities, &refs)
    }

    /// `|sum_s p_s w_s|_inf`.
    pub fn imbalance(&self, probabilities: &[f64]) -> f64 {
        num::norm_inf(&self.weighted_sum(probabilities))
    }

    pub fn max_norm(&self) -> f64 {
        self.omega.iter().map(|w| num::norm_inf(w)).fold(0.0, f64::max)
    }

    pub fn is_dual_feasible(&self, probabilities: &[f64]) -> bool {
        self.imbalance(probabilities) <= 1e-9 * (1.0 + self.max_norm())
    }

    /// `w_s <- w_s - sum_s' p_s' w_s'`.
    pub fn recenter(&mut self, probabilities: &[f64]) {
        let mean = self.weighted_sum(probabilities);
        for w in &mut self.omega {
            for (v, m) in w.iter_mut().zip(&mean) {
                *v -= m;
            }
        }
    }
}

/// Outcome of one scenario MILP.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSolve {
    /// Proven optimum, or the certified lower bound when `exact` is false.
    pub value: f64,
    /// Best feasible `(x, y)` found, concatenated.
    pub point: Option<Vec<f64>>,
    pub exact: bool,
    pub nodes: usize,
}

impl ScenarioSolve {
    pub fn split(&self, nx: usize) -> Option<(&[f64], &[f64])> {
        self.point.as_deref().map(|p| p.split_at(nx))
    }
}

/// Solves a scenario-type MILP and maps failures to scenario errors.
pub fn solve_scenario_model(model: &MilpModel, s: usize, solver: &MilpSolver<'_>) -> Result<ScenarioSolve, Error> {
    let sol = solver.solve(model).map_err(|e| Error::sub(s, SubproblemFailure::Solver(e)))?;
    match sol.status {
        MilpStatus::Optimal => Ok(ScenarioSolve { value: sol.objective, point: sol.point, exact: true, nodes: sol.nodes }),
        MilpStatus::BoundOnly if sol.dual_bound.is_finite() => {
            Ok(ScenarioSolve { value: sol.dual_bound, point: sol.point, exact: false, nodes: sol.nodes })
        }
        MilpStatus::BoundOnly => Err(Error::sub(s, SubproblemFailure::NoBound)),
        MilpStatus::Infeasible => Err(Error::sub(s, SubproblemFailure::Infeasible)),
        MilpStatus::Unbounded => Err(Error::sub(s, SubproblemFailure::Unbounded)),
    }
}

/// `phi_s(w)`.
pub fn solve_scenario(problem: &TwoStageProblem, s: usize, w: &[f64], solver: &MilpSolver<'_>) -> Result<ScenarioSolve, Error> {
    solve_scenario_model(&problem.scenario_milp(s, w), s, solver)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianValue {
    /// `phi(w) = sum_s p_s phi_s(w_s)`.
    pub value: f64,
    pub scenarios: Vec<ScenarioSolve>,
}

impl LagrangianValue {
    pub fn exact(&self) -> bool {
        self.scenarios.iter().all(|s| s.exact)
    }
}

/// Evaluates the Lagrangian dual function. Scenario solves run through
/// `exec`; the sum is taken in scenario order.
pub fn lagrangian_value<E: ScenarioExecutor>(
    problem: &TwoStageProblem,
    omega: &DualMultipliers,
    solver: &MilpSolver<'_>,
    exec: &E,
) -> Result<LagrangianValue, Error> {
    let p = problem.probabilities();
    if !omega.is_dual_feasible(&p) {
        return Err(Error::DualInfeasible { imbalance: omega.imbalance(&p) });
    }
    let results = exec.map(problem.n_scenarios(), |s| solve_scenario(problem, s, &omega.omega[s], solver));
    let scenarios = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let value = num::sum(scenarios.iter().zip(&p).map(|(r, p)| p * r.value));
    Ok(LagrangianValue { value, scenarios })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exec::Sequential;

    /// Two binary x with a budget row; y covers a scenario demand.
    pub(crate) fn small_problem(ps: &[f64]) -> TwoStageProblem {
        let first = FirstStageData {
            c: vec![3.0, 2.0],
            rows: vec![Constraint::le(vec![1.0, 1.0], 1.0)],
            bounds: vec![Bound::BINARY; 2],
            kinds: vec![VarKind::Binary; 2],
        };
        let scenarios = ps
            .iter()
            .enumerate()
            .map(|(s, &p)| ScenarioData {
                probability: p,
                q: vec![1.0, 10.0],
                w: vec![vec![1.0, 1.0]],
                t: vec![vec![2.0, 1.0 + s as f64]],
                h: vec![2.0 + s as f64],
                relations: vec![Relation::GreaterEq],
                y_bounds: vec![Bound::new(0.0, 1.0), Bound::new(0.0, 5.0)],
                y_kinds: vec![VarKind::Integer, VarKind::Continuous],
            })
            .collect();
        TwoStageProblem { first, scenarios }
    }

    #[test]
    fn validate_accepts_even_split() {
        assert!(small_problem(&[0.5, 0.5]).validate().is_ok());
    }

    #[test]
    fn validate_flags_probability_sum() {
        let r = small_problem(&[0.6, 0.6]).validate();
        assert!(r.errors().any(|i| matches!(i.kind, IssueKind::ProbabilitySum { .. })));
    }

    #[test]
    fn validate_names_scenario_with_bad_t() {
        let mut p = small_problem(&[0.5, 0.5]);
        p.scenarios[1].t[0].push(0.0);
        let r = p.validate();
        let issue = r.errors().next().unwrap();
        assert_eq!(issue.scenario, Some(1));
        assert!(matches!(issue.kind, IssueKind::Dimension { what: "T column count", .. }));
    }

    #[test]
    fn validate_warns_on_free_continuous_and_rejects_free_integer() {
        let mut p = small_problem(&[1.0]);
        p.scenarios[0].y_bounds[1] = Bound::NON_NEGATIVE;
        let r = p.validate();
        assert!(r.is_ok());
        assert_eq!(r.warnings().count(), 1);
        p.scenarios[0].y_bounds[0] = Bound::NON_NEGATIVE;
        assert!(!p.validate().is_ok());
    }

    #[test]
    fn single_scenario_ef_matches_scenario_milp() {
        let p = small_problem(&[1.0]);
        let solver = MilpSolver::default();
        let ef = solver.solve(&p.build_extensive_form()).unwrap();
        let sc = solver.solve(&p.scenario_milp(0, &[0.0, 0.0])).unwrap();
        assert_eq!(ef.objective, sc.objective);
        assert_eq!(p.build_extensive_form().lp.num_vars(), 4);
    }

    #[test]
    fn scenario_milp_objective_cancels_at_minus_c() {
        let p = small_problem(&[0.5, 0.5]);
        let m = p.scenario_milp(1, &[-3.0, -2.0]);
        assert_eq!(m.lp.objective, vec![0.0, 0.0, 1.0, 10.0]);
        assert_eq!(p.scenario_milp(1, &[0.0, 0.0]).lp.objective[..2], p.first.c[..]);
    }

    #[test]
    fn zero_multipliers_give_wait_and_see() {
        let p = small_problem(&[0.25, 0.75]);
        let solver = MilpSolver::default();
        let lv = lagrangian_value(&p, &DualMultipliers::zeros(&p), &solver, &Sequential).unwrap();
        let ws: f64 = (0..2)
            .map(|s| p.scenarios[s].probability * solver.solve(&p.scenario_milp(s, &[0.0; 2])).unwrap().objective)
            .sum();
        assert!((lv.value - ws).abs() < 1e-12);
        assert!(lv.exact());
        let ef = solver.solve(&p.build_extensive_form()).unwrap().objective;
        assert!(lv.value <= ef + 1e-9);
    }

    #[test]
    fn infeasible_multipliers_rejected() {
        let p = small_problem(&[0.5, 0.5]);
        let w = DualMultipliers { omega: vec![vec![1.0, 0.0], vec![0.0, 0.0]] };
        let err = lagrangian_value(&p, &w, &MilpSolver::default(), &Sequential).unwrap_err();
        assert!(matches!(err, Error::DualInfeasible { .. }));
    }

    #[test]
    fn infeasible_scenario_names_index() {
        let mut p = small_problem(&[0.5, 0.5]);
        p.scenarios[1].h[0] = 100.0;
        let err = lagrangian_value(&p, &DualMultipliers::zeros(&p), &MilpSolver::default(), &Sequential).unwrap_err();
        assert_eq!(err, Error::Subproblem { scenario: 1, failure: SubproblemFailure::Infeasible });
    }

    #[test]
    fn recenter_restores_feasibility() {
        let p = [0.2, 0.3, 0.5];
        let mut w = DualMultipliers { omega: vec![vec![1.0, -2.0], vec![0.5, 4.0], vec![3.0, 1.0]] };
        w.recenter(&p);
        assert!(w.imbalance(&p) <= 1e-15);
    }

    #[test]
    fn recourse_model_fixes_x() {
        let p = small_problem(&[0.5, 0.5]);
        let m = p.recourse_milp(1, &[1.0, 0.0]);
        assert_eq!(m.lp.constraints[0].rhs, 1.0);
        let sol = MilpSolver::default().solve(&m).unwrap();
        assert_eq!(sol.objective, 1.0);
    }
}

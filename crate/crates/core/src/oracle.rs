//! Reference values for the Lagrangian dual and the extensive form, computed
//! without any hedging machinery.
//!
//! `enumerate_ld` lists the points of every `K_s` and solves the convexified
//! problem as one LP over convex weights with a shared `z`. `kelley_ld`
//! maximizes the dual function by cutting planes; its master is kept in the
//! column form, so each cut adds a weight column and the multipliers are
//! read off the coupling-row duals. The `w` box of the cutting-plane master
//! turns into penalty columns with cost equal to the box radius.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, SubproblemFailure};
use crate::exec::ScenarioExecutor;
use crate::lp::{solve_lp, Basis, Bound, Constraint, LinearProgram, LpOptions, LpStatus, Relation, Simplex, VarStatus};
use crate::milp::{MilpSolver, MilpStatus};
use crate::model::{lagrangian_value, DualMultipliers, TwoStageProblem};
use crate::num;

/// Default cap on enumerated lattice points over all scenarios.
pub const ENUMERATION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Enumeration,
    Kelley,
    ExtensiveForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Enumeration {
        /// Distinct first-stage points kept per scenario.
        points: Vec<usize>,
        z: Vec<f64>,
    },
    Kelley {
        lower: f64,
        upper: f64,
        omega: DualMultipliers,
        cuts: usize,
        box_radius: f64,
        lower_history: Vec<f64>,
        upper_history: Vec<f64>,
        /// Indices into `upper_history` where the box was enlarged.
        expansions: Vec<usize>,
    },
    ExtensiveForm {
        x: Vec<f64>,
        dual_bound: f64,
        exact: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub method: OracleMethod,
    pub certificate: Certificate,
    pub iterations: usize,
}

/// `(x, c^T x + q^T y)` with the cheapest `y` for each distinct `x`.
type ScenarioPoints = Vec<(Vec<f64>, f64)>;

fn keep_cheapest(points: &mut ScenarioPoints, x: &[f64], cost: f64) {
    match points.iter_mut().find(|(px, _)| num::dist_inf(px, x) <= 1e-9) {
        Some(entry) => entry.1 = entry.1.min(cost),
        None => points.push((x.to_vec(), cost)),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Vertices of `{v : rows, bounds}` restricted to columns `free`, with every
/// other column held at its (fixed) bound.
fn slice_vertices(lp: &LinearProgram, bounds: &[Bound], free: &[usize]) -> Vec<Vec<f64>> {
    let k = free.len();
    let n = lp.num_vars();
    let base: Vec<f64> = bounds.iter().map(|b| if b.lower.is_finite() { b.lower } else { 0.0 }).collect();
    // candidate tight constraints: (coeffs over free cols, rhs after fixing)
    let mut cands: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in &lp.constraints {
        let fixed: f64 = (0..n).filter(|j| !free.contains(j)).map(|j| c.coeffs[j] * base[j]).sum();
        cands.push((free.iter().map(|&j| c.coeffs[j]).collect(), c.rhs - fixed));
    }
    for (pos, &j) in free.iter().enumerate() {
        for v in [bounds[j].lower, bounds[j].upper] {
            if v.is_finite() {
                let mut e = vec![0.0; k];
                e[pos] = 1.0;
                cands.push((e, v));
            }
        }
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    fn rec(
        start: usize,
        depth: usize,
        pick: &mut [usize],
        cands: &[(Vec<f64>, f64)],
        f: &mut dyn FnMut(&[usize]),
    ) {
        if depth == pick.len() {
            f(pick);
            return;
        }
        for i in start..cands.len() {
            pick[depth] = i;
            rec(i + 1, depth + 1, pick, cands, f);
        }
    }
    let mut visit = |sel: &[usize]| {
        let mut a = Vec::with_capacity(k * k);
        let mut b = Vec::with_capacity(k);
        for &i in sel {
            a.extend_from_slice(&cands[i].0);
            b.push(cands[i].1);
        }
        let Some(sol) = num::solve_dense(&mut a, &mut b, 1e-10) else { return };
        let mut v = base.clone();
        for (pos, &j) in free.iter().enumerate() {
            v[j] = sol[pos];
        }
        let in_bounds = free.iter().all(|&j| bounds[j].contains(v[j], 1e-9));
        if in_bounds && lp.max_violation(&v) <= 1e-9 {
            out.push(v);
        }
    };
    if k == 0 {
        if lp.max_violation(&base) <= 1e-9 {
            out.push(base.clone());
        }
    } else {
        rec(0, 0, &mut pick, &cands, &mut visit);
    }
    out
}

fn enumerate_scenario(problem: &TwoStageProblem, s: usize, budget: &mut usize) -> Result<ScenarioPoints, Error> {
    let nx = problem.n_x();
    let model = problem.scenario_milp(s, &vec![0.0; nx]);
    let n = model.lp.num_vars();
    let ints: Vec<usize> = (0..n).filter(|&j| model.kinds[j].is_integral()).collect();
    let conts: Vec<usize> = (0..n).filter(|&j| !model.kinds[j].is_integral()).collect();
    let ranges: Vec<(i64, i64)> = ints
        .iter()
        .map(|&j| {
            let b = model.lp.bounds[j];
            (num::ceil(b.lower - 1e-9) as i64, num::floor(b.upper + 1e-9) as i64)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::sub(s, SubproblemFailure::Infeasible));
    }
    let continuous_x = conts.iter().any(|&j| j < nx);
    let per_assignment = if continuous_x {
        let rows = model.lp.num_rows() + 2 * conts.len();
        binomial(rows, conts.len())
    } else {
        1.0
    };
    let needed = ranges.iter().fold(per_assignment, |acc, (lo, hi)| acc * (hi - lo + 1) as f64);
    if needed > *budget as f64 {
        return Err(Error::EnumerationBudget { needed, budget: *budget });
    }
    *budget -= needed as usize;

    let simplex = Simplex::new(&model.lp);
    model.lp.check()?;
    let mut bounds = model.lp.bounds.clone();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut warm: Option<Basis> = None;
    let mut points = ScenarioPoints::new();
    loop {
        for (&j, &v) in ints.iter().zip(&cur) {
            bounds[j] = Bound::fixed(v as f64);
        }
        if continuous_x {
            for v in slice_vertices(&model.lp, &bounds, &conts) {
                keep_cheapest(&mut points, &v[..nx], model.lp.objective_value(&v));
            }
        } else {
            let sol = simplex.solve(&bounds, warm.as_ref(), LpOptions::default())?;
            match sol.status {
                LpStatus::Optimal => {
                    keep_cheapest(&mut points, &sol.x[..nx], sol.objective);
                    warm = Some(sol.basis);
                }
                LpStatus::Infeasible => {}
                LpStatus::Unbounded => return Err(Error::sub(s, SubproblemFailure::Unbounded)),
                LpStatus::IterationLimit => return Err(Error::OracleLp),
            }
        }
        let mut i = 0;
        while i < cur.len() {
            cur[i] += 1;
            if cur[i] > ranges[i].1 {
                cur[i] = ranges[i].0;
                i += 1;
            } else {
                break;
            }
        }
        if i == cur.len() {
            break;
        }
    }
    if points.is_empty() {
        return Err(Error::sub(s, SubproblemFailure::Infeasible));
    }
    Ok(points)
}

/// The convexified problem solved exactly by listing the points of every
/// `K_s`. Fails if more than `budget` lattice points would be visited.
pub fn enumerate_ld(problem: &TwoStageProblem, budget: usize) -> Result<OracleResult, Error> {
    problem.checked()?;
    let nx = problem.n_x();
    let mut left = budget;
    let mut sets = Vec::with_capacity(problem.n_scenarios());
    for s in 0..problem.n_scenarios() {
        sets.push(enumerate_scenario(problem, s, &mut left)?);
    }
    let total: usize = sets.iter().map(Vec::len).sum();
    let n = nx + total;
    let mut objective = vec![0.0; n];
    let mut bounds = vec![Bound::FREE; nx];
    bounds.extend(core::iter::repeat_n(Bound::NON_NEGATIVE, total));
    let mut offset = nx;
    for (sc, pts) in problem.scenarios.iter().zip(&sets) {
        for (i, (_, cost)) in pts.iter().enumerate() {
            objective[offset + i] = sc.probability * cost;
        }
        offset += pts.len();
    }
    let mut lp = LinearProgram::new(objective, bounds);
    let mut offset = nx;
    for pts in &sets {
        let mut row = vec![0.0; n];
        for i in 0..pts.len() {
            row[offset + i] = 1.0;
        }
        lp.push(Constraint::eq(row, 1.0));
        for j in 0..nx {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            for (i, (x, _)) in pts.iter().enumerate() {
                row[offset + i] = x[j];
            }
            lp.push(Constraint::eq(row, 0.0));
        }
        offset += pts.len();
    }
    let sol = solve_lp(&lp, None)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::OracleLp);
    }
    Ok(OracleResult {
        value: sol.objective,
        method: OracleMethod::Enumeration,
        certificate: Certificate::Enumeration { points: sets.iter().map(Vec::len).collect(), z: sol.x[..nx].to_vec() },
        iterations: 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KelleyOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub iter_limit: usize,
}

impl Default for KelleyOptions {
    fn default() -> Self {
        KelleyOptions { abs_tol: 1e-7, rel_tol: 1e-7, iter_limit: 5_000 }
    }
}

struct KelleyMaster {
    lp: LinearProgram,
    n_s: usize,
    nx: usize,
    /// Scenario and first-stage point of each weight column.
    columns: Vec<(usize, Vec<f64>, f64)>,
    basis: Option<Basis>,
}

impl KelleyMaster {
    fn new(problem: &TwoStageProblem, radius: f64) -> Self {
        let n_s = problem.n_scenarios();
        let nx = problem.n_x();
        let n = nx + 2 * n_s * nx;
        let mut objective = vec![0.0; n];
        for v in &mut objective[nx..] {
            *v = radius;
        }
        let mut bounds = vec![Bound::FREE; nx];
        bounds.extend(core::iter::repeat_n(Bound::NON_NEGATIVE, 2 * n_s * nx));
        let mut lp = LinearProgram::new(objective, bounds);
        for sc in &problem.scenarios {
            lp.push(Constraint::eq(vec![0.0; n], sc.probability));
        }
        for (s, sc) in problem.scenarios.iter().enumerate() {
            for j in 0..nx {
                let mut row = vec![0.0; n];
                row[j] = -sc.probability;
                let pen = nx + 2 * (s * nx + j);
                row[pen] = -1.0;
                row[pen + 1] = 1.0;
                lp.push(Constraint::new(row, Relation::Equal, 0.0));
            }
        }
        KelleyMaster { lp, n_s, nx, columns: Vec::new(), basis: None }
    }

    fn set_radius(&mut self, radius: f64) {
        for v in &mut self.lp.objective[self.nx..self.nx + 2 * self.n_s * self.nx] {
            *v = radius;
        }
    }

    /// Adds the cut of point `x` with value `f` for scenario `s`, unless an
    /// equal or stronger one is present.
    fn add(&mut self, s: usize, x: &[f64], f: f64, p: f64) -> bool {
        if self.columns.iter().any(|(cs, cx, cf)| *cs == s && num::dist_inf(cx, x) <= 1e-9 && *cf <= f + 1e-12) {
            return false;
        }
        self.lp.objective.push(p * f);
        self.lp.bounds.push(Bound::NON_NEGATIVE);
        for (r, row) in self.lp.constraints.iter_mut().enumerate() {
            let v = if r == s {
                p
            } else if r >= self.n_s && (r - self.n_s) / self.nx == s {
                p * x[(r - self.n_s) % self.nx]
            } else {
                0.0
            };
            row.coeffs.push(v);
        }
        self.columns.push((s, x.to_vec(), f));
        if let Some(b) = &mut self.basis {
            let at = self.lp.objective.len() - 1;
            b.status.insert(at, VarStatus::AtLower);
        }
        true
    }

    /// Master value and the multipliers it proposes.
    fn solve(&mut self) -> Result<(f64, DualMultipliers), Error> {
        let sol = solve_lp(&self.lp, self.basis.as_ref())?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::OracleLp);
        }
        // Column reduced costs read p_s (f - theta_s + y_s^T x), so w_s = -y_s.
        let omega = (0..self.n_s)
            .map(|s| (0..self.nx).map(|j| -sol.duals[self.n_s + s * self.nx + j]).collect())
            .collect();
        self.basis = Some(sol.basis);
        Ok((sol.objective, DualMultipliers { omega }))
    }
}

/// Maximizes the dual function by cutting planes until the master value and
/// the best evaluated bound agree to `abs_tol + rel_tol |bound|`.
pub fn kelley_ld<E: ScenarioExecutor>(
    problem: &TwoStageProblem,
    opts: &KelleyOptions,
    solver: &MilpSolver<'_>,
    exec: &E,
) -> Result<OracleResult, Error> {
    problem.checked()?;
    let p = problem.probabilities();
    let mut radius = 1e3 * (1.0 + num::norm_inf(&problem.first.c));
    let mut master = KelleyMaster::new(problem, radius);
    let mut omega = DualMultipliers::zeros(problem);
    let mut best = f64::NEG_INFINITY;
    let mut best_omega = omega.clone();
    let mut lower_history = Vec::new();
    let mut upper_history = Vec::new();
    let mut expansions = Vec::new();
    let mut iterations = 0;
    let nx = problem.n_x();
    loop {
        iterations += 1;
        let lv = lagrangian_value(problem, &omega, solver, exec)?;
        if lv.value > best {
            best = lv.value;
            best_omega = omega.clone();
        }
        lower_history.push(best);
        let mut added = false;
        for (s, r) in lv.scenarios.iter().enumerate() {
            let point = r.point.as_ref().ok_or(Error::sub(s, SubproblemFailure::NoBound))?;
            let (x, y) = point.split_at(nx);
            added |= master.add(s, x, problem.scenario_cost(s, x, y), p[s]);
        }
        let (upper, proposal) = master.solve()?;
        upper_history.push(upper);
        let gap = upper - best;
        let done = gap <= opts.abs_tol + opts.rel_tol * best.abs() || !added;
        // The box only matters once it is what stops further progress.
        if done && proposal.max_norm() >= radius * (1.0 - 1e-6) && radius < 1e15 {
            radius *= 10.0;
            master.set_radius(radius);
            expansions.push(upper_history.len() - 1);
            let (_, enlarged) = master.solve()?;
            omega = enlarged;
        } else if done {
            return Ok(OracleResult {
                value: best,
                method: OracleMethod::Kelley,
                certificate: Certificate::Kelley {
                    lower: best,
                    upper,
                    omega: best_omega,
                    cuts: master.columns.len(),
                    box_radius: radius,
                    lower_history,
                    upper_history,
                    expansions,
                },
                iterations,
            });
        } else {
            omega = proposal;
        }
        if iterations >= opts.iter_limit {
            return Err(Error::KelleyLimit { lower: best, upper });
        }
        omega.recenter(&p);
    }
}

/// `zeta^SMIP` from the deterministic equivalent.
pub fn extensive_form(problem: &TwoStageProblem, solver: &MilpSolver<'_>) -> Result<OracleResult, Error> {
    problem.checked()?;
    let ef = problem.build_extensive_form();
    let sol = solver.solve(&ef).map_err(|e| Error::ExtensiveForm(SubproblemFailure::Solver(e)))?;
    let (value, exact) = match sol.status {
        MilpStatus::Optimal => (sol.objective, true),
        MilpStatus::BoundOnly if sol.point.is_some() => (sol.objective, false),
        MilpStatus::BoundOnly => return Err(Error::ExtensiveForm(SubproblemFailure::NoBound)),
        MilpStatus::Infeasible => return Err(Error::ExtensiveForm(SubproblemFailure::Infeasible)),
        MilpStatus::Unbounded => return Err(Error::ExtensiveForm(SubproblemFailure::Unbounded)),
    };
    let x = sol.point.map(|p| p[..problem.n_x()].to_vec()).unwrap_or_default();
    Ok(OracleResult {
        value,
        method: OracleMethod::ExtensiveForm,
        certificate: Certificate::ExtensiveForm { x, dual_bound: sol.dual_bound, exact },
        iterations: sol.nodes,
    })
}

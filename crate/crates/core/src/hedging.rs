//! Progressive hedging with Lagrangian bounds, and its Frank-Wolfe variant
//! whose bounds come from the inner-loop MILP at no extra cost.
//!
//! Both runs are synchronous: scenario work for one iteration goes through a
//! [`ScenarioExecutor`], then consensus, bound, residual and multiplier
//! updates are reduced in scenario order on the calling thread.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, SubproblemFailure};
use crate::exec::{Deadline, ScenarioExecutor};
use crate::fwcore::{run_sdm, Provenance, SdmConfig, SimplexWeights, VertexSet};
use crate::lp::{solve_lp, Bound, Constraint, LinearProgram, LpStatus};
use crate::milp::{prox_linearize, MilpSolver};
use crate::model::{solve_scenario, solve_scenario_model, DualMultipliers, TwoStageProblem};
use crate::num;

/// Relative tolerance of the in-run residual identity check.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalIterate {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgingConfig {
    pub rho: f64,
    pub alpha: f64,
    pub eps: f64,
    pub k_max: usize,
    pub t_max: usize,
    /// Wall-clock budget in seconds, read from the MILP solver's clock.
    pub time_limit: Option<f64>,
    /// PH computes a bound every this many iterations; 0 never does.
    pub bounds_every: usize,
    /// Subtract the probability-weighted mean from the multipliers after
    /// every update.
    pub recenter: bool,
    pub qp_tol: f64,
}

impl HedgingConfig {
    pub fn new(rho: f64) -> Self {
        HedgingConfig {
            rho,
            alpha: 0.0,
            eps: 1e-3,
            k_max: 1000,
            t_max: 1,
            time_limit: None,
            bounds_every: 1,
            recenter: true,
            qp_tol: 1e-10,
        }
    }

    pub fn check(&self) -> Result<(), Error> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Config("rho must be positive and finite"));
        }
        if !self.alpha.is_finite() {
            return Err(Error::Config("alpha must be finite"));
        }
        if !(self.eps >= 0.0) {
            return Err(Error::Config("eps must be non-negative"));
        }
        if self.k_max == 0 {
            return Err(Error::Config("k_max must be at least 1"));
        }
        if self.t_max == 0 {
            return Err(Error::Config("t_max must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    IterationLimit,
    TimeLimit,
}

impl Termination {
    /// `C` when converged, `T` when a limit stopped the run.
    pub fn letter(self) -> char {
        match self {
            Termination::Converged => 'C',
            Termination::IterationLimit | Termination::TimeLimit => 'T',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `phi^k`, absent on PH iterations that skip the bound.
    pub phi: Option<f64>,
    /// Running maximum of the recorded bounds, `-inf` before the first.
    pub best_phi: f64,
    pub residual: f64,
    pub wall_s: f64,
    /// Cumulative MILP solves, prox subproblems included.
    pub milp_solves: usize,
    pub qp_solves: usize,
    pub vertices: usize,
    /// Some scenario solve stopped at a limit; `phi` is then a certified
    /// lower bound rather than `phi(w)` itself.
    pub inexact: bool,
    /// Some master QP stopped before its gap tolerance.
    pub qp_unconverged: bool,
    /// Excess of `|primal^2 + dual^2 - residual^2|` over the tolerance,
    /// relative to `residual^2`; zero when the identity holds.
    pub identity_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub iterate: PrimalIterate,
    pub omega: DualMultipliers,
    /// Last bound computed.
    pub phi: f64,
    pub best_phi: f64,
    pub termination: Termination,
    pub trace: Vec<IterationRecord>,
    /// Final inner approximations (FW-PH only).
    pub vertex_sets: Vec<VertexSet>,
}

impl RunResult {
    pub fn final_residual(&self) -> f64 {
        self.trace.last().map_or(f64::INFINITY, |r| r.residual)
    }
}

/// `sum_s p_s x_s`.
pub fn consensus(x: &[Vec<f64>], p: &[f64]) -> Vec<f64> {
    let refs: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
    num::weighted_mean(p, &refs)
}

/// `sqrt(sum_s p_s |x_s - z_prev|^2)`.
pub fn residual(x: &[Vec<f64>], z_prev: &[f64], p: &[f64]) -> f64 {
    num::sqrt(num::sum(x.iter().zip(p).map(|(xs, ps)| ps * num::dist2_sq(xs, z_prev))))
}

/// Both sides of `sum p [|x_s - z|^2 + |z - z_prev|^2] = sum p |x_s - z_prev|^2`
/// for `z = sum p x_s`.
pub fn residual_identity(x: &[Vec<f64>], z: &[f64], z_prev: &[f64], p: &[f64]) -> (f64, f64) {
    let mut lhs = num::NeumaierSum::new();
    let dual = num::dist2_sq(z, z_prev);
    for (xs, ps) in x.iter().zip(p) {
        lhs.add(ps * num::dist2_sq(xs, z));
        lhs.add(ps * dual);
    }
    let rhs = num::sum(x.iter().zip(p).map(|(xs, ps)| ps * num::dist2_sq(xs, z_prev)));
    (lhs.value(), rhs)
}

/// Relative violation of the residual identity beyond its tolerance.
///
/// The absolute floor covers rounding in `z` itself, which is of order
/// `eps * |x|^2` however small the residual is.
pub fn identity_error(x: &[Vec<f64>], z: &[f64], z_prev: &[f64], p: &[f64]) -> f64 {
    let (lhs, rhs) = residual_identity(x, z, z_prev, p);
    let scale = x.iter().chain(core::iter::once(&z_prev.to_vec())).map(|v| num::norm2_sq(v)).fold(0.0, f64::max);
    let allowed = IDENTITY_TOL * lhs.max(rhs) + 1e-14 * (1.0 + scale);
    let excess = (lhs - rhs).abs() - allowed;
    if excess <= 0.0 {
        0.0
    } else {
        excess / lhs.max(rhs).max(f64::MIN_POSITIVE)
    }
}

/// `w_s + rho (x_s - z)`, optionally re-centered.
pub fn dual_update(omega: &DualMultipliers, x: &[Vec<f64>], z: &[f64], rho: f64, p: &[f64], recenter: bool) -> DualMultipliers {
    let mut next = DualMultipliers {
        omega: omega
            .omega
            .iter()
            .zip(x)
            .map(|(w, xs)| w.iter().zip(xs).zip(z).map(|((w, x), z)| w + rho * (x - z)).collect())
            .collect(),
    };
    if recenter {
        next.recenter(p);
    }
    next
}

fn check_dual(problem: &TwoStageProblem, omega: &DualMultipliers) -> Result<(), Error> {
    let p = problem.probabilities();
    if omega.omega.len() != problem.n_scenarios() || omega.omega.iter().any(|w| w.len() != problem.n_x()) {
        return Err(Error::Config("multiplier dimensions do not match the problem"));
    }
    if !omega.is_dual_feasible(&p) {
        return Err(Error::DualInfeasible { imbalance: omega.imbalance(&p) });
    }
    Ok(())
}

fn limited<'c>(solver: &MilpSolver<'c>, deadline: &Deadline<'_>) -> MilpSolver<'c> {
    let mut s = *solver;
    if let Some(rem) = deadline.remaining() {
        s.limits.time_limit = Some(s.limits.time_limit.map_or(rem, |t| t.min(rem)));
    }
    s
}

struct Tracker {
    trace: Vec<IterationRecord>,
    best: f64,
    last_phi: f64,
}

impl Tracker {
    fn new() -> Self {
        Tracker { trace: Vec::new(), best: f64::NEG_INFINITY, last_phi: f64::NEG_INFINITY }
    }

    fn push(&mut self, mut rec: IterationRecord) {
        if let Some(phi) = rec.phi {
            self.best = self.best.max(phi);
            self.last_phi = phi;
        }
        rec.best_phi = self.best;
        self.trace.push(rec);
    }
}

struct PhScenario {
    phi: Option<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    inexact: bool,
    solves: usize,
}

/// Progressive hedging on the mixed-integer scenario sets, computing
/// `phi(w^k)` by one extra MILP per scenario every `bounds_every`
/// iterations. The proximal subproblem is solved exactly through the
/// binary linearization, so the first stage must be binary.
pub fn run_ph<E: ScenarioExecutor>(
    problem: &TwoStageProblem,
    omega0: &DualMultipliers,
    cfg: &HedgingConfig,
    solver: &MilpSolver<'_>,
    exec: &E,
) -> Result<RunResult, Error> {
    cfg.check()?;
    problem.checked()?;
    problem.has_binary_first_stage()?;
    check_dual(problem, omega0)?;
    let deadline = Deadline::new(solver.clock, cfg.time_limit);
    let p = problem.probabilities();
    let nx = problem.n_x();
    let mut tracker = Tracker::new();

    let milp = limited(solver, &deadline);
    let init = exec.map(problem.n_scenarios(), |s| solve_scenario(problem, s, &omega0.omega[s], &milp));
    let init = init.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut x = Vec::with_capacity(init.len());
    let mut y = Vec::with_capacity(init.len());
    for (s, r) in init.iter().enumerate() {
        let (xs, ys) = r.split(nx).ok_or(Error::sub(s, SubproblemFailure::NoBound))?;
        x.push(xs.to_vec());
        y.push(ys.to_vec());
    }
    let phi0 = num::sum(init.iter().zip(&p).map(|(r, p)| p * r.value));
    let mut milp_solves = init.len();
    let mut z = consensus(&x, &p);
    tracker.push(IterationRecord {
        k: 0,
        phi: Some(phi0),
        best_phi: phi0,
        residual: f64::NAN,
        wall_s: deadline.elapsed(),
        milp_solves,
        qp_solves: 0,
        vertices: 0,
        inexact: init.iter().any(|r| !r.exact),
        qp_unconverged: false,
        identity_error: 0.0,
    });
    let mut omega = dual_update(omega0, &x, &z, cfg.rho, &p, cfg.recenter);
    let mut termination = Termination::IterationLimit;

    for k in 1..=cfg.k_max {
        if deadline.expired() {
            termination = Termination::TimeLimit;
            break;
        }
        let with_bound = cfg.bounds_every > 0 && k % cfg.bounds_every == 0;
        let milp = limited(solver, &deadline);
        let results = exec.map(problem.n_scenarios(), |s| -> Result<PhScenario, Error> {
            let w = &omega.omega[s];
            let mut solves = 0;
            let mut inexact = false;
            let phi = if with_bound {
                let b = solve_scenario(problem, s, w, &milp)?;
                solves += 1;
                inexact |= !b.exact;
                Some(b.value)
            } else {
                None
            };
            let base = problem.scenario_milp(s, &vec![0.0; nx]);
            let prox = prox_linearize(&base, &z, w, cfg.rho).map_err(|e| Error::sub(s, SubproblemFailure::Solver(e)))?;
            let r = solve_scenario_model(&prox.model, s, &milp)?;
            solves += 1;
            inexact |= !r.exact;
            let (xs, ys) = r.split(nx).ok_or(Error::sub(s, SubproblemFailure::NoBound))?;
            Ok(PhScenario { phi, x: xs.to_vec(), y: ys.to_vec(), inexact, solves })
        });
        let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
        let phi = if with_bound {
            Some(num::sum(results.iter().zip(&p).map(|(r, p)| p * r.phi.unwrap_or(0.0))))
        } else {
            None
        };
        milp_solves += results.iter().map(|r| r.solves).sum::<usize>();
        let inexact = results.iter().any(|r| r.inexact);
        for (s, r) in results.into_iter().enumerate() {
            x[s] = r.x;
            y[s] = r.y;
        }
        let z_prev = core::mem::take(&mut z);
        z = consensus(&x, &p);
        let res = residual(&x, &z_prev, &p);
        let identity = identity_error(&x, &z, &z_prev, &p);
        debug_assert!(identity == 0.0, "residual identity violated by {identity:e}");
        tracker.push(IterationRecord {
            k,
            phi,
            best_phi: 0.0,
            residual: res,
            wall_s: deadline.elapsed(),
            milp_solves,
            qp_solves: 0,
            vertices: 0,
            inexact,
            qp_unconverged: false,
            identity_error: identity,
        });
        if res < cfg.eps {
            termination = Termination::Converged;
            break;
        }
        omega = dual_update(&omega, &x, &z, cfg.rho, &p, cfg.recenter);
    }
    Ok(RunResult {
        iterate: PrimalIterate { x, y, z },
        omega,
        phi: tracker.last_phi,
        best_phi: tracker.best,
        termination,
        trace: tracker.trace,
        vertex_sets: Vec::new(),
    })
}

/// Starting vertex sets and points for FW-PH.
#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    pub vertex_sets: Vec<VertexSet>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    /// `phi(w^0)` from the initial MILPs.
    pub phi: f64,
    pub milp_solves: usize,
}

/// Per-scenario MILP at `w^0`, then the recourse of every other scenario at
/// the first scenario's `x`, so the sets share that point.
pub fn fwph_initialize<E: ScenarioExecutor>(
    problem: &TwoStageProblem,
    omega0: &DualMultipliers,
    solver: &MilpSolver<'_>,
    exec: &E,
) -> Result<Initialization, Error> {
    problem.checked()?;
    check_dual(problem, omega0)?;
    let nx = problem.n_x();
    let p = problem.probabilities();
    let first = exec.map(problem.n_scenarios(), |s| solve_scenario(problem, s, &omega0.omega[s], solver));
    let first = first.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (s, r) in first.iter().enumerate() {
        let (xs, ys) = r.split(nx).ok_or(Error::sub(s, SubproblemFailure::NoBound))?;
        x.push(xs.to_vec());
        y.push(ys.to_vec());
    }
    let phi = num::sum(first.iter().zip(&p).map(|(r, p)| p * r.value));
    let anchor = x[0].clone();
    let recourse = exec.map(problem.n_scenarios(), |s| -> Result<Option<Vec<f64>>, Error> {
        if s == 0 {
            return Ok(None);
        }
        let model = problem.recourse_milp(s, &anchor);
        match solve_scenario_model(&model, s, solver) {
            Ok(r) => r.point.map(Some).ok_or(Error::sub(s, SubproblemFailure::NoBound)),
            Err(Error::Subproblem { failure: SubproblemFailure::Infeasible, .. }) => Err(Error::RecourseInfeasible { scenario: s }),
            Err(e) => Err(e),
        }
    });
    let recourse = recourse.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut vertex_sets = Vec::with_capacity(problem.n_scenarios());
    for s in 0..problem.n_scenarios() {
        let mut v = VertexSet::new();
        v.insert_scenario_point(problem, s, &x[s], &y[s], Provenance::MilpVertex);
        if let Some(ybar) = &recourse[s] {
            v.insert_scenario_point(problem, s, &anchor, ybar, Provenance::InitFeasible);
        }
        vertex_sets.push(v);
    }
    Ok(Initialization { vertex_sets, x, y, phi, milp_solves: first.len() + recourse.iter().flatten().count() })
}

/// A first-stage point lying in the `x`-projection of every `conv(V_s)`,
/// found by a feasibility LP; `None` when the projections are disjoint.
pub fn common_point(problem: &TwoStageProblem, vertex_sets: &[VertexSet]) -> Result<Option<Vec<f64>>, Error> {
    let nx = problem.n_x();
    let total_weights: usize = vertex_sets.iter().map(VertexSet::len).sum();
    let n = nx + total_weights;
    let mut bounds = problem.first.bounds.clone();
    bounds.extend(core::iter::repeat_n(Bound::NON_NEGATIVE, total_weights));
    let mut lp = LinearProgram::new(vec![0.0; n], bounds);
    let mut offset = nx;
    for v in vertex_sets {
        let mut sum_row = vec![0.0; n];
        for i in 0..v.len() {
            sum_row[offset + i] = 1.0;
        }
        lp.push(Constraint::eq(sum_row, 1.0));
        for j in 0..nx {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            for (i, vert) in v.points().iter().enumerate() {
                row[offset + i] = vert.x[j];
            }
            lp.push(Constraint::eq(row, 0.0));
        }
        offset += v.len();
    }
    let sol = solve_lp(&lp, None)?;
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.x[..nx].to_vec())),
        LpStatus::Infeasible => Ok(None),
        _ => Err(Error::OracleLp),
    }
}

struct FwScenario {
    vertices: VertexSet,
    weights: SimplexWeights,
    phi: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    inexact: bool,
    milp_solves: usize,
    qp_solves: usize,
    qp_converged: bool,
}

/// FW-PH from a prepared initialization. With `t_max = 1` the initial sets
/// must share a first-stage point; every iteration then costs exactly one
/// MILP and one master QP per scenario, and `phi^k` is the bound at
/// `w^k + alpha rho (x^{k-1} - z^{k-1})`.
pub fn run_fwph<E: ScenarioExecutor>(
    problem: &TwoStageProblem,
    init: &Initialization,
    omega0: &DualMultipliers,
    cfg: &HedgingConfig,
    solver: &MilpSolver<'_>,
    exec: &E,
) -> Result<RunResult, Error> {
    cfg.check()?;
    problem.checked()?;
    check_dual(problem, omega0)?;
    let n_s = problem.n_scenarios();
    if init.vertex_sets.len() != n_s || init.x.len() != n_s || init.y.len() != n_s {
        return Err(Error::Config("initialization does not match the scenario count"));
    }
    if init.vertex_sets.iter().any(VertexSet::is_empty) {
        return Err(Error::Config("every initial vertex set needs a point"));
    }
    if cfg.t_max == 1 && common_point(problem, &init.vertex_sets)?.is_none() {
        return Err(Error::NoCommonPoint);
    }
    let deadline = Deadline::new(solver.clock, cfg.time_limit);
    let p = problem.probabilities();
    let sdm = SdmConfig { t_max: cfg.t_max, tau: 0.0, qp_tol: cfg.qp_tol, ..SdmConfig::new(cfg.rho) };
    let mut tracker = Tracker::new();

    let mut sets = init.vertex_sets.clone();
    let mut weights: Vec<Option<SimplexWeights>> = vec![None; n_s];
    let mut x = init.x.clone();
    let mut y = init.y.clone();
    let mut z = consensus(&x, &p);
    let mut omega = dual_update(omega0, &x, &z, cfg.rho, &p, cfg.recenter);
    let mut milp_solves = 0;
    let mut qp_solves = 0;
    let mut termination = Termination::IterationLimit;

    for k in 1..=cfg.k_max {
        if deadline.expired() {
            termination = Termination::TimeLimit;
            break;
        }
        let milp = limited(solver, &deadline);
        let results = exec.map(n_s, |s| -> Result<FwScenario, Error> {
            let x_tilde: Vec<f64> = z.iter().zip(&x[s]).map(|(z, x)| (1.0 - cfg.alpha) * z + cfg.alpha * x).collect();
            let mut v = sets[s].clone();
            let out = run_sdm(problem, s, &mut v, weights[s].as_ref(), &x_tilde, &y[s], &omega.omega[s], &z, &sdm, &milp)?;
            Ok(FwScenario {
                vertices: v,
                weights: out.weights,
                phi: out.phi,
                x: out.x,
                y: out.y,
                inexact: !out.phi_exact,
                milp_solves: out.milp_solves,
                qp_solves: out.qp_solves,
                qp_converged: out.qp_converged,
            })
        });
        let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
        let phi = num::sum(results.iter().zip(&p).map(|(r, p)| p * r.phi));
        let inexact = results.iter().any(|r| r.inexact);
        let qp_unconverged = results.iter().any(|r| !r.qp_converged);
        for (s, r) in results.into_iter().enumerate() {
            milp_solves += r.milp_solves;
            qp_solves += r.qp_solves;
            sets[s] = r.vertices;
            weights[s] = Some(r.weights);
            x[s] = r.x;
            y[s] = r.y;
        }
        let z_prev = core::mem::take(&mut z);
        z = consensus(&x, &p);
        let res = residual(&x, &z_prev, &p);
        let identity = identity_error(&x, &z, &z_prev, &p);
        debug_assert!(identity == 0.0, "residual identity violated by {identity:e}");
        tracker.push(IterationRecord {
            k,
            phi: Some(phi),
            best_phi: 0.0,
            residual: res,
            wall_s: deadline.elapsed(),
            milp_solves,
            qp_solves,
            vertices: sets.iter().map(VertexSet::len).sum(),
            inexact,
            qp_unconverged,
            identity_error: identity,
        });
        if res < cfg.eps {
            termination = Termination::Converged;
            break;
        }
        omega = dual_update(&omega, &x, &z, cfg.rho, &p, cfg.recenter);
    }
    Ok(RunResult {
        iterate: PrimalIterate { x, y, z },
        omega,
        phi: tracker.last_phi,
        best_phi: tracker.best,
        termination,
        trace: tracker.trace,
        vertex_sets: sets,
    })
}

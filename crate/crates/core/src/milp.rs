//! Best-bound branch-and-bound over the simplex in [`crate::lp`].
//!
//! Nodes are chosen by smallest LP bound (ties by creation order) with a
//! depth-first plunge until the first incumbent exists. Branching is on the
//! most fractional integer column, lowest index on ties. Children start from
//! their parent's final basis.

use alloc::vec::Vec;
use core::fmt;

use crate::exec::{Clock, Deadline, FrozenClock};
use crate::lp::{Bound, LinearProgram, LpError, LpOptions, LpStatus, Simplex};
use crate::num;

pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub lp: LinearProgram,
    pub kinds: Vec<VarKind>,
}

impl MilpModel {
    pub fn new(lp: LinearProgram, kinds: Vec<VarKind>) -> Self {
        Self { lp, kinds }
    }

    pub fn check(&self) -> Result<(), MilpError> {
        self.lp.check().map_err(MilpError::Lp)?;
        if self.kinds.len() != self.lp.num_vars() {
            return Err(MilpError::Lp(LpError::Dimension {
                what: "integrality flags",
                expected: self.lp.num_vars(),
                found: self.kinds.len(),
            }));
        }
        for (j, (k, b)) in self.kinds.iter().zip(&self.lp.bounds).enumerate() {
            if k.is_integral() && !b.is_finite() {
                return Err(MilpError::UnboundedInteger { var: j });
            }
        }
        Ok(())
    }

    /// Bounds with integer columns rounded inward and binaries clipped to [0, 1].
    fn tightened_bounds(&self) -> Vec<Bound> {
        self.lp
            .bounds
            .iter()
            .zip(&self.kinds)
            .map(|(b, k)| match k {
                VarKind::Continuous => *b,
                VarKind::Integer => Bound::new(num::ceil(b.lower - INTEGRALITY_TOL), num::floor(b.upper + INTEGRALITY_TOL)),
                VarKind::Binary => Bound::new(
                    num::ceil(b.lower - INTEGRALITY_TOL).max(0.0),
                    num::floor(b.upper + INTEGRALITY_TOL).min(1.0),
                ),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MilpError {
    Lp(LpError),
    UnboundedInteger { var: usize },
    NonBinaryFirstStage { var: usize },
    Dimension { expected: usize, found: usize },
}

impl fmt::Display for MilpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilpError::Lp(e) => write!(f, "{e}"),
            MilpError::UnboundedInteger { var } => write!(f, "integer variable {var} needs finite bounds"),
            MilpError::NonBinaryFirstStage { var } => {
                write!(f, "first-stage variable {var} is not binary; the proximal term cannot be linearized")
            }
            MilpError::Dimension { expected, found } => {
                write!(f, "vector has length {found}, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// A limit stopped the search; `dual_bound` is still a valid lower bound.
    BoundOnly,
}

#[derive(Debug, Clone)]
pub struct MilpSolution {
    pub status: MilpStatus,
    pub point: Option<Vec<f64>>,
    /// Incumbent objective, `+inf` without an incumbent.
    pub objective: f64,
    pub dual_bound: f64,
    pub nodes: usize,
    /// Global dual bound after each processed node, when requested.
    pub bound_history: Vec<f64>,
}

impl MilpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == MilpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MilpLimits {
    pub node_limit: Option<usize>,
    pub time_limit: Option<f64>,
}

/// Solver handle: limits plus the clock that enforces them.
#[derive(Clone, Copy)]
pub struct MilpSolver<'c> {
    pub limits: MilpLimits,
    pub clock: &'c dyn Clock,
    pub record_bounds: bool,
}

impl fmt::Debug for MilpSolver<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MilpSolver").field("limits", &self.limits).finish()
    }
}

impl Default for MilpSolver<'static> {
    fn default() -> Self {
        Self {
            limits: MilpLimits::default(),
            clock: &FrozenClock,
            record_bounds: false,
        }
    }
}

impl<'c> MilpSolver<'c> {
    pub fn new(limits: MilpLimits, clock: &'c dyn Clock) -> Self {
        Self {
            limits,
            clock,
            record_bounds: false,
        }
    }

    pub fn solve(&self, model: &MilpModel) -> Result<MilpSolution, MilpError> {
        model.check()?;
        BranchAndBound::new(model, self).run()
    }
}

pub fn solve_milp(model: &MilpModel, limits: MilpLimits, clock: &dyn Clock) -> Result<MilpSolution, MilpError> {
    MilpSolver::new(limits, clock).solve(model)
}

struct Node {
    id: usize,
    bounds: Vec<Bound>,
    /// Parent LP value: a lower bound for everything under this node.
    bound: f64,
    basis: Option<crate::lp::Basis>,
}

struct BranchAndBound<'m, 's> {
    model: &'m MilpModel,
    solver: &'s MilpSolver<'s>,
    simplex: Simplex<'m>,
    open: Vec<Node>,
    next_id: usize,
    incumbent: Option<(f64, Vec<f64>)>,
    unresolved: f64,
    nodes: usize,
    global_bound: f64,
    history: Vec<f64>,
}

impl<'m, 's> BranchAndBound<'m, 's> {
    fn new(model: &'m MilpModel, solver: &'s MilpSolver<'s>) -> Self {
        Self {
            model,
            solver,
            simplex: Simplex::new(&model.lp),
            open: Vec::new(),
            next_id: 0,
            incumbent: None,
            unresolved: f64::INFINITY,
            nodes: 0,
            global_bound: f64::NEG_INFINITY,
            history: Vec::new(),
        }
    }

    fn prune_level(&self) -> f64 {
        match &self.incumbent {
            Some((v, _)) => v - 1e-9 * (1.0 + v.abs()),
            None => f64::INFINITY,
        }
    }

    fn make_node(&mut self, bounds: Vec<Bound>, bound: f64, basis: Option<crate::lp::Basis>) -> Node {
        let id = self.next_id;
        self.next_id += 1;
        Node { id, bounds, bound, basis }
    }

    fn pop_best(&mut self) -> Option<Node> {
        let idx = self
            .open
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.bound.total_cmp(&b.bound).then(a.id.cmp(&b.id)))
            .map(|(i, _)| i)?;
        Some(self.open.swap_remove(idx))
    }

    fn frontier_bound(&self, pending: Option<&Node>) -> f64 {
        let mut b = self.unresolved;
        for n in self.open.iter().chain(pending) {
            b = b.min(n.bound);
        }
        if let Some((v, _)) = &self.incumbent {
            b = b.min(*v);
        }
        b
    }

    fn note_bound(&mut self, pending: Option<&Node>) {
        let b = self.frontier_bound(pending);
        if b > self.global_bound {
            self.global_bound = b;
        }
        if self.solver.record_bounds {
            self.history.push(self.global_bound);
        }
    }

    fn run(mut self) -> Result<MilpSolution, MilpError> {
        let deadline = Deadline::new(self.solver.clock, self.solver.limits.time_limit);
        let root_bounds = self.model.tightened_bounds();
        if root_bounds.iter().any(|b| b.lower > b.upper) {
            return Ok(self.finish(MilpStatus::Infeasible));
        }
        let root = self.make_node(root_bounds, f64::NEG_INFINITY, None);
        let mut plunge = Some(root);
        let mut limited = false;

        loop {
            let node = match plunge.take() {
                Some(n) => n,
                None => match self.pop_best() {
                    Some(n) => n,
                    None => break,
                },
            };
            if node.bound >= self.prune_level() {
                continue;
            }
            let out_of_nodes = self.solver.limits.node_limit.is_some_and(|l| self.nodes >= l);
            if out_of_nodes || (self.nodes > 0 && deadline.expired()) {
                self.open.push(node);
                limited = true;
                break;
            }

            let sol = self
                .simplex
                .solve(&node.bounds, node.basis.as_ref(), LpOptions::default())
                .map_err(MilpError::Lp)?;
            self.nodes += 1;

            match sol.status {
                LpStatus::Infeasible => {}
                LpStatus::Unbounded => return Ok(self.finish(MilpStatus::Unbounded)),
                LpStatus::IterationLimit => {
                    self.unresolved = self.unresolved.min(node.bound);
                }
                LpStatus::Optimal => {
                    let value = sol.objective.max(node.bound);
                    if value < self.prune_level() {
                        match self.branching_column(&sol.x) {
                            None => self.accept(sol.x),
                            Some(j) => {
                                let v = sol.x[j];
                                let mut down = node.bounds.clone();
                                down[j].upper = num::floor(v);
                                let mut up = node.bounds;
                                up[j].lower = num::ceil(v);
                                let down = self.make_node(down, value, Some(sol.basis.clone()));
                                let up = self.make_node(up, value, Some(sol.basis));
                                if self.incumbent.is_none() {
                                    let frac = v - num::floor(v);
                                    let (first, second) = if frac < 0.5 { (down, up) } else { (up, down) };
                                    self.open.push(second);
                                    plunge = Some(first);
                                } else {
                                    self.open.push(down);
                                    self.open.push(up);
                                }
                            }
                        }
                    }
                }
            }
            self.note_bound(plunge.as_ref());
        }

        let status = if limited || self.unresolved.is_finite() {
            let proven = self
                .incumbent
                .as_ref()
                .is_some_and(|(v, _)| self.frontier_bound(None) >= v - 1e-9 * (1.0 + v.abs()));
            if proven {
                MilpStatus::Optimal
            } else {
                MilpStatus::BoundOnly
            }
        } else if self.incumbent.is_some() {
            MilpStatus::Optimal
        } else {
            MilpStatus::Infeasible
        };
        Ok(self.finish(status))
    }

    fn branching_column(&self, x: &[f64]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, k) in self.model.kinds.iter().enumerate() {
            if !k.is_integral() {
                continue;
            }
            let f = x[j] - num::floor(x[j]);
            let dist = f.min(1.0 - f);
            if dist > INTEGRALITY_TOL && best.is_none_or(|(_, d)| dist > d) {
                best = Some((j, dist));
            }
        }
        best.map(|(j, _)| j)
    }

    fn accept(&mut self, mut x: Vec<f64>) {
        for (v, k) in x.iter_mut().zip(&self.model.kinds) {
            if k.is_integral() {
                *v = num::round(*v);
            }
        }
        let value = self.model.lp.objective_value(&x);
        if self.incumbent.as_ref().is_none_or(|(b, _)| value < *b) {
            self.incumbent = Some((value, x));
        }
    }

    fn finish(mut self, status: MilpStatus) -> MilpSolution {
        let dual_bound = match status {
            MilpStatus::Optimal => self.incumbent.as_ref().map_or(f64::INFINITY, |(v, _)| *v),
            MilpStatus::Infeasible => f64::INFINITY,
            MilpStatus::Unbounded => f64::NEG_INFINITY,
            MilpStatus::BoundOnly => self.global_bound.max(self.frontier_bound(None)),
        };
        let (objective, point) = match self.incumbent.take() {
            Some((v, x)) if status != MilpStatus::Unbounded => (v, Some(x)),
            _ => (f64::INFINITY, None),
        };
        MilpSolution {
            status,
            point,
            objective,
            dual_bound,
            nodes: self.nodes,
            bound_history: self.history,
        }
    }
}

/// A MILP whose optimum, plus `constant`, equals the proximal augmented
/// Lagrangian minimum over the same feasible set.
#[derive(Debug, Clone)]
pub struct ProxLinearization {
    pub model: MilpModel,
    pub constant: f64,
}

/// Rewrites `min obj·v + w·(x - z) + rho/2 |x - z|^2` over `model`'s feasible
/// set as a MILP, where `x` is the first `z.len()` columns. Requires those
/// columns to be binary so that `x_i^2 = x_i`.
pub fn prox_linearize(model: &MilpModel, z: &[f64], w: &[f64], rho: f64) -> Result<ProxLinearization, MilpError> {
    let nx = z.len();
    if w.len() != nx {
        return Err(MilpError::Dimension {
            expected: nx,
            found: w.len(),
        });
    }
    if model.lp.num_vars() < nx || model.kinds.len() < nx {
        return Err(MilpError::Dimension {
            expected: nx,
            found: model.lp.num_vars(),
        });
    }
    for j in 0..nx {
        let b = model.lp.bounds[j];
        let binary = match model.kinds[j] {
            VarKind::Binary => true,
            VarKind::Integer => b.lower >= 0.0 && b.upper <= 1.0,
            VarKind::Continuous => false,
        };
        if !binary {
            return Err(MilpError::NonBinaryFirstStage { var: j });
        }
    }
    let mut out = model.clone();
    let mut constant = num::NeumaierSum::new();
    for j in 0..nx {
        out.lp.objective[j] += w[j] + 0.5 * rho * (1.0 - 2.0 * z[j]);
        constant.add(0.5 * rho * z[j] * z[j] - w[j] * z[j]);
    }
    Ok(ProxLinearization {
        model: out,
        constant: constant.value(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Constraint;
    use alloc::vec;

    fn knapsack() -> MilpModel {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
        let mut lp = LinearProgram::new(vec![-5.0, -4.0, -3.0], vec![Bound::new(0.0, 3.0); 3]);
        lp.push(Constraint::le(vec![2.0, 3.0, 1.0], 5.0));
        lp.push(Constraint::le(vec![4.0, 1.0, 2.0], 11.0));
        lp.push(Constraint::le(vec![3.0, 4.0, 2.0], 8.0));
        MilpModel::new(lp, vec![VarKind::Integer; 3])
    }

    #[test]
    fn integral_relaxation_needs_one_node() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0], vec![Bound::new(0.0, 5.0); 2]);
        lp.push(Constraint::ge(vec![1.0, 0.0], 2.0));
        lp.push(Constraint::ge(vec![0.0, 1.0], 1.0));
        let sol = MilpSolver::default().solve(&MilpModel::new(lp, vec![VarKind::Integer; 2])).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert_eq!(sol.nodes, 1);
        assert_eq!(sol.objective, 3.0);
    }

    #[test]
    fn small_integer_program() {
        let sol = MilpSolver::default().solve(&knapsack()).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert_eq!(sol.objective, -13.0);
        assert_eq!(sol.dual_bound, sol.objective);
    }

    #[test]
    fn node_limit_returns_valid_bound() {
        let solver = MilpSolver::new(
            MilpLimits {
                node_limit: Some(1),
                time_limit: None,
            },
            &FrozenClock,
        );
        // LP root is 1.5, integer optimum 1
        let mut lp = LinearProgram::new(vec![-1.0, -1.0], vec![Bound::new(0.0, 3.0); 2]);
        lp.push(Constraint::le(vec![2.0, 2.0], 3.0));
        lp.push(Constraint::le(vec![2.0, -2.0], 1.0));
        let model = MilpModel::new(lp, vec![VarKind::Integer; 2]);
        let sol = solver.solve(&model).unwrap();
        assert_eq!(sol.status, MilpStatus::BoundOnly, "{sol:?}");
        assert!(sol.dual_bound <= -1.0 + 1e-9);
        assert!((sol.dual_bound + 1.5).abs() < 1e-9);
    }

    #[test]
    fn integer_infeasible() {
        let mut lp = LinearProgram::new(vec![1.0], vec![Bound::new(0.0, 3.0)]);
        lp.push(Constraint::eq(vec![2.0], 3.0));
        let sol = MilpSolver::default().solve(&MilpModel::new(lp, vec![VarKind::Integer])).unwrap();
        assert_eq!(sol.status, MilpStatus::Infeasible);
    }

    #[test]
    fn unbounded_continuous_part() {
        let lp = LinearProgram::new(vec![1.0, -1.0], vec![Bound::new(0.0, 1.0), Bound::NON_NEGATIVE]);
        let sol = MilpSolver::default()
            .solve(&MilpModel::new(lp, vec![VarKind::Binary, VarKind::Continuous]))
            .unwrap();
        assert_eq!(sol.status, MilpStatus::Unbounded);
    }

    #[test]
    fn integer_without_bounds_is_rejected() {
        let lp = LinearProgram::new(vec![1.0], vec![Bound::NON_NEGATIVE]);
        let err = MilpSolver::default().solve(&MilpModel::new(lp, vec![VarKind::Integer])).unwrap_err();
        assert_eq!(err, MilpError::UnboundedInteger { var: 0 });
    }

    #[test]
    fn prox_at_origin_adds_half_rho() {
        let lp = LinearProgram::new(vec![1.0, 2.0, 3.0], vec![Bound::BINARY, Bound::BINARY, Bound::NON_NEGATIVE]);
        let model = MilpModel::new(lp, vec![VarKind::Binary, VarKind::Binary, VarKind::Continuous]);
        let p = prox_linearize(&model, &[0.0, 0.0], &[0.0, 0.0], 2.0).unwrap();
        assert_eq!(p.model.lp.objective, vec![2.0, 3.0, 3.0]);
        assert_eq!(p.constant, 0.0);
    }

    #[test]
    fn prox_rejects_general_integer_first_stage() {
        let lp = LinearProgram::new(vec![1.0, 2.0], vec![Bound::new(0.0, 3.0), Bound::BINARY]);
        let model = MilpModel::new(lp, vec![VarKind::Integer, VarKind::Binary]);
        assert_eq!(
            prox_linearize(&model, &[0.0, 0.0], &[0.0, 0.0], 1.0).unwrap_err(),
            MilpError::NonBinaryFirstStage { var: 0 }
        );
    }
}

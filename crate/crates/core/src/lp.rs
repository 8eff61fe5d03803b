//! Dense bounded-variable primal simplex.
//!
//! Every row `a·x (<=|>=|=) b` is stored as the equality `a·x + s = b` with a
//! logical variable `s` whose bounds encode the relation (`[0, inf)` for `<=`,
//! `(-inf, 0]` for `>=`, `[0, 0]` for `=`). The solver keeps an explicit basis
//! inverse, updates it with one eta step per pivot and reinverts periodically.
//!
//! Phase 1 minimises the sum of bound violations of the basic variables, so any
//! starting basis works, including a parent basis after branch-and-bound has
//! moved some bounds.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::num::{self, NeumaierSum};

const FEAS_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REINVERT_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::LessEq, rhs)
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::GreaterEq, rhs)
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Equal, rhs)
    }

    /// Signed violation of the row at `x` (positive means violated).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = num::dot(&self.coeffs, x);
        match self.relation {
            Relation::LessEq => lhs - self.rhs,
            Relation::GreaterEq => self.rhs - lhs,
            Relation::Equal => (lhs - self.rhs).abs(),
        }
    }
}

/// Variable bounds. Missing bounds are `f64::INFINITY` / `f64::NEG_INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub const FREE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
    pub const NON_NEGATIVE: Bound = Bound {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const BINARY: Bound = Bound {
        lower: 0.0,
        upper: 1.0,
    };

    pub const fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

/// `min objective·x` subject to rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, bounds: Vec<Bound>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        num::dot(&self.objective, x)
    }

    /// Largest row violation and bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(0.0, f64::max);
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .map(|(b, &v)| (b.lower - v).max(v - b.upper))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }

    pub fn check(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::Dimension {
                what: "bounds",
                expected: n,
                found: self.bounds.len(),
            });
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite { row: None });
        }
        for (i, b) in self.bounds.iter().enumerate() {
            if b.lower.is_nan() || b.upper.is_nan() || b.lower == f64::INFINITY || b.upper == f64::NEG_INFINITY {
                return Err(LpError::BadBound { var: i });
            }
            if b.lower > b.upper {
                return Err(LpError::BadBound { var: i });
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Dimension {
                    what: "constraint row",
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite { row: Some(i) });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpError {
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    NonFinite {
        row: Option<usize>,
    },
    BadBound {
        var: usize,
    },
    SingularBasis,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Dimension {
                what,
                expected,
                found,
            } => write!(f, "{what} has length {found}, expected {expected}"),
            LpError::NonFinite { row: Some(r) } => write!(f, "row {r} has a non-finite coefficient"),
            LpError::NonFinite { row: None } => write!(f, "objective has a non-finite coefficient"),
            LpError::BadBound { var } => write!(f, "variable {var} has invalid bounds"),
            LpError::SingularBasis => write!(f, "basis matrix is numerically singular"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivot budget exhausted; the returned point is the last basis.
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Free,
}

/// Status of every structural variable followed by every row logical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub status: Vec<VarStatus>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// Row duals: sensitivity of the objective to each right-hand side.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub basis: Basis,
    pub pivots: usize,
}

impl LpSolution {
    /// Dual objective `b·y + sum_j d_j * (bound d_j points at)`; equals the
    /// primal objective at an optimal basis.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let mut acc = NeumaierSum::new();
        for (c, y) in lp.constraints.iter().zip(&self.duals) {
            acc.add(c.rhs * y);
        }
        for (b, &d) in lp.bounds.iter().zip(&self.reduced_costs) {
            if d > 0.0 {
                acc.add(d * b.lower);
            } else if d < 0.0 {
                acc.add(d * b.upper);
            }
        }
        acc.value()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self { max_pivots: 50_000 }
    }
}

pub fn solve_lp(lp: &LinearProgram, warm: Option<&Basis>) -> Result<LpSolution, LpError> {
    lp.check()?;
    Simplex::new(lp).solve(&lp.bounds, warm, LpOptions::default())
}

/// Column-major copy of an LP's matrix, reusable across bound changes.
#[derive(Debug, Clone)]
pub struct Simplex<'a> {
    lp: &'a LinearProgram,
    m: usize,
    n: usize,
    /// Column-major `m x n`.
    cols: Vec<f64>,
    rhs: Vec<f64>,
    row_bounds: Vec<Bound>,
}

impl<'a> Simplex<'a> {
    /// `lp` must already have passed [`LinearProgram::check`].
    pub fn new(lp: &'a LinearProgram) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let mut cols = vec![0.0; m * n];
        for (i, c) in lp.constraints.iter().enumerate() {
            for (j, &a) in c.coeffs.iter().enumerate() {
                cols[j * m + i] = a;
            }
        }
        let rhs = lp.constraints.iter().map(|c| c.rhs).collect();
        let row_bounds = lp
            .constraints
            .iter()
            .map(|c| match c.relation {
                Relation::LessEq => Bound::NON_NEGATIVE,
                Relation::GreaterEq => Bound::new(f64::NEG_INFINITY, 0.0),
                Relation::Equal => Bound::fixed(0.0),
            })
            .collect();
        Self {
            lp,
            m,
            n,
            cols,
            rhs,
            row_bounds,
        }
    }

    /// Solves with structural bounds `bounds` in place of `lp.bounds`.
    pub fn solve(&self, bounds: &[Bound], warm: Option<&Basis>, opts: LpOptions) -> Result<LpSolution, LpError> {
        debug_assert_eq!(bounds.len(), self.n);
        let mut st = State::start(self, bounds, warm)?;
        st.run(self, opts)
    }

    fn column(&self, j: usize) -> Column<'_> {
        if j < self.n {
            Column::Dense(&self.cols[j * self.m..(j + 1) * self.m])
        } else {
            Column::Unit(j - self.n)
        }
    }
}

enum Column<'a> {
    Dense(&'a [f64]),
    Unit(usize),
}

struct State {
    bounds: Vec<Bound>,
    cost: Vec<f64>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    x: Vec<f64>,
    binv: Vec<f64>,
    pivots: usize,
    since_reinvert: usize,
    degenerate_run: usize,
}

impl State {
    fn start(s: &Simplex<'_>, bounds: &[Bound], warm: Option<&Basis>) -> Result<Self, LpError> {
        let (m, n) = (s.m, s.n);
        let mut all_bounds = Vec::with_capacity(n + m);
        all_bounds.extend_from_slice(bounds);
        all_bounds.extend_from_slice(&s.row_bounds);
        let mut cost = Vec::with_capacity(n + m);
        cost.extend_from_slice(&s.lp.objective);
        cost.resize(n + m, 0.0);

        let mut st = Self {
            bounds: all_bounds,
            cost,
            status: Vec::new(),
            head: Vec::new(),
            x: vec![0.0; n + m],
            binv: Vec::new(),
            pivots: 0,
            since_reinvert: 0,
            degenerate_run: 0,
        };

        let warm_ok = warm.is_some_and(|b| st.load_basis(s, b));
        if !warm_ok {
            st.slack_basis(s);
        }
        if st.reinvert(s).is_err() {
            if !warm_ok {
                return Err(LpError::SingularBasis);
            }
            st.slack_basis(s);
            st.reinvert(s)?;
        }
        st.recompute_basics(s);
        Ok(st)
    }

    fn nonbasic_home(b: Bound) -> (VarStatus, f64) {
        if b.lower.is_finite() {
            (VarStatus::AtLower, b.lower)
        } else if b.upper.is_finite() {
            (VarStatus::AtUpper, b.upper)
        } else {
            (VarStatus::Free, 0.0)
        }
    }

    fn slack_basis(&mut self, s: &Simplex<'_>) {
        let (m, n) = (s.m, s.n);
        self.status.clear();
        self.head.clear();
        for j in 0..n {
            let (st, v) = Self::nonbasic_home(self.bounds[j]);
            self.status.push(st);
            self.x[j] = v;
        }
        for i in 0..m {
            self.status.push(VarStatus::Basic);
            self.head.push(n + i);
        }
    }

    /// Adopts a caller basis, repairing nonbasic positions that no longer
    /// match the bounds. Returns false if the basis is structurally unusable.
    fn load_basis(&mut self, s: &Simplex<'_>, basis: &Basis) -> bool {
        let total = s.n + s.m;
        if basis.status.len() != total {
            return false;
        }
        if basis.status.iter().filter(|&&v| v == VarStatus::Basic).count() != s.m {
            return false;
        }
        self.status.clear();
        self.head.clear();
        for (j, &st) in basis.status.iter().enumerate() {
            let b = self.bounds[j];
            let (st, v) = match st {
                VarStatus::Basic => {
                    self.head.push(j);
                    (VarStatus::Basic, 0.0)
                }
                VarStatus::AtLower if b.lower.is_finite() => (VarStatus::AtLower, b.lower),
                VarStatus::AtUpper if b.upper.is_finite() => (VarStatus::AtUpper, b.upper),
                _ => Self::nonbasic_home(b),
            };
            self.status.push(st);
            self.x[j] = v;
        }
        true
    }

    fn reinvert(&mut self, s: &Simplex<'_>) -> Result<(), LpError> {
        let m = s.m;
        // Gauss-Jordan on [B | I] with partial pivoting, row-major.
        let mut a = vec![0.0; m * m];
        for (k, &j) in self.head.iter().enumerate() {
            match s.column(j) {
                Column::Dense(col) => {
                    for i in 0..m {
                        a[i * m + k] = col[i];
                    }
                }
                Column::Unit(r) => a[r * m + k] = 1.0,
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            let mut p = k;
            let mut best = a[k * m + k].abs();
            for i in k + 1..m {
                let v = a[i * m + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-11 {
                return Err(LpError::SingularBasis);
            }
            if p != k {
                for c in 0..m {
                    a.swap(k * m + c, p * m + c);
                    inv.swap(k * m + c, p * m + c);
                }
            }
            let piv = a[k * m + k];
            for c in 0..m {
                a[k * m + c] /= piv;
                inv[k * m + c] /= piv;
            }
            for i in 0..m {
                if i == k {
                    continue;
                }
                let f = a[i * m + k];
                if f == 0.0 {
                    continue;
                }
                for c in 0..m {
                    a[i * m + c] -= f * a[k * m + c];
                    inv[i * m + c] -= f * inv[k * m + c];
                }
            }
        }
        // Row k of `inv` now belongs to basis position k.
        self.binv = inv;
        self.since_reinvert = 0;
        Ok(())
    }

    fn recompute_basics(&mut self, s: &Simplex<'_>) {
        let (m, n) = (s.m, s.n);
        let mut r: Vec<NeumaierSum> = s
            .rhs
            .iter()
            .map(|&b| {
                let mut a = NeumaierSum::new();
                a.add(b);
                a
            })
            .collect();
        for j in 0..n + m {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let v = self.x[j];
            if v == 0.0 {
                continue;
            }
            match s.column(j) {
                Column::Dense(col) => {
                    for i in 0..m {
                        r[i].add(-col[i] * v);
                    }
                }
                Column::Unit(i) => r[i].add(-v),
            }
        }
        let r: Vec<f64> = r.iter().map(NeumaierSum::value).collect();
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            self.x[self.head[k]] = num::dot(row, &r);
        }
    }

    fn ftran(&self, s: &Simplex<'_>, j: usize) -> Vec<f64> {
        let m = s.m;
        match s.column(j) {
            Column::Dense(col) => (0..m)
                .map(|k| {
                    let row = &self.binv[k * m..(k + 1) * m];
                    let mut acc = 0.0;
                    for i in 0..m {
                        acc += row[i] * col[i];
                    }
                    acc
                })
                .collect(),
            Column::Unit(i) => (0..m).map(|k| self.binv[k * m + i]).collect(),
        }
    }

    fn col_dot(s: &Simplex<'_>, j: usize, y: &[f64]) -> f64 {
        match s.column(j) {
            Column::Dense(col) => {
                let mut acc = 0.0;
                for i in 0..s.m {
                    acc += col[i] * y[i];
                }
                acc
            }
            Column::Unit(i) => y[i],
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let b = self.bounds[j];
        let v = self.x[j];
        if v < b.lower - FEAS_TOL * (1.0 + b.lower.abs()) {
            b.lower - v
        } else if v > b.upper + FEAS_TOL * (1.0 + b.upper.abs()) {
            v - b.upper
        } else {
            0.0
        }
    }

    /// Basic costs for the current phase; `None` in phase 2.
    fn phase_one_costs(&self) -> Option<Vec<f64>> {
        let mut any = false;
        let cb: Vec<f64> = self
            .head
            .iter()
            .map(|&j| {
                let b = self.bounds[j];
                let v = self.x[j];
                if self.infeasibility(j) > 0.0 {
                    any = true;
                    if v < b.lower {
                        -1.0
                    } else {
                        1.0
                    }
                } else {
                    0.0
                }
            })
            .collect();
        any.then_some(cb)
    }

    fn btran(&self, m: usize, cb: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; m];
        for k in 0..m {
            let c = cb[k];
            if c == 0.0 {
                continue;
            }
            let row = &self.binv[k * m..(k + 1) * m];
            for i in 0..m {
                y[i] += c * row[i];
            }
        }
        y
    }

    fn run(&mut self, s: &Simplex<'_>, opts: LpOptions) -> Result<LpSolution, LpError> {
        let (m, n) = (s.m, s.n);
        let total = n + m;
        let bland_after = 3 * (m + n);
        let mut confirmed_refresh = false;

        loop {
            if self.pivots >= opts.max_pivots {
                return Ok(self.finish(s, LpStatus::IterationLimit));
            }
            if self.since_reinvert >= REINVERT_EVERY {
                self.reinvert(s)?;
                self.recompute_basics(s);
            }

            let phase_one = self.phase_one_costs();
            let cb: Vec<f64> = match &phase_one {
                Some(c) => c.clone(),
                None => self.head.iter().map(|&j| self.cost[j]).collect(),
            };
            let y = self.btran(m, &cb);

            let bland = self.degenerate_run > bland_after;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..total {
                let st = self.status[j];
                if st == VarStatus::Basic {
                    continue;
                }
                let b = self.bounds[j];
                if b.lower == b.upper {
                    continue;
                }
                let cj = if phase_one.is_some() { 0.0 } else { self.cost[j] };
                let d = cj - Self::col_dot(s, j, &y);
                let eligible = match st {
                    VarStatus::AtLower => d < -DUAL_TOL,
                    VarStatus::AtUpper => d > DUAL_TOL,
                    VarStatus::Free => d.abs() > DUAL_TOL,
                    VarStatus::Basic => false,
                };
                if !eligible {
                    continue;
                }
                match entering {
                    None => entering = Some((j, d)),
                    Some((_, bd)) if !bland && d.abs() > bd.abs() => entering = Some((j, d)),
                    _ => {}
                }
                if bland {
                    break;
                }
            }

            let Some((q, dq)) = entering else {
                // No improving column. Refresh once from a clean inverse before
                // declaring the outcome, so drift cannot fake optimality.
                if !confirmed_refresh && self.since_reinvert > 0 {
                    self.reinvert(s)?;
                    self.recompute_basics(s);
                    confirmed_refresh = true;
                    continue;
                }
                let status = if phase_one.is_some() {
                    LpStatus::Infeasible
                } else {
                    LpStatus::Optimal
                };
                return Ok(self.finish(s, status));
            };
            confirmed_refresh = false;

            let dir = if dq < 0.0 { 1.0 } else { -1.0 };
            let alpha = self.ftran(s, q);
            let amax = alpha.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let ptol = PIVOT_TOL * amax.max(1.0);

            let bq = self.bounds[q];
            let mut theta = if bq.lower.is_finite() && bq.upper.is_finite() {
                bq.upper - bq.lower
            } else {
                f64::INFINITY
            };
            // (row position, leaves at upper?)
            let mut leave: Option<(usize, bool)> = None;
            let mut leave_var = usize::MAX;

            for k in 0..m {
                let a = alpha[k];
                if a.abs() <= ptol {
                    continue;
                }
                let j = self.head[k];
                let b = self.bounds[j];
                let v = self.x[j];
                let rate = -dir * a;
                let infeasible = self.infeasibility(j) > 0.0;
                let (limit, at_upper) = if rate < 0.0 {
                    if infeasible && v > b.upper {
                        ((v - b.upper) / -rate, true)
                    } else if infeasible {
                        continue;
                    } else if b.lower.is_finite() {
                        (((v - b.lower) / -rate).max(0.0), false)
                    } else {
                        continue;
                    }
                } else if infeasible && v < b.lower {
                    ((b.lower - v) / rate, false)
                } else if infeasible {
                    continue;
                } else if b.upper.is_finite() {
                    (((b.upper - v) / rate).max(0.0), true)
                } else {
                    continue;
                };
                // Ties (within 1e-12) go to the lowest variable index, and a
                // basic leaving variable beats a bound flip.
                let better = match leave {
                    None => limit <= theta + 1e-12,
                    Some(_) => limit < theta - 1e-12 || (limit <= theta + 1e-12 && j < leave_var),
                };
                if better {
                    theta = theta.min(limit);
                    leave = Some((k, at_upper));
                    leave_var = j;
                }
            }

            if theta == f64::INFINITY {
                if phase_one.is_some() {
                    // Cannot happen with exact arithmetic: an improving phase-1
                    // column always drives some infeasible basic toward a bound.
                    return Err(LpError::SingularBasis);
                }
                return Ok(self.finish(s, LpStatus::Unbounded));
            }

            if theta <= 1e-12 {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }

            // Move along the edge.
            self.x[q] += dir * theta;
            for k in 0..m {
                let a = alpha[k];
                if a != 0.0 {
                    let j = self.head[k];
                    self.x[j] -= dir * theta * a;
                }
            }
            self.pivots += 1;

            match leave {
                None => {
                    // Bound flip of the entering variable.
                    if dir > 0.0 {
                        self.status[q] = VarStatus::AtUpper;
                        self.x[q] = bq.upper;
                    } else {
                        self.status[q] = VarStatus::AtLower;
                        self.x[q] = bq.lower;
                    }
                }
                Some((r, at_upper)) => {
                    let out = self.head[r];
                    let bo = self.bounds[out];
                    if at_upper {
                        self.status[out] = VarStatus::AtUpper;
                        self.x[out] = bo.upper;
                    } else {
                        self.status[out] = VarStatus::AtLower;
                        self.x[out] = bo.lower;
                    }
                    self.status[q] = VarStatus::Basic;
                    self.head[r] = q;
                    let pr = alpha[r];
                    for c in 0..m {
                        self.binv[r * m + c] /= pr;
                    }
                    for k in 0..m {
                        if k == r || alpha[k] == 0.0 {
                            continue;
                        }
                        let f = alpha[k];
                        for c in 0..m {
                            let v = self.binv[r * m + c];
                            self.binv[k * m + c] -= f * v;
                        }
                    }
                    self.since_reinvert += 1;
                }
            }
        }
    }

    fn finish(&mut self, s: &Simplex<'_>, status: LpStatus) -> LpSolution {
        let (m, n) = (s.m, s.n);
        let cb: Vec<f64> = self.head.iter().map(|&j| self.cost[j]).collect();
        let y = self.btran(m, &cb);
        let reduced_costs: Vec<f64> = (0..n)
            .map(|j| {
                if self.status[j] == VarStatus::Basic {
                    0.0
                } else {
                    self.cost[j] - Self::col_dot(s, j, &y)
                }
            })
            .collect();
        let x: Vec<f64> = self.x[..n].to_vec();
        let objective = num::dot(&s.lp.objective, &x);
        LpSolution {
            status,
            x,
            duals: y,
            reduced_costs,
            objective,
            basis: Basis {
                status: self.status.clone(),
            },
            pivots: self.pivots,
        }
    }
}

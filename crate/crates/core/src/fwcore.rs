//! Frank-Wolfe machinery: projection onto the probability simplex, the
//! master QP over convex-combination weights and the simplicial
//! decomposition inner loop.
//!
//! The master QP minimizes the scenario augmented Lagrangian
//! `c^T x + q^T y + w^T (x - z) + rho/2 |x - z|^2` over `conv(V)`. With
//! `(x, y) = sum a_i (x_i, y_i)` this becomes
//! `sum a_i g_i - w^T z + rho/2 a^T G a` on the weight simplex, where
//! `g_i = c^T x_i + q^T y_i + w^T x_i` and `G_ij = (x_i - z)^T (x_j - z)`.
//! It is solved by a primal active-set method whose free set is kept
//! affinely independent in `x`, so every equality-constrained step is a
//! nonsingular KKT solve.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, SubproblemFailure};
use crate::milp::MilpSolver;
use crate::model::{solve_scenario_model, TwoStageProblem};
use crate::num;

/// Two points closer than this in the infinity norm are the same vertex.
pub const DEDUP_TOL: f64 = 1e-9;

/// Relative tolerance for declaring a column affinely dependent.
const DEPENDENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MilpVertex,
    InitFeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `c^T x + q_s^T y`.
    pub cost: f64,
    pub provenance: Provenance,
}

/// Inner approximation of `conv(K_s)`. Points are only ever appended.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VertexSet {
    points: Vec<Vertex>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vertex] {
        &self.points
    }

    pub fn position(&self, x: &[f64], y: &[f64]) -> Option<usize> {
        self.points
            .iter()
            .position(|v| num::dist_inf(&v.x, x) <= DEDUP_TOL && num::dist_inf(&v.y, y) <= DEDUP_TOL)
    }

    /// Adds a point unless it duplicates one already present. Returns its
    /// index and whether it was new.
    pub fn insert(&mut self, x: Vec<f64>, y: Vec<f64>, cost: f64, provenance: Provenance) -> (usize, bool) {
        if let Some(i) = self.position(&x, &y) {
            return (i, false);
        }
        self.points.push(Vertex { x, y, cost, provenance });
        (self.points.len() - 1, true)
    }

    /// Inserts a point of `K_s`, computing its cost from the problem data.
    pub fn insert_scenario_point(
        &mut self,
        problem: &TwoStageProblem,
        s: usize,
        x: &[f64],
        y: &[f64],
        provenance: Provenance,
    ) -> (usize, bool) {
        self.insert(x.to_vec(), y.to_vec(), problem.scenario_cost(s, x, y), provenance)
    }

    /// Index of the first point whose `K_s` violation exceeds 1e-7 or whose
    /// integer components are off by more than 1e-6.
    pub fn first_invalid(&self, problem: &TwoStageProblem, s: usize) -> Option<usize> {
        let sc = &problem.scenarios[s];
        self.points.iter().position(|v| {
            let frac = |vals: &[f64], kinds: &[crate::milp::VarKind]| {
                vals.iter().zip(kinds).any(|(v, k)| k.is_integral() && (v - num::round(*v)).abs() > 1e-6)
            };
            problem.scenario_violation(s, &v.x, &v.y) > 1e-7 || frac(&v.x, &problem.first.kinds) || frac(&v.y, &sc.y_kinds)
        })
    }
}

/// Convex-combination weights, one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights {
    pub a: Vec<f64>,
}

impl SimplexWeights {
    pub fn vertex(n: usize, i: usize) -> Self {
        let mut a = vec![0.0; n];
        a[i] = 1.0;
        SimplexWeights { a }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.a.iter().all(|&v| v >= 0.0) && (num::sum(self.a.iter().copied()) - 1.0).abs() <= 1e-12
    }
}

/// Euclidean projection onto `{a : a >= 0, sum a = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Result<SimplexWeights, Error> {
    if v.is_empty() {
        return Err(Error::Config("cannot project an empty vector onto the simplex"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("cannot project a non-finite vector onto the simplex"));
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = num::NeumaierSum::new();
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        acc.add(ui);
        let t = (acc.value() - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut a: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    let total = num::sum(a.iter().copied());
    for x in &mut a {
        *x /= total;
    }
    Ok(SimplexWeights { a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MasterQpSolution {
    pub weights: SimplexWeights,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
    /// `a^T grad - min_i grad_i`.
    pub fw_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Incremental modified Gram-Schmidt used to detect affine dependence.
struct Orthogonalizer {
    q: Vec<Vec<f64>>,
    /// Column `j` of the triangular factor, length `j + 1`.
    r: Vec<Vec<f64>>,
}

impl Orthogonalizer {
    fn new() -> Self {
        Orthogonalizer { q: Vec::new(), r: Vec::new() }
    }

    /// Appends `v`, or returns `c` with `v = sum_k c_k col_k` when it is
    /// dependent on the columns already present.
    fn push(&mut self, v: &[f64]) -> Result<(), Vec<f64>> {
        let mut u = v.to_vec();
        let mut coef = vec![0.0; self.q.len()];
        for _ in 0..2 {
            for (k, q) in self.q.iter().enumerate() {
                let c = num::dot(q, &u);
                for (ui, qi) in u.iter_mut().zip(q) {
                    *ui -= c * qi;
                }
                coef[k] += c;
            }
        }
        let nu = num::sqrt(num::norm2_sq(&u));
        if nu <= DEPENDENCY_TOL * (1.0 + num::sqrt(num::norm2_sq(v))) {
            let m = coef.len();
            let mut c = vec![0.0; m];
            for k in (0..m).rev() {
                let mut s = coef[k];
                for j in k + 1..m {
                    s -= self.r[j][k] * c[j];
                }
                c[k] = s / self.r[k][k];
            }
            return Err(c);
        }
        self.q.push(u.iter().map(|x| x / nu).collect());
        coef.push(nu);
        self.r.push(coef);
        Ok(())
    }
}

struct MasterQp<'a> {
    vertices: &'a [Vertex],
    z: &'a [f64],
    w: &'a [f64],
    rho: f64,
    g: Vec<f64>,
    d: Vec<Vec<f64>>,
}

impl<'a> MasterQp<'a> {
    fn new(vertices: &'a [Vertex], z: &'a [f64], w: &'a [f64], rho: f64) -> Self {
        let g = vertices.iter().map(|v| v.cost + num::dot(w, &v.x)).collect();
        let d = vertices.iter().map(|v| v.x.iter().zip(z).map(|(x, z)| x - z).collect()).collect();
        MasterQp { vertices, z, w, rho, g, d }
    }

    fn residual(&self, a: &[f64]) -> Vec<f64> {
        let nx = self.z.len();
        let mut acc = vec![num::NeumaierSum::new(); nx];
        for (ai, di) in a.iter().zip(&self.d) {
            if *ai != 0.0 {
                for (s, v) in acc.iter_mut().zip(di) {
                    s.add(ai * v);
                }
            }
        }
        acc.iter().map(num::NeumaierSum::value).collect()
    }

    fn gradient(&self, a: &[f64]) -> Vec<f64> {
        let r = self.residual(a);
        self.g.iter().zip(&self.d).map(|(g, d)| g + self.rho * num::dot(d, &r)).collect()
    }

    fn objective(&self, a: &[f64]) -> f64 {
        let r = self.residual(a);
        num::sum(a.iter().zip(&self.g).map(|(a, g)| a * g)) - num::dot(self.w, self.z) + 0.5 * self.rho * num::norm2_sq(&r)
    }

    fn column(&self, i: usize) -> Vec<f64> {
        let mut c = self.d[i].clone();
        c.push(1.0);
        c
    }

    /// Coefficients expressing column `j` through the (independent) free
    /// columns, if it is dependent on them.
    fn dependency(&self, free: &[usize], j: usize) -> Option<Vec<f64>> {
        let mut orth = Orthogonalizer::new();
        for &i in free {
            // free columns are independent by construction
            let _ = orth.push(&self.column(i));
        }
        orth.push(&self.column(j)).err()
    }

    /// Drops free indices until the free columns are affinely independent,
    /// moving only along directions that do not increase the objective.
    fn reduce(&self, a: &mut [f64], free: &mut Vec<usize>) {
        loop {
            let mut orth = Orthogonalizer::new();
            let mut found = None;
            for (pos, &i) in free.iter().enumerate() {
                if let Err(c) = orth.push(&self.column(i)) {
                    found = Some((pos, c));
                    break;
                }
            }
            let Some((pos, c)) = found else { return };
            // p = e_pos - sum_k c_k e_k over free[..pos]
            let mut p = vec![0.0; pos + 1];
            p[pos] = 1.0;
            for (k, ck) in c.iter().enumerate() {
                p[k] = -ck;
            }
            let slope = num::sum(p.iter().zip(free.iter()).map(|(pk, &i)| pk * self.g[i]));
            if slope > 0.0 {
                for v in &mut p {
                    *v = -*v;
                }
            }
            self.ray_step(a, free, &p);
        }
    }

    /// Moves along `p` (indexed like `free[..p.len()]`) until the first
    /// weight hits zero and removes it from the free set.
    fn ray_step(&self, a: &mut [f64], free: &mut Vec<usize>, p: &[f64]) {
        let mut t = f64::INFINITY;
        let mut block = 0;
        for (k, &pk) in p.iter().enumerate() {
            if pk < 0.0 {
                let limit = a[free[k]] / -pk;
                if limit < t {
                    t = limit;
                    block = k;
                }
            }
        }
        for (k, &pk) in p.iter().enumerate() {
            let i = free[k];
            a[i] = (a[i] + t * pk).max(0.0);
        }
        a[free[block]] = 0.0;
        free.remove(block);
        free.retain(|&i| a[i] > 0.0);
    }

    /// Minimizer over the affine hull of the free vertices.
    fn kkt(&self, free: &[usize]) -> Option<Vec<f64>> {
        let m = free.len();
        let n = m + 1;
        let mut k = vec![0.0; n * n];
        let mut rhs = vec![0.0; n];
        let mut scale = 1.0f64;
        for (r, &i) in free.iter().enumerate() {
            for (c, &j) in free.iter().enumerate() {
                let v = self.rho * num::dot(&self.d[i], &self.d[j]);
                k[r * n + c] = v;
                scale = scale.max(v.abs());
            }
            k[r * n + m] = 1.0;
            k[m * n + r] = 1.0;
            rhs[r] = -self.g[i];
        }
        rhs[m] = 1.0;
        let mut sol = num::solve_dense(&mut k, &mut rhs, 1e-13 * scale)?;
        sol.truncate(m);
        Some(sol)
    }

    /// Exact minimization on the face spanned by the free set, dropping
    /// vertices whose weight would turn negative.
    fn minimize_on_face(&self, a: &mut [f64], free: &mut Vec<usize>, iters: &mut usize, limit: usize) {
        while *iters < limit && !free.is_empty() {
            let Some(b) = self.kkt(free) else {
                let before = free.len();
                self.reduce(a, free);
                if free.len() == before {
                    return;
                }
                continue;
            };
            if b.iter().all(|&v| v >= 0.0) {
                for (&i, &v) in free.iter().zip(&b) {
                    a[i] = v;
                }
                return;
            }
            *iters += 1;
            let mut t = 1.0f64;
            let mut block = 0;
            for (k, (&i, &bk)) in free.iter().zip(&b).enumerate() {
                if bk < 0.0 {
                    let limit = a[i] / (a[i] - bk);
                    if limit < t {
                        t = limit;
                        block = k;
                    }
                }
            }
            for (&i, &bk) in free.iter().zip(&b) {
                a[i] = (a[i] + t * (bk - a[i])).max(0.0);
            }
            a[free[block]] = 0.0;
            free.remove(block);
            free.retain(|&i| a[i] > 0.0);
        }
    }

    fn finish(&self, mut a: Vec<f64>, iterations: usize, tol: f64) -> MasterQpSolution {
        let total = num::sum(a.iter().copied());
        for v in &mut a {
            *v /= total;
        }
        let objective = self.objective(&a);
        let grad = self.gradient(&a);
        let lam = num::sum(a.iter().zip(&grad).map(|(a, g)| a * g));
        let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
        let fw_gap = (lam - gmin).max(0.0);
        let nx = self.z.len();
        let ny = self.vertices[0].y.len();
        let xs: Vec<&[f64]> = self.vertices.iter().map(|v| v.x.as_slice()).collect();
        let ys: Vec<&[f64]> = self.vertices.iter().map(|v| v.y.as_slice()).collect();
        let mut x = num::weighted_mean(&a, &xs);
        let mut y = num::weighted_mean(&a, &ys);
        x.resize(nx, 0.0);
        y.resize(ny, 0.0);
        MasterQpSolution {
            weights: SimplexWeights { a },
            x,
            y,
            objective,
            fw_gap,
            iterations,
            converged: fw_gap <= tol * (1.0 + objective.abs()),
        }
    }
}

/// Minimizes the scenario augmented Lagrangian over `conv(V)`.
///
/// `warm` may be shorter than `V`; missing entries start at zero. Stops when
/// the simplex Frank-Wolfe gap is at most `tol * (1 + |objective|)` or after
/// `iter_limit` steps (default `10 |V|^2 + 500`); `converged` reports which.
pub fn solve_master_qp(
    vertices: &VertexSet,
    z: &[f64],
    w: &[f64],
    rho: f64,
    warm: Option<&SimplexWeights>,
    tol: f64,
    iter_limit: Option<usize>,
) -> Result<MasterQpSolution, Error> {
    let n = vertices.len();
    if n == 0 {
        return Err(Error::Config("master QP needs at least one vertex"));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Config("penalty rho must be positive and finite"));
    }
    let qp = MasterQp::new(vertices.points(), z, w, rho);
    if n == 1 {
        return Ok(qp.finish(vec![1.0], 0, tol));
    }
    let limit = iter_limit.unwrap_or(10 * n * n + 500);

    let mut a = match warm {
        Some(wm) if !wm.is_empty() && wm.len() <= n && wm.a.iter().any(|&v| v > 0.0) => {
            let mut padded = wm.a.clone();
            padded.resize(n, 0.0);
            if (SimplexWeights { a: padded.clone() }).is_valid() {
                padded
            } else {
                project_to_simplex(&padded)?.a
            }
        }
        _ => {
            let best = (0..n)
                .map(|i| (i, qp.g[i] + 0.5 * rho * num::norm2_sq(&qp.d[i])))
                .fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
            SimplexWeights::vertex(n, best.0).a
        }
    };
    let mut free: Vec<usize> = (0..n).filter(|&i| a[i] > 0.0).collect();
    qp.reduce(&mut a, &mut free);

    let mut iters = 0;
    loop {
        qp.minimize_on_face(&mut a, &mut free, &mut iters, limit);
        let grad = qp.gradient(&a);
        let lam = num::sum(free.iter().map(|&i| a[i] * grad[i]));
        let (j, gmin) = grad
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
        let obj = qp.objective(&a);
        if lam - gmin <= tol * (1.0 + obj.abs()) || iters >= limit || free.contains(&j) {
            break;
        }
        iters += 1;
        match qp.dependency(&free, j) {
            Some(c) => {
                // Adding j is a zero-curvature move: linear descent until a
                // current weight hits zero.
                let mut order = free.clone();
                order.push(j);
                let mut p: Vec<f64> = c.iter().map(|v| -v).collect();
                p.push(1.0);
                qp.ray_step(&mut a, &mut order, &p);
                free = order;
            }
            None => free.push(j),
        }
    }
    Ok(qp.finish(a, iters, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdmConfig {
    pub rho: f64,
    pub t_max: usize,
    pub tau: f64,
    pub qp_tol: f64,
    pub qp_iter_limit: Option<usize>,
}

impl SdmConfig {
    pub fn new(rho: f64) -> Self {
        SdmConfig { rho, t_max: 1, tau: 0.0, qp_tol: 1e-10, qp_iter_limit: None }
    }
}

/// One inner iteration `t >= 2`: the gap of the new linearization at the
/// previous master point and whether the vertex set grew.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCheck {
    pub t: usize,
    pub gap: f64,
    pub grew: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdmOutcome {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub weights: SimplexWeights,
    /// The `t = 1` MILP value, a valid scenario bound.
    pub phi: f64,
    pub phi_exact: bool,
    pub gaps: Vec<f64>,
    pub qp_objectives: Vec<f64>,
    pub iterations: usize,
    pub milp_solves: usize,
    pub qp_solves: usize,
    pub vertices_added: usize,
    pub expansion: Vec<ExpansionCheck>,
    pub qp_converged: bool,
}

/// Simplicial decomposition on scenario `s`, starting from the point
/// `(x_init, y_init)` and the vertex set `vertices`, which grows in place.
#[allow(clippy::too_many_arguments)]
pub fn run_sdm(
    problem: &TwoStageProblem,
    s: usize,
    vertices: &mut VertexSet,
    warm: Option<&SimplexWeights>,
    x_init: &[f64],
    y_init: &[f64],
    w: &[f64],
    z: &[f64],
    cfg: &SdmConfig,
    solver: &MilpSolver<'_>,
) -> Result<SdmOutcome, Error> {
    if vertices.is_empty() {
        return Err(Error::Config("simplicial decomposition needs a non-empty vertex set"));
    }
    if cfg.t_max == 0 {
        return Err(Error::Config("t_max must be at least 1"));
    }
    if !(cfg.tau >= 0.0) {
        return Err(Error::Config("tau must be non-negative"));
    }
    let nx = problem.n_x();
    let q = &problem.scenarios[s].q;
    let mut xp = x_init.to_vec();
    let mut yp = y_init.to_vec();
    let mut weights = warm.cloned();
    let mut out = SdmOutcome {
        x: Vec::new(),
        y: Vec::new(),
        weights: SimplexWeights { a: Vec::new() },
        phi: f64::NAN,
        phi_exact: true,
        gaps: Vec::new(),
        qp_objectives: Vec::new(),
        iterations: 0,
        milp_solves: 0,
        qp_solves: 0,
        vertices_added: 0,
        expansion: Vec::new(),
        qp_converged: true,
    };
    for t in 1..=cfg.t_max {
        let w_hat: Vec<f64> = (0..nx).map(|i| w[i] + cfg.rho * (xp[i] - z[i])).collect();
        let model = problem.scenario_milp(s, &w_hat);
        let sol = solve_scenario_model(&model, s, solver)?;
        out.milp_solves += 1;
        let Some((xh, yh)) = sol.split(nx) else {
            return Err(Error::sub(s, SubproblemFailure::NoBound));
        };
        if t == 1 {
            out.phi = sol.value;
            out.phi_exact = sol.exact;
        }
        let cw = &model.lp.objective[..nx];
        let gap = (num::dot(cw, &xp) + num::dot(q, &yp)) - (num::dot(cw, xh) + num::dot(q, yh));
        let (_, added) = vertices.insert_scenario_point(problem, s, xh, yh, Provenance::MilpVertex);
        if added {
            out.vertices_added += 1;
        }
        if t >= 2 {
            out.expansion.push(ExpansionCheck { t, gap, grew: added });
        }
        let qp = solve_master_qp(vertices, z, w, cfg.rho, weights.as_ref(), cfg.qp_tol, cfg.qp_iter_limit)?;
        out.qp_solves += 1;
        out.qp_converged &= qp.converged;
        out.qp_objectives.push(qp.objective);
        out.gaps.push(gap);
        out.iterations = t;
        xp = qp.x;
        yp = qp.y;
        weights = Some(qp.weights);
        if gap <= cfg.tau {
            break;
        }
    }
    out.x = xp;
    out.y = yp;
    out.weights = weights.unwrap_or(SimplexWeights { a: Vec::new() });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::small_problem;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn projection_keeps_simplex_points() {
        assert_eq!(project_to_simplex(&[1.0, 0.0, 0.0]).unwrap().a, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn projection_of_symmetric_point() {
        let a = project_to_simplex(&[0.5, 0.5, 0.5]).unwrap();
        assert!(close(&a.a, &[1.0 / 3.0; 3], 1e-15));
        assert!(a.is_valid());
    }

    #[test]
    fn projection_rejects_empty() {
        assert!(project_to_simplex(&[]).is_err());
    }

    fn vset(points: &[(&[f64], &[f64], f64)]) -> VertexSet {
        let mut v = VertexSet::new();
        for (x, y, c) in points {
            v.insert(x.to_vec(), y.to_vec(), *c, Provenance::MilpVertex);
        }
        v
    }

    #[test]
    fn singleton_master_qp() {
        let v = vset(&[(&[1.0, 0.0], &[2.0], 5.0)]);
        let s = solve_master_qp(&v, &[0.5, 0.5], &[1.0, -1.0], 3.0, None, 1e-10, None).unwrap();
        assert_eq!(s.weights.a, vec![1.0]);
        assert_eq!(s.x, vec![1.0, 0.0]);
        assert_eq!(s.iterations, 0);
        // 5 + w.(x - z) + rho/2 |x - z|^2 = 5 + 1 + 0.75
        assert!((s.objective - 6.75).abs() < 1e-14);
    }

    #[test]
    fn same_x_picks_cheaper_vertex() {
        let v = vset(&[(&[1.0, 0.0], &[0.0], 4.0), (&[1.0, 0.0], &[1.0], 3.0)]);
        let s = solve_master_qp(&v, &[0.2, 0.1], &[0.0, 0.0], 10.0, None, 1e-10, None).unwrap();
        assert_eq!(s.weights.a, vec![0.0, 1.0]);
        assert!(s.converged);
    }

    #[test]
    fn segment_minimizer_is_interior() {
        // min rho/2 (x - 0.25)^2 on [0, 1] with equal costs -> a = (0.75, 0.25)
        let v = vset(&[(&[0.0], &[], 0.0), (&[1.0], &[], 0.0)]);
        let s = solve_master_qp(&v, &[0.25], &[0.0], 2.0, None, 1e-12, None).unwrap();
        assert!(close(&s.weights.a, &[0.75, 0.25], 1e-14));
        assert!(s.objective.abs() < 1e-15);
    }

    #[test]
    fn dedup_discards_near_duplicates() {
        let mut v = VertexSet::new();
        assert_eq!(v.insert(vec![1.0], vec![0.0], 0.0, Provenance::InitFeasible), (0, true));
        assert_eq!(v.insert(vec![1.0 + 1e-10], vec![0.0], 0.0, Provenance::MilpVertex), (0, false));
        assert_eq!(v.insert(vec![1.0], vec![1e-6], 0.0, Provenance::MilpVertex), (1, true));
    }

    #[test]
    fn one_step_sdm_uses_one_milp_and_one_qp() {
        let p = small_problem(&[0.5, 0.5]);
        let mut v = VertexSet::new();
        v.insert_scenario_point(&p, 0, &[0.0, 0.0], &[1.0, 1.0], Provenance::InitFeasible);
        let out = run_sdm(
            &p,
            0,
            &mut v,
            None,
            &[0.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 0.0],
            &[0.5, 0.0],
            &SdmConfig::new(1.0),
            &MilpSolver::default(),
        )
        .unwrap();
        assert_eq!((out.milp_solves, out.qp_solves, out.iterations), (1, 1, 1));
        assert!(out.weights.is_valid());
        assert!(v.first_invalid(&p, 0).is_none());
        // phi is the MILP value at w_hat = rho (x_init - z)
        let direct = MilpSolver::default().solve(&p.scenario_milp(0, &[-0.5, 0.0])).unwrap();
        assert_eq!(out.phi, direct.objective);
    }
}

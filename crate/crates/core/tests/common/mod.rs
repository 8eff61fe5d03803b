#![allow(clippy::needless_range_loop)]
//! Brute-force reference solvers used by the integration tests.
//!
//! Nothing here calls into the simplex or branch-and-bound code under test.

#![allow(dead_code)]

use fwph_core::lp::{Bound, Constraint, LinearProgram, Relation};
use fwph_core::milp::{MilpModel, VarKind};

/// Dense Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-10 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[i][c] -= f * a[k][c];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k][c] * x[c];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}

fn feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    lp.max_violation(x) <= tol
}

/// Minimum of a bounded LP by enumerating every vertex: pick which variables
/// sit at a bound, then which rows are tight for the rest. `None` if
/// infeasible. Requires finite bounds on every variable.
pub fn lp_vertex_min(lp: &LinearProgram) -> Option<(f64, Vec<f64>)> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    assert!(lp.bounds.iter().all(Bound::is_finite));
    let mut best: Option<(f64, Vec<f64>)> = None;
    // assignment per variable: 0 free, 1 lower, 2 upper
    let mut assign = vec![0u8; n];
    loop {
        let free: Vec<usize> = (0..n).filter(|&j| assign[j] == 0).collect();
        let k = free.len();
        if k <= m {
            let mut rows = vec![0usize; k];
            let mut choose = |rows: &[usize]| {
                let mut x = vec![0.0; n];
                for j in 0..n {
                    x[j] = match assign[j] {
                        1 => lp.bounds[j].lower,
                        2 => lp.bounds[j].upper,
                        _ => 0.0,
                    };
                }
                if k > 0 {
                    let mut a = Vec::with_capacity(k);
                    let mut b = Vec::with_capacity(k);
                    for &r in rows {
                        let c = &lp.constraints[r];
                        a.push(free.iter().map(|&j| c.coeffs[j]).collect::<Vec<_>>());
                        let fixed: f64 = (0..n).filter(|j| assign[*j] != 0).map(|j| c.coeffs[j] * x[j]).sum();
                        b.push(c.rhs - fixed);
                    }
                    let Some(sol) = solve_dense(a, b) else { return };
                    for (idx, &j) in free.iter().enumerate() {
                        x[j] = sol[idx];
                    }
                }
                if feasible(lp, &x, 1e-9) {
                    let v: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    if best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, x));
                    }
                }
            };
            for_each_combination(m, k, &mut rows, &mut choose);
        }
        // next assignment in base 3
        let mut i = 0;
        while i < n {
            assign[i] += 1;
            if assign[i] == 3 {
                assign[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        if i == n {
            break;
        }
    }
    best
}

fn for_each_combination(m: usize, k: usize, buf: &mut [usize], f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, depth: usize, m: usize, k: usize, buf: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if depth == k {
            f(&buf[..k]);
            return;
        }
        for i in start..m {
            if m - i < k - depth {
                break;
            }
            buf[depth] = i;
            rec(i + 1, depth + 1, m, k, buf, f);
        }
    }
    rec(0, 0, m, k, buf, f);
}

/// Enumerates every integer assignment of a MILP's integer columns and solves
/// the continuous remainder by vertex enumeration. `None` if infeasible.
pub fn milp_enumerate(model: &MilpModel) -> Option<(f64, Vec<f64>)> {
    let n = model.lp.num_vars();
    let ints: Vec<usize> = (0..n).filter(|&j| model.kinds[j] != VarKind::Continuous).collect();
    let conts: Vec<usize> = (0..n).filter(|&j| model.kinds[j] == VarKind::Continuous).collect();
    let ranges: Vec<(i64, i64)> = ints
        .iter()
        .map(|&j| {
            let b = model.lp.bounds[j];
            let (mut lo, mut hi) = (b.lower.ceil() as i64, b.upper.floor() as i64);
            if model.kinds[j] == VarKind::Binary {
                lo = lo.max(0);
                hi = hi.min(1);
            }
            (lo, hi)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return None;
    }
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        // restricted LP over continuous columns
        let mut sub = LinearProgram::new(conts.iter().map(|&j| model.lp.objective[j]).collect(), conts.iter().map(|&j| model.lp.bounds[j]).collect());
        let fixed_obj: f64 = ints.iter().zip(&cur).map(|(&j, &v)| model.lp.objective[j] * v as f64).sum();
        let mut ok = true;
        for c in &model.lp.constraints {
            let fixed: f64 = ints.iter().zip(&cur).map(|(&j, &v)| c.coeffs[j] * v as f64).sum();
            let coeffs: Vec<f64> = conts.iter().map(|&j| c.coeffs[j]).collect();
            if conts.is_empty() || coeffs.iter().all(|&a| a == 0.0) {
                let lhs = fixed;
                let viol = match c.relation {
                    Relation::LessEq => lhs - c.rhs,
                    Relation::GreaterEq => c.rhs - lhs,
                    Relation::Equal => (lhs - c.rhs).abs(),
                };
                if viol > 1e-9 {
                    ok = false;
                    break;
                }
            } else {
                sub.push(Constraint::new(coeffs, c.relation, c.rhs - fixed));
            }
        }
        if ok {
            let res = if conts.is_empty() { Some((0.0, vec![])) } else { lp_vertex_min(&sub) };
            if let Some((v, xc)) = res {
                let total = v + fixed_obj;
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    let mut x = vec![0.0; n];
                    for (&j, &v) in ints.iter().zip(&cur) {
                        x[j] = v as f64;
                    }
                    for (&j, v) in conts.iter().zip(xc) {
                        x[j] = v;
                    }
                    best = Some((total, x));
                }
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
    best
}

/// Tiny deterministic generator so the oracle suites need no extra crates.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

pub fn random_relation(rng: &mut SplitMix) -> Relation {
    match rng.int(0, 5) {
        0 => Relation::Equal,
        1 | 2 => Relation::GreaterEq,
        _ => Relation::LessEq,
    }
}

/// Small all-integer two-stage problem: binary x under a budget row, integer
/// y with a costly slack column so every x has recourse.
pub fn random_integer_two_stage(rng: &mut SplitMix, n_scen: usize) -> fwph_core::model::TwoStageProblem {
    use fwph_core::model::{FirstStageData, ScenarioData, TwoStageProblem};
    let nx = rng.int(1, 3) as usize;
    let ny = rng.int(1, 2) as usize;
    let first = FirstStageData {
        c: (0..nx).map(|_| rng.int(-3, 5) as f64).collect(),
        rows: vec![Constraint::le(vec![1.0; nx], (nx as f64 - 1.0).max(1.0))],
        bounds: vec![Bound::BINARY; nx],
        kinds: vec![VarKind::Binary; nx],
    };
    let mut scenarios = Vec::new();
    for _ in 0..n_scen {
        let m = rng.int(1, 2) as usize;
        let mut w = Vec::new();
        let mut t = Vec::new();
        let mut h = Vec::new();
        for _ in 0..m {
            let mut row: Vec<f64> = (0..ny).map(|_| rng.int(0, 3) as f64).collect();
            row.push(1.0);
            w.push(row);
            t.push((0..nx).map(|_| rng.int(0, 3) as f64).collect());
            h.push(rng.int(1, 6) as f64);
        }
        let mut q: Vec<f64> = (0..ny).map(|_| rng.int(-2, 4) as f64).collect();
        q.push(8.0);
        let mut y_bounds = vec![Bound::new(0.0, 2.0); ny];
        y_bounds.push(Bound::new(0.0, 6.0));
        scenarios.push(ScenarioData {
            probability: 1.0 / n_scen as f64,
            q,
            w,
            t,
            h,
            relations: vec![Relation::GreaterEq; m],
            y_bounds,
            y_kinds: vec![VarKind::Integer; ny + 1],
        });
    }
    TwoStageProblem { first, scenarios }
}

/// Every integer point of `K_s` for an all-integer problem, as `(x, y)`.
pub fn lattice_points(problem: &fwph_core::model::TwoStageProblem, s: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let model = problem.scenario_milp(s, &vec![0.0; problem.n_x()]);
    let nx = problem.n_x();
    let ranges: Vec<(i64, i64)> = model.lp.bounds.iter().map(|b| (b.lower.ceil() as i64, b.upper.floor() as i64)).collect();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut out = Vec::new();
    loop {
        let v: Vec<f64> = cur.iter().map(|&c| c as f64).collect();
        if model.lp.max_violation(&v) <= 1e-9 {
            out.push((v[..nx].to_vec(), v[nx..].to_vec()));
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
            return out;
        }
    }
}

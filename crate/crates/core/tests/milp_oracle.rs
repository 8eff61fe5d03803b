#![allow(clippy::needless_range_loop, clippy::field_reassign_with_default)]
mod common;

use common::{milp_enumerate, random_relation, SplitMix};
use fwph_core::lp::{Bound, Constraint, LinearProgram};
use fwph_core::milp::{prox_linearize, MilpModel, MilpSolver, MilpStatus, VarKind};
use proptest::prelude::*;

fn random_milp(rng: &mut SplitMix) -> MilpModel {
    let n_int = rng.int(1, 6) as usize;
    let n_cont = rng.int(0, 2) as usize;
    let n = n_int + n_cont;
    let m = rng.int(1, 5) as usize;
    let mut kinds = Vec::new();
    let mut bounds = Vec::new();
    for _ in 0..n_int {
        if rng.int(0, 1) == 0 {
            kinds.push(VarKind::Binary);
            bounds.push(Bound::BINARY);
        } else {
            let lo = rng.int(-2, 1) as f64;
            kinds.push(VarKind::Integer);
            bounds.push(Bound::new(lo, lo + rng.int(1, 5) as f64));
        }
    }
    for _ in 0..n_cont {
        kinds.push(VarKind::Continuous);
        bounds.push(Bound::new(0.0, rng.int(1, 4) as f64));
    }
    let objective = (0..n).map(|_| rng.int(-8, 8) as f64 + 0.5 * rng.int(0, 1) as f64).collect();
    let mut lp = LinearProgram::new(objective, bounds);
    for _ in 0..m {
        let coeffs = (0..n).map(|_| rng.int(-4, 4) as f64).collect();
        let rel = random_relation(rng);
        lp.push(Constraint::new(coeffs, rel, rng.int(-4, 8) as f64 + 0.5));
    }
    MilpModel::new(lp, kinds)
}

#[test]
fn random_milps_match_lattice_enumeration() {
    let mut rng = SplitMix(0xB0B);
    let mut solver = MilpSolver::default();
    solver.record_bounds = true;
    let (mut feasible, mut infeasible) = (0, 0);
    for case in 0..120 {
        let model = random_milp(&mut rng);
        let sol = solver.solve(&model).unwrap();
        for w in sol.bound_history.windows(2) {
            assert!(w[1] >= w[0], "case {case}: dual bound decreased {} -> {}", w[0], w[1]);
        }
        match milp_enumerate(&model) {
            Some((v, _)) => {
                assert_eq!(sol.status, MilpStatus::Optimal, "case {case}");
                assert!((sol.objective - v).abs() <= 1e-7 * (1.0 + v.abs()), "case {case}: b&b {} vs lattice {v}", sol.objective);
                let x = sol.point.as_ref().unwrap();
                assert!(model.lp.max_violation(x) <= 1e-7);
                for (xj, k) in x.iter().zip(&model.kinds) {
                    if *k != VarKind::Continuous {
                        assert!((xj - xj.round()).abs() <= 1e-6);
                    }
                }
                assert!(sol.dual_bound <= sol.objective + 1e-9 * (1.0 + sol.objective.abs()));
                feasible += 1;
            }
            None => {
                assert_eq!(sol.status, MilpStatus::Infeasible, "case {case}");
                infeasible += 1;
            }
        }
    }
    assert!(feasible >= 40, "only {feasible} feasible cases ({infeasible} infeasible)");
}

#[test]
fn node_limited_bounds_stay_valid() {
    let mut rng = SplitMix(0xFACE);
    for _ in 0..60 {
        let model = random_milp(&mut rng);
        let Some((v, _)) = milp_enumerate(&model) else { continue };
        for limit in [1, 2, 3, 5] {
            let mut solver = MilpSolver::default();
            solver.limits.node_limit = Some(limit);
            let sol = solver.solve(&model).unwrap();
            assert!(matches!(sol.status, MilpStatus::Optimal | MilpStatus::BoundOnly));
            assert!(sol.dual_bound <= v + 1e-7 * (1.0 + v.abs()), "bound {} above optimum {v}", sol.dual_bound);
        }
    }
}

fn binary_first_stage_model(rng: &mut SplitMix, nx: usize) -> MilpModel {
    let ny = rng.int(1, 3) as usize;
    let n = nx + ny;
    let mut kinds = vec![VarKind::Binary; nx];
    let mut bounds = vec![Bound::BINARY; nx];
    for _ in 0..ny {
        kinds.push(if rng.int(0, 1) == 0 { VarKind::Continuous } else { VarKind::Integer });
        bounds.push(Bound::new(0.0, 3.0));
    }
    let mut lp = LinearProgram::new((0..n).map(|_| rng.int(-5, 5) as f64).collect(), bounds);
    for _ in 0..rng.int(1, 3) {
        let coeffs = (0..n).map(|_| rng.int(-3, 3) as f64).collect();
        lp.push(Constraint::le(coeffs, rng.int(1, 6) as f64));
    }
    MilpModel::new(lp, kinds)
}

fn prox_value(model: &MilpModel, v: &[f64], z: &[f64], w: &[f64], rho: f64) -> f64 {
    let nx = z.len();
    let lin: f64 = model.lp.objective.iter().zip(v).map(|(c, x)| c * x).sum();
    let dual: f64 = (0..nx).map(|i| w[i] * (v[i] - z[i])).sum();
    let prox: f64 = (0..nx).map(|i| (v[i] - z[i]).powi(2)).sum::<f64>() * 0.5 * rho;
    lin + dual + prox
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearized_objective_matches_prox_pointwise(
        seed in 0u64..10_000,
        rho in 0.01f64..100.0,
        zs in proptest::collection::vec(-1.0f64..2.0, 4),
        ws in proptest::collection::vec(-10.0f64..10.0, 4),
    ) {
        let mut rng = SplitMix(seed);
        let nx = rng.int(1, 4) as usize;
        let model = binary_first_stage_model(&mut rng, nx);
        let (z, w) = (&zs[..nx], &ws[..nx]);
        let p = prox_linearize(&model, z, w, rho).unwrap();
        // every binary x with arbitrary y
        for mask in 0..(1u32 << nx) {
            let mut v: Vec<f64> = (0..nx).map(|i| f64::from((mask >> i) & 1)).collect();
            v.extend((nx..model.lp.num_vars()).map(|_| rng.uniform(0.0, 3.0)));
            let lin: f64 = p.model.lp.objective.iter().zip(&v).map(|(c, x)| c * x).sum::<f64>() + p.constant;
            let exact = prox_value(&model, &v, z, w, rho);
            prop_assert!((lin - exact).abs() <= 1e-10 * (1.0 + exact.abs()), "{} vs {}", lin, exact);
        }
    }

    #[test]
    fn linearized_optimum_matches_enumerated_prox_minimum(
        seed in 0u64..10_000,
        rho in 0.1f64..50.0,
        zs in proptest::collection::vec(0.0f64..1.0, 3),
        ws in proptest::collection::vec(-5.0f64..5.0, 3),
    ) {
        let mut rng = SplitMix(seed);
        let nx = rng.int(1, 3) as usize;
        let model = binary_first_stage_model(&mut rng, nx);
        let (z, w) = (&zs[..nx], &ws[..nx]);
        let p = prox_linearize(&model, z, w, rho).unwrap();
        let sol = MilpSolver::default().solve(&p.model).unwrap();
        // Reference: for each binary x, the best y from the lattice oracle.
        let mut best = f64::INFINITY;
        for mask in 0..(1u32 << nx) {
            let xb: Vec<f64> = (0..nx).map(|i| f64::from((mask >> i) & 1)).collect();
            let mut fixed = model.clone();
            for i in 0..nx {
                fixed.lp.bounds[i] = Bound::fixed(xb[i]);
            }
            if let Some((_, v)) = milp_enumerate(&fixed) {
                best = best.min(prox_value(&model, &v, z, w, rho));
            }
        }
        if best.is_finite() {
            prop_assert_eq!(sol.status, MilpStatus::Optimal);
            let got = sol.objective + p.constant;
            prop_assert!((got - best).abs() <= 1e-8 * (1.0 + best.abs()), "{} vs {}", got, best);
        } else {
            prop_assert_eq!(sol.status, MilpStatus::Infeasible);
        }
    }
}

#[test]
fn large_rho_pulls_to_binary_target() {
    let mut rng = SplitMix(4242);
    for _ in 0..30 {
        let nx = 3;
        let model = binary_first_stage_model(&mut rng, nx);
        let Some((_, feasible_point)) = milp_enumerate(&model) else { continue };
        let target: Vec<f64> = feasible_point[..nx].to_vec();
        let p = prox_linearize(&model, &target, &[0.0; 3], 1e4).unwrap();
        let sol = MilpSolver::default().solve(&p.model).unwrap();
        let x = sol.point.unwrap();
        for i in 0..nx {
            assert_eq!(x[i], target[i]);
        }
    }
}

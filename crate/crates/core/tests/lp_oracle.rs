mod common;

use common::{lp_vertex_min, random_relation, SplitMix};
use fwph_core::lp::{solve_lp, Bound, Constraint, LinearProgram, LpSolution, LpStatus, Relation};

fn random_lp(rng: &mut SplitMix) -> LinearProgram {
    let n = rng.int(1, 8) as usize;
    let m = rng.int(1, 8) as usize;
    let objective = (0..n).map(|_| rng.int(-9, 9) as f64).collect();
    let bounds: Vec<Bound> = (0..n)
        .map(|_| {
            let lo = rng.int(-3, 2) as f64;
            Bound::new(lo, lo + rng.int(0, 5) as f64)
        })
        .collect();
    let anchor: Vec<f64> = bounds.iter().map(|b: &Bound| rng.int(b.lower as i64, b.upper as i64) as f64).collect();
    let perturb = rng.int(0, 4) == 0;
    let mut lp = LinearProgram::new(objective, bounds);
    for _ in 0..m {
        let coeffs: Vec<f64> = (0..n).map(|_| if rng.int(0, 3) == 0 { 0.0 } else { rng.int(-5, 5) as f64 }).collect();
        let rel = random_relation(rng);
        let at: f64 = coeffs.iter().zip(&anchor).map(|(a, x)| a * x).sum();
        let rhs = match rel {
            _ if perturb => rng.int(-6, 8) as f64,
            Relation::LessEq => at + rng.int(0, 3) as f64,
            Relation::GreaterEq => at - rng.int(0, 3) as f64,
            Relation::Equal => at,
        };
        lp.push(Constraint::new(coeffs, rel, rhs));
    }
    lp
}

/// Optimality certificate: primal feasibility, sign-consistent reduced costs
/// and row duals, complementary slackness and a matching dual objective.
fn assert_certified(lp: &LinearProgram, sol: &LpSolution) {
    let scale = 1.0 + lp.constraints.iter().fold(0.0f64, |a, c| a.max(c.rhs.abs()));
    assert!(lp.max_violation(&sol.x) <= 1e-9 * scale, "primal residual {}", lp.max_violation(&sol.x));
    for (j, (&d, b)) in sol.reduced_costs.iter().zip(&lp.bounds).enumerate() {
        let x = sol.x[j];
        if d > 1e-9 {
            assert!((x - b.lower).abs() <= 1e-9 * (1.0 + b.lower.abs()), "var {j} d={d} not at lower");
        }
        if d < -1e-9 {
            assert!((x - b.upper).abs() <= 1e-9 * (1.0 + b.upper.abs()), "var {j} d={d} not at upper");
        }
    }
    for (c, &y) in lp.constraints.iter().zip(&sol.duals) {
        let slack = c.rhs - c.coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum::<f64>();
        match c.relation {
            Relation::LessEq => assert!(y <= 1e-9, "<= row with dual {y}"),
            Relation::GreaterEq => assert!(y >= -1e-9, ">= row with dual {y}"),
            Relation::Equal => {}
        }
        if y.abs() > 1e-9 {
            assert!(slack.abs() <= 1e-8 * scale, "dual {y} on slack row {slack}");
        }
    }
    let dual = sol.dual_objective(lp);
    assert!(
        (sol.objective - dual).abs() <= 1e-8 * (1.0 + sol.objective.abs()),
        "primal {} vs dual {}",
        sol.objective,
        dual
    );
}

#[test]
fn random_bounded_lps_match_vertex_enumeration() {
    let mut rng = SplitMix(0x5eed_0001);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..60 {
        let lp = random_lp(&mut rng);
        let sol = solve_lp(&lp, None).unwrap();
        match lp_vertex_min(&lp) {
            Some((v, _)) => {
                assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
                assert!((sol.objective - v).abs() <= 1e-7, "case {case}: simplex {} vs enumeration {v}", sol.objective);
                assert_certified(&lp, &sol);
                optimal += 1;
            }
            None => {
                assert_eq!(sol.status, LpStatus::Infeasible, "case {case}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal >= 20 && infeasible >= 1, "optimal {optimal} infeasible {infeasible}");
}

#[test]
fn beale_cycling_example_terminates() {
    let mut lp = LinearProgram::new(vec![-0.75, 150.0, -0.02, 6.0], vec![Bound::NON_NEGATIVE; 4]);
    lp.push(Constraint::le(vec![0.25, -60.0, -0.04, 9.0], 0.0));
    lp.push(Constraint::le(vec![0.5, -90.0, -0.02, 3.0], 0.0));
    lp.push(Constraint::le(vec![0.0, 0.0, 1.0, 0.0], 1.0));
    let sol = solve_lp(&lp, None).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective + 0.05).abs() < 1e-12);
    assert_certified(&lp, &sol);
}

#[test]
fn free_and_half_bounded_variables() {
    let mut rng = SplitMix(77);
    for _ in 0..40 {
        let n = rng.int(2, 6) as usize;
        let objective: Vec<f64> = (0..n).map(|_| rng.int(-4, 4) as f64).collect();
        let bounds: Vec<Bound> = (0..n)
            .map(|_| match rng.int(0, 2) {
                0 => Bound::FREE,
                1 => Bound::NON_NEGATIVE,
                _ => Bound::new(f64::NEG_INFINITY, rng.int(0, 3) as f64),
            })
            .collect();
        let mut lp = LinearProgram::new(objective, bounds);
        // A box in row form keeps the problem bounded.
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lp.push(Constraint::le(e.clone(), rng.int(1, 4) as f64));
            lp.push(Constraint::ge(e, -(rng.int(1, 4) as f64)));
        }
        let sol = solve_lp(&lp, None).unwrap();
        if sol.status == LpStatus::Optimal {
            assert_certified(&lp, &sol);
            // reference: same LP with the row box moved into the bounds
            let mut boxed = lp.clone();
            for j in 0..n {
                let hi = lp.constraints[2 * j].rhs.min(lp.bounds[j].upper);
                let lo = lp.constraints[2 * j + 1].rhs.max(lp.bounds[j].lower);
                boxed.bounds[j] = Bound::new(lo, hi);
            }
            let (v, _) = lp_vertex_min(&boxed).unwrap();
            assert!((v - sol.objective).abs() < 1e-9);
        } else {
            assert_eq!(sol.status, LpStatus::Infeasible);
        }
    }
}

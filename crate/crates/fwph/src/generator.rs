//! Seeded synthetic instances.
//!
//! Every covering row `T x + W y + s >= h` carries its own slack column `s`
//! with a high cost and an upper bound of `h`, so any first-stage point has
//! recourse and every `K_s` is bounded. Integer recourse columns are also
//! capped by a first-stage variable (`y_k <= U x_j`), which is where the
//! duality gap comes from.

use fwph_core::lp::{Bound, Constraint, Relation};
use fwph_core::milp::VarKind;
use fwph_core::model::{FirstStageData, ScenarioData, TwoStageProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::native::{write_native, Metadata};

pub const MAX_SCENARIOS: usize = 4;
pub const MAX_FIRST_STAGE: usize = 6;
pub const MAX_SECOND_STAGE: usize = 8;

pub const SLACK_COST: f64 = 50.0;
const INTEGER_CAP: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub scenarios: usize,
    pub n_x: usize,
    pub n_y_int: usize,
    pub n_y_cont: usize,
    /// Covering rows, each with one slack column.
    pub rows: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { scenarios: 3, n_x: 4, n_y_int: 2, n_y_cont: 2, rows: 2 }
    }
}

impl Shape {
    /// A shape that varies with the seed, used for batch families.
    pub fn for_seed(seed: u64) -> Self {
        let s = seed as usize;
        Shape {
            scenarios: 2 + s % 3,
            n_x: 2 + s % 5,
            n_y_int: 1 + s % 3,
            n_y_cont: 1 + (s / 3) % 2,
            rows: 1 + (s / 2) % 2,
        }
    }

    pub fn n_y(&self) -> usize {
        self.n_y_int + self.n_y_cont + self.rows
    }

    pub fn check(&self) -> Result<(), String> {
        if !(1..=MAX_SCENARIOS).contains(&self.scenarios) {
            return Err(format!("scenarios must be in 1..={MAX_SCENARIOS}"));
        }
        if !(1..=MAX_FIRST_STAGE).contains(&self.n_x) {
            return Err(format!("first-stage size must be in 1..={MAX_FIRST_STAGE}"));
        }
        if self.rows == 0 {
            return Err("at least one covering row is needed".into());
        }
        if self.n_y() > MAX_SECOND_STAGE {
            return Err(format!("at most {MAX_SECOND_STAGE} second-stage variables, slacks included"));
        }
        Ok(())
    }
}

fn int(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    f64::from(rng.gen_range(lo..=hi))
}

/// Deterministic in `seed` on every platform: all random draws are integers.
pub fn generate(seed: u64, shape: &Shape) -> Result<TwoStageProblem, String> {
    shape.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = shape.n_x;
    let (ni, nc, m) = (shape.n_y_int, shape.n_y_cont, shape.rows);
    let ny = shape.n_y();

    let c: Vec<f64> = (0..nx).map(|_| int(&mut rng, 1, 12)).collect();
    let budget = int(&mut rng, 1, nx as i32);
    let first = FirstStageData {
        c,
        rows: vec![Constraint::le(vec![1.0; nx], budget)],
        bounds: vec![Bound::BINARY; nx],
        kinds: vec![VarKind::Binary; nx],
    };

    // Shared technology and recourse structure.
    let t_cover: Vec<Vec<f64>> = (0..m).map(|_| (0..nx).map(|_| int(&mut rng, 0, 4)).collect()).collect();
    let w_cover: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..ni + nc).map(|_| int(&mut rng, 0, 3)).collect();
            row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    let link: Vec<usize> = (0..ni).map(|_| rng.gen_range(0..nx)).collect();
    let q_int: Vec<f64> = (0..ni).map(|_| int(&mut rng, 1, 8)).collect();

    let weights: Vec<f64> = (0..shape.scenarios).map(|_| int(&mut rng, 1, 4)).collect();
    let total: f64 = weights.iter().sum();
    let mut scenarios = Vec::with_capacity(shape.scenarios);
    for &wgt in &weights {
        let h: Vec<f64> = (0..m).map(|_| int(&mut rng, 3, 12)).collect();
        let mut q = q_int.clone();
        q.extend((0..nc).map(|_| int(&mut rng, 1, 6)));
        q.extend(std::iter::repeat_n(SLACK_COST, m));

        let mut w = w_cover.clone();
        let mut t = t_cover.clone();
        let mut relations = vec![Relation::GreaterEq; m];
        let mut rhs = h.clone();
        for (k, &j) in link.iter().enumerate() {
            let mut wr = vec![0.0; ny];
            wr[k] = 1.0;
            let mut tr = vec![0.0; nx];
            tr[j] = -INTEGER_CAP;
            w.push(wr);
            t.push(tr);
            relations.push(Relation::LessEq);
            rhs.push(0.0);
        }
        let mut y_bounds = vec![Bound::new(0.0, INTEGER_CAP); ni];
        y_bounds.extend(std::iter::repeat_n(Bound::new(0.0, 5.0), nc));
        y_bounds.extend(h.iter().map(|&hi| Bound::new(0.0, hi)));
        let mut y_kinds = vec![VarKind::Integer; ni];
        y_kinds.extend(std::iter::repeat_n(VarKind::Continuous, nc + m));
        scenarios.push(ScenarioData {
            probability: wgt / total,
            q,
            w,
            t,
            h: rhs,
            relations,
            y_bounds,
            y_kinds,
        });
    }
    Ok(TwoStageProblem { first, scenarios })
}

/// The instance together with its native document.
pub fn generate_instance(seed: u64, shape: &Shape) -> Result<(TwoStageProblem, String), String> {
    let problem = generate(seed, shape)?;
    let meta = Metadata { name: format!("gen-{seed}"), ..Metadata::default() };
    let doc = write_native(&problem, &meta);
    Ok((problem, doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::native::parse_native;

    #[test]
    fn deterministic_and_valid() {
        for seed in 0..20 {
            let shape = Shape::for_seed(seed);
            let (a, doc) = generate_instance(seed, &shape).unwrap();
            assert_eq!(a, generate(seed, &shape).unwrap());
            assert!(a.validate().is_ok(), "{}", a.validate());
            assert!(a.validate().warnings().next().is_none());
            assert_eq!(parse_native(&doc).unwrap().problem, a);
        }
    }

    #[test]
    fn shapes_respect_caps() {
        for seed in 0..50 {
            Shape::for_seed(seed).check().unwrap();
        }
        let too_big = Shape { n_y_int: 4, n_y_cont: 3, rows: 2, ..Shape::default() };
        assert!(generate(0, &too_big).is_err());
    }
}

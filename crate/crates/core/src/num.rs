//! Small numeric helpers shared by every solver layer.
//!
//! Reductions that feed reported quantities (consensus averages, bound sums,
//! residuals) go through [`NeumaierSum`] and are always evaluated in a fixed
//! order, so traces are bit-reproducible regardless of how scenario work was
//! scheduled.

use alloc::vec::Vec;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(x, y)| x * y))
}

pub fn norm2_sq(a: &[f64]) -> f64 {
    sum(a.iter().map(|x| x * x))
}

pub fn dist2_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)))
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Probability-weighted average of equally sized vectors, component by
/// component with compensated accumulation in the order given.
pub fn weighted_mean(weights: &[f64], vectors: &[&[f64]]) -> Vec<f64> {
    debug_assert_eq!(weights.len(), vectors.len());
    let n = vectors.first().map_or(0, |v| v.len());
    let mut acc = alloc::vec![NeumaierSum::new(); n];
    for (w, v) in weights.iter().zip(vectors) {
        for (a, x) in acc.iter_mut().zip(v.iter()) {
            a.add(w * x);
        }
    }
    acc.iter().map(NeumaierSum::value).collect()
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. `a` is row-major `n x n`. `None` when a pivot falls below
/// `pivot_tol` times the largest entry of its column.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], pivot_tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for k in 0..n {
        let mut p = k;
        let mut big = 0.0f64;
        for i in k..n {
            let v = a[i * n + k].abs();
            if v > big {
                big = v;
                p = i;
            }
        }
        if big <= pivot_tol {
            return None;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[i * n + c] -= f * a[k * n + c];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k * n + c] * x[c];
        }
        x[k] = s / a[k * n + k];
    }
    Some(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}
